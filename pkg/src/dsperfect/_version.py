"""版本号; 发布时同步修改 pyproject.toml, 两者由 tests/test_version.py 校验一致。"""
from typing import Tuple

__all__ = ["__version__", "VERSION_INFO", "get_version"]

VERSION_INFO: Tuple[int, int, int] = (0, 1, 0)
__version__ = ".".join(str(x) for x in VERSION_INFO)


def get_version() -> str:
    """流水线报告 final.version 与 `dsperfect --version` 使用的版本串。"""
    return __version__
