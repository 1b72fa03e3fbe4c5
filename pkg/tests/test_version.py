import re
from pathlib import Path

import dsperfect
from dsperfect._version import VERSION_INFO
from dsperfect.cli import main


def test_version_matches_pyproject():
    pyproject = Path(__file__).resolve().parents[1] / 'pyproject.toml'
    text = pyproject.read_text(encoding='utf-8')
    m = re.search(r'^version\s*=\s*"([0-9]+\.[0-9]+\.[0-9]+)"', text, re.MULTILINE)
    assert m, 'pyproject.toml 中没有 version'
    assert m.group(1) == dsperfect.__version__, f"不一致: pyproject={m.group(1)} package={dsperfect.__version__}"
    assert tuple(int(x) for x in m.group(1).split('.')) == VERSION_INFO


def test_cli_version_flag(capsys):
    try:
        main(["--version"])
    except SystemExit as exc:
        assert exc.code == 0
    assert dsperfect.get_version() in capsys.readouterr().out
