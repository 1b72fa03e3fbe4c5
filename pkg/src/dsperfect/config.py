"""流水线配置: 默认值 < key=value 配置文件 < DSPERFECT_<KEY> 环境变量

配置文件示例::

    # 外部引用的 γ14 上界
    gamma_bound = 2.776
    nonneg_horizon = 40
    data_dir = /srv/dsperfect/data
"""
from __future__ import annotations
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union
import os

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .constants import GAMMA14_BOUND, KISSING_BOUND_14, S_LOWER_BOUND_14
from .utils import logger, parse_rational

__all__ = ["PipelineConfig", "load_config", "parse_config_text", "ENV_PREFIX"]

ENV_PREFIX = "DSPERFECT_"


def _default_data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


class PipelineConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, validate_assignment=True)

    gamma_bound: Fraction = Field(default=GAMMA14_BOUND, description="γ14 上界")
    kissing_bound: int = Field(default=KISSING_BOUND_14, ge=1, description="半亲吻数上界 s")
    s_lower_bound: int = Field(default=S_LOWER_BOUND_14, ge=1, description="4-设计给出的 s 下界")
    nonneg_horizon: int = Field(default=40, ge=1, description="θ 系数非负性检查的下标上限")
    mass_ceiling: Fraction = Field(default=Fraction(5 * 10 ** 10), description="亏格质量超过该值时拒绝枚举")
    universal_bound_factor: int = Field(default=2, ge=1, description="万有完美检查到 factor·n·min 为止")
    descent_budget: int = Field(default=500000, ge=1, description="子格下降节点预算")
    genus_budget: int = Field(default=20000, ge=1, description="亏格枚举邻格预算")
    data_dir: Path = Field(default_factory=_default_data_dir)
    workers: int = Field(default=1, ge=1, description="保留字段; 各阶段目前顺序执行")
    run_slow: bool = Field(default=False, description="是否运行 s=450 全部亏格枚举与完整下降")

    @field_validator('gamma_bound', 'mass_ceiling', mode='before')
    def _rational(cls, v: Any):
        if isinstance(v, str):
            return parse_rational(v)
        if isinstance(v, float):
            raise ValueError('有理数配置请写成字符串 (如 "2.776" 或 "347/125")')
        return Fraction(v)

    @field_validator('gamma_bound', 'mass_ceiling')
    def _positive(cls, v: Fraction):
        if v <= 0:
            raise ValueError('界必须为正')
        return v

    def to_dict(self) -> Dict[str, str]:
        out: Dict[str, str] = {}
        for key, value in self.model_dump().items():
            out[key] = str(value)
        return out


def parse_config_text(text: str) -> Dict[str, str]:
    """解析 key=value 文本; `#` 之后为注释, 空行忽略。"""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ValueError(f"配置第 {lineno} 行缺少 '=': {raw!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ValueError(f"配置第 {lineno} 行键名为空")
        values[key.lower()] = value
    return values


def load_config(path: Optional[Union[str, Path]] = None, env: bool = True, **overrides: Any) -> PipelineConfig:
    """按 默认值 → 配置文件 → 环境变量 → 显式参数 的顺序合并配置。"""
    fields = set(PipelineConfig.model_fields)
    values: Dict[str, Any] = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        for key, value in parse_config_text(text).items():
            if key not in fields:
                raise ValueError(f"未知配置项: {key}")
            values[key] = value
        logger.debug("读取配置文件 %s: %s", path, sorted(values))
    if env:
        for key in fields:
            raw = os.getenv(ENV_PREFIX + key.upper())
            if raw is not None:
                values[key] = raw
                logger.debug("环境变量覆盖配置 %s=%s", key, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if 'run_slow' in values and isinstance(values['run_slow'], str):
        values['run_slow'] = values['run_slow'].strip().lower() in ('1', 'true', 'yes', 'on')
    return PipelineConfig(**values)
