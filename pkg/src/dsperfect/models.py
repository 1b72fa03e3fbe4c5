"""Pydantic 数据模型定义"""
from __future__ import annotations
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .utils import format_rational

__all__ = [
    "Layer", "SublatticeSpec", "DesignReport", "N2Config", "IntegralityWitness",
    "ParamTriple", "MinimalTypeCase", "CountingSolution", "ExclusionVerdict",
    "JordanConstituent", "LocalSymbol", "GenusSymbol", "DiscriminantForm", "MilgramResult", "GenusEnumeration",
    "DescentResult", "QSeries", "FeasibilityProblem", "FeasibilityResult", "StageResult",
    "PipelineReport",
]

_FRAC = ConfigDict(arbitrary_types_allowed=True)

# ---------------- lattice_core ----------------

class Layer(BaseModel):
    model_config = _FRAC
    norm: Fraction = Field(description="层的范数 a")
    vectors: List[Tuple[int, ...]] = Field(default_factory=list, description="每对 ±v 存一个代表, 首个非零坐标为正")
    antipodal: bool = Field(default=True, description="是否按对称对存储")

    @property
    def count(self) -> int:
        return 2 * len(self.vectors) if self.antipodal else len(self.vectors)

    def summary(self) -> Dict[str, Any]:
        return {'norm': format_rational(self.norm), 'count': self.count}


class SublatticeSpec(BaseModel):
    model_config = _FRAC
    parent: Any = Field(description="父格 Lattice")
    generators: List[Tuple[int, ...]] = Field(description="父格基下的整数生成元")
    basis: List[Tuple[int, ...]] = Field(description="生成元的 Hermite 基")
    index: int = Field(ge=1, description="子格指数, det(sub) = index^2·det(parent)")
    label: str = ""

# ---------------- design_engine ----------------

class DesignReport(BaseModel):
    model_config = _FRAC
    n: int
    s: int = Field(description="半亲吻数")
    m: Fraction = Field(description="最小范数")
    d2_defect: Dict[str, Fraction] = Field(default_factory=dict, description="二阶矩张量减目标的非零分量")
    d4_defect: Dict[str, Fraction] = Field(default_factory=dict, description="四阶矩张量减目标的非零分量")
    spans: bool = True
    is_2design: bool = False
    is_4design: bool = False
    d22_ok: Optional[bool] = None
    is_strongly_perfect: bool = False
    is_dual_strongly_perfect: Optional[bool] = None
    gamma_product: Optional[Fraction] = Field(default=None, description="min(L)·min(L*)")
    universal_checked_up_to: Optional[Fraction] = None
    universal_ok: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"n: {self.n}",
            f"s: {self.s}",
            f"min: {format_rational(self.m)}",
            f"spans: {self.spans}",
            f"2-design: {self.is_2design}",
            f"4-design: {self.is_4design}",
            f"d22: {self.d22_ok}",
            f"strongly_perfect: {self.is_strongly_perfect}",
            f"dual_strongly_perfect: {self.is_dual_strongly_perfect}",
        ]
        if self.gamma_product is not None:
            lines.append(f"gamma: {format_rational(self.gamma_product)}")
        if self.universal_checked_up_to is not None:
            lines.append(f"universal: {self.universal_ok} (verified up to {format_rational(self.universal_checked_up_to)})")
        lines.append(f"d2_defect_entries: {len(self.d2_defect)}")
        lines.append(f"d4_defect_entries: {len(self.d4_defect)}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


class N2Config(BaseModel):
    model_config = _FRAC
    alpha: Tuple[Fraction, ...] = Field(description="α 在原格基对偶坐标下 (即 (b_i, α))")
    alpha_norm: Fraction
    c: Fraction
    members: List[Tuple[int, ...]] = Field(default_factory=list)
    applicable: bool = True
    cardinality_ok: bool = False
    sum_check: bool = False
    note: str = ""


class IntegralityWitness(BaseModel):
    model_config = _FRAC
    d2: Fraction = Field(description="Σ(x,α)^2 (对反极代表求和)")
    d4: Fraction = Field(description="Σ(x,α)^4")
    d42: Fraction = Field(description="(D4 − D2)/12")
    d2_integral: bool
    d4_integral: bool
    d42_integral: bool

    @property
    def all_integral(self) -> bool:
        return self.d2_integral and self.d4_integral and self.d42_integral

# ---------------- param_search ----------------

class ParamTriple(BaseModel):
    model_config = _FRAC
    s: int
    r: Fraction
    n2: int

    def csv_row(self) -> Tuple[int, int, int, int]:
        return (self.n2, self.s, self.r.numerator, self.r.denominator)

    def key(self) -> Tuple[int, int, Fraction]:
        return (self.n2, self.s, self.r)


class MinimalTypeCase(BaseModel):
    model_config = _FRAC
    s1: int
    r_values: List[Fraction]
    n2_values: List[int] = Field(default_factory=list)
    label: Optional[str] = Field(default=None, description="小写字母情形标签 (a)-(p)")
    extras: List[Fraction] = Field(default_factory=list, description="搜索得到但不在打印表中的 r")
    missing: List[Fraction] = Field(default_factory=list, description="打印表该行有但行内各 s1 都未得到的 r")


class CountingSolution(BaseModel):
    model_config = _FRAC
    unknowns: List[str]
    free_params: List[str]
    affine_map: Dict[str, Dict[str, Fraction]] = Field(default_factory=dict, description="未知量 -> {参数名或 '1': 系数}")
    feasible_points: List[Dict[str, int]] = Field(default_factory=list)
    consistent: bool = True
    note: str = ""

    def evaluate(self, params: Dict[str, Fraction]) -> Dict[str, Fraction]:
        out: Dict[str, Fraction] = {}
        for name, expr in self.affine_map.items():
            v = Fraction(0)
            for k, coef in expr.items():
                v += coef if k == '1' else coef * Fraction(params[k])
            out[name] = v
        return out

    def render(self, name: str) -> str:
        expr = self.affine_map[name]
        parts = []
        for k, coef in expr.items():
            if coef == 0:
                continue
            parts.append(format_rational(coef) if k == '1' else f"{format_rational(coef)}*{k}")
        return " + ".join(parts) if parts else "0"


class ExclusionVerdict(BaseModel):
    model_config = _FRAC
    case: str
    excluded: bool
    rule: str = Field(description="触发的规则名; 未排除时为交接标记")
    detail: Dict[str, Any] = Field(default_factory=dict)
    citation: str = ""
    handoff: Optional[str] = Field(default=None, description="'genus' 或 'theta' 阶段")

# ---------------- genus_tools ----------------

class JordanConstituent(BaseModel):
    scale: int = Field(ge=0, description="p 的幂次")
    dim: int = Field(ge=0)
    sign: int = Field(description="ε ∈ {+1, -1}")
    odd: bool = Field(default=False, description="p=2 时是否为奇型 (I 型)")
    oddity: int = Field(default=0, description="p=2 奇型时的迹 mod 8")

    @field_validator('sign')
    def _sign_ok(cls, v: int):
        if v not in (1, -1):
            raise ValueError('sign 仅能为 +1 或 -1')
        return v


class LocalSymbol(BaseModel):
    p: int
    constituents: List[JordanConstituent]

    @property
    def dim(self) -> int:
        return sum(c.dim for c in self.constituents)

    def det_valuation(self) -> int:
        return sum(c.scale * c.dim for c in self.constituents)


class GenusSymbol(BaseModel):
    n: int
    locals: List[LocalSymbol]

    def local(self, p: int) -> Optional[LocalSymbol]:
        return next((s for s in self.locals if s.p == p), None)

    def det(self) -> int:
        d = 1
        for s in self.locals:
            d *= s.p ** s.det_valuation()
        return d

    def is_even(self) -> bool:
        two = self.local(2)
        if two is None:
            return True
        return all(not c.odd for c in two.constituents if c.scale == 0)

    def render(self) -> str:
        """按约定省略幺模分量: 例如 '2^{-1}_3 3^1'。"""
        parts: List[str] = []
        for s in sorted(self.locals, key=lambda x: x.p):
            for c in s.constituents:
                if c.scale == 0 or c.dim == 0:
                    continue
                q = s.p ** c.scale
                exp = f"{{-{c.dim}}}" if c.sign < 0 else f"{c.dim}"
                tok = f"{q}^{exp}"
                if s.p == 2 and c.odd:
                    tok += f"_{c.oddity % 8}"
                parts.append(tok)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


class DiscriminantForm(BaseModel):
    """有限二次型 L*/L: 生成元阶、生成元 (原格基下的有理坐标) 与值矩阵。

    gram[i][i] 为 q(g_i) mod 2 (偶格) 或 mod 1, gram[i][j] 为 b(g_i, g_j) mod 1。
    """
    model_config = _FRAC
    orders: List[int] = Field(default_factory=list)
    generators: List[Tuple[Fraction, ...]] = Field(default_factory=list, description="由符号构造时为空")
    gram: List[List[Fraction]] = Field(default_factory=list)
    even: bool = True

    @property
    def size(self) -> int:
        out = 1
        for m in self.orders:
            out *= m
        return out

    def value(self, a: Tuple[int, ...]) -> Fraction:
        k = len(self.orders)
        v = Fraction(0)
        for i in range(k):
            if a[i]:
                v += a[i] * a[i] * self.gram[i][i]
                for j in range(i + 1, k):
                    if a[j]:
                        v += 2 * a[i] * a[j] * self.gram[i][j]
        mod = 2 if self.even else 1
        return v - mod * (v // mod)


class MilgramResult(BaseModel):
    ok: bool
    signature: int
    oddity_total: int = Field(description="Σ_p excess/oddity mod 8")
    detail: Dict[str, int] = Field(default_factory=dict)


class GenusEnumeration(BaseModel):
    model_config = _FRAC
    symbol: str
    classes: List[Any] = Field(default_factory=list, description="Lattice 对象")
    aut_orders: List[int] = Field(default_factory=list)
    mass: Optional[Fraction] = None
    mass_found: Fraction = Fraction(0)
    complete: bool = False
    refused: bool = False
    note: str = ""

    def summary(self) -> Dict[str, Any]:
        return {
            'symbol': self.symbol,
            'h': len(self.classes),
            'complete': self.complete,
            'mass': format_rational(self.mass) if self.mass is not None else None,
        }


class DescentResult(BaseModel):
    model_config = _FRAC
    survivors: List[Any] = Field(default_factory=list)
    nodes_visited: int = 0
    levels: List[int] = Field(default_factory=list, description="每层去重后的格数量")
    budget_exhausted: bool = False

# ---------------- theta_forms ----------------

class QSeries(BaseModel):
    model_config = _FRAC
    unit: Fraction = Field(description="范数量子 u, 系数 k 对应 q^{k·u}")
    coeffs: List[Fraction] = Field(description="coeffs[k], k = 0..truncation")
    truncation: int = Field(ge=0, description="系数已知的最大下标")

    @field_validator('unit')
    def _unit_positive(cls, v: Fraction):
        if v <= 0:
            raise ValueError('unit 必须为正')
        return v

    def coeff(self, k: int) -> Fraction:
        if k > self.truncation:
            raise ValueError(f"下标 {k} 超出截断 {self.truncation}")
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def at_norm(self, a: Fraction) -> Fraction:
        k = Fraction(a) / self.unit
        if k.denominator != 1:
            return Fraction(0)
        return self.coeff(int(k))

    def valuation(self) -> Optional[int]:
        return next((k for k, c in enumerate(self.coeffs[: self.truncation + 1]) if c != 0), None)

    def to_text(self) -> str:
        lines = [f"unit {format_rational(self.unit)}", f"truncation {self.truncation}"]
        for k in range(self.truncation + 1):
            c = self.coeff(k)
            if c != 0:
                lines.append(f"{k} {format_rational(c)}")
        return "\n".join(lines) + "\n"


class FeasibilityProblem(BaseModel):
    model_config = _FRAC
    base: QSeries
    basis: List[QSeries] = Field(default_factory=list, description="尖形式基")
    constraints: List[Tuple[int, Fraction]] = Field(default_factory=list, description="(下标, 要求值)")
    image_base: Optional[QSeries] = Field(default=None, description="Fricke 像的底级数")
    image_basis: List[QSeries] = Field(default_factory=list)
    image_constraints: List[Tuple[int, Fraction]] = Field(default_factory=list)
    nonneg_horizon: int = 40
    even_from: Optional[int] = Field(default=1, description="从该下标起要求系数为偶数; None 表示不要求")


class FeasibilityResult(BaseModel):
    model_config = _FRAC
    consistent: bool
    particular: List[Fraction] = Field(default_factory=list, description="一个特解的基系数")
    directions: List[List[Fraction]] = Field(default_factory=list, description="解空间方向")
    feasible: bool = False
    point: Optional[List[Fraction]] = None
    witness: Dict[str, Any] = Field(default_factory=dict, description="不可行证据")
    negative_index: Optional[int] = None
    integral: Optional[bool] = Field(default=None, description="True 找到系数为整/偶的成员; False 证明可行集中没有; None 搜索未穷尽, 仅有理可行")

# ---------------- cli_pipeline ----------------

class StageResult(BaseModel):
    stage: str
    verdict: str = Field(description="reproduced | contradiction-confirmed | external-data-needed | discrepancy | budget-limited")
    citation: str = ""
    detail: Dict[str, Any] = Field(default_factory=dict)
    artifacts: List[str] = Field(default_factory=list)

    @field_validator('verdict')
    def _verdict_ok(cls, v: str):
        allowed = {'reproduced', 'contradiction-confirmed', 'external-data-needed', 'discrepancy', 'budget-limited'}
        if v not in allowed:
            raise ValueError(f'未知阶段结论: {v}')
        return v


class PipelineReport(BaseModel):
    mode: str
    stages: List[StageResult] = Field(default_factory=list)
    final: Dict[str, Any] = Field(default_factory=dict)

    def summary(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for st in self.stages:
            out[st.verdict] = out.get(st.verdict, 0) + 1
        return out

    @property
    def has_discrepancy(self) -> bool:
        return any(st.verdict == 'discrepancy' for st in self.stages)

    def to_text(self) -> str:
        lines = [f"mode: {self.mode}"]
        for st in self.stages:
            lines.append(f"[{st.verdict}] {st.stage} ({st.citation})")
            for k in sorted(st.detail):
                lines.append(f"    {k}: {st.detail[k]}")
        for k in sorted(self.final):
            lines.append(f"final.{k}: {self.final[k]}")
        return "\n".join(lines) + "\n"
