"""参数搜索、计数方程组与逐情形排除

- general_type_search: 一般型 (n2, s, r) 三元组, 按 (n2, s) 排序
- minimal_type_search: 最小型 s1 -> r 列表, 附情形标签 (a)-(p)
- admissible_norms / admissible_norm_gcd: 对偶格向量可能范数的有理 gcd, 强制偶标度 c = 2/G
- counting_system: 对称构形 0/2/4 阶矩方程组的仿射解族与可行整点
- exclusion_report: 一般型三元组、最小型情形标签与 (s1, t1) 对的排除规则
"""
from __future__ import annotations
from fractions import Fraction
from math import floor, gcd, isqrt, prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .catalog import s32_block_choices, s32_gram
from .constants import (
    GAMMA14_BOUND, KISSING_BOUND_14, MINIMAL_A, MINIMAL_PAIR_SUM_BOUND, MINIMAL_SURVIVOR_S,
    MINIMAL_TYPE_TABLE, S_LOWER_BOUND_14,
)
from .design_engine import antipodal_bound, design_constant, n2_bound, n2_constant
from .lattice_core import det_bounds, dual_subset_divisor, square_class
from .linalg import determinant, rref
from .models import CountingSolution, ExclusionVerdict, MinimalTypeCase, ParamTriple
from .utils import RationalLike, as_fraction, format_rational, logger, render_table, valuation, write_csv

__all__ = [
    "n2_value", "minimal_type_marker", "general_type_search", "minimal_type_search",
    "admissible_norms", "admissible_norm_gcd", "counting_system", "moment_residuals",
    "exclusion_report", "general_report", "minimal_case_report", "minimal_pair_report",
    "minimal_pair_grid", "triples_table", "minimal_cases_table",
]

CountSpec = Union[None, int, Fraction, Tuple[str, int]]

# 单侧已被排除的 s1 (对应情形 f, g, i, k, l, o)
SINGLE_SIDE_EXCLUDED: Tuple[int, ...] = (25, 27, 48, 50, 54, 75)


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _frac_gcd(x: Fraction, y: Fraction) -> Fraction:
    return Fraction(gcd(x.numerator * y.denominator, y.numerator * x.denominator), x.denominator * y.denominator)

# ---------------- 一般型搜索 ----------------

def n2_value(s: int, r: RationalLike, n: int = 14) -> Fraction:
    """n2 = s·r(3r − (n+2)) / (12n(n+2))。"""
    r = as_fraction(r)
    return Fraction(s) * r * (3 * r - (n + 2)) / (12 * n * (n + 2))


def minimal_type_marker(n: int = 14) -> Fraction:
    return Fraction(n + 2, 3)


def _general_root(n: int, s: int, n2: int) -> Optional[Fraction]:
    disc = Fraction((n + 2) ** 2) + Fraction(144 * n * (n + 2) * n2, s)
    root = _rational_sqrt(disc)
    if root is None:
        return None
    return ((n + 2) + root) / 6


def general_type_search(
    n: int = 14,
    s_range: Optional[Tuple[int, int]] = None,
    gamma_bound: RationalLike = GAMMA14_BOUND,
    kissing_bound: int = KISSING_BOUND_14,
    s_lower_bound: int = S_LOWER_BOUND_14,
) -> List[ParamTriple]:
    """枚举 (s, n2) 网格, 由二次方程解出 r 并筛选。

    条件: (n+2)/3 < r ≤ γ², r ≤ 8 时 n2 ≤ n2_bound(r), sr/n 与 3sr²/(n(n+2)) 为整数。
    结果按 (n2, s) 排序; 最小型标记 r = (n+2)/3 由 minimal_type_marker 单独给出。
    """
    lo, hi = s_range if s_range is not None else (s_lower_bound, kissing_bound)
    hi = min(hi, kissing_bound)
    r_max = as_fraction(gamma_bound) ** 2
    marker = minimal_type_marker(n)
    if hi < lo or r_max <= marker:
        return []
    cap = floor(hi * r_max * (3 * r_max - (n + 2)) / (12 * n * (n + 2)))
    logger.info("一般型搜索: n=%d s∈[%d,%d] n2≤%d", n, lo, hi, cap)
    rows: List[ParamTriple] = []
    for s in range(lo, hi + 1):
        for n2 in range(2, cap + 1):
            r = _general_root(n, s, n2)
            if r is None or not (marker < r <= r_max):
                continue
            if r <= 8 and n2 > n2_bound(n, r):
                continue
            if (s * r / n).denominator != 1 or (3 * s * r * r / (n * (n + 2))).denominator != 1:
                continue
            rows.append(ParamTriple(s=s, r=r, n2=n2))
    rows.sort(key=lambda t: (t.n2, t.s))
    logger.info("一般型搜索得到 %d 行", len(rows))
    return rows

# ---------------- 最小型搜索 ----------------

def _minimal_root(s1: int, n2: int) -> Optional[Fraction]:
    root = _rational_sqrt(Fraction(256) + Fraction(1536 * n2, s1))
    return None if root is None else (16 + root) / 6


def minimal_type_search(n: int = 14, s1_range: Tuple[int, int] = (5, 83)) -> List[MinimalTypeCase]:
    """n2 = s1·r(3r−16)/2^7, 16/3 < r ≤ 32/3; r < 8 时 n2 ≤ r/(8−r), r = 8 时 n2 ≤ 26, r > 8 不设界。"""
    if n != 14:
        raise ValueError("最小型搜索仅实现 n = 14")
    lo, hi = s1_range
    found: Dict[int, List[Tuple[Fraction, int]]] = {}
    for s1 in range(lo, hi + 1):
        for n2 in range(1, (4 * s1) // 3 + 1):
            r = _minimal_root(s1, n2)
            if r is None or not (Fraction(16, 3) < r <= Fraction(32, 3)):
                continue
            if r <= 8 and n2 > n2_bound(n, r):
                continue
            found.setdefault(s1, []).append((r, n2))
    label_of = {s1: label for label, (s1s, _) in MINIMAL_TYPE_TABLE.items() for s1 in s1s}
    # 打印表每行的 r 集是该行各 s1 的并集
    row_found: Dict[str, set] = {}
    for s1, pairs in found.items():
        if s1 in label_of:
            row_found.setdefault(label_of[s1], set()).update(r for r, _ in pairs)
    cases: List[MinimalTypeCase] = []
    for s1 in sorted(found):
        pairs = sorted(found[s1])
        rs = [r for r, _ in pairs]
        label = label_of.get(s1)
        printed = list(MINIMAL_TYPE_TABLE[label][1]) if label else []
        case = MinimalTypeCase(
            s1=s1, r_values=rs, n2_values=[k for _, k in pairs], label=label,
            extras=[r for r in rs if r not in printed],
            missing=[r for r in printed if r not in row_found.get(label, set())],
        )
        if case.extras or case.missing:
            logger.warning("s1=%d: 搜索结果与打印表不一致 (多出 %s, 缺少 %s)", s1,
                           [format_rational(r) for r in case.extras], [format_rational(r) for r in case.missing])
        cases.append(case)
    return cases

# ---------------- 可能范数 ----------------

def _admissible_residues(K2: Fraction, K4: Fraction, q: int, M: int) -> List[int]:
    a2, b2, a4, b4 = K2.numerator, K2.denominator, K4.numerator, K4.denominator
    mod42 = 12 * b4 * b2 * q * q
    if (a4 * b2 + a2 * b4 * q) * M * M < 2 ** 62:
        p = np.arange(1, M + 1, dtype=np.int64)
        ok = np.gcd(p, q) == 1
        ok &= (a2 * p) % (b2 * q) == 0
        ok &= (a4 * p * p) % (b4 * q * q) == 0
        ok &= (a4 * b2 * p * p - a2 * b4 * p * q) % mod42 == 0
        return [int(x) for x in p[ok]]
    return [
        p for p in range(1, M + 1)
        if gcd(p, q) == 1 and (a2 * p) % (b2 * q) == 0 and (a4 * p * p) % (b4 * q * q) == 0
        and (a4 * b2 * p * p - a2 * b4 * p * q) % mod42 == 0
    ]


def admissible_norms(s: int, n: int = 14, m: RationalLike = 1) -> Dict[int, Tuple[int, List[int]]]:
    """对偶格向量 α 的可能范数 p/q: D2, D4, (D4−D2)/12 均为整数。

    q 取遍 q² | num(3sm²/(n(n+2))); 返回 q -> (周期 M_q = 12q²L, 一个周期内的 p)。
    """
    m = as_fraction(m)
    K2 = Fraction(s) * m / n
    K4 = 3 * Fraction(s) * m * m / (n * (n + 2))
    L = K2.denominator * K4.denominator // gcd(K2.denominator, K4.denominator)
    out: Dict[int, Tuple[int, List[int]]] = {}
    for q in range(1, isqrt(K4.numerator) + 1):
        if K4.numerator % (q * q):
            continue
        M = 12 * q * q * L
        ps = _admissible_residues(K2, K4, q, M)
        if ps:
            out[q] = (M, ps)
    return out


def admissible_norm_gcd(s: int, n: int = 14, m: RationalLike = 1) -> Optional[Fraction]:
    """所有可能范数的有理 gcd G; 于是 (2/G)·Λ* 为偶格。无可能范数时返回 None。"""
    G: Optional[Fraction] = None
    for q, (M, ps) in admissible_norms(s, n, m).items():
        g = M
        for p in ps:
            g = gcd(g, p)
        term = Fraction(g, q)
        G = term if G is None else _frac_gcd(G, term)
    return G


def _scaled_norms(profile: Dict[int, Tuple[int, List[int]]], c: Fraction) -> List[Fraction]:
    return [c * Fraction(p, q) for q, (_, ps) in profile.items() for p in ps]


def _is_admissible(profile: Dict[int, Tuple[int, List[int]]], r: Fraction) -> bool:
    entry = profile.get(r.denominator)
    if entry is None:
        return False
    M, ps = entry
    res = r.numerator % M or M
    return res in ps

# ---------------- 计数方程组 ----------------

def _weights(i: Fraction, squared: bool) -> Tuple[Fraction, Fraction]:
    return (i, i * i) if squared else (i * i, i ** 4)


def moment_residuals(
    norm: RationalLike,
    values: Dict[RationalLike, RationalLike],
    N: RationalLike,
    n: int = 14,
    probe_norm: Optional[RationalLike] = None,
    squared: bool = False,
) -> Tuple[Fraction, Fraction, Fraction]:
    """把计数 {内积: 个数} 代回 0/2/4 阶矩方程, 返回三个残差。"""
    m = as_fraction(norm)
    P = m if probe_norm is None else as_fraction(probe_norm)
    N = as_fraction(N)
    e0 = Fraction(0)
    e2 = Fraction(0)
    e4 = Fraction(0)
    if probe_norm is None:
        e0, e2, e4 = Fraction(1), m * m, m ** 4
    for i, a in values.items():
        w2, w4 = _weights(as_fraction(i), squared)
        a = as_fraction(a)
        e0 += a
        e2 += w2 * a
        e4 += w4 * a
    return (
        e0 - N,
        e2 - N * m * P / n,
        e4 - 3 * N * m * m * P * P / (n * (n + 2)),
    )


def counting_system(
    norm: RationalLike,
    products: Sequence[RationalLike],
    n: int = 14,
    count: CountSpec = None,
    fixed: Optional[Dict[str, RationalLike]] = None,
    free: Optional[Sequence[str]] = None,
    probe_norm: Optional[RationalLike] = None,
    names: Optional[Dict[RationalLike, str]] = None,
    bounds: Optional[Dict[str, Tuple[Optional[int], Optional[int]]]] = None,
    even: Iterable[str] = (),
    squared: bool = False,
    max_points: int = 200000,
) -> CountingSolution:
    """N 个范数为 norm 的对称对 (每对计一次) 与探针 α 的内积计数 a_i 满足

        Σ a_i (+1)             = N
        Σ i² a_i (+m²)         = N·m·P/n
        Σ i⁴ a_i (+m⁴)         = 3N·m²·P²/(n(n+2))

    括号项仅当探针本身在层中 (probe_norm 缺省) 时出现, 此时 i = m 不作未知量。
    squared=True 时 products 给出的是内积的平方。count 为 None 时 N 记作未知量 'a';
    为 (名字, 因子) 时 N = 因子·名字。
    """
    m = as_fraction(norm)
    P = m if probe_norm is None else as_fraction(probe_norm)
    self_term = probe_norm is None
    fixed = {k: as_fraction(v) for k, v in (fixed or {}).items()}
    bounds = dict(bounds or {})
    even = set(even)
    names = {as_fraction(k): v for k, v in (names or {}).items()}

    prods = sorted({as_fraction(i) for i in products})
    if self_term:
        prods = [i for i in prods if i != m]
    name_of = {i: names.get(i, f"a{format_rational(i)}") for i in prods}

    n_param: Optional[str] = None
    n_factor = Fraction(1)
    n_const: Optional[Fraction] = None
    if count is None:
        n_param = 'a'
    elif isinstance(count, tuple):
        n_param, n_factor = count[0], as_fraction(count[1])
    else:
        n_const = as_fraction(count)

    k2 = m * P / n
    k4 = 3 * m * m * P * P / (n * (n + 2))
    # 列: 未知量名 -> (E0, E2, E4) 系数
    col_coef: Dict[str, Tuple[Fraction, Fraction, Fraction]] = {}
    rhs = [Fraction(0), Fraction(0), Fraction(0)]
    if self_term:
        rhs = [Fraction(-1), -m * m, -m ** 4]
    for i in prods:
        w2, w4 = _weights(i, squared)
        name = name_of[i]
        if name in fixed:
            v = fixed[name]
            rhs = [rhs[0] - v, rhs[1] - w2 * v, rhs[2] - w4 * v]
        else:
            col_coef[name] = (Fraction(1), w2, w4)
    if n_param is not None:
        if n_param in fixed:
            n_const = n_factor * fixed[n_param]
        else:
            col_coef[n_param] = (-n_factor, -n_factor * k2, -n_factor * k4)
    if n_const is not None:
        rhs = [rhs[0] + n_const, rhs[1] + n_const * k2, rhs[2] + n_const * k4]

    if free is not None:
        preferred = [f for f in free if f in col_coef]
    else:
        preferred = [name_of[prods[-1]]] if prods and name_of[prods[-1]] in col_coef else []
        if n_param is not None and n_param in col_coef and n_param != 'a':
            preferred.append(n_param)
    cols = [name_of[i] for i in prods if name_of[i] in col_coef and name_of[i] not in preferred]
    if n_param == 'a' and 'a' in col_coef and 'a' not in preferred:
        cols.append('a')
    cols += preferred

    A = [[col_coef[c][k] for c in cols] + [rhs[k]] for k in range(3)]
    R, pivots = rref(A)
    unknowns = [name_of[i] for i in prods] + ([n_param] if n_param == 'a' else [])
    if len(cols) in pivots:
        logger.info("计数方程组无解: 范数 %s, 内积 %s", format_rational(m), [format_rational(i) for i in prods])
        return CountingSolution(unknowns=unknowns, free_params=[], consistent=False, note="no design possible: 方程组不相容")

    free_params = [c for k, c in enumerate(cols) if k not in pivots]
    amap: Dict[str, Dict[str, Fraction]] = {}
    for row, k in enumerate(pivots):
        expr = {'1': R[row][-1]}
        for f in free_params:
            coef = -R[row][cols.index(f)]
            if coef:
                expr[f] = coef
        amap[cols[k]] = expr
    for f in free_params:
        amap[f] = {f: Fraction(1)}
    for name, v in fixed.items():
        amap[name] = {'1': v}
    if n_param is not None and n_param != 'a':
        amap['N'] = {k: n_factor * c for k, c in amap[n_param].items()}

    sol = CountingSolution(unknowns=unknowns, free_params=free_params, affine_map=amap)
    sol.feasible_points = _feasible_points(sol, bounds, even, max_points)
    if not sol.feasible_points:
        sol.note = "在给定约束下无非负整数解"
    return sol


def _param_range(name: str, bounds: Dict[str, Tuple[Optional[int], Optional[int]]], even: set) -> range:
    lo, hi = bounds.get(name, (0, None))
    lo = 0 if lo is None else lo
    if hi is None:
        raise ValueError(f"自由参数 {name} 需要给出上界")
    if name in even and lo % 2:
        lo += 1
    return range(lo, hi + 1, 2 if name in even else 1)


def _feasible_points(
    sol: CountingSolution,
    bounds: Dict[str, Tuple[Optional[int], Optional[int]]],
    even: set,
    max_points: int,
) -> List[Dict[str, int]]:
    ranges = [_param_range(f, bounds, even) for f in sol.free_params]
    total = prod(len(r) for r in ranges) if ranges else 1
    if total > max_points:
        raise ValueError(f"可行点枚举规模 {total} 超过上限 {max_points}")
    points: List[Dict[str, int]] = []
    grid = np.array(np.meshgrid(*ranges, indexing='ij')).reshape(len(ranges), -1).T if ranges else [()]
    for row in grid:
        params = {f: Fraction(int(v)) for f, v in zip(sol.free_params, row)}
        values = sol.evaluate(params)
        ok = True
        for name, v in values.items():
            lo, hi = bounds.get(name, (0, None))
            lo = 0 if lo is None else lo
            if v.denominator != 1 or v < lo or (hi is not None and v > hi) or (name in even and v.numerator % 2):
                ok = False
                break
        if ok:
            points.append({k: int(v) for k, v in values.items()})
    return points


def _always_negative(sol: CountingSolution) -> Optional[str]:
    """某未知量常数项 < 0 且所有 (非负) 参数系数 ≤ 0 时, 恒为负。"""
    for name in sol.unknowns:
        expr = sol.affine_map.get(name, {})
        if expr.get('1', 0) < 0 and all(c <= 0 for k, c in expr.items() if k != '1'):
            return name
    return None

# ---------------- 一般型排除规则 ----------------

def _tight(n2: int, r: Fraction) -> bool:
    return r < 8 and Fraction(n2) == r / (8 - r)


def _trace3_applies(s: int, n: int, c: Fraction, norms: List[Fraction]) -> bool:
    mu = 1 / c
    K = Fraction(s) * mu * mu / (n * (n + 2))
    return K.denominator == 3 and any(valuation(x, 3) == 0 for x in norms)


def _integral_norm_setup(s: int, n: int, c: Fraction, profile) -> Tuple[Fraction, List[Fraction], bool]:
    mu = 1 / c
    K = Fraction(s) * mu * mu / (n * (n + 2))
    norms = _scaled_norms(profile, c)
    ok = (
        K.denominator == 1
        and all(x.numerator % 2 == 0 for x in norms if x.denominator == 1)
        and {x.denominator for x in norms} <= {1, 3}
    )
    return K, norms, ok


def general_report(
    triple: ParamTriple,
    dual: bool = False,
    n: int = 14,
    gamma_bound: RationalLike = GAMMA14_BOUND,
) -> ExclusionVerdict:
    """依次应用一般型排除规则; 都不触发时, dual=True 再应用对偶强完美的规则。"""
    s, r, n2 = triple.s, triple.r, triple.n2
    gamma = as_fraction(gamma_bound)
    case = f"s={s}, r={format_rational(r)}"
    profile = admissible_norms(s, n)
    G = admissible_norm_gcd(s, n)
    detail: Dict[str, object] = {"n2": n2, "G": G}

    def verdict(rule: str, citation: str, **extra) -> ExclusionVerdict:
        detail.update(extra)
        logger.info("%s: 规则 %s 触发", case, rule)
        return ExclusionVerdict(case=case, excluded=True, rule=rule, detail=detail, citation=citation)

    if G is None or not _is_admissible(profile, r):
        return verdict("even_scaling", "r 不满足整性条件 (D2)/(D4)/(D4−D2)/12", r_admissible=False)
    c = 2 / G
    detail["c"] = c
    if 1 / c > c * r:
        return verdict(
            "even_scaling", "偶格 Γ = √c·Λ* 满足 min Γ* ≤ min Γ",
            min_gamma=c * r, min_gamma_dual=1 / c,
        )

    norms = _scaled_norms(profile, c)
    upper = (gamma * c) ** n
    if _trace3_applies(s, n, c, norms) and 3 ** (n - 2) > upper:
        return verdict("trace3_det_bound", "迹 3 子格给出 3^(n−2) ≤ det Γ ≤ (γ·c)^n", lower=3 ** (n - 2), upper=upper)

    K, _, ok = _integral_norm_setup(s, n, 2 / r, profile)
    if ok and r / 2 > 2:
        return verdict(
            "integral_norm_sublattice", "范数整的偶子格: min Γ = 2 而 min Γ* > 2",
            K=K, scaling=2 / r, min_gamma_dual=r / 2,
        )
    K, _, ok = _integral_norm_setup(s, n, 4 / r, profile)
    if ok and n2 >= 3 and r / 4 < 2:
        return verdict(
            "n2_pairing", "min Γ = 4 时 N₂ 中的向量两两配对, 与 min Γ* < 2 矛盾",
            K=K, scaling=4 / r, min_gamma_dual=r / 4,
        )

    if _tight(n2, r) and n2 > n:
        return verdict("tight_rank", "|N₂| 取到上界时 N₂ 线性无关, 个数不超过 n", bound=r / (8 - r))
    if _tight(n2, r):
        mu = 1 / c
        F = [[mu / 2 * (1 + (i == j)) for j in range(n2)] for i in range(n2)]
        D = dual_subset_divisor(F)
        detail.update(simplex_divisor=D, upper=upper)
        if D > upper:
            return verdict("n2_simplex", "N₂ 单形的初等因子分母之积整除 det Γ, 超过上界")
        root = isqrt(D)
        if D <= upper < 2 * D and root * root == D and n % 8:
            return verdict(
                "n2_simplex", "det Γ 被迫等于平方数 D, 给出维数 n ≢ 0 mod 8 的偶幺模上格",
                forced_det=D,
            )

    if not dual:
        return ExclusionVerdict(case=case, excluded=False, rule="survivor", detail=detail,
                                citation="一般型排除规则均不适用")

    k = c * c * r
    detail["k"] = k
    if _trace3_applies(s, n, c, norms) and 2 * (n - 2) > n * valuation(k, 3):
        return verdict("dual_trace3", "对偶侧迹 3 子格的 3 进赋值不足", v3=valuation(k, 3))
    if s == 672 and r == 6:
        return _five_design_positivity(case, detail, n)
    return ExclusionVerdict(case=case, excluded=False, rule="handoff", detail=detail,
                            citation="交由 θ 级数可行性阶段", handoff="theta")


def _five_design_positivity(case: str, detail: Dict[str, object], n: int) -> ExclusionVerdict:
    """s = 672, r = 6: 范数 6 上的计数与 t = 3 设计正性。"""
    s = 672
    layer = counting_system(6, [6, 3, 2, 1, 0], n=n, count=s, free=['m3'],
                            names={3: 'm3', 2: 'm2', 1: 'm1', 0: 'm0'},
                            bounds={'m3': (0, s)}, even=['m3'])
    m3_values = sorted(p['m3'] for p in layer.feasible_points)
    other = counting_system(6, [24, 6, 0], n=n, count=s, probe_norm=6, squared=True,
                            names={24: 'n2', 6: 'n1', 0: 'n0'})
    sides = other.evaluate({})
    n2v, n1v = sides['n2'], sides['n1']
    rhs = design_constant(n, 3) * 2 * s * 6 ** 6
    survivors = []
    for m3 in m3_values:
        vals = layer.evaluate({'m3': Fraction(m3)})
        lhs = 6 ** 6 + 2 ** 6 * 6 ** 3 * n2v + 6 ** 3 * n1v + 3 ** 6 * vals['m3'] + 2 ** 6 * vals['m2'] + vals['m1']
        if lhs >= rhs:
            survivors.append(m3)
    detail.update(m3_feasible=m3_values, n2_side=n2v, n1_side=n1v, positivity_rhs=rhs, m3_after_positivity=survivors)
    contradictions = []
    for m3 in survivors:
        vals = layer.evaluate({'m3': Fraction(m3)})
        y = m3 // 2
        # 对 Y 中每个 y0: 81 + a1 + 9·a3 ≥ 81·|Y|/(n−1), a1 + a3 = |Y| − 1
        need = (81 * y * design_constant(n - 1, 1) - 81 - (y - 1)) / 8
        a3_min = -((-need.numerator) // need.denominator)
        contradictions.append({"m3": m3, "m0": vals['m0'], "a3_min": a3_min, "contradiction": a3_min > vals['m0']})
    detail["claim"] = contradictions
    excluded = all(c["contradiction"] for c in contradictions)
    logger.info("%s: 5-设计正性检查 m3 候选 %s", case, survivors)
    return ExclusionVerdict(
        case=case, excluded=excluded, rule="five_design_positivity" if excluded else "handoff", detail=detail,
        citation="t = 3 设计正性 Σ(x,y)^6 ≥ c₃|T|²m⁶ 迫使 m3 = 114, 再由 t = 1 正性得 a3 > m0",
        handoff=None if excluded else "theta",
    )

# ---------------- 最小型情形 ----------------

def _case_verdict(case: str, excluded: bool, rule: str, citation: str, detail: Dict[str, object],
                  handoff: Optional[str] = None) -> ExclusionVerdict:
    logger.info("最小型 %s: %s (%s)", case, rule, "排除" if excluded else "保留")
    return ExclusionVerdict(case=case, excluded=excluded, rule=rule, detail=detail, citation=citation, handoff=handoff)


def _solution_detail(sol: CountingSolution) -> Dict[str, object]:
    return {
        "consistent": sol.consistent,
        "solution": {k: sol.render(k) for k in sol.affine_map},
        "feasible_points": len(sol.feasible_points),
        "note": sol.note,
    }


def _norm16_3_case(label: str, s1: int) -> ExclusionVerdict:
    rs = MINIMAL_TYPE_TABLE[label][1]
    products = sorted({(Fraction(32, 3) - r) / 2 for r in rs} | {Fraction(8, 3)})
    cap = KISSING_BOUND_14 - 21 * s1
    sol = counting_system(Fraction(16, 3), [Fraction(16, 3)] + products, free=['a8/3'],
                          bounds={'a8/3': (0, KISSING_BOUND_14), 'a': (0, cap)}, even=['a8/3'])
    detail = _solution_detail(sol)
    detail["a_cap"] = cap
    neg = _always_negative(sol)
    if neg is not None:
        detail["negative"] = neg
        return _case_verdict(f"({label}) s1={s1}", True, "counting_negative", f"计数解中 {neg} 恒为负", detail)
    return _case_verdict(f"({label}) s1={s1}", not sol.feasible_points, "counting_infeasible",
                         f"a ≤ 1746 − 21·s1 = {cap} 时无可行整点", detail)


def _case_s75() -> ExclusionVerdict:
    sol = counting_system(10, [10, 5, 2, 1, 0], count=('t1', 21), free=['a5', 't1'],
                          bounds={'t1': (1, 8), 'a5': (0, 168)})
    t1_values = sorted({p['t1'] for p in sol.feasible_points})
    detail = _solution_detail(sol)
    detail.update(t1_integral=t1_values, t1_in_S=[t for t in t1_values if t in MINIMAL_SURVIVOR_S])
    excluded = not detail["t1_in_S"]
    return _case_verdict("(o) s1=75", excluded, "counting_infeasible",
                         "整性迫使 8 | t1, 而 t1 ≤ 8 且 t1 ∈ S", detail)


def _case_s54() -> ExclusionVerdict:
    sol = counting_system(12, [12, 6, 2, 1, 0], count=('t1', 21), free=['a6', 't1'],
                          bounds={'t1': (1, 29), 'a6': (0, 21 * 29)})
    return _case_verdict("(l) s1=54", not sol.feasible_points, "counting_infeasible",
                         "非负性要求 t1 ≥ 70, 而 t1 ≤ 29", _solution_detail(sol))


def _case_s50() -> ExclusionVerdict:
    probe = counting_system(20, [15, 0], count=('t1', 21), probe_norm=30, bounds={'t1': (0, 32)})
    t1_probe = sorted(p['t1'] for p in probe.feasible_points)
    sol = counting_system(20, [20, 10, 5, 4, 2, 1], count=('t1', 21), fixed={'a5': 0}, free=['a10', 't1'],
                          bounds={'t1': (1, 32), 'a10': (0, 21 * 32)}, even=['a10'])
    points = [(p['t1'], p['a10']) for p in sol.feasible_points]
    detail = _solution_detail(sol)
    detail.update(probe_t1=t1_probe, points=points)
    handed = all(t1 == 27 for t1, _ in points)
    return _case_verdict("(k) s1=50", handed, "counting_reduction",
                         "范数 30 探针只允许 t1 = 0, 故 a5 = 0; 余下唯一可行点 t1 = 27 由 s1 = 27 的排除处理", detail)


def _case_s48() -> ExclusionVerdict:
    first = counting_system(8, [8, 4, 1, 0], count=('t1', 21), bounds={'t1': (1, 83)})
    neg = _always_negative(first)
    second = counting_system(8, [6, 3, 0], count=('t1', 21), probe_norm=12,
                             names={6: 'n6', 3: 'n3', 0: 'n0'}, fixed={'n6': 2}, bounds={'t1': (1, 83)})
    detail = {"system1": _solution_detail(first), "system1_negative": neg, "system2": _solution_detail(second)}
    excluded = neg is not None and not second.feasible_points
    return _case_verdict("(i) s1=48", excluded, "counting_infeasible",
                         "内积 {4,1,0} 时 a0 < 0; 探针 12 时 n6 = 2 迫使 t1 = 3/2", detail)


def _s27_simplex(gamma: Fraction, n: int = 14) -> Dict[str, object]:
    F = [[Fraction(4, 9) * (1 + (i == j)) for j in range(8)] for i in range(8)]
    D = dual_subset_divisor(F)
    upper = (9 * gamma / 8) ** n
    return {"divisor": D, "upper": upper, "forced": D <= upper < 2 * D, "even_unimodular_dim": n}


def _case_s27(gamma: Fraction, n: int = 14) -> ExclusionVerdict:
    cap = KISSING_BOUND_14 - 21 * 27
    sol = counting_system(6, [6, 3, 1, 0], free=['a0'], bounds={'a0': (0, KISSING_BOUND_14), 'a': (0, cap)})
    simplex = _s27_simplex(gamma, n)
    detail = _solution_detail(sol)
    detail.update(a_cap=cap, simplex=simplex)
    excluded = not sol.feasible_points and bool(simplex["forced"]) and n % 8 != 0
    return _case_verdict("(g) s1=27", excluded, "counting_and_simplex",
                         f"范数 6 计数超出 1746 − 567; 单形分母迫使 det = 9^7, 得 {n} 维偶幺模格", detail)


def _case_s25(gamma: Fraction, n: int = 14) -> ExclusionVerdict:
    m = Fraction(8, 15)
    lower = det_bounds(n, 18, 1, gamma)[0]
    upper = det_bounds(n, 1, m, gamma)[1]
    c = n2_constant(525, n, m, 12)
    size = c * 12 / 2
    ip_design = (c * 2 - m) / 3
    ip_relation = (Fraction(12, 9) - 2 * m) / 2
    detail = {"det_lower": lower, "det_upper": upper, "index_3_forced": 9 * upper < lower,
              "c": c, "n2": size, "ip_design": ip_design, "ip_relation": ip_relation}
    excluded = ip_design != ip_relation
    return _case_verdict("(f) s1=25", excluded, "n2_relation",
                         "x1 + x2 = β/3 给出的内积与设计方程给出的内积不等", detail)


def minimal_case_report(label: str, gamma_bound: RationalLike = GAMMA14_BOUND, n: int = 14) -> ExclusionVerdict:
    """最小型情形 (a)-(p) 的排除检查; (a), (e), (h) 留待 (s1, t1) 终局。"""
    if label not in MINIMAL_TYPE_TABLE:
        raise ValueError(f"未知最小型情形: {label!r}")
    gamma = as_fraction(gamma_bound)
    s1s, rs = MINIMAL_TYPE_TABLE[label]
    if label in ('a', 'e', 'h'):
        return _case_verdict(f"({label})", False, "handoff", "进入 (s1, t1) 终局", {"s1": list(s1s)}, handoff="pairs")
    if label == 'b':
        sol = counting_system(4, [4, 2, 1], n=n)
        vals = sol.evaluate({})
        k = n + 2
        odd_square = k % 2 == 1 and isqrt(k) ** 2 == k
        detail = {"solution": {k: format_rational(v) for k, v in vals.items()}, "n_plus_2_odd_square": odd_square}
        tight = vals.get('a2') == 0 and vals.get('a') == n * (n + 1) // 2
        return _case_verdict("(b)", tight and not odd_square, "tight_design",
                             "a2 = 0 时最小向量构成紧 5-设计, 要求 n + 2 为奇平方数", detail)
    if label == 'c':
        # 内积 {±16/3, ±8/3, 0} 重标为 {±2, ±1, 0}: 秩 n 的根系
        sol = counting_system(2, [2, 1, 0], n=n)
        detail = _solution_detail(sol)
        neg = _always_negative(sol)
        detail["negative"] = neg
        return _case_verdict("(c)", neg is not None, "counting_negative",
                             f"根系的 4-设计方程给出 {neg} < 0", detail)
    if label == 'd':
        cap = antipodal_bound(n)
        sol = counting_system(8, [8, 4, 2, 1], n=n, bounds={'a4': (1, cap)}, even=['a4'])
        detail = _solution_detail(sol)
        detail["a4_cap"] = cap
        return _case_verdict("(d)", not sol.feasible_points, "counting_infeasible",
                             f"a1 = 64a4/21 要求 21 | a4, 而 a4 为 1..{cap} 的偶数", detail)
    if label in ('j', 'm', 'n', 'p'):
        return _norm16_3_case(label, s1s[0])
    if label == 'f':
        return _case_s25(gamma, n)
    if label == 'g':
        return _case_s27(gamma, n)
    if label == 'i':
        return _case_s48()
    if label == 'k':
        return _case_s50()
    if label == 'l':
        return _case_s54()
    return _case_s75()

# ---------------- (s1, t1) 对 ----------------

def s32_check() -> Dict[str, object]:
    """s1 = 32: a4 的奇偶性, 情形 (a) 的 t2 上界与情形 (b) 的行列式平方类。"""
    sol = counting_system(16, [16, 8, 7, 5, 4, 2, 1], count=('t2', 126), free=['a1', 'a7', 'a8', 't2'],
                          bounds={k: (0, 0) for k in ('a1', 'a7', 'a8', 't2')})
    a4 = {k: 3 * v for k, v in sol.affine_map['a4'].items()}
    a4_odd = (
        all(v.denominator == 1 for v in a4.values())
        and a4['1'].numerator % 2 == 1
        and all(v.numerator % 2 == 0 for k, v in a4.items() if k not in ('1', 'a8'))
    )
    probe = counting_system(16, [12, 6, 0], count=('t2', 126), probe_norm=24,
                            names={12: 'm12', 6: 'm6', 0: 'm0'}, bounds={'t2': (0, 0)})
    t2_bound = Fraction(99 - 3, 76 - 12)
    classes = {}
    for blocks in s32_block_choices():
        det = determinant(s32_gram(blocks))
        classes[blocks] = {"det": det, "square_class": square_class(det), "v5_odd": valuation(det, 5) % 2 == 1}
    return {
        "a4": {k: format_rational(v) for k, v in sol.affine_map['a4'].items()},
        "a4_odd": a4_odd,
        "probe": {k: probe.render(k) for k in ('m0', 'm6', 'm12')},
        "t2_bound": t2_bound,
        "t2_values": list(range(1, floor(t2_bound) + 1)),
        "block_classes": classes,
        "all_v5_odd": all(v["v5_odd"] for v in classes.values()),
    }


def minimal_pair_report(s1: int, t1: int) -> ExclusionVerdict:
    case = f"(s1, t1) = ({s1}, {t1})"
    detail: Dict[str, object] = {"s1": s1, "t1": t1}
    if s1 + t1 > MINIMAL_PAIR_SUM_BOUND:
        return ExclusionVerdict(case=case, excluded=True, rule="pair_sum_bound", detail=detail,
                                citation=f"s1 + t1 ≤ {MINIMAL_PAIR_SUM_BOUND}")
    if (s1 * t1) % 3:
        return ExclusionVerdict(case=case, excluded=True, rule="m3_divisibility", detail=detail,
                                citation="m3 = s1·t1/3 须为整数")
    side = [x for x in (s1, t1) if x in SINGLE_SIDE_EXCLUDED]
    if side:
        detail["excluded_side"] = side
        return ExclusionVerdict(case=case, excluded=True, rule="single_side", detail=detail,
                                citation="一侧的 s1 值已在最小型情形中排除")
    if (s1 == 32 and t1 != 6) or (t1 == 32 and s1 != 6):
        return ExclusionVerdict(case=case, excluded=True, rule="s32", detail=detail,
                                citation="s1 = 32 迫使 t1 = 6")
    if s1 in MINIMAL_A and t1 in MINIMAL_A:
        detail["e"] = 3
        return ExclusionVerdict(case=case, excluded=False, rule="handoff", detail=detail,
                                citation="子格下降 (e = 3) 只得到 s1 = t1 = 18", handoff="descent")
    if 24 in (s1, t1) and (s1 in MINIMAL_A or t1 in MINIMAL_A):
        detail["e"] = 6
        return ExclusionVerdict(case=case, excluded=False, rule="handoff", detail=detail,
                                citation="E6⊥E8 与 A2⊥D12 亏格中的子格下降 (e = 6)", handoff="descent")
    detail["genera"] = 176 if (s1, t1) == (24, 24) else 149
    return ExclusionVerdict(case=case, excluded=False, rule="handoff", detail=detail,
                            citation="θ 级数可行性", handoff="theta")


def minimal_pair_grid(values: Sequence[int] = MINIMAL_SURVIVOR_S) -> List[ExclusionVerdict]:
    return [minimal_pair_report(s1, t1) for s1 in values for t1 in values]


def exclusion_report(
    case: Union[ParamTriple, str, Tuple[int, int]],
    dual: bool = False,
    n: int = 14,
    gamma_bound: RationalLike = GAMMA14_BOUND,
) -> ExclusionVerdict:
    """按情形类型分派: ParamTriple 走一般型规则, 字母标签走最小型情形, (s1, t1) 走终局网格。"""
    if isinstance(case, ParamTriple):
        return general_report(case, dual=dual, n=n, gamma_bound=gamma_bound)
    if isinstance(case, str):
        return minimal_case_report(case, gamma_bound=gamma_bound)
    if isinstance(case, tuple) and len(case) == 2:
        return minimal_pair_report(int(case[0]), int(case[1]))
    raise ValueError(f"无法识别的情形: {case!r}")

# ---------------- 表格输出 ----------------

def triples_table(rows: Sequence[ParamTriple], as_csv: bool = False) -> str:
    if as_csv:
        return write_csv(["n2", "s", "r_num", "r_den"], [t.csv_row() for t in rows])
    return render_table(["n2", "s", "r"], [(t.n2, t.s, t.r) for t in rows])


def minimal_cases_table(cases: Sequence[MinimalTypeCase]) -> str:
    return render_table(
        ["case", "s1", "r"],
        [(c.label or "?", c.s1, ", ".join(format_rational(r) for r in c.r_values)) for c in cases],
    )
