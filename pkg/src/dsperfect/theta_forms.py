"""θ 级数、调和 θ 级数、Fricke 像 (经伸缩对偶格) 与非负可行性判定

q 级数文件格式::

    unit 1
    truncation 40
    # k c_k (仅列非零项)
    0 1
    10 1008
"""
from __future__ import annotations
from fractions import Fraction
from itertools import product
from math import ceil, floor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from .lattice_core import Lattice, dual, rescale, short_vectors
from .linalg import denominator_lcm, nullspace, rank, solve
from .models import FeasibilityProblem, FeasibilityResult, QSeries
from .utils import RationalLike, as_fraction, format_rational, logger, parse_rational

__all__ = [
    "theta", "theta_bruteforce", "harmonic_theta", "zonal_harmonic", "is_harmonic",
    "qs_add", "qs_scale", "qs_mul", "qs_div", "qseries_from_dict",
    "fricke_lattice", "fricke_image", "feasible_space",
    "parse_qseries", "read_qseries", "write_qseries", "validate_cusp_basis", "validate_lattice_theta",
    "load_problem",
]

# ---------------- θ 级数 ----------------

def _default_unit(L: Lattice) -> Fraction:
    return Fraction(1, denominator_lcm(L.gram))


def _check_unit(L: Lattice, unit: Fraction) -> None:
    base = _default_unit(L)
    if (base / unit).denominator != 1:
        raise ValueError(f"范数量子 {format_rational(unit)} 不整除格的范数格点 {format_rational(base)}")


def theta(L: Lattice, B: RationalLike, unit: Optional[RationalLike] = None) -> QSeries:
    """θ_L = Σ_k #{x : N(x) = k·u} q^{k·u}, 系数到范数 B 为止。"""
    B = as_fraction(B)
    if B <= 0:
        raise ValueError("截断范数 B 必须为正")
    u = _default_unit(L) if unit is None else as_fraction(unit)
    _check_unit(L, u)
    top = floor(B / u)
    coeffs = [Fraction(0)] * (top + 1)
    coeffs[0] = Fraction(1)
    for norm, reps in short_vectors(L, top * u).items():
        coeffs[int(norm / u)] += 2 * len(reps)
    return QSeries(unit=u, coeffs=coeffs, truncation=top)


def theta_bruteforce(L: Lattice, B: RationalLike, radius: int, unit: Optional[RationalLike] = None) -> QSeries:
    """盒子 [-radius, radius]^n 内的范数直方图; 仅用于小维数交叉验证。"""
    B = as_fraction(B)
    u = _default_unit(L) if unit is None else as_fraction(unit)
    top = floor(B / u)
    coeffs = [Fraction(0)] * (top + 1)
    for x in product(range(-radius, radius + 1), repeat=L.dim):
        k = L.norm(x) / u
        if k <= top:
            coeffs[int(k)] += 1
    return QSeries(unit=u, coeffs=coeffs, truncation=top)


def _symbols(n: int) -> List[sympy.Symbol]:
    return list(sympy.symbols(f"x0:{n}"))


def is_harmonic(L: Lattice, poly: sympy.Expr) -> bool:
    """在格坐标下检查 Σ (G^{-1})_ij ∂_i∂_j p = 0。"""
    xs = _symbols(L.dim)
    Gi = dual(L).gram
    lap = sympy.Integer(0)
    for i in range(L.dim):
        for j in range(L.dim):
            if Gi[i][j]:
                lap += sympy.Rational(Gi[i][j].numerator, Gi[i][j].denominator) * sympy.diff(poly, xs[i], xs[j])
    return sympy.expand(lap) == 0


def zonal_harmonic(L: Lattice, a: Sequence[RationalLike], degree: int,
                   b: Optional[Sequence[RationalLike]] = None) -> sympy.Expr:
    """格坐标下的调和多项式: 2 次 (x,a)(x,b) − (a,b)(x,x)/n, 4 次为 Gegenbauer 型 zonal 多项式。"""
    n = L.dim
    xs = _symbols(n)
    G = L.gram

    def ip(u, v):
        return sum(sympy.Rational(G[i][j].numerator, G[i][j].denominator) * u[i] * v[j]
                   for i in range(n) for j in range(n) if G[i][j])

    av = [sympy.Rational(as_fraction(t).numerator, as_fraction(t).denominator) for t in a]
    bv = av if b is None else [sympy.Rational(as_fraction(t).numerator, as_fraction(t).denominator) for t in b]
    xa, xx = ip(xs, av), ip(xs, xs)
    if degree == 2:
        return sympy.expand(xa * ip(xs, bv) - ip(av, bv) * xx / n)
    if degree == 4:
        if b is not None:
            raise ValueError("4 次 zonal 多项式只取一个方向")
        aa = ip(av, av)
        return sympy.expand(xa ** 4 - sympy.Rational(6, n + 4) * aa * xa ** 2 * xx
                            + sympy.Rational(3, (n + 2) * (n + 4)) * aa ** 2 * xx ** 2)
    raise ValueError("只支持 2 次与 4 次调和多项式")


def harmonic_theta(L: Lattice, poly: sympy.Expr, B: RationalLike, unit: Optional[RationalLike] = None) -> QSeries:
    """θ_{L,p} = Σ_x p(x) q^{N(x)}; p 须为偶次调和多项式。"""
    if not is_harmonic(L, poly):
        raise ValueError("多项式不是调和的")
    xs = _symbols(L.dim)
    deg = sympy.Poly(poly, *xs).total_degree()
    if deg % 2:
        raise ValueError("奇次调和 θ 级数恒为 0, 只接受偶次")
    B = as_fraction(B)
    u = _default_unit(L) if unit is None else as_fraction(unit)
    _check_unit(L, u)
    top = floor(B / u)
    P = sympy.Poly(poly, *xs)
    coeffs = [Fraction(0)] * (top + 1)
    c0 = sympy.Rational(poly.subs({x: 0 for x in xs}))
    coeffs[0] = Fraction(int(c0.p), int(c0.q))
    for norm, reps in short_vectors(L, top * u).items():
        total = sympy.Integer(0)
        for v in reps:
            total += P(*v)
        total = sympy.Rational(total)
        coeffs[int(norm / u)] += 2 * Fraction(int(total.p), int(total.q))
    return QSeries(unit=u, coeffs=coeffs, truncation=top)

# ---------------- q 级数运算 ----------------

def qseries_from_dict(values: Dict[int, RationalLike], truncation: int, unit: RationalLike = 1) -> QSeries:
    coeffs = [Fraction(0)] * (truncation + 1)
    for k, c in values.items():
        if k < 0:
            raise ValueError("下标必须非负")
        if k <= truncation:
            coeffs[k] = as_fraction(c)
    return QSeries(unit=as_fraction(unit), coeffs=coeffs, truncation=truncation)


def _same_unit(a: QSeries, b: QSeries) -> None:
    if a.unit != b.unit:
        raise ValueError(f"范数量子不一致: {format_rational(a.unit)} vs {format_rational(b.unit)}")


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    _same_unit(a, b)
    T = min(a.truncation, b.truncation)
    return QSeries(unit=a.unit, coeffs=[a.coeff(k) + b.coeff(k) for k in range(T + 1)], truncation=T)


def qs_scale(a: QSeries, c: RationalLike) -> QSeries:
    c = as_fraction(c)
    return QSeries(unit=a.unit, coeffs=[c * a.coeff(k) for k in range(a.truncation + 1)], truncation=a.truncation)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """截断为 min(Ta + vb, Tb + va), v 为赋值。"""
    _same_unit(a, b)
    va, vb = a.valuation(), b.valuation()
    if va is None or vb is None:
        T = min(a.truncation, b.truncation)
        return QSeries(unit=a.unit, coeffs=[Fraction(0)] * (T + 1), truncation=T)
    T = min(a.truncation + vb, b.truncation + va)
    out = [Fraction(0)] * (T + 1)
    for i in range(va, min(a.truncation, T) + 1):
        ai = a.coeff(i)
        if not ai:
            continue
        for j in range(vb, min(b.truncation, T - i) + 1):
            out[i + j] += ai * b.coeff(j)
    return QSeries(unit=a.unit, coeffs=out, truncation=T)


def qs_div(a: QSeries, b: QSeries) -> QSeries:
    """a/b, b 的首项可逆; a 在 b 的赋值以下必须为 0。截断为 min(Ta, Tb) − vb。"""
    _same_unit(a, b)
    vb = b.valuation()
    if vb is None:
        raise ValueError("除数在截断内恒为 0")
    if any(a.coeff(k) for k in range(min(vb, a.truncation + 1))):
        raise ValueError("被除数的赋值低于除数, 商不是幂级数")
    T = min(a.truncation, b.truncation) - vb
    if T < 0:
        raise ValueError("截断不足以做除法")
    lead = b.coeff(vb)
    out = [Fraction(0)] * (T + 1)
    for k in range(T + 1):
        acc = a.coeff(k + vb) - sum(out[i] * b.coeff(vb + k - i) for i in range(k))
        out[k] = acc / lead
    return QSeries(unit=a.unit, coeffs=out, truncation=T)

# ---------------- Fricke 像 ----------------

def fricke_lattice(L: Lattice, N: int) -> Lattice:
    """√N·L*; 要求其为偶整格 (级条件)。"""
    if N < 1:
        raise ValueError("级 N 必须为正整数")
    M = rescale(dual(L), N)
    if not M.is_even():
        raise ValueError(f"√{N}·L* 不是偶格, 级条件不成立")
    if L.label:
        M.label = f"sqrt{N}*{L.label}*"
    return M


def fricke_image(L: Lattice, N: int, B: RationalLike, unit: Optional[RationalLike] = None) -> QSeries:
    """W_N(θ_L) 归一化为常数项 1: 即 θ(√N·L*)。"""
    M = fricke_lattice(L, N)
    return theta(M, B, unit=unit)

# ---------------- 可行性 ----------------

Ineq = Tuple[List[Fraction], Fraction, frozenset]


def _fourier_motzkin(ineqs: List[Ineq], r: int) -> Tuple[List[List[Ineq]], Optional[Ineq]]:
    """逐个消去最后一个变量; 返回每一阶段的方程组与 (若不可行) 矛盾不等式。

    不等式记为 const + Σ coef_j t_j ≥ 0, 附带来源下标集合。
    """
    stages = [ineqs]
    cur = ineqs
    for var in range(r - 1, -1, -1):
        pos = [q for q in cur if q[0][var] > 0]
        neg = [q for q in cur if q[0][var] < 0]
        nxt: List[Ineq] = [q for q in cur if q[0][var] == 0]
        for cp, kp, sp in pos:
            for cn, kn, sn in neg:
                lp, ln = cp[var], -cn[var]
                coef = [ln * x + lp * y for x, y in zip(cp, cn)]
                coef[var] = Fraction(0)
                nxt.append((coef, ln * kp + lp * kn, sp | sn))
        seen = {}
        for q in nxt:
            key = (tuple(q[0]), q[1])
            if key not in seen or len(q[2]) < len(seen[key][2]):
                seen[key] = q
        cur = list(seen.values())
        stages.append(cur)
    bad = [q for q in cur if q[1] < 0]
    if bad:
        return stages, min(bad, key=lambda q: (len(q[2]), sorted(q[2])))
    return stages, None


def _back_substitute(stages: List[List[Ineq]], r: int) -> List[Fraction]:
    t = [Fraction(0)] * r
    for var in range(r):
        system = stages[r - 1 - var]
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        for coef, k, _ in system:
            c = coef[var]
            rest = k + sum(coef[j] * t[j] for j in range(var))
            if c > 0:
                v = -rest / c
                lo = v if lo is None or v > lo else lo
            elif c < 0:
                v = -rest / c
                hi = v if hi is None or v < hi else hi
        if lo is not None and hi is not None:
            t[var] = (lo + hi) / 2
        elif lo is not None:
            t[var] = lo
        elif hi is not None:
            t[var] = hi
    return t


def _series_rows(base: QSeries, basis: Sequence[QSeries], k: int) -> Tuple[Fraction, List[Fraction]]:
    return base.coeff(k), [f.coeff(k) for f in basis]


def _check_truncation(prob: FeasibilityProblem) -> None:
    for s in [prob.base] + list(prob.basis):
        if s.unit != prob.base.unit:
            raise ValueError("基级数与底级数的范数量子不一致")
        if s.truncation < prob.nonneg_horizon:
            raise ValueError(f"级数截断 {s.truncation} 短于非负检查范围 {prob.nonneg_horizon}")
    if prob.image_base is not None and len(prob.image_basis) != len(prob.basis):
        raise ValueError("Fricke 像的基与原基长度不一致")


def feasible_space(prob: FeasibilityProblem) -> FeasibilityResult:
    """精确求解线性约束得到仿射族, 再判定族中是否有前 horizon 项为非负整数 (要求处为偶数) 的成员。

    FM 消元给出有理可行性; 整/偶成员在其上枚举, 结果记于 `integral`。
    """
    _check_truncation(prob)
    m = len(prob.basis)
    A: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for k, val in prob.constraints:
        c0, row = _series_rows(prob.base, prob.basis, k)
        A.append(row)
        rhs.append(as_fraction(val) - c0)
    for k, val in prob.image_constraints:
        if prob.image_base is None:
            raise ValueError("给出了 Fricke 像约束但没有像级数")
        c0, row = _series_rows(prob.image_base, prob.image_basis, k)
        A.append(row)
        rhs.append(as_fraction(val) - c0)
    if m == 0:
        if any(r != 0 for r in rhs):
            return FeasibilityResult(consistent=False, witness={'reason': '约束与底级数矛盾'})
        particular: List[Fraction] = []
        directions: List[List[Fraction]] = []
    elif A:
        x = solve(A, rhs)
        if x is None:
            logger.info("约束不相容, 解族为空")
            return FeasibilityResult(consistent=False, witness={'reason': '线性约束不相容'})
        particular = x
        directions = nullspace(A)
    else:
        particular = [Fraction(0)] * m
        directions = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    r = len(directions)
    result = FeasibilityResult(consistent=True, particular=particular, directions=directions)
    if r > 3:
        raise ValueError(f"自由参数 {r} 个, 超出精确消元支持的 3 个")

    ineqs: List[Ineq] = []
    for k in range(prob.nonneg_horizon + 1):
        c0, row = _series_rows(prob.base, prob.basis, k)
        const = c0 + sum(a * b for a, b in zip(row, particular))
        coef = [sum(row[i] * d[i] for i in range(m)) for d in directions]
        ineqs.append((coef, const, frozenset([k])))

    if r == 0:
        neg = next((k for coef, const, src in ineqs for k in src if const < 0), None)
        result.point = []
        result.negative_index = neg
        result.feasible = neg is None
        if neg is not None:
            result.witness = {'negative_index': neg, 'value': ineqs[neg][1]}
        else:
            result.feasible = result.integral = _parity_ok(prob, particular)
            if not result.feasible:
                result.witness = {'reason': '唯一解的系数不满足整性/偶性'}
        logger.info("可行性 (唯一解): feasible=%s negative_index=%s", result.feasible, neg)
        return result

    stages, bad = _fourier_motzkin(ineqs, r)
    if bad is not None:
        result.feasible = False
        result.witness = _witness(ineqs, bad, r)
        logger.info("不可行: 证据 %s", result.witness)
        return result
    t, complete, visited = _integral_member(prob, ineqs, r)
    if t is None and complete:
        result.feasible = False
        result.integral = False
        result.witness = {'reason': '可行集中没有系数为整/偶的成员', 'searched': visited}
        logger.info("有理可行但无整/偶成员 (穷尽 %d 个结点)", visited)
        return result
    if t is None:
        t = _back_substitute(stages, r)
        result.witness = {'rational_only': True, 'searched': visited}
        logger.warning("可行集无界且 %d 个结点内未找到整/偶成员, 仅给出有理点", visited)
    else:
        result.integral = True
    result.point = [particular[i] + sum(t[j] * directions[j][i] for j in range(r)) for i in range(m)]
    result.feasible = True
    return result


INTEGRAL_SEARCH_BUDGET = 200000
UNBOUNDED_WINDOW = 64


def _coefficient_ok(prob: FeasibilityProblem, k: int, v: Fraction) -> bool:
    if v < 0 or v.denominator != 1:
        return False
    return prob.even_from is None or k < prob.even_from or v.numerator % 2 == 0


def _parity_ok(prob: FeasibilityProblem, coeffs: Sequence[Fraction]) -> bool:
    for k in range(prob.nonneg_horizon + 1):
        c0, row = _series_rows(prob.base, prob.basis, k)
        if not _coefficient_ok(prob, k, c0 + sum(a * b for a, b in zip(row, coeffs))):
            return False
    return True


def _integral_member(prob: FeasibilityProblem, ineqs: List[Ineq], r: int,
                     budget: int = INTEGRAL_SEARCH_BUDGET) -> Tuple[Optional[List[Fraction]], bool, int]:
    """在 FM 可行集中找一个前 horizon 项均为非负整数 (even_from 起为偶数) 的成员。

    以一组线性无关的系数 u 为坐标, 整性化为 u 取整点 (偶性处步长为 2),
    再沿 FM 各阶段的区间逐坐标枚举。返回 (参数 t 或 None, 是否穷尽, 访问结点数);
    遇到无界区间只取 UNBOUNDED_WINDOW 个值, 此时不算穷尽。
    """
    pivots: List[int] = []
    rows: List[List[Fraction]] = []
    for k, (coef, _, _) in enumerate(ineqs):
        if len(rows) < r and any(coef) and rank(rows + [coef]) > len(rows):
            pivots.append(k)
            rows.append(coef)
    rho = len(rows)
    base = [ineqs[k][1] for k in pivots]
    cols = [[rows[i][j] for i in range(rho)] for j in range(r)]
    lifted: List[Tuple[List[Fraction], Fraction]] = []
    for coef, const, _ in ineqs:
        lam = solve(cols, coef) if rho else []
        lifted.append((lam, const - sum(a * b for a, b in zip(lam, base))))
    steps = [2 if prob.even_from is not None and k >= prob.even_from else 1 for k in pivots]
    stages, bad = _fourier_motzkin([(lam, c, frozenset([k])) for k, (lam, c) in enumerate(lifted)], rho)
    if bad is not None:
        return None, True, 0
    state = {'visited': 0, 'complete': True}

    def candidates(var: int, u: List[Fraction]):
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        for coef, k, _ in stages[rho - 1 - var]:
            c = coef[var]
            if c == 0:
                continue
            v = -(k + sum(coef[j] * u[j] for j in range(var))) / c
            if c > 0:
                lo = v if lo is None or v > lo else lo
            else:
                hi = v if hi is None or v < hi else hi
        s = steps[var]
        if lo is not None and hi is not None:
            return range(ceil(lo / s) * s, floor(hi / s) * s + 1, s)
        state['complete'] = False
        if lo is not None:
            return range(ceil(lo / s) * s, ceil(lo / s) * s + s * UNBOUNDED_WINDOW, s)
        if hi is not None:
            return range(floor(hi / s) * s, floor(hi / s) * s - s * UNBOUNDED_WINDOW, -s)
        return sorted(range(-s * UNBOUNDED_WINDOW, s * UNBOUNDED_WINDOW + 1, s), key=abs)

    def walk(var: int, u: List[Fraction]) -> Optional[List[Fraction]]:
        state['visited'] += 1
        if var == rho:
            ok = all(_coefficient_ok(prob, k, c + sum(a * b for a, b in zip(lam, u)))
                     for k, (lam, c) in enumerate(lifted))
            return u if ok else None
        for x in candidates(var, u):
            if state['visited'] >= budget:
                state['complete'] = False
                return None
            hit = walk(var + 1, u + [Fraction(x)])
            if hit is not None:
                return hit
        return None

    u = walk(0, [])
    if u is None:
        return None, state['complete'], state['visited']
    t = solve(rows, [a - b for a, b in zip(u, base)]) if rho else [Fraction(0)] * r
    return t, True, state['visited']


def _witness(ineqs: List[Ineq], bad: Ineq, r: int) -> Dict[str, object]:
    src = sorted(bad[2])
    out: Dict[str, object] = {'indices': src, 'combined_const': bad[1]}
    if r == 1 and len(src) == 2:
        bounds = {}
        for k in src:
            coef, const, _ = ineqs[k]
            bounds[k] = ('lower' if coef[0] > 0 else 'upper', -const / coef[0])
        lower = next((k for k in src if bounds[k][0] == 'lower'), None)
        upper = next((k for k in src if bounds[k][0] == 'upper'), None)
        if lower is not None and upper is not None:
            out.update({'lower_index': lower, 'lower': bounds[lower][1],
                        'upper_index': upper, 'upper': bounds[upper][1]})
    return out

# ---------------- 文件 I/O 与校验 ----------------

def parse_qseries(text: str) -> QSeries:
    unit: Optional[Fraction] = None
    trunc: Optional[int] = None
    values: Dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == 'unit' and len(parts) == 2:
            unit = parse_rational(parts[1])
        elif parts[0] == 'truncation' and len(parts) == 2:
            trunc = int(parts[1])
        elif len(parts) == 2:
            try:
                k = int(parts[0])
            except ValueError:
                raise ValueError(f"第 {lineno} 行: 下标不是整数: {parts[0]!r}")
            if k in values:
                raise ValueError(f"第 {lineno} 行: 下标 {k} 重复")
            values[k] = parse_rational(parts[1])
        else:
            raise ValueError(f"第 {lineno} 行无法解析: {raw!r}")
    if unit is None or trunc is None:
        raise ValueError("q 级数文件缺少 unit 或 truncation 头")
    if any(k > trunc for k in values):
        raise ValueError("系数下标超过 truncation")
    return qseries_from_dict(values, trunc, unit)


def read_qseries(path: Union[str, Path]) -> QSeries:
    return parse_qseries(Path(path).read_text(encoding='utf-8'))


def write_qseries(series: QSeries, path: Union[str, Path]) -> None:
    Path(path).write_text(series.to_text(), encoding='utf-8')


def validate_cusp_basis(basis: Sequence[QSeries], horizon: int) -> List[str]:
    """尖形式基的校验: 共同量子、常数项为 0、截断覆盖 horizon、线性无关。返回问题列表。"""
    problems: List[str] = []
    if not basis:
        return ["基为空"]
    unit = basis[0].unit
    for i, f in enumerate(basis):
        if f.unit != unit:
            problems.append(f"第 {i} 个级数量子不一致")
        if f.truncation < horizon:
            problems.append(f"第 {i} 个级数截断 {f.truncation} < {horizon}")
        if f.coeff(0) != 0:
            problems.append(f"第 {i} 个级数常数项非零")
    T = min(f.truncation for f in basis)
    rows = [[f.coeff(k) for k in range(T + 1)] for f in basis]
    if rank(rows) < len(basis):
        problems.append("基线性相关")
    return problems


def validate_lattice_theta(series: QSeries) -> List[str]:
    """格 θ 级数的必要条件: 常数项 1, 其余系数为非负偶整数。"""
    problems: List[str] = []
    if series.coeff(0) != 1:
        problems.append("常数项不为 1")
    for k in range(1, series.truncation + 1):
        c = series.coeff(k)
        if c < 0 or c.denominator != 1 or c.numerator % 2:
            problems.append(f"q^{k}: 系数 {format_rational(c)} 不是非负偶整数")
    return problems

# ---------------- 可行性问题文件 ----------------

_PROBLEM_KEYS = ('base', 'basis', 'image_base', 'image_basis', 'constraint', 'image_constraint', 'horizon', 'even_from')


def load_problem(path: Union[str, Path], horizon: Optional[int] = None) -> FeasibilityProblem:
    """读取可行性问题描述文件; 级数文件路径相对于描述文件所在目录。

    每行一个指令::

        base theta_504.qs
        basis cusp_504.qs          # 可重复, 按出现顺序组成基
        image_base w_theta.qs
        image_basis w_cusp.qs
        constraint 0 1             # θ 的第 k 项取给定值
        image_constraint 2 0
        horizon 20
        even_from 1                # none 表示不要求偶性
    """
    path = Path(path)
    root = path.parent
    fields: Dict[str, object] = {'basis': [], 'image_basis': [], 'constraints': [], 'image_constraints': []}
    for lineno, raw in enumerate(path.read_text(encoding='utf-8').splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key not in _PROBLEM_KEYS:
            raise ValueError(f"{path.name} 第 {lineno} 行: 未知指令 {key!r}")
        if key in ('base', 'image_base') and len(args) == 1:
            fields[key] = read_qseries(root / args[0])
        elif key in ('basis', 'image_basis') and len(args) == 1:
            fields[key].append(read_qseries(root / args[0]))  # type: ignore[union-attr]
        elif key in ('constraint', 'image_constraint') and len(args) == 2:
            fields[key + 's'].append((int(args[0]), parse_rational(args[1])))  # type: ignore[union-attr]
        elif key == 'horizon' and len(args) == 1:
            fields['nonneg_horizon'] = int(args[0])
        elif key == 'even_from' and len(args) == 1:
            fields['even_from'] = None if args[0].lower() == 'none' else int(args[0])
        else:
            raise ValueError(f"{path.name} 第 {lineno} 行参数个数不对: {raw!r}")
    if 'base' not in fields:
        raise ValueError(f"{path.name} 缺少 base 指令")
    if horizon is not None and 'nonneg_horizon' not in fields:
        fields['nonneg_horizon'] = horizon
    return FeasibilityProblem(**fields)
