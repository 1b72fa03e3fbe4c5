"""球面设计与强完美性

- moment_check: 二阶/四阶矩张量与目标张量逐分量精确比较 (等价于对所有 α 的 (D2)/(D4))
- integrality_witness: (D2), (D4), (D4−D2)/12 的整性
- n2_config / n2_bound / design_defect / minimal_type / nonpositive_decompose
- antipodal_report: 不正交 4-设计最小层中 |N(y0)| ≤ 2(n−1) 的逐点检查
"""
from __future__ import annotations
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .lattice_core import Lattice, dual, minimum_and_layer, short_vectors
from .linalg import integral_scaling, rank
from .models import DesignReport, IntegralityWitness, Layer, N2Config
from .utils import RationalLike, as_fraction, format_rational, logger

__all__ = [
    "moment_check", "strong_perfection_report", "universal_check", "integrality_witness",
    "n2_config", "n2_bound", "design_defect", "design_constant", "minimal_type",
    "nonpositive_decompose", "antipodal_bound", "antipodal_neighbor_count", "antipodal_report",
]


def _dual_coords(L: Lattice, X: Layer) -> Tuple[int, np.ndarray]:
    """y = d·G·x (整数), 于是 (x, α) = y·a / d, a 为 α 的基坐标。"""
    d, Gi = L.int_gram()
    G = np.array(Gi, dtype=object)
    V = np.array(X.vectors, dtype=object).reshape(len(X.vectors), L.dim)
    return d, V.dot(G.T)


def _key(idx: Sequence[int]) -> str:
    return ",".join(str(i) for i in idx)


def moment_check(L: Lattice, X: Optional[Layer] = None) -> DesignReport:
    """X (默认最小层) 是否为球面 4-设计; 比较全部 C(n+3,4) 个四阶分量与 C(n+1,2) 个二阶分量。"""
    if X is None:
        X = minimum_and_layer(L)[1]
    n = L.dim
    s = len(X.vectors)
    m = X.norm
    G = L.gram
    report = DesignReport(n=n, s=s, m=m)
    if s == 0:
        report.spans = False
        report.notes.append("空层")
        return report
    if rank([list(v) for v in X.vectors]) < n:
        report.spans = False
        report.notes.append("层向量不张成全空间")
    d, Y = _dual_coords(L, X)

    c2 = Fraction(s) * m / n
    for i, j in combinations_with_replacement(range(n), 2):
        got = Fraction(int(np.sum(Y[:, i] * Y[:, j])), d * d)
        diff = got - c2 * G[i][j]
        if diff:
            report.d2_defect[_key((i, j))] = diff

    c4 = Fraction(s) * m * m / (n * (n + 2))
    d4 = d ** 4
    for i, j, k, l in combinations_with_replacement(range(n), 4):
        got = Fraction(int(np.sum(Y[:, i] * Y[:, j] * Y[:, k] * Y[:, l])), d4)
        target = c4 * (G[i][j] * G[k][l] + G[i][k] * G[j][l] + G[i][l] * G[j][k])
        diff = got - target
        if diff:
            report.d4_defect[_key((i, j, k, l))] = diff

    report.is_2design = not report.d2_defect
    report.is_4design = report.is_2design and not report.d4_defect
    report.d22_ok = _d22_cross_check(L, X, c4)
    report.is_strongly_perfect = report.is_4design
    logger.debug("moment_check: n=%d s=%d m=%s 2-设计=%s 4-设计=%s", n, s, format_rational(m), report.is_2design, report.is_4design)
    return report


def _d22_cross_check(L: Lattice, X: Layer, c4: Fraction) -> bool:
    """(D22)(e_i, e_j) 在相邻基向量对上的逐向量求和复核。"""
    n = L.dim
    ok = True
    for i in range(n):
        j = (i + 1) % n
        a1 = [int(k == i) for k in range(n)]
        a2 = [int(k == j) for k in range(n)]
        lhs = sum((L.inner(x, a1) ** 2) * (L.inner(x, a2) ** 2) for x in X.vectors)
        rhs = c4 * (L.norm(a1) * L.norm(a2) + 2 * L.inner(a1, a2) ** 2)
        ok = ok and lhs == rhs
    return ok


def strong_perfection_report(L: Lattice, universal_bound: Optional[RationalLike] = None) -> DesignReport:
    """L 与 L* 的最小层是否都是 4-设计, 以及 γ = min(L)·min(L*); 可选逐层检查到 universal_bound。"""
    report = moment_check(L)
    D = dual(L)
    dual_report = moment_check(D)
    report.is_dual_strongly_perfect = report.is_4design and dual_report.is_4design
    report.gamma_product = L.minimum * D.minimum
    if report.is_4design and report.gamma_product < Fraction(L.dim + 2, 3):
        report.notes.append("γ 低于 (n+2)/3 但最小层为 4-设计, 与下界矛盾")
    if universal_bound is not None:
        bound = as_fraction(universal_bound)
        report.universal_checked_up_to = bound
        report.universal_ok = universal_check(L, bound)
    logger.info("强完美检查: %s 4-设计=%s 对偶强完美=%s γ=%s", L.label or L.dim, report.is_4design,
                report.is_dual_strongly_perfect, format_rational(report.gamma_product))
    return report


def universal_check(L: Lattice, bound: RationalLike) -> bool:
    """所有范数 ≤ bound 的非空层是否都是 4-设计。"""
    for norm, reps in short_vectors(L, bound).items():
        rep = moment_check(L, Layer(norm=norm, vectors=reps))
        if not rep.is_4design:
            logger.info("范数 %s 的层不是 4-设计", format_rational(norm))
            return False
    return True


def integrality_witness(s: int, n: int, m: RationalLike, alpha_norm: RationalLike) -> IntegralityWitness:
    """D2 = (sm/n)(α,α), D4 = 3sm²/(n(n+2))(α,α)², 以及 (D4 − D2)/12 的整性。"""
    m, a = as_fraction(m), as_fraction(alpha_norm)
    d2 = Fraction(s) * m / n * a
    d4 = 3 * Fraction(s) * m * m / (n * (n + 2)) * a * a
    d42 = (d4 - d2) / 12
    return IntegralityWitness(
        d2=d2, d4=d4, d42=d42,
        d2_integral=d2.denominator == 1,
        d4_integral=d4.denominator == 1,
        d42_integral=d42.denominator == 1,
    )


def n2_constant(s: int, n: int, m: RationalLike, alpha_norm: RationalLike) -> Fraction:
    """c = (sm/6n)·(3m/(n+2)·(α,α) − 1)。"""
    m, a = as_fraction(m), as_fraction(alpha_norm)
    return Fraction(s) * m / (6 * n) * (3 * m / (n + 2) * a - 1)


def n2_config(L: Lattice, alpha: Sequence[RationalLike], X: Optional[Layer] = None) -> N2Config:
    """N₂(α) = {x ∈ Min : (x,α) = 2}; α 以对偶坐标给出, 即 α_i = (b_i, α)。"""
    if X is None:
        X = minimum_and_layer(L)[1]
    n = L.dim
    a = [as_fraction(v) for v in alpha]
    if len(a) != n:
        raise ValueError("α 的维数与格不符")
    Ginv = dual(L).gram
    alpha_norm = sum(a[i] * Ginv[i][j] * a[j] for i in range(n) for j in range(n))
    s, m = len(X.vectors), X.norm
    c = n2_constant(s, n, m, alpha_norm)
    cfg = N2Config(alpha=tuple(a), alpha_norm=alpha_norm, c=c)
    members: List[Tuple[int, ...]] = []
    for x in X.vectors:
        ip = sum(xi * ai for xi, ai in zip(x, a))
        if abs(ip) > 2:
            cfg.applicable = False
            cfg.note = f"存在 |(x,α)| = {format_rational(abs(ip))} > 2"
            return cfg
        if ip == 2:
            members.append(tuple(x))
        elif ip == -2:
            members.append(tuple(-v for v in x))
    cfg.members = sorted(members)
    cfg.cardinality_ok = Fraction(len(members)) == c * alpha_norm / 2
    # Σx = cα, 在对偶坐标下比较: (b_i, Σx) = Σ_j G_ij (Σx)_j
    total = [sum(x[j] for x in members) for j in range(n)]
    G = L.gram
    lhs = [sum(G[i][j] * total[j] for j in range(n)) for i in range(n)]
    cfg.sum_check = all(lhs[i] == c * a[i] for i in range(n))
    return cfg


def n2_bound(n: int, r: RationalLike, m: RationalLike = 1) -> Fraction:
    """|N₂(α)| 上界: rm < 8 时 rm/(8−rm), rm = 8 时 2(n−1)。"""
    rm = as_fraction(r) * as_fraction(m)
    if rm > 8:
        raise ValueError(f"rm = {format_rational(rm)} > 8, 无可用上界")
    if rm == 8:
        return Fraction(2 * (n - 1))
    return rm / (8 - rm)


def design_constant(n: int, t: int) -> Fraction:
    """c_t = 1·3·5⋯(2t−1) / (n(n+2)⋯(n+2t−2))。"""
    if t < 1:
        raise ValueError("t 必须 ≥ 1")
    return Fraction(prod(range(1, 2 * t, 2)), prod(n + 2 * k for k in range(t)))


def design_defect(L: Lattice, X: Layer, t: int) -> Fraction:
    """Σ_{x1,x2 ∈ X} (x1,x2)^{2t} − c_t·|X|²·m^{2t}, 恒 ≥ 0, 等号当且仅当 X ∪ −X 为 2t-设计。"""
    n = L.dim
    if not X.vectors:
        return Fraction(0)
    d, Gi = L.int_gram()
    V = np.array(X.vectors, dtype=object).reshape(len(X.vectors), n)
    IP = V.dot(np.array(Gi, dtype=object)).dot(V.T)
    total = sum(int(v) ** (2 * t) for v in IP.flat)
    lhs = Fraction(total, d ** (2 * t))
    return lhs - design_constant(n, t) * len(X.vectors) ** 2 * X.norm ** (2 * t)


def minimal_type(L: Lattice) -> Tuple[Fraction, str]:
    """γ = min(L)·min(L*) 与 (n+2)/3 比较: below_bound / minimal / general。"""
    gamma = L.minimum * dual(L).minimum
    threshold = Fraction(L.dim + 2, 3)
    if gamma < threshold:
        kind = "below_bound"
    elif gamma == threshold:
        kind = "minimal"
    else:
        kind = "general"
    return gamma, kind


def nonpositive_decompose(gram: Sequence[Sequence[RationalLike]]) -> List[List[int]]:
    """两两内积 ≤ 0 且和为零的等范数向量组, 按负内积图的连通分量分解。

    输入为这些向量的 Gram 矩阵; 返回分量的下标列表。每个分量的和为零,
    分量个数等于 |V| − dim⟨V⟩。
    """
    G = [[as_fraction(x) for x in row] for row in gram]
    k = len(G)
    for i in range(k):
        for j in range(i + 1, k):
            if G[i][j] > 0:
                raise ValueError(f"向量 {i} 与 {j} 的内积 {format_rational(G[i][j])} > 0")
    if len({G[i][i] for i in range(k)}) > 1:
        raise ValueError("向量范数不全相等")
    if any(sum(row) != 0 for row in G):
        raise ValueError("向量和不为零")
    seen = [False] * k
    comps: List[List[int]] = []
    for start in range(k):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in range(k):
                if not seen[v] and G[u][v] < 0:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    expected = k - rank(G)
    if len(comps) != expected:
        raise ValueError(f"分量数 {len(comps)} 与 |V| − rank = {expected} 不符, 输入不是一组向量的 Gram 矩阵")
    return comps


def antipodal_bound(n: int) -> int:
    """最小层为 4-设计且两两不正交时, |N(y0)| ≤ 2(n−1) 且为偶数。"""
    return 2 * (n - 1)


def antipodal_neighbor_count(L: Lattice, X: Layer, y0: Sequence[int]) -> int:
    """|{y ∈ X ∪ −X : (y, y0) = a/2}|, a 为层范数。"""
    d, Gi = L.int_gram()
    V = np.array(X.vectors, dtype=object).reshape(len(X.vectors), L.dim)
    ips = V.dot(np.array(Gi, dtype=object).dot(np.array(list(y0), dtype=object)))
    half = X.norm * d / 2
    return sum(1 for v in ips if v == half or v == -half)


def antipodal_report(L: Lattice, X: Optional[Layer] = None) -> Dict[str, object]:
    """逐个 y0 ∈ X 计算 |N(y0)|; 层中有正交的向量对时上界不适用。"""
    if X is None:
        X = minimum_and_layer(L)[1]
    d, Gi = L.int_gram()
    V = np.array(X.vectors, dtype=object).reshape(len(X.vectors), L.dim)
    IP = V.dot(np.array(Gi, dtype=object)).dot(V.T)
    applicable = all(v != 0 for v in IP.flat)
    counts = sorted({antipodal_neighbor_count(L, X, y0) for y0 in X.vectors})
    bound = antipodal_bound(L.dim)
    ok = all(c <= bound and c % 2 == 0 for c in counts)
    if applicable and not ok:
        logger.warning("|N(y0)| 取值 %s 违反上界 %d 或奇偶性", counts, bound)
    return {"applicable": applicable, "counts": counts, "bound": bound, "ok": ok}
