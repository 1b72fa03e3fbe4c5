from fractions import Fraction
import random

import pytest

from dsperfect.catalog import catalog
from dsperfect.design_engine import (
    antipodal_bound, antipodal_neighbor_count, antipodal_report, design_constant, design_defect,
    integrality_witness, minimal_type, moment_check, n2_bound, n2_config, nonpositive_decompose,
    strong_perfection_report, universal_check,
)
from dsperfect.lattice_core import minimum_and_layer
from dsperfect.linalg import rank


def test_root_lattices_are_strongly_perfect():
    for name in ('A2', 'D4', 'E6', 'E8'):
        rep = moment_check(catalog(name))
        assert rep.is_4design, f"{name} 最小层应为 4-设计"
        assert not rep.d4_defect


def test_z14_is_not_strongly_perfect():
    rep = moment_check(catalog('Z14'))
    assert rep.is_2design
    assert not rep.is_4design
    assert rep.d4_defect


def test_e8_dual_strongly_perfect_and_gamma():
    rep = strong_perfection_report(catalog('E8'))
    assert rep.is_strongly_perfect
    assert rep.is_dual_strongly_perfect
    assert rep.gamma_product == 4


def _pointwise_moments_hold(L, alphas):
    m, X = minimum_and_layer(L)
    s, n = len(X.vectors), L.dim
    G = L.gram
    for a in alphas:
        Ga = [sum(G[i][j] * a[j] for j in range(n)) for i in range(n)]
        ips = [sum(x[i] * Ga[i] for i in range(n)) for x in X.vectors]
        norm = sum(a[i] * Ga[i] for i in range(n))
        if sum(ip ** 2 for ip in ips) != Fraction(s) * m / n * norm:
            return False
        if sum(ip ** 4 for ip in ips) != 3 * Fraction(s) * m * m / (n * (n + 2)) * norm * norm:
            return False
    return True


def test_tensor_agrees_with_pointwise_moments():
    rng = random.Random(11)
    for name in ('A2', 'D4', 'E6', 'E8', 'A5', 'Z4', 'A1+A2'):
        L = catalog(name)
        alphas = []
        while len(alphas) < 200:
            a = [rng.randint(-3, 3) for _ in range(L.dim)]
            if any(a):
                alphas.append(a)
        assert _pointwise_moments_hold(L, alphas) == moment_check(L).is_4design, name


def test_universal_check_e8():
    assert universal_check(catalog('E8'), 4)


def test_design_defect():
    L = catalog('E8')
    X = minimum_and_layer(L)[1]
    assert design_defect(L, X, 2) == 0
    assert design_defect(L, X, 3) == 0
    Z = catalog('Z4')
    assert design_defect(Z, minimum_and_layer(Z)[1], 2) > 0


def test_design_constant():
    assert design_constant(14, 1) == Fraction(1, 14)
    assert design_constant(14, 2) == Fraction(3, 14 * 16)
    assert design_constant(14, 3) == Fraction(15, 14 * 16 * 18)


def test_n2_bound_sample_points():
    assert n2_bound(14, Fraction(22, 3)) == 11
    assert n2_bound(14, 8) == 26
    with pytest.raises(ValueError):
        n2_bound(14, 9)


def test_integrality_witness():
    w = integrality_witness(120, 8, 2, 2)
    assert w.d2 == 60
    assert w.all_integral


def test_minimal_type():
    gamma, kind = minimal_type(catalog('E8'))
    assert gamma == 4 and kind == "general"


def test_nonpositive_decompose_component_count():
    tri = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert nonpositive_decompose(tri) == [[0, 1, 2]]
    G = [[0] * 6 for _ in range(6)]
    for off in (0, 3):
        for i in range(3):
            for j in range(3):
                G[off + i][off + j] = tri[i][j]
    comps = nonpositive_decompose(G)
    assert len(comps) == 2
    with pytest.raises(ValueError):
        nonpositive_decompose([[2, 1], [1, 2]])
    with pytest.raises(ValueError):
        nonpositive_decompose([[2, -1, -1], [-1, 1, 0], [-1, 0, 1]])


def test_nonpositive_decompose_random_simplices():
    rng = random.Random(5)
    for _ in range(20):
        sizes = [rng.randint(2, 5) for _ in range(rng.randint(1, 4))]
        k = sum(sizes)
        perm = list(range(k))
        rng.shuffle(perm)
        G = [[Fraction(0)] * k for _ in range(k)]
        blocks, start = [], 0
        for size in sizes:
            idx = sorted(perm[start:start + size])
            blocks.append(idx)
            for i in idx:
                for j in idx:
                    G[i][j] = Fraction(1) if i == j else Fraction(-1, size - 1)
            start += size
        comps = nonpositive_decompose(G)
        assert sorted(comps) == sorted(blocks)
        assert len(comps) == k - rank(G)


def _dual_coords(L, v):
    G = L.gram
    return [sum(G[i][j] * v[j] for j in range(L.dim)) for i in range(L.dim)]


def test_n2_config_e8():
    L = catalog('E8')
    X = minimum_and_layer(L)[1]
    root = X.vectors[0]
    cfg = n2_config(L, _dual_coords(L, root), X)
    assert cfg.applicable and cfg.alpha_norm == 2 and cfg.c == 1
    assert cfg.members == [tuple(root)]
    assert cfg.cardinality_ok and cfg.sum_check

    other = next(y for y in X.vectors if L.inner(root, y) == 0)
    beta = [a + b for a, b in zip(root, other)]
    cfg = n2_config(L, _dual_coords(L, beta), X)
    assert cfg.alpha_norm == 4 and cfg.c == 7
    assert len(cfg.members) == 14
    assert cfg.cardinality_ok and cfg.sum_check


def test_n2_config_not_applicable():
    L = catalog('E8')
    X = minimum_and_layer(L)[1]
    root = X.vectors[0]
    cfg = n2_config(L, _dual_coords(L, [3 * v for v in root]), X)
    assert not cfg.applicable
    with pytest.raises(ValueError):
        n2_config(L, [1, 0])


def test_n2_simplex_of_scaled_a8():
    # 8 个范数 8/9、两两内积 4/9 的向量之和的范数为 4·(α,α) = 32
    F = [[Fraction(4, 9) * (1 + (i == j)) for j in range(8)] for i in range(8)]
    assert sum(sum(row) for row in F) == 4 * 8
    assert rank(F) == 8


def test_antipodal_counts():
    A2 = catalog('A2')
    rep = antipodal_report(A2)
    assert rep["applicable"] and rep["ok"]
    assert rep["counts"] == [2] and rep["bound"] == antipodal_bound(2) == 2
    E8 = catalog('E8')
    X = minimum_and_layer(E8)[1]
    assert antipodal_neighbor_count(E8, X, X.vectors[0]) == 56
    rep = antipodal_report(E8, X)
    assert not rep["applicable"]
    assert rep["counts"] == [56]
