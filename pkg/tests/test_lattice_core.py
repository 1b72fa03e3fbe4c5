from fractions import Fraction
import random

import pytest

from dsperfect.catalog import catalog
from dsperfect.lattice_core import (
    Lattice, aut_order, det_bounds, dual, dual_subset_divisor, elementary_divisors, is_isometric, layer,
    minimum_and_layer, orthogonal_sum, parity_sublattices, rescale, short_vectors, sublattice, square_class,
)
from dsperfect.linalg import inverse, mat_mul, rank, transpose
from dsperfect.constants import GAMMA14_BOUND


def test_rejects_invalid_gram():
    with pytest.raises(ValueError):
        Lattice([[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        Lattice([[2, 1], [0, 2]])


def test_dual_of_a2_and_involution():
    A2 = catalog('A2')
    D = dual(A2)
    assert A2.gram == [[2, -1], [-1, 2]]
    assert D.gram == [[Fraction(2, 3), Fraction(1, 3)], [Fraction(1, 3), Fraction(2, 3)]]
    assert dual(D).gram == A2.gram


def test_det_reciprocity_e6_e8():
    L = catalog('E6+E8')
    assert L.dim == 14
    assert L.det == 3
    assert dual(L).det == Fraction(1, 3)


def test_rescale_rejects_nonpositive():
    with pytest.raises(ValueError):
        rescale(catalog('A2'), 0)
    assert rescale(catalog('A2'), Fraction(1, 2)).det == Fraction(3, 4)


def test_minimum_and_kissing_numbers():
    assert catalog('E8').kissing_number == 240
    assert catalog('D4').kissing_number == 24
    m, X = minimum_and_layer(catalog('A2'))
    assert m == 2 and X.count == 6 and len(X.vectors) == 3


def test_short_vectors_count_e8_norm4():
    layers = short_vectors(catalog('E8'), 4)
    assert 2 * len(layers[Fraction(2)]) == 240
    assert 2 * len(layers[Fraction(4)]) == 2160


def test_layer_of_dual_a2():
    X = layer(dual(catalog('A2')), Fraction(2, 3))
    assert X.count == 6


def test_orthogonal_sum_and_text_roundtrip(tmp_path):
    L = orthogonal_sum(catalog('A2'), catalog('(2)'))
    assert L.det == 6
    path = tmp_path / "l.gram"
    L.save(path)
    assert Lattice.load(path).gram == L.gram


def test_malformed_lattice_file():
    with pytest.raises(ValueError):
        Lattice.from_text("3\n1 0 0\n0 1 0\n")


def test_sublattice_index():
    spec = sublattice(catalog('Z2'), [(2, 0), (0, 1)])
    assert spec.index == 2


def test_elementary_divisors_and_singular():
    assert elementary_divisors([[2, 0], [0, 6]]) == [2, 6]
    with pytest.raises(ValueError):
        elementary_divisors([[1, 2], [2, 4]])


def _random_unimodular(rng, n):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    return U


def _random_diagonal_lattice(rng, n, top):
    diag = [rng.randint(1, top) for _ in range(n)]
    U = _random_unimodular(rng, n)
    D = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return diag, Lattice(mat_mul(mat_mul(U, D), transpose(U)))


def test_dual_subset_divisor_divides_det_random():
    rng = random.Random(3)
    checked = 0
    for _ in range(40):
        n = rng.randint(2, 6)
        _, L = _random_diagonal_lattice(rng, n, 9)
        k = rng.randint(1, n)
        A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(k)]
        if rank(A) < k:
            continue
        F = mat_mul(mat_mul(A, inverse(L.gram)), transpose(A))
        assert L.det % dual_subset_divisor(F) == 0
        checked += 1
    assert checked > 20


def test_dual_subset_divisor_scaled_a8():
    # 8 个范数 8/9、两两内积 4/9 的向量
    F = rescale(catalog('A8'), Fraction(4, 9)).gram
    assert dual_subset_divisor(F) == 9 ** 7


def test_det_bounds_gamma14():
    lo, hi = det_bounds(14, 4, Fraction(4, 3), GAMMA14_BOUND)
    assert lo == (4 / GAMMA14_BOUND) ** 14
    assert hi == (GAMMA14_BOUND * 3 / 4) ** 14
    assert lo <= 3 ** 7 <= hi


def test_square_class():
    assert square_class(Fraction(75)) == 3
    assert square_class(Fraction(12, 5)) == 15


def test_parity_sublattice_indices():
    even, trace = parity_sublattices(catalog('Z4'))
    assert even.index == 2
    even, _ = parity_sublattices(catalog('E8'))
    assert even.index == 1
    _, trace = parity_sublattices(catalog('A2'))
    assert trace is not None and trace.index == 3


def test_parity_sublattice_indices_random():
    rng = random.Random(17)
    for _ in range(15):
        n = rng.randint(2, 6)
        diag, L = _random_diagonal_lattice(rng, n, 12)
        even, trace = parity_sublattices(L)
        assert even.index == (2 if any(a % 2 for a in diag) else 1)
        units = [a for a in diag if a % 3]
        if len(units) <= 1:
            assert trace is not None and trace.index == (3 if units else 1)
        else:
            assert trace is None


def test_isometry_a1a1_vs_a2():
    A2 = catalog('A2')
    assert not is_isometric(catalog('A1+A1'), A2)
    U = [[1, 1], [0, 1]]
    assert is_isometric(A2, Lattice(mat_mul(mat_mul(U, A2.gram), transpose(U))))


@pytest.mark.slow
def test_aut_order_e8():
    assert aut_order(catalog('E8')) == 696729600
