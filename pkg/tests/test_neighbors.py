from fractions import Fraction
import json

import pytest

from dsperfect.catalog import catalog
from dsperfect.constants import G2_3_DET, G2_3_DUAL_MIN, G2_3_KISSING
from dsperfect.isometry import automorphism_count, find_isometry
from dsperfect.neighbors import (
    _mixed_kernel_lattice, enumerate_genus, g2_3_from_e6e8, kneser_neighbors, maximal_even_overlattices,
    save_enumeration, sublattice_descent,
)


def test_neighbors_of_e8_are_e8():
    E8 = catalog('E8')
    for N in kneser_neighbors(E8, 3, limit=2):
        assert N.det == 1 and N.is_even()
        assert N.kissing_number == 240


def test_neighbors_stay_in_d4_genus():
    D4 = catalog('D4')
    out = kneser_neighbors(D4, 3, limit=3)
    assert out
    for N in out:
        assert N.det == 4
        assert find_isometry(N, D4) is not None


def test_neighbor_preconditions():
    with pytest.raises(ValueError):
        kneser_neighbors(catalog('Z2'), 3)
    with pytest.raises(ValueError):
        kneser_neighbors(catalog('A2'), 3)


def test_automorphism_orders():
    assert automorphism_count(catalog('A2')) == 12
    assert automorphism_count(catalog('D4')) == 1152


def test_single_class_genus(tmp_path):
    res = enumerate_genus(catalog('D4'))
    assert res.complete
    assert len(res.classes) == 1
    assert res.mass == Fraction(1, 1152)
    out = save_enumeration(res, tmp_path / "d4")
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["h"] == 1 and manifest["classes"][0]["aut_order"] == 1152


def test_mass_ceiling_refusal():
    res = enumerate_genus(catalog('E8'), mass_ceiling=Fraction(1, 10 ** 12))
    assert res.refused and not res.classes
    with pytest.raises(RuntimeError):
        enumerate_genus(catalog('E8'), mass_ceiling=Fraction(1, 10 ** 12), strict=True)


def test_d8_climbs_to_e8():
    tops = maximal_even_overlattices(catalog('D8'))
    assert len(tops) == 1
    assert tops[0].det == 1 and tops[0].kissing_number == 240


@pytest.mark.slow
def test_genus_of_e6_e8_has_two_classes():
    res = enumerate_genus(catalog('E6+E8'))
    assert res.complete
    assert len(res.classes) == 2


@pytest.mark.slow
def test_g2_3_construction():
    L = g2_3_from_e6e8()
    assert L.det == G2_3_DET
    assert L.minimum == 4
    assert L.kissing_number == G2_3_KISSING


def test_descent_exponent_checks():
    with pytest.raises(ValueError):
        sublattice_descent(catalog('A2'), 2, Fraction(1, 2), 2, 4)
    with pytest.raises(ValueError):
        sublattice_descent(catalog('A2'), 5, Fraction(1, 2), 2, 6)
    assert not sublattice_descent(catalog('A2'), 2, 1, 2, 6).survivors


def test_mixed_descent_on_a2():
    # 2 处三个指数 2 子格的对偶最小为 1/6, 只剩 A2 本身; 3 处没有全迷向子空间
    res = sublattice_descent(catalog('A2'), 2, Fraction(1, 2), 2, 6)
    assert res.nodes_visited == 3
    assert len(res.survivors) == 1 and res.survivors[0].det == 3
    assert not sublattice_descent(catalog('A2'), 2, Fraction(1, 2), 2, 2).survivors


def test_mixed_kernel_is_intersection():
    E8 = catalog('E8')
    f2 = [[1, 0, 0, 0, 0, 0, 0, 0]]
    f3 = [[0, 1, 0, 0, 0, 0, 0, 0]]
    L = _mixed_kernel_lattice(E8, {2: f2, 3: f3}, 6)
    assert L.det == 36 and L.is_even()
    assert _mixed_kernel_lattice(E8, {2: [], 3: []}, 6).det == 1


@pytest.mark.slow
def test_exponent_six_descent_from_e6e8():
    res = sublattice_descent(catalog('E6+E8'), 2, G2_3_DUAL_MIN, 4, 6)
    if not res.budget_exhausted:
        assert len(res.survivors) == 1
        assert res.survivors[0].kissing_number == G2_3_KISSING
