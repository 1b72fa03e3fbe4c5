from fractions import Fraction

import pytest

from dsperfect.catalog import catalog, data_dir
from dsperfect.models import FeasibilityProblem
from dsperfect.theta_forms import (
    feasible_space, fricke_image, fricke_lattice, harmonic_theta, load_problem, parse_qseries,
    qs_add, qs_div, qs_mul, qs_scale, qseries_from_dict, theta, theta_bruteforce, validate_lattice_theta,
    zonal_harmonic,
)


def test_theta_e8():
    th = theta(catalog('E8'), 4)
    assert th.unit == 1
    assert th.coeffs == [1, 0, 240, 0, 2160]
    assert validate_lattice_theta(th) == []


def test_theta_matches_bruteforce_a2():
    A2 = catalog('A2')
    assert theta(A2, 6).coeffs == theta_bruteforce(A2, 6, radius=3).coeffs


def test_theta_rejects_bad_unit():
    with pytest.raises(ValueError):
        theta(catalog('A2'), 4, unit=Fraction(3, 2))
    with pytest.raises(ValueError):
        theta(catalog('A2'), 0)


def test_harmonic_theta_vanishes_on_designs():
    E8 = catalog('E8')
    p = zonal_harmonic(E8, [1, 0, 0, 0, 0, 0, 0, 0], 2)
    th = harmonic_theta(E8, p, 4)
    assert all(c == 0 for c in th.coeffs)


def test_fricke_a2_self_image():
    A2 = catalog('A2')
    assert fricke_lattice(A2, 3).det == 3
    assert fricke_lattice(fricke_lattice(A2, 3), 3).gram == A2.gram
    assert fricke_image(A2, 3, 8).coeffs == theta(A2, 8).coeffs
    with pytest.raises(ValueError):
        fricke_lattice(A2, 2)


def test_qseries_arithmetic():
    a = qseries_from_dict({0: 1, 1: 1}, 6)
    b = qseries_from_dict({0: 1, 1: -1}, 6)
    prod = qs_mul(a, b)
    assert prod.coeffs[:3] == [1, 0, -1]
    assert all(c == 0 for c in prod.coeffs[3:])
    back = qs_div(prod, b)
    assert back.coeffs == a.coeffs[: back.truncation + 1]
    assert qs_add(a, b).coeffs[:2] == [2, 0]
    assert qs_scale(a, Fraction(1, 2)).coeff(1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        qs_add(a, qseries_from_dict({0: 1}, 6, unit=2))
    with pytest.raises(ValueError):
        qs_div(a, qseries_from_dict({}, 6))


def test_parse_qseries_errors():
    s = parse_qseries("unit 1/3\ntruncation 4\n0 1\n2 6\n")
    assert s.at_norm(Fraction(2, 3)) == 6
    with pytest.raises(ValueError):
        parse_qseries("truncation 4\n0 1\n")
    with pytest.raises(ValueError):
        parse_qseries("unit 1\ntruncation 2\n5 1\n")


def test_general_504_theta_infeasible():
    prob = load_problem(data_dir() / "general_504.problem")
    res = feasible_space(prob)
    assert res.consistent
    assert not res.feasible
    w = res.witness
    assert w['lower_index'] == 16 and w['lower'] == Fraction(52511, 11)
    assert w['upper_index'] == 14 and w['upper'] == Fraction(43124, 11)


def test_feasible_with_empty_basis():
    prob = FeasibilityProblem(base=theta(catalog('E8'), 4), nonneg_horizon=4)
    res = feasible_space(prob)
    assert res.feasible and res.point == []


def test_feasible_point_satisfies_constraints():
    base = qseries_from_dict({0: 1, 2: -4}, 4)
    cusp = qseries_from_dict({2: 1, 3: 1}, 4)
    prob = FeasibilityProblem(base=base, basis=[cusp], nonneg_horizon=4, even_from=None)
    res = feasible_space(prob)
    assert res.feasible
    assert res.point == [4]


def test_infeasible_pair_witness():
    base = qseries_from_dict({0: 1, 2: -4}, 4)
    cusp = qseries_from_dict({2: 1, 3: -1}, 4)
    res = feasible_space(FeasibilityProblem(base=base, basis=[cusp], nonneg_horizon=4, even_from=None))
    assert not res.feasible
    assert res.witness["lower_index"] == 2 and res.witness["upper_index"] == 3


def test_problem_file_errors(tmp_path):
    bad = tmp_path / "x.problem"
    bad.write_text("foo 1\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_problem(bad)
    bad.write_text("horizon 4\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_problem(bad)


def test_fricke_round_trip_e6_e8():
    L = catalog('E6+E8')
    M = fricke_lattice(L, 3)
    assert M.det == 3 ** 13
    assert M.minimum == 4
    assert fricke_lattice(M, 3).gram == L.gram
    assert fricke_image(M, 3, 6).coeffs == theta(L, 6).coeffs


def test_feasible_requires_even_member():
    # 有理可行区间 t ∈ [0, 1/3], 唯一整点处 q^2 系数为奇数
    base = qseries_from_dict({0: 1, 2: 1}, 2)
    cusp = qseries_from_dict({1: 3, 2: -3}, 2)
    res = feasible_space(FeasibilityProblem(base=base, basis=[cusp], nonneg_horizon=2))
    assert res.consistent and not res.feasible
    assert res.integral is False
    assert res.witness["reason"] == "可行集中没有系数为整/偶的成员"

    res = feasible_space(FeasibilityProblem(base=base, basis=[cusp], nonneg_horizon=2, even_from=None))
    assert res.feasible and res.integral
    assert res.point == [0]


def test_feasible_point_is_integral():
    base = qseries_from_dict({0: 1, 2: -4}, 4)
    cusp = qseries_from_dict({1: Fraction(1, 2), 2: 1, 3: 1}, 4)
    res = feasible_space(FeasibilityProblem(base=base, basis=[cusp], nonneg_horizon=4, even_from=None))
    assert res.integral
    assert res.point == [4]


def test_unbounded_family_is_rational_only():
    base = qseries_from_dict({0: 1, 2: Fraction(1, 2)}, 2)
    cusp = qseries_from_dict({1: 1, 2: 1}, 2)
    res = feasible_space(FeasibilityProblem(base=base, basis=[cusp], nonneg_horizon=2, even_from=None))
    assert res.feasible and res.integral is None
    assert res.witness["rational_only"] is True
