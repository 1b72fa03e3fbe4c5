from fractions import Fraction

import pytest

from dsperfect.constants import GENERAL_TYPE_TABLE, MINIMAL_TYPE_TABLE
from dsperfect.models import ParamTriple
from dsperfect.param_search import (
    counting_system, exclusion_report, general_type_search, minimal_case_report, minimal_pair_grid,
    minimal_pair_report, minimal_type_search, moment_residuals, n2_value, triples_table,
)


def test_general_type_search_matches_table():
    rows = general_type_search()
    assert [(t.n2, t.s, t.r) for t in rows] == GENERAL_TYPE_TABLE
    for t in rows:
        assert n2_value(t.s, t.r) == t.n2


def test_general_type_search_empty_range():
    assert general_type_search(s_range=(200, 100)) == []


def test_minimal_type_search_covers_printed_cases():
    cases = minimal_type_search()
    found = {c.s1: c for c in cases}
    for label, (s1s, rs) in MINIMAL_TYPE_TABLE.items():
        for s1 in s1s:
            assert s1 in found, f"缺少 s1={s1}"
            assert found[s1].label == label
            assert not found[s1].missing
    with pytest.raises(ValueError):
        minimal_type_search(n=12)


def test_minimal_type_search_r8_cap():
    found = {c.s1: c for c in minimal_type_search()}
    # r = 8 时 n2 = s1/2 ≤ 26, 故 s1 = 56, 80 只剩 r = 28/3
    assert found[56].r_values == [Fraction(28, 3)] and found[56].n2_values == [49]
    assert found[80].r_values == [Fraction(28, 3)]
    assert Fraction(8) in found[16].r_values and found[16].n2_values[0] == 8
    assert all(r != 8 for c in found.values() if c.s1 > 52 for r in c.r_values)
    assert not found[56].missing and not found[56].extras


def test_counting_system_e8_roots():
    # E8 的 120 对根与一个根的内积: 63 对为 0, 56 对为 ±1
    sol = counting_system(2, [0, 1, 2], n=8, count=120)
    assert sol.consistent
    vals = sol.evaluate({})
    assert vals['a0'] == 63 and vals['a1'] == 56
    assert moment_residuals(2, {0: 63, 1: 56}, 120, n=8) == (0, 0, 0)


def test_counting_system_tight_five_design():
    sol = counting_system(4, [4, 2, 1])
    vals = sol.evaluate({})
    assert (vals['a'], vals['a1'], vals['a2']) == (105, 104, 0)


def test_counting_system_inconsistent():
    sol = counting_system(2, [0, 2], n=8, count=120)
    assert not sol.consistent


def test_general_exclusion_rules():
    for s, r in ((448, Fraction(6)), (384, Fraction(7)), (1200, Fraction(28, 5))):
        n2 = int(n2_value(s, r))
        assert exclusion_report(ParamTriple(s=s, r=r, n2=n2)).excluded


def test_dual_side_handoffs_and_positivity():
    v = exclusion_report(ParamTriple(s=672, r=Fraction(6), n2=3), dual=True)
    assert v.excluded and v.rule == "five_design_positivity"
    # 一般型阶段保留 (672, 22/3); 对偶侧由迹 3 子格的 3 进赋值排除
    assert not exclusion_report(ParamTriple(s=672, r=Fraction(22, 3), n2=11)).excluded
    v = exclusion_report(ParamTriple(s=672, r=Fraction(22, 3), n2=11), dual=True)
    assert v.excluded and v.rule == "dual_trace3" and v.detail["v3"] == 1
    v = exclusion_report(ParamTriple(s=504, r=Fraction(20, 3), n2=5), dual=True)
    assert not v.excluded
    assert v.handoff == "theta"


def test_minimal_case_reports():
    b = minimal_case_report('b')
    assert b.excluded and b.rule == "tight_design"
    c = minimal_case_report('c')
    assert c.excluded and c.rule == "counting_negative"
    d = minimal_case_report('d')
    assert d.excluded and d.detail["a4_cap"] == 26
    for label in ('a', 'e', 'h'):
        v = minimal_case_report(label)
        assert not v.excluded and v.handoff == "pairs"
    with pytest.raises(ValueError):
        minimal_case_report('z')


def test_minimal_pair_rules():
    assert minimal_pair_report(32, 32).rule == "m3_divisibility"
    assert minimal_pair_report(27, 6).rule == "single_side"
    assert minimal_pair_report(54, 42).rule == "pair_sum_bound"
    v = minimal_pair_report(18, 18)
    assert v.handoff == "descent" and v.detail["e"] == 3
    v = minimal_pair_report(24, 6)
    assert v.handoff == "descent" and v.detail["e"] == 6
    v = minimal_pair_report(24, 24)
    assert v.handoff == "theta" and v.detail["genera"] == 176


def test_pair_grid_respects_m3_divisibility():
    for v in minimal_pair_grid():
        s1, t1 = v.detail["s1"], v.detail["t1"]
        if not v.excluded:
            assert (s1 * t1) % 3 == 0
            assert s1 + t1 <= 83


def test_triples_table_csv():
    text = triples_table([ParamTriple(s=504, r=Fraction(20, 3), n2=5)], as_csv=True)
    lines = text.strip().splitlines()
    assert lines[0] == "n2,s,r_num,r_den"
    assert lines[1] == "5,504,20,3"


def test_root_system_counts_rank_8_and_14():
    # E8 的根系满足 4-设计方程; 秩 14 时同一方程组给出负计数
    vals = counting_system(2, [2, 1, 0], n=8).evaluate({})
    assert (vals['a'], vals['a1'], vals['a0']) == (120, 56, 63)
    vals = counting_system(2, [2, 1, 0], n=14).evaluate({})
    assert vals['a'] == -168
