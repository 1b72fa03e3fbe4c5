from fractions import Fraction
import shutil

import pytest

from dsperfect.catalog import catalog, data_dir
from dsperfect.config import PipelineConfig
from dsperfect.pipeline import (
    STAGE_COVERAGE, _descent_e6, _dual_exclusion, _theta_stage, classify14, lattice_level, verify_lattice,
)


def test_verify_lattice_dimension_gate():
    with pytest.raises(ValueError):
        verify_lattice(catalog('E8'))
    with pytest.raises(ValueError):
        verify_lattice(catalog('E8'), checks=["design", "colour"], expected_dim=None)


def test_verify_lattice_e8_certificate():
    rep, stage = verify_lattice(catalog('E8'), checks=["min", "design", "dual_design", "modular"],
                                expected_dim=None)
    assert stage.verdict == "reproduced"
    assert stage.detail["strongly_perfect"] and stage.detail["dual_strongly_perfect"]
    assert stage.detail["level"] == 1
    assert stage.detail["min_matches_fricke"]
    assert rep.gamma_product == 4


def test_verify_lattice_from_file(tmp_path):
    path = tmp_path / "e6e8.gram"
    catalog('E6+E8').save(path)
    rep, stage = verify_lattice(path, checks=["integral", "kissing"])
    assert stage.detail["integral"] and stage.detail["even"]
    assert stage.detail["kissing"] == 312
    assert not rep.is_strongly_perfect


def test_lattice_level():
    assert lattice_level(catalog('A2')) == 3
    assert lattice_level(catalog('D4')) == 2
    assert lattice_level(catalog('E6+E8')) == 3


def test_unknown_mode():
    with pytest.raises(ValueError):
        classify14("everything")


def test_theta_stage_with_shipped_problem():
    st = _theta_stage("general_504", PipelineConfig())
    assert st.verdict == "contradiction-confirmed"
    assert st.detail["general_504"]["lower_index"] == 16


def test_theta_stage_missing_data(tmp_path):
    st = _theta_stage("general_504", PipelineConfig(data_dir=tmp_path))
    assert st.verdict == "external-data-needed"


def test_theta_stage_count_mismatch(tmp_path):
    for name in ("theta_504.qs", "cusp_504.qs"):
        shutil.copy(data_dir() / name, tmp_path / name)
    shutil.copy(data_dir() / "general_504.problem", tmp_path / "pair_24_24_000.problem")
    st = _theta_stage("pair_24_24", PipelineConfig(data_dir=tmp_path), expected_count=176)
    assert st.verdict == "external-data-needed"
    assert st.detail["problems"] == 1


@pytest.mark.slow
def test_classify14_general_mode():
    report = classify14("general", PipelineConfig())
    verdicts = {st.stage: st.verdict for st in report.stages}
    assert verdicts["general-type-search"] == "reproduced"
    assert verdicts["general-type-exclusion"] == "reproduced"
    assert verdicts["s450-enumeration"] == "budget-limited"
    assert not report.has_discrepancy
    assert set(verdicts) <= set(STAGE_COVERAGE)
    assert report.final["general_survivors"][-1] == "minimal"


def test_verify_lattice_verdict_follows_checks():
    rep, stage = verify_lattice(catalog('A2'), checks=["universal"], expected_dim=None)
    # 默认检查到 2·n·min
    assert rep.universal_checked_up_to == 8
    assert stage.detail["universal_up_to"] == "8"
    assert stage.verdict == "reproduced"
    _, stage = verify_lattice(catalog('E6+E8'), checks=["design", "integral"])
    assert stage.verdict == "discrepancy"
    assert stage.detail["failed"] == ["design"]


def test_dual_exclusion_leaves_only_s504():
    survivors = [(672, Fraction(6)), (672, Fraction(22, 3)), (504, Fraction(20, 3)), (450, Fraction(112, 15))]
    st = _dual_exclusion(survivors, PipelineConfig())
    assert st.verdict == "reproduced"
    assert st.detail["theta_handoff"] == ["(504, 20/3)"]
    assert st.detail["(672, 22/3)"] == "dual_trace3"


def test_descent_stages_without_run_slow():
    st = _descent_e6(catalog('E8'), 3, PipelineConfig())
    assert st.verdict == "budget-limited" and st.detail["pairs"] == 3


def test_verify_lattice_n2_and_antipodal_checks():
    _, stage = verify_lattice(catalog('E8'), checks=["n2", "antipodal"], expected_dim=None)
    assert stage.verdict == "reproduced"
    n2 = stage.detail["n2"]
    assert n2["applicable"] and n2["size"] == 1 and n2["c"] == "1"
    assert n2["cardinality_ok"] and n2["sum_check"]
    assert stage.detail["antipodal"]["applicable"] is False

    _, stage = verify_lattice(catalog('A2'), checks=["antipodal"], expected_dim=None)
    assert stage.verdict == "reproduced"
    assert stage.detail["antipodal"]["counts"] == [2]
