from fractions import Fraction

import pytest
from pydantic import ValidationError

from dsperfect.config import PipelineConfig, load_config, parse_config_text


def test_defaults():
    cfg = PipelineConfig()
    assert cfg.gamma_bound == Fraction(2776, 1000)
    assert cfg.kissing_bound == 1746
    assert cfg.s_lower_bound == 105
    assert cfg.data_dir.name == "data"
    assert not cfg.run_slow


def test_rational_fields():
    assert PipelineConfig(gamma_bound="347/125").gamma_bound == Fraction(347, 125)
    assert PipelineConfig(gamma_bound="2.776").gamma_bound == Fraction(2776, 1000)
    with pytest.raises(ValidationError):
        PipelineConfig(gamma_bound=2.776)
    with pytest.raises(ValidationError):
        PipelineConfig(gamma_bound="0")
    with pytest.raises(ValidationError):
        PipelineConfig(kissing_bound=0)


def test_parse_config_text():
    values = parse_config_text("# 注释\nGamma_Bound = 2.8  # 行尾注释\n\nworkers=2\n")
    assert values == {"gamma_bound": "2.8", "workers": "2"}
    with pytest.raises(ValueError):
        parse_config_text("gamma_bound 2.8\n")
    with pytest.raises(ValueError):
        parse_config_text("= 3\n")


def test_priority_file_env_override(tmp_path, monkeypatch):
    path = tmp_path / "run.cfg"
    path.write_text("nonneg_horizon = 30\nworkers = 2\nrun_slow = no\n", encoding="utf-8")
    monkeypatch.delenv("DSPERFECT_NONNEG_HORIZON", raising=False)
    monkeypatch.delenv("DSPERFECT_RUN_SLOW", raising=False)
    monkeypatch.setenv("DSPERFECT_WORKERS", "3")
    cfg = load_config(path)
    assert cfg.nonneg_horizon == 30
    assert cfg.workers == 3
    assert cfg.run_slow is False
    cfg = load_config(path, workers=5, run_slow=True)
    assert cfg.workers == 5 and cfg.run_slow is True
    cfg = load_config(path, env=False)
    assert cfg.workers == 2


def test_unknown_key_in_file(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("colour = red\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(path)


def test_missing_file_raises(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "nope.cfg")
