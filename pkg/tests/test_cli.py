import pytest

from dsperfect.catalog import data_dir
from dsperfect.cli import build_parser, main


def test_params_general_csv(capsys):
    assert main(["params", "general", "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n2,s,r_num,r_den"
    assert len(lines) == 18
    assert "5,504,20,3" in lines


def test_bad_lattice_name_is_input_error(capsys):
    assert main(["lattice", "info", "Q7"]) == 2
    assert "错误" in capsys.readouterr().err


def test_lattice_info(capsys):
    assert main(["lattice", "info", "E6+E8"]) == 0
    out = capsys.readouterr().out
    assert "312" in out
    assert "3^1" in out


def test_lattice_theta_to_file(tmp_path):
    out = tmp_path / "e8.qs"
    assert main(["lattice", "theta", "E8", "--bound", "4", "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert "2 240" in text and "4 2160" in text


def test_qseries_feasible_504(capsys):
    assert main(["qseries", "feasible", str(data_dir() / "general_504.problem")]) == 0
    out = capsys.readouterr().out
    assert "feasible False" in out
    assert "lower 52511/11" in out
    assert "upper 43124/11" in out


def test_genus_mass(capsys):
    assert main(["genus", "mass", "3^1"]) == 0
    assert capsys.readouterr().out.strip() == "691/" + str(2**23 * 3**9 * 5**3 * 7 * 11 * 13)


def test_missing_file_is_input_error(tmp_path):
    assert main(["qseries", "feasible", str(tmp_path / "none.problem")]) == 2


def test_classify14_rejects_unknown_mode():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["classify14", "--mode", "everything"])


def test_genus_descend_exponent_six(capsys):
    args = ["genus", "descend", "A2", "--prime", "2", "--exponent", "6", "--dual-min", "1/2", "--target-min", "2"]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert out.startswith("survivors 1 nodes 3")
    assert "det 3 min 2" in out
