import csv
import io
import json

import pytest

from x2susy.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_json_is_deterministic(capsys):
    args = ("verify", "--stage", "spaces,quasiops", "--enn", "3", "--samples", "2", "--seed", "4")
    c1, o1, _ = run(capsys, *args)
    c2, o2, _ = run(capsys, *args)
    assert c1 == c2 == EXIT_OK and o1 == o2
    data = json.loads(o1)
    assert data["overall"] == "pass" and data["records"]
    assert {"check_id", "anchor", "params", "status", "witness"} <= set(data["records"][0])


def test_verify_timings_opt_in(capsys):
    _, out, _ = run(capsys, "verify", "--stage", "spaces", "--enn", "3", "--samples", "1", "--timings")
    assert "seconds" in json.loads(out)["records"][0]


@pytest.mark.parametrize("fmt", ["csv", "markdown"])
def test_verify_formats(capsys, fmt):
    code, out, _ = run(capsys, "verify", "--stage", "spaces", "--enn", "3", "--samples", "1", "--format", fmt)
    assert code == EXIT_OK
    assert out.startswith("check_id," if fmt == "csv" else "| check_id |")


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--enn", "2"),
        ("verify", "--alpha", "1", "--enn", "3"),
        ("verify", "--stage", "nonsense"),
        ("potential", "--example", "2", "--alpha", "1/2"),
        ("potential", "--alpha", "2"),
        ("potential", "--example", "1", "--q-min", "-1"),
        ("show-op", "--index", "7"),
        ("laguerre", "--alpha", "0"),
        ("spectrum", "--alpha", "abc"),
    ],
)
def test_bad_input_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and err.startswith("error:")


def test_missing_config(capsys, tmp_path):
    code, _, _ = run(capsys, "spectrum", "--config", str(tmp_path / "none.ini"))
    assert code == EXIT_INPUT


def test_potential_csv(capsys):
    code, out, _ = run(capsys, "potential", "--example", "1", "--q-min", "1", "--q-max", "2", "--steps", "11")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["q", "V_minus", "V_plus"] and len(rows) == 12
    assert abs(float(rows[1][1]) - 547 / 200) < 1e-12


def test_config_and_flag_precedence(capsys, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\nalpha = 5/2\nenn = 3\na1 = 1\nformat = csv\n")
    _, out, _ = run(capsys, "spectrum", "--config", str(ini))
    assert [r[1] for r in csv.reader(io.StringIO(out))][1:] == ["2", "3", "4"]
    _, out, _ = run(capsys, "spectrum", "--config", str(ini), "--a1", "2")
    assert [r[1] for r in csv.reader(io.StringIO(out))][1:] == ["4", "6", "8"]


def test_config_unknown_key(capsys, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\nbogus = 1\n")
    assert run(capsys, "spectrum", "--config", str(ini))[0] == EXIT_INPUT


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("X2SUSY_OUTPUT_DIR", str(tmp_path / "out"))
    code, out, _ = run(capsys, "potential", "--example", "2", "--steps", "5", "-o", "tab.csv")
    assert code == EXIT_OK and "wrote" in out
    assert (tmp_path / "out" / "tab.csv").exists()


def test_spectrum_example1(capsys):
    code, out, _ = run(capsys, "spectrum", "--example", "1", "--format", "json")
    assert code == EXIT_OK
    assert [r[1] for r in json.loads(out)["rows"]] == ["4", "6", "8"]


def test_show_op_json(capsys):
    code, out, _ = run(capsys, "show-op", "--family", "K", "--index", "1", "--alpha", "5/2", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["family"] == "K" and data["o_plus"] is not None


def test_sector_and_laguerre(capsys):
    assert run(capsys, "sector", "--example", "1", "--steps", "5")[0] == EXIT_OK
    code, out, _ = run(capsys, "laguerre", "--alpha", "5/2", "--n-max", "3")
    assert code == EXIT_OK and "MISMATCH" not in out


def test_precision_flag(capsys):
    code, out, _ = run(capsys, "potential", "--example", "1", "--steps", "3", "--precision", "113", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["metadata"]["precision_bits"] == 113


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_FAIL, EXIT_INPUT}) == 3
