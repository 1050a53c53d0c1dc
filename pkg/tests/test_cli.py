import json
import math

import pytest

from gupmag.cli import main, parse_range, read_config_file
from gupmag.table import SweepTable


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def error_record(err):
    lines = [ln for ln in err.splitlines() if ln.strip()]
    assert len(lines) == 1
    return json.loads(lines[0])


# table --------------------------------------------------------------------


def sample_table():
    return SweepTable(
        ["x", "label", "flag", "missing"],
        [[0.1, "a,b", True, None], [1 / 3, 'say "hi"', False, 2], [math.nan, "plain", False, -7]],
    )


def test_csv_format_contract():
    text = sample_table().to_csv()
    assert "\r" not in text
    lines = text.split("\n")
    assert lines[0] == "schema_version,x,label,flag,missing"
    assert lines[1] == '1,0.1,"a,b",true,'
    assert lines[2] == '1,0.3333333333333333,"say ""hi""",false,2'
    assert lines[3] == "1,,plain,false,-7"


def test_csv_and_json_round_trip():
    t = sample_table()
    assert SweepTable.from_csv(t.to_csv()) == t
    assert SweepTable.from_json(t.to_json()) == t
    assert SweepTable.from_json(t.to_json()).to_json() == t.to_json()


def test_meta_line_optional():
    t = sample_table()
    t.meta["generated"] = "now"
    assert t.to_csv(with_meta=True).startswith("# ")
    assert SweepTable.from_csv(t.to_csv(with_meta=True)) == t
    assert "meta" not in json.loads(t.to_json())


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        SweepTable(["a", "b"], [[1]])


# argument handling --------------------------------------------------------


def test_parse_range():
    assert parse_range("1:3:3") == [1.0, 2.0, 3.0]
    assert parse_range("1:100:3:log") == pytest.approx([1.0, 10.0, 100.0])


def test_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# trap\nomega0 = 2.0\nB = 0.5  # field\n\nbeta=0\n")
    assert read_config_file(str(path)) == {"omega0": 2.0, "B": 0.5, "beta": 0.0}


@pytest.mark.parametrize("rng", ["5:1:3", "1:2:1", "0:1:3:log", "1:2", "a:b:c"])
def test_bad_range_exit_2(capsys, rng):
    code, out, err = run(capsys, "spectrum", "--range", rng)
    assert code == 2
    assert error_record(err)["error"] == "RANGE_INVALID"
    assert out == ""


def test_bad_config_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("colour = blue\n")
    code, _, err = run(capsys, "spectrum", "--config", str(path))
    assert code == 2 and error_record(err)["error"] == "CONFIG_INVALID"
    code, _, err = run(capsys, "thermo", "--set", "beta=0.9", "--set", "T=1")
    assert code == 2 and error_record(err)["error"] == "GUP_VIOLATION"
    code, _, err = run(capsys, "thermo", "--set", "beta=0.2", "--set", "T=30")
    assert code == 2 and error_record(err)["error"] == "THERMAL_REGIME_VIOLATION"


# subcommands --------------------------------------------------------------


def test_spectrum_undeformed_multiplicities(capsys):
    code, out, _ = run(capsys, "spectrum", "--set", "beta=0", "--set", "B=0", "--max-N", "5", "--no-meta")
    assert code == 0
    rows = SweepTable.from_csv(out).dicts()
    assert all(r["multiplicity"] == r["N"] + 1 for r in rows)
    assert all(r["E_exact"] == r["E_first_order"] for r in rows)


def test_spectrum_deformed_pairs(capsys):
    code, out, _ = run(capsys, "spectrum", "--set", "beta=0.0707106781", "--set", "B=0", "--max-N", "8", "--no-meta")
    assert code == 0
    for r in SweepTable.from_csv(out).dicts():
        assert r["multiplicity"] == (1 if r["l"] == 0 else 2)


def test_wavefn_samples(capsys):
    code, out, _ = run(capsys, "wavefn", "--n", "1", "--l", "1", "--points", "11", "--format", "json")
    assert code == 0
    t = SweepTable.from_json(out)
    assert len(t.rows) == 11 and t.meta["norm"] == pytest.approx(1.0, abs=1e-10)
    code, _, err = run(capsys, "wavefn", "--set", "beta=0")
    assert code == 2 and error_record(err)["error"] == "UNDEFORMED_NOT_VERIFIABLE"


def test_verify_pass(capsys):
    code, out, err = run(capsys, "verify", "--no-meta")
    assert code == 0, err
    assert all(SweepTable.from_csv(out).column("passed"))


def test_verify_perturbed_fails(capsys):
    code, out, err = run(capsys, "verify", "--perturb-energy", "0.01", "--no-meta")
    assert code == 1
    assert error_record(err)["error"] == "VERIFY_FAILED"
    rows = [r for r in SweepTable.from_csv(out).dicts() if r["check"] == "residual"]
    assert all(not r["passed"] and "plateau" in r["detail"] for r in rows)
    assert all(r["value"] == pytest.approx(0.01, rel=1e-3) for r in rows)


def test_verify_undeformed(capsys):
    code, _, err = run(capsys, "verify", "--set", "beta=0")
    assert code == 2
    assert error_record(err)["error"] == "UNDEFORMED_NOT_VERIFIABLE"


def test_thermo_point_with_baseline(capsys):
    code, out, _ = run(capsys, "thermo", "--baseline-beta0", "--format", "json", "--no-meta")
    assert code == 0
    (row,) = SweepTable.from_json(out).dicts()
    assert row["status"] == "ok"
    assert row["B1"] == pytest.approx(0.3578341787941267, rel=1e-9)
    assert row["M_closed"] < 0


def test_sweep_flags_invalid_points(capsys):
    code, out, _ = run(capsys, "sweep", "--var", "T", "--range", "10:4000:4:log", "--no-meta")
    assert code == 0
    rows = SweepTable.from_csv(out).dicts()
    assert [r["status"] for r in rows][-1] == "invalid:ThermalRegimeViolation"
    assert rows[0]["status"] == "ok"


def test_sweep_family_and_output_file(capsys, tmp_path):
    out = tmp_path / "fig.json"
    code, _, _ = run(
        capsys, "sweep", "--var", "B", "--range", "0.1:3:5", "--family", "0,0.001",
        "--baseline-beta0", "--format", "json", "--out", str(out),
    )  # fmt: skip
    assert code == 0
    t = SweepTable.from_json(out.read_text())
    assert t.axis["var"] == "B" and len(t.rows) == 10
    assert "generated" in t.meta
    fam = t.column("family")
    assert fam[:5] == ["0.0"] * 5 and fam[5:] == ["0.001"] * 5
    assert t.dicts()[6]["B2"] == pytest.approx(1.7687758900875282, rel=1e-9)


def test_sweep_needs_axis(capsys):
    code, _, err = run(capsys, "sweep")
    assert code == 2 and error_record(err)["error"] == "RANGE_INVALID"


def test_deterministic_output(capsys):
    args = ("sweep", "--var", "B", "--range", "0.1:2:4", "--no-meta")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
