import csv
import io
import json

import pytest

from swkblab.cli import EXIT_NUMERIC, EXIT_VALIDATION, run, six_sig


def _csv(text):
    return list(csv.DictReader(io.StringIO("".join(l + "\n" for l in text.splitlines() if not l.startswith("#")))))


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_six_sig():
    assert six_sig(1.0) == "1.00000"
    assert six_sig(0.9976736) == "0.997674"
    assert six_sig(-22.43568) == "-22.4357"


def test_swkb_table(capsys):
    code, out, _ = call(capsys, "swkb", "--family", "xlag2", "--g", "3", "--n-max", "2")
    assert code == 0
    rows = _csv(out)
    assert [r["I_over_pi_hbar_6sig"] for r in rows] == ["0.997674", "1.99781"]
    assert list(rows[0])[:7] == ["n", "I", "I_over_pi_hbar", "err", "err_rescaled", "delta", "n_intervals"]


def test_swkb_params_string(capsys):
    code, out, _ = call(capsys, "swkb", "--family", "mi", "--params", "base=L;D1=1;D2=2;g=5", "--n-max", "3")
    assert code == 0 and len(_csv(out)) == 3


def test_spectrum_table(capsys):
    code, out, _ = call(capsys, "spectrum", "--pot", "step:2", "--count", "7")
    assert code == 0
    assert [r["E_6sig"] for r in _csv(out)] == [
        "-1.30908", "1.09714", "2.93715", "5.04459", "6.96479", "9.02870", "10.9756"
    ]


def test_hermite_states_period(capsys):
    code, out, _ = call(capsys, "hermite-states", "--pot", "gamma:5/12")
    assert code == 0 and "equidistant every 17 states" in out


def test_json_output(capsys):
    code, out, _ = call(capsys, "--format", "json", "spectrum", "--pot", "gamma:1/2", "--count", "3")
    recs = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and recs[0]["exact"] == 1 and recs[1]["E_6sig"] == "1.96156"


def test_invert_dump(capsys):
    code, out, _ = call(capsys, "invert", "--spectrum", "linear:2", "--ansatz", "mirror", "--points", "4")
    rows = _csv(out)
    assert code == 0 and {r["branch"] for r in rows} == {"minus", "plus"}
    assert all(abs(abs(float(r["x"])) - float(r["absW"])) < 1e-12 for r in rows)


def test_darboux_modes(capsys):
    code, out, _ = call(capsys, "darboux", "--pot", "step:4", "--mode", "isoseq", "--grid", "-2,2,5")
    assert code == 0 and len(_csv(out)) == 5
    code, out, _ = call(capsys, "darboux", "--pot", "step:4", "--mode", "ka:1,2", "--what", "states", "--grid", "-1,1,3", "--levels", "2")
    assert code == 0 and list(_csv(out)[0]) == ["x", "psi_0", "psi_3"]


def test_wigner_diagnostics(capsys):
    code, out, _ = call(capsys, "wigner", "--pot", "step:0", "--grid", "4,21", "--diagnostics")
    row = _csv(out)[0]
    assert code == 0 and abs(float(row["normalization"]) - 1) < 1e-3


def test_catalog_commands(capsys):
    code, out, _ = call(capsys, "catalog", "list")
    assert code == 0 and "xlag2" in out
    code, out, _ = call(capsys, "catalog", "show", "morse", "--params", "h=2.5;mu=1")
    assert code == 0 and len(_csv(out)) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--pot", "step:x", "--count", "3"],
        ["spectrum", "--pot", "step:2"],
        ["swkb", "--family", "L", "--params", "g=0.1", "--n-max", "2"],
        ["darboux", "--pot", "step:6", "--mode", "isoseq"],
        ["darboux", "--pot", "step:4", "--mode", "ka:1"],
        ["invert", "--spectrum", "linear:2", "--ansatz", "gamma:3"],
        ["--hbar", "2", "spectrum", "--pot", "step:2", "--count", "2"],
        ["nosuchcommand"],
    ],
)
def test_validation_errors(capsys, argv):
    assert call(capsys, *argv)[0] == EXIT_VALIDATION


def test_numeric_failure(capsys):
    # a gap beyond what the tan-product ansatz can hold
    code, _, err = call(capsys, "invert", "--spectrum", "quad:1,1", "--ansatz", "tanprod:0.5", "--wsq-max", "1e6")
    assert code == EXIT_NUMERIC and "numerical failure" in err


def test_manifest_replay_is_identical(capsys, tmp_path):
    m = tmp_path / "run.json"
    code, first, _ = call(capsys, "--manifest", str(m), "spectrum", "--pot", "stepramp:2,1", "--count", "3")
    assert code == 0
    manifest = json.loads(m.read_text())
    assert manifest["command"] == "spectrum" and manifest["deterministic"] is True
    code, second, _ = call(capsys, "replay", str(m))
    assert code == 0 and second == first
