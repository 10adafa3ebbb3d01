import csv
import io
import json
import subprocess
import sys

import pytest

from maxdet.cli import TABLE_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_bound_13(capsys):
    d = run_json(capsys, "bound", "13")
    by = {e["name"]: e for e in d["entries"]}
    assert by["conditional"]["R_if_representable"] == pytest.approx(0.4839, abs=5e-4)
    assert by["kms"]["R_if_representable"] == pytest.approx(0.2410, abs=5e-4)
    assert d["reference"]["R"] == pytest.approx(0.8579, abs=1e-4)


def test_bound_hadamard_order(capsys):
    d = run_json(capsys, "bound", "12")
    by = {e["name"]: e for e in d["entries"]}
    assert by["unconditional"]["ln_R"] == 0


def test_bound_csv(capsys):
    code, out, _ = run(capsys, "bound", "13", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["name"] == "unconditional"


def test_witness_round_trip(capsys, tmp_path):
    for n, det in ((5, "48"), (11, "248832"), (3, "4")):
        prefix = tmp_path / f"w{n}"
        d = run_json(capsys, "witness", str(n), "--out", str(prefix))
        assert d["det_abs"] == det and d["verified"]
        assert (tmp_path / f"w{n}.txt").exists()
        v = run_json(capsys, "verify", str(prefix) + ".json")
        assert v["verified"] and v["det_abs"] == det


def test_verify_detects_tampering(capsys, tmp_path):
    prefix = tmp_path / "w11"
    run_json(capsys, "witness", "11", "--out", str(prefix))
    cert = json.loads((tmp_path / "w11.json").read_text())
    cert["det_abs"] = "248833"
    (tmp_path / "w11.json").write_text(json.dumps(cert))
    code, out, _ = run(capsys, "verify", str(prefix) + ".json")
    assert code == 1 and json.loads(out)["verified"] is False


def test_verify_matrix_file(capsys, tmp_path):
    p = tmp_path / "h2.txt"
    p.write_text("2\n++\n+-\n")
    d = run_json(capsys, "verify", str(p))
    assert d["hadamard"] and d["det_abs"] == "2"


def test_table(capsys):
    code, out, _ = run(capsys, "table", "3", "16", "--witness")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == TABLE_COLUMNS
    assert [int(r["n"]) for r in rows] == list(range(3, 17))
    r13 = next(r for r in rows if r["n"] == "13")
    assert float(r13["reference_R"]) == pytest.approx(0.8579, abs=1e-4)
    r5 = next(r for r in rows if r["n"] == "5")
    assert r5["witness_det"] == "48" and r5["reference_D"] == "48"


def test_table_94(capsys):
    code, out, _ = run(capsys, "table", "94", "94")
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["conditional_R"]) == pytest.approx(0.0605, abs=5e-4)
    assert float(row["kms_R"]) == pytest.approx(0.0560, abs=5e-4)


def test_orders(capsys):
    d = run_json(capsys, "orders", "--cap", "16", "--mode", "constructive")
    assert [o["order"] for o in d["orders"]] == [1, 2, 4, 8, 12, 16]


def test_gaps(capsys):
    d = run_json(capsys, "gaps", "--cap", "100")
    row = next(r for r in d["rows"] if r["n"] == 10)
    assert row["lambda"] == 4
    assert len(d["rows"]) == 50


def test_excess(capsys):
    d = run_json(capsys, "excess", "8")
    assert d["sigma_achieved"] == 20 and d["exhaustive"] and d["hadamard"]


def test_oracle(capsys):
    assert run_json(capsys, "oracle", "5")["D"] == "48"


@pytest.mark.parametrize("argv,code", [
    (["oracle", "9"], 2),
    (["table", "10", "5"], 2),
    (["verify", "/nonexistent/file.txt"], 2),
    (["bound", "30", "--cap", "20"], 3),
    (["excess", "52"], 4),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code and err.startswith("error:")


def test_argparse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "0"])
    assert exc.value.code == 2


def test_deterministic(capsys):
    a = run(capsys, "witness", "21", "--seed", "5")[1]
    b = run(capsys, "witness", "21", "--seed", "5")[1]
    assert a == b


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "maxdet.cli", "oracle", "4"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["D"] == "16"
