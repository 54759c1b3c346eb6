from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from swapfbct.cli import main
from swapfbct.export import load_schema
from swapfbct.field import get_field
from swapfbct.functions import inverse_function, write_sbox_file


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fbct_prints_uniformity(capsys):
    code, out, _ = run(capsys, "fbct", "--field", "2^6", "--fn", "swap:0,1")
    assert code == 0 and "second_order_uniformity: 8" in out
    code, out, _ = run(capsys, "fbct", "--field", "29", "--fn", "swap:0,1")
    assert "second_order_uniformity: 4" in out and "witness: a=2 b=12" in out


def test_fbct_small_inverse_matrix(capsys):
    code, out, _ = run(capsys, "fbct", "--field", "2^2", "--fn", "inv", "--format", "json")
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("matrix"))
    m = obj["matrix"]
    assert m[0] == [4, 4, 4, 4]
    assert m[2][3] == 4 and m[1][2] == 4


def test_spectrum_text_and_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--field", "2^5", "--fn", "swap:0,1")
    assert out.strip() == '{"0":870,"4":60}'
    code, out, _ = run(capsys, "spectrum", "--field", "2^5", "--fn", "swap:0,1", "--format", "json")
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("spectrum"))
    assert obj["second_order_uniformity"] == 4
    code, out, _ = run(capsys, "spectrum", "--field", "2^3", "--scope", "all")
    assert json.loads(out) == {"0": 42, "8": 22}


def test_csv_output(tmp_path, capsys):
    path = tmp_path / "m.csv"
    code, out, _ = run(capsys, "fbct", "--field", "2^3", "--format", "csv", "--out", str(path))
    assert code == 0 and "second_order_uniformity: 0" in out
    lines = path.read_text().splitlines()
    assert lines[0] == "a,b,value" and len(lines) == 1 + 7 * 6


def test_ddt(capsys):
    code, out, _ = run(capsys, "ddt", "--field", "2^4", "--fn", "inv")
    assert out.startswith("differential_uniformity: 4")


def test_closedform(capsys):
    code, out, _ = run(capsys, "closedform", "--field", "2^6", "--fn", "swap:1,g", "--gamma", "6",
                       "--a", "6", "--b", "23", "--format", "json")
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("closedform"))
    assert obj["gamma"] == 6 and obj["value"] == 0 and obj["oracle"] == 4
    code, out, _ = run(capsys, "closedform", "--field", "2^6", "--fn", "swap:1,6", "--a", "6",
                       "--b", "23", "--f8-rule", "companion")
    assert "value: 4" in out and "oracle: 4" in out
    code, out, _ = run(capsys, "closedform", "--field", "37", "--fn", "swap:0,1", "--a", "5", "--b", "9")
    assert "(upper bound)" in out


def test_closedform_general_transposition_agrees_with_oracle(capsys):
    for alpha, beta, a, b in [(3, 9, 5, 17), (0, 7, 2, 30), (7, 0, 11, 4), (21, 2, 1, 3)]:
        code, out, _ = run(capsys, "closedform", "--field", "2^5", "--fn", f"swap:{alpha},{beta}",
                           "--a", str(a), "--b", str(b), "--format", "json")
        obj = json.loads(out)
        assert obj["value"] == obj["oracle"], (alpha, beta, a, b)


def test_verify_and_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--experiment", "remark-conjecture", "--field", "2^7")
    assert code == 0 and out.startswith("[PASS]")
    code, out, _ = run(capsys, "verify", "--experiment", "p3-conjecture", "--field", "3^3", "--format", "json")
    assert code == 4
    jsonschema.validate(json.loads(out), load_schema("report"))


def test_sweep_command(capsys):
    code, out, _ = run(capsys, "sweep", "--limit", "30", "--format", "json")
    obj = json.loads(out)
    jsonschema.validate(obj, load_schema("report"))
    assert obj["experiment"] == "odd-p-sweep"
    assert code == 4


def test_gamma_classes(capsys):
    code, out, _ = run(capsys, "--list-gamma-classes", "--field", "2^3")
    assert code == 0 and "in_F8" in out
    code, out, _ = run(capsys, "gamma-classes", "--field", "2^4", "--format", "json")
    assert sorted(g for gs in json.loads(out)["classes"].values() for g in gs) == list(range(2, 16))


@pytest.mark.parametrize("argv,code", [
    (["fbct", "--field", "2^13"], 2),
    (["fbct", "--field", "2^3", "--out", "/nonexistent/dir/x"], 3),
    (["fbct", "--field", "banana"], 1),
    (["fbct", "--field", "2^3", "--fn", "swap:1,1"], 1),
    (["fbct", "--field", "2^3", "--fn", "swap:1,9"], 1),
    (["fbct", "--field", "2^3", "--fn", "cube"], 1),
    (["fbct", "--field", "2^3", "--bogus"], 1),
    (["closedform", "--field", "5", "--fn", "swap:1,2", "--a", "1", "--b", "2"], 1),
    (["verify", "--field", "2^3"], 1),
    ([], 1),
])
def test_error_exit_codes(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_table_selector(tmp_path, capsys):
    F = get_field(2, 4)
    path = tmp_path / "inv.txt"
    write_sbox_file(inverse_function(F), path)
    code, out, _ = run(capsys, "spectrum", "--fn", f"table:{path}")
    assert code == 0
    code2, out2, _ = run(capsys, "spectrum", "--field", "2^4", "--fn", "inv")
    assert out == out2


@pytest.mark.parametrize("workers", ["1", "4", "8"])
def test_outputs_identical_across_workers(workers, capsys):
    base = run(capsys, "fbct", "--field", "3^4", "--fn", "swap:1,5", "--format", "json", "--workers", "1")[1]
    assert run(capsys, "fbct", "--field", "3^4", "--fn", "swap:1,5", "--format", "json",
               "--workers", workers)[1] == base


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "swapfbct", "spectrum", "--field", "2^5", "--fn", "swap:0,1"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == '{"0":870,"4":60}'
