import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from partfn import cli
from partfn.graph import prism
from partfn.verifier import THEOREM, Verdict, GraphResult


def call(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def js(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_poly_k33(capsys):
    obj = js(capsys, "poly", "--graph", "K33", "--kind", "match")
    assert [int(x) for x in obj["coeffs"]] == [1, 9, 18, 6]


def test_obs_and_float_view(capsys):
    obj = js(capsys, "obs", "--graph", "K33", "--lam", "1,1/2", "--sizes")
    assert F(obj["points"][0]["occupancy"]) == F(7, 34)
    assert len(obj["points"]) == 2
    fl = js(capsys, "obs", "--graph", "K33", "--float")
    assert "float_view_lossy" in fl and "exact" in fl
    assert json.loads(json.dumps(fl["exact"])) == js(capsys, "obs", "--graph", "K33")


def test_tune_and_free_volume(capsys):
    obj = js(capsys, "obs", "--graph", "K33", "--kind", "ind", "--tune", "1", "--free-volume", "0,1")
    assert F(obj["free_volume"]["1"]) == 2
    assert obj["tuned_lambda"]


def test_hier_example(capsys):
    obj = js(capsys, "hier", "--zg", "1,5,2", "--zh", "1,2,3")
    assert obj["flags"]["COUNT"] is True and obj["flags"]["MAX"] is False
    g = js(capsys, "hier", "--g", "H_dn(3,12)", "--h", "K33+prism")
    assert g["flags"]["FV"] is True


def test_dist_example(capsys):
    obj = js(capsys, "dist", "--g", "C8", "--h", "C4+C4", "--rmax", "4", "--exact")
    assert F(obj["lower"]) == F(7, 16) and F(obj["exact"]) == F(1, 2)


def test_lp_example(capsys):
    obj = js(capsys, "lp", "--d", "3", "--lam", "1")
    assert F(obj["optimum"]) == F(7, 34)
    code, text, _ = call(capsys, "lp", "--d", "2", "--kind", "ind", "--format", "lp")
    assert code == 0 and "Maximize" in text


def test_llt_modes(capsys):
    obj = js(capsys, "llt", "--K", "25")
    assert obj["K"] == 25
    code, text, _ = call(capsys, "llt", "--K", "4", "--csv")
    assert text.startswith("k,prob,gaussian,deviation\n")
    r = js(capsys, "llt", "--mode", "ratio", "--n", "120", "--k", "30", "--rmax", "0")
    assert r["ok"] is True


def test_audit(capsys):
    obj = js(capsys, "audit", "--graph", "prism", "--d", "3", "--n", "12", "--k", "3", "--case", "Small1")
    assert obj["inequalities"][-1]["holds"] is True


def test_verify_and_out_round_trip(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, _, _ = call(capsys, "verify", "coef", "--d", "2", "--n", "8", "--out", str(out), "--jobs", "1")
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["summary"]["failed"] == 0 and obj["label"] == "conjecture"
    code, text, _ = call(capsys, "verify", "coef", "--d", "2", "--n", "8", "--jobs", "1")
    assert text == out.read_text()


def test_verify_potts_failure_is_not_theorem(capsys):
    code, text, _ = call(capsys, "verify", "coef", "--d", "3", "--n", "6", "--kind", "potts", "--q", "3")
    obj = json.loads(text)
    assert code == 0 and obj["summary"]["failed"] == 1
    repro = obj["results"][[r["pass"] for r in obj["results"]].index(False)]["repro"]
    g6 = repro.split("--graph6 ")[1].strip("'")
    again = js(capsys, "verify", "coef", "--d", "3", "--n", "6", "--kind", "potts", "--q", "3", "--graph6", g6)
    assert again["summary"]["failed"] == 1


def test_exit_one_on_theorem_failure(capsys, monkeypatch):
    from partfn import verifier

    def broken(*a, **kw):
        return Verdict("part", {}, THEOREM, [GraphResult("E{Sw", False, {"lambda": "1"})])
    monkeypatch.setattr(verifier, "verify_partition_dominance", broken)
    code, _, _ = call(capsys, "verify", "part", "--d", "3", "--n", "6")
    assert code == cli.EXIT_THEOREM == 1


def test_json_graph_input(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(prism().to_json()))
    obj = js(capsys, "poly", "--graph", str(p))
    assert int(obj["coeffs"][3]) == 4


@pytest.mark.parametrize("argv", [
    ["poly", "--graph", "not a graph!"],
    ["poly", "--graph", "K33", "--kind", "potts"],
    ["poly", "--graph", "K33", "--q", "3"],
    ["obs", "--graph", "K33", "--lam", "x"],
    ["dist", "--g", "C8", "--h", "C8", "--rmax", "0"],
    ["verify", "coef", "--d", "3"],
    ["verify", "nonsense"],
    ["poly", "--graph", "missing.json"],
    [],
])
def test_usage_errors(capsys, argv):
    assert call(capsys, *argv)[0] == cli.EXIT_USAGE


def test_capacity_exit(capsys, monkeypatch):
    monkeypatch.delenv("PARTFN_CAPACITY", raising=False)
    code, _, err = call(capsys, "verify", "coef", "--d", "3", "--n", "18")
    assert code == cli.EXIT_CAPACITY == 3 and "capacity" in err


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "partfn.cli", "hier", "--zg", "1,3,1", "--zh", "1,2,1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["flags"]["COEF"] is True
