import json
import subprocess
import sys

import pytest

from torsor.algebra.ideals import Ideal
from torsor.cli import main, run
from torsor.support import stable_set_from_json


def cli(*argv):
    return run(list(argv))


def test_localcoh_example():
    code, out = cli("localcoh", "--ring", "Z/6", "--ideal", "2", "--module", "self")
    assert code == 0
    assert [{"i": h["i"], "invariant_factors": h["invariant_factors"]} for h in out["H"]] == [
        {"i": 0, "invariant_factors": [2]}, {"i": 1, "invariant_factors": []}]


def test_gamma_example():
    code, out = cli("gamma", "--ring", "Q[x,y]", "--ideal", "x", "--module", "quot xy")
    assert code == 0 and out["generators"] == ["y"]


def test_classify_example():
    code, out = cli("idem", "classify", "--ring", "Z/30")
    assert code == 0 and out["count"] == 8
    assert sorted(len(c["support"]) for c in out["classes"]) == [0, 1, 1, 1, 2, 2, 2, 3]


def test_graded_window():
    code, out = cli("localcoh", "--ring", "Q[x,y]", "--ideal", "x,y", "--module", "self",
                    "--window=-2:0", "--degree", "2")
    assert code == 0
    dims = out["H"][0]["dims"]
    assert dims["(-1,-1)"] == 1 and dims["(0,-1)"] == 0


def test_idem_verbs():
    assert cli("idem", "check", "--ring", "Z/6", "--stable-set", "2")[1]["idempotent"]
    assert not cli("idem", "check", "--ring", "Z/2", "--module", "free 2")[1]["idempotent"]
    code, out = cli("idem", "leq", "--ring", "Z/6", "--stable-set", "2", "--stable-set", "3")
    assert code == 0 and out == {"leq": False, "hom_pairs": 0, "support_containment": False}
    code, out = cli("idem", "continuity", "--ring", "Z/6", "--ring", "Z/3", "--map", "1",
                    "--stable-set", "3", "--stable-set", "0")
    assert code == 0 and out["agree"] and out["iv"]


def test_ideal_ops():
    code, out = cli("ideal", "intersection", "--ring", "Q[x,y]", "--ideal", "x", "--ideal", "y")
    assert out["gens"] == ["x*y"]
    assert Ideal.from_json(out) == Ideal.from_json({"ring": "Q[x,y]", "gens": ["x*y"]})
    assert cli("ideal", "radical-contains", "--ring", "Q[x,y]", "--ideal", "x", "--ideal", "x^2")[1]["value"]


def test_sos_round_trip():
    code, out = cli("sos", "--ring", "Z/30", "--stable-set", "2,5")
    assert code == 0 and out["base_ideal"] == ["10"]
    Z = stable_set_from_json(out["stable_set"])
    assert sorted(Z.model.ring.prime_label(i) for i in Z.data) == ["(2)", "(5)"]
    again = cli("sos", "--ring", "Z/30", "--stable-set", json.dumps(out["stable_set"]))[1]
    assert again == out


@pytest.mark.parametrize("argv,code,err", [
    (["bogus"], 2, "invalid-input"),
    (["gamma", "--ring", "Z/6", "--ideal", "2", "--module", "what"], 2, "invalid-input"),
    (["localcoh", "--ring", "Q[x,y]", "--ideal", "x", "--module", "self"], 1, "window-required"),
    (["idem", "check", "--ring", "Q[x]", "--stable-set", "all"], 2, "invalid-input"),
])
def test_error_codes(argv, code, err):
    c, out = run(argv)
    assert c == code and out["error"] == err


def test_byte_identical_output(capsys):
    argv = ["idem", "classify", "--ring", "Z/6"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    assert first.endswith("\n") and json.loads(first)["count"] == 4


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "torsor.cli", "suite", "--only", "4"],
                       capture_output=True, text=True, timeout=300)
    assert p.returncode == 0
    res = json.loads(p.stdout)
    assert res["passed"] and [c["id"] for c in res["criteria"]] == [4]
