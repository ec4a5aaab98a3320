import json

import pytest

from nullmsg.cli import main
from nullmsg.io import cg_to_json
from nullmsg.cost import ocean_target


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_know_exit_codes(capsys):
    code, out = run(capsys, "--protocol", "p1", "--f", "1", "know", "--fact", "v=1")
    assert code == 1 and "indistinguishable run" in out.out
    assert run(capsys, "--protocol", "p1", "--f", "0", "know", "--fact", "v=1")[0] == 0
    assert run(capsys, "--protocol", "p2", "--f", "1", "know", "--fact", "v=1")[0] == 0


def test_simulate_json(capsys):
    code, out = run(capsys, "--json", "--protocol", "p2", "simulate", "--vs", "0", "--pattern", "p@1>d")
    d = json.loads(out.out)
    assert code == 0 and d["pattern"] == [[1, 1, [2]]]


def test_enumerate(capsys):
    code, out = run(capsys, "--json", "--protocol", "p2", "enumerate")
    assert json.loads(out.out) == {"runs": 19, "patterns": 30, "closed_form": 30}


def test_checks(capsys):
    code, out = run(capsys, "--json", "--protocol", "p1", "check", "--condition", "block")
    assert code == 1 and json.loads(out.out)["witness"] == ["p"]
    code, out = run(capsys, "--json", "--protocol", "p2", "check", "--condition", "choir")
    assert code == 0 and json.loads(out.out)["choir"] == ["s", "p"]
    assert run(capsys, "--protocol", "p2", "--exhaustive", "check", "--condition", "ffailed")[0] == 0


def test_graph_and_synth(capsys, tmp_path):
    code, out = run(capsys, "--protocol", "p2", "graph", "--dot")
    assert code == 0 and out.out.count("dashed") == 2
    target = tmp_path / "ocean.json"
    target.write_text(json.dumps(cg_to_json(ocean_target())))
    code, out = run(capsys, "--net", "ocean", "--f", "2", "check", "--condition", "nice-it", "--target", str(target))
    assert code == 0
    assert run(capsys, "--net", "ocean", "--f", "2", "check", "--condition", "robust", "--target", str(target))[0] == 0
    assert run(capsys, "--net", "ocean", "--f", "3", "check", "--condition", "robust", "--target", str(target))[0] == 1
    code, out = run(capsys, "--net", "ocean", "--f", "2", "synth", "--family", "nbm", "--target", str(target))
    desc = json.loads(out.out)
    assert desc["family"] == "nbm" and len(desc["target"]["edges"]) == 6
    inst = tmp_path / "inst.json"
    inst.write_text(json.dumps({"actors": ["p1"], "times": [1]}))
    code, out = run(capsys, "--net", "ocean", "--f", "1", "check", "--condition", "or-nec", "--target", str(target), "--instance", str(inst))
    assert code == 0
    code, out = run(capsys, "--net", "ocean", "--f", "1", "--protocol", f"or:{target},{inst}", "verify")
    assert code == 0


def test_cost(capsys):
    code, out = run(capsys, "--json", "cost", "--scenario", "ocean")
    d = json.loads(out.out)
    assert (d["cheapest_chain"], d["nice"], d["worst"], d["mixed"], d["baseline"]) == (1001, 2, 3003, 6206, 102102)


def test_verify_all(capsys):
    assert run(capsys, "verify", "--all")[0] == 0
    assert run(capsys, "--protocol", "p2", "verify", "--mutate")[0] == 1


def test_error_codes(capsys):
    assert run(capsys, "--net", "missing.json", "enumerate")[0] == 2
    assert run(capsys, "--protocol", "nope", "enumerate")[0] == 2
    assert run(capsys, "know", "--fact", "bogus")[0] == 2
    assert run(capsys, "--net", "complete:6", "--f", "3", "--horizon", "6", "--protocol", "flood", "enumerate")[0] == 3
