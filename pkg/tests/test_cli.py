import json
import os
import subprocess
import sys

import jsonschema
import pytest

from conftest import FIXTURES, SCHEMAS
from jumploci.cli import main

CDGA = FIXTURES / "cdga"
GYS = FIXTURES / "gysin"
ALEX = FIXTURES / "alexander"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


def schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text(encoding="utf-8"))


def check(doc, name):
    jsonschema.validate(doc, schema(name))


# --- per-command contracts -----------------------------------------------------

def test_cdga_validate(capsys):
    code, rep, _ = run_json(capsys, "cdga", "validate", CDGA / "heisenberg_model.json")
    assert code == 0 and rep["status"] == "pass" and rep["betti"] == [1, 2, 2]
    check(rep, "validation_report")
    code, rep, _ = run_json(capsys, "cdga", "validate", FIXTURES / "mutations" / "leibniz.json")
    assert code == 2 and rep["status"] == "fail"
    assert {v["axiom"] for v in rep["violations"]} >= {"leibniz"}
    check(rep, "validation_report")


def test_missing_file_and_bad_json(capsys, tmp_path):
    assert run(capsys, "cdga", "validate", tmp_path / "nope.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "cdga", "validate", bad)
    assert code == 1 and "not valid JSON" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "resonance", "compute", CDGA / "torus.json")[0] == 1
    assert run(capsys, "cdga", "validate", CDGA / "torus.json", "--samples", "0")[0] == 1
    assert run(capsys, "--version")[0] == 0


def test_resonance_compute(capsys):
    code, rep, _ = run_json(capsys, "resonance", "compute", CDGA / "solvable.json", "--degree", "1", "--depth", "1")
    assert code == 0
    check(rep, "resonance_locus")
    assert rep["contains_zero"] and not rep["whole_space"]
    assert sorted(c["generators"] for c in rep["components"]) == [["t1"], ["t1 - 1"]]
    code, rep, _ = run_json(capsys, "resonance", "compute", CDGA / "solvable.json", "--degree", "1", "--depth", "0")
    assert rep["whole_space"]
    code, rep, _ = run_json(capsys, "resonance", "compute", CDGA / "heisenberg_model.json",
                            "--degree", "1", "--depth", "1")
    (comp,) = rep["components"]
    assert comp["generators"] == ["t2^2", "t1*t2", "t1^2"]


def test_resonance_subspace(capsys, tmp_path):
    sub = tmp_path / "sub.json"
    sub.write_text(json.dumps({"matrix": [["1"], ["1"], ["0"], ["0"]]}))
    check(json.loads(sub.read_text()), "subspace_input")
    code, rep, _ = run_json(capsys, "resonance", "compute", CDGA / "e_times_e_ring.json",
                            "--degree", "1", "--depth", "1", "--subspace", sub)
    assert code == 0 and rep["variables"] == ["s1"]
    check(rep, "resonance_locus")


def test_resonance_finiteness(capsys):
    code, rep, _ = run_json(capsys, "resonance", "decide-finiteness", CDGA / "heisenberg_model.json", "--q", "1")
    assert code == 0 and rep["verdict"] == "FINITE"
    check(rep, "finiteness")
    code, rep, _ = run_json(capsys, "resonance", "decide-finiteness", CDGA / "heisenberg_formal.json", "--q", "1")
    assert rep["verdict"] == "NOT-ISOLATED"
    assert run(capsys, "resonance", "decide-finiteness", CDGA / "torus.json", "--q", "2")[0] == 1


def test_gysin_build(capsys, tmp_path):
    code, out, _ = run(capsys, "gysin", "build", GYS / "ruled_surface.json", "--format", "text")
    assert code == 0 and out.strip() == "1 4 6, iso: true"
    code, out, _ = run(capsys, "--format", "text", "gysin", "build", GYS / "diagonal.json")
    assert out.strip().endswith("iso: true")
    emitted = tmp_path / "model.json"
    code, rep, _ = run_json(capsys, "gysin", "build", GYS / "no_divisors.json", "--emit-cdga", emitted)
    check(rep, "gysin_build")
    assert rep["hilbert"] == [1, 2, 2]
    assert run(capsys, "cdga", "validate", emitted)[0] == 0
    code, _, err = run(capsys, "gysin", "build", GYS / "ruled_surface_bad_projection.json")
    assert code == 2 and "projection formula" in err


def test_intersection_check(capsys):
    code, rep, _ = run_json(capsys, "intersection", "check", GYS / "ruled_surface.json",
                            "--pairing", GYS / "ruled_surface_pairing.json")
    assert code == 0
    check(rep, "intersection_check")
    assert [(b["matrix"], b["verdict"]) for b in rep["blocks"]] == [
        ([["1"]], "positive-definite"), ([["-1"]], "negative-definite")]
    code, rep, _ = run_json(capsys, "intersection", "check", GYS / "diagonal.json",
                            "--pairing", GYS / "diagonal_pairing.json")
    assert rep["blocks"][0]["verdict"] == "degenerate"
    assert rep["h1_iso"]["status"] == "hypothesis-unmet"


def test_pipeline(capsys):
    code, rep, _ = run_json(capsys, "pipeline", "thm12", GYS / "ruled_surface.json",
                            "--pairing", GYS / "ruled_surface_pairing.json", "--rmax", "2")
    assert code == 0 and rep["verdict"] == "MATCH"
    check(rep, "thm12_report")
    code, rep, _ = run_json(capsys, "pipeline", "thm12", GYS / "diagonal.json",
                            "--pairing", GYS / "diagonal_pairing.json")
    assert code == 2 and rep["verdict"] == "HYPOTHESIS-UNMET"
    check(rep, "thm12_report")
    code, rep, _ = run_json(capsys, "pipeline", "thm12", GYS / "diagonal.json",
                            "--pairing", GYS / "diagonal_pairing.json", "--ignore-hypothesis")
    assert code == 0 and rep["verdict"] == "MISMATCH"
    check(rep, "thm12_report")
    assert rep["per_r"][0]["local_dimension"]["gysin"]["value"] == 2


def test_alexander_commands(capsys):
    code, rep, _ = run_json(capsys, "alexander", "decide", ALEX / "heisenberg_module.json")
    assert code == 0 and rep["verdict"] == "FINITE" and rep["input"] == "module"
    check(rep, "alexander_decide")
    code, rep, _ = run_json(capsys, "alexander", "decide", ALEX / "free_rank_one_module.json")
    assert rep["verdict"] == "INFINITE"
    code, rep, _ = run_json(capsys, "alexander", "decide", ALEX / "heisenberg_group.json")
    assert rep["verdict"] == "FINITE" and rep["elementary_ideal"] == 1 and rep["input"] == "group"
    code, rep, _ = run_json(capsys, "alexander", "fox", ALEX / "trefoil.json")
    assert code == 0
    check(rep, "fox_matrix")
    assert rep["elementary_ideals"][1] == ["t1^2 - t1 + 1"]
    assert rep["elementary_ideals"][2] == ["1"]


def test_alexander_errors(capsys, tmp_path):
    bad = tmp_path / "torsion.json"
    bad.write_text(json.dumps({"generators": ["a"], "relators": ["a^2"]}))
    code, _, err = run(capsys, "alexander", "fox", bad)
    assert code == 1 and "torsion" in err


def test_resource_guards(capsys):
    args = ["pipeline", "thm12", GYS / "diagonal.json", "--pairing", GYS / "diagonal_pairing.json",
            "--ignore-hypothesis"]
    assert run(capsys, *args, "--max-basis", "1")[0] == 3
    assert run(capsys, *args, "--time-limit", "1e-9")[0] == 3


def test_input_schemas_accept_fixtures():
    for p in CDGA.glob("*.json"):
        check(json.loads(p.read_text()), "cdga_input")
    for name in ("ruled_surface", "diagonal", "no_divisors", "dependent_classes"):
        check(json.loads((GYS / f"{name}.json").read_text()), "compactification_input")
    for name in ("ruled_surface_pairing", "diagonal_pairing"):
        check(json.loads((GYS / f"{name}.json").read_text()), "pairing_input")
    for name in ("heisenberg_module", "free_rank_one_module", "zero_module"):
        check(json.loads((ALEX / f"{name}.json").read_text()), "module_input")
    for name in ("trefoil", "heisenberg_group", "free_group"):
        check(json.loads((ALEX / f"{name}.json").read_text()), "group_input")


# --- determinism and environment ---------------------------------------------------

def _subprocess(*argv, env=None):
    full = dict(os.environ)
    full.update(env or {})
    return subprocess.run([sys.executable, "-m", "jumploci", *map(str, argv)],
                          capture_output=True, env=full, timeout=300)


@pytest.mark.parametrize("argv", [
    ("pipeline", "thm12", GYS / "diagonal.json", "--pairing", GYS / "diagonal_pairing.json", "--ignore-hypothesis"),
    ("resonance", "compute", CDGA / "e_times_e_ring.json", "--degree", "1", "--depth", "2"),
    ("alexander", "fox", ALEX / "heisenberg_group.json"),
])
def test_byte_identical_runs(argv):
    a, b = _subprocess(*argv), _subprocess(*argv)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_environment_overrides():
    args = ("pipeline", "thm12", GYS / "diagonal.json", "--pairing", GYS / "diagonal_pairing.json",
            "--ignore-hypothesis")
    assert _subprocess(*args, env={"JUMPLOCI_MAX_BASIS": "1"}).returncode == 3
    # flags win over the environment
    assert _subprocess(*args, "--max-basis", "4000", env={"JUMPLOCI_MAX_BASIS": "1"}).returncode == 0
    seeded = _subprocess(*args, env={"JUMPLOCI_SEED": "0x10"})
    rep = json.loads(seeded.stdout)
    assert rep["per_r"][0]["local_dimension"]["gysin"]["seeds"] == ["0x10", "0x11", "0x12"]
    assert _subprocess(*args, env={"JUMPLOCI_SAMPLES": "-4"}).returncode == 1
