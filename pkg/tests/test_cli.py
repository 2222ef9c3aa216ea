import json
import os
import subprocess
import sys

import pytest

from corpus import FIXTURES
from cosy.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from cosy.modelfile import parse_model


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_check_t3(capsys):
    code, rep = run_json(capsys, "check", FIXTURES / "t3.json")
    assert code == EXIT_OK
    assert {"cosymplectic", "coKähler", "K-cosymplectic"} <= set(rep["classification"]["flags"])
    assert rep["status"] == "pass"


def test_check_sol3_flags_non_nilpotent(capsys):
    code, rep = run_json(capsys, "check", FIXTURES / "sol3.json")
    assert code == EXIT_OK
    assert rep["flags"]["invariant_cohomology_only"] is True


def test_check_invalid_structure_fails(capsys, tmp_path):
    doc = json.loads((FIXTURES / "t3.json").read_text())
    doc["g"][2][2] = "2"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check", p)
    assert code == EXIT_FAIL and "status: fail" in out


def test_cohomology_kt_s1(capsys):
    code, out, _ = run(capsys, "cohomology", FIXTURES / "kt_s1.json", "--lefschetz")
    assert code == EXIT_OK
    assert "(1, 4, 7, 7, 4, 1)" in out
    assert "not an isomorphism" in out
    code, rep = run_json(capsys, "cohomology", FIXTURES / "kt_s1.json", "--lefschetz")
    degree1 = next(r for r in rep["lefschetz"]["degrees"] if r["degree"] == 1)
    assert degree1["verdict"] == "not an isomorphism"
    assert degree1["kernel"][0]["image_is_d_of_primitive"] is True


def test_torus_order(capsys):
    code, out, _ = run(capsys, "torus-order", "--matrix", "2,1,1,1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "infinite (irregular characteristic foliation)"
    code, rep = run_json(capsys, "torus-order", "--matrix", "0,-1,1,1")
    assert rep["order"] == 6


def test_orbits_from_betti(capsys):
    code, rep = run_json(capsys, "orbits", "--betti", "1,1,1,1,1,1")
    assert code == EXIT_OK
    assert rep["closed_orbit_count"] == 3 and rep["cpn_cohomology"] is True


def test_orbits_registry(capsys):
    code, out, _ = run(capsys, "orbits", "--registry")
    assert code == EXIT_OK and "Q^3 x S^1" in out


def test_poisson_and_field(capsys):
    code, rep = run_json(capsys, "poisson", FIXTURES / "t3.json", "sin(x1)", "sin(x2)")
    assert code == EXIT_OK and rep["agree"] is True
    code, rep = run_json(capsys, "field", FIXTURES / "t3.json", "--classify", "0;-cos(x1);0")
    assert code == EXIT_OK and rep["class"] == "Hamiltonian" and rep["f"] == "sin(x1)"


def test_adapted_pass_and_fail(capsys):
    code, _, _ = run(capsys, "adapted", FIXTURES / "t3.json", "--gbar", "2,0,0;0,1,0;0,0,1")
    assert code == EXIT_OK
    code, _, _ = run(capsys, "adapted", FIXTURES / "t3.json", "--gbar", "2,0,0;0,1,0;0,0,1", "--tol", "1e-30")
    assert code == EXIT_FAIL


def test_deform_chain_writes_model(capsys, tmp_path):
    out = tmp_path / "d.json"
    code, _, _ = run(
        capsys, "deform", FIXTURES / "t3.json", "--type1", "theta=1,0,0", "--type2", "beta=0,1/5,0", "-o", out
    )
    assert code == EXIT_OK
    md = parse_model(out)
    assert [str(x) for x in md.reeb()] == ["1", "0", "1"]
    assert len(md.provenance) == 3 and md.provenance[1].startswith("type I theta=1,0,0")


@pytest.mark.parametrize(
    "argv",
    [
        ["check", FIXTURES / "malformed_bracket.json"],
        ["check", "no-such-file.json"],
        ["torus-order", "--matrix", "2,0,0,1"],
        ["deform", FIXTURES / "t3.json", "--type2", "beta=0,0,1"],
        ["deform", FIXTURES / "t3.json", "--type1", "theta=-1,0,0,0"],
        ["field", FIXTURES / "kt_s1.json", "--classify", "0;0;0;0;1"],
        ["poisson", FIXTURES / "t3.json", "sin(x1*x2)", "1"],
        ["orbits", "--betti", "1,x"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and err


def test_malformed_bracket_diagnostic(capsys):
    _, _, err = run(capsys, "check", FIXTURES / "malformed_bracket.json")
    assert "brackets/0" in err


def _cosy(*argv, env=None):
    cmd = [sys.executable, "-c", "import sys; from cosy.cli import main; sys.exit(main())", *map(str, argv)]
    return subprocess.run(cmd, capture_output=True, env=env, check=False)


def test_same_seed_gives_identical_bytes():
    a = _cosy("check", FIXTURES / "kt_s1.json", "--format", "json", "--seed", "11")
    b = _cosy("check", FIXTURES / "kt_s1.json", "--format", "json", "--seed", "11")
    assert a.returncode == 0 and a.stdout == b.stdout


def test_seed_environment_variable_overrides_flag():
    env = {**os.environ, "COSY_SEED": "5"}
    a = _cosy("check", FIXTURES / "t3.json", "--format", "json", "--seed", "1", env=env)
    rep = json.loads(a.stdout)
    assert rep["basis_change_invariance"]["seed"] == 5
