import json

import pytest

from mcpp.cli import main


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def p22_file(tmp_path):
    return write(
        tmp_path,
        "p22.json",
        {"n": 4, "blocks": [[1, 2], [3, 4]], "terms": [{"vars": [1, 3], "coef": 1}, {"vars": [2, 4], "coef": 2}]},
    )


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_text_and_json(capsys, p22_file):
    code, out, _ = run(capsys, "solve", "--instance", p22_file)
    assert code == 0 and "optimum 2 at x = 0101" in out
    code, out, _ = run(capsys, "solve", "--instance", p22_file, "--output", "json")
    data = json.loads(out)
    assert data["optimum"] == "2" and data["argmax"] == [0, 1, 0, 1] and data["method"] == "lp-jointree"


def test_solve_lp_on_cyclic_instance_fails(capsys):
    code, _, err = run(capsys, "solve", "--instance", "@TRI", "--method", "lp")
    assert code == 2 and "error" in err


def test_validate_reports_violations(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"n": 3, "blocks": [[1, 2], [3]], "terms": []})
    code, out, _ = run(capsys, "validate", "--instance", bad, "--output", "json")
    assert code == 2
    assert any(v["kind"] == "singleton-block" for v in json.loads(out)["violations"])


def test_parse_errors_exit_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    code, _, err = run(capsys, "solve", "--instance", str(path))
    assert code == 2 and "invalid JSON" in err
    floaty = write(tmp_path, "f.json", {"n": 4, "blocks": [[1, 2], [3, 4]], "terms": [{"vars": [1], "coef": 0.5}]})
    assert run(capsys, "solve", "--instance", floaty)[0] == 2


def test_guard_exit_3(capsys):
    code, _, err = run(capsys, "enumerate", "--instance", "@STAR3", "--guard", "3")
    assert code == 3


def test_hypergraph_output(capsys):
    code, out, _ = run(capsys, "hypergraph", "--instance", "@TRI", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["alpha_acyclic"] is False and "gyo_residual" in data
    code, out, _ = run(capsys, "hypergraph", "--instance", "@PATH3")
    assert "alpha-acyclic: True" in out and "join tree" in out


def test_hrep_path_counts(capsys):
    code, out, _ = run(capsys, "hrep", "--instance", "@PATH3", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["equalities"] == 11 and data["inequalities"] == 14


def test_hrep_affine(capsys):
    code, out, _ = run(capsys, "hrep", "--instance", "@EDGE22", "--system", "affine", "--D", "2,4")
    assert code == 0 and "w_" in out
    code, _, _ = run(capsys, "hrep", "--instance", "@TWO_3EDGES", "--system", "affine")
    assert code == 2


def test_enumerate_sets(capsys):
    code, out, _ = run(capsys, "enumerate", "--instance", "@EDGE22", "--output", "json")
    assert code == 0 and json.loads(out)["count"] == 4
    code, out, _ = run(capsys, "enumerate", "--instance", "@EDGE22", "--set", "jointree", "--output", "json")
    assert json.loads(out)["count"] == 4
    code, out, _ = run(capsys, "enumerate", "--instance", "@TRI", "--set", "cap", "--output", "json")
    pts = json.loads(out)["points"]
    assert any(v == "1/2" for p in pts for v in p)


def test_certify(capsys, tmp_path):
    ineq = write(tmp_path, "i.json", {"coords": [{"vars": [1, 3]}], "a": [-1], "delta": 0})
    code, out, _ = run(capsys, "certify", "--instance", "@EDGE22", "--ineq", ineq)
    assert code == 0 and out.startswith("facet")
    bad = write(tmp_path, "b.json", {"coords": [{"vars": [1, 2]}], "a": [1], "delta": 0})
    assert run(capsys, "certify", "--instance", "@EDGE22", "--ineq", bad)[0] == 2


def test_lift(capsys, tmp_path):
    ineq = write(
        tmp_path, "mp.json", {"space": "MP", "coords": [{"blocks": [1, 2]}, {"blocks": [1]}], "a": [1, -1], "delta": 0}
    )
    code, out, _ = run(
        capsys, "lift", "--instance", "@EDGE22", "--ineq", ineq, "--selection", "[[1],[3]]", "--output", "json"
    )
    data = json.loads(out)
    assert code == 0 and data["lifted"]["coefs"] == {"1_3": "1", "1": "-1"}
    assert data["certificate"]["status"] == "facet" and data["agrees"]


def test_decompose_check(capsys):
    code, out, _ = run(capsys, "decompose-check", "--instance", "@PATH3", "--part1", "1,2", "--part2", "2,3")
    assert code == 0 and "precondition holds" in out and "equals" in out
    code, out, _ = run(capsys, "decompose-check", "--instance", "@TRI", "--part1", "1,2,3", "--part2", "1,3")
    assert code == 0 and "precondition holds" in out
    code, out, _ = run(
        capsys, "decompose-check", "--instance", "@TWO_3EDGES", "--part1", "1,2,3", "--part2", "1,2,4"
    )
    assert code == 0 and "precondition fails" in out
    assert run(capsys, "decompose-check", "--instance", "@TRI", "--part1", "1,2", "--part2", "2,3")[0] == 2


def test_verify_theorems_subset(capsys):
    code, out, _ = run(capsys, "verify-theorems", "--only", "2,8")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(lines) == 2 and all(l.startswith("[PASS]") for l in lines)
