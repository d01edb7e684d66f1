import json

import numpy as np
import pytest

from isoalg import matrix_from_json, matrix_to_json
from isoalg.cli import dump_json, main

E12 = np.array([[0, 1], [0, 0]], complex)


@pytest.fixture(scope="module")
def specs(tmp_path_factory):
    root = tmp_path_factory.mktemp("specs")
    paths = {}

    def write(name, obj):
        p = root / name
        p.write_text(json.dumps(obj))
        paths[name] = str(p)

    write("polar.json", {"type": "polar", "a": matrix_to_json(2 * E12)})
    write("qdeform.json", {"type": "qdeform", "n": 6, "q": 0.5,
                           "rho": "heisenberg"})
    write("broken.json", {"type": "system",
                          "generators": [matrix_to_json(E12)],
                          "U": matrix_to_json(E12)})
    write("badrho.json", {"type": "qdeform", "n": 6, "q": 0.5,
                          "rho": {"samples": [1.0] * 7}})
    write("matrix.json", matrix_to_json(2 * E12))
    paths["root"] = str(root)
    return paths


def run(args, specs, name):
    out = specs["root"] + f"/{name}.out"
    rc = main(args + ["--out", out])
    try:
        with open(out) as fh:
            return rc, json.load(fh)
    except FileNotFoundError:
        return rc, None


def test_run_all_passes(specs):
    rc, doc = run(["run", "--model", specs["qdeform.json"], "--checks", "all",
                   "--seed", "7", "--samples", "25"], specs, "q_all")
    assert rc == 0
    assert doc["pass"] is True
    names = [r["name"] for r in doc["results"]]
    assert "qdeform_relations" in names
    assert "polar_structure" not in names
    assert "traces" in doc


def test_run_polar_all(specs):
    rc, doc = run(["run", "--model", specs["polar.json"], "--checks", "all",
                   "--samples", "20"], specs, "p_all")
    assert rc == 0
    names = [r["name"] for r in doc["results"]]
    assert "polar_structure" in names
    assert "qdeform_relations" not in names


def test_run_selected_checks(specs):
    rc, doc = run(["run", "--model", specs["qdeform.json"],
                   "--checks", "partial_isometry,qdeform_relations"],
                  specs, "q_sel")
    assert rc == 0
    assert [r["name"] for r in doc["results"]] == \
        ["partial_isometry", "qdeform_relations"]


def test_run_broken_model_fails(specs):
    rc, doc = run(["run", "--model", specs["broken.json"], "--checks", "all",
                   "--samples", "10"], specs, "broken")
    assert rc == 1
    assert doc["pass"] is False
    by_name = {r["name"]: r["pass"] for r in doc["results"]}
    # the partial isometry itself is fine; the coefficient conditions fail
    assert by_name["partial_isometry"] is True
    assert by_name["intertwining_equivalents"] is False
    assert by_name["extendability"] is False


def test_run_unknown_check_exits_2(specs, capsys):
    rc = main(["run", "--model", specs["qdeform.json"], "--checks", "bogus"])
    assert rc == 2
    assert "registered" in capsys.readouterr().err


def test_run_unbuildable_model_exits_2(specs, capsys):
    rc = main(["run", "--model", specs["badrho.json"], "--checks", "all"])
    assert rc == 2
    assert "does not build" in capsys.readouterr().err


def test_run_missing_file_exits_2(specs):
    rc = main(["run", "--model", specs["root"] + "/nope.json",
               "--checks", "all"])
    assert rc == 2


def test_run_inapplicable_check_exits_2(specs):
    rc = main(["run", "--model", specs["polar.json"],
               "--checks", "qdeform_relations"])
    assert rc == 2


def test_run_deterministic(specs):
    args = ["run", "--model", specs["qdeform.json"], "--checks",
            "coefficient_bound,gauge_invariance,norm_limit",
            "--seed", "3", "--samples", "15"]
    out1 = specs["root"] + "/det1.out"
    out2 = specs["root"] + "/det2.out"
    assert main(args + ["--out", out1]) == 0
    assert main(args + ["--out", out2]) == 0
    assert open(out1).read() == open(out2).read()


def test_nf_subcommand(specs):
    rc, doc = run(["nf", "--model", specs["polar.json"], "--expr", "U*U'*U"],
                  specs, "nf")
    assert rc == 0
    assert [d["k"] for d in doc["degrees"]] == [1]
    coeff = matrix_from_json(doc["degrees"][0]["coeff"])
    assert np.allclose(coeff, np.diag([1.0, 0.0]))  # UU*


def test_nf_expr_file(specs, tmp_path):
    p = tmp_path / "expr.txt"
    p.write_text("U*absa + (U*absa)'\n")  # the operator a plus its adjoint
    rc, doc = run(["nf", "--model", specs["polar.json"],
                   "--expr-file", str(p)], specs, "nf_file")
    assert rc == 0
    assert [d["k"] for d in doc["degrees"]] == [-1, 1]


def test_nf_annihilated_product_is_zero(specs):
    # absa kills the range of U, so absa*U is the zero operator
    rc, doc = run(["nf", "--model", specs["polar.json"],
                   "--expr", "absa*U"], specs, "nf_zero")
    assert rc == 0
    assert doc["degrees"] == []


def test_nf_parse_error_exits_2(specs, capsys):
    rc = main(["nf", "--model", specs["polar.json"], "--expr", "U^(-1)"])
    assert rc == 2


def test_norm_limit_subcommand(specs):
    rc, doc = run(["norm-limit", "--model", specs["qdeform.json"],
                   "--expr", "Q*U^2 + U'*rhoQ", "--samples", "10"],
                  specs, "nlim")
    assert rc == 0
    tr = doc["trace"]
    assert tr["k_values"] == [1, 2, 4, 8]
    assert tr["s_values"][-1] <= tr["direct_norm"] * (1 + 1e-9)
    assert "x" in tr


def test_closure_subcommand(specs):
    rc, doc = run(["closure", "--model", specs["qdeform.json"]],
                  specs, "closure")
    assert rc == 0
    assert doc == {"ambient_dim": 6, "seed_dim": 6,
                   "delta_tower_dim": 6, "full_tower_dim": 6}


def test_closure_broken_exits_1(specs):
    rc, doc = run(["closure", "--model", specs["broken.json"]],
                  specs, "closure_broken")
    assert rc == 1
    assert "error" in doc


def test_polar_subcommand(specs):
    rc, doc = run(["polar", "--matrix", specs["matrix.json"]], specs, "polar")
    assert rc == 0
    assert np.allclose(matrix_from_json(doc["U"]), E12)
    assert np.allclose(matrix_from_json(doc["abs"]), np.diag([0.0, 2.0]))
    assert doc["partial_isometry"]["pass"] is True


def test_env_tolerance(specs, monkeypatch, capsys):
    monkeypatch.setenv("ISOALG_TOL", "not-a-number")
    rc = main(["run", "--model", specs["qdeform.json"],
               "--checks", "partial_isometry"])
    assert rc == 2
    monkeypatch.setenv("ISOALG_TOL", "1e-7")
    rc, doc = run(["run", "--model", specs["qdeform.json"],
                   "--checks", "partial_isometry"], specs, "envtol")
    assert rc == 0
    assert doc["config"]["tol"] == 1e-7


def test_console_entry_point(specs):
    import subprocess
    import sys
    proc = subprocess.run(
        [sys.executable, "-m", "isoalg.cli", "run", "--model",
         specs["qdeform.json"], "--checks", "partial_isometry"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["pass"] is True


def test_dump_json_17_digits():
    text = dump_json({"x": 0.1, "n": 3, "ok": True, "none": None,
                      "inf": float("inf"), "list": [1.5]})
    assert '"x": 0.10000000000000001' in text
    assert '"inf": 1e999' in text
    parsed = json.loads(text)
    assert parsed["x"] == 0.1
    assert parsed["inf"] == float("inf")
