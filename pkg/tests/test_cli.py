import json
import subprocess
import sys
from fractions import Fraction

import pytest

from wiener_lab.cli import RunConfig, main
from wiener_lab.errors import BadParam
from wiener_lab.families import make_Tn_dprime
from wiener_lab.tree_io import from_graph6, to_graph6


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tree_file(tmp_path):
    path = tmp_path / "t.g6"
    path.write_text(to_graph6(make_Tn_dprime(10)) + "\n")
    return path


@pytest.fixture
def edge_file(tmp_path):
    path = tmp_path / "p4.txt"
    path.write_text("4\n0 1\n1 2\n2 3\n")
    return path


def test_poly_family_json(capsys):
    code, out, _ = run(capsys, "poly", "--family", "tnpp", "--n", "10", "--reduced")
    assert code == 0
    d = json.loads(out)
    assert d["coeffs"] == ["9", "23", "12", "1"]
    assert d["n"] == 10 and d["diameter"] == 4 and d["reduced"] is True


def test_poly_file_full_form_and_csv(capsys, edge_file):
    code, out, _ = run(capsys, "poly", str(edge_file))
    assert code == 0
    d = json.loads(out)
    assert d["coeffs"] == ["0", "3", "2", "1"]
    assert d["wiener_index"] == "10"
    code, out, _ = run(capsys, "poly", str(edge_file), "--csv")
    assert out.splitlines()[0] == "tree,power,coefficient"
    assert out.splitlines()[2] == "0,1,3"


def test_roots_json_schema(capsys, tree_file):
    code, out, _ = run(capsys, "roots", str(tree_file), "--exact-real")
    assert code == 0
    d = json.loads(out)
    assert d["degree"] == 3 and d["precision"] == 17
    assert len(d["roots"]) == len(d["residuals"]) == 3
    assert all(float(r) < 1e-12 for r in d["residuals"])
    assert d["converged"] and d["conjugate_paired"]
    r, R = (Fraction(x) for x in d["annulus"])
    assert all(float(r) - 1e-9 <= abs(complex(float(a), float(b))) <= float(R) + 1e-9 for a, b in d["roots"])
    assert d["exact_real"]["sturm_distinct_real"] >= 1


def test_outputs_are_byte_identical(capsys, tree_file):
    outs = {run(capsys, "roots", str(tree_file))[1] for _ in range(3)}
    assert len(outs) == 1


def test_roots_svg(capsys, tree_file, tmp_path):
    svg = tmp_path / "r.svg"
    code, _, _ = run(capsys, "roots", str(tree_file), "--svg", str(svg), "--annulus")
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg") and text.count('fill="red"') == 3
    assert "stroke-dasharray" in text


def test_family_graph6_round_trip(capsys):
    code, out, _ = run(capsys, "family", "broom", "--k", "3", "--n", "4", "--emit", "graph6")
    assert code == 0
    assert from_graph6(out.strip()).n == 8


def test_family_roots(capsys):
    code, out, _ = run(capsys, "family", "spider", "--a", "1,2", "--k", "1", "--emit", "roots")
    assert code == 0
    assert json.loads(out)["degree"] == 3


def test_enum_counts_and_slices(capsys):
    code, out, _ = run(capsys, "enum", "--n", "8")
    lines = out.split()
    assert code == 0 and len(lines) == 23 and len(set(lines)) == 23
    _, part, _ = run(capsys, "enum", "--n", "8", "--start", "5", "--end", "9")
    assert part.split() == lines[5:9]


def test_census_cli(capsys, tmp_path):
    ck = tmp_path / "ck.jsonl"
    code, out, _ = run(capsys, "census", "max-mod", "--n-min", "8", "--n-max", "9", "--out", str(ck))
    assert code == 0
    rows = [json.loads(x) for x in out.splitlines()]
    assert [r["n"] for r in rows] == [8, 9]
    assert ck.exists()
    code, out2, _ = run(capsys, "census", "max-mod", "--n-min", "8", "--n-max", "9", "--out", str(ck), "--resume")
    assert out2 == out


def test_census_double_root_and_all_real(capsys):
    code, out, _ = run(capsys, "census", "double-root", "--n-min", "9")
    assert json.loads(out)["count"] == 2
    code, out, _ = run(capsys, "census", "all-real", "--n-min", "3")
    assert json.loads(out)["n"] == 7


def test_density_cli(capsys):
    code, out, _ = run(capsys, "density", "real", "--target", "-0.5", "--eps", "0.01")
    assert code == 0 and json.loads(out)["family"] == {"kind": "broom", "k": 1, "n": 4}
    code, out, _ = run(capsys, "density", "complex", "--re", "1", "--im", "1", "--eps", "0.05")
    assert code == 0 and float(json.loads(out)["error"]) < 0.05


def test_resilience_cli(capsys, edge_file):
    code, out, _ = run(capsys, "resilience", str(edge_file), "--p", "0.5")
    d = json.loads(out)
    # P4: 3 pairs at p, 2 at p^2, 1 at p^3
    assert code == 0 and Fraction(d["exact"]) == Fraction(3, 2) + Fraction(1, 2) + Fraction(1, 8)
    code, out, _ = run(capsys, "resilience", str(edge_file), "--p", "0.5", "--mc-trials", "20000", "--seed", "3")
    d = json.loads(out)
    assert abs(float(d["mc_mean"]) - float(d["value"])) < 5 * float(d["mc_stderr"])


def test_exit_code_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["poly", "--family", "nonsense"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "poly")
    assert code == 2 and "usage" in err
    code, _, _ = run(capsys, "poly", "--family", "broom", "--k", "2")
    assert code == 2
    code, _, _ = run(capsys, "density", "real", "--eps", "0.1")
    assert code == 2


def test_exit_code_domain_errors(capsys, tmp_path):
    code, _, err = run(capsys, "density", "real", "--target", "0.5", "--eps", "0.1")
    assert code == 1 and "DomainError" in err
    code, _, _ = run(capsys, "poly", str(tmp_path / "missing.g6"))
    assert code == 1
    code, _, _ = run(capsys, "census", "max-mod", "--n-min", "30")
    assert code == 1
    code, _, _ = run(capsys, "roots", "--family", "tnpp", "--n", "8", "--tol", "-1")
    assert code == 1


def test_run_config_validation():
    with pytest.raises(BadParam):
        RunConfig("roots", tol=0)
    with pytest.raises(BadParam):
        RunConfig("census", jobs=0)


def test_module_entry_point(edge_file):
    res = subprocess.run([sys.executable, "-m", "wiener_lab", "poly", str(edge_file)], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["coeffs"] == ["0", "3", "2", "1"]
