import csv
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

from lindpos.cli import main
from lindpos.cp_analysis import perturbation_cp_interval
from lindpos.documents import dumps, generator_from_doc, generator_to_doc, load_generator, perturbation_to_doc
from lindpos.generators import GeneratorSpec
from lindpos.models import random_kossakowski

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"
FAST = ["--budget", "300", "--grid", "0,0.1,0.5,2", "--refine-steps", "60"]


@pytest.fixture(autouse=True)
def _no_output_dir(monkeypatch):
    monkeypatch.delenv("LINDPOS_OUTPUT_DIR", raising=False)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    doc = json.loads(out.out) if out.out.strip() else None
    return code, doc, out.err


def write_doc(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(dumps(doc))
    return p


# ---------------------------------------------------------------------------
# check-cp
# ---------------------------------------------------------------------------

def test_check_cp_examples(capsys):
    code, doc, _ = run(capsys, "check-cp", EXAMPLES / "c1_rate4.json")
    assert code == 0 and doc["verdict"] == "cp" and doc["routes_agree"]
    code, doc, _ = run(capsys, "check-cp", EXAMPLES / "c2_rate4.json")
    assert code == 1 and doc["verdict"] == "not-cp" and doc["routes_agree"]
    assert doc["min_kossakowski_eigenvalue"] == pytest.approx(-2.0, abs=1e-12)
    assert len(doc["witness"]["choi_eigenvector"]) == 4
    code, doc, err = run(capsys, "check-cp", EXAMPLES / "non_hermitian.json")
    assert code == 2 and doc is None and "kossakowski" in err


def test_check_cp_presets(capsys):
    assert run(capsys, "check-cp", "paper:C1")[0] == 0
    assert run(capsys, "check-cp", "paper:C2")[0] == 1


def test_malformed_document_reports_line(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"version": 1,\n "kind": "generator",\n "n": 2,,\n}')
    code, _, err = run(capsys, "check-cp", p)
    assert code == 2 and "line 3" in err


def test_unknown_field_exit_2(capsys, tmp_path):
    doc = json.loads((EXAMPLES / "c1_rate4.json").read_text())
    doc["comment"] = "hi"
    code, _, err = run(capsys, "check-cp", write_doc(tmp_path, "g.json", doc))
    assert code == 2 and "comment" in err


def test_usage_errors(capsys):
    assert run(capsys, "check-cp")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "--budget", "0", "check-cp", "paper:C1")[0] == 2
    assert run(capsys, "check-cp", "paper:C1", "--grid", "0,-1")[0] == 2
    assert run(capsys, "counterexample", "--mu", "2")[0] == 2
    assert run(capsys, "lemma1", "paper:C1")[0] == 2
    assert run(capsys, "lemma1", "--preset", "paper:nope")[0] == 2


def test_global_flags_before_or_after_command(capsys):
    a = run(capsys, "--seed", "3", "--grid", "0.5", "check-cp", "paper:C2")
    b = run(capsys, "check-cp", "paper:C2", "--seed", "3", "--grid", "0.5")
    assert a == b
    assert a[1]["seed"] == 3 and a[1]["choi_by_time"][0][0] == 0.5


# ---------------------------------------------------------------------------
# tensor-positivity
# ---------------------------------------------------------------------------

def test_tensor_positivity_qubit_pair(capsys):
    code, doc, _ = run(capsys, "tensor-positivity", "paper:C1-rate4", "paper:C2-rate4", *FAST)
    assert code == 0
    assert doc["verdict"] == "positive-within-budget"
    assert doc["min_eigenvalue_found"] >= -1e-10
    assert "witness_state" not in doc


def test_tensor_positivity_second_squared(capsys):
    code, doc, _ = run(capsys, "tensor-positivity", "paper:C2-rate4", "paper:C2-rate4", *FAST)
    assert code == 1
    assert doc["verdict"] == "violation-found"
    assert doc["min_eigenvalue_found"] < -1e-6
    assert len(doc["witness_state"]) == 4


def test_tensor_positivity_cp_pair(capsys):
    code, doc, _ = run(capsys, "tensor-positivity", EXAMPLES / "c1_rate4.json", EXAMPLES / "c1_rate4.json", *FAST)
    assert code == 0


def test_tensor_positivity_dimension_mismatch(capsys):
    g3 = GeneratorSpec.from_kossakowski(np.eye(8))
    with tempfile.TemporaryDirectory() as d:
        p = write_doc(Path(d), "g3.json", generator_to_doc(g3))
        assert run(capsys, "tensor-positivity", "paper:C1", p)[0] == 2


# ---------------------------------------------------------------------------
# counterexample
# ---------------------------------------------------------------------------

def test_counterexample_default(capsys):
    code, doc, _ = run(capsys, "counterexample")
    assert code == 0 and doc["passed"]
    assert all(doc["checks"].values())
    assert doc["failures"] == []
    assert doc["points"] == 5 * 3 * 2 * 9


def test_counterexample_preset_and_curves(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["counterexample", "--preset", "paper:counterexample", "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["curve_files"]) == 15
    for name in doc["curve_files"]:
        with open(tmp_path / name) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "z_plus", "z_minus", "min_eig_numeric"]
        first = [float(x) for x in rows[1]]
        assert first[0] == 0.0 and first[1:3] == [0.0, 0.0]
    name = next(n for n in doc["curve_files"] if n.startswith("zcurve_mu0p5_alpha1p5708"))
    with open(tmp_path / name) as fh:
        rows = [[float(x) for x in r] for r in list(csv.reader(fh))[1:]]
    for t, zp, zm, num in rows:
        a = math.exp(-4 * t)
        assert zp == pytest.approx(0.25 * (1 - a) * (1 + a), abs=1e-14)
        assert zm == pytest.approx(0.25 * (1 - a) * (1 - a), abs=1e-14)
        assert num == pytest.approx(zm, abs=1e-10)


# ---------------------------------------------------------------------------
# lemma1
# ---------------------------------------------------------------------------

def test_lemma1_examples(capsys):
    code, doc, _ = run(capsys, "lemma1", "--preset", "paper:lemma1")
    assert code == 0 and doc["holds"]
    assert abs(doc["min_eigenvalue"]) <= 1e-12
    code, doc, _ = run(capsys, "lemma1", "paper:C1", "paper:C1")
    assert code == 0 and doc["min_eigenvalue"] == pytest.approx(2.0, abs=1e-12)
    code, doc, _ = run(capsys, "lemma1", "paper:C2", "paper:C2")
    assert code == 1 and not doc["holds"]
    w = doc["witness"]
    assert w["L_value"] == pytest.approx(-2.0, abs=1e-9)
    assert w["short_time_value"] < 0


# ---------------------------------------------------------------------------
# perturb
# ---------------------------------------------------------------------------

def test_perturb_preset(capsys):
    code, doc, _ = run(capsys, "perturb", "--preset", "paper:perturb")
    assert code == 0
    assert doc["eps0"] == pytest.approx(0.5, abs=1e-9)
    assert len(doc["grid_checks"]) == 11 and doc["all_cp"]


def test_perturb_documents(capsys):
    code, doc, _ = run(capsys, "perturb", EXAMPLES / "identity_c.json", EXAMPLES / "gamma.json", "--eps-max", "10")
    assert code == 0 and doc["eps0"] == pytest.approx(0.5, abs=1e-9)


def test_perturb_nonnegative_gamma_reaches_eps_max(capsys, tmp_path):
    p = write_doc(tmp_path, "pos.json", perturbation_to_doc(np.diag([1.0, 0.0, 2.0])))
    code, doc, _ = run(capsys, "perturb", "paper:C1", p, "--eps-max", "3")
    assert code == 0 and doc["eps0"] == 3.0


def test_perturb_non_cp_base(capsys):
    code, _, err = run(capsys, "perturb", "paper:C2", EXAMPLES / "gamma.json")
    assert code == 2 and "precondition" in err


def test_perturb_random_case_matches_scan(capsys, tmp_path):
    rng = np.random.default_rng(99)
    c = random_kossakowski(rng, 2, "cp") + 0.2 * np.eye(3)
    gamma = random_kossakowski(rng, 2, "indefinite")
    gp = write_doc(tmp_path, "g.json", generator_to_doc(GeneratorSpec.from_kossakowski(c)))
    pp = write_doc(tmp_path, "p.json", perturbation_to_doc(gamma))
    code, doc, _ = run(capsys, "perturb", gp, pp, "--eps-max", "5")
    assert code == 0
    eps = np.linspace(0, 5, 50001)
    ok = [np.linalg.eigvalsh(c + e * gamma)[0] >= -1e-10 for e in eps]
    scan = eps[np.argmin(ok)] - eps[1] if not all(ok) else 5.0
    assert doc["eps0"] == pytest.approx(scan, abs=1e-3)


# ---------------------------------------------------------------------------
# kraus, generator export
# ---------------------------------------------------------------------------

def test_kraus(capsys):
    code, doc, _ = run(capsys, "kraus", "paper:C1-rate4", "--time", "0.3")
    assert code == 0
    assert doc["reconstruction_residual"] <= 1e-9 and doc["completeness_residual"] <= 1e-9
    code, doc, _ = run(capsys, "kraus", "paper:C2-rate4", "--time", "0.3")
    assert code == 1 and doc["verdict"] == "not-cp"
    assert run(capsys, "kraus", "paper:C1", "--time", "-1")[0] == 2


def test_generator_round_trip(capsys, tmp_path):
    rng = np.random.default_rng(5)
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    g = GeneratorSpec.from_kossakowski(random_kossakowski(rng, 3, "mixed"), h + h.conj().T)
    src = write_doc(tmp_path, "in.json", generator_to_doc(g))
    code, doc, _ = run(capsys, "generator", src)
    assert code == 0
    assert generator_from_doc(doc).equals(g)
    for preset in ("paper:C1", "paper:C2-rate4"):
        code, doc, _ = run(capsys, "generator", preset)
        assert generator_from_doc(doc).equals(load_generator(preset))


# ---------------------------------------------------------------------------
# output plumbing and determinism
# ---------------------------------------------------------------------------

def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LINDPOS_OUTPUT_DIR", str(tmp_path))
    assert main(["lemma1", "--preset", "paper:lemma1"]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads((tmp_path / "lemma1.json").read_text())["holds"]
    assert main(["lemma1", "--preset", "paper:lemma1", "--output", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["holds"]


@pytest.mark.parametrize(
    "argv",
    [
        ["tensor-positivity", "paper:C2-rate4", "paper:C2-rate4", *FAST, "--seed", "11"],
        ["lemma1", "paper:C2", "paper:C2", "--seed", "4"],
        ["counterexample", "--grid", "0,0.5"],
        ["check-cp", "paper:C2"],
        ["kraus", "paper:C1"],
    ],
)
def test_byte_identical_outputs(tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main([*argv, "--output", str(a)]) == main([*argv, "--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "lindpos", "check-cp", "paper:C2"], capture_output=True, text=True)
    assert r.returncode == 1
    assert json.loads(r.stdout)["verdict"] == "not-cp"
