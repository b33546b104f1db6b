"""Command-line entry point: ``lindpos <command> ...``.

Exit codes: 0 success / property holds, 1 analysed and fails, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import cp_analysis as cpa
from .config import DEFAULT_TIME_GRID, OUTPUT_DIR_ENV, REFERENCE_RATE, TOL
from .documents import (
    PRESET_GENERATORS,
    VERSION,
    DocumentError,
    dumps,
    encode_matrix,
    encode_vector,
    generator_to_doc,
    load_generator,
    load_perturbation,
    write_atomic,
)
from .dynamics import evolution_map
from .generators import superoperator_matrix
from .models import C_DEPOLARIZING
from .positivity import (
    DEFAULT_BUDGET,
    DEFAULT_REFINE_STEPS,
    tensor_positivity,
    verify_counterexample,
    z_curve,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

EXPERIMENT_PRESETS = ("paper:counterexample", "paper:lemma1", "paper:perturb")


class UsageError(Exception):
    pass


def parse_grid(text: str | None) -> tuple[float, ...]:
    if text is None or text == "default":
        return DEFAULT_TIME_GRID
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"--grid: cannot parse {text!r} as comma-separated numbers") from exc
    if not vals or any(not math.isfinite(v) or v < 0 for v in vals):
        raise UsageError(f"--grid: times must be finite and >= 0, got {text!r}")
    return vals


def parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{flag}: cannot parse {text!r}") from exc


def _emit(args, name: str, doc: dict) -> Path | None:
    text = dumps(doc)
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{name}.json")
    if out is None or out == "-":
        sys.stdout.write(text)
        return None
    write_atomic(out, text)
    return Path(out)


def _header(kind: str, args) -> dict:
    return {"version": VERSION, "kind": kind, "seed": args.seed, "tolerance": args.tolerance}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_generator(args) -> int:
    g = load_generator(args.generator)
    _emit(args, "generator", generator_to_doc(g))
    return EXIT_OK


def cmd_check_cp(args) -> int:
    g = load_generator(args.generator)
    tol = args.tolerance
    kv = cpa.kossakowski_cp_test(g.kossakowski, tol)
    s = superoperator_matrix(g)
    by_time = []
    worst = (math.inf, None, None)
    for t in parse_grid(args.grid):
        if t == 0:
            continue
        choi = cpa.choi_matrix(evolution_map(s, t))
        w, v = np.linalg.eigh(0.5 * (choi + choi.conj().T))
        by_time.append([t, float(w[0])])
        if w[0] < worst[0]:
            worst = (float(w[0]), t, v[:, 0])
    choi_cp = worst[0] >= -tol
    doc = _header("cp-certificate", args)
    doc.update(
        {
            "verdict": "cp" if kv.is_cp else "not-cp",
            "min_kossakowski_eigenvalue": kv.min_kossakowski_eigenvalue,
            "min_choi_eigenvalue": worst[0],
            "choi_by_time": by_time,
            "routes_agree": bool(choi_cp == kv.is_cp),
        }
    )
    if not choi_cp:
        doc["witness"] = {"time": worst[1], "choi_eigenvector": encode_vector(worst[2])}
    _emit(args, "check-cp", doc)
    return EXIT_OK if kv.is_cp else EXIT_FAIL


def cmd_tensor_positivity(args) -> int:
    g1, g2 = load_generator(args.generator1), load_generator(args.generator2)
    if g1.n != g2.n:
        raise UsageError(f"generator dimensions differ: {g1.n} vs {g2.n}")
    rep = tensor_positivity(g1, g2, parse_grid(args.grid), args.budget, args.seed, args.refine_steps, args.tolerance)
    doc = _header("positivity-report", args)
    doc.update(
        {
            "verdict": rep.verdict,
            "min_eigenvalue_found": rep.min_eigenvalue_found,
            "witness_time": rep.witness_time,
            "samples_used": rep.samples_used,
            "refinement_steps": rep.refinement_steps,
            "budget": args.budget,
            "per_time": [list(p) for p in rep.per_time],
            "note": rep.note,
        }
    )
    if rep.violation:
        doc["witness_state"] = encode_vector(rep.witness_state)
    _emit(args, "tensor-positivity", doc)
    return EXIT_FAIL if rep.violation else EXIT_OK


def _fmt(x: float) -> str:
    return f"{x:.6g}".replace("-", "m").replace(".", "p")


def cmd_counterexample(args) -> int:
    if args.preset not in (None, "paper:counterexample"):
        raise UsageError(f"--preset: unknown preset {args.preset!r} for counterexample")
    times = parse_grid(args.grid)
    mus = parse_floats(args.mu, "--mu")
    alphas = parse_floats(args.alpha, "--alpha")
    varphis = parse_floats(args.varphi, "--varphi")
    if any(not 0 <= m <= 1 for m in mus):
        raise UsageError("--mu: values must lie in [0, 1]")
    rep = verify_counterexample(mus, alphas, varphis, times, args.rate)
    doc = _header("counterexample-report", args)
    doc.update(
        {
            "rate": args.rate,
            "grid": {"mu": list(mus), "alpha": list(alphas), "varphi": list(varphis), "t": list(times)},
            "checks": rep.checks,
            "passed": rep.passed,
            "points": len(rep.entries),
            "max_state_residual": rep.max_state_residual,
            "max_eigen_residual": rep.max_eigen_residual,
            "min_z": rep.min_z,
            "refined_min_z": rep.refined_min_z,
            "min_state_eigenvalue": rep.min_state_eigenvalue,
            "failures": [
                e for e in rep.entries
                if e["state_residual"] > 1e-9 or e["eigen_residual"] > 1e-9 or e["min_eig_state"] < -TOL.positivity
            ],
        }
    )
    curves = []
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = str(Path(os.environ[OUTPUT_DIR_ENV]) / "counterexample.json")
    if out not in (None, "-"):
        folder = Path(out).parent
        for mu in mus:
            for alpha in alphas:
                name = f"zcurve_mu{_fmt(mu)}_alpha{_fmt(alpha)}.csv"
                lines = ["t,z_plus,z_minus,min_eig_numeric"]
                lines += [",".join(repr(v) for v in row) for row in z_curve(mu, alpha, times, args.rate)]
                write_atomic(folder / name, "\n".join(lines) + "\n")
                curves.append(name)
    doc["curve_files"] = curves
    _emit(args, "counterexample", doc)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_lemma1(args) -> int:
    if args.preset is not None:
        if args.preset != "paper:lemma1":
            raise UsageError(f"--preset: unknown preset {args.preset!r} for lemma1")
        refs = ("paper:C1", "paper:C2")
    else:
        if args.generator1 is None or args.generator2 is None:
            raise UsageError("lemma1 needs two generator documents or --preset paper:lemma1")
        refs = (args.generator1, args.generator2)
    g1, g2 = (load_generator(r) for r in refs)
    if g1.n != g2.n:
        raise UsageError(f"generator dimensions differ: {g1.n} vs {g2.n}")
    res = cpa.lemma1_condition(g1.kossakowski, g2.kossakowski, args.tolerance)
    doc = _header("lemma1-report", args)
    doc.update({"holds": res.holds, "min_eigenvalue": res.min_eigenvalue, "inputs": list(refs)})
    if not res.holds:
        w = cpa.lemma1_witness(g1, g2, seed=args.seed, tol=args.tolerance)
        doc["witness"] = {
            "xi": encode_vector(w.xi),
            "W": encode_matrix(w.W),
            "Phi": encode_matrix(w.Phi),
            "Psi": encode_matrix(w.Psi),
            "phi": encode_vector(w.phi),
            "psi": encode_vector(w.psi),
            "L_value": w.L_value,
            "xi_form": w.xi_form,
            "normalized_rate": w.extras["normalized_rate"],
            "short_time": w.extras["short_time"],
            "short_time_value": w.extras["short_time_value"],
        }
    _emit(args, "lemma1", doc)
    return EXIT_OK if res.holds else EXIT_FAIL


def cmd_perturb(args) -> int:
    if args.preset is not None:
        if args.preset != "paper:perturb":
            raise UsageError(f"--preset: unknown preset {args.preset!r} for perturb")
        c, gamma, eps_max = C_DEPOLARIZING, load_perturbation("paper:gamma"), 10.0
    else:
        if args.generator is None or args.perturbation is None:
            raise UsageError("perturb needs a generator and a perturbation document or --preset paper:perturb")
        c = load_generator(args.generator).kossakowski
        gamma = load_perturbation(args.perturbation)
        eps_max = args.eps_max
    if gamma.shape != c.shape:
        raise UsageError(f"perturbation shape {gamma.shape} does not match Kossakowski shape {c.shape}")
    try:
        eps0 = cpa.perturbation_cp_interval(c, gamma, eps_max, args.tolerance)
    except cpa.NotCompletelyPositiveError as exc:
        raise UsageError(f"precondition violated: the unperturbed semigroup must be CP ({exc})") from exc
    checks = []
    for eps in np.linspace(0.0, eps0, 11):
        v = cpa.kossakowski_cp_test(c + eps * gamma, args.tolerance)
        checks.append([float(eps), v.min_kossakowski_eigenvalue, v.is_cp])
    doc = _header("perturbation-report", args)
    doc.update({"eps0": eps0, "eps_max": eps_max, "grid_checks": checks, "all_cp": all(x[2] for x in checks)})
    _emit(args, "perturb", doc)
    return EXIT_OK if doc["all_cp"] else EXIT_FAIL


def cmd_kraus(args) -> int:
    g = load_generator(args.generator)
    if args.time < 0:
        raise UsageError("--time must be >= 0")
    m = evolution_map(superoperator_matrix(g), args.time)
    choi = cpa.choi_matrix(m)
    doc = _header("kraus-set", args)
    doc["time"] = args.time
    try:
        ks = cpa.kraus_decomposition(choi, args.tolerance)
    except cpa.NotCompletelyPositiveError as exc:
        doc.update({"verdict": "not-cp", "error": str(exc)})
        _emit(args, "kraus", doc)
        return EXIT_FAIL
    doc.update(
        {
            "verdict": "cp",
            "operators": [encode_matrix(k) for k in ks.operators],
            "weights": [float(w) for w in ks.weights],
            "reconstruction_residual": float(np.max(np.abs(ks.superoperator() - m))),
            "completeness_residual": float(np.max(np.abs(ks.completeness() - np.eye(g.n)))),
        }
    )
    _emit(args, "kraus", doc)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    parser.add_argument("--tolerance", type=float, default=d(TOL.positivity), help="eigenvalue slack (default 1e-10)")
    parser.add_argument("--grid", default=d(None), help="comma-separated times, or 'default'")
    parser.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="pure-state samples per time")
    parser.add_argument("--output", default=d(None), help=f"output file ('-' = stdout; default ${OUTPUT_DIR_ENV}/<command>.json or stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindpos", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    presets = ", ".join(PRESET_GENERATORS)

    p = sub.add_parser("generator", parents=[common], help="validate a generator and write it back in canonical form")
    p.add_argument("generator", help=f"generator document or preset ({presets})")
    p.set_defaults(func=cmd_generator)

    p = sub.add_parser("check-cp", parents=[common], help="CP verdict via Kossakowski and Choi spectra")
    p.add_argument("generator", help=f"generator document or preset ({presets})")
    p.set_defaults(func=cmd_check_cp)

    p = sub.add_parser("tensor-positivity", parents=[common], help="positivity search for gamma1_t (x) gamma2_t")
    p.add_argument("generator1")
    p.add_argument("generator2")
    p.add_argument("--refine-steps", type=int, default=DEFAULT_REFINE_STEPS)
    p.set_defaults(func=cmd_tensor_positivity)

    p = sub.add_parser("counterexample", parents=[common], help="verify the closed-form qubit counterexample")
    p.add_argument("--preset", default=None, help="paper:counterexample (default)")
    p.add_argument("--rate", type=float, default=REFERENCE_RATE)
    p.add_argument("--mu", default="0,0.25,0.5,0.75,1")
    p.add_argument("--alpha", default=",".join(repr(x) for x in (0.0, math.pi / 4, math.pi / 2)))
    p.add_argument("--varphi", default=",".join(repr(x) for x in (0.0, math.pi / 3)))
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("lemma1", parents=[common], help="check C1 + C2 >= 0, emit a witness when it fails")
    p.add_argument("generator1", nargs="?")
    p.add_argument("generator2", nargs="?")
    p.add_argument("--preset", default=None, help="paper:lemma1")
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("perturb", parents=[common], help="CP interval of C + eps * Gamma")
    p.add_argument("generator", nargs="?")
    p.add_argument("perturbation", nargs="?")
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--preset", default=None, help="paper:perturb")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("kraus", parents=[common], help="Kraus operators of exp(L t)")
    p.add_argument("generator")
    p.add_argument("--time", type=float, default=1.0)
    p.set_defaults(func=cmd_kraus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if args.budget <= 0:
        print("lindpos: error: --budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (DocumentError, UsageError) as exc:
        print(f"lindpos: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"lindpos: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
