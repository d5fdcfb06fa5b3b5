"""Batch command-line front end.

Commands mirror the library operations: ``validate``, ``jm``,
``classify cg|dcm``, ``robustness --table 1|2``, and the ``witness`` family.
Verdicts are report content, never exit codes: 0 means the analysis
completed, 1 a usage error, 2 a solver failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bell, rac, robustness
from .classify import DcmScanOptions, classify_cg, classify_dcm
from .errors import IncompatError, ParseError, SolverFailure, ValidationError
from .io import assemblage_to_document, emit_report, parse_povm_file
from .jm import solve_jm
from .povm import BlochMeasurement, bloch_of_binary_qubit, validate_povm
from .robustness import NoiseFamily, bisect_threshold

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2


def _write(data: bytes, path: str | None) -> None:
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _white_noise_family(a, name: str) -> NoiseFamily:
    from .povm import Assemblage, Povm

    def builder(nu: float) -> Assemblage:
        eye = np.eye(a.dim) / a.n_outcomes
        povms = tuple(
            Povm(a.dim, tuple(nu * e + (1 - nu) * eye for e in p.effects), label=p.label)
            for p in a.povms
        )
        return Assemblage(a.dim, a.n_outcomes, povms)

    return NoiseFamily(builder, name)


def _parse_club(text: str) -> tuple[int, int]:
    digits = [int(c) for c in text if c.isdigit()]
    if len(digits) != 2 or not all(0 <= d <= 2 for d in digits):
        raise argparse.ArgumentTypeError(f"bad clubbing spec {text!r}; expected e.g. '01'")
    return (digits[0], digits[1])


def _parse_bloch(text: str) -> BlochMeasurement:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"bad Bloch vector {text!r}; expected x,y,z")
    return BlochMeasurement(tuple(parts))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="incompat", description=__doc__)
    top.add_argument("--format", choices=("table", "csv", "json"), default="table")
    top.add_argument("--output", help="write the report to this path instead of stdout")
    top.add_argument("--seed", type=int, default=12345,
                     help="seed for any randomized fixtures a command may sample")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a POVM description file")
    p.add_argument("file")

    p = sub.add_parser("jm", help="decide joint measurability of a POVM file")
    p.add_argument("file")
    p.add_argument("--bisect-noise", action="store_true",
                   help="also bisect the white-noise visibility threshold")

    p = sub.add_parser("classify", help="layer classification")
    csub = p.add_subparsers(dest="operation", required=True)
    pc = csub.add_parser("cg", help="coarse-graining layer")
    pc.add_argument("file")
    pc.add_argument("--k", type=int, required=True)
    pd = csub.add_parser("dcm", help="disjoint-convex-mixing layer")
    pd.add_argument("file")
    pd.add_argument("--k", type=int, required=True)
    pd.add_argument("--no-perms", action="store_true")
    pd.add_argument("--grid", type=int, default=101)

    p = sub.add_parser("robustness", help="threshold tables for the noisy unbiased bases")
    p.add_argument("--table", type=int, choices=(1, 2), required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("witness", help="operational witnesses")
    wsub = p.add_subparsers(dest="task", required=True)
    pw = wsub.add_parser("rac", help="random-access-code pair witness")
    pw.add_argument("file")
    pw.add_argument("--all-cg", action="store_true",
                    help="scan all binary clubbings of a rank-one qutrit pair")
    pw = wsub.add_parser("dcm-rac", help="mixing witness for three binary qubit measurements")
    pw.add_argument("file")
    pw.add_argument("--grid", type=int, default=101)
    pw = wsub.add_parser("bell", help="clubbed Bell-facet table or one row")
    group = pw.add_mutually_exclusive_group(required=True)
    group.add_argument("--table3", action="store_true")
    group.add_argument("--row", help="Alice clubbings, e.g. '01,12'")
    pw = wsub.add_parser("chsh", help="largest CHSH value of an unbiased qubit pair")
    pw.add_argument("--bloch-a", required=True, type=_parse_bloch)
    pw.add_argument("--bloch-b", required=True, type=_parse_bloch)
    return top


def _cmd_validate(args) -> tuple[str, list[str], list[dict], dict | None]:
    a = parse_povm_file(args.file)
    rows = []
    for x, p in enumerate(a.povms):
        problems = validate_povm(p)
        rows.append({"measurement": x, "label": p.label,
                     "status": "ok" if not problems else "invalid",
                     "detail": "; ".join(problems)})
    return "validate", ["measurement", "label", "status", "detail"], rows, None


def _cmd_jm(args) -> tuple[str, list[str], list[dict], dict | None]:
    a = parse_povm_file(args.file)
    verdict = solve_jm(a)
    rows = [{
        "mu_star": verdict.mu_star,
        "status": verdict.status,
        "iterations": verdict.stats.iterations,
        "gap": verdict.stats.gap,
        "marginal_residual": verdict.stats.marginal_residual,
    }]
    extra = {"parent": [
        [[[float(v.real), float(v.imag)] for v in row] for row in g] for g in verdict.parent
    ]}
    if args.bisect_noise:
        res = bisect_threshold(
            _white_noise_family(a, "white-noise"),
            lambda asm: solve_jm(asm).status == "incompatible",
            predicate_name="jm-incompatible",
        )
        rows[0]["nu_star"] = res.nu_star
        return "jm", ["mu_star", "status", "nu_star", "iterations", "gap",
                      "marginal_residual"], rows, extra
    return "jm", ["mu_star", "status", "iterations", "gap", "marginal_residual"], rows, extra


def _witness_text(entry) -> str:
    if entry.witness is None:
        return ""
    return repr(entry.witness)


def _cmd_classify(args) -> tuple[str, list[str], list[dict], dict | None]:
    a = parse_povm_file(args.file)
    if args.operation == "cg":
        entry = classify_cg(a, args.k)
        name = "classify-cg"
    else:
        opts = DcmScanOptions(grid_points=args.grid,
                              include_permutations=not args.no_perms)
        entry = classify_dcm(a, args.k, opts)
        name = "classify-dcm"
    rows = [{
        "k": entry.k,
        "verdict": entry.verdict,
        "witness": _witness_text(entry),
        "witness_mu": entry.witness_mu if entry.witness_mu is not None else "",
        "n_solves": entry.n_solves,
        "borderline_cases": len(entry.borderline_cases),
    }]
    return name, ["k", "verdict", "witness", "witness_mu", "n_solves", "borderline_cases"], rows, None


def _cmd_robustness(args) -> tuple[str, list[str], list[dict], dict | None]:
    if args.table == 1:
        rows = robustness.cg_threshold_table(
            **({"tol": args.tol} if args.tol else {}), workers=args.workers)
        return ("robustness-table-1",
                ["d", "k", "nu_star", "bracket_lo", "bracket_hi", "evaluations"], rows, None)
    rows = robustness.dcm_threshold_table(tol=args.tol, workers=args.workers)
    return ("robustness-table-2",
            ["d", "k", "permutations", "nu_star", "bracket_lo", "bracket_hi",
             "evaluations"], rows, None)


def _cmd_witness(args) -> tuple[str, list[str], list[dict], dict | None]:
    if args.task == "rac":
        a = parse_povm_file(args.file)
        if args.all_cg:
            report = rac.witness_full_cg_rac(a.povms[0], a.povms[1])
            rows = [{
                "singled_out_p": i, "singled_out_q": j,
                "success": float(report["success_table"][i, j]),
                "bound": report["bound"],
                "advantage": bool(report["success_table"][i, j] > report["bound"] + 1e-12),
            } for i in range(3) for j in range(3)]
            extra = {"witnessed": report["witnessed"], "analytic": report["analytic"],
                     "agree": report["agree"]}
            return ("witness-rac-all-cg",
                    ["singled_out_p", "singled_out_q", "success", "bound", "advantage"],
                    rows, extra)
        res = rac.rac_success_pair(a.povms[0], a.povms[1])
        rows = [{"success": res.success, "bound": res.bound, "advantage": res.advantage}]
        return "witness-rac", ["success", "bound", "advantage"], rows, None
    if args.task == "dcm-rac":
        a = parse_povm_file(args.file)
        report = rac.witness_full_dcm_rac(a, grid_points=args.grid)
        rows = [{"witnessed": report["witnessed"], "min_success": report["min_success"],
                 "bound": report["bound"]}]
        return "witness-dcm-rac", ["witnessed", "min_success", "bound"], rows, None
    if args.task == "bell":
        if args.table3:
            rows = bell.violation_table()
            cols = ["a1_club", "a2_club", "delta_s_theory",
                    "delta_s_theory_state_optimized", "delta_s_experiment", "witnessed"]
            rows = [{**r, "a1_club": "".join(map(str, r["a1_club"])),
                     "a2_club": "".join(map(str, r["a2_club"]))} for r in rows]
            return "witness-bell-table3", cols, rows, None
        club1_text, club2_text = args.row.split(",")
        club1, club2 = _parse_club(club1_text), _parse_club(club2_text)
        theory = bell.delta_s_theory(club1, club2)
        experiment = bell.delta_s_experiment(club1, club2)
        rows = [{
            "a1_club": club1_text, "a2_club": club2_text,
            "delta_s_theory": theory.delta_s, "delta_s_experiment": experiment.delta_s,
            "best_s_theory": theory.s_value, "best_s_experiment": experiment.s_value,
        }]
        return ("witness-bell-row",
                ["a1_club", "a2_club", "delta_s_theory", "delta_s_experiment",
                 "best_s_theory", "best_s_experiment"], rows, None)
    if args.task == "chsh":
        value = rac.chsh_max_qubit(args.bloch_a, args.bloch_b)
        rows = [{"chsh_max": value, "exceeds_local_bound": value > 2.0}]
        return "witness-chsh", ["chsh_max", "exceeds_local_bound"], rows, None
    raise IncompatError(f"unknown witness task {args.task!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handlers = {
        "validate": _cmd_validate,
        "jm": _cmd_jm,
        "classify": _cmd_classify,
        "robustness": _cmd_robustness,
        "witness": _cmd_witness,
    }
    try:
        command, columns, rows, extra = handlers[args.command](args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except IncompatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(emit_report(command, columns, rows, fmt=args.format, extra=extra), args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
