"""Command-line interface.

Subcommands::

    majorize     decide x majorised-by y; optionally emit the mixing plan
    synth        Hermitian matrix with prescribed diagonal and spectrum
    carpenter    finite projection with prescribed diagonal
    obstruction  classify a sequence; optionally build a truncated projection
    verify       re-check an emitted matrix or truncated projection

Output is ``key=value`` lines by default, a two-line CSV with ``--csv``, or
prose with ``--human``.  Exit codes: 0 success, 1 infeasible (including a
failed verification or a non-majorised pair), 2 malformed input, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .carpenter import (
    BudgetExhaustedError,
    Feasibility,
    build_case_a,
    build_case_b,
    feasibility,
    verify_truncation,
)
from .io import (
    FormatError,
    load_matrix,
    load_sequence_spec,
    load_truncated_projection,
    load_vector,
    save_matrix,
    save_plan,
    save_truncated_projection,
)
from .linalg import (
    ConvergenceError,
    hermitian_eigenvalues,
    hermitian_residual,
    projection_entry_excess,
    projection_residual,
    unitary_residual,
)
from .majorization import (
    MajorizationError,
    decompose_t_transforms,
    majorizes,
    replay_t_transform_plan,
)
from .schur import InfeasibleDiagonalError, carpenter_finite, synthesize_hermitian

__all__ = ["main"]


def _fmt(value) -> str:
    if value is None:
        return "unattributed"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Feasibility):
        return value.value
    if isinstance(value, float):
        if value == math.inf:
            return "inf"
        if value == -math.inf:
            return "-inf"
        return f"{value:.12g}"
    return str(value)


def _emit(pairs, args) -> None:
    if getattr(args, "csv", False):
        print(",".join(key for key, _ in pairs))
        print(",".join(_fmt(value) for _, value in pairs))
    elif getattr(args, "human", False):
        for key, value in pairs:
            print(f"{key.replace('_', ' ')}: {_fmt(value)}")
    else:
        for key, value in pairs:
            print(f"{key}={_fmt(value)}")


def _cmd_majorize(args) -> int:
    x = load_vector(args.x)
    y = load_vector(args.y)
    if x.size != y.size:
        raise FormatError(f"vectors differ in length: {x.size} vs {y.size}")
    ok = majorizes(x, y, args.tol)
    pairs = [("n", x.size), ("majorizes", ok)]
    if ok and args.decompose:
        plan = decompose_t_transforms(x, y, args.tol)
        save_plan(args.decompose, plan)
        replay = replay_t_transform_plan(plan, y)
        replay_error = float(np.max(np.abs(replay - x))) if x.size else 0.0
        pairs += [("transforms", len(plan.transforms)), ("replay_error", replay_error)]
    _emit(pairs, args)
    return 0 if ok else 1


def _cmd_synth(args) -> int:
    x = load_vector(args.diagonal)
    y = load_vector(args.spectrum)
    result = synthesize_hermitian(x, y, args.tol)
    save_matrix(args.out, result.matrix)
    if args.unitary:
        save_matrix(args.unitary, result.unitary)
    diag_error = float(np.max(np.abs(np.diag(result.matrix) - x))) if x.size else 0.0
    eigs = hermitian_eigenvalues(result.matrix)
    spectrum_error = float(np.max(np.abs(eigs - np.sort(y)))) if y.size else 0.0
    _emit(
        [
            ("n", x.size),
            ("hermitian_residual", hermitian_residual(result.matrix)),
            ("unitary_residual", unitary_residual(result.unitary)),
            ("diagonal_error", diag_error),
            ("spectrum_error", spectrum_error),
        ],
        args,
    )
    return 0


def _cmd_carpenter(args) -> int:
    d = load_vector(args.diagonal)
    p = carpenter_finite(d, args.tol)
    save_matrix(args.out, p)
    diag_error = float(np.max(np.abs(np.diag(p) - d))) if d.size else 0.0
    _emit(
        [
            ("n", d.size),
            ("trace", float(np.trace(p).real)),
            ("projection_residual", projection_residual(p)),
            ("diagonal_error", diag_error),
            ("entry_excess", projection_entry_excess(p)),
        ],
        args,
    )
    return 0


def _cmd_obstruction(args) -> int:
    spec = load_sequence_spec(args.spec)
    report = feasibility(spec, args.alpha)
    pairs = [
        ("alpha", report.alpha),
        ("a_f", report.low_sum),
        ("b_f", report.high_complement_sum),
        ("case", report.feasibility),
        ("defect", report.defect),
    ]
    infeasible = report.feasibility is Feasibility.INFEASIBLE
    if args.build and not infeasible:
        if report.feasibility is Feasibility.CASE_A:
            depth = args.depth if args.depth is not None else 3
            proj = build_case_a(spec, args.alpha, depth, budget=args.budget)
        else:
            depth = args.depth if args.depth is not None else 6
            proj = build_case_b(spec, args.alpha, depth, budget=args.budget)[-1]
        save_truncated_projection(args.build, proj)
        pairs += [
            ("depth", proj.depth),
            ("dim", proj.matrix.shape[0]),
            ("trace", float(np.trace(proj.matrix).real)),
            ("covered_count", len(proj.covered)),
            ("residual_bound", proj.residual_bound),
        ]
    _emit(pairs, args)
    return 1 if infeasible else 0


def _cmd_verify(args) -> int:
    if args.spec:
        spec = load_sequence_spec(args.spec)
        truncated = load_truncated_projection(args.artifact)
        report = verify_truncation(spec, truncated, args.tol)
        _emit(
            [
                ("n", truncated.matrix.shape[0]),
                ("depth", truncated.depth),
                ("projection_residual", report.projection_residual),
                ("diagonal_error", report.diagonal_error),
                ("entry_excess", report.entry_excess),
                ("ok", report.ok),
            ],
            args,
        )
        return 0 if report.ok else 1
    m = load_matrix(args.artifact)
    pairs = [
        ("n", m.shape[0]),
        ("hermitian_residual", hermitian_residual(m)),
        ("unitary_residual", unitary_residual(m)),
        ("projection_residual", projection_residual(m)),
    ]
    ok = True
    if args.diagonal:
        x = load_vector(args.diagonal)
        if x.size != m.shape[0]:
            raise FormatError(f"diagonal length {x.size} does not match n={m.shape[0]}")
        diag_error = float(np.max(np.abs(np.diag(m) - x))) if x.size else 0.0
        pairs.append(("diagonal_error", diag_error))
        ok = ok and diag_error <= args.tol
    if args.spectrum:
        y = load_vector(args.spectrum)
        if y.size != m.shape[0]:
            raise FormatError(f"spectrum length {y.size} does not match n={m.shape[0]}")
        eigs = hermitian_eigenvalues(m)
        spectrum_error = float(np.max(np.abs(eigs - np.sort(y)))) if y.size else 0.0
        pairs.append(("spectrum_error", spectrum_error))
        ok = ok and spectrum_error <= args.tol
    pairs.append(("ok", ok))
    _emit(pairs, args)
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schurhorn",
        description="Majorisation, prescribed-diagonal synthesis, and projection truncations.",
    )
    style = argparse.ArgumentParser(add_help=False)
    style.add_argument("--human", action="store_true", help="prose output")
    style.add_argument("--csv", action="store_true", help="CSV output (header and value row)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("majorize", parents=[style], help="decide x majorised-by y")
    p.add_argument("x", help="vector JSON file (candidate)")
    p.add_argument("y", help="vector JSON file (majorant)")
    p.add_argument("--decompose", metavar="PLAN", help="write the mixing plan JSON here")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_majorize)

    p = sub.add_parser("synth", parents=[style], help="Hermitian with given diagonal and spectrum")
    p.add_argument("diagonal", help="vector JSON file (target diagonal)")
    p.add_argument("spectrum", help="vector JSON file (target spectrum)")
    p.add_argument("--out", required=True, help="write the matrix JSON here")
    p.add_argument("--unitary", help="write the conjugating unitary JSON here")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("carpenter", parents=[style], help="projection with given diagonal")
    p.add_argument("diagonal", help="vector JSON file (entries in [0, 1], integer sum)")
    p.add_argument("--out", required=True, help="write the projection JSON here")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_carpenter)

    p = sub.add_parser("obstruction", parents=[style], help="classify a sequence at a threshold")
    p.add_argument("spec", help="sequence JSON file")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--build", metavar="OUT", help="write a truncated projection JSON here")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--budget", type=int, default=100_000)
    p.set_defaults(handler=_cmd_obstruction)

    p = sub.add_parser("verify", parents=[style], help="re-check an emitted artifact")
    p.add_argument("artifact", help="matrix or truncated-projection JSON file")
    p.add_argument("--spec", help="sequence JSON; treat the artifact as a truncation of it")
    p.add_argument("--diagonal", help="vector JSON the matrix diagonal should match")
    p.add_argument("--spectrum", help="vector JSON the matrix spectrum should match")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(handler=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except InfeasibleDiagonalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MajorizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, BudgetExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
