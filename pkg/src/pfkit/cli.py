"""Command-line front end.

Three subcommands::

    pfkit analyze (--matrix "a,b;c,d" | --model file.json) [--branch plus|minus] [--tol X]
    pfkit verify --count N --seed S
    pfkit sweep --config file.json [--out file.csv] [--workers N]

``analyze`` prints a JSON report to stdout and exits 0 on success, 2 when
the input sits at an exceptional point or admits no pseudo-fermions (a
phase report is still emitted) and 1 on parse errors.  ``verify`` exits
nonzero iff any invariant residual exceeds its gate.  ``sweep`` writes CSV
or JSON rows that are byte-identical across runs and worker counts.

Matrix literals use ';' between rows, ',' between entries, and complex
entries written like ``0.5+0.866i``.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .decomposition import (
    Branch,
    biorthogonal_system,
    decompose,
    fermionize,
    intertwining_check,
    metrics,
    pf_pair,
    pf_parameters,
)
from .errors import (
    ExceptionalPoint,
    InvalidGrid,
    NoPseudoFermions,
    NotInPTForm,
    PfkitError,
    UnsupportedShape,
)
from .catalog import identify, model_from_dict, to_matrix
from .mat2 import DEGENERACY_TOL, dagger, max_abs
from .symmetry import check_pt, classify_phase, involutive_symmetry
from .sweep import config_from_dict, run_sweep, write_csv, write_json
from .verify import format_table, run_verification


class ParseFailure(ValueError):
    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


def parse_matrix_literal(text):
    """2x2 complex matrix from "a,b;c,d" with entries like ``0.5+0.866i``."""
    rows = text.strip().split(";")
    if len(rows) != 2:
        raise ParseFailure(f"expected 2 rows separated by ';', got {len(rows)}",
                           row=len(rows))
    out = np.zeros((2, 2), dtype=complex)
    for i, row in enumerate(rows):
        cells = row.split(",")
        if len(cells) != 2:
            raise ParseFailure(
                f"row {i + 1}: expected 2 entries separated by ',', got {len(cells)}",
                row=i + 1, col=len(cells))
        for j, cell in enumerate(cells):
            token = cell.strip().replace(" ", "")
            try:
                if not token:
                    raise ValueError("empty entry")
                out[i, j] = complex(token.replace("i", "j"))
            except ValueError:
                raise ParseFailure(
                    f"row {i + 1}, column {j + 1}: cannot parse {cell.strip()!r} "
                    "as a complex number (use re+imi, e.g. 0.5+0.866i)",
                    row=i + 1, col=j + 1) from None
    return out


def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def _m(mat):
    return [[_c(mat[0, 0]), _c(mat[0, 1])], [_c(mat[1, 0]), _c(mat[1, 1])]]


def _v(vec):
    return [_c(vec[0]), _c(vec[1])]


def _analyze_one(h, branch, tol, dec=None, params=None):
    """Full analysis report for one matrix; may raise domain errors.

    ``dec``/``params`` may be supplied by a model identification (whose
    branch labels follow the model's own conventions); otherwise the
    generic lexicographic decomposition is used.
    """
    phase_res = classify_phase(h, tol=max(tol, 1e-12))
    report = {
        "input": _m(h),
        "phase": phase_res.phase.label,
        "eigenvalues": [_c(phase_res.eigenvalues[0]), _c(phase_res.eigenvalues[1])],
        "eigenvalue_gap": phase_res.gap,
    }
    try:
        rep = check_pt(h, x=1.0, tol=max(tol, 1e-12))
        report["pt"] = {
            "pt_symmetric": True,
            "x": rep.x_param,
            "q": rep.q,
            "phase": rep.phase.label,
            "eps_plus": _c(rep.eps_plus),
            "eps_minus": _c(rep.eps_minus),
            "lambda_plus": None if rep.lambda_plus is None else _c(rep.lambda_plus),
            "lambda_minus": None if rep.lambda_minus is None else _c(rep.lambda_minus),
        }
    except NotInPTForm as exc:
        report["pt"] = {
            "pt_symmetric": False,
            "offdiag_residual": exc.offdiag_residual,
            "diag_residual": exc.diag_residual,
        }

    if dec is None:
        dec = decompose(h, branch, tol=tol)  # ExceptionalPoint / UnsupportedShape
        params = pf_parameters(dec)
    pair = pf_pair(dec, params)
    sys_ = biorthogonal_system(dec, params)
    met = metrics(dec, params)
    fp = fermionize(dec, pair, met)
    check = intertwining_check(dec, met, params)
    xi, _ = involutive_symmetry(dec)

    report.update({
        "decomposition": {
            "branch": dec.branch.value,
            "omega": _c(dec.omega),
            "rho": _c(dec.rho),
            "alpha": _c(dec.alpha),
            "beta": _c(dec.beta),
            "gamma": _c(dec.gamma),
            "mu": _c(dec.mu),
        },
        "pf_parameters": {
            "a11": _c(params.a11), "a12": _c(params.a12),
            "b11": _c(params.b11), "b12": _c(params.b12),
        },
        "operators": {"a": _m(pair.a), "b": _m(pair.b)},
        "biorthogonal": {
            "phi0": _v(sys_.phi0), "phi1": _v(sys_.phi1),
            "psi0": _v(sys_.psi0), "psi1": _v(sys_.psi1),
        },
        "metrics": {
            "s_phi": _m(met.s_phi),
            "s_psi": _m(met.s_psi),
            "s_phi_sqrt": _m(met.s_phi_sqrt),
            "s_psi_sqrt": _m(met.s_psi_sqrt),
            "t_ratio": met.t_ratio,
            "discrepancies": list(met.discrepancies),
        },
        "fermionic": {
            "c": _m(fp.c), "n0": _m(fp.n0), "h": _m(fp.h),
            "e0": _v(fp.e0), "e1": _v(fp.e1),
        },
        "involution": _m(xi),
        # commuting family: X = [[x11, x12], [c21*x12, x11 + c22*x12]]
        "commutant_rule": {
            "c21": _c(-dec.alpha * dec.beta),
            "c22": _c(-(dec.alpha + dec.beta)),
        },
        "residuals": {
            "reconstruction": max_abs(dec.matrix() - h),
            "metric_duality": max_abs(met.s_phi @ met.s_psi - np.eye(2)),
            "intertwining": max(check.intertwine_psi, check.intertwine_phi),
            "basis_mapping": max(check.map_psi_to_phi, check.map_phi_to_psi),
            "h_hermiticity": max_abs(fp.h - dagger(fp.h)),
            "fermion_anticommutator": max_abs(
                fp.c @ fp.cdag + fp.cdag @ fp.c - np.eye(2)),
            "norm_bounds_hold": check.bounds_hold,
        },
    })
    return report


def cmd_analyze(args):
    spec = None
    try:
        if args.matrix is not None:
            h = parse_matrix_literal(args.matrix)
        else:
            with open(args.model, encoding="utf-8") as f:
                doc = json.load(f)
            spec = model_from_dict(doc)
            h = to_matrix(spec)
    except ParseFailure as exc:
        print(json.dumps({"error": str(exc), "row": exc.row, "col": exc.col}),
              file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        msg = {"error": str(exc)}
        if isinstance(exc, json.JSONDecodeError):
            msg.update({"line": exc.lineno, "col": exc.colno})
        print(json.dumps(msg), file=sys.stderr)
        return 1

    branch = Branch.PLUS if args.branch == "plus" else Branch.MINUS
    try:
        if spec is not None:
            ident = identify(spec, alpha11=1.0)
            dec = ident.dec_plus if branch is Branch.PLUS else ident.dec_minus
            params = ident.params_plus if branch is Branch.PLUS else ident.params_minus
            report = _analyze_one(h, branch, args.tol, dec=dec, params=params)
        else:
            report = _analyze_one(h, branch, args.tol)
    except (ExceptionalPoint, NoPseudoFermions, UnsupportedShape) as exc:
        phase_res = classify_phase(h, tol=max(args.tol, 1e-12))
        report = {
            "input": _m(h),
            "phase": phase_res.phase.label,
            "eigenvalues": [_c(phase_res.eigenvalues[0]),
                            _c(phase_res.eigenvalues[1])],
            "eigenvalue_gap": phase_res.gap,
            "error": type(exc).__name__,
            "detail": str(exc),
        }
        print(json.dumps(report, indent=2))
        return 2
    print(json.dumps(report, indent=2))
    return 0


def cmd_verify(args):
    report = run_verification(count=args.count, seed=args.seed,
                              inject_fault=args.inject_fault)
    sys.stdout.write(format_table(report))
    return 0 if report.passed else 3


def cmd_sweep(args):
    try:
        with open(args.config, encoding="utf-8") as f:
            doc = json.load(f)
        overrides = {}
        if args.branch:
            overrides["branch"] = args.branch
        if args.tol is not None:
            overrides["tol"] = args.tol
        if args.workers is not None:
            overrides["workers"] = args.workers
        if args.output:
            overrides["output"] = args.output
        config = config_from_dict(doc, **overrides)
        result = run_sweep(config)
    except json.JSONDecodeError as exc:
        print(json.dumps({"error": str(exc), "line": exc.lineno, "col": exc.colno}),
              file=sys.stderr)
        return 1
    except (InvalidGrid, OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1

    writer = write_csv if config.output == "csv" else write_json
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            writer(result, f)
    else:
        writer(result, sys.stdout)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pfkit",
        description="Pseudo-fermion analysis of 2x2 non-self-adjoint Hamiltonians")
    parser.add_argument("--version", action="version", version=f"pfkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="analyze one matrix or model instance")
    src = pa.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help='matrix literal "a,b;c,d" (entries like 0.5+0.866i)')
    src.add_argument("--model", help="path to a model JSON file")
    pa.add_argument("--branch", choices=["plus", "minus"], default="minus")
    pa.add_argument("--tol", type=float, default=DEGENERACY_TOL)
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="run the randomized invariant suite")
    pv.add_argument("--count", type=int, default=1000)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("sweep", help="evaluate a parameter grid")
    ps.add_argument("--config", required=True, help="sweep config JSON file")
    ps.add_argument("--out", help="output path (stdout when omitted)")
    ps.add_argument("--branch", choices=["plus", "minus", "both"])
    ps.add_argument("--tol", type=float)
    ps.add_argument("--workers", type=int)
    ps.add_argument("--output", choices=["csv", "json"])
    ps.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PfkitError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
