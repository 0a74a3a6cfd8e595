"""Command-line interface.

Exit codes: 0 pass, 1 verification failure or cross-check mismatch,
2 usage error, 3 inconclusive (no failures).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _jsonable(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return _jsonable(x.item())
    if x is None or isinstance(x, (bool, int, str)):
        return x
    return str(x)


def render_json(args, results) -> str:
    flags = {k: v for k, v in vars(args).items() if k not in ("handler",)}
    meta = {
        "version": __version__,
        "command": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "workers", None),
    }
    return json.dumps(_jsonable({"meta": meta, "results": results}), indent=2) + "\n"


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else _csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_eigenvalues(args) -> int:
    from .eigencalc import sign_report

    if args.d < 3:
        raise UsageError("eigenvalues require d >= 3 (the kernel phi_d is defined for d >= 3)")
    if args.kmax < 0:
        raise UsageError("--kmax must be >= 0")
    rows = sign_report(args.d, args.kmax)
    header = ["d", "k", "exact_numerator", "exact_denominator", "omega_index", "closed_form_match", "numeric", "sign"]
    table = []
    mismatch = False
    for r in rows:
        match = r.closed_form_match
        if match is False:
            mismatch = True
        if r.exact is not None:
            table.append([r.d, r.k, r.exact.coeff.numerator, r.exact.coeff.denominator, r.exact.omega_index,
                          match, r.numeric, r.sign])
        else:
            table.append([r.d, r.k, None, None, r.d - 2, None, r.numeric, r.sign])
    if args.format == "csv":
        emit(args, render_csv(header, table))
    else:
        emit(args, render_json(args, [dict(zip(header, row)) for row in table]))
    return EXIT_FAIL if mismatch else EXIT_PASS


def cmd_constant(args) -> int:
    from .measures import INF, parse_q, sharp_constant, sigma_hat_norm_detail, range_clause
    from .specialfn import sphere_area
    from . import asymptotics

    try:
        q = parse_q(args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        clause = range_clause(args.d, args.k, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    main = sharp_constant(args.d, args.k, q)
    if args.k == 2:
        cross = sharp_constant(args.d, 2, q, method="closed-form-d4")
        cross_value, cross_method = cross.value, cross.method
    elif args.d >= 3:
        cross = sharp_constant(args.d, args.k, q, method="convolution", grid_size=args.grid)
        cross_value, cross_method = cross.value, cross.method
    else:
        radius = 2 * asymptotics.tail_radius((args.d - 2) / 2)
        norm, _ = sigma_hat_norm_detail(args.d, args.k, radius=radius)
        iq = 0.0 if q is INF else 1.0 / q
        cross_value, cross_method = sphere_area(args.d - 1) ** (-iq) * norm, f"plancherel-bessel(R={radius:g})"
    rel = abs(cross_value - main.value) / main.value
    result = {
        "d": args.d,
        "p": 2 * args.k,
        "q": "inf" if q is INF else q,
        "clause": clause,
        "value": main.value,
        "method": main.method,
        "cross_check_value": cross_value,
        "cross_check_method": cross_method,
        "cross_check_rel_err": rel,
    }
    if args.format == "csv":
        emit(args, render_csv(list(result), [list(result.values())]))
    else:
        emit(args, render_json(args, [result]))
    return EXIT_PASS if rel <= args.cross_rtol else EXIT_FAIL


def _trial_from_args(args):
    from .spherequad import TrialFunction, random_trial
    import numpy as np

    d = args.d
    if args.f == "constant":
        return TrialFunction.constant(1.0)
    if args.f == "plane_wave":
        return TrialFunction.plane_wave([args.xi] + [0.0] * (d - 1))
    if args.f == "perturbation":
        return TrialFunction.harmonic_perturbation(args.eps, args.degree)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
    return random_trial(rng)


def cmd_verify(args) -> int:
    from . import verifier as V

    suite = args.suite
    d = args.d
    try:
        if suite == "thm1":
            reports = V.verify_thm1(d, args.k, args.q, args.trials, args.seed,
                                    eq_rtol=args.eq_rtol, bound_rtol=args.bound_rtol)
        elif suite == "cor3":
            reports = V.verify_cor3(d, args.pairs, args.samples, args.seed, args.workers)
        elif suite == "identity":
            reports = [V.geometric_identity(d, args.samples, args.seed, args.workers, threshold=args.threshold)]
        elif suite == "lem11":
            reports = V.verify_lem11(d, args.trials, args.seed, args.samples, args.workers)
        elif suite == "antipodal":
            reports = V.antipodal_check(_trial_from_args(args), d)
        else:  # chain
            cr = V.chain_report(d, _trial_from_args(args))
            if args.format == "csv":
                emit(args, _reports_csv(cr.reports))
            else:
                emit(args, render_json(args, [cr.to_dict()]))
            return _exit_for(cr.verdict)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        emit(args, _reports_csv(reports))
    else:
        emit(args, render_json(args, [r.to_dict() for r in reports]))
    return _exit_for(V.overall(r.verdict for r in reports))


REPORT_COLUMNS = ["name", "lhs", "rhs", "stat_error", "tolerance", "relation", "verdict"]


def _reports_csv(reports) -> str:
    return render_csv(REPORT_COLUMNS, [[getattr(r, c) for c in REPORT_COLUMNS] for r in reports])


def _exit_for(verdict: str) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[verdict]


def cmd_convolution(args) -> int:
    import numpy as np

    from .measures import conv_profile

    if args.d < 3:
        raise UsageError("convolution profiles need d >= 3 (d=2 beyond sigma*sigma is unsupported)")
    if not 2 <= args.fold <= 8:
        raise UsageError("--fold must satisfy 2 <= fold <= 8")
    if args.grid < 64:
        raise UsageError("--grid must be >= 64")
    prof = conv_profile(args.d, args.fold, args.grid)
    rows = prof.to_rows()
    rmax = args.rmax if args.rmax is not None else float(args.fold)
    if rmax > args.fold:
        extra = np.arange(args.fold + 0.0625, rmax + 1e-12, 0.0625)
        rows += [(float(r), float(prof(r))) for r in extra]
    if args.format == "csv":
        emit(args, render_csv(["r", "density"], rows))
    else:
        emit(args, render_json(args, [{"r": r, "density": v} for r, v in rows]))
    return EXIT_PASS


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="json by default; csv for convolution")
    common.add_argument("--output", "-o", default=None, help="write to this path instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1, help="sampling threads (results depend on this count)")

    p = _Parser(prog="sharpsphere", description="Sharp sphere-extension constants and eigenvalue tables.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eigenvalues", parents=[common], help="Funk-Hecke eigenvalue table")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--kmax", type=int, default=10)
    e.set_defaults(handler=cmd_eigenvalues)

    c = sub.add_parser("constant", parents=[common], help="sharp constant C(d, 2k, q)")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--q", default="2", help='positive number or "inf"')
    c.add_argument("--grid", type=int, default=2048, help="grid for the convolution cross-check")
    c.add_argument("--cross-rtol", type=float, default=1e-6)
    c.set_defaults(handler=cmd_constant)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("thm1", "cor3", "identity", "chain", "lem11", "antipodal"))
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--q", default="4")
    v.add_argument("--trials", type=int, default=4)
    v.add_argument("--pairs", type=int, default=20)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--f", choices=("constant", "plane_wave", "perturbation", "random"), default="constant")
    v.add_argument("--eps", type=float, default=0.3)
    v.add_argument("--degree", type=int, default=2)
    v.add_argument("--xi", type=float, default=1.0, help="plane-wave frequency")
    v.add_argument("--eq-rtol", type=float, default=1e-5)
    v.add_argument("--bound-rtol", type=float, default=1e-6)
    v.add_argument("--threshold", type=float, default=1e-12, help="identity deviation threshold")
    v.set_defaults(handler=cmd_verify)

    cv = sub.add_parser("convolution", parents=[common], help="radial density of the k-fold convolution")
    cv.add_argument("--d", type=int, required=True)
    cv.add_argument("--fold", type=int, default=2)
    cv.add_argument("--grid", type=int, default=2048)
    cv.add_argument("--rmax", type=float, default=None, help="extend the table beyond the support")
    cv.set_defaults(handler=cmd_convolution)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    if args.format is None:
        args.format = "csv" if args.command == "convolution" else "json"
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"sharpsphere {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
