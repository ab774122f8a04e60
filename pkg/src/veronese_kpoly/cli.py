"""Command-line driver: one job per invocation, one JSON document on stdout.

Exit codes: 0 success, 1 invalid input, 2 degenerate map, 3 size limit,
4 a verification command found a failing property.
"""

import argparse
import logging
import sys
from math import factorial

from . import formats as fmt
from .carries import build_carries, semigroup_check, verify_stochastic
from .concavity import is_log_concave, is_quasi_concave
from .errors import LIMITS, DegenerateMap, InvalidInput, SizeLimit, VeroneseError
from .intlat import build_config, is_totally_unimodular
from .laurent import LaurentPoly, series_expand
from .polytope import is_degenerate, zonotope_build
from .veronese import codim_asymptotic, convergence_report, k_polynomial, phi

log = logging.getLogger("veronese_kpoly")

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE, EXIT_SIZE, EXIT_PROPERTY = 0, 1, 2, 3, 4

Q = fmt.rational_to_json
P = fmt.poly_to_json


def _points(pts):
    return [list(p) for p in pts]


def _config(args):
    return build_config(fmt.matrix_from_json(fmt.load_file(args.matrix)))


def _poly(args, nvars):
    if not args.poly:
        raise InvalidInput("--poly is required for this command")
    return fmt.poly_from_json(fmt.load_file(args.poly), nvars)


def _verdict(v):
    out = {"holds": v.holds}
    if v.witness is not None:
        w = v.witness
        out["witness"] = {
            "kind": w.kind, "w": list(w.w),
            "u": list(w.u) if w.u is not None else None,
            "v": list(w.v) if w.v is not None else None,
            "q": w.q, "a": w.a,
            "lhs": Q(w.lhs), "rhs": Q(w.rhs),
        }
    return out


def cmd_analyze(args):
    cfg = _config(args)
    try:
        tu = is_totally_unimodular(cfg.entries)
    except SizeLimit:
        tu = None
    Z = zonotope_build(cfg)
    degenerate, witness = is_degenerate(cfg)
    doc = {
        "d": cfg.d, "n": cfg.n, "rank": cfg.rank, "m": cfg.m,
        "kernel_basis": _points(cfg.kernel_basis),
        "positive_functional": [Q(x) for x in cfg.positive_functional],
        "totally_unimodular": tu,
        "zonotope_vertices": _points(Z.vertices),
        "interior_lattice_points": _points(Z.interior_lattice_points),
        "degenerate": degenerate,
        "degenerate_witness": list(witness) if witness is not None else None,
    }
    return doc, EXIT_OK


def cmd_kpoly(args):
    cfg = _config(args)
    K = k_polynomial(cfg)
    doc = {
        "kpoly": P(K.k_poly),
        "sum": Q(K.coefficient_sum),
        "m": cfg.m,
        "n_minus_d": K.n_minus_d,
        "closed_form_sum": Q(K.closed_form_sum),
        "lattice_sum": Q(K.lattice_sum),
    }
    return doc, EXIT_OK


def cmd_phi(args):
    cfg = _config(args)
    F = _poly(args, cfg.d)
    return {"r": args.r, "phi": P(phi(F, cfg, args.r, method=args.method))}, EXIT_OK


def cmd_expand(args):
    cfg = _config(args)
    F = _poly(args, cfg.d)
    box = series_expand(F, cfg, args.bound)
    return {"bound": Q(box.bound), "coefficients": P(LaurentPoly(box.coefficients, cfg.d))}, EXIT_OK


def cmd_concavity(args):
    if args.matrix:
        nvars = _config(args).d
    else:
        raw = fmt.load_file(args.poly)
        if not raw:
            raise InvalidInput("cannot infer the number of variables of an empty polynomial")
        nvars = len(raw[0].get("exp", []))
    F = _poly(args, nvars)
    lc, qc = is_log_concave(F), is_quasi_concave(F)
    doc = {"log_concave": _verdict(lc), "quasi_concave": _verdict(qc)}
    return doc, EXIT_OK if lc.holds and qc.holds else EXIT_PROPERTY


def cmd_carries(args):
    cfg = _config(args)
    order = fmt.load_file(args.order) if args.order else None
    if args.r1 is not None or args.r2 is not None:
        if args.r1 is None or args.r2 is None:
            raise InvalidInput("--r1 and --r2 go together")
        equal, diff = semigroup_check(cfg, args.r1, args.r2, order, args.off_stride)
        doc = {"r1": args.r1, "r2": args.r2, "equal": equal,
               "discrepancy": [{"u": list(u), "v": list(v), "delta": Q(x)}
                               for (u, v), x in sorted(diff.items())]}
        return doc, EXIT_OK if equal else EXIT_PROPERTY
    if args.r is None:
        raise InvalidInput("--r (or --r1/--r2) is required")
    C = build_carries(cfg, args.r, order, args.off_stride)
    K = k_polynomial(cfg)
    other_r = args.r_other if args.r_other is not None else args.r + cfg.m
    other = build_carries(cfg, other_r, order, args.off_stride)
    rep = verify_stochastic(C, K, other)
    doc = {
        "carries": fmt.carries_to_json(C),
        "column_sums_one": rep.column_sums_one,
        "bad_columns": _points(rep.bad_columns),
        "stationary": rep.stationary,
        "stationary_vector": [Q(x) for x in rep.stationary_vector],
        "eigen": [{"i": i, "root": rep.roots[i], "nullity": rep.nullities[i],
                   "basis": rep.eigenvectors[i], "stable": rep.eigenvectors_stable.get(i)}
                  for i in sorted(rep.roots)],
        "compared_with_r": other_r,
    }
    return doc, EXIT_OK if rep.ok else EXIT_PROPERTY


def cmd_asymptotic(args):
    cfg = _config(args)
    if not args.expansion:
        raise InvalidInput("--expansion is required")
    E = fmt.expansion_from_json(fmt.load_file(args.expansion))
    G = codim_asymptotic(cfg, E)
    k = cfg.n - E.codim - cfg.d
    return {"order": k, "limit": P(G), "limit_times_factorial": P(G * factorial(k))}, EXIT_OK


def cmd_convergence(args):
    cfg = _config(args)
    F = _poly(args, cfg.d)
    rep = convergence_report(F, cfg, args.rmax, codim=args.codim, method=args.method)
    doc = {
        "order": rep.order, "stride": rep.stride,
        "limit": P(rep.limit) if rep.limit is not None else None,
        "period": rep.period,
        "expected": P(rep.expected) if rep.expected is not None else None,
        "limit_matches_expected": rep.limit_matches_expected,
        "difference_norms": [{"r": r, "norm": Q(x)} for r, x in sorted(rep.difference_norms.items())],
        "residue_limits": [{"residue": rho, "limit": P(L) if L is not None else None}
                           for rho, L in sorted(rep.residue_limits.items())],
        "oscillates": rep.oscillates,
        "residuals": [{"r": r, "residual": P(x)} for r, x in sorted(rep.residuals.items())],
        "empirical_r0": rep.empirical_r0,
        "checked_up_to": rep.checked_up_to,
        "caveat": rep.caveat,
    }
    return doc, EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze, "kpoly": cmd_kpoly, "phi": cmd_phi, "expand": cmd_expand,
    "concavity": cmd_concavity, "carries": cmd_carries, "asymptotic": cmd_asymptotic,
    "convergence": cmd_convergence,
}


def _positive(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input (exit 1), not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="veronese-kpoly", description=__doc__.splitlines()[0])
    parser.add_argument("--term-cap", type=_positive, default=10**6)
    parser.add_argument("--box-cap", type=_positive, default=10**7)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--matrix", required=name != "concavity")
        if name in ("phi", "expand", "concavity", "convergence"):
            p.add_argument("--poly", required=True)
        if name in ("phi", "convergence"):
            p.add_argument("--method", choices=("count", "product"), default="count")
        if name == "phi":
            p.add_argument("--r", type=_positive, required=True)
        if name == "expand":
            p.add_argument("--bound", type=int, required=True)
        if name == "carries":
            p.add_argument("--r", type=_positive)
            p.add_argument("--r-other", type=_positive)
            p.add_argument("--r1", type=_positive)
            p.add_argument("--r2", type=_positive)
            p.add_argument("--order", help="JSON list of interior points fixing the row order")
            p.add_argument("--off-stride", action="store_true")
        if name == "asymptotic":
            p.add_argument("--expansion", required=True)
        if name == "convergence":
            p.add_argument("--rmax", type=_positive, required=True)
            p.add_argument("--codim", type=int, default=0)
    return parser


def run(argv=None, out=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    saved = LIMITS.term, LIMITS.box
    LIMITS.term, LIMITS.box = args.term_cap, args.box_cap
    try:
        doc, code = COMMANDS[args.command](args)
    except VeroneseError as exc:
        witness = exc.witness
        if witness is not None:
            witness = [int(x) for x in witness]
        doc = {"error": {"kind": exc.kind, "detail": str(exc.detail), "witness": witness}}
        if isinstance(exc, DegenerateMap):
            code = EXIT_DEGENERATE
        elif isinstance(exc, SizeLimit):
            code = EXIT_SIZE
        else:
            code = EXIT_INVALID
        log.info("%s: %s", exc.kind, exc.detail)
    finally:
        LIMITS.term, LIMITS.box = saved
    out.write(fmt.dumps(doc))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
