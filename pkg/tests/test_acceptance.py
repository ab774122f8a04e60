"""Acceptance gate: one check per criterion, each reported as a PASS/FAIL line.

Run under pytest (the summary lines appear at the end of the session) or
directly with ``python3 tests/test_acceptance.py``.
"""

import sys
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from _battery import battery  # noqa: E402
from oracles import eulerian_row  # noqa: E402
from veronese_kpoly.carries import build_carries, semigroup_check, verify_stochastic  # noqa: E402
from veronese_kpoly.concavity import is_log_concave, is_quasi_concave  # noqa: E402
from veronese_kpoly.errors import DegenerateMap, InvalidInput  # noqa: E402
from veronese_kpoly.hull import HullRegion  # noqa: E402
from veronese_kpoly.intlat import build_config, in_column_lattice, is_totally_unimodular  # noqa: E402
from veronese_kpoly.laurent import LaurentPoly, one_minus_monomial, series_expand  # noqa: E402
from veronese_kpoly.polytope import (is_degenerate, partition_count, region_volumes,  # noqa: E402
                                     zonotope_build)
from veronese_kpoly.veronese import (AsymptoticExpansion, codim_asymptotic,  # noqa: E402
                                     convergence_report, k_polynomial, phi)

EX1 = build_config([[2, 1, 0], [0, 1, 2]])
EX2 = build_config([[1, 1, 0], [0, 0, 1]])
THREE_ROW = build_config([[1, -1, 1, 0, 0], [0, 1, -1, 1, 0], [0, 0, 1, -1, 1]])
CARRIES = build_config([[1, 1, 0, 0, -1], [0, 0, 1, 1, 1]])
SURFACE = build_config([[2, 1, 2, 0, 1, 2], [0, 1, 1, 2, 2, 2]])

T1, T2 = LaurentPoly.variables(2)
ONE = LaurentPoly.constant(1, 2)
HALF = Fraction(1, 2)

CRITERIA = {}
RESULTS = {}


def criterion(num, title):
    def wrap(fn):
        CRITERIA[num] = (title, fn)
        return fn
    return wrap


class Check:
    """Collects named sub-checks; the criterion passes when all of them do."""

    def __init__(self):
        self.failures = []
        self.notes = []

    def require(self, ok, what):
        if not ok:
            self.failures.append(what)
        return ok

    def note(self, text):
        self.notes.append(text)

    def verdict(self):
        parts = self.failures + self.notes
        return not self.failures, "; ".join(parts)


@criterion(1, "grading [[2,1,0],[0,1,2]]: closed forms and K")
def c1():
    c = Check()
    for r in range(3, 11):
        want = ((r - 1) * (T1**2 * T2**2 + T1**2 * T2 + T1 * T2**2) + r * T1 * T2
                + T1 + T2 + 1)
        c.require(phi(ONE, EX1, 2 * r) == want, f"Phi_{2 * r}[1]")
    for r in range(1, 11):
        c.require(phi(ONE, EX1, 2 * r + 1) == r * T1**2 * T2**2 + r * T1 * T2 + 1,
                  f"Phi_{2 * r + 1}[1]")
    K = k_polynomial(EX1)
    c.require(EX1.m == 2, "m == 2")
    c.require(K.k_poly == HALF * (T1**2 * T2**2 + T1**2 * T2 + T1 * T2**2 + T1 * T2), "K")
    c.require(K.coefficient_sum == 2, "K(1) == 2")
    return c.verdict()


@criterion(2, "grading [[1,1,0],[0,0,1]]: degenerate, four closed forms")
def c2():
    c = Check()
    deg, witness = is_degenerate(EX2)
    c.require(deg and witness is not None, "flagged degenerate")
    try:
        k_polynomial(EX2)
        c.require(False, "K raises DegenerateMap")
    except DegenerateMap:
        pass
    for r in range(2, 11):
        forms = {ONE: (r - 1) * T1 + 1, T1: (r - 1) * T1, T2: (r - 1) * T1 * T2 + T2,
                 T1 * T2: r * T1 * T2}
        for F, want in forms.items():
            got = phi(F, EX2, r)
            series_ok = (series_expand(F, EX2, 6 * r).sifted(r).restrict(6).coefficients
                         == series_expand(got, EX2, 6).coefficients)
            c.require(got == want, f"Phi_{r}[{F!r}] = {got!r}, expected {want!r}, "
                                   f"series sifting {'agrees with the computed value' if series_ok else 'disagrees'}")
    return c.verdict()


@criterion(3, "three-row grading: K = t1 t3 + t2 and concavity verdicts")
def c3():
    c = Check()
    t1, t2, t3 = LaurentPoly.variables(3)
    K = k_polynomial(THREE_ROW).k_poly
    c.require(K == t1 * t3 + t2, f"K == t1 t3 + t2 (got {K!r})")
    hull_pts = set(HullRegion(K.support()).lattice_points())
    c.require(hull_pts == set(K.support()), "hull lattice points equal the support")
    c.require(is_log_concave(K).holds, "log-concave")
    c.require(is_quasi_concave(K).holds, "quasi-concave")
    return c.verdict()


@criterion(4, "Eulerian specialization n = 2..6")
def c4():
    c = Check()
    (t,) = LaurentPoly.variables(1)
    rows = {2: [1], 3: [1, 1], 4: [1, 4, 1], 5: [1, 11, 11, 1], 6: [1, 26, 66, 26, 1]}
    for n in range(2, 7):
        c.require(eulerian_row(n - 1) == rows[n], f"oracle row {n}")
        K = k_polynomial(build_config([[1] * n])).k_poly
        want = sum((x * t ** (i + 1) for i, x in enumerate(rows[n])), LaurentPoly.zero(1))
        c.require(K == want, f"K for n={n}")
        c.require(K.eval_at_one() == factorial(n - 1), f"K(1) for n={n}")
    return c.verdict()


@criterion(5, "battery: closed-form coefficient sum and integral TU members")
def c5():
    c = Check()
    B = battery()
    c.require(len(B) >= 25, "battery size")
    for cfg in B:
        res = k_polynomial(cfg)
        c.require(res.coefficient_sum == res.closed_form_sum,
                  f"{cfg.entries}: K(1) = {res.coefficient_sum}, m^(n-d)(n-d)! = {res.closed_form_sum}")
        if is_totally_unimodular(cfg.entries):
            c.require(all(x.denominator == 1 for _, x in res.k_poly.items()), f"{cfg.entries}: integral")
            c.require(res.coefficient_sum == factorial(cfg.codim), f"{cfg.entries}: TU sum")
    return c.verdict()


@criterion(6, "concavity of K on the battery and the small examples")
def c6():
    c = Check()
    examples = [EX1, THREE_ROW, CARRIES, build_config([[1] * 5])]
    for cfg in list(battery()) + examples:
        K = k_polynomial(cfg).k_poly
        lc, qc = is_log_concave(K), is_quasi_concave(K)
        c.require(lc.holds, f"{cfg.entries}: log-concave")
        c.require(qc.holds, f"{cfg.entries}: quasi-concave")
        c.require(not lc.holds or qc.holds, f"{cfg.entries}: implication")
    return c.verdict()


def _box_bound(cfg, F, size=200):
    """Smallest multiple of the minimal column weight whose series box has ``size`` terms."""
    step = min(cfg.weight(a) for a in cfg.columns)

    def big_enough(k):
        return len(series_expand(F, cfg, k * step).coefficients) >= size
    hi = 1
    while not big_enough(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (lo, mid) if big_enough(mid) else (mid, hi)
    return hi * step


@criterion(7, "oracle equivalence: count, product, sifted series, partition counts")
def c7():
    c = Check()
    for cfg in battery():
        base = LaurentPoly.constant(1, cfg.d)
        F = base + 2 * LaurentPoly.monomial(cfg.columns[0])
        bound = _box_bound(cfg, base)
        big = series_expand(F, cfg, 5 * bound)
        for r in range(2, 6):
            P = phi(F, cfg, r)
            c.require(P == phi(F, cfg, r, method="product"), f"{cfg.entries} r={r}: count vs product")
            lhs = big.sifted(r).restrict(bound)
            rhs = series_expand(P, cfg, bound)
            c.require(lhs.coefficients == rhs.coefficients, f"{cfg.entries} r={r}: sifted series")
        box = series_expand(base, cfg, bound)
        c.require(len(box.coefficients) >= 200, f"{cfg.entries}: box size")
        bad = [w for w, x in box.coefficients.items() if partition_count(cfg, w) != x]
        c.require(not bad, f"{cfg.entries}: partition counts at {bad[:3]}")
    return c.verdict()


SURFACE_F = ((1 - T1 * T2) * (1 - T1**2 * T2) * (1 - T1 * T2**2)
             * (1 + T1 * T2 + T1**2 * T2 + T1 * T2**2))
SURFACE_LIMIT = (HALF * T1 * T2 * (T1 + 1) * (T2 + 1) * (T1 * T2 + 1)
                 * (1 - T1 * T2) * (1 - T1**2 * T2) * (1 - T1 * T2**2))


@criterion(8, "codimension formula on the surface grading")
def c8():
    c = Check()
    rep = convergence_report(SURFACE_F, SURFACE, 12, codim=3, check_concavity=False)
    c.require(rep.limit == SURFACE_LIMIT, f"convergence limit (got {rep.limit!r})")
    e1 = AsymptoticExpansion(3, (((2, 3, 5), 4),))
    e2 = AsymptoticExpansion(3, (((1, 2, 5), 2), ((2, 5, 6), 2)))
    c.require(codim_asymptotic(SURFACE, e1) == SURFACE_LIMIT, "first expansion")
    c.require(codim_asymptotic(SURFACE, e2) == SURFACE_LIMIT, "second expansion")
    literal, dropped = [], []
    for i, a in enumerate(SURFACE.columns):
        y = one_minus_monomial(a)
        for r in range(2, 9):
            lhs = phi(y * SURFACE_F, SURFACE, r)
            if lhs != y * phi(SURFACE_F, SURFACE, r):
                literal.append((i + 1, r))
            if lhs != y * phi(SURFACE_F, SURFACE.submatrix([i]), r):
                dropped.append((i + 1, r))
    c.require(not literal, f"commutation fails for {len(literal)} of 42 (i, r), first {literal[:3]}")
    c.note(f"with column i dropped from the grading on the right: {42 - len(dropped)}/42 hold")
    return c.verdict()


LISTED_ORDER = [(1, 2), (1, 1), (2, 0), (1, 0)]
TABLE_ORDER = [(1, 2), (1, 1), (0, 2), (0, 1)]


def _binomial_table(r):
    b = comb
    return [[b(r + 2, 3), b(r + 1, 3), b(r + 1, 3), b(r, 3)],
            [2 * b(r + 1, 3), 2 * b(r + 1, 3) + b(r + 1, 2), 2 * b(r, 3) + b(r, 2), 2 * b(r + 1, 3)],
            [2 * b(r + 1, 3), 2 * b(r, 3) + b(r, 2), 2 * b(r + 1, 3) + b(r + 1, 2), 2 * b(r + 1, 3)],
            [b(r, 3), b(r + 1, 3), b(r + 1, 3), b(r + 2, 3)]]


@criterion(9, "carries matrix of [[1,1,0,0,-1],[0,0,1,1,1]]")
def c9():
    c = Check()
    try:
        build_carries(CARRIES, 2, order=LISTED_ORDER)
    except InvalidInput:
        c.note("the listed order names non-interior points; using (1,2),(1,1),(0,2),(0,1)")
    K = k_polynomial(CARRIES)
    for r in range(2, 7):
        C = build_carries(CARRIES, r, order=TABLE_ORDER)
        c.require([[x * r**3 for x in row] for row in C.entries] == _binomial_table(r), f"table r={r}")
        rep = verify_stochastic(C, K, build_carries(CARRIES, r + 1, order=TABLE_ORDER))
        c.require(rep.column_sums_one, f"column sums r={r}")
        c.require(rep.stationary and rep.stationary_vector == [Fraction(x, 6) for x in (1, 2, 2, 1)],
                  f"stationary r={r}")
        c.require(all(rep.roots.values()) and rep.nullities == {0: 1, 1: 2, 2: 1}, f"eigen r={r}")
    c.require(semigroup_check(CARRIES, 2, 3, order=TABLE_ORDER)[0], "C(2) C(3) == C(6)")
    return c.verdict()


@criterion(10, "region volumes against fiber volumes and the closed-form total")
def c10():
    c = Check()
    for cfg in battery():
        K = k_polynomial(cfg)
        vols = region_volumes(cfg)
        inner = set(zonotope_build(cfg).interior_lattice_points)
        for u in sorted(inner):
            c.require(vols[u] == K.per_point[u],
                      f"{cfg.entries} at {u}: region {vols[u]} vs fiber {K.per_point[u]}")
        extra = [u for u, v in vols.items() if v and u not in inner]
        c.require(not extra, f"{cfg.entries}: nonzero region volume off the interior at {extra[:3]}")
        total = sum(vols.values())
        c.require(total == K.closed_form_sum,
                  f"{cfg.entries}: total {total} vs m^(n-d)(n-d)! = {K.closed_form_sum}")
    return c.verdict()


R_MAX, R0_BOUND = 60, 40


@criterion(11, "empirical r0 for Veronese numerators")
def c11():
    c = Check()
    found = []
    tried = 0
    for cfg in battery():
        Z = zonotope_build(cfg)
        if cfg.codim > 2 or len(Z.interior_lattice_points) > 50:
            continue
        pts = [u for u in Z.interior_lattice_points if in_column_lattice(cfg, u)]
        if not pts:
            continue
        tried += 1
        F = LaurentPoly({u: 1 for u in pts[:2]}, cfg.d)
        rep = convergence_report(F, cfg, R_MAX, off_stride=False)
        c.require(rep.checked_up_to <= R_MAX and "unverified" in rep.caveat,
                  f"{cfg.entries}: report scope")
        if rep.empirical_r0 is not None and rep.empirical_r0 <= R0_BOUND:
            found.append(cfg.entries)
    c.require(len(found) >= 5, f"only {len(found)} members with r0 <= {R0_BOUND}")
    c.note(f"{len(found)} of {tried} members reach r0 <= {R0_BOUND} with r checked up to {R_MAX}")
    return c.verdict()


def run_criterion(num):
    title, fn = CRITERIA[num]
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[num] = (ok, title, detail)
    return ok, detail


def summary_lines():
    out = []
    for num in sorted(RESULTS):
        ok, title, detail = RESULTS[num]
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail if len(detail) < 400 else detail[:400] + ' ...'}]"
        out.append(line)
    return out


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    ok, detail = run_criterion(num)
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        run_criterion(n)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
