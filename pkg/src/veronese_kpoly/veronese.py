"""The Veronese operator on Hilbert-series numerators and its asymptotics.

``phi(F, config, r)`` is the numerator of the series obtained by keeping the
coefficients at exponents divisible by ``r`` in ``F / prod_j (1 - t^{a_j})``.
Two exact routes are provided: counting lattice points in boxes
(``C_r(u, v)``) and sifting the product of ``F`` with the geometric factor.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from . import concavity
from .errors import DegenerateMap, InvalidInput, NotAcyclic, RankDeficient
from .intlat import minors_lcm
from .laurent import LaurentPoly, geometric_factor, one_minus_monomial, sieve
from .polytope import fiber_polytope, is_degenerate, zonotope_build


def c_coeff(config, r, u, v):
    """``C_r(u, v)``: points ``x`` of ``[0, r-1]^n`` with ``A x = r u - v``."""
    if r < 1:
        raise InvalidInput("r must be positive")
    rhs = tuple(r * a - b for a, b in zip(u, v))
    return config.solver.count_box(rhs, r - 1)


def _candidates(config, r, v):
    """Lattice ``u`` with ``r u - v`` in the dilated zonotope ``(r-1) Z``."""
    Z = zonotope_build(config)
    cols = config.columns
    box = []
    for i in range(config.d):
        lo = (r - 1) * sum(min(0, a[i]) for a in cols) + v[i]
        hi = (r - 1) * sum(max(0, a[i]) for a in cols) + v[i]
        box.append(range(-((-lo) // r), hi // r + 1))
    for u in product(*box):
        w = [r * a - b for a, b in zip(u, v)]
        if all((r - 1) * lo <= sum(c * x for c, x in zip(nrm, w)) <= (r - 1) * hi
               for nrm, lo, hi in Z.facets):
            yield u


def phi(F, config, r, method="count"):
    """Exact ``Phi_r[F]``.

    ``method="count"`` assembles ``sum_u (sum_v C_r(u, v) f_v) t^u``;
    ``method="product"`` sifts ``F * prod_j (1 + t^{a_j} + ... + t^{(r-1) a_j})``.
    """
    if r < 1:
        raise InvalidInput("r must be positive")
    if F.nvars != config.d:
        raise InvalidInput("polynomial and matrix disagree on the number of variables")
    if method == "product":
        return sieve(F * geometric_factor(config, r), r)
    if method != "count":
        raise InvalidInput(f"unknown method {method!r}")
    out = {}
    for v, f in F.items():
        for u in _candidates(config, r, v):
            c = c_coeff(config, r, u, v)
            if c:
                out[u] = out.get(u, 0) + c * f
    return LaurentPoly(out, config.d)


# --- the asymptotic K-polynomial ------------------------------------------------

@dataclass(frozen=True)
class AsymptoticResult:
    k_poly: LaurentPoly
    m: int
    n_minus_d: int
    coefficient_sum: Fraction
    per_point: dict

    @property
    def closed_form_sum(self):
        """The closed form ``m^{n-d} (n-d)!`` proposed for the coefficient sum."""
        return self.m ** self.n_minus_d * factorial(self.n_minus_d)

    @property
    def lattice_sum(self):
        """``m (n-d)!``: the sum forced by the fibers tiling ``[0,1]^n``."""
        return self.m * factorial(self.n_minus_d)


def k_polynomial(config):
    """``K_A(t) = sum over interior lattice u of vol(P(u)) t^u``.

    Raises ``DegenerateMap`` (with the offending boundary point) when some
    boundary fiber is full-dimensional.
    """
    degenerate, witness = is_degenerate(config)
    if degenerate:
        raise DegenerateMap(f"boundary point {witness} has a fiber of dimension {config.codim}",
                            witness=witness)
    Z = zonotope_build(config)
    per_point = {u: fiber_polytope(config, u).normalized_volume for u in Z.interior_lattice_points}
    K = LaurentPoly(per_point, config.d)
    return AsymptoticResult(k_poly=K, m=config.m, n_minus_d=config.codim,
                            coefficient_sum=K.eval_at_one(), per_point=per_point)


# --- convergence diagnostics -------------------------------------------------------

def _leading(seq, start, step, k):
    """``k``-th forward difference with stride ``step`` at ``start``, divided by ``k! step^k``."""
    acc = LaurentPoly.zero(seq[start].nvars)
    for i in range(k + 1):
        sign = (-1) ** (k - i)
        binom = factorial(k) // (factorial(i) * factorial(k - i))
        acc = acc + seq[start + i * step] * (sign * binom)
    return acc / (factorial(k) * step ** k)


def extract_limit(seq, k, max_period=6):
    """Leading coefficient of an eventually quasi-polynomial sequence of polynomials.

    ``seq`` maps consecutive integers ``j`` to polynomials. For the smallest
    period ``p`` such that the stride-``p`` estimate agrees over the last
    ``p + 1`` start positions, returns ``(estimate, p)``; otherwise
    ``(None, None)``.
    """
    js = sorted(seq)
    if not js:
        return None, None
    last = js[-1]
    periods = [1] if k == 0 else range(1, max_period + 1)
    for p in periods:
        starts = [last - k * p - t for t in range(p + 1)]
        if min(starts) < js[0]:
            break
        ests = [_leading(seq, s, p, k) for s in starts]
        if all(e == ests[0] for e in ests):
            return ests[0], p
    return None, None


@dataclass
class ConvergenceReport:
    order: int
    stride: int
    r_values: list
    limit: LaurentPoly = None
    period: int = None
    expected: LaurentPoly = None
    limit_matches_expected: bool = None
    differences: dict = field(default_factory=dict)
    difference_norms: dict = field(default_factory=dict)
    residue_limits: dict = field(default_factory=dict)
    oscillates: bool = None
    residuals: dict = field(default_factory=dict)
    empirical_r0: int = None
    checked_up_to: int = None
    caveat: str = ""
    phis: dict = field(default_factory=dict)


def convergence_report(F, config, r_max, codim=0, expected=None, method="count",
                       off_stride=True, check_concavity=True, max_period=None):
    """Track ``Phi_r[F] / r^k`` with ``k = n - d - codim`` for ``r <= r_max``.

    The limit is extracted along ``r`` in ``m Z`` from exact finite
    differences. With ``codim = 0`` and a non-degenerate matrix the expected
    limit ``F(1)/(n-d)! K_A`` is compared against it. Other residue classes
    mod ``m`` are only reported. Quasi-periods up to ``max_period`` are
    tried; by default the lcm of the maximal minors, which every vertex
    denominator divides.
    """
    m = config.m
    if max_period is None:
        max_period = minors_lcm(config.entries)
    if r_max < m:
        raise InvalidInput("r_max must be at least the lattice index")
    k = config.codim - codim
    if k < 0:
        raise InvalidInput("codimension exceeds n - d")
    rs = list(range(1, r_max + 1)) if off_stride else list(range(m, r_max + 1, m))
    phis = {r: phi(F, config, r, method=method) for r in rs}
    rep = ConvergenceReport(order=k, stride=m, r_values=rs, phis=phis)

    stride_seq = {r // m: phis[r] for r in rs if r % m == 0}
    rep.limit, rep.period = _scaled_limit(stride_seq, k, m, max_period)

    if expected is None and codim == 0:
        try:
            expected = k_polynomial(config).k_poly * (F.eval_at_one() / factorial(config.codim))
        except DegenerateMap:
            expected = None
    rep.expected = expected
    if expected is not None:
        for r in rs:
            if r % m:
                continue
            diff = phis[r] / Fraction(r) ** k - expected
            rep.differences[r] = diff
            rep.difference_norms[r] = diff.max_abs_coefficient()
        if rep.limit is not None:
            rep.limit_matches_expected = rep.limit == expected

    if off_stride and m > 1:
        for rho in range(1, m):
            seq = {(r - rho) // m: phis[r] for r in rs if r % m == rho}
            rep.residue_limits[rho], _ = _scaled_limit(seq, k, m, max_period)
        rep.oscillates = any(lim != rep.limit for lim in rep.residue_limits.values())
    else:
        rep.oscillates = False

    if rep.limit is not None:
        G = rep.limit * factorial(k)
        rep.residuals = {r: phis[r] * factorial(k) - G for r in rs if r % m == 0}

    if check_concavity:
        stride_rs = [r for r in rs if r % m == 0]
        good = [_nice(phis[r]) for r in stride_rs]
        r0 = None
        for r, ok in zip(reversed(stride_rs), reversed(good)):
            if not ok:
                break
            r0 = r
        rep.empirical_r0 = r0
        rep.checked_up_to = stride_rs[-1] if stride_rs else None
        rep.caveat = (f"observed for r in {m}Z up to {rep.checked_up_to}; "
                      "unverified beyond that")
    return rep


def _scaled_limit(seq, k, m, max_period):
    """Limit of ``Phi_r / r^k`` from a sequence indexed by ``j`` with ``r = m j + const``."""
    if len(seq) < k + 2:
        return None, None
    lead, p = extract_limit(seq, k, max_period=max_period)
    if lead is None:
        return None, None
    return lead / Fraction(m) ** k, p


def _nice(P):
    if P.is_zero() or any(c < 0 for _, c in P.items()):
        return False
    return concavity.is_log_concave(P).holds and concavity.is_quasi_concave(P).holds


# --- codimension formula ------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticExpansion:
    """Lowest-order square-free part of ``F`` in the ``(1 - t^{a_j})`` basis.

    ``terms`` are ``(s, mu)`` with ``s`` a tuple of 1-based column indices.
    """

    codim: int
    terms: tuple
    higher_order: object = None

    def __post_init__(self):
        if self.codim < 1:
            raise InvalidInput("codim must be at least 1")
        for s, mu in self.terms:
            if len(s) != self.codim or len(set(s)) != len(s):
                raise InvalidInput(f"index set {s} must have {self.codim} distinct entries")
            if mu < 1:
                raise InvalidInput(f"multiplicity {mu} must be positive")

    def lowest_terms(self, config):
        """``sum_s mu_s prod_{i in s} (1 - t^{a_i})``."""
        out = LaurentPoly.zero(config.d)
        for s, mu in self.terms:
            term = LaurentPoly.constant(mu, config.d)
            for i in s:
                term = term * one_minus_monomial(config.columns[i - 1])
            out = out + term
        return out


def codim_asymptotic(config, expansion):
    """Limit of ``Phi_r[F] / r^{n - l - d}`` from the lowest terms of an expansion.

    ``1/(n-l-d)! * sum_s mu_s / m_s^{n-l-d} * K_{A_s}(t) * prod_i (1 - t^{a_{s_i}})``
    where ``A_s`` drops the columns in ``s``.
    """
    ell = expansion.codim
    k = config.n - ell - config.d
    if k < 0:
        raise InvalidInput("codimension exceeds n - d")
    total = LaurentPoly.zero(config.d)
    for s, mu in expansion.terms:
        if any(not 1 <= i <= config.n for i in s):
            raise InvalidInput(f"index set {s} out of range 1..{config.n}")
        try:
            sub = config.submatrix([i - 1 for i in s])
            K = k_polynomial(sub)
        except (RankDeficient, NotAcyclic, DegenerateMap) as exc:
            raise type(exc)(f"term s={tuple(s)}: {exc.detail}", witness=exc.witness) from exc
        term = K.k_poly * Fraction(mu, sub.m ** k)
        for i in s:
            term = term * one_minus_monomial(config.columns[i - 1])
        total = total + term
    return total / factorial(k)
