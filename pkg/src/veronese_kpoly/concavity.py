"""Exact log-concavity and quasi-concavity tests for coefficient functions.

The coefficient function ``g`` of a Laurent polynomial is extended by zero
and tested on the lattice points of the convex hull of its support. All
comparisons are done on integers (coefficients are cleared of denominators
first), so no logarithms or floats are involved.
"""

from dataclasses import dataclass
from math import gcd

from .hull import HullRegion


@dataclass(frozen=True)
class Violation:
    """A failed inequality ``lhs >= rhs``.

    kind: ``"log-segment"`` (``g(w)^q >= g(u)^{q-a} g(v)^a`` after clearing
    denominators), ``"positivity"`` (``g(w) > 0`` fails at a hull lattice
    point), ``"quasi-segment"`` (``g(w) >= min(g(u), g(v))``) or
    ``"superlevel"`` (``w`` lies in the hull of ``{g >= rhs}`` but ``g(w) < rhs``).
    """

    kind: str
    w: tuple
    lhs: object
    rhs: object
    u: tuple = None
    v: tuple = None
    q: int = None
    a: int = None

    def recheck(self, F):
        """Recompute the inequality from ``F``; True when it is indeed violated."""
        g = F.__getitem__
        if self.kind == "log-segment":
            L = _denominator_lcm(F)
            G = lambda x: int(g(x) * L)
            lhs = G(self.w) ** self.q
            rhs = G(self.u) ** (self.q - self.a) * G(self.v) ** self.a
            return lhs < rhs and (lhs, rhs) == (self.lhs, self.rhs)
        if self.kind == "positivity":
            return g(self.w) <= 0
        if self.kind == "quasi-segment":
            return g(self.w) < min(g(self.u), g(self.v))
        if self.kind == "superlevel":
            members = [p for p in HullRegion(F.support() + [self.w]).lattice_points()
                       if g(p) >= self.rhs]
            return g(self.w) < self.rhs and HullRegion(members).contains(self.w)
        raise ValueError(self.kind)


@dataclass(frozen=True)
class ConcavityVerdict:
    holds: bool
    witness: Violation = None


def _denominator_lcm(F):
    L = 1
    for _, c in F.items():
        L = L * c.denominator // gcd(L, c.denominator)
    return L


def _segment_points(u, v):
    """Lattice points strictly inside ``[u, v]`` as ``(w, a, q)`` with ``w = u + (a/q)(v - u)``."""
    delta = [b - a for a, b in zip(u, v)]
    g = 0
    for x in delta:
        g = gcd(g, x)
    for i in range(1, g):
        h = gcd(i, g)
        yield tuple(a + i * x // g for a, x in zip(u, delta)), i // h, g // h


def _pairs(points):
    pts = sorted(points)
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            yield u, v


def is_log_concave(F):
    """Discrete log-concavity on the lattice points of the hull of the support."""
    support = F.support()
    if not support:
        return ConcavityVerdict(True)
    L = _denominator_lcm(F)
    G = {e: int(c * L) for e, c in F.items()}
    for e, c in G.items():
        if c < 0:
            return ConcavityVerdict(False, Violation("positivity", e, F[e], 0))
    for u, v in _pairs(support):
        for w, a, q in _segment_points(u, v):
            lhs = G.get(w, 0) ** q
            rhs = G[u] ** (q - a) * G[v] ** a
            if lhs < rhs:
                return ConcavityVerdict(False, Violation("log-segment", w, lhs, rhs, u, v, q, a))
    for w in HullRegion(support).lattice_points():
        if G.get(w, 0) <= 0:
            return ConcavityVerdict(False, Violation("positivity", w, F[w], 0))
    return ConcavityVerdict(True)


def is_quasi_concave(F):
    """Every superlevel set, restricted to hull lattice points, is lattice-convex."""
    support = F.support()
    if not support:
        return ConcavityVerdict(True)
    g = F.__getitem__
    for u, v in _pairs(support):
        low = min(g(u), g(v))
        for w, _, _ in _segment_points(u, v):
            if g(w) < low:
                return ConcavityVerdict(False, Violation("quasi-segment", w, g(w), low, u, v))
    domain = HullRegion(support).lattice_points()
    values = {p: g(p) for p in domain}
    for e in sorted(set(values.values()), reverse=True):
        members = [p for p, val in values.items() if val >= e]
        region = HullRegion(members)
        for w, val in values.items():
            if val < e and region.contains(w):
                return ConcavityVerdict(False, Violation("superlevel", w, val, e))
    return ConcavityVerdict(True)
