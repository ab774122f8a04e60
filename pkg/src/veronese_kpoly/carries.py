"""Generalized carries matrices ``C(r) = r^{d-n} [C_r(u, v)]`` over interior points.

Verification is exact throughout: column sums, the stationary vector from
the K-polynomial, characteristic-polynomial roots ``r^{-i}`` and nullspaces
compared across two values of ``r``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import qlinalg
from .errors import DegenerateMap, EmptyInterior, InvalidInput
from .polytope import is_degenerate, zonotope_build
from .veronese import c_coeff


@dataclass(frozen=True)
class CarriesMatrix:
    r: int
    index: tuple
    entries: tuple  # rows of Fractions, entry (u, v) at [index(u)][index(v)]

    def entry(self, u, v):
        return self.entries[self.index.index(tuple(u))][self.index.index(tuple(v))]

    def __matmul__(self, other):
        if self.index != other.index:
            raise InvalidInput("index orders differ")
        prod = qlinalg.matmul(self.entries, other.entries)
        return CarriesMatrix(self.r * other.r, self.index, tuple(tuple(row) for row in prod))


def build_carries(config, r, order=None, allow_off_stride=False):
    """Exact ``C(r)``, rows and columns in lexicographic order unless ``order`` is given."""
    if r < 1:
        raise InvalidInput("r must be positive")
    if r % config.m and not allow_off_stride:
        raise InvalidInput(f"r = {r} is not a multiple of the lattice index {config.m}")
    degenerate, witness = is_degenerate(config)
    if degenerate:
        raise DegenerateMap(f"boundary point {witness} has a full-dimensional fiber",
                            witness=witness)
    interior = sorted(zonotope_build(config).interior_lattice_points)
    if not interior:
        raise EmptyInterior("the zonotope has no interior lattice points")
    if order is None:
        index = tuple(interior)
    else:
        index = tuple(tuple(int(x) for x in u) for u in order)
        if sorted(index) != interior:
            raise InvalidInput("order must list every interior lattice point exactly once")
    scale = Fraction(1, r ** config.codim)
    rows = tuple(tuple(c_coeff(config, r, u, v) * scale for v in index) for u in index)
    return CarriesMatrix(r, index, rows)


@dataclass
class StochasticReport:
    column_sums_one: bool
    bad_columns: list
    stationary: bool
    stationary_vector: list
    roots: dict  # i -> charpoly(C)(r^{-i}) == 0
    nullities: dict  # i -> dim ker(C - r^{-i} I)
    eigenvectors: dict = field(default_factory=dict)  # i -> basis at C.r
    eigenvectors_stable: dict = field(default_factory=dict)  # i -> same span at other.r

    @property
    def ok(self):
        return (self.column_sums_one and self.stationary and all(self.roots.values())
                and all(self.eigenvectors_stable.values()))


def _eigenspace(C, lam):
    n = len(C.entries)
    M = [[C.entries[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return [qlinalg.primitive(v) for v in qlinalg.nullspace(M, n)]


def verify_stochastic(C, K, other=None):
    """Check the carries properties of ``C`` against ``K = k_polynomial(config)``.

    ``other`` is a second matrix of the same configuration at a different
    ``r``; when given, eigenspaces for matching exponents ``i`` are compared.
    """
    bad = [v for j, v in enumerate(C.index) if sum(row[j] for row in C.entries) != 1]
    k = [Fraction(K.per_point.get(u, 0)) / factorial(K.n_minus_d) for u in C.index]
    Ck = qlinalg.matvec(C.entries, k)
    report = StochasticReport(column_sums_one=not bad, bad_columns=bad,
                              stationary=Ck == k, stationary_vector=k, roots={}, nullities={})
    for i in range(K.n_minus_d):
        lam = Fraction(1, C.r ** i)
        report.roots[i] = qlinalg.charpoly_at(C.entries, lam) == 0
        space = _eigenspace(C, lam)
        report.nullities[i] = len(space)
        report.eigenvectors[i] = space
        if other is not None:
            alt = _eigenspace(other, Fraction(1, other.r ** i))
            report.eigenvectors_stable[i] = bool(space) and qlinalg.same_row_space(space, alt)
    return report


def semigroup_check(config, r1, r2, order=None, allow_off_stride=False):
    """Compare ``C(r1) C(r2)`` with ``C(r1 r2)``; returns ``(equal, discrepancy)``.

    ``discrepancy`` maps ``(u, v)`` to the nonzero entries of the difference.
    """
    A = build_carries(config, r1, order, allow_off_stride)
    B = build_carries(config, r2, order, allow_off_stride)
    P = A @ B
    D = build_carries(config, r1 * r2, order, allow_off_stride)
    diff = {}
    for i, u in enumerate(P.index):
        for j, v in enumerate(P.index):
            delta = P.entries[i][j] - D.entries[i][j]
            if delta:
                diff[(u, v)] = delta
    return not diff, diff
