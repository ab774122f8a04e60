"""Exact polyhedral geometry of a grading matrix.

The zonotope ``Z = A [0,1]^n``, the fibers ``P(u) = {x in [0,1]^n : A x = u}``
with volumes normalized to the kernel lattice, the slab regions of the
block decomposition, degeneracy detection and the vector partition function.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd

import numpy as np

from . import hull, qlinalg
from .errors import LIMITS, SizeLimit
from .intlat import gale_blocks, invariant_factors


def _lcm(a, b):
    return a * b // gcd(a, b)


def _integerize(points):
    """Scale rational points to integers; returns ``(int_points, scale)``."""
    L = 1
    for p in points:
        for x in p:
            L = _lcm(L, Fraction(x).denominator)
    return [tuple(int(Fraction(x) * L) for x in p) for p in points], L


def _cube(k):
    """All 0/1 vectors of length ``k`` as rows."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(product((0, 1), repeat=k)), dtype=np.int64)


# --- fibers -----------------------------------------------------------------

@dataclass(frozen=True)
class FiberPolytope:
    u: tuple
    vertices: tuple
    dim: int
    normalized_volume: Fraction


@lru_cache(maxsize=64)
def _fiber_bases(config):
    """For each complementary d-subset S with nonzero minor: (T, S, adj, det, A_T)."""
    A = config.entries
    d, n = config.d, config.n
    out = []
    for S in combinations(range(n), d):
        AS = [[row[j] for j in S] for row in A]
        det = qlinalg.det_int(AS)
        if det == 0:
            continue
        T = [j for j in range(n) if j not in S]
        AT = np.array([[row[j] for j in T] for row in A], dtype=np.int64).reshape(d, len(T))
        out.append((tuple(T), S, np.array(qlinalg.adjugate_int(AS), dtype=np.int64), det, AT))
    return out


def fiber_vertices(config, u):
    """Vertices of ``P(u)``: fix ``n - d`` coordinates at 0/1, solve for the rest."""
    d, n = config.d, config.n
    k = n - d
    Z = _cube(k)
    uu = np.asarray(u, dtype=np.int64)
    found = set()
    for T, S, adj, det, AT in _fiber_bases(config):
        R = uu[None, :] - Z @ AT.T
        Y = R @ adj.T  # det * x_S
        if det > 0:
            ok = np.all((Y >= 0) & (Y <= det), axis=1)
        else:
            ok = np.all((Y <= 0) & (Y >= det), axis=1)
        for idx in np.nonzero(ok)[0]:
            x = [Fraction(0)] * n
            for j, z in zip(T, Z[idx]):
                x[j] = Fraction(int(z))
            for j, y in zip(S, Y[idx]):
                x[j] = Fraction(int(y), det)
            found.add(tuple(x))
    return tuple(sorted(found))


@lru_cache(maxsize=64)
def _kernel_chart(config):
    """Rows ``R`` and inverse of ``K_R^t`` mapping fiber differences to kernel coordinates."""
    K = config.kernel_basis
    k = len(K)
    for R in combinations(range(config.n), k):
        M = [[K[i][r] for i in range(k)] for r in R]  # K_R^t
        if qlinalg.det_int(M) != 0:
            return R, qlinalg.inverse(M)
    raise AssertionError("kernel basis has no invertible chart")


def kernel_coordinates(config, points):
    """Coordinates of ``x - x0`` in the kernel lattice basis (``x0`` = first point)."""
    if config.codim == 0:
        return [() for _ in points]
    R, inv = _kernel_chart(config)
    x0 = points[0]
    return [tuple(qlinalg.matvec(inv, [p[r] - x0[r] for r in R])) for p in points]


def normalized_volume(P, config):
    """``(n-d)!`` times the Euclidean volume of ``P`` w.r.t. the kernel lattice."""
    k = config.codim
    if P.dim < k or P.dim < 0:
        return Fraction(0)
    if k == 0:
        return Fraction(1)
    coords = kernel_coordinates(config, list(P.vertices))
    ints, L = _integerize(coords)
    return Fraction(hull.normalized_volume(ints), L ** k)


def fiber_polytope(config, u):
    u = tuple(int(x) for x in u)
    verts = fiber_vertices(config, u)
    dim = hull.affine_dimension(_integerize(verts)[0]) if verts else -1
    P = FiberPolytope(u=u, vertices=verts, dim=dim, normalized_volume=Fraction(0))
    return FiberPolytope(u=u, vertices=verts, dim=dim, normalized_volume=normalized_volume(P, config))


def fiber_dimension(config, u):
    verts = fiber_vertices(config, u)
    return hull.affine_dimension(_integerize(verts)[0]) if verts else -1


# --- zonotope -------------------------------------------------------------

@dataclass(frozen=True)
class Zonotope:
    generators: tuple
    vertices: tuple
    facets: tuple  # (normal, lower, upper): lower <= normal . u <= upper
    lattice_points: tuple
    interior_lattice_points: tuple

    def contains(self, u):
        return all(lo <= sum(c * x for c, x in zip(nrm, u)) <= hi for nrm, lo, hi in self.facets)

    def is_interior(self, u):
        return all(lo < sum(c * x for c, x in zip(nrm, u)) < hi for nrm, lo, hi in self.facets)

    @property
    def boundary_lattice_points(self):
        inner = set(self.interior_lattice_points)
        return tuple(u for u in self.lattice_points if u not in inner)


def zonotope_facets(columns, d):
    """Facet normals from (d-1)-subsets of generators spanning a hyperplane."""
    normals = set()
    if d == 1:
        normals.add((1,))
    else:
        for sub in combinations(columns, d - 1):
            if qlinalg.rank(list(sub)) < d - 1:
                continue
            c = hull._normal([tuple([0] * d)] + [tuple(v) for v in sub])  # orthogonal to sub
            lead = next(x for x in c if x)
            if lead < 0:
                c = tuple(-x for x in c)
            normals.add(c)
    out = []
    for c in sorted(normals):
        vals = [sum(a * b for a, b in zip(c, v)) for v in columns]
        out.append((c, sum(min(0, x) for x in vals), sum(max(0, x) for x in vals)))
    return tuple(out)


@lru_cache(maxsize=64)
def zonotope_build(config, cap=None):
    cols = config.columns
    d, n = config.d, config.n
    facets = zonotope_facets(cols, d)
    if n > 22:
        raise SizeLimit("too many generators for vertex enumeration")
    images = set()
    for z in product((0, 1), repeat=n):
        images.add(tuple(sum(zj * a[i] for zj, a in zip(z, cols)) for i in range(d)))
    vertices = []
    for p in sorted(images):
        tight = [nrm for nrm, lo, hi in facets
                 if sum(c * x for c, x in zip(nrm, p)) in (lo, hi)]
        if tight and qlinalg.rank(tight) == d:
            vertices.append(p)
    lo = [sum(min(0, a[i]) for a in cols) for i in range(d)]
    hi = [sum(max(0, a[i]) for a in cols) for i in range(d)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    cap = cap or LIMITS.box
    if size > cap:
        raise SizeLimit(f"lattice bounding box has {size} points (cap {cap})")
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    G = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    N = np.array([f[0] for f in facets], dtype=np.int64)
    L = np.array([f[1] for f in facets], dtype=np.int64)
    U = np.array([f[2] for f in facets], dtype=np.int64)
    vals = G @ N.T
    inside = np.all((vals >= L) & (vals <= U), axis=1)
    strict = np.all((vals > L) & (vals < U), axis=1)
    lattice = tuple(sorted(tuple(int(x) for x in row) for row in G[inside]))
    interior = tuple(sorted(tuple(int(x) for x in row) for row in G[strict]))
    return Zonotope(generators=cols, vertices=tuple(vertices), facets=facets,
                    lattice_points=lattice, interior_lattice_points=interior)


def is_degenerate(config):
    """``(True, u)`` for the first boundary lattice point with a full-dimensional fiber."""
    Z = zonotope_build(config)
    k = config.codim
    for u in Z.boundary_lattice_points:
        if fiber_dimension(config, u) == k:
            return True, u
    return False, None


# --- slab regions -----------------------------------------------------------

@dataclass(frozen=True)
class RegionPolytope:
    """Region in ``[0, m]^{n-d}`` for a lattice point given in row-changed coordinates.

    ``inequalities`` are ``(normal, offset)`` pairs meaning ``normal . p <= offset``.
    """

    u: tuple
    inequalities: tuple
    vertices: tuple
    normalized_volume: Fraction
    standard_volume: Fraction = field(default=Fraction(0))


@lru_cache(maxsize=64)
def _region_rows(blocks):
    d = len(blocks.H)
    k = len(blocks.L)
    beta = [list(blocks.B[i]) for i in range(d)]  # scale * H^{-1} B'
    G = [[int(i == j) for j in range(k)] for i in range(k)] + beta
    systems = []
    for rows in combinations(range(k + d), k):
        GS = [G[i] for i in rows]
        det = qlinalg.det_int(GS)
        if det:
            systems.append((rows, np.array(qlinalg.adjugate_int(GS), dtype=np.int64), det))
    return np.array(G, dtype=np.int64).reshape(k + d, k), systems


@lru_cache(maxsize=64)
def region_lattice_index(blocks):
    """Index in ``Z^{n-d}`` of the lattice of ``q`` with ``H^{-1} B' q`` integral."""
    d = len(blocks.H)
    D = blocks.scale
    beta = [list(blocks.B[i]) for i in range(d)]
    gens = [row + [D * int(i == j) for j in range(d)] for i, row in enumerate(beta)]
    covol = 1
    for f in invariant_factors(gens):
        covol *= f
    return D ** d // covol


def region_polytope(blocks, config, u):
    """The slab region for ``u`` (row-changed coordinates ``u = V u_original``).

    With ``p = m q`` the region is ``0 <= p <= m`` and
    ``m (w_i - D) <= beta_i . p <= m w_i`` where ``D = |det H|``,
    ``beta = D H^{-1} B'`` and ``w = D H^{-1} u``. For ``m = D = 1`` this is
    the familiar ``m (u_i - 1) <= b_i . p <= m u_i``.
    """
    m = config.m
    k = config.codim
    d = config.d
    D = blocks.scale
    u = tuple(int(x) for x in u)
    w = [sum(a * x for a, x in zip(blocks.J[i], u)) for i in range(d)]
    lo = [0] * k + [m * (wi - D) for wi in w]
    hi = [m] * k + [m * wi for wi in w]
    G, systems = _region_rows(blocks)
    ineq = []
    for row, a, b in zip(G.tolist(), lo, hi):
        ineq.append((tuple(row), b))
        ineq.append((tuple(-x for x in row), -a))
    verts = set()
    if k == 0:
        if all(a <= 0 <= b for a, b in zip(lo, hi)):
            verts.add(())
    else:
        loA = np.array(lo, dtype=np.int64)
        hiA = np.array(hi, dtype=np.int64)
        choice = _cube(k)
        for rows, adj, det in systems:
            rhs = np.where(choice == 0, loA[list(rows)][None, :], hiA[list(rows)][None, :])
            P = rhs @ adj.T  # det * p
            vals = P @ G.T  # det * G p
            if det > 0:
                ok = np.all((vals >= det * loA) & (vals <= det * hiA), axis=1)
            else:
                ok = np.all((vals <= det * loA) & (vals >= det * hiA), axis=1)
            for idx in np.nonzero(ok)[0]:
                verts.add(tuple(Fraction(int(x), det) for x in P[idx]))
    verts = tuple(sorted(verts))
    if k == 0:
        std = Fraction(len(verts))
    elif verts:
        ints, L = _integerize(verts)
        std = Fraction(hull.normalized_volume(ints), L ** k)
    else:
        std = Fraction(0)
    vol = std / (m ** k * region_lattice_index(blocks))
    return RegionPolytope(u=u, inequalities=tuple(ineq), vertices=verts,
                          normalized_volume=vol, standard_volume=std)


def region_volume(blocks, config, u):
    """Normalized volume of the region for ``u`` (row-changed coordinates).

    Measured against the image of the kernel lattice, so that it is directly
    comparable with the fiber volume; ``RegionPolytope.standard_volume``
    holds the value w.r.t. ``Z^{n-d}``.
    """
    return region_polytope(blocks, config, u).normalized_volume


def region_volumes(config, blocks=None):
    """Region volume for every lattice point of ``Z`` (keys in original coordinates)."""
    blocks = blocks or gale_blocks(config)
    V = blocks.row_change
    out = {}
    for u in zonotope_build(config).lattice_points:
        uu = tuple(sum(a * x for a, x in zip(row, u)) for row in V)
        out[u] = region_volume(blocks, config, uu)
    return out


# --- vector partition function -----------------------------------------------

def partition_count(config, u):
    """Number of ``x in N^n`` with ``A x = u``."""
    u = tuple(int(x) for x in u)
    weights = [config.weight(a) for a in config.columns]
    return config.solver.count_nonnegative(u, weights, config.weight(u))
