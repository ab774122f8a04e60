"""Exact convex hulls of integer point sets.

An incremental beneath-beyond construction with integer normals. The
boundary comes out as a simplicial complex, which is all the volume and
membership routines need. Points that are coplanar with an existing facet
are treated as beneath it, so redundant inequalities may repeat; callers
dedupe where it matters.
"""

from math import gcd
from itertools import product

from . import qlinalg
from .errors import LIMITS, SizeLimit
from .intlat import integer_kernel


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _normal(points):
    """Integer normal of the hyperplane through ``k`` points of ``Z^k``."""
    p0 = points[0]
    diffs = [_sub(p, p0) for p in points[1:]]
    k = len(p0)
    normal = []
    for i in range(k):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        normal.append((-1) ** i * qlinalg.det_int(minor))
    g = 0
    for x in normal:
        g = gcd(g, x)
    return tuple(x // g for x in normal) if g else tuple(normal)


def _initial_simplex(pts):
    k = len(pts[0])
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    chosen = [order[0]]
    diffs = []
    for i in order[1:]:
        cand = diffs + [_sub(pts[i], pts[chosen[0]])]
        if qlinalg.rank(cand) == len(cand):
            chosen.append(i)
            diffs = cand
            if len(chosen) == k + 1:
                break
    return chosen


def affine_dimension(points):
    pts = [tuple(p) for p in points]
    if not pts:
        return -1
    diffs = [_sub(p, pts[0]) for p in pts[1:]]
    return qlinalg.rank(diffs) if diffs else 0


def convex_hull(points):
    """Facets of the hull of full-dimensional integer points in ``Z^k``, ``k >= 1``.

    Returns a list of ``(vertex_indices, normal, offset)`` with
    ``normal . x <= offset`` on the hull. Facets are simplices.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    k = len(pts[0])
    simplex = _initial_simplex(pts)
    if len(simplex) != k + 1:
        raise ValueError("points are not full-dimensional")
    center = tuple(sum(pts[i][c] for i in simplex) for c in range(k))  # (k+1) * centroid

    def make(verts):
        nrm = _normal([pts[i] for i in verts])
        off = _dot(nrm, pts[verts[0]])
        if _dot(nrm, center) > (k + 1) * off:
            nrm = tuple(-x for x in nrm)
            off = -off
        return (tuple(sorted(verts)), nrm, off)

    facets = [make([v for v in simplex if v != omit]) for omit in simplex]
    in_simplex = set(simplex)
    for i in sorted(range(len(pts)), key=lambda i: pts[i]):
        if i in in_simplex:
            continue
        p = pts[i]
        visible = [f for f in facets if _dot(f[1], p) > f[2]]
        if not visible:
            continue
        ridges = {}
        for verts, _, _ in visible:
            for j in range(len(verts)):
                r = verts[:j] + verts[j + 1:]
                ridges[r] = ridges.get(r, 0) + 1
        vis = set(id(f) for f in visible)
        facets = [f for f in facets if id(f) not in vis]
        for r, cnt in ridges.items():
            if cnt == 1:
                facets.append(make(list(r) + [i]))
    return facets


def normalized_volume(points):
    """``k!`` times the Euclidean volume of the hull of integer points in ``Z^k``.

    Zero when the points are not full-dimensional.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        return 0
    k = len(pts[0])
    if k == 0:
        return 1
    if affine_dimension(pts) < k:
        return 0
    apex = min(pts)
    total = 0
    for verts, _, _ in convex_hull(pts):
        total += abs(qlinalg.det_int([_sub(pts[v], apex) for v in verts]))
    return total


def saturated_affine_lattice(points):
    """Origin and basis of ``aff(points) ∩ Z^d`` (as integer row vectors)."""
    pts = [tuple(int(x) for x in p) for p in points]
    origin = pts[0]
    d = len(origin)
    diffs = [list(_sub(p, origin)) for p in pts[1:] if p != origin]
    if not diffs:
        return origin, []
    normals = integer_kernel(diffs)
    if not normals:
        basis = [[int(i == j) for j in range(d)] for i in range(d)]
    else:
        basis = integer_kernel(normals)
    return origin, basis


def _coords(basis, v):
    """Coordinates of ``v`` in the lattice basis (rows)."""
    cols = [list(col) for col in zip(*basis)]
    aug = [row + [x] for row, x in zip(cols, v)]
    R, pivots = qlinalg.rref(aug)
    j = len(basis)
    if j in pivots:
        raise ValueError("vector outside the span")
    out = [R[i][j] for i in range(j)]
    assert all(x.denominator == 1 for x in out)
    return tuple(int(x) for x in out)


class HullRegion:
    """Membership oracle and lattice points for the hull of integer points."""

    def __init__(self, points):
        self.points = sorted(set(tuple(int(x) for x in p) for p in points))
        self.origin, self.basis = saturated_affine_lattice(self.points)
        self.dim = len(self.basis)
        self.coords = [_coords(self.basis, _sub(p, self.origin)) if self.dim else () for p in self.points]
        if self.dim:
            facets = convex_hull(self.coords)
            self.inequalities = sorted(set((nrm, off) for _, nrm, off in facets))
        else:
            self.inequalities = []

    def _lift(self, c):
        return tuple(o + sum(ci * b[t] for ci, b in zip(c, self.basis))
                     for t, o in enumerate(self.origin))

    def contains(self, point):
        point = tuple(point)
        if self.dim == 0:
            return point == self.origin
        try:
            c = _coords(self.basis, _sub(point, self.origin))
        except (ValueError, AssertionError):
            return False
        return all(_dot(nrm, c) <= off for nrm, off in self.inequalities)

    def lattice_points(self, cap=None):
        cap = cap or LIMITS.box
        if self.dim == 0:
            return [self.origin]
        lo = [min(c[t] for c in self.coords) for t in range(self.dim)]
        hi = [max(c[t] for c in self.coords) for t in range(self.dim)]
        size = 1
        for a, b in zip(lo, hi):
            size *= b - a + 1
        if size > cap:
            raise SizeLimit(f"hull bounding box has {size} points")
        out = []
        for c in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if all(_dot(nrm, c) <= off for nrm, off in self.inequalities):
                out.append(self._lift(c))
        return sorted(out)
