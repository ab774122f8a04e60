"""Exact integer linear algebra for a grading matrix.

Normal forms (row Hermite, Smith), kernel lattices, the lattice index of the
column lattice, an acyclicity certificate found by Fourier-Motzkin
elimination, and the block decomposition ``V A P = [H | B']`` used to
re-express fibers as slabs in a cube.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import ceil, comb, floor, gcd

import numpy as np

from . import qlinalg
from .errors import LIMITS, InvalidInput, NotAcyclic, RankDeficient, SizeLimit


def _copy(M):
    return [list(map(int, row)) for row in M]


def _check_int_matrix(A):
    if not A or not A[0]:
        raise InvalidInput("matrix must have at least one row and one column")
    n = len(A[0])
    rows = []
    for row in A:
        if len(row) != n:
            raise InvalidInput("ragged matrix")
        for x in row:
            if isinstance(x, bool) or int(x) != x:
                raise InvalidInput(f"non-integer entry {x!r}")
        rows.append(tuple(int(x) for x in row))
    return tuple(rows)


# --- normal forms -----------------------------------------------------------

def row_hnf(M):
    """Row-style Hermite normal form.

    Returns ``(H, U, pivots)`` with ``U`` unimodular, ``H = U M`` in row
    echelon form, positive pivots, and entries above each pivot reduced into
    ``[0, pivot)``.
    """
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = qlinalg.identity(m)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return A, U, pivots


def smith_normal_form(M):
    """Smith normal form with transforms: ``U M V = S``.

    ``S`` is diagonal with nonnegative entries, each dividing the next.
    Computed by repeated gcd pivoting; fine for desk-sized matrices.
    """
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = qlinalg.identity(m)
    V = qlinalg.identity(n)

    def swap_cols(B, i, j):
        for row in B:
            row[i], row[j] = row[j], row[i]

    def add_col(B, src, dst, q):  # col dst -= q * col src
        for row in B:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            cands = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not cands:
                return A, U, V
            _, pi, pj = min(cands)
            A[t], A[pi] = A[pi], A[t]
            U[t], U[pi] = U[pi], U[t]
            swap_cols(A, t, pj)
            swap_cols(V, t, pj)
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    add_col(A, t, j, q)
                    add_col(V, t, j, q)
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m)
                        for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def invariant_factors(M):
    S, _, _ = smith_normal_form(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def integer_kernel(M):
    """A basis of ``ker(M) ∩ Z^n``, canonicalised by row HNF."""
    n = len(M[0])
    Mt = [list(col) for col in zip(*M)]
    H, U, pivots = row_hnf(Mt)
    basis = [U[i] for i in range(len(pivots), n)]
    if not basis:
        return []
    K, _, _ = row_hnf(basis)
    return [row for row in K if any(row)]


def maximal_minors_gcd(A):
    d = len(A)
    g = 0
    for cols in combinations(range(len(A[0])), d):
        g = gcd(g, qlinalg.det_int([[row[c] for c in cols] for row in A]))
    return g


def is_totally_unimodular(A, cap=10**6):
    """Exhaustive check that every square minor lies in {-1, 0, 1}."""
    A = _check_int_matrix(A)
    d, n = len(A), len(A[0])
    total = sum(comb(d, k) * comb(n, k) for k in range(1, min(d, n) + 1))
    if total > cap:
        raise SizeLimit(f"{total} minors exceed cap {cap}")
    for k in range(1, min(d, n) + 1):
        for rows in combinations(range(d), k):
            for cols in combinations(range(n), k):
                if abs(qlinalg.det_int([[A[i][j] for j in cols] for i in rows])) > 1:
                    return False
    return True


# --- acyclicity ---------------------------------------------------------------

def _normalize(coef, rhs, mult):
    lead = next((c for c in coef if c != 0), None)
    if lead is None:
        lead = rhs if rhs != 0 else None
    if lead is None:
        return coef, rhs, mult
    s = 1 / abs(lead)
    return (tuple(c * s for c in coef), rhs * s, tuple(x * s for x in mult))


def positive_functional(A):
    """Find rational ``y`` with ``y . a_j >= 1`` for every column, or a witness.

    Fourier-Motzkin elimination over the system ``a_j . y >= 1``. Every
    derived inequality carries the nonnegative combination of original rows
    that produced it, so an infeasible ``0 >= b > 0`` row yields a nonzero
    nonnegative kernel vector. Returns ``(y, None)`` or ``(None, witness)``.
    """
    d, n = len(A), len(A[0])
    cols = [tuple(Fraction(A[i][j]) for i in range(d)) for j in range(n)]
    system = [_normalize(cols[j], Fraction(1), tuple(Fraction(int(i == j)) for i in range(n)))
              for j in range(n)]
    stages = []
    for k in range(d):
        stages.append(system)
        pos = [c for c in system if c[0][k] > 0]
        neg = [c for c in system if c[0][k] < 0]
        new = {(c[0], c[1]): c for c in system if c[0][k] == 0}
        for p in pos:
            for q in neg:
                lp, lq = -q[0][k], p[0][k]
                coef = tuple(lp * a + lq * b for a, b in zip(p[0], q[0]))
                cand = _normalize(coef, lp * p[1] + lq * q[1],
                                  tuple(lp * a + lq * b for a, b in zip(p[2], q[2])))
                new.setdefault((cand[0], cand[1]), cand)
        system = list(new.values())
    for coef, rhs, mult in system:
        if rhs > 0:
            w = qlinalg.primitive(mult)
            return None, tuple(w)
    y = [Fraction(0)] * d
    for k in reversed(range(d)):
        lo, hi = None, None
        for coef, rhs, _ in stages[k]:
            if coef[k] == 0:
                continue
            bound = (rhs - sum(coef[i] * y[i] for i in range(k + 1, d))) / coef[k]
            if coef[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = Fraction(min(0, floor(hi)))
        elif hi is None:
            val = Fraction(max(0, ceil(lo)))
        else:
            ints = range(ceil(lo), floor(hi) + 1)
            val = Fraction(min(ints, key=abs)) if len(ints) else lo
        y[k] = val
    return tuple(y), None


# --- configuration --------------------------------------------------------------

@dataclass(frozen=True)
class MatrixConfig:
    """A validated grading matrix with its exact derived data."""

    entries: tuple
    rank: int
    lattice_index: int
    kernel_basis: tuple
    positive_functional: tuple

    @property
    def d(self):
        return len(self.entries)

    @property
    def n(self):
        return len(self.entries[0])

    @property
    def m(self):
        return self.lattice_index

    @property
    def codim(self):
        return self.n - self.d

    @cached_property
    def columns(self):
        return tuple(tuple(row[j] for row in self.entries) for j in range(self.n))

    @cached_property
    def solver(self):
        return BasisSolver(self.entries)

    def weight(self, u):
        """Value of the positive functional at ``u``."""
        return sum(y * x for y, x in zip(self.positive_functional, u))

    def submatrix(self, drop):
        """Config for the columns not in ``drop`` (0-based indices)."""
        keep = [j for j in range(self.n) if j not in set(drop)]
        return build_config([[row[j] for j in keep] for row in self.entries])


def build_config(A):
    """Validate ``A`` and compute rank, lattice index, kernel lattice and certificate."""
    A = _check_int_matrix(A)
    d, n = len(A), len(A[0])
    rk = qlinalg.rank(A)
    if rk < d:
        raise RankDeficient(f"rank {rk} < {d} rows")
    y, witness = positive_functional(A)
    if witness is not None:
        raise NotAcyclic("nonzero nonnegative kernel vector exists", witness=witness)
    m = maximal_minors_gcd(A)
    kernel = integer_kernel(A)
    return MatrixConfig(entries=A, rank=rk, lattice_index=m,
                        kernel_basis=tuple(tuple(v) for v in kernel),
                        positive_functional=y)


def smith_index(A):
    """Product of the Smith invariant factors (the lattice index for full rank)."""
    out = 1
    for f in invariant_factors(A):
        out *= f
    return out


def in_column_lattice(config, u):
    """Whether ``u`` is an integer combination of the columns."""
    S, U, _ = smith_normal_form(config.entries)
    w = qlinalg.matvec(U, list(u))
    return all(w[i] % S[i][i] == 0 for i in range(config.d))


def minors_lcm(A):
    """Least common multiple of the nonzero maximal minors (bounds vertex denominators)."""
    d = len(A)
    out = 1
    for cols in combinations(range(len(A[0])), d):
        det = abs(qlinalg.det_int([[row[c] for c in cols] for row in A]))
        if det:
            out = out * det // gcd(out, det)
    return out


def kernel_is_saturated(config):
    """The kernel basis spans all of ``ker(A) ∩ Z^n`` iff its invariant factors are 1."""
    if not config.kernel_basis:
        return True
    K = [list(col) for col in zip(*config.kernel_basis)]
    return all(f == 1 for f in invariant_factors(K))


# --- block decomposition ------------------------------------------------------

@dataclass(frozen=True)
class GaleBlocks:
    """``V A P = [H | B']`` together with the derived integer blocks.

    ``scale`` is ``|det H|``; it equals the lattice index whenever some
    column subset has a maximal minor of that size, which the selection
    rule prefers. ``B``, ``J`` and ``L`` use ``scale`` in place of ``m``.
    """

    row_change: tuple
    column_permutation: tuple
    H: tuple
    Bprime: tuple
    B: tuple
    J: tuple
    L: tuple
    scale: int


def _lower_hnf(M):
    """Row operations making a square nonsingular ``M`` lower triangular.

    Positive diagonal, entries left of the diagonal reduced into ``[0, h_jj)``.
    Returns ``(H, V)`` with ``H = V M``.
    """
    A = _copy(M)
    d = len(A)
    V = qlinalg.identity(d)
    for c in reversed(range(d)):
        while True:
            nz = [i for i in range(c + 1) if A[i][c] != 0]
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[c], A[p] = A[p], A[c]
            V[c], V[p] = V[p], V[c]
            clean = True
            for i in range(c):
                if A[i][c]:
                    q = A[i][c] // A[c][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[c])]
                    V[i] = [a - q * b for a, b in zip(V[i], V[c])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[c][c] < 0:
            A[c] = [-a for a in A[c]]
            V[c] = [-a for a in V[c]]
    for i in range(d):
        for j in reversed(range(i)):
            q = A[i][j] // A[j][j]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[j])]
                V[i] = [a - q * b for a, b in zip(V[i], V[j])]
    return A, V


def select_basis_columns(A, target=None):
    """Leftmost column subset whose maximal minor has absolute value ``target``.

    Falls back to the leftmost subset with the smallest nonzero minor.
    """
    d, n = len(A), len(A[0])
    best = None
    for cols in combinations(range(n), d):
        det = abs(qlinalg.det_int([[row[c] for c in cols] for row in A]))
        if det == 0:
            continue
        if target is not None and det == target:
            return cols
        if best is None or det < best[0]:
            best = (det, cols)
    return best[1]


def gale_blocks(config):
    A = config.entries
    d, n, m = config.d, config.n, config.m
    basis = select_basis_columns(A, target=m)
    perm = tuple(basis) + tuple(j for j in range(n) if j not in basis)
    AP = [[row[j] for j in perm] for row in A]
    H, V = _lower_hnf([row[:d] for row in AP])
    VAP = qlinalg.matmul(V, AP)
    Bp = [row[d:] for row in VAP]
    D = 1
    for i in range(d):
        D *= H[i][i]
    adj = qlinalg.adjugate_int(H)  # D * H^{-1}, since det H = D > 0
    top = qlinalg.matmul(adj, Bp) if n > d else [[] for _ in range(d)]
    B = [list(row) for row in top] + [[-D * int(i == j) for j in range(n - d)] for i in range(n - d)]
    J = [list(row) for row in adj] + [[0] * d for _ in range(n - d)]
    L = [[0] * d + [int(i == j) for j in range(n - d)] for i in range(n - d)]
    tup = lambda M: tuple(tuple(r) for r in M)
    return GaleBlocks(row_change=tup(V), column_permutation=perm, H=tup(H), Bprime=tup(Bp),
                      B=tup(B), J=tup(J), L=tup(L), scale=D)


# --- counting integer points in fibers -------------------------------------------

_GRID_CACHE = {}


def _grid(bounds):
    """All integer vectors ``x`` with ``0 <= x_i <= bounds[i]`` as an int64 array."""
    key = tuple(bounds)
    g = _GRID_CACHE.get(key)
    if g is None:
        if not bounds:
            g = np.zeros((1, 0), dtype=np.int64)
        else:
            axes = [np.arange(b + 1, dtype=np.int64) for b in bounds]
            g = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(bounds))
        if len(_GRID_CACHE) > 64:
            _GRID_CACHE.clear()
        _GRID_CACHE[key] = g
    return g


class BasisSolver:
    """Counts integer solutions of ``A x = rhs`` inside boxes.

    The free coordinates (outside a fixed basis) are enumerated as a numpy
    grid; the basic ones are recovered through the integer adjugate.
    """

    def __init__(self, A):
        self.A = [list(row) for row in A]
        d, n = len(A), len(A[0])
        self.basis = select_basis_columns(A)
        self.free = [j for j in range(n) if j not in self.basis]
        AB = [[row[j] for j in self.basis] for row in A]
        self.det = qlinalg.det_int(AB)
        self.adj = np.array(qlinalg.adjugate_int(AB), dtype=np.int64)
        self.AN = np.array([[row[j] for j in self.free] for row in A], dtype=np.int64).reshape(d, len(self.free))

    def _basic(self, rhs, X):
        R = np.asarray(rhs, dtype=np.int64)[None, :] - X @ self.AN.T
        return R @ self.adj.T  # det * x_B

    def count_box(self, rhs, upper, cap=None):
        """Number of ``x`` in ``[0, upper]^n`` (integer upper per coordinate) with ``A x = rhs``."""
        ub = [upper] * (len(self.basis) + len(self.free)) if np.isscalar(upper) else list(upper)
        fb = [ub[j] for j in self.free]
        size = 1
        for b in fb:
            size *= b + 1
        if size > (cap or LIMITS.box):
            raise SizeLimit(f"{size} grid points exceed cap {cap or LIMITS.box}")
        X = _grid(fb)
        Y = self._basic(rhs, X)
        det = self.det
        ok = np.all(Y % det == 0, axis=1)
        Y = Y // det
        hi = np.array([ub[j] for j in self.basis], dtype=np.int64)
        ok &= np.all((Y >= 0) & (Y <= hi[None, :]), axis=1)
        return int(np.count_nonzero(ok))

    def count_nonnegative(self, rhs, weights, total, cap=None):
        """Nonnegative solutions, using ``x_j <= total / weights[j]`` to bound free coordinates."""
        fb = []
        for j in self.free:
            if total < 0:
                return 0
            fb.append(int(floor(Fraction(total) / weights[j])))
        size = 1
        for b in fb:
            size *= b + 1
        if size > (cap or LIMITS.box):
            raise SizeLimit(f"{size} grid points exceed cap {cap or LIMITS.box}")
        X = _grid(fb)
        Y = self._basic(rhs, X)
        ok = np.all(Y % self.det == 0, axis=1) & np.all(Y // self.det >= 0, axis=1)
        return int(np.count_nonzero(ok))
