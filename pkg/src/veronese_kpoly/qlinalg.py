"""Small exact linear algebra over the rationals.

Matrices are lists of rows. Entries may be ``int`` or ``Fraction``; results
are ``Fraction`` unless noted otherwise. Everything here is dense and meant
for matrices of size at most a few dozen.
"""

from fractions import Fraction
from math import gcd


def to_fraction_matrix(M):
    return [[Fraction(x) for x in row] for row in M]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def rref(M):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    R = to_fraction_matrix(M)
    if not R:
        return R, []
    rows, cols = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M):
    return len(rref(M)[1])


def nullspace(M, ncols=None):
    """Basis of the right nullspace, one vector per free column of the RREF."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def det(M):
    """Determinant by fraction-valued Gaussian elimination."""
    A = to_fraction_matrix(M)
    n = len(A)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        result *= piv
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / piv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return sign * result


def det_int(M):
    """Integer determinant via fraction-free Bareiss elimination."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def adjugate_int(M):
    """Integer adjugate, so that ``M @ adj == det(M) * I``."""
    n = len(M)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            adj[j][i] = (-1) ** (i + j) * det_int(minor)
    return adj


def solve(A, b):
    """Solve a nonsingular square system exactly; raises ``ValueError`` if singular."""
    n = len(A)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(A):
    n = len(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in R]


def charpoly_at(M, lam):
    """Evaluate ``det(lam*I - M)`` exactly."""
    n = len(M)
    lam = Fraction(lam)
    return det([[(lam if i == j else 0) - Fraction(M[i][j]) for j in range(n)]
                for i in range(n)])


def primitive(v):
    """Scale a rational vector to the primitive integer vector on the same ray."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def same_row_space(U, W):
    """True when the two lists of vectors span the same rational subspace."""
    if len(U) == 0 or len(W) == 0:
        return len(U) == len(W) == 0 or rank(U or W) == 0
    ru = [r for r in rref(U)[0] if any(r)]
    rw = [r for r in rref(W)[0] if any(r)]
    return ru == rw
