"""Small exact linear algebra kernels: RREF/rank/nullspace over Q, generic
field elimination usable with RatFunc entries, and a column Hermite form
over Q[z] for lattice bases.  Internal module."""

from __future__ import annotations

from fractions import Fraction

from .ratfield import Poly


# ---------------- matrices over Q ----------------


def rref(rows):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r] + [[Fraction(0)] * ncols for _ in range(len(rows) - r)], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int):
    """Basis of the right kernel of the matrix (rows over Q), as vectors of
    length ncols.  Free variables are set to 1 one at a time."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


# ---------------- generic field matrices (Fraction or RatFunc) ----------------


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[sum_prod(A[i], [B[t][j] for t in range(k)]) for j in range(m)] for i in range(n)]


def sum_prod(xs, ys):
    it = iter(zip(xs, ys))
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_neg(A):
    return [[-a for a in r] for r in A]

def mat_scale(A, c):
    return [[c * a for a in r] for r in A]

def mat_transpose(A):
    return [list(r) for r in zip(*A)] if A else []

def mat_eq(A, B) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )

def mat_identity(n, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def field_det(A, zero, one):
    """Determinant by fraction-free-enough Gaussian elimination over a
    field whose elements support +,-,*,/ and truthiness (zero is falsy)."""
    n = len(A)
    M = [list(r) for r in A]
    det = one
    for c in range(n):
        pr = next((i for i in range(c, n) if M[i][c]), None)
        if pr is None:
            return zero
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            det = -det
        det = det * M[c][c]
        inv = one / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def field_nullspace(A, ncols, zero, one):
    """Right-kernel basis over a generic field (same contract as nullspace)."""
    M = [list(r) for r in A]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = one / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for rr, pc in enumerate(pivots):
            v[pc] = zero - M[rr][fc]
        basis.append(v)
    return basis


def field_solve(A, b, zero, one):
    """One solution x of A x = b over a generic field, or None."""
    n = len(A)
    m = len(A[0]) if A else 0
    M = [list(r) + [bb] for r, bb in zip(A, b)]
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = one / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b2 for a, b2 in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if M[i][m]:
            return None
    x = [zero] * m
    for rr, pc in enumerate(pivots):
        x[pc] = M[rr][m]
    return x


# ---------------- column Hermite form over Q[z] ----------------


def poly_hnf(columns, nrows: int):
    """Triangular column basis of the Q[z]-module generated by the given
    columns (each a list of Poly of length nrows).  Zero columns are
    dropped; pivot entries are monic and sit on strictly increasing rows;
    off-pivot entries in a pivot row are reduced below the pivot degree.
    """
    cols = [list(c) for c in columns if any(not p.is_zero for p in c)]
    basis = []
    for row in range(nrows):
        active = [c for c in cols if not c[row].is_zero]
        if not active:
            continue
        # Euclidean reduction until one column carries gcd in this row
        while len(active) > 1:
            active.sort(key=lambda c: c[row].degree)
            small = active[0]
            for c in active[1:]:
                q = c[row] // small[row]
                for i in range(nrows):
                    c[i] = c[i] - q * small[i]
            active = [c for c in cols if not c[row].is_zero]
        piv = active[0]
        lc = piv[row].lead
        if lc != 1:
            for i in range(nrows):
                piv[i] = piv[i].scale(1 / lc)
        cols = [c for c in cols if c is not piv and any(not p.is_zero for p in c)]
        # reduce this row in earlier pivot columns for determinism
        for b in basis:
            if b[row].degree >= piv[row].degree:
                q = b[row] // piv[row]
                for i in range(nrows):
                    b[i] = b[i] - q * piv[i]
        basis.append(piv)
    return basis


def poly_kernel(B, ncols: int):
    """Basis of the Q[z]-module kernel of a polynomial matrix B (list of
    rows of Poly, ncols columns): unimodular column reduction of B with
    the operations tracked on an identity tail; the tails of the columns
    that reduce to zero form a basis of {f : B f = 0}.
    """
    nrows = len(B)
    if ncols == 0 or nrows == 0:
        return []
    some = B[0][0]
    one, zero = some.one(), some.zero()
    full = [
        [B[i][j] for i in range(nrows)]
        + [one if k == j else zero for k in range(ncols)]
        for j in range(ncols)
    ]
    total = nrows + ncols
    for row in range(nrows):
        active = [c for c in full if not c[row].is_zero]
        while len(active) > 1:
            active.sort(key=lambda c: c[row].degree)
            small = active[0]
            for c in active[1:]:
                q = c[row] // small[row]
                for i in range(total):
                    c[i] = c[i] - q * small[i]
            active = [c for c in full if not c[row].is_zero]
        if active:
            piv = active[0]
            full = [c for c in full if c is not piv]
    kernel = []
    for c in full:
        if all(c[i].is_zero for i in range(nrows)):
            vec = c[nrows:]
            if any(not p.is_zero for p in vec):
                kernel.append(vec)
    return kernel
