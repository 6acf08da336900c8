"""Exact integer/rational matrix helpers: determinants, Smith normal form
with transforms, and Hermite column reduction.  Everything is plain Python
integers and Fractions; matrices are lists of row lists."""

from __future__ import annotations

from fractions import Fraction


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k in range(m):
            a = Ai[k]
            if a == 0:
                continue
            Bk = B[k]
            row = out[i]
            for j in range(p):
                row[j] += a * Bk[j]
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def det(A) -> Fraction:
    """Determinant by exact fraction elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c] == 0:
                continue
            f = M[r][c] * inv
            for j in range(c, n):
                M[r][j] -= f * M[c][j]
    return d


def mat_inverse(A):
    """Exact inverse over the rationals."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def smith_normal_form(A):
    """Return (D, U, V) with U*A*V = D diagonal, d_i | d_{i+1}, d_i >= 0.

    U and V are unimodular; A is any integer matrix.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):  # row i += c * row j
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, c):  # col i += c * col j
        for row in D:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    def negate_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]

    def diagonalize(start):
        t = start
        while t < min(m, n):
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] != 0 and (
                        best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])
                    ):
                        best = (i, j)
            if best is None:
                return
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, m):
                    if D[i][t] != 0:
                        add_row(i, t, -(D[i][t] // D[t][t]))
                        if D[i][t] != 0:
                            swap_rows(t, i)
                            dirty = True
                for j in range(t + 1, n):
                    if D[t][j] != 0:
                        add_col(j, t, -(D[t][j] // D[t][t]))
                        if D[t][j] != 0:
                            swap_cols(t, j)
                            dirty = True
            if D[t][t] < 0:
                negate_row(t)
            t += 1

    diagonalize(0)

    # enforce the divisibility chain d_i | d_{i+1}
    k = min(m, n)
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a != 0 and b != 0 and b % a != 0:
                add_col(i, i + 1, 1)
                diagonalize(i)
                changed = True
                break
    return D, U, V


def invariant_factors(A):
    """Nonzero diagonal of the Smith form, units included."""
    D, _, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i] != 0]


def hermite_column_basis(cols, n):
    """Basis (as n x r matrix given by rows) of the Z-span of the given
    integer column vectors, by Euclidean column reduction."""
    M = [[col[i] for col in cols] for i in range(n)]
    k = len(cols)
    row = 0
    pivot_col = 0
    while row < n and pivot_col < k:
        j = next((j for j in range(pivot_col, k) if M[row][j] != 0), None)
        if j is None:
            row += 1
            continue
        if j != pivot_col:
            for r in range(n):
                M[r][j], M[r][pivot_col] = M[r][pivot_col], M[r][j]
        for j in range(pivot_col + 1, k):
            while M[row][j] != 0:
                if abs(M[row][j]) < abs(M[row][pivot_col]):
                    for r in range(n):
                        M[r][j], M[r][pivot_col] = M[r][pivot_col], M[r][j]
                    continue
                q = M[row][j] // M[row][pivot_col]
                for r in range(n):
                    M[r][j] -= q * M[r][pivot_col]
        if M[row][pivot_col] < 0:
            for r in range(n):
                M[r][pivot_col] = -M[r][pivot_col]
        row += 1
        pivot_col += 1
    keep = [j for j in range(k) if any(M[r][j] != 0 for r in range(n))]
    return [[M[r][j] for j in keep] for r in range(n)]
