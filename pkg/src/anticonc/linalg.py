"""Exact linear algebra over the rationals.

Small dense solvers used by the harmonic projection.  Matrices are lists
of lists of Fraction; sizes stay in the hundreds, so plain Gaussian
elimination is adequate and keeps every step exact.
"""

from fractions import Fraction


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [row[:] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1, 1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} for the matrix with the given column count."""
    if not rows:
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    m, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -m[r][j]
        basis.append(v)
    return basis


def solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve A x = b for square nonsingular A."""
    n = len(a)
    aug = [row[:] + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if len(pivots) != n or any(p >= n for p in pivots):
        raise ValueError("singular or inconsistent system")
    return [m[i][n] for i in range(n)]


def inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square nonsingular matrix."""
    n = len(a)
    aug = []
    for i, row in enumerate(a):
        ident = [Fraction(0)] * n
        ident[i] = Fraction(1)
        aug.append(row[:] + ident)
    m, pivots = rref(aug)
    if len(pivots) != n or any(p >= n for p in pivots):
        raise ValueError("singular matrix")
    return [m[i][n:] for i in range(n)]
