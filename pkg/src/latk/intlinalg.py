"""Exact linear algebra over the integers.

Matrices are plain lists of lists of Python ints, row-major.  Python's
arbitrary-precision integers mean nothing here can silently wrap; every
result is exact by construction.

Conventions used throughout the package:

* vectors are rows, and transformations act on the right of row vectors,
  so ``hnf`` and ``snf`` return transforms that multiply on the left of
  the input matrix (``U @ M``), recording the row operations performed;
* the Hermite form has positive pivots, entries above each pivot reduced
  into ``[0, pivot)``, and zero rows collected at the bottom.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Matrix = list[list[int]]


def dims(m: Matrix) -> tuple[int, int]:
    """(rows, cols) of a rectangular list-of-lists matrix."""
    r = len(m)
    c = len(m[0]) if r else 0
    for row in m:
        if len(row) != c:
            raise ValueError("ragged matrix")
    return r, c


def copy_matrix(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(m: Matrix) -> Matrix:
    r, c = dims(m)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = dims(a)
    rb, cb = dims(b)
    if ca != rb:
        raise ValueError(f"shape mismatch: {ra}x{ca} times {rb}x{cb}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v: list[int], m: Matrix) -> list[int]:
    r, c = dims(m)
    if len(v) != r:
        raise ValueError("shape mismatch")
    return [sum(v[i] * m[i][j] for i in range(r)) for j in range(c)]


def is_symmetric(m: Matrix) -> bool:
    r, c = dims(m)
    return r == c and all(m[i][j] == m[j][i] for i in range(r) for j in range(i))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(m: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular and U @ m == H.  Pivots are
    positive, entries above a pivot lie in [0, pivot), zero rows come
    last.
    """
    r, c = dims(m)
    h = copy_matrix(m)
    u = identity(r)
    pivot_row = 0
    pivots = []
    for col in range(c):
        if pivot_row >= r:
            break
        # Combine rows pivot_row..r-1 until only one nonzero entry
        # remains in this column.
        k = pivot_row
        while True:
            nz = [i for i in range(pivot_row, r) if h[i][col] != 0]
            if not nz:
                k = -1
                break
            if len(nz) == 1:
                k = nz[0]
                break
            i, j = nz[0], nz[1]
            a, b = h[i][col], h[j][col]
            g, s, t = _xgcd(a, b)
            p, q = a // g, b // g
            # rows i,j <- (s*i + t*j, -q*i + p*j); the 2x2 block has det 1
            h[i], h[j] = (
                [s * x + t * y for x, y in zip(h[i], h[j])],
                [-q * x + p * y for x, y in zip(h[i], h[j])],
            )
            u[i], u[j] = (
                [s * x + t * y for x, y in zip(u[i], u[j])],
                [-q * x + p * y for x, y in zip(u[i], u[j])],
            )
        if k == -1:
            continue
        if k != pivot_row:
            h[k], h[pivot_row] = h[pivot_row], h[k]
            u[k], u[pivot_row] = u[pivot_row], u[k]
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        p = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // p  # floor division puts the entry in [0, p)
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    return h, u


def rank(m: Matrix) -> int:
    h, _ = hnf(m)
    return sum(1 for row in h if any(row))


def hnf_rows(m: Matrix) -> Matrix:
    """Nonzero rows of the Hermite form: a canonical basis of the row span."""
    h, _ = hnf(m)
    return [row for row in h if any(row)]


def snf(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form.

    Returns (D, U, V) with U, V unimodular, U @ m @ V == D diagonal,
    and each diagonal entry dividing the next.
    """
    r, c = dims(m)
    d = copy_matrix(m)
    u = identity(r)
    v = identity(c)

    def row_op(i, j, s, t, p, q):
        d[i], d[j] = (
            [s * x + t * y for x, y in zip(d[i], d[j])],
            [-q * x + p * y for x, y in zip(d[i], d[j])],
        )
        u[i], u[j] = (
            [s * x + t * y for x, y in zip(u[i], u[j])],
            [-q * x + p * y for x, y in zip(u[i], u[j])],
        )

    def col_op(i, j, s, t, p, q):
        for row in d:
            row[i], row[j] = s * row[i] + t * row[j], -q * row[i] + p * row[j]
        for row in v:
            row[i], row[j] = s * row[i] + t * row[j], -q * row[i] + p * row[j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row_multiple(i, j, f):
        """row i -= f * row j"""
        d[i] = [x - f * y for x, y in zip(d[i], d[j])]
        u[i] = [x - f * y for x, y in zip(u[i], u[j])]

    def add_col_multiple(i, j, f):
        """col i -= f * col j"""
        for row in d:
            row[i] -= f * row[j]
        for row in v:
            row[i] -= f * row[j]

    def clear_cross(k: int) -> None:
        """Zero out column k below the pivot and row k to its right.

        When the pivot divides an entry, plain elimination is used; it
        leaves the pivot row/column alone, which is what guarantees the
        outer loop terminates (the xgcd combination shrinks the pivot,
        and that can happen only finitely often).
        """
        while True:
            for i in range(k + 1, r):
                if d[i][k]:
                    a, b = d[k][k], d[i][k]
                    if b % a == 0:
                        add_row_multiple(i, k, b // a)
                    else:
                        g, s, t = _xgcd(a, b)
                        row_op(k, i, s, t, a // g, b // g)
            for j in range(k + 1, c):
                if d[k][j]:
                    a, b = d[k][k], d[k][j]
                    if b % a == 0:
                        add_col_multiple(j, k, b // a)
                    else:
                        g, s, t = _xgcd(a, b)
                        col_op(k, j, s, t, a // g, b // g)
            if all(d[i][k] == 0 for i in range(k + 1, r)) and all(
                d[k][j] == 0 for j in range(k + 1, c)
            ):
                break

    n = min(r, c)
    for k in range(n):
        # Find a nonzero entry in the remaining block.
        found = None
        for i in range(k, r):
            for j in range(k, c):
                if d[i][j]:
                    found = (i, j)
                    break
            if found:
                break
        if not found:
            break
        i, j = found
        if i != k:
            swap_rows(k, i)
        if j != k:
            swap_cols(k, j)
        while True:
            clear_cross(k)
            # Divisibility: fold in a row holding an entry the pivot
            # does not divide, then redo the pivot.
            p = d[k][k]
            culprit = None
            for i in range(k + 1, r):
                if any(d[i][j] % p for j in range(k + 1, c)):
                    culprit = i
                    break
            if culprit is None:
                break
            row_op(k, culprit, 1, 1, 1, 0)  # add the offending row to row k
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return d, u, v


def kernel_basis(m: Matrix) -> Matrix:
    """Basis of the left integer kernel {x : x @ m == 0}.

    The result is in Hermite form; it is automatically saturated (the
    quotient of Z^rows by the kernel is torsion-free).
    """
    r, _ = dims(m)
    h, u = hnf(m)
    ker = [u[i] for i in range(r) if not any(h[i])]
    if not ker:
        return []
    kh, _ = hnf(ker)
    return [row for row in kh if any(row)]


def saturate(b: Matrix) -> Matrix:
    """Basis of the saturation (primitive closure) of the row span of b.

    The saturation is rowspan_Q(b) intersected with Z^n; it is computed
    by taking the kernel of the kernel, both of which are saturated.
    """
    r, c = dims(b)
    if rank(b) == 0:
        return []
    perp = kernel_basis(transpose(b))
    if not perp:
        return identity(c)
    return kernel_basis(transpose(perp))


def det(m: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    r, c = dims(m)
    if r != c:
        raise ValueError("determinant of a non-square matrix")
    if r == 0:
        return 1
    a = copy_matrix(m)
    sign = 1
    prev = 1
    for k in range(r - 1):
        if a[k][k] == 0:
            for i in range(k + 1, r):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, r):
            for j in range(k + 1, r):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[r - 1][r - 1]


def solve_left(a: Matrix, b: Matrix) -> list[list[Fraction]] | None:
    """Solve X @ a == b over the rationals; None if inconsistent.

    a must have full row rank for the solution to be unique; here a
    square invertible a is the typical call, but any consistent system
    with independent rows works.
    """
    ra, ca = dims(a)
    rb, cb = dims(b)
    if cb != ca:
        raise ValueError("shape mismatch")
    # Gaussian elimination on a^T | b^T, i.e. solve a^T X^T = b^T.
    at = [[Fraction(x) for x in row] for row in transpose(a)]
    bt = [[Fraction(x) for x in row] for row in transpose(b)]
    nrows = ca
    ncols = ra
    prow = 0
    pivots = []
    for col in range(ncols):
        piv = None
        for i in range(prow, nrows):
            if at[i][col]:
                piv = i
                break
        if piv is None:
            continue
        at[prow], at[piv] = at[piv], at[prow]
        bt[prow], bt[piv] = bt[piv], bt[prow]
        inv = 1 / at[prow][col]
        at[prow] = [x * inv for x in at[prow]]
        bt[prow] = [x * inv for x in bt[prow]]
        for i in range(nrows):
            if i != prow and at[i][col]:
                f = at[i][col]
                at[i] = [x - f * y for x, y in zip(at[i], at[prow])]
                bt[i] = [x - f * y for x, y in zip(bt[i], bt[prow])]
        pivots.append(col)
        prow += 1
    # Inconsistency: a zero row of at with nonzero bt row.
    for i in range(prow, nrows):
        if any(bt[i]):
            return None
    xt = [[Fraction(0)] * rb for _ in range(ncols)]
    for i, col in enumerate(pivots):
        xt[col] = bt[i]
    return transpose_fractions(xt)


def transpose_fractions(m: list[list[Fraction]]) -> list[list[Fraction]]:
    r = len(m)
    c = len(m[0]) if r else 0
    return [[m[i][j] for i in range(r)] for j in range(c)]


def solve_left_integral(a: Matrix, b: Matrix) -> Matrix | None:
    """Solve X @ a == b over the integers; None if no integral solution."""
    x = solve_left(a, b)
    if x is None:
        return None
    out = []
    for row in x:
        irow = []
        for val in row:
            if val.denominator != 1:
                return None
            irow.append(int(val))
        out.append(irow)
    return out


def is_unimodular(m: Matrix) -> bool:
    r, c = dims(m)
    return r == c and det(m) in (1, -1)


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)
