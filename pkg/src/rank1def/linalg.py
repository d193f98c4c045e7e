"""Exact integer/rational linear algebra: HNF, lattice membership, solves.

Everything here is arbitrary-precision and deterministic.  Lattices are row
lattices: a matrix is a list of row tuples, and the lattice is the set of
integer combinations of the rows.
"""

from fractions import Fraction


def row_hnf(rows):
    """Hermite normal form of the row lattice spanned by ``rows``.

    Returns (hnf_rows, pivot_cols): the nonzero rows in echelon order with
    positive pivots, entries above each pivot reduced into [0, pivot).
    """
    hnf, pivots, _ = _hnf_core([list(r) for r in rows], transform=False)
    return hnf, pivots


def row_hnf_with_transform(rows):
    """Like row_hnf, but also returns U (rows) with hnf[k] == U[k] . rows.

    U covers only the nonzero HNF rows; it is the top block of a unimodular
    transform of the input row matrix.
    """
    hnf, pivots, U = _hnf_core([list(r) for r in rows], transform=True)
    return hnf, pivots, U


def _hnf_core(A, transform):
    m = len(A)
    if m == 0:
        return [], [], []
    n = len(A[0])
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transform else None
    pivot_row = 0
    pivots = []
    for col in range(n):
        if pivot_row >= m:
            break
        # gcd-eliminate column entries below pivot_row down to one survivor
        while True:
            nz = [i for i in range(pivot_row, m) if A[i][col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(A[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = A[i][col] // A[i0][col]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[i0])]
                    if transform:
                        U[i] = [a - q * b for a, b in zip(U[i], U[i0])]
        nz = [i for i in range(pivot_row, m) if A[i][col]]
        if not nz:
            continue
        i0 = nz[0]
        A[pivot_row], A[i0] = A[i0], A[pivot_row]
        if transform:
            U[pivot_row], U[i0] = U[i0], U[pivot_row]
        if A[pivot_row][col] < 0:
            A[pivot_row] = [-a for a in A[pivot_row]]
            if transform:
                U[pivot_row] = [-a for a in U[pivot_row]]
        p = A[pivot_row][col]
        for i in range(pivot_row):
            q = A[i][col] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[pivot_row])]
                if transform:
                    U[i] = [a - q * b for a, b in zip(U[i], U[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    hnf = [tuple(r) for r in A[:pivot_row]]
    Uout = [tuple(r) for r in U[:pivot_row]] if transform else []
    return hnf, pivots, Uout


def lattice_solve(hnf_rows, pivots, vec):
    """Integer coefficients expressing vec over HNF rows, or None."""
    v = list(vec)
    coeffs = []
    for row, pc in zip(hnf_rows, pivots):
        p = row[pc]
        c, rem = divmod(v[pc], p)
        if rem:
            return None
        if c:
            v = [a - c * b for a, b in zip(v, row)]
        coeffs.append(c)
    if any(v):
        return None
    return coeffs


def lattice_contains(hnf_rows, pivots, vec):
    return lattice_solve(hnf_rows, pivots, vec) is not None


def kernel_image(top_rows, bottom_rows):
    """Basis of { B.v : v integer vector, T.v = 0 } as rows.

    top_rows/bottom_rows are T and B given as ROW lists over the same column
    index set (columns are the variables v).  Works by row-HNF of the
    transposed stack: echelon rows whose leading entry falls past the T block
    span exactly the constrained sublattice.
    """
    t = len(top_rows)
    ncols = len(top_rows[0]) if t else len(bottom_rows[0])
    stacked = []
    for j in range(ncols):
        stacked.append([r[j] for r in top_rows] + [r[j] for r in bottom_rows])
    hnf, pivots = row_hnf(stacked)
    out = [row[t:] for row, pc in zip(hnf, pivots) if pc >= t]
    return out


def solve_fraction(A, b):
    """Solve A.x = b exactly over Q (A square nonsingular).  Lists of lists/Fractions."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def invert_fraction_matrix(A):
    n = len(A)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(solve_fraction(A, e))
    # cols[j] is the j-th column of the inverse
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det_fraction(A):
    """Determinant over Q by fraction-free-ish Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


def generic_det(rows, zero, one):
    """Determinant over any field given sample zero/one elements.

    Entries must support +, -, *, / and == against ``zero``.  Used for
    trace-pairing determinants whose entries are field elements.
    """
    n = len(rows)
    M = [list(r) for r in rows]
    det = one
    sign = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != zero), None)
        if piv is None:
            return zero
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = -sign
        det = det * M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != zero:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    if sign < 0:
        det = zero - det
    return det
