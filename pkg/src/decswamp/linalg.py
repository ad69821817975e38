"""Dense linear algebra over the rationals.

Matrices are sequences of rows; every entry is converted to
:class:`fractions.Fraction` on the way in. Nothing here touches floats.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def to_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def vec(entries: Sequence) -> Vector:
    return tuple(to_fraction(x) for x in entries)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(vec(r) for r in rows)


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row-echelon form with zero rows dropped, plus pivot columns."""
    m = [list(vec(r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return tuple(basis)


def transpose(m: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    aug = [list(vec(row)) + list(unit(n, i)) for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if len(red) < n or pivots[n - 1] >= n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(vec(r)) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def is_zero(m: Sequence[Sequence[Fraction]]) -> bool:
    return all(x == 0 for row in m for x in row)


def wedge_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Sorted k-subsets of range(n), the index set of the basis e_I of the k-th wedge power."""
    return tuple(combinations(range(n), k))


def compound(a: Sequence[Sequence[Fraction]], k: int) -> Matrix:
    """Matrix of the k-th exterior power of ``a`` in the basis e_I (entries are k x k minors)."""
    n_rows, n_cols = len(a), len(a[0]) if a else 0
    rows_idx = wedge_basis(n_rows, k)
    cols_idx = wedge_basis(n_cols, k)
    if k == 0:
        return ((Fraction(1),),)
    return tuple(
        tuple(det([[a[i][j] for j in cols] for i in rows]) for cols in cols_idx) for rows in rows_idx
    )


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if entries repeat)."""
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign
