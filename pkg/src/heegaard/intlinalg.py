"""Small exact integer matrix toolkit.

Everything here works on tuples/lists of Python ints, so there is no
overflow and no floating point anywhere.  Determinants use fraction-free
(Bareiss) elimination; Smith normal form is the classical pivoting
algorithm, adequate for the small presentation matrices this package
produces.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .errors import DimensionMismatch

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if mat and any(len(row) != len(mat[0]) for row in mat):
        raise DimensionMismatch("ragged matrix")
    return mat


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def det(mat: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise DimensionMismatch("determinant needs a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_invariant_factors(mat: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Diagonal of the Smith normal form, nonnegative, each dividing the next.

    Returns min(rows, cols) entries; trailing zeros indicate free rank in a
    presented abelian group.
    """
    a = [list(int(x) for x in row) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    size = min(rows, cols)
    diag: list[int] = []
    t = 0
    while t < size:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    for j in range(cols):
                        a[i][j] -= q * a[t][j]
                if a[i][t]:
                    # remainder smaller than the pivot: swap it up and restart
                    a[t], a[i] = a[i], a[t]
                    dirty = True
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    for i in range(rows):
                        a[i][j] -= q * a[i][t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    dirty = True
            if not dirty:
                d = a[t][t]
                for i in range(t + 1, rows):
                    if any(v % d for v in a[i][t + 1:]):
                        for j in range(cols):
                            a[t][j] += a[i][j]
                        dirty = True
                        break
        diag.append(abs(a[t][t]))
        t += 1
    diag.extend([0] * (size - len(diag)))
    return tuple(diag)


def signed_permutation(mat: IntMatrix) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Decompose a square matrix as a signed permutation, if it is one.

    Returns ``(sigma, eps)`` with ``mat[i][sigma[i]] == eps[i] in {+1,-1}``
    and all other entries zero (sigma is 0-indexed), or None.
    """
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise DimensionMismatch("signed permutation test needs a square matrix")
    sigma: list[int] = []
    eps: list[int] = []
    seen: set[int] = set()
    for row in mat:
        hits = [(j, v) for j, v in enumerate(row) if v]
        if len(hits) != 1 or hits[0][1] not in (1, -1):
            return None
        j, v = hits[0]
        if j in seen:
            return None
        seen.add(j)
        sigma.append(j)
        eps.append(v)
    return tuple(sigma), tuple(eps)


def abelian_group_name(factors: Sequence[int]) -> str:
    """Human-readable name of the abelian group with the given invariant factors."""
    parts = []
    for d in factors:
        if d == 1:
            continue
        parts.append("Z" if d == 0 else f"Z/{d}")
    return " x ".join(parts) if parts else "trivial"
