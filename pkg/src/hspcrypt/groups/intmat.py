"""Exact integer matrix normal forms.

Matrices are plain lists of lists of Python ints, so entries never overflow
however large the unimodular accumulations get.
"""

from __future__ import annotations

from collections.abc import Sequence

IntegerMatrix = list[list[int]]


def identity_matrix(n: int) -> IntegerMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntegerMatrix:
    if not a:
        return []
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise ValueError("inner dimensions differ")
    cols = len(b[0]) if b else 0
    return [[sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)] for row in a]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a, dst, src, q):
    # row[dst] += q * row[src]
    rd, rs = a[dst], a[src]
    for c in range(len(rd)):
        rd[c] += q * rs[c]


def _add_col(a, dst, src, q):
    for row in a:
        row[dst] += q * row[src]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries, the nonzero entries come first, and each divides the next.
    """
    if not m or not m[0]:
        raise ValueError("smith_normal_form needs a nonempty matrix")
    a = [list(map(int, row)) for row in m]
    rows, cols = len(a), len(a[0])
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return u, a, v
            i, j = pivot
            if i != t:
                _swap_rows(a, i, t)
                _swap_rows(u, i, t)
            if j != t:
                _swap_cols(a, j, t)
                _swap_cols(v, j, t)

            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    _add_row(a, i, t, -q)
                    _add_row(u, i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    _add_col(a, j, t, -q)
                    _add_col(v, j, t, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue

            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            # pull the offending row up; the next pass finds a smaller pivot
            _add_row(a, t, bad, 1)
            _add_row(u, t, bad, 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith form, units included."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def integer_kernel(m: Sequence[Sequence[int]]) -> IntegerMatrix:
    """Basis (as rows) of the integer right kernel ``{x : M x = 0}``."""
    cols = len(m[0])
    u, d, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(len(d), cols)) if d[i][i])
    return [[v[r][c] for r in range(cols)] for c in range(rank, cols)]


def hermite_basis(vectors: Sequence[Sequence[int]], ncols: int) -> IntegerMatrix:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returned rows have strictly increasing pivot columns, positive pivots,
    and entries above each pivot reduced into ``[0, pivot)``. The result is
    canonical for the lattice.
    """
    pending = [list(map(int, r)) for r in vectors if any(r)]
    if any(len(r) != ncols for r in pending):
        raise ValueError("vector length differs from ncols")
    basis: IntegerMatrix = []
    for j in range(ncols):
        active = [r for r in pending if r[j]]
        rest = [r for r in pending if not r[j]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[j]))
            p = active[0]
            survivors = [p]
            for r in active[1:]:
                q = r[j] // p[j]
                r = [x - q * y for x, y in zip(r, p)]
                if r[j]:
                    survivors.append(r)
                elif any(r):
                    rest.append(r)
            active = survivors
        if active:
            p = active[0]
            if p[j] < 0:
                p = [-x for x in p]
            for b in basis:
                q = b[j] // p[j]
                if q:
                    for c in range(ncols):
                        b[c] -= q * p[c]
            basis.append(p)
        pending = rest
    return basis


def solve_upper_triangular_left(b: Sequence[Sequence[int]], target: Sequence[int]) -> list[int]:
    """Integer ``x`` with ``x @ B == target`` for square upper-triangular ``B``.

    Raises ValueError if the solution is not integral.
    """
    k = len(b)
    x = [0] * k
    for j in range(k):
        acc = target[j] - sum(x[i] * b[i][j] for i in range(j))
        q, rem = divmod(acc, b[j][j])
        if rem:
            raise ValueError("target is not in the row lattice of B")
        x[j] = q
    return x
