"""Gaussian elimination over :class:`Num` with deterministic pivoting."""

from __future__ import annotations

from typing import Sequence

from .numbers import ONE, ZERO, Num

Matrix = list[list[Num]]


def copy_matrix(rows: Sequence[Sequence[Num]]) -> Matrix:
    return [[Num.coerce(x) for x in r] for r in rows]


def rref(rows: Sequence[Sequence[Num]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; pivots are taken left to right, top to bottom."""
    m = copy_matrix(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Num]]) -> int:
    return len(rref(rows)[1])


def identity(n: int) -> Matrix:
    return [[ONE if i == k else ZERO for k in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[Num]], b: Sequence[Sequence[Num]]) -> Matrix:
    cols = list(zip(*b))
    out = []
    for row in a:
        out.append([_dot(row, col) for col in cols])
    return out


def _dot(x, y) -> Num:
    acc = ZERO
    for p, q in zip(x, y):
        if p and q:
            acc = acc + p * q
    return acc


def transpose(a: Sequence[Sequence[Num]]) -> Matrix:
    return [list(r) for r in zip(*a)]


def inverse(a: Sequence[Sequence[Num]]) -> Matrix:
    n = len(a)
    aug = [list(r) + e for r, e in zip(copy_matrix(a), identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in red]


def solve_columns(basis_cols: Sequence[Sequence[Num]], target: Sequence[Num]) -> list[Num] | None:
    """Coordinates x with sum_k x_k * basis_cols[k] == target, or None."""
    n = len(basis_cols)
    if n == 0:
        return [] if not any(target) else None
    rows = [[basis_cols[k][i] for k in range(n)] + [Num.coerce(target[i])] for i in range(len(target))]
    red, piv = rref(rows)
    if n in piv:
        return None
    if len(piv) < n:
        raise ValueError("basis columns are linearly dependent")
    x = [ZERO] * n
    for r, c in enumerate(piv):
        x[c] = red[r][n]
    return x


def nullspace(rows: Sequence[Sequence[Num]]) -> Matrix:
    """Basis of {x : A x = 0}, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for r, c in enumerate(piv):
            x[c] = -red[r][f]
        out.append(x)
    return out
