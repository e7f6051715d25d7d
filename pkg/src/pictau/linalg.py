"""Dense exact linear algebra over the fields of :mod:`pictau.exactfield`.

Matrices are lists of rows. Prime fields go through numpy (int64, reduced
after every elimination step); everything else uses the field protocol.
"""
from __future__ import annotations

import numpy as np

from .exactfield import Field, PrimeField


class LinearAlgebraError(ValueError):
    pass


def _np_ok(K: Field) -> bool:
    # products of two residues must fit in int64 with room for one addition
    return isinstance(K, PrimeField) and K.p < 3_000_000_000


def _rref_np(A: np.ndarray, p: int, ncols: int | None = None):
    A = A % p
    m, n = A.shape
    limit = n if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rref(rows, K: Field, ncols: int | None = None):
    """Reduced row echelon form. Pivot search stops after ``ncols`` columns
    (used for augmented systems). Returns ``(R, pivots)`` with zero rows dropped."""
    if not rows:
        return [], []
    if _np_ok(K):
        A = np.array(rows, dtype=np.int64)
        R, piv = _rref_np(A, K.p, ncols)
        return [list(map(int, R[i])) for i in range(len(piv))], piv
    A = [list(r) for r in rows]
    m, n = len(A), len(A[0])
    limit = n if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if not K.is_zero(A[i][c]):
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = K.inv(A[r][c])
        A[r] = [K.mul(inv, v) for v in A[r]]
        pr = A[r]
        for i in range(m):
            if i != r:
                f = A[i][c]
                if not K.is_zero(f):
                    Ai = A[i]
                    A[i] = [K.sub(a, K.mul(f, b)) if not K.is_zero(b) else a for a, b in zip(Ai, pr)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(rows, K: Field) -> int:
    if not rows:
        return 0
    return len(rref(rows, K)[1])


def nullspace(rows, K: Field, n: int | None = None):
    """Basis of ``{v : A v = 0}``; ``n`` is the column count when ``rows`` is empty."""
    if not rows:
        if n is None:
            raise LinearAlgebraError("column count needed for an empty matrix")
        return [[K.one if i == j else K.zero for i in range(n)] for j in range(n)]
    n = len(rows[0])
    R, piv = rref(rows, K)
    free = [c for c in range(n) if c not in set(piv)]
    out = []
    for f in free:
        v = [K.zero] * n
        v[f] = K.one
        for i, c in enumerate(piv):
            v[c] = K.neg(R[i][f])
        out.append(v)
    return out


def _rref_full(rows, K: Field, ncols: int):
    """RREF keeping all rows (needed for consistency checks)."""
    if _np_ok(K):
        R, piv = _rref_np(np.array(rows, dtype=np.int64), K.p, ncols)
        return [list(map(int, r)) for r in R], piv
    A = [list(r) for r in rows]
    m = len(A)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if not K.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = K.inv(A[r][c])
        A[r] = [K.mul(inv, v) for v in A[r]]
        pr = A[r]
        for i in range(m):
            if i != r and not K.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(A[i], pr)]
        pivots.append(c)
        r += 1
    return A, pivots


def solve_many(rows, rhs_columns, K: Field, unique: bool = True):
    """Solve ``A X = B`` for several right-hand sides (given as columns)."""
    n = len(rows[0])
    k = len(rhs_columns)
    aug = [list(r) + [col[i] for col in rhs_columns] for i, r in enumerate(rows)]
    R, piv = _rref_full(aug, K, n)
    for row in R[len(piv):]:
        if any(not K.is_zero(v) for v in row[n:]):
            raise LinearAlgebraError("inconsistent linear system")
    if unique and len(piv) < n:
        raise LinearAlgebraError(f"solution not unique (rank {len(piv)} < {n})")
    sols = []
    for j in range(k):
        x = [K.zero] * n
        for i, c in enumerate(piv):
            x[c] = R[i][n + j]
        sols.append(x)
    return sols


def solve(rows, rhs, K: Field, unique: bool = True):
    """Solve ``A x = b``; raises when inconsistent, or not unique if ``unique``."""
    return solve_many(rows, [rhs], K, unique)[0]


def matmul(A, B, K: Field):
    if _np_ok(K) and A and B:
        return [list(map(int, row)) for row in (np.array(A, dtype=object).dot(np.array(B, dtype=object)) % K.p)]
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [K.zero] * n
        for a, brow in zip(row, B):
            if K.is_zero(a):
                continue
            for j, b in enumerate(brow):
                if not K.is_zero(b):
                    acc[j] = K.add(acc[j], K.mul(a, b))
        out.append(acc)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def row_space_key(rows, K: Field):
    """Canonical, hashable form of a row space (its RREF)."""
    R, _ = rref(rows, K)
    return tuple(tuple(r) for r in R)


def det(A, K: Field):
    n = len(A)
    M = [list(r) for r in A]
    d = K.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not K.is_zero(M[i][c])), None)
        if piv is None:
            return K.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = K.neg(d)
        d = K.mul(d, M[c][c])
        inv = K.inv(M[c][c])
        for i in range(c + 1, n):
            if not K.is_zero(M[i][c]):
                f = K.mul(M[i][c], inv)
                M[i] = [K.sub(a, K.mul(f, b)) for a, b in zip(M[i], M[c])]
    return d
