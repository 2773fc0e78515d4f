"""Integer matrix utilities: Smith normal form and linear solving mod M.

All presentation changes of finite abelian groups in this package go through
``smith_normal_form``; the cochain solvers go through ``solve_linear_mod``,
which diagonalises over Z/M with two-sided elementary operations (sound in
the presence of zero divisors, unlike naive echelon back-substitution).
"""

from __future__ import annotations

from math import gcd

import numpy as np


def smith_normal_form(matrix):
    """Return ``(S, U, V)`` with ``U @ A @ V = S`` diagonal, U, V unimodular.

    ``matrix`` is a list of rows of Python ints (arbitrary precision); the
    diagonal of S satisfies s1 | s2 | ... with nonnegative entries.
    """
    A = [list(row) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a != 0 and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            if A[t][t] < 0:
                negate_row(t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // p
                    add_row(i, t, -q)
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // p
                    add_col(j, t, -q)
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
                        break
            if not dirty:
                break
        # enforce the divisibility chain against the remaining block
        p = A[t][t]
        if p != 0:
            fixed = False
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p != 0:
                        add_row(t, i, 1)
                        fixed = True
                        break
                if fixed:
                    break
            if fixed:
                continue
        t += 1
    return A, U, V


def unimodular_inverse(U):
    """Exact inverse of a unimodular integer matrix."""
    from fractions import Fraction

    n = len(U)
    aug = [
        [Fraction(U[i][j]) for j in range(n)]
        + [Fraction(int(i == k)) for k in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = aug[i][n + j]
            assert v.denominator == 1
            row.append(int(v))
        out.append(row)
    return out


def _unit_lift(a: int, M: int) -> int:
    """A unit u mod M with a = gcd(a, M) * u  (standard lemma for Z/M)."""
    g = gcd(a, M)
    u = (a // g) % M
    step = M // g
    while gcd(u, M) != 1:
        u = (u + step) % M
    return u


def solve_linear_mod(A, b, M: int, perm_seed: int | None = None):
    """Solve ``A x = b (mod M)`` for integer x; return a solution or None.

    Diagonalises A over Z/M, mirroring row operations on b and tracking
    column operations in V so that a solution of the diagonal system can be
    mapped back.  ``perm_seed`` shuffles the initial column order; different
    seeds may produce different witnesses but never a different verdict,
    which callers exploit to check solver-order independence.
    """
    if M == 1:
        n = len(A[0]) if len(A) else 0
        return np.zeros(n, dtype=np.int64)
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(0, 0)
    m, n = A.shape
    b = np.asarray(b, dtype=np.int64) % M
    if n == 0 or m == 0:
        if np.any(b % M != 0):
            return None
        return np.zeros(n, dtype=np.int64)
    A = A % M

    if perm_seed is not None:
        rng = np.random.default_rng(perm_seed)
        cperm = rng.permutation(n)
    else:
        cperm = np.arange(n)
    A = A[:, cperm]

    # drop duplicate equations (cochain systems are highly redundant)
    stacked = np.unique(np.concatenate([A, b[:, None]], axis=1), axis=0)
    A = stacked[:, :-1].copy()
    b = stacked[:, -1].copy()
    m = A.shape[0]

    V = np.eye(n, dtype=np.int64)
    r = 0
    limit = min(m, n)
    while r < limit:
        block = A[r:, r:]
        if not block.any():
            break
        nz = np.nonzero(block)
        vals = block[nz]
        k = int(np.argmin(np.gcd(vals, M)))
        pi, pj = int(nz[0][k]) + r, int(nz[1][k]) + r
        if pi != r:
            A[[r, pi]] = A[[pi, r]]
            b[[r, pi]] = b[[pi, r]]
        if pj != r:
            A[:, [r, pj]] = A[:, [pj, r]]
            V[:, [r, pj]] = V[:, [pj, r]]
        g = int(np.gcd(int(A[r, r]), M))
        u_inv = pow(_unit_lift(int(A[r, r]), M), -1, M)
        A[r] = (A[r] * u_inv) % M
        b[r] = (b[r] * u_inv) % M
        col = A[r + 1 :, r]
        if col.any():
            q = col // g
            A[r + 1 :] = (A[r + 1 :] - q[:, None] * A[r]) % M
            b[r + 1 :] = (b[r + 1 :] - q * b[r]) % M
        row = A[r, r + 1 :]
        if row.any():
            q = row // g
            A[:, r + 1 :] = (A[:, r + 1 :] - A[:, [r]] * q[None, :]) % M
            V[:, r + 1 :] = (V[:, r + 1 :] - V[:, [r]] * q[None, :]) % M
        if np.any(A[r + 1 :, r]) or np.any(A[r, r + 1 :]):
            continue  # a remainder with a smaller gcd appeared; re-pivot
        r += 1

    if np.any(b[r:] % M != 0):
        return None
    y = np.zeros(n, dtype=np.int64)
    for i in range(r):
        d = int(A[i, i])
        t = int(b[i]) % M
        if t % d != 0:
            return None
        y[i] = t // d
    x = (V @ y) % M
    out = np.zeros(n, dtype=np.int64)
    out[cperm] = x
    return out
