"""Linear algebra over Z/N built on the Smith kernel.

Vectors are integer columns; a finite abelian group is written as
``⊕ Z/d_i`` with every ``d_i`` dividing N, and subgroups of such a group are
handled by lifting to (Z/N)^k.
"""
from __future__ import annotations

import numpy as np

from ..kernels import smith_mod


def as_cols(A, rows: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(rows, -1)
    return A


def quotient(rel, n: int, N: int):
    """Structure of (Z/N)^n / colspan(rel).

    Returns ``(orders, C, G)``: orders of the cyclic factors (all > 1), the
    coordinate matrix ``C`` (coords of x are ``C @ x mod orders``) and the
    generator lifts ``G`` (columns).
    """
    rel = as_cols(rel, n) % N
    if rel.shape[1] == 0:
        diag = np.zeros(0, dtype=np.int64)
        P = Pinv = np.eye(n, dtype=np.int64)
    else:
        diag, P, Pinv, _ = smith_mod(rel, N)
    full = np.full(n, N, dtype=np.int64)
    full[: diag.size] = diag
    keep = np.flatnonzero(full > 1)
    orders = full[keep]
    C = P[keep, :] % orders[:, None] if keep.size else np.zeros((0, n), dtype=np.int64)
    G = Pinv[:, keep] % N
    return orders, C, G


def kernel_mod(A, N: int) -> np.ndarray:
    """Generators (columns) of {z : A z = 0 mod N}."""
    A = np.asarray(A, dtype=np.int64) % N
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    diag, _, _, Q = smith_mod(A, N)
    cols = []
    for i in range(n):
        if i < diag.size:
            mult = N // diag[i]
            if mult % N == 0:
                continue
            cols.append((Q[:, i] * mult) % N)
        else:
            cols.append(Q[:, i] % N)
    if not cols:
        return np.zeros((n, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


class LinearSolver:
    """Solves A z = b over Z/N for many right-hand sides."""

    def __init__(self, A, N: int):
        A = np.asarray(A, dtype=np.int64) % N
        self.N = N
        self.m, self.n = A.shape
        if self.m and self.n:
            self.diag, self.P, _, self.Q = smith_mod(A, N)
        else:
            self.diag = np.zeros(0, dtype=np.int64)
            self.P = np.eye(self.m, dtype=np.int64)
            self.Q = np.eye(self.n, dtype=np.int64)

    def solve(self, B):
        """Columns z with A z = B; raises ValueError if some column is unsolvable."""
        N = self.N
        B = as_cols(B, self.m) % N
        Y = (self.P @ B) % N
        k = self.diag.size
        Z = np.zeros((self.n, B.shape[1]), dtype=np.int64)
        if k:
            d = self.diag[:, None]
            top = Y[:k]
            if np.any(top % d):
                raise ValueError("not in the column span")
            Z[:k] = (top // d) % N
        if np.any(Y[k:] % N):
            raise ValueError("not in the column span")
        return (self.Q @ Z) % N

    def contains(self, B) -> np.ndarray:
        N = self.N
        B = as_cols(B, self.m) % N
        Y = (self.P @ B) % N
        k = self.diag.size
        ok = np.ones(B.shape[1], dtype=bool)
        if k:
            ok &= ~np.any(Y[:k] % self.diag[:, None], axis=0)
        ok &= ~np.any(Y[k:] % N, axis=0)
        return ok


def solve_mod(A, b, N: int):
    try:
        return LinearSolver(A, N).solve(b)
    except ValueError:
        return None


class Subquotient:
    """The group colspan(A) / colspan(B) inside (Z/N)^n, assuming B ⊆ A."""

    def __init__(self, A, B, n: int, N: int):
        self.N = N
        self.n = n
        A = as_cols(A, n) % N
        B = as_cols(B, n) % N
        self.A = A
        r = A.shape[1]
        self.r = r
        # x ↦ A x; its preimage of colspan B is the relation module
        stacked = np.concatenate([A, B], axis=1)
        K = kernel_mod(stacked, N)
        rel = K[:r, :] if K.size else np.zeros((r, 0), dtype=np.int64)
        self.orders, self.Cx, Gx = quotient(rel, r, N)
        self.gens = (A @ Gx) % N  # ambient lifts of generators
        self._solver = LinearSolver(stacked, N)

    @property
    def size(self) -> int:
        return int(np.prod(self.orders, dtype=object)) if self.orders.size else 1

    def coords(self, V) -> np.ndarray:
        """Coordinates of ambient vectors lying in colspan(A)."""
        V = as_cols(V, self.n)
        if V.shape[1] == 0:
            return np.zeros((self.orders.size, 0), dtype=np.int64)
        Z = self._solver.solve(V)
        X = Z[: self.r]
        if self.orders.size == 0:
            return np.zeros((0, V.shape[1]), dtype=np.int64)
        return (self.Cx @ X) % self.orders[:, None]

    def contains(self, V) -> np.ndarray:
        return self._solver.contains(V)


def group_kernel(F, d_src, d_tgt, N: int) -> np.ndarray:
    """Generators in source coordinates of ker(F: ⊕Z/d_src → ⊕Z/d_tgt)."""
    d_src = np.asarray(d_src, dtype=np.int64)
    d_tgt = np.asarray(d_tgt, dtype=np.int64)
    k, kt = d_src.size, d_tgt.size
    F = np.asarray(F, dtype=np.int64).reshape(kt, k)
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if kt == 0:
        return np.eye(k, dtype=np.int64)
    stacked = np.concatenate([F, np.diag(d_tgt)], axis=1)
    K = kernel_mod(stacked, N)
    return K[:k, :] % d_src[:, None]


def reduce_cols(V, orders) -> np.ndarray:
    orders = np.asarray(orders, dtype=np.int64)
    V = as_cols(V, orders.size)
    return V % orders[:, None] if orders.size else V


def span_basis(A, N: int) -> np.ndarray:
    """At most n columns spanning the same subgroup of (Z/N)^n as ``A``."""
    A = np.asarray(A, dtype=np.int64) % N
    n, m = A.shape
    if m <= n:
        return A
    diag, _, Pinv, _ = smith_mod(A, N)
    cols = [(Pinv[:, i] * diag[i]) % N for i in range(diag.size) if diag[i] % N]
    return np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=np.int64)
