"""Hot integer kernels: Smith reduction over Z/N and ring-table axiom checks.

Each kernel exists twice, a numba version with scalar loops and a numpy
version with vectorised row/column operations.  Both perform the same
sequence of elementary operations, so their outputs agree exactly.  The
environment flag ``TORSOR_NUMBA=0`` selects the numpy path.
"""
from __future__ import annotations

import math

import numpy as np

from ._config import use_numba

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


# ---------------------------------------------------------------- helpers

def _egcd(a, b):
    # returns (g, s, t) with s*a + t*b = g >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _gcd(a, b):
    while b != 0:
        a, b = b, a % b
    return a if a >= 0 else -a


def _unit_to_gcd(a, n):
    """A unit u of Z/n with u*a = gcd(a, n) (mod n); assumes 0 < a < n."""
    g = _gcd(a, n)
    m = n // g
    u0 = 1
    if m > 1:
        _, s, _t = _egcd((a // g) % m, m)
        u0 = s % m
    u = u0
    while _gcd(u, n) != 1:
        u += m
    return u % n, g


def _inv_unit(u, n):
    _, s, _t = _egcd(u % n, n)
    return s % n


# ---------------------------------------------------------------- numpy path

def _smith_numpy(A, N):
    A = np.array(A, dtype=np.int64) % N
    m, n = A.shape
    P = np.eye(m, dtype=np.int64)
    Pinv = np.eye(m, dtype=np.int64)
    Q = np.eye(n, dtype=np.int64)
    diag = np.full(min(m, n), N, dtype=np.int64)
    for t in range(min(m, n)):
        while True:
            sub = A[t:, t:]
            if sub.size == 0:
                break
            g = np.gcd(sub, N)
            g[sub == 0] = N
            flat = int(np.argmin(g))
            best = int(g.flat[flat])
            if best == N:
                break
            i = t + flat // sub.shape[1]
            j = t + flat % sub.shape[1]
            if i != t:
                A[[t, i], :] = A[[i, t], :]
                P[[t, i], :] = P[[i, t], :]
                Pinv[:, [t, i]] = Pinv[:, [i, t]]
            if j != t:
                A[:, [t, j]] = A[:, [j, t]]
                Q[:, [t, j]] = Q[:, [j, t]]
            a = int(A[t, t])
            u, gg = _unit_to_gcd(a, N)
            if u != 1:
                A[t, :] = (A[t, :] * u) % N
                P[t, :] = (P[t, :] * u) % N
                Pinv[:, t] = (Pinv[:, t] * _inv_unit(u, N)) % N
            piv = gg
            restart = False
            for r in range(t + 1, m):
                b = int(A[r, t])
                if b == 0:
                    continue
                if b % piv == 0:
                    c = b // piv
                    A[r, :] = (A[r, :] - c * A[t, :]) % N
                    P[r, :] = (P[r, :] - c * P[t, :]) % N
                    Pinv[:, t] = (Pinv[:, t] + c * Pinv[:, r]) % N
                else:
                    h, s, q = _egcd(piv, b)
                    x, y = b // h, piv // h
                    rt, rr = A[t, :].copy(), A[r, :].copy()
                    A[t, :] = (s * rt + q * rr) % N
                    A[r, :] = (-x * rt + y * rr) % N
                    pt, pr = P[t, :].copy(), P[r, :].copy()
                    P[t, :] = (s * pt + q * pr) % N
                    P[r, :] = (-x * pt + y * pr) % N
                    ct, cr = Pinv[:, t].copy(), Pinv[:, r].copy()
                    Pinv[:, t] = (y * ct + x * cr) % N
                    Pinv[:, r] = (-q * ct + s * cr) % N
                    restart = True
                    break
            if restart:
                continue
            for c_ in range(t + 1, n):
                b = int(A[t, c_])
                if b == 0:
                    continue
                if b % piv == 0:
                    c = b // piv
                    A[:, c_] = (A[:, c_] - c * A[:, t]) % N
                    Q[:, c_] = (Q[:, c_] - c * Q[:, t]) % N
                else:
                    h, s, q = _egcd(piv, b)
                    x, y = b // h, piv // h
                    ct, cc = A[:, t].copy(), A[:, c_].copy()
                    A[:, t] = (s * ct + q * cc) % N
                    A[:, c_] = (-x * ct + y * cc) % N
                    qt, qc = Q[:, t].copy(), Q[:, c_].copy()
                    Q[:, t] = (s * qt + q * qc) % N
                    Q[:, c_] = (-x * qt + y * qc) % N
                    restart = True
                    break
            if restart:
                continue
            diag[t] = piv
            break
    return diag, P, Pinv, Q


# ---------------------------------------------------------------- numba path

if njit is not None:
    _egcd_nb = njit(cache=True)(_egcd)
    _gcd_nb = njit(cache=True)(_gcd)

    @njit(cache=True)
    def _unit_to_gcd_nb(a, n):
        g = _gcd_nb(a, n)
        m = n // g
        u0 = 1
        if m > 1:
            r = _egcd_nb((a // g) % m, m)
            u0 = r[1] % m
        u = u0
        while _gcd_nb(u, n) != 1:
            u += m
        return u % n, g

    @njit(cache=True)
    def _smith_nb(A, N):
        m, n = A.shape
        P = np.eye(m, dtype=np.int64)
        Pinv = np.eye(m, dtype=np.int64)
        Q = np.eye(n, dtype=np.int64)
        k = min(m, n)
        diag = np.full(k, N, dtype=np.int64)
        for t in range(k):
            while True:
                best = N
                bi = -1
                bj = -1
                for i in range(t, m):
                    for j in range(t, n):
                        v = A[i, j]
                        if v != 0:
                            g = _gcd_nb(v, N)
                            if g < best:
                                best = g
                                bi = i
                                bj = j
                if best == N:
                    break
                if bi != t:
                    for c in range(n):
                        tmp = A[t, c]
                        A[t, c] = A[bi, c]
                        A[bi, c] = tmp
                    for c in range(m):
                        tmp = P[t, c]
                        P[t, c] = P[bi, c]
                        P[bi, c] = tmp
                        tmp = Pinv[c, t]
                        Pinv[c, t] = Pinv[c, bi]
                        Pinv[c, bi] = tmp
                if bj != t:
                    for r in range(m):
                        tmp = A[r, t]
                        A[r, t] = A[r, bj]
                        A[r, bj] = tmp
                    for r in range(n):
                        tmp = Q[r, t]
                        Q[r, t] = Q[r, bj]
                        Q[r, bj] = tmp
                res = _unit_to_gcd_nb(A[t, t], N)
                u = res[0]
                piv = res[1]
                if u != 1:
                    r2 = _egcd_nb(u, N)
                    uinv = r2[1] % N
                    for c in range(n):
                        A[t, c] = (A[t, c] * u) % N
                    for c in range(m):
                        P[t, c] = (P[t, c] * u) % N
                        Pinv[c, t] = (Pinv[c, t] * uinv) % N
                restart = False
                for r in range(t + 1, m):
                    b = A[r, t]
                    if b == 0:
                        continue
                    if b % piv == 0:
                        cq = b // piv
                        for c in range(n):
                            A[r, c] = (A[r, c] - cq * A[t, c]) % N
                        for c in range(m):
                            P[r, c] = (P[r, c] - cq * P[t, c]) % N
                            Pinv[c, t] = (Pinv[c, t] + cq * Pinv[c, r]) % N
                    else:
                        e = _egcd_nb(piv, b)
                        h = e[0]
                        s = e[1]
                        q = e[2]
                        x = b // h
                        y = piv // h
                        for c in range(n):
                            at = A[t, c]
                            ar = A[r, c]
                            A[t, c] = (s * at + q * ar) % N
                            A[r, c] = (-x * at + y * ar) % N
                        for c in range(m):
                            pt = P[t, c]
                            pr = P[r, c]
                            P[t, c] = (s * pt + q * pr) % N
                            P[r, c] = (-x * pt + y * pr) % N
                            ct = Pinv[c, t]
                            cr = Pinv[c, r]
                            Pinv[c, t] = (y * ct + x * cr) % N
                            Pinv[c, r] = (-q * ct + s * cr) % N
                        restart = True
                        break
                if restart:
                    continue
                for cc in range(t + 1, n):
                    b = A[t, cc]
                    if b == 0:
                        continue
                    if b % piv == 0:
                        cq = b // piv
                        for r in range(m):
                            A[r, cc] = (A[r, cc] - cq * A[r, t]) % N
                        for r in range(n):
                            Q[r, cc] = (Q[r, cc] - cq * Q[r, t]) % N
                    else:
                        e = _egcd_nb(piv, b)
                        h = e[0]
                        s = e[1]
                        q = e[2]
                        x = b // h
                        y = piv // h
                        for r in range(m):
                            at = A[r, t]
                            ac = A[r, cc]
                            A[r, t] = (s * at + q * ac) % N
                            A[r, cc] = (-x * at + y * ac) % N
                        for r in range(n):
                            qt = Q[r, t]
                            qc = Q[r, cc]
                            Q[r, t] = (s * qt + q * qc) % N
                            Q[r, cc] = (-x * qt + y * qc) % N
                        restart = True
                        break
                if restart:
                    continue
                diag[t] = piv
                break
        return diag, P, Pinv, Q

    @njit(cache=True)
    def _check_tables_nb(add, mul, triples):
        # returns index of first failing triple, or -1
        for k in range(triples.shape[0]):
            a = triples[k, 0]
            b = triples[k, 1]
            c = triples[k, 2]
            if add[add[a, b], c] != add[a, add[b, c]]:
                return k
            if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                return k
            if mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
                return k
            if add[a, b] != add[b, a] or mul[a, b] != mul[b, a]:
                return k
        return -1

    @njit(cache=True)
    def _check_all_nb(add, mul):
        n = add.shape[0]
        for a in range(n):
            for b in range(n):
                if add[a, b] != add[b, a] or mul[a, b] != mul[b, a]:
                    return a * n * n + b * n
                ab = add[a, b]
                mab = mul[a, b]
                for c in range(n):
                    if add[ab, c] != add[a, add[b, c]]:
                        return (a * n + b) * n + c
                    if mul[mab, c] != mul[a, mul[b, c]]:
                        return (a * n + b) * n + c
                    if mul[a, add[b, c]] != add[mab, mul[a, c]]:
                        return (a * n + b) * n + c
        return -1


def _check_tables_numpy(add, mul, triples):
    a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
    bad = add[add[a, b], c] != add[a, add[b, c]]
    bad |= mul[mul[a, b], c] != mul[a, mul[b, c]]
    bad |= mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]
    bad |= (add[a, b] != add[b, a]) | (mul[a, b] != mul[b, a])
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else -1


def _check_all_numpy(add, mul):
    n = add.shape[0]
    if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
        return 0
    for x in range(n):
        # rows indexed by b, columns by c
        if not np.array_equal(add[add[x, :], :], add[x, add]):
            return x * n * n
        if not np.array_equal(mul[mul[x, :], :], mul[x, mul]):
            return x * n * n
        if not np.array_equal(mul[x, add], add[mul[x, :][:, None], mul[x, :][None, :]]):
            return x * n * n
    return -1


# ---------------------------------------------------------------- public API

def smith_mod(A, N: int, backend: str | None = None):
    """Diagonalise ``A`` over Z/N.

    Returns ``(diag, P, Pinv, Q)`` with ``P @ A @ Q == diag`` (mod N) placed on
    the leading diagonal.  Entries of ``diag`` divide N; a zero diagonal entry
    is reported as N.
    """
    A = np.ascontiguousarray(np.asarray(A, dtype=np.int64) % N)
    if A.ndim != 2:
        raise ValueError("smith_mod expects a matrix")
    if backend is None:
        backend = "numba" if use_numba() else "numpy"
    if A.shape[0] == 0 or A.shape[1] == 0:
        m, n = A.shape
        return (np.zeros(0, dtype=np.int64), np.eye(m, dtype=np.int64),
                np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64))
    if N == 1:
        m, n = A.shape
        return (np.ones(min(m, n), dtype=np.int64), np.eye(m, dtype=np.int64),
                np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64))
    if backend == "numba":
        return _smith_nb(A.copy(), np.int64(N))
    return _smith_numpy(A, N)


def check_ring_tables(add, mul, triples=None, backend: str | None = None) -> int:
    """Check commutativity, associativity and distributivity.

    With ``triples=None`` every triple is checked.  Returns -1 when all pass,
    otherwise an index locating the first failure.
    """
    add = np.ascontiguousarray(add, dtype=np.int64)
    mul = np.ascontiguousarray(mul, dtype=np.int64)
    if backend is None:
        backend = "numba" if use_numba() else "numpy"
    if triples is None:
        if backend == "numba":
            return int(_check_all_nb(add, mul))
        return _check_all_numpy(add, mul)
    triples = np.ascontiguousarray(triples, dtype=np.int64)
    if backend == "numba":
        return int(_check_tables_nb(add, mul, triples))
    return _check_tables_numpy(add, mul, triples)


def lcm_list(xs) -> int:
    out = 1
    for x in xs:
        out = out * int(x) // math.gcd(out, int(x))
    return out
