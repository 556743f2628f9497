"""Finite modules over finite rings.

A module is an abelian group ``⊕ Z/d_i`` together with the matrices by which
the additive basis of the ring acts.  Maps between modules are integer
matrices on coordinates.  Every construction (submodules, quotients, tensor
products, Hom groups) reduces to Smith forms over Z/N.
"""
from __future__ import annotations

import itertools
import math
import re
from functools import cached_property

import numpy as np

from ..errors import InvalidInput, NotAHomomorphism, RingMismatch
from ..kernels import lcm_list
from . import zmod
from .finite_ring import FiniteIdeal, FiniteRing, RingMap


def _modulus(*mods) -> int:
    return lcm_list([m.ring.N for m in mods] + [1])


class FiniteModule:
    def __init__(self, ring: FiniteRing, orders, act, name: str = "", info=None, check=False):
        self.ring = ring
        self.orders = np.asarray(orders, dtype=np.int64).reshape(-1)
        self.k = self.orders.size
        act = np.asarray(act, dtype=np.int64)
        self.act = act.reshape(ring.g, self.k, self.k) % self._mod_rows()
        self.name = name
        self.info = info or {}
        if check:
            self.verify()

    def _mod_rows(self):
        return self.orders[None, :, None] if self.k else 1

    def __repr__(self):
        return f"FiniteModule({self.name or self.invariant_factors}, over {self.ring.name})"

    @property
    def N(self) -> int:
        return self.ring.N

    @cached_property
    def size(self) -> int:
        return int(np.prod(self.orders, dtype=object)) if self.k else 1

    def is_zero(self) -> bool:
        return self.k == 0

    @cached_property
    def invariant_factors(self) -> list[int]:
        return invariant_factors(self.orders)

    def reduce(self, V) -> np.ndarray:
        return zmod.reduce_cols(V, self.orders)

    def action(self, x: int) -> np.ndarray:
        c = self.ring.coords(x)
        A = np.tensordot(c, self.act, axes=(0, 0))
        return A % self.orders[:, None] if self.k else A

    def verify(self):
        R = self.ring
        if np.any(self.orders <= 1) or np.any(R.N % self.orders):
            raise InvalidInput("module orders must be > 1 and divide the characteristic")
        D = np.diag(self.orders)
        for j in range(R.g):
            if np.any(self.reduce(self.act[j] @ D)):
                raise InvalidInput("action is not well defined on the group")
        one = self.action(R.one)
        if not np.array_equal(one, np.eye(self.k, dtype=np.int64) % self.orders[:, None]):
            raise InvalidInput("1 does not act as the identity")
        for i in range(R.g):
            for j in range(R.g):
                lhs = self.reduce(self.act[i] @ self.act[j])
                rhs = self.reduce(np.tensordot(R.struct[i, j], self.act, axes=(0, 0)))
                if not np.array_equal(lhs, rhs):
                    raise InvalidInput("action is not a ring action")

    def elements(self) -> np.ndarray:
        """All elements as columns (brute force; small modules only)."""
        if self.k == 0:
            return np.zeros((0, 1), dtype=np.int64)
        grids = itertools.product(*[range(int(d)) for d in self.orders])
        return np.array(list(grids), dtype=np.int64).T

    def zero_vector(self):
        return np.zeros(self.k, dtype=np.int64)

    def basis(self, i: int):
        v = self.zero_vector()
        v[i] = 1
        return v

    def is_linear(self, F, target: "FiniteModule") -> bool:
        return is_linear(F, self, target)


def invariant_factors(orders) -> list[int]:
    """Canonical invariant factors d_1 | d_2 | ... of ⊕ Z/orders."""
    powers: dict[int, list[int]] = {}
    for d in orders:
        d = int(d)
        p = 2
        while d > 1:
            if d % p == 0:
                q = 1
                while d % p == 0:
                    d //= p
                    q *= p
                powers.setdefault(p, []).append(q)
            p += 1
    if not powers:
        return []
    length = max(len(v) for v in powers.values())
    out = [1] * length
    for p, qs in powers.items():
        qs = sorted(qs, reverse=True)
        for i, q in enumerate(qs):
            out[length - 1 - i] *= q
    return out


def zero_module(ring: FiniteRing) -> FiniteModule:
    return FiniteModule(ring, [], np.zeros((ring.g, 0, 0)), name="0")


def free_module(ring: FiniteRing, m: int = 1) -> FiniteModule:
    orders = np.tile(ring.orders, m)
    act = np.stack([np.kron(np.eye(m, dtype=np.int64), ring.basis_mul[j]) for j in range(ring.g)])
    return FiniteModule(ring, orders, act, name=ring.name if m == 1 else f"{ring.name}^{m}",
                        info={"free": m})


# ---------------------------------------------------------------- maps

def is_linear(F, M: FiniteModule, Nm: FiniteModule) -> bool:
    F = np.asarray(F, dtype=np.int64).reshape(Nm.k, M.k)
    if M.ring is not Nm.ring and M.ring != Nm.ring:
        raise RingMismatch("modules over different rings")
    if Nm.k == 0 or M.k == 0:
        return True
    if np.any(Nm.reduce(F @ np.diag(M.orders))):
        return False
    for j in range(M.ring.g):
        if np.any(Nm.reduce(F @ M.act[j] - Nm.act[j] @ F)):
            return False
    return True


def compose(G, F, target: FiniteModule) -> np.ndarray:
    """G ∘ F reduced in the target."""
    return target.reduce(np.asarray(G, dtype=np.int64) @ np.asarray(F, dtype=np.int64))


def identity(M: FiniteModule) -> np.ndarray:
    return np.eye(M.k, dtype=np.int64)


def zero_map(M: FiniteModule, Nm: FiniteModule) -> np.ndarray:
    return np.zeros((Nm.k, M.k), dtype=np.int64)


def map_is_iso(F, M: FiniteModule, Nm: FiniteModule) -> bool:
    if M.size != Nm.size:
        return False
    return kernel(F, M, Nm).size == 1


# ---------------------------------------------------------------- submodules

class Submodule:
    """The R-submodule of ``ambient`` generated by the columns of ``gens``."""

    def __init__(self, ambient: FiniteModule, gens):
        self.ambient = ambient
        M = ambient
        gens = zmod.as_cols(gens, M.k) if M.k else np.zeros((0, 0), dtype=np.int64)
        if M.k and gens.shape[1]:
            gens = np.concatenate([gens] + [M.act[j] @ gens for j in range(M.ring.g)], axis=1)
            gens = zmod.span_basis(gens, M.N)
        self.gens = M.reduce(gens) if M.k else gens
        self._sq = None

    @property
    def sq(self) -> "ModSubquotient":
        if self._sq is None:
            self._sq = ModSubquotient(self.ambient, self.gens, None)
        return self._sq

    @property
    def size(self) -> int:
        return self.sq.size

    def module(self) -> FiniteModule:
        return self.sq.module

    @property
    def lifts(self) -> np.ndarray:
        """Ambient coordinates of the generators of ``module()``."""
        return self.sq.lifts

    def contains(self, V) -> bool:
        V = zmod.as_cols(V, self.ambient.k)
        if V.shape[1] == 0 or self.ambient.k == 0:
            return True
        return bool(np.all(self.sq.contains(V)))

    def issubset(self, other: "Submodule") -> bool:
        return other.contains(self.gens)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return hash(self.size)

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.ambient, np.concatenate([self.gens, other.gens], axis=1))

    def intersect(self, other: "Submodule") -> "Submodule":
        M = self.ambient
        A, B = self.gens, other.gens
        if A.shape[1] == 0 or B.shape[1] == 0 or M.k == 0:
            return Submodule(M, np.zeros((M.k, 0)))
        D = np.diag(M.orders)
        # x in both: A a = B b + D c
        stacked = np.concatenate([A, -B, D], axis=1)
        K = zmod.kernel_mod(stacked, M.N)
        return Submodule(M, M.reduce(A @ K[: A.shape[1]]))

    def elements(self) -> set:
        """All members as coordinate tuples (brute force)."""
        M = self.ambient
        out = set()
        for v in M.elements().T:
            if self.contains(v):
                out.add(tuple(int(x) for x in v))
        return out

    def quotient(self) -> "ModSubquotient":
        M = self.ambient
        return ModSubquotient(M, np.eye(M.k, dtype=np.int64), self.gens)

    def __repr__(self):
        return f"Submodule(size {self.size} of {self.ambient!r})"


def zero_submodule(M: FiniteModule) -> Submodule:
    return Submodule(M, np.zeros((M.k, 0), dtype=np.int64))


def whole(M: FiniteModule) -> Submodule:
    return Submodule(M, np.eye(M.k, dtype=np.int64))


class ModSubquotient:
    """A/B for submodules B ⊆ A of M (generator matrices in M coordinates)."""

    def __init__(self, M: FiniteModule, A, B):
        self.ambient = M
        D = np.diag(M.orders) if M.k else np.zeros((0, 0), dtype=np.int64)
        A = zmod.as_cols(A, M.k) if A is not None else np.zeros((M.k, 0), dtype=np.int64)
        B = zmod.as_cols(B, M.k) if B is not None else np.zeros((M.k, 0), dtype=np.int64)
        self.A = np.concatenate([A, D], axis=1) if M.k else A
        self.B = np.concatenate([B, D], axis=1) if M.k else B
        self._sq = zmod.Subquotient(self.A, self.B, M.k, M.N) if M.k else None

    @property
    def orders(self):
        return self._sq.orders if self._sq is not None else np.zeros(0, dtype=np.int64)

    @property
    def size(self) -> int:
        return self._sq.size if self._sq is not None else 1

    @property
    def lifts(self) -> np.ndarray:
        if self._sq is None:
            return np.zeros((0, 0), dtype=np.int64)
        return self.ambient.reduce(self._sq.gens)

    def coords(self, V) -> np.ndarray:
        if self._sq is None:
            V = np.asarray(V)
            return np.zeros((0, V.shape[1] if V.ndim == 2 else 1), dtype=np.int64)
        return self._sq.coords(V)

    def contains(self, V) -> np.ndarray:
        return self._sq.contains(V)

    @cached_property
    def module(self) -> FiniteModule:
        M = self.ambient
        q = self.orders.size
        act = np.zeros((M.ring.g, q, q), dtype=np.int64)
        if q:
            G = self.lifts
            for j in range(M.ring.g):
                act[j] = self.coords(M.act[j] @ G)
        return FiniteModule(M.ring, self.orders, act)


# ---------------------------------------------------------------- kernels, images, homology

def kernel(F, M: FiniteModule, Nm: FiniteModule) -> Submodule:
    F = np.asarray(F, dtype=np.int64).reshape(Nm.k, M.k)
    if M.k == 0:
        return zero_submodule(M)
    if Nm.k == 0:
        return whole(M)
    K = zmod.group_kernel(F, M.orders, Nm.orders, _modulus(M, Nm))
    return Submodule(M, K)


def image(F, M: FiniteModule, Nm: FiniteModule) -> Submodule:
    F = np.asarray(F, dtype=np.int64).reshape(Nm.k, M.k)
    return Submodule(Nm, Nm.reduce(F))


def homology(d_in, M_prev: FiniteModule, M: FiniteModule, d_out, M_next: FiniteModule) -> ModSubquotient:
    """ker(d_out) / im(d_in) at M."""
    Z = kernel(d_out, M, M_next)
    B = image(d_in, M_prev, M)
    return ModSubquotient(M, Z.gens, B.gens)


def induced_map(F, src: ModSubquotient, tgt: ModSubquotient) -> np.ndarray:
    """Matrix of the map between subquotients induced by F on ambients."""
    G = src.lifts
    if G.shape[1] == 0 or tgt.orders.size == 0:
        return np.zeros((tgt.orders.size, src.orders.size), dtype=np.int64)
    return tgt.coords(np.asarray(F, dtype=np.int64) @ G)


# ---------------------------------------------------------------- sums, tensors, Hom

def direct_sum(mods, ring: FiniteRing | None = None) -> FiniteModule:
    mods = list(mods)
    if not mods:
        if ring is None:
            raise InvalidInput("empty direct sum needs a ring")
        return zero_module(ring)
    ring = mods[0].ring
    orders = np.concatenate([m.orders for m in mods]) if mods else np.zeros(0)
    k = int(orders.size)
    act = np.zeros((ring.g, k, k), dtype=np.int64)
    offsets = []
    o = 0
    for m in mods:
        act[:, o:o + m.k, o:o + m.k] = m.act
        offsets.append(o)
        o += m.k
    return FiniteModule(ring, orders, act, name=" ⊕ ".join(m.name or "?" for m in mods),
                        info={"sum": mods, "offsets": offsets})


def block(rows, cols, blocks) -> np.ndarray:
    """Assemble a block matrix from a dict {(i, j): matrix} and block sizes."""
    out = np.zeros((sum(rows), sum(cols)), dtype=np.int64)
    ro = np.concatenate([[0], np.cumsum(rows)]).astype(int)
    co = np.concatenate([[0], np.cumsum(cols)]).astype(int)
    for (i, j), B in blocks.items():
        if rows[i] and cols[j]:
            out[ro[i]:ro[i + 1], co[j]:co[j + 1]] = B
    return out


def _tensor_quotient(d1, acts1, d2, acts2, L):
    """(⊕Z/d1 ⊗ ⊕Z/d2) modulo the balancing relations a⊗1 - 1⊗a for each action pair."""
    k, l = d1.size, d2.size
    n = k * l
    rels = [np.diag(np.gcd.outer(d1, d2).reshape(-1))]
    Ik, Il = np.eye(k, dtype=np.int64), np.eye(l, dtype=np.int64)
    for A, B in zip(acts1, acts2):
        rels.append(np.kron(A, Il) - np.kron(Ik, B))
    rel = np.concatenate(rels, axis=1) % L
    return zmod.quotient(rel, n, L)


def tensor(M: FiniteModule, Nm: FiniteModule) -> FiniteModule:
    """M ⊗_R N, remembering coordinate data for maps and coherence isomorphisms."""
    if M.ring != Nm.ring:
        raise RingMismatch("tensor of modules over different rings")
    R = M.ring
    if M.k == 0 or Nm.k == 0:
        out = zero_module(R)
        out.info = {"tensor": (M, Nm), "C": np.zeros((0, M.k * Nm.k), dtype=np.int64),
                    "G": np.zeros((M.k * Nm.k, 0), dtype=np.int64)}
        return out
    orders, C, G = _tensor_quotient(M.orders, M.act, Nm.orders, Nm.act, R.N)
    q = orders.size
    act = np.zeros((R.g, q, q), dtype=np.int64)
    Il = np.eye(Nm.k, dtype=np.int64)
    for j in range(R.g):
        act[j] = (C @ np.kron(M.act[j], Il) @ G) % orders[:, None] if q else act[j]
    return FiniteModule(R, orders, act, name=f"({M.name} ⊗ {Nm.name})",
                        info={"tensor": (M, Nm), "C": C, "G": G})


def tensor_coords(T: FiniteModule, V) -> np.ndarray:
    """Coordinates in T = M ⊗ N of ambient (kron) vectors."""
    C = T.info["C"]
    V = zmod.as_cols(V, C.shape[1])
    if T.k == 0:
        return np.zeros((0, V.shape[1]), dtype=np.int64)
    return (C @ V) % T.orders[:, None]


def tensor_maps(F, G_, T_src: FiniteModule, T_tgt: FiniteModule) -> np.ndarray:
    """f ⊗ g between tensor modules."""
    if T_src.k == 0 or T_tgt.k == 0:
        return np.zeros((T_tgt.k, T_src.k), dtype=np.int64)
    amb = np.kron(np.asarray(F, dtype=np.int64), np.asarray(G_, dtype=np.int64))
    return tensor_coords(T_tgt, amb @ T_src.info["G"])


def left_unitor(T: FiniteModule) -> np.ndarray:
    """R ⊗ M → M, r ⊗ m ↦ r m."""
    Rm, M = T.info["tensor"]
    if T.k == 0:
        return np.zeros((M.k, 0), dtype=np.int64)
    if Rm.k != Rm.ring.g:
        raise InvalidInput("unitor needs the unit module")
    # ambient basis (b_i ⊗ e_c) ↦ act_i e_c
    amb = np.concatenate([M.act[i] for i in range(Rm.k)], axis=1)
    return M.reduce(amb @ T.info["G"])


def right_unitor(T: FiniteModule) -> np.ndarray:
    """M ⊗ R → M."""
    M, Rm = T.info["tensor"]
    if T.k == 0:
        return np.zeros((M.k, 0), dtype=np.int64)
    if Rm.k != Rm.ring.g:
        raise InvalidInput("unitor needs the unit module")
    # ambient index c * g + i ↦ act_i e_c
    cols = []
    for c in range(M.k):
        for i in range(Rm.k):
            cols.append(M.act[i][:, c])
    amb = np.stack(cols, axis=1)
    return M.reduce(amb @ T.info["G"])


def swap_ambient(k: int, l: int) -> np.ndarray:
    """Permutation e_i ⊗ f_j ↦ f_j ⊗ e_i on kron coordinates."""
    P = np.zeros((k * l, k * l), dtype=np.int64)
    for i in range(k):
        for j in range(l):
            P[j * k + i, i * l + j] = 1
    return P


def symmetry(T_MN: FiniteModule, T_NM: FiniteModule) -> np.ndarray:
    M, Nm = T_MN.info["tensor"]
    if T_MN.k == 0 or T_NM.k == 0:
        return np.zeros((T_NM.k, T_MN.k), dtype=np.int64)
    return tensor_coords(T_NM, swap_ambient(M.k, Nm.k) @ T_MN.info["G"])


def associator(T_MN_P: FiniteModule, T_M_NP: FiniteModule) -> np.ndarray:
    """(M ⊗ N) ⊗ P → M ⊗ (N ⊗ P)."""
    MN, P = T_MN_P.info["tensor"]
    M, NP = T_M_NP.info["tensor"]
    if T_MN_P.k == 0 or T_M_NP.k == 0:
        return np.zeros((T_M_NP.k, T_MN_P.k), dtype=np.int64)
    G_MN = MN.info["G"]
    C_NP = NP.info["C"]
    amb = np.kron(np.eye(M.k, dtype=np.int64), C_NP) @ np.kron(G_MN, np.eye(P.k, dtype=np.int64))
    return tensor_coords(T_M_NP, amb @ T_MN_P.info["G"])


class HomGroup:
    """Hom_R(M, N) as a finite abelian group with coordinates."""

    def __init__(self, M: FiniteModule, Nm: FiniteModule):
        self.src, self.tgt = M, Nm
        k, l, g = M.k, Nm.k, M.ring.g
        self.L = _modulus(M, Nm)
        n = k * l
        if n == 0:
            self.orders = np.zeros(0, dtype=np.int64)
            self._sq = None
            return
        xo = np.tile(Nm.orders, k)
        self.x_orders = xo
        Il, Ik = np.eye(l, dtype=np.int64), np.eye(k, dtype=np.int64)
        rows = [np.kron(np.diag(M.orders), Il)]
        for j in range(g):
            rows.append(np.kron(M.act[j].T, Il) - np.kron(Ik, Nm.act[j]))
        Phi = np.concatenate(rows, axis=0)
        tgt_orders = np.tile(xo, g + 1)
        K = zmod.group_kernel(Phi, xo, tgt_orders, self.L)
        D = np.diag(xo)
        self._sq = zmod.Subquotient(np.concatenate([K, D], axis=1), D, n, self.L)
        self.orders = self._sq.orders

    @property
    def size(self) -> int:
        return self._sq.size if self._sq is not None else 1

    def vec(self, F) -> np.ndarray:
        F = np.asarray(F, dtype=np.int64).reshape(self.tgt.k, self.src.k)
        return F.T.reshape(-1)

    def mat(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64).reshape(self.src.k, self.tgt.k)
        return self.tgt.reduce(v.T)

    @property
    def gens(self) -> list[np.ndarray]:
        if self._sq is None:
            return []
        return [self.mat(self._sq.gens[:, i]) for i in range(self.orders.size)]

    def coords(self, F) -> np.ndarray:
        if self._sq is None:
            return np.zeros(0, dtype=np.int64)
        return self._sq.coords(self.vec(F))[:, 0]

    def element(self, c) -> np.ndarray:
        if self._sq is None:
            return np.zeros((self.tgt.k, self.src.k), dtype=np.int64)
        return self.mat(self._sq.gens @ np.asarray(c, dtype=np.int64))

    def all_elements(self):
        for c in itertools.product(*[range(int(d)) for d in self.orders]):
            yield self.element(c)


# ---------------------------------------------------------------- constructions

def cyclic(ring: FiniteRing, ideal: FiniteIdeal | list) -> FiniteModule:
    """R / I."""
    if not isinstance(ideal, FiniteIdeal):
        ideal = ring.ideal(ideal)
    R = free_module(ring)
    S = Submodule(R, np.stack([ring.coords(x) for x in ideal.gens], axis=1)
                  if ideal.gens else np.zeros((ring.g, 0)))
    Q = S.quotient()
    mod = Q.module
    mod.name = f"{ring.name}/{ideal!r}"
    mod.info = {"cyclic": ideal, "projection": Q.coords(np.eye(ring.g, dtype=np.int64))}
    return mod


def residue_field(ring: FiniteRing, p: int) -> FiniteModule:
    mod = cyclic(ring, ring.primes[p])
    mod.name = f"k{ring.prime_label(p)}"
    return mod


def idempotent_power(ring: FiniteRing, t: int) -> tuple[int, int]:
    """(e, K): the idempotent e = t^K among the powers of t."""
    seen = {}
    x, k = ring.one, 0
    while x not in seen:
        seen[x] = k
        x = ring.mul(x, t)
        k += 1
    start, period = seen[x], k - seen[x]
    K = max(start, 1)
    K = ((K + period - 1) // period) * period
    return ring.power(t, K), K


class Localization:
    """M[1/t] for a finite module, realised as the stable image t^K M ⊂ M."""

    def __init__(self, M: FiniteModule, t: int):
        R = M.ring
        self.source = M
        self.t = int(t)
        self.idempotent, self.K = idempotent_power(R, t)
        Tm = M.action(t)
        # least n with t^n M = t^{n+1} M
        cur = whole(M)
        n = 0
        while True:
            nxt = Submodule(M, M.reduce(Tm @ cur.gens)) if M.k else cur
            if nxt.size == cur.size:
                break
            cur, n = nxt, n + 1
        self.stable_index = n
        self.submodule = cur
        self.module = cur.module()
        E = M.action(self.idempotent)
        # localization map m ↦ e m, in coordinates of the stable image
        self.map = cur.sq.coords(E) if self.module.k else np.zeros((0, M.k), dtype=np.int64)
        self.inclusion = cur.lifts


def localize_finite(M: FiniteModule, t: int) -> Localization:
    return Localization(M, t)


def restrict_scalars(M: FiniteModule, psi: RingMap) -> FiniteModule:
    """View a T-module as an S-module through ψ: S → T."""
    if M.ring != psi.target:
        raise RingMismatch("module is not over the target of the ring map")
    S = psi.source
    Mat = psi.matrix  # (gT, gS)
    act = np.zeros((S.g, M.k, M.k), dtype=np.int64)
    for j in range(S.g):
        A = np.tensordot(Mat[:, j], M.act, axes=(0, 0))
        act[j] = A % M.orders[:, None] if M.k else A
    return FiniteModule(S, M.orders, act, name=f"ψ_*{M.name}", info={"restricted": (M, psi)})


def extend_scalars(M: FiniteModule, psi: RingMap) -> FiniteModule:
    """M ⊗_S T as a T-module."""
    if M.ring != psi.source:
        raise RingMismatch("module is not over the source of the ring map")
    S, T = psi.source, psi.target
    TS = restrict_scalars(free_module(T), psi)
    L = lcm_list([S.N, T.N])
    if M.k == 0:
        out = zero_module(T)
        out.info = {"extended": (M, psi), "C": np.zeros((0, 0), dtype=np.int64),
                    "G": np.zeros((0, 0), dtype=np.int64)}
        return out
    orders, C, G = _tensor_quotient(M.orders, M.act, TS.orders, TS.act, L)
    q = orders.size
    act = np.zeros((T.g, q, q), dtype=np.int64)
    Ik = np.eye(M.k, dtype=np.int64)
    for j in range(T.g):
        if q:
            act[j] = (C @ np.kron(Ik, T.basis_mul[j]) @ G) % orders[:, None]
    return FiniteModule(T, orders, act, name=f"ψ^*{M.name}",
                        info={"extended": (M, psi), "C": C, "G": G, "TS": TS})


def extend_map(F, M: FiniteModule, Nm: FiniteModule, EM: FiniteModule, EN: FiniteModule) -> np.ndarray:
    """ψ^*(f) = f ⊗ 1_T."""
    if EM.k == 0 or EN.k == 0:
        return np.zeros((EN.k, EM.k), dtype=np.int64)
    gT = EM.info["TS"].k
    amb = np.kron(np.asarray(F, dtype=np.int64), np.eye(gT, dtype=np.int64))
    return (EN.info["C"] @ amb @ EM.info["G"]) % EN.orders[:, None]


def extension_counit(EM: FiniteModule) -> np.ndarray:
    """ψ^*(R_S) → R_T, s ⊗ t ↦ ψ(s) t (only for M the free rank-one S-module)."""
    M, psi = EM.info["extended"]
    T = psi.target
    if EM.k == 0:
        return np.zeros((T.g, 0), dtype=np.int64)
    cols = []
    Mat = psi.matrix
    for i in range(M.k):
        for j in range(T.g):
            cols.append(T.basis_mul[j] @ Mat[:, i])
    amb = np.stack(cols, axis=1) % T.orders[:, None]
    return (amb @ EM.info["G"]) % T.orders[:, None]


# ---------------------------------------------------------------- isomorphism tests

def action_profile(M: FiniteModule) -> list:
    """Invariant factors of b·M for each basis element b of the ring."""
    out = []
    for j in range(M.ring.g):
        out.append(image(M.act[j], M, M).module().invariant_factors if M.k else [])
    return out


def is_isomorphic(M: FiniteModule, Nm: FiniteModule, exhaustive_limit: int = 256,
                  hom_limit: int = 1 << 14) -> bool:
    """Module isomorphism: invariants first, then an exhaustive search for a bijective R-map."""
    if M.invariant_factors != Nm.invariant_factors:
        return False
    if action_profile(M) != action_profile(Nm):
        return False
    if M.size == 1:
        return True
    # decompose along local idempotents
    R = M.ring
    for e in R.local_idempotents:
        Me = image(M.action(e), M, M)
        Ne = image(Nm.action(e), Nm, Nm)
        if Me.size != Ne.size:
            return False
    if M.size > exhaustive_limit:
        return True
    H = HomGroup(M, Nm)
    if H.size > hom_limit:
        return True
    elems = M.elements()
    for F in H.all_elements():
        img = Nm.reduce(F @ elems)
        if len({tuple(c) for c in img.T}) == M.size:
            return True
    return False


def module_generators(M: FiniteModule, cand=None) -> np.ndarray:
    """A small R-generating set (greedy over group generators)."""
    if M.k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if cand is None:
        cand = np.eye(M.k, dtype=np.int64)
    chosen = []
    span = zero_submodule(M)
    total = Submodule(M, cand).size
    for i in range(cand.shape[1]):
        v = cand[:, i]
        if span.contains(v):
            continue
        chosen.append(v)
        span = Submodule(M, np.stack(chosen, axis=1))
        if span.size == total:
            break
    if not chosen:
        return np.zeros((M.k, 0), dtype=np.int64)
    return np.stack(chosen, axis=1)


def order_of(M: FiniteModule) -> int:
    return M.size


def gcd_all(xs) -> int:
    g = 0
    for x in xs:
        g = math.gcd(g, int(x))
    return g



def parse_finite_module(ring: FiniteRing, text: str) -> FiniteModule:
    """``self`` | ``free n`` | ``quot a, b`` (R/(a, b)) | ``0``, summands separated by ';'."""
    mods = []
    for part in text.split(";"):
        part = part.strip()
        if part in ("self", "S", "R"):
            mods.append(free_module(ring))
            continue
        if part == "0":
            mods.append(zero_module(ring))
            continue
        m = re.fullmatch(r"free\s+(\d+)", part)
        if m:
            mods.append(free_module(ring, int(m.group(1))))
            continue
        m = re.fullmatch(r"quot\s+(.+)", part)
        if m:
            gens = [ring.parse_element(g.strip()) for g in m.group(1).split(",")]
            mods.append(cyclic(ring, ring.ideal(gens)))
            continue
        raise InvalidInput(f"cannot parse module {part!r}")
    return mods[0] if len(mods) == 1 else direct_sum(mods, ring)
