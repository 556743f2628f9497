"""Derived Hom over a finite ring: free resolutions, Hom complexes and Ext.

A morphism E → F in D(R) is a class in H^0 Hom•(P, F) where P → E is a
resolution by finite free modules.  Bounded complexes of projectives are
their own resolutions.  Otherwise P is built degree by degree from the top,
killing the cycles of the mapping cone of P → E, and truncated once it is
deep enough for the Hom degrees asked for.
"""
from __future__ import annotations

import itertools

import numpy as np

from ..algebra import modules as fm
from ..algebra.finite_ring import FiniteIdeal, FiniteRing
from ..algebra.modules import FiniteModule, Submodule, direct_sum, free_module
from ..errors import TruncationWindowInsufficient
from .cech import _element_list, cech_complex, koszul_stable
from .complexes import (
    ChainComplex, ComplexMap, InvariantProfile, identity_map, is_quasi_iso, module_complex, tensor,
)


# ---------------------------------------------------------------- projectivity

def is_projective(M: FiniteModule) -> bool:
    """Each local piece e_p M must be free over e_p R: |e_p M| = |e_p R|^μ with μ = dim M_p/m_p M_p."""
    if M.k == 0:
        return True
    R = M.ring
    Rm = free_module(R)
    for i, e in enumerate(R.local_idempotents):
        Me = fm.image(M.action(e), M, M)
        if Me.size == 1:
            continue
        Re = fm.image(Rm.action(e), Rm, Rm).size
        p = R.primes[i]
        mMe = Submodule(M, np.concatenate([M.action(x) @ Me.gens for x in p.canonical_gens] or
                                          [np.zeros((M.k, 0), dtype=np.int64)], axis=1))
        top = Me.size // mMe.size
        k = R.size // p.size
        mu, q = 0, 1
        while q < top:
            q, mu = q * k, mu + 1
        if q != top or Re ** mu != Me.size:
            return False
    return True


def is_degreewise_projective(C: ChainComplex) -> bool:
    key = "_projective"
    if key not in C.info:
        C.info[key] = all(is_projective(C.term(i)) for i in C.degrees)
    return C.info[key]


# ---------------------------------------------------------------- resolutions

def free_map(target: FiniteModule, images, copies: int) -> np.ndarray:
    """Matrix of the R-map R^copies → target sending the j-th generator to images[:, j]."""
    R = target.ring
    g = R.g
    out = np.zeros((target.k, copies * g), dtype=np.int64)
    images = np.asarray(images, dtype=np.int64).reshape(target.k, copies) if target.k else images
    for j in range(copies):
        for i in range(g):
            if target.k:
                out[:, j * g + i] = target.act[i] @ images[:, j]
    return target.reduce(out) if target.k else out


class Resolution:
    """π: P → E with P degreewise free (or P = E when E is already projective).

    ``low`` is the lowest constructed degree (None when P = E); π induces
    isomorphisms on H^m for m > low.
    """

    def __init__(self, E: ChainComplex, low: int | None):
        self.E = E
        R = E.ring
        if E.is_zero() or is_degreewise_projective(E):
            self.P, self.low = E, None
            self.pi = identity_map(E)
            return
        terms, diffs, phi = {}, {}, {}
        zero = fm.zero_module(R)
        for m in range(E.hi, low - 1, -1):
            P1 = terms.get(m + 1, zero)
            P2 = terms.get(m + 2, zero)
            Em, E1 = E.term(m), E.term(m + 1)
            X = direct_sum([P1, Em], R)
            Y = direct_sum([P2, E1], R)
            F = fm.block([P2.k, E1.k], [P1.k, Em.k],
                         {(0, 0): diffs.get(m + 1, np.zeros((P2.k, P1.k), dtype=np.int64)),
                          (1, 0): phi.get(m + 1, np.zeros((E1.k, P1.k), dtype=np.int64)),
                          (1, 1): E.d(m)})
            Z = fm.kernel(F, X, Y)
            gens = fm.module_generators(X, Z.gens) if X.k and Z.gens.shape[1] else np.zeros((X.k, 0), dtype=np.int64)
            a = gens.shape[1]
            if a == 0:
                continue
            Pm = free_module(R, a)
            terms[m] = Pm
            if P1.k:
                diffs[m] = free_map(P1, -gens[:P1.k], a)
            phi[m] = free_map(Em, gens[P1.k:], a) if Em.k else np.zeros((0, Pm.k), dtype=np.int64)
        self.P = ChainComplex(R, terms, diffs, name=f"P({E.name})",
                              info={"resolves": E, "truncated_at": low}, check=False)
        self.low = low
        self.pi = ComplexMap(self.P, E, phi, check=False)
        self.P.info["resolution"] = self

    @property
    def exact(self) -> bool:
        return self.low is None


def resolve(E: ChainComplex, low: int) -> Resolution:
    """A resolution valid above ``low`` (cached on the complex)."""
    cache = E.info.setdefault("_resolutions", [])
    for res in cache:
        if res.low is None or res.low <= low:
            return res
    res = Resolution(E, low)
    cache.append(res)
    return res


# ---------------------------------------------------------------- Hom complexes

class HomComplex:
    """Hom•_R(P, F) in the degrees n-1, n, n+1 around each requested n.

    Hom^n = ⊕_p Hom(P^p, F^{p+n}) with (Df)_p = d_F f_p - (-1)^n f_{p+1} d_P.
    Elements are stored as vec(f_p) blocks (index c * rows + r).
    """

    def __init__(self, P: ChainComplex, F: ChainComplex, degrees=(0,)):
        self.P, self.F = P, F
        self.R = P.ring
        self._amb = {}
        self._homs = {}
        self.H = {}
        for n in degrees:
            self.H[n] = self._homology(n)

    def _blocks(self, n):
        P, F = self.P, self.F
        out, off = [], 0
        for p in P.degrees:
            Pp, Fq = P.term(p), F.term(p + n)
            if Pp.k and Fq.k:
                out.append((p, Pp, Fq, off))
                off += Pp.k * Fq.k
        return out, off

    def ambient(self, n) -> FiniteModule:
        """Hom_Z-style ambient ⊕_p F^{p+n} ⊗ (coordinates of P^p), with R acting on F."""
        if n not in self._amb:
            blocks, size = self._blocks(n)
            mods = []
            for p, Pp, Fq, off in blocks:
                orders = np.tile(Fq.orders, Pp.k)
                act = np.stack([np.kron(np.eye(Pp.k, dtype=np.int64), Fq.act[j]) for j in range(self.R.g)])
                mods.append(FiniteModule(self.R, orders, act))
            self._amb[n] = (blocks, direct_sum(mods, self.R) if mods else fm.zero_module(self.R))
        return self._amb[n][1]

    def blocks(self, n):
        self.ambient(n)
        return self._amb[n][0]

    def hom_submodule(self, n) -> Submodule:
        """The R-linear maps inside the ambient."""
        if n not in self._homs:
            A = self.ambient(n)
            cols = []
            for p, Pp, Fq, off in self.blocks(n):
                Hg = fm.HomGroup(Pp, Fq)
                for G in Hg.gens:
                    v = np.zeros(A.k, dtype=np.int64)
                    v[off:off + Pp.k * Fq.k] = Hg.vec(G)
                    cols.append(v)
            gens = np.stack(cols, axis=1) if cols else np.zeros((A.k, 0), dtype=np.int64)
            self._homs[n] = Submodule(A, gens)
        return self._homs[n]

    def differential(self, n) -> np.ndarray:
        """D: ambient(n) → ambient(n+1)."""
        src, tgt = self.ambient(n), self.ambient(n + 1)
        D = np.zeros((tgt.k, src.k), dtype=np.int64)
        tb = {p: (Fq, off) for p, Pp, Fq, off in self.blocks(n + 1)}
        sign = -1 if n % 2 == 0 else 1  # -(-1)^n
        for p, Pp, Fq, off in self.blocks(n):
            size = Pp.k * Fq.k
            # d_F ∘ f_p lands in block p of degree n+1
            if p in tb:
                Fq2, off2 = tb[p]
                dF = self.F.d(p + n)
                D[off2:off2 + Pp.k * Fq2.k, off:off + size] += np.kron(np.eye(Pp.k, dtype=np.int64), dF)
            # f_p ∘ d_P^{p-1} lands in block p-1 of degree n+1
            if p - 1 in tb:
                Fq2, off2 = tb[p - 1]
                dP = self.P.d(p - 1)  # P^{p-1} → P^p
                D[off2:off2 + dP.shape[1] * Fq.k, off:off + size] += sign * np.kron(dP.T, np.eye(Fq.k, dtype=np.int64))
        return tgt.reduce(D) if tgt.k else D

    def _homology(self, n) -> fm.ModSubquotient:
        A = self.ambient(n)
        if A.k == 0:
            return fm.ModSubquotient(A, None, None)
        H = self.hom_submodule(n)
        HM, lifts = H.module(), H.lifts
        D = self.differential(n)
        nxt = self.ambient(n + 1)
        if HM.k == 0:
            Z = np.zeros((A.k, 0), dtype=np.int64)
        else:
            Zc = fm.kernel(D @ lifts, HM, nxt) if nxt.k else fm.whole(HM)
            Z = A.reduce(lifts @ Zc.gens)
        prev = self.hom_submodule(n - 1)
        B = A.reduce(self.differential(n - 1) @ prev.gens) if prev.gens.shape[1] else np.zeros((A.k, 0), dtype=np.int64)
        return fm.ModSubquotient(A, Z, B)

    # -- conversions between chain maps and ambient vectors
    def vector(self, f: ComplexMap, n: int = 0) -> np.ndarray:
        A = self.ambient(n)
        v = np.zeros(A.k, dtype=np.int64)
        for p, Pp, Fq, off in self.blocks(n):
            v[off:off + Pp.k * Fq.k] = np.asarray(f.at(p), dtype=np.int64).T.reshape(-1)
        return A.reduce(v)[:, 0] if A.k else v

    def chain_map(self, v) -> ComplexMap:
        maps = {}
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        for p, Pp, Fq, off in self.blocks(0):
            maps[p] = v[off:off + Pp.k * Fq.k].reshape(Pp.k, Fq.k).T
        return ComplexMap(self.P, self.F, maps, check=False)


# ---------------------------------------------------------------- derived Hom

def _hom_low(E: ChainComplex, F: ChainComplex, top: int = 0) -> int:
    lo_f = F.lo if not F.is_zero() else E.lo
    return min(E.lo, lo_f - top) - 2


class DerivedHom:
    """Hom_{D(R)}(E, F) = H^0 Hom•(P_E, F) as an explicit finite set."""

    def __init__(self, E: ChainComplex, F: ChainComplex, low: int | None = None,
                 res: Resolution | None = None):
        self.E, self.F = E, F
        need = _hom_low(E, F)
        if res is not None:
            low = res.low
        if low is not None and low > need:
            raise TruncationWindowInsufficient(f"resolution truncated at {low}, need {need}")
        self.res = res or resolve(E, need if low is None else low)
        self.P = self.res.P
        self.hom = HomComplex(self.P, F, (0,))
        self.H = self.hom.H[0]

    @property
    def size(self) -> int:
        return self.H.size

    @property
    def min_degree(self):
        return None if self.res.exact else self.res.low + 1

    def _vec(self, f: ComplexMap) -> np.ndarray:
        if f.source is not self.P:
            if f.source is not self.E:
                raise TruncationWindowInsufficient("map source is neither E nor its resolution")
            f = f.compose(self.res.pi)
        return self.hom.vector(f)

    def coords(self, f: ComplexMap) -> np.ndarray:
        if self.H.orders.size == 0:
            return np.zeros(0, dtype=np.int64)
        return self.H.coords(self._vec(f))[:, 0]

    def equal(self, u: ComplexMap, v: ComplexMap) -> bool:
        """u = v in D(R): the difference is null-homotopic after precomposing with π."""
        if self.H.orders.size == 0:
            return True
        return not np.any((self.coords(u) - self.coords(v)) % self.H.orders)

    def representative(self, c) -> ComplexMap:
        A = self.hom.ambient(0)
        if self.H.orders.size == 0:
            return self.hom.chain_map(np.zeros(A.k, dtype=np.int64))
        v = self.H.lifts @ np.asarray(c, dtype=np.int64)
        return self.hom.chain_map(A.reduce(v)[:, 0])

    def elements(self):
        for c in itertools.product(*[range(int(d)) for d in self.H.orders]):
            yield self.representative(c)

    def is_iso(self, f: ComplexMap) -> bool:
        if f.source is self.E or self.res.exact:
            return is_quasi_iso(f)
        return is_quasi_iso(f, self.min_degree)

    def postcompose_matrix(self, phi: ComplexMap, other: "DerivedHom") -> np.ndarray:
        """Matrix of [f] ↦ [phi ∘ f] from this group to ``other`` (same source)."""
        cols = []
        for j in range(self.H.orders.size):
            e = np.zeros(self.H.orders.size, dtype=np.int64)
            e[j] = 1
            cols.append(other.coords(phi.compose(self.representative(e))))
        if not cols:
            return np.zeros((other.H.orders.size, 0), dtype=np.int64)
        return np.stack(cols, axis=1)


def derived_hom(E: ChainComplex, F: ChainComplex) -> DerivedHom:
    return DerivedHom(E, F)


def group_map_kernel_size(Mx, src_orders, tgt_orders, N: int) -> int:
    from ..algebra import zmod
    src_orders = np.asarray(src_orders, dtype=np.int64)
    if src_orders.size == 0:
        return 1
    if np.asarray(tgt_orders).size == 0:
        return int(np.prod(src_orders, dtype=object))
    K = zmod.group_kernel(Mx, src_orders, tgt_orders, N)
    return zmod.Subquotient(np.concatenate([K, np.diag(src_orders)], axis=1), np.diag(src_orders),
                            src_orders.size, N).size


def ext(E: ChainComplex, F: ChainComplex, i: int) -> FiniteModule:
    """Ext^i(E, F) = H^i Hom•(P_E, F) as an R-module."""
    res = resolve(E, _hom_low(E, F, i))
    return HomComplex(res.P, F, (i,)).H[i].module


# ---------------------------------------------------------------- local cohomology as a colimit of Ext

def stable_power(I: FiniteIdeal) -> tuple[FiniteIdeal, int]:
    """(I^t, t) with t the least exponent where the power chain stabilises."""
    cur, t = I, 1
    while True:
        nxt = cur * I
        if nxt == cur:
            return cur, t
        cur, t = nxt, t + 1


def ext_local_cohomology(I, M: FiniteModule, i: int) -> InvariantProfile:
    """colim_t Ext^i(R/I^t, M), computed at the power where I^t stabilises."""
    R = M.ring
    if not isinstance(I, FiniteIdeal):
        I = R.ideal(_element_list(R, I))
    J, _ = stable_power(I)
    Q = fm.cyclic(R, J)
    return InvariantProfile.of(ext(module_complex(Q), module_complex(M), i), i)


# ---------------------------------------------------------------- derived intersection

def _dedup(xs):
    seen, out = set(), []
    for x in xs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def intersection_map(M: FiniteModule, ts, us) -> ComplexMap:
    """Č(t, u; M) → Č(t ∪ u; M): the augmentation on repeated generators."""
    R = M.ring
    full = list(ts) + list(us)
    w = _dedup(full)
    keep = []
    seen = set()
    for pos, x in enumerate(full):
        if x not in seen:
            seen.add(x)
            keep.append(pos)
    sigma = {pos: j for j, pos in enumerate(keep)}
    B = cech_complex(M, full)
    A = cech_complex(M, w)
    d, e = len(full), len(w)
    maps = {}
    for j in range(d + 1):
        src_sub = list(itertools.combinations(range(d), j))
        tgt_sub = list(itertools.combinations(range(e), j)) if j <= e else []
        tgt_idx = {T: n for n, T in enumerate(tgt_sub)}
        src_sizes = [_local_size(M, full, T) for T in src_sub]
        tgt_sizes = [_local_size(M, w, T) for T in tgt_sub]
        F = np.zeros((A.term(j).k, B.term(j).k), dtype=np.int64)
        so = np.cumsum([0] + src_sizes[:-1])
        to = np.cumsum([0] + tgt_sizes[:-1]) if tgt_sizes else []
        for a, T in enumerate(src_sub):
            if not all(pos in sigma for pos in T):
                continue
            U = tuple(sigma[pos] for pos in T)
            b = tgt_idx[U]
            k = src_sizes[a]
            F[to[b]:to[b] + k, so[a]:so[a] + k] = np.eye(k, dtype=np.int64)
        maps[j] = F
    return ComplexMap(B, A, maps)


def _local_size(M: FiniteModule, xs, T) -> int:
    R = M.ring
    t = R.one
    for i in T:
        t = R.mul(t, xs[i])
    return fm.Localization(M, t).module.k


def derived_intersect_check(ts, us, M: FiniteModule) -> bool:
    """RΓ_{(t)+(u)} M ≅ RΓ_(t) RΓ_(u) M.

    Two routes must agree: the augmentation map between the direct Čech
    complexes on t ++ u and on t ∪ u is a quasi-isomorphism, and
    𝒦•_∞(t) ⊗ 𝒦•_∞(u) ⊗ M has the same homology as the Čech complex on t ∪ u.
    """
    R = M.ring
    ts, us = _element_list(R, ts), _element_list(R, us)
    phi = intersection_map(M, ts, us)
    if not is_quasi_iso(phi):
        return False
    T = tensor(tensor(koszul_stable(R, ts), koszul_stable(R, us)), module_complex(M))
    A = phi.target
    for i in range(min(T.lo, A.lo), max(T.hi, A.hi) + 1):
        if not T.profile(i).isomorphic(A.profile(i)):
            return False
    return True
