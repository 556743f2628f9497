"""Bounded cochain complexes of finite modules and their maps.

Degrees are cohomological: d^i goes from C^i to C^{i+1}.  Tensor products
use the sign rule d(x ⊗ y) = dx ⊗ y + (-1)^p x ⊗ dy for x in degree p.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra import modules as fm
from ..algebra.finite_ring import FiniteRing
from ..algebra.modules import FiniteModule, action_profile, direct_sum, is_isomorphic, zero_module
from ..errors import BackendMismatch, InvalidInput, NotAMorphism


def _zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


class ChainComplex:
    def __init__(self, ring: FiniteRing, terms: dict, diffs: dict | None = None, name: str = "",
                 info=None, check: bool = True):
        self.ring = ring
        self._terms = {int(i): M for i, M in terms.items() if M.k}
        for M in self._terms.values():
            if M.ring != ring:
                raise BackendMismatch("complex terms over different rings")
        if self._terms:
            self.lo, self.hi = min(self._terms), max(self._terms)
        else:
            self.lo, self.hi = 0, -1
        self._diffs = {}
        for i, D in (diffs or {}).items():
            i = int(i)
            src, tgt = self.term(i), self.term(i + 1)
            if src.k and tgt.k:
                self._diffs[i] = tgt.reduce(np.asarray(D, dtype=np.int64).reshape(tgt.k, src.k))
        self.name = name
        self.info = info if info is not None else {}
        if check:
            self.verify()

    def __repr__(self):
        return f"ChainComplex({self.name or '?'}, [{self.lo}, {self.hi}])"

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, i: int) -> FiniteModule:
        M = self._terms.get(i)
        if M is None:
            return zero_module(self.ring)
        return M

    def d(self, i: int) -> np.ndarray:
        D = self._diffs.get(i)
        if D is None:
            return _zeros(self.term(i + 1).k, self.term(i).k)
        return D

    def is_zero(self) -> bool:
        return not self._terms

    def verify(self):
        for i in self.degrees:
            if not fm.is_linear(self.d(i), self.term(i), self.term(i + 1)):
                raise InvalidInput(f"differential d^{i} is not a module map")
            dd = self.term(i + 2).reduce(self.d(i + 1) @ self.d(i)) if self.term(i + 2).k else None
            if dd is not None and np.any(dd):
                raise InvalidInput(f"d^{i + 1} d^{i} != 0")

    # -- homology
    def cycles(self, i: int) -> fm.Submodule:
        return fm.kernel(self.d(i), self.term(i), self.term(i + 1))

    def boundaries(self, i: int) -> fm.Submodule:
        return fm.image(self.d(i - 1), self.term(i - 1), self.term(i))

    def homology(self, i: int) -> fm.ModSubquotient:
        return fm.ModSubquotient(self.term(i), self.cycles(i).gens, self.boundaries(i).gens)

    def homology_module(self, i: int) -> FiniteModule:
        if self.term(i).k == 0:
            return zero_module(self.ring)
        return self.homology(i).module

    def homology_size(self, i: int) -> int:
        if self.term(i).k == 0:
            return 1
        return self.cycles(i).size // self.boundaries(i).size

    def is_acyclic(self, degrees=None) -> bool:
        return all(self.homology_size(i) == 1 for i in (self.degrees if degrees is None else degrees))

    def profile(self, i: int) -> "InvariantProfile":
        return InvariantProfile.of(self.homology_module(i), i)

    def profiles(self) -> list:
        return [self.profile(i) for i in self.degrees]

    def shift(self, n: int) -> "ChainComplex":
        """C[n]: C[n]^i = C^{i+n} with differential (-1)^n d."""
        s = -1 if n % 2 else 1
        return ChainComplex(self.ring, {i - n: M for i, M in self._terms.items()},
                            {i - n: s * D for i, D in self._diffs.items()}, name=f"{self.name}[{n}]")

    def total_size(self) -> int:
        return sum(M.size for M in self._terms.values())


@dataclass(frozen=True)
class InvariantProfile:
    """Isomorphism invariants of a homology module.

    ``generator_actions`` lists, for each additive generator b of the ring,
    the invariant factors of b·H.
    """

    degree: int
    invariant_factors: tuple
    generator_actions: tuple
    module: FiniteModule | None = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, H: FiniteModule, degree: int = 0) -> "InvariantProfile":
        return cls(degree, tuple(H.invariant_factors),
                   tuple(tuple(a) for a in action_profile(H)), H)

    def is_zero(self) -> bool:
        return not self.invariant_factors

    def isomorphic(self, other: "InvariantProfile") -> bool:
        if (self.invariant_factors, self.generator_actions) != (other.invariant_factors, other.generator_actions):
            return False
        if self.module is None or other.module is None:
            return True
        return is_isomorphic(self.module, other.module)

    def to_json(self) -> dict:
        return {"i": self.degree, "invariant_factors": list(self.invariant_factors),
                "generator_actions": [list(a) for a in self.generator_actions]}


class ComplexMap:
    """A chain map given by one matrix per degree."""

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict, check: bool = True):
        if source.ring != target.ring:
            raise BackendMismatch("chain map between complexes over different rings")
        self.source, self.target = source, target
        self._maps = {}
        for i, F in maps.items():
            i = int(i)
            S, T = source.term(i), target.term(i)
            if S.k and T.k:
                self._maps[i] = T.reduce(np.asarray(F, dtype=np.int64).reshape(T.k, S.k))
        if check:
            self.verify()

    def at(self, i: int) -> np.ndarray:
        F = self._maps.get(i)
        if F is None:
            return _zeros(self.target.term(i).k, self.source.term(i).k)
        return F

    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def verify(self):
        C, D = self.source, self.target
        for i in self.degrees():
            if not fm.is_linear(self.at(i), C.term(i), D.term(i)):
                raise NotAMorphism(f"degree {i} component is not a module map")
            T = D.term(i + 1)
            if T.k and np.any(T.reduce(self.at(i + 1) @ C.d(i) - D.d(i) @ self.at(i))):
                raise NotAMorphism(f"map does not commute with the differentials in degree {i}")

    def compose(self, other: "ComplexMap") -> "ComplexMap":
        """self ∘ other."""
        if other.target is not self.source and not _same_shape(other.target, self.source):
            raise NotAMorphism("composition of non-composable maps")
        maps = {i: self.at(i) @ other.at(i) for i in other.source.degrees}
        return ComplexMap(other.source, self.target, maps, check=False)

    def __sub__(self, other: "ComplexMap") -> "ComplexMap":
        maps = {i: self.at(i) - other.at(i) for i in self.degrees()}
        return ComplexMap(self.source, self.target, maps, check=False)

    def __add__(self, other: "ComplexMap") -> "ComplexMap":
        maps = {i: self.at(i) + other.at(i) for i in self.degrees()}
        return ComplexMap(self.source, self.target, maps, check=False)

    def scaled(self, c: int) -> "ComplexMap":
        return ComplexMap(self.source, self.target, {i: c * self.at(i) for i in self.degrees()}, check=False)

    def is_zero(self) -> bool:
        return all(not np.any(self.at(i)) for i in self.degrees())

    def is_identical(self, other: "ComplexMap") -> bool:
        return (self - other).is_zero()

    def cone(self) -> ChainComplex:
        return cone(self)

    def is_quasi_iso(self, min_degree=None) -> bool:
        return is_quasi_iso(self, min_degree)

    def on_homology(self, i: int) -> np.ndarray:
        return fm.induced_map(self.at(i), self.source.homology(i), self.target.homology(i))


def _same_shape(A: ChainComplex, B: ChainComplex) -> bool:
    return all(np.array_equal(A.term(i).orders, B.term(i).orders)
               for i in range(min(A.lo, B.lo), max(A.hi, B.hi) + 1))


# ---------------------------------------------------------------- basic complexes

def zero_complex(ring: FiniteRing) -> ChainComplex:
    return ChainComplex(ring, {}, name="0")


def module_complex(M: FiniteModule, degree: int = 0) -> ChainComplex:
    return ChainComplex(M.ring, {degree: M}, name=M.name or "M")


def unit_complex(ring: FiniteRing) -> ChainComplex:
    C = module_complex(fm.free_module(ring), 0)
    C.name = "𝒪"
    C.info["unit"] = True
    return C


def identity_map(C: ChainComplex) -> ComplexMap:
    return ComplexMap(C, C, {i: np.eye(C.term(i).k, dtype=np.int64) for i in C.degrees}, check=False)


def zero_chain_map(C: ChainComplex, D: ChainComplex) -> ComplexMap:
    return ComplexMap(C, D, {}, check=False)


def direct_sum_complex(cs, ring: FiniteRing | None = None) -> ChainComplex:
    cs = list(cs)
    if not cs:
        return zero_complex(ring)
    R = cs[0].ring
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    terms, diffs, offsets = {}, {}, {}
    for i in range(lo, hi + 1):
        parts = [c.term(i) for c in cs]
        terms[i] = direct_sum(parts, R)
        offsets[i] = list(np.cumsum([0] + [p.k for p in parts[:-1]]))
    for i in range(lo, hi):
        rows = [c.term(i + 1).k for c in cs]
        cols = [c.term(i).k for c in cs]
        diffs[i] = fm.block(rows, cols, {(j, j): c.d(i) for j, c in enumerate(cs)})
    return ChainComplex(R, terms, diffs, name=" ⊕ ".join(c.name for c in cs),
                        info={"sum": cs, "offsets": offsets})


def sum_inclusion(S: ChainComplex, j: int) -> ComplexMap:
    C = S.info["sum"][j]
    maps = {}
    for i in C.degrees:
        F = _zeros(S.term(i).k, C.term(i).k)
        o = S.info["offsets"][i][j]
        F[o:o + C.term(i).k] = np.eye(C.term(i).k, dtype=np.int64)
        maps[i] = F
    return ComplexMap(C, S, maps, check=False)


# ---------------------------------------------------------------- tensor products

def tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Total complex of C ⊗_R D (underived)."""
    if C.ring != D.ring:
        raise BackendMismatch("tensor of complexes over different rings")
    R = C.ring
    terms, blocks = {}, {}
    for n in range(C.lo + D.lo, C.hi + D.hi + 1):
        bl, mods, off = [], [], 0
        for p in C.degrees:
            q = n - p
            Cp, Dq = C.term(p), D.term(q)
            if not (Cp.k and Dq.k):
                continue
            T = fm.tensor(Cp, Dq)
            if T.k == 0:
                continue
            bl.append((p, q, T, off))
            mods.append(T)
            off += T.k
        blocks[n] = bl
        terms[n] = direct_sum(mods, R) if mods else zero_module(R)
    diffs = {}
    for n, src in blocks.items():
        tgt = blocks.get(n + 1, [])
        if not src or not tgt:
            continue
        M = _zeros(terms[n + 1].k, terms[n].k)
        for p, q, T, o in src:
            for p2, q2, T2, o2 in tgt:
                if (p2, q2) == (p + 1, q):
                    B = fm.tensor_maps(C.d(p), np.eye(D.term(q).k, dtype=np.int64), T, T2)
                elif (p2, q2) == (p, q + 1):
                    B = fm.tensor_maps(np.eye(C.term(p).k, dtype=np.int64), D.d(q), T, T2)
                    if p % 2:
                        B = -B
                else:
                    continue
                M[o2:o2 + T2.k, o:o + T.k] = B
        diffs[n] = M
    return ChainComplex(R, terms, diffs, name=f"({C.name} ⊗ {D.name})",
                        info={"tensor": (C, D), "blocks": blocks}, check=False)


def _blocks(T: ChainComplex, n: int):
    return T.info["blocks"].get(n, [])


def tensor_map(f: ComplexMap, g: ComplexMap, src: ChainComplex, tgt: ChainComplex) -> ComplexMap:
    """f ⊗ g from src = C ⊗ D to tgt = C' ⊗ D'."""
    maps = {}
    for n in src.degrees:
        tb = {(p, q): (T2, o2) for p, q, T2, o2 in _blocks(tgt, n)}
        M = _zeros(tgt.term(n).k, src.term(n).k)
        for p, q, T, o in _blocks(src, n):
            if (p, q) not in tb:
                continue
            T2, o2 = tb[(p, q)]
            M[o2:o2 + T2.k, o:o + T.k] = fm.tensor_maps(f.at(p), g.at(q), T, T2)
        maps[n] = M
    return ComplexMap(src, tgt, maps, check=False)


def left_unitor(T: ChainComplex) -> ComplexMap:
    """𝒪 ⊗ C → C."""
    U, C = T.info["tensor"]
    maps = {}
    for n in T.degrees:
        M = _zeros(C.term(n).k, T.term(n).k)
        for p, q, B, o in _blocks(T, n):
            if p == 0:
                M[:, o:o + B.k] = fm.left_unitor(B)
        maps[n] = M
    return ComplexMap(T, C, maps, check=False)


def right_unitor(T: ChainComplex) -> ComplexMap:
    """C ⊗ 𝒪 → C."""
    C, U = T.info["tensor"]
    maps = {}
    for n in T.degrees:
        M = _zeros(C.term(n).k, T.term(n).k)
        for p, q, B, o in _blocks(T, n):
            if q == 0:
                M[:, o:o + B.k] = fm.right_unitor(B)
        maps[n] = M
    return ComplexMap(T, C, maps, check=False)


def symmetry(T_CD: ChainComplex, T_DC: ChainComplex) -> ComplexMap:
    """x ⊗ y ↦ (-1)^{pq} y ⊗ x."""
    maps = {}
    for n in T_CD.degrees:
        tb = {(p, q): (B2, o2) for p, q, B2, o2 in _blocks(T_DC, n)}
        M = _zeros(T_DC.term(n).k, T_CD.term(n).k)
        for p, q, B, o in _blocks(T_CD, n):
            if (q, p) not in tb:
                continue
            B2, o2 = tb[(q, p)]
            S = fm.symmetry(B, B2)
            M[o2:o2 + B2.k, o:o + B.k] = -S if (p * q) % 2 else S
        maps[n] = M
    return ComplexMap(T_CD, T_DC, maps, check=False)


def associator(L: ChainComplex, Rt: ChainComplex) -> ComplexMap:
    """(C ⊗ D) ⊗ E → C ⊗ (D ⊗ E), (x ⊗ y) ⊗ z ↦ x ⊗ (y ⊗ z)."""
    X, E = L.info["tensor"]
    C, Y = Rt.info["tensor"]
    maps = {}
    for n in L.degrees:
        tb = {(p, t): (B2, o2) for p, t, B2, o2 in _blocks(Rt, n)}
        M = _zeros(Rt.term(n).k, L.term(n).k)
        for s, r, B, o in _blocks(L, n):
            Er = E.term(r)
            Ie = np.eye(Er.k, dtype=np.int64)
            xs_k = X.term(s).k
            for p, q, Tpq, opq in _blocks(X, s):
                t = q + r
                if (p, t) not in tb:
                    continue
                B2, o2 = tb[(p, t)]
                Yt = Y.term(t)
                ub = [(U, ou) for q2, r2, U, ou in _blocks(Y, t) if (q2, r2) == (q, r)]
                if not ub:
                    continue
                U, ou = ub[0]
                Cp = C.term(p)
                Ic = np.eye(Cp.k, dtype=np.int64)
                # kron(X^s, E^r) rows of block pq -> kron(Tpq, E^r)
                sel = _zeros(Tpq.k, xs_k)
                sel[:, opq:opq + Tpq.k] = np.eye(Tpq.k, dtype=np.int64)
                step1 = np.kron(sel, Ie)
                step2 = np.kron(Tpq.info["G"], Ie)  # -> kron(C^p, D^q, E^r)
                step3 = np.kron(Ic, U.info["C"])  # -> kron(C^p, U_qr)
                emb = _zeros(Yt.k, U.k)
                emb[ou:ou + U.k] = np.eye(U.k, dtype=np.int64)
                step4 = np.kron(Ic, emb)  # -> kron(C^p, Y^t)
                amb = step4 @ step3 @ step2 @ step1 @ B.info["G"]
                M[o2:o2 + B2.k, o:o + B.k] += fm.tensor_coords(B2, amb)
        maps[n] = M
    return ComplexMap(L, Rt, maps, check=False)


# ---------------------------------------------------------------- cones and quasi-isomorphisms

def cone(f: ComplexMap) -> ChainComplex:
    """Cone^n = C^{n+1} ⊕ D^n with d(c, d) = (-dc, f c + dd)."""
    C, D = f.source, f.target
    R = C.ring
    lo = min(C.lo - 1, D.lo)
    hi = max(C.hi - 1, D.hi)
    terms, diffs = {}, {}
    for n in range(lo, hi + 1):
        terms[n] = direct_sum([C.term(n + 1), D.term(n)], R)
    for n in range(lo, hi):
        rows = [C.term(n + 2).k, D.term(n + 1).k]
        cols = [C.term(n + 1).k, D.term(n).k]
        diffs[n] = fm.block(rows, cols, {(0, 0): -C.d(n + 1), (1, 0): f.at(n + 1), (1, 1): D.d(n)})
    return ChainComplex(R, terms, diffs, name=f"cone({C.name} → {D.name})", check=False)


def is_quasi_iso(f: ComplexMap, min_degree=None) -> bool:
    K = cone(f)
    degs = [n for n in K.degrees if min_degree is None or n >= min_degree]
    return K.is_acyclic(degs)


def quasi_iso_witness(f: ComplexMap, min_degree=None):
    """None if f is a quasi-isomorphism, else the first failing degree with both homology profiles."""
    K = cone(f)
    for n in K.degrees:
        if min_degree is not None and n < min_degree:
            continue
        if K.homology_size(n) != 1:
            # H^n(cone) != 0 means f fails on H^n or on H^{n+1}
            i = n if not f.source.profile(n).isomorphic(f.target.profile(n)) else n + 1
            return {"degree": i, "source": f.source.profile(i).to_json(),
                    "target": f.target.profile(i).to_json(), "cone_degree": n}
    return None


def complex_support(C: ChainComplex):
    """Union of the supports of the homology modules."""
    from ..support import FiniteSpec, StableSet, support_module
    out = frozenset()
    for i in C.degrees:
        out |= support_module(C.homology_module(i)).data
    return StableSet(FiniteSpec(C.ring), out)
