"""Symmetric monoidal contexts: the derived category of a finite ring and finite
preordered sets (meet as tensor, top as unit)."""
from __future__ import annotations

import itertools
from typing import Protocol

import numpy as np

from .. import _config
from ..algebra.finite_ring import FiniteRing
from ..errors import NotAMorphism, NotASemilattice, TooLarge, UnsupportedBackend
from ..homotopy import complexes as cx
from ..homotopy.complexes import ChainComplex, ComplexMap
from ..homotopy.derived import DerivedHom, _hom_low, group_map_kernel_size, is_degreewise_projective


class MonoidalContext(Protocol):
    """What the idempotent calculus needs from a symmetric monoidal category."""

    def unit(self): ...
    def tensor(self, A, B): ...
    def tensor_maps(self, f, g): ...
    def compose(self, g, f): ...
    def identity(self, A): ...
    def left_unitor(self, A): ...
    def right_unitor(self, A): ...
    def symmetry(self, A, B): ...
    def associator(self, A, B, C): ...
    def is_iso(self, f) -> bool: ...
    def equal(self, u, v) -> bool: ...
    def source(self, f): ...
    def target(self, f): ...


class DerivedContext:
    """D(R) for a finite ring R.

    Objects are bounded complexes of finite modules, morphisms are chain maps
    standing for their D(R)-classes (maps out of a non-projective complex
    are chain maps out of its free resolution), iso means quasi-isomorphism.
    The tensor product needs one degreewise projective factor, which is then
    flat, so the naive total complex computes the derived tensor.
    """

    has_homs = True

    def __init__(self, ring: FiniteRing):
        if ring.size > _config.max_ring_size():
            raise TooLarge(f"ring of order {ring.size} exceeds TORSOR_MAX_RING_SIZE")
        self.ring = ring
        self._unit = cx.unit_complex(ring)
        self._tensors: dict = {}
        self._keep: list = []

    def __repr__(self):
        return f"DerivedContext({self.ring.name})"

    # ---- objects
    def unit(self) -> ChainComplex:
        return self._unit

    def zero(self) -> ChainComplex:
        return cx.zero_complex(self.ring)

    def tensor(self, A: ChainComplex, B: ChainComplex) -> ChainComplex:
        key = (id(A), id(B))
        T = self._tensors.get(key)
        if T is None:
            if not (is_degreewise_projective(A) or is_degreewise_projective(B)):
                raise UnsupportedBackend("derived tensor needs a degreewise projective factor")
            T = cx.tensor(A, B)
            self._tensors[key] = T
            self._keep.append((A, B))
        return T

    # ---- morphisms
    @staticmethod
    def source(f: ComplexMap) -> ChainComplex:
        return f.source.info.get("resolves", f.source)

    @staticmethod
    def target(f: ComplexMap) -> ChainComplex:
        return f.target

    def identity(self, A: ChainComplex) -> ComplexMap:
        return cx.identity_map(A)

    def compose(self, g: ComplexMap, f: ComplexMap) -> ComplexMap:
        if g.source is f.target or cx._same_shape(g.source, f.target):
            return g.compose(f)
        if g.source.info.get("resolves") is f.target:
            raise UnsupportedBackend("composition through a non-projective middle object")
        raise NotAMorphism("maps are not composable")

    def tensor_maps(self, f: ComplexMap, g: ComplexMap) -> ComplexMap:
        src = self.tensor(f.source, g.source)
        tgt = self.tensor(f.target, g.target)
        return cx.tensor_map(f, g, src, tgt)

    def left_unitor(self, A: ChainComplex) -> ComplexMap:
        return cx.left_unitor(self.tensor(self._unit, A))

    def right_unitor(self, A: ChainComplex) -> ComplexMap:
        return cx.right_unitor(self.tensor(A, self._unit))

    def symmetry(self, A: ChainComplex, B: ChainComplex) -> ComplexMap:
        return cx.symmetry(self.tensor(A, B), self.tensor(B, A))

    def associator(self, A, B, C) -> ComplexMap:
        return cx.associator(self.tensor(self.tensor(A, B), C), self.tensor(A, self.tensor(B, C)))

    def is_iso(self, f: ComplexMap) -> bool:
        low = f.source.info.get("truncated_at")
        return cx.is_quasi_iso(f, None if low is None else low + 1)

    # ---- hom sets
    def hom(self, E: ChainComplex, F: ChainComplex, low: int | None = None) -> DerivedHom:
        return DerivedHom(E, F, low)

    def homs(self, E: ChainComplex, targets) -> list[DerivedHom]:
        """Hom groups out of E sharing one resolution of E."""
        low = min(_hom_low(E, F) for F in targets)
        return [DerivedHom(E, F, low) for F in targets]

    def _hom_of(self, f: ComplexMap) -> DerivedHom:
        res = f.source.info.get("resolution")
        if res is not None:
            return DerivedHom(res.E, f.target, res=res)
        return DerivedHom(f.source, f.target)

    def equal(self, u: ComplexMap, v: ComplexMap) -> bool:
        if u.target is not v.target and not cx._same_shape(u.target, v.target):
            return False
        return self._hom_of(u).equal(u, v)

    def postcompose(self, H1: DerivedHom, phi: ComplexMap, H2: DerivedHom) -> tuple[int, int]:
        """(kernel size, image size) of [f] ↦ [phi ∘ f] from H1 to H2."""
        Mx = H1.postcompose_matrix(phi, H2)
        ker = group_map_kernel_size(Mx, H1.H.orders, H2.H.orders, self.ring.N)
        return ker, H1.size // ker

    def key(self, H: DerivedHom, f: ComplexMap):
        c = H.coords(f)
        return tuple(int(x) for x in (c % H.H.orders if c.size else c))


# ---------------------------------------------------------------- preordered sets

class _Arrow(tuple):
    """The unique arrow a → b of a thin category."""

    def __new__(cls, a, b):
        return super().__new__(cls, (a, b))

    @property
    def source(self):
        return self[0]

    @property
    def target(self):
        return self[1]


class _ThinHom:
    def __init__(self, a, b, present: bool):
        self.a, self.b = a, b
        self.size = 1 if present else 0

    def elements(self):
        if self.size:
            yield _Arrow(self.a, self.b)


class PreorderedContext:
    """A finite preordered set with meets and a top, as a monoidal category.

    There is one arrow a → b exactly when a ≤ b; tensor is the chosen meet,
    the unit is the top, and all diagrams commute.
    """

    has_homs = True

    def __init__(self, elements, leq_pairs, name: str = "P"):
        self.elements = list(elements)
        self.name = name
        idx = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        R = np.eye(n, dtype=bool)
        for a, b in leq_pairs:
            R[idx[a], idx[b]] = True
        for k in range(n):  # transitive closure
            R |= R[:, k:k + 1] & R[k:k + 1, :]
        self._idx, self._R = idx, R
        tops = [e for e in self.elements if all(self.le(x, e) for x in self.elements)]
        if not tops:
            raise NotASemilattice("no largest element")
        self._top = tops[0]
        self._meet = {}
        for a, b in itertools.product(self.elements, repeat=2):
            lower = [c for c in self.elements if self.le(c, a) and self.le(c, b)]
            glb = [c for c in lower if all(self.le(x, c) for x in lower)]
            if not glb:
                raise NotASemilattice(f"{a!r} and {b!r} have no greatest lower bound")
            self._meet[(a, b)] = glb[0]

    def __repr__(self):
        return f"PreorderedContext({self.name}, {len(self.elements)} objects)"

    def le(self, a, b) -> bool:
        return bool(self._R[self._idx[a], self._idx[b]])

    def _arrow(self, a, b) -> _Arrow:
        if not self.le(a, b):
            raise NotAMorphism(f"no arrow {a!r} → {b!r}")
        return _Arrow(a, b)

    def unit(self):
        return self._top

    def tensor(self, a, b):
        return self._meet[(a, b)]

    @staticmethod
    def source(f):
        return f.source

    @staticmethod
    def target(f):
        return f.target

    def identity(self, a):
        return _Arrow(a, a)

    def compose(self, g, f):
        if not (self.le(f.target, g.source) and self.le(g.source, f.target)):
            raise NotAMorphism("maps are not composable")
        return self._arrow(f.source, g.target)

    def tensor_maps(self, f, g):
        return self._arrow(self.tensor(f.source, g.source), self.tensor(f.target, g.target))

    def left_unitor(self, a):
        return self._arrow(self.tensor(self._top, a), a)

    def right_unitor(self, a):
        return self._arrow(self.tensor(a, self._top), a)

    def symmetry(self, a, b):
        return self._arrow(self.tensor(a, b), self.tensor(b, a))

    def associator(self, a, b, c):
        return self._arrow(self.tensor(self.tensor(a, b), c), self.tensor(a, self.tensor(b, c)))

    def is_iso(self, f) -> bool:
        return self.le(f.target, f.source)

    def equal(self, u, v) -> bool:
        same = lambda x, y: self.le(x, y) and self.le(y, x)
        return same(u.source, v.source) and same(u.target, v.target)

    def hom(self, a, b, low=None) -> _ThinHom:
        return _ThinHom(a, b, self.le(a, b))

    def homs(self, a, targets):
        return [self.hom(a, b) for b in targets]

    def postcompose(self, H1: _ThinHom, phi, H2: _ThinHom) -> tuple[int, int]:
        return (1, H1.size) if H1.size else (1, 0)

    def key(self, H, f):
        return (f.source, f.target)
