"""Modules over polynomial rings: direct sums of cyclic modules S/K_i.

Submodules are split, i.e. of the form ⊕ L_i/K_i with ideals L_i ⊇ K_i.
That covers everything the torsion functor produces from such modules.
"""
from __future__ import annotations

import re

from ..errors import InvalidInput, UnsupportedBackend
from .ideals import Ideal, ideal_sum, intersection
from .poly import Poly, PolyRing


def _coerce(ring: PolyRing, c) -> Poly:
    if isinstance(c, str):
        return ring.parse(c)
    if isinstance(c, Poly):
        return c
    return ring.const(c)


class PolyModule:
    def __init__(self, ring: PolyRing, ideals):
        self.ring = ring
        self.ideals = tuple(i if isinstance(i, Ideal) else Ideal(ring, i) for i in ideals)

    @classmethod
    def from_relations(cls, ring: PolyRing, n: int, relations) -> "PolyModule":
        """Cokernel of a relation matrix given as a list of columns (length-n vectors)."""
        per = [[] for _ in range(n)]
        for col in relations:
            col = [_coerce(ring, c) for c in col]
            support = [i for i, c in enumerate(col) if c.terms]
            if len(support) > 1:
                raise UnsupportedBackend("only diagonal presentations are supported over polynomial rings")
            if support:
                per[support[0]].append(col[support[0]])
        return cls(ring, [Ideal(ring, g) for g in per])

    @property
    def rank(self) -> int:
        return len(self.ideals)

    def __repr__(self):
        return " ⊕ ".join(f"S/({', '.join(map(str, K.gens))})" for K in self.ideals) or "0"

    def whole(self) -> "PolySubmodule":
        return PolySubmodule(self, [Ideal(self.ring, [self.ring.one()]) for _ in self.ideals])

    def zero(self) -> "PolySubmodule":
        return PolySubmodule(self, list(self.ideals))

    def direct_sum(self, other: "PolyModule") -> "PolyModule":
        return PolyModule(self.ring, self.ideals + other.ideals)

    def submodule(self, vectors) -> "PolySubmodule":
        """Submodule generated by element vectors, each supported on one summand."""
        per = [list(K.gens) for K in self.ideals]
        for v in vectors:
            v = [_coerce(self.ring, c) for c in v]
            support = [i for i, c in enumerate(v) if c.terms and not self.ideals[i].contains(c)]
            if len(support) > 1:
                raise UnsupportedBackend("non-split submodules of direct sums are not supported")
            for i in support:
                per[i].append(v[i])
        return PolySubmodule(self, [Ideal(self.ring, g) for g in per])

    def is_zero(self) -> bool:
        return all(K.is_unit() for K in self.ideals)


class PolySubmodule:
    """⊕ L_i/K_i inside ⊕ S/K_i; the L_i always contain the K_i."""

    def __init__(self, ambient: PolyModule, ideals):
        self.ambient = ambient
        ls = []
        for L, K in zip(ideals, ambient.ideals):
            L = L if isinstance(L, Ideal) else Ideal(ambient.ring, L)
            if not L.contains(K):
                L = ideal_sum(L, K)
            ls.append(L)
        self.ideals = tuple(ls)

    def contains(self, v) -> bool:
        if isinstance(v, PolySubmodule):
            return v.issubset(self)
        return all(L.contains(c) for L, c in zip(self.ideals, v))

    def issubset(self, other: "PolySubmodule") -> bool:
        return all(B.contains(A) for A, B in zip(self.ideals, other.ideals))

    def __eq__(self, other):
        if not isinstance(other, PolySubmodule):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return hash(len(self.ideals))

    def intersect(self, other: "PolySubmodule") -> "PolySubmodule":
        return PolySubmodule(self.ambient, [intersection(A, B) for A, B in zip(self.ideals, other.ideals)])

    def __add__(self, other: "PolySubmodule") -> "PolySubmodule":
        return PolySubmodule(self.ambient, [ideal_sum(A, B) for A, B in zip(self.ideals, other.ideals)])

    def generators(self) -> list[list[str]]:
        """Per summand, the nonzero normal forms of the reduced basis of L_i modulo K_i."""
        out = []
        for L, K in zip(self.ideals, self.ambient.ideals):
            gens = []
            for g in L.gb:
                r = K.normal_form(g)
                if r.terms:
                    gens.append(str(r))
            out.append(gens)
        return out

    def is_zero(self) -> bool:
        return all(K.contains(L) for L, K in zip(self.ideals, self.ambient.ideals))

    def __repr__(self):
        return f"PolySubmodule({self.generators()})"


def parse_poly_module(ring: PolyRing, text: str) -> PolyModule:
    """``self`` | ``free n`` | ``quot f, g`` with summands separated by ';'."""
    ideals = []
    for part in text.split(";"):
        part = part.strip()
        if part in ("self", "S"):
            ideals.append(Ideal(ring, []))
            continue
        m = re.fullmatch(r"free\s+(\d+)", part)
        if m:
            ideals.extend(Ideal(ring, []) for _ in range(int(m.group(1))))
            continue
        m = re.fullmatch(r"quot\s+(.+)", part)
        if m:
            gens = [ring.parse(g) for g in m.group(1).split(",")]
            ideals.append(Ideal(ring, gens))
            continue
        raise InvalidInput(f"cannot parse module {part!r}")
    return PolyModule(ring, ideals)
