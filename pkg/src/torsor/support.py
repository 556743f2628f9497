"""Stable sets, systems of supports and bases over the two Spec models.

``FiniteSpec`` lists the (maximal) primes of a finite ring explicitly, so
every subset is specialization-stable.  ``SymbolicSpec`` describes Spec of a
polynomial ring; its closed sets are carried by ideals and never enumerated.
"""
from __future__ import annotations

import itertools

import numpy as np

from .algebra.finite_ring import FiniteIdeal, FiniteRing, RingMap, finite_ring_build
from .algebra.ideals import Ideal, ideal_product, ideal_sum, radical_contains
from .algebra.modules import FiniteModule, localize_finite
from .algebra.poly import Poly, PolyRing, parse_ring
from .algebra.polymodule import PolyModule
from .errors import InvalidInput, RingMismatch, UnsupportedBackend


class FiniteSpec:
    def __init__(self, ring: FiniteRing):
        self.ring = ring

    @property
    def primes(self) -> list[FiniteIdeal]:
        return self.ring.primes

    @property
    def n(self) -> int:
        return len(self.ring.primes)

    def __eq__(self, other):
        return isinstance(other, FiniteSpec) and other.ring == self.ring

    def __hash__(self):
        return hash(self.ring)

    def all_stable_sets(self) -> list["StableSet"]:
        out = []
        for r in range(self.n + 1):
            for combo in itertools.combinations(range(self.n), r):
                out.append(StableSet(self, frozenset(combo)))
        return out

    def full(self) -> "StableSet":
        return StableSet(self, frozenset(range(self.n)))

    def empty(self) -> "StableSet":
        return StableSet(self, frozenset())

    def spec(self) -> str:
        return self.ring.name


class SymbolicSpec:
    def __init__(self, ring: PolyRing):
        self.ring = ring

    def __eq__(self, other):
        return isinstance(other, SymbolicSpec) and other.ring == self.ring

    def __hash__(self):
        return hash(self.ring)

    def full(self) -> "StableSet":
        return StableSet(self, Ideal(self.ring, []))

    def empty(self) -> "StableSet":
        return StableSet(self, Ideal(self.ring, [self.ring.one()]))

    def spec(self) -> str:
        return self.ring.spec


def spec_of(ring) -> FiniteSpec | SymbolicSpec:
    return FiniteSpec(ring) if isinstance(ring, FiniteRing) else SymbolicSpec(ring)


# ---------------------------------------------------------------- finite radical containment

def finite_radical_contains(I: FiniteIdeal, J: FiniteIdeal) -> bool:
    """√J ⊇ I on a finite ring: every element of I has a power in J."""
    R = I.ring
    mt = R.mul_table
    for x in I.elements:
        y, seen = x, set()
        while y not in seen:
            if J.mask[y]:
                break
            seen.add(y)
            y = int(mt[y, x])
        else:
            return False
    return True


def _radical_contains(I, J) -> bool:
    if isinstance(I, FiniteIdeal):
        return finite_radical_contains(I, J)
    return radical_contains(I, J)


# ---------------------------------------------------------------- the three formalisms

class StableSet:
    """Finite model: a frozenset of prime indices.  Symbolic model: Z(P) for an ideal P."""

    def __init__(self, model, data):
        self.model = model
        if isinstance(model, FiniteSpec):
            data = frozenset(int(i) for i in data)
            if any(i < 0 or i >= model.n for i in data):
                raise InvalidInput("prime index out of range")
        elif not isinstance(data, Ideal):
            raise InvalidInput("symbolic stable sets are given by an ideal")
        self.data = data

    @property
    def finite(self) -> bool:
        return isinstance(self.model, FiniteSpec)

    def __eq__(self, other):
        if not isinstance(other, StableSet) or other.model != self.model:
            return False
        if self.finite:
            return self.data == other.data
        return _radical_contains(self.data, other.data) and _radical_contains(other.data, self.data)

    def __hash__(self):
        return hash(self.data) if self.finite else hash(self.model)

    def __le__(self, other: "StableSet") -> bool:
        if self.finite:
            return self.data <= other.data
        # Z(P) ⊆ Z(Q) iff √P ⊇ Q
        return _radical_contains(other.data, self.data)

    def __and__(self, other: "StableSet") -> "StableSet":
        if self.finite:
            return StableSet(self.model, self.data & other.data)
        return StableSet(self.model, ideal_sum(self.data, other.data))

    def __or__(self, other: "StableSet") -> "StableSet":
        if self.finite:
            return StableSet(self.model, self.data | other.data)
        return StableSet(self.model, ideal_product(self.data, other.data))

    def representative(self):
        """An ideal with zero set equal to this set."""
        if not self.finite:
            return self.data
        R = self.model.ring
        out = FiniteIdeal(R, [R.one])
        for i in sorted(self.data):
            out = out * R.primes[i]
        return out

    def contains_prime(self, i: int) -> bool:
        return i in self.data

    def to_json(self):
        if self.finite:
            R = self.model.ring
            return {"model": R.name, "kind": "primes",
                    "data": [R.prime_label(i) for i in sorted(self.data)]}
        return {"model": self.model.spec(), "kind": "ideal", "data": [str(g) for g in self.data.gens]}

    def __repr__(self):
        if self.finite:
            R = self.model.ring
            return "{" + ", ".join(R.prime_label(i) for i in sorted(self.data)) + "}"
        return f"Z({', '.join(map(str, self.data.gens))})"


def stable_set_from_json(obj) -> StableSet:
    if not isinstance(obj, dict) or not {"model", "kind", "data"} <= set(obj):
        raise InvalidInput("stable set JSON needs model, kind and data")
    kind = obj["kind"]
    if kind == "primes":
        R = finite_ring_build(obj["model"])
        return stable_set_from_labels(FiniteSpec(R), obj["data"])
    if kind == "ideal":
        ring = parse_ring(obj["model"])
        return StableSet(SymbolicSpec(ring), Ideal(ring, [ring.parse(g) for g in obj["data"]]))
    raise InvalidInput(f"unknown stable-set kind {kind!r}")


def stable_set_from_labels(model: FiniteSpec, labels) -> StableSet:
    R = model.ring
    idx = []
    for lab in labels:
        lab = str(lab).strip()
        found = None
        for i in range(model.n):
            if R.prime_label(i) == lab or R.prime_label(i) == f"({lab})":
                found = i
        if found is None:
            # allow any generator of the prime, e.g. "2" for (2)
            try:
                x = R.parse_element(lab.strip("()"))
            except InvalidInput:
                x = None
            if x is not None:
                gen = FiniteIdeal(R, [x])
                for i, p in enumerate(R.primes):
                    if p == gen:
                        found = i
        if found is None:
            raise InvalidInput(f"{lab!r} is not a prime of {R.name}")
        idx.append(found)
    return StableSet(model, frozenset(idx))


class SupportBase:
    """𝓘 = {J : √J ⊇ P} for a single representing ideal P."""

    def __init__(self, model, ideal):
        self.model = model
        self.ideal = ideal

    def contains(self, J) -> bool:
        return _radical_contains(self.ideal, J)

    def __eq__(self, other):
        return (isinstance(other, SupportBase) and other.model == self.model
                and _radical_contains(self.ideal, other.ideal) and _radical_contains(other.ideal, self.ideal))

    def __hash__(self):
        return hash(self.model)

    def __le__(self, other: "SupportBase") -> bool:
        # 𝓘 ⊆ 𝓙 iff P ∈ 𝓙 iff √P ⊇ Q
        return _radical_contains(other.ideal, self.ideal)

    def __repr__(self):
        return f"SupportBase({self.ideal!r})"


class SupportSystem:
    """Φ generated by an antichain of closed sets Z(I_1), ..., Z(I_k)."""

    def __init__(self, model, members):
        self.model = model
        if isinstance(model, FiniteSpec):
            union = frozenset().union(*[frozenset(m) for m in members]) if members else frozenset()
            self.members = [union] if union else [frozenset()]
        else:
            self.members = _antichain(list(members))

    @property
    def stable_set(self) -> StableSet:
        if isinstance(self.model, FiniteSpec):
            return StableSet(self.model, self.members[0])
        P = Ideal(self.model.ring, [self.model.ring.one()])
        for I in self.members:
            P = ideal_product(P, I)
        return StableSet(self.model, P)

    def contains_closed(self, J) -> bool:
        """Is Z(J) a member of Φ?"""
        if isinstance(self.model, FiniteSpec):
            return self.model.ring.zero_set(J) <= self.members[0]
        return radical_contains(self.stable_set.data, J)

    def __eq__(self, other):
        return isinstance(other, SupportSystem) and self.stable_set == other.stable_set

    def __hash__(self):
        return hash(self.model)

    def __le__(self, other: "SupportSystem") -> bool:
        return self.stable_set <= other.stable_set

    def __repr__(self):
        return f"SupportSystem({self.stable_set!r})"


def _antichain(ideals: list[Ideal]) -> list[Ideal]:
    """Drop members whose closed set lies inside another member's."""
    if not ideals:
        return []
    keep: list[Ideal] = []
    for i, I in enumerate(ideals):
        redundant = False
        for j, J in enumerate(ideals):
            if i == j:
                continue
            inside = radical_contains(J, I)  # Z(I) ⊆ Z(J)
            if inside:
                same = radical_contains(I, J)
                if not same or j < i:
                    redundant = True
                    break
        if not redundant:
            keep.append(I)
    return keep


# ---------------------------------------------------------------- conversions

def base_to_sos(base: SupportBase) -> SupportSystem:
    if isinstance(base.model, FiniteSpec):
        return SupportSystem(base.model, [base.model.ring.zero_set(base.ideal)])
    return SupportSystem(base.model, [base.ideal])


def sos_to_base(phi: SupportSystem) -> SupportBase:
    return SupportBase(phi.model, phi.stable_set.representative())


def stable_set_of(x) -> StableSet:
    if isinstance(x, SupportSystem):
        return x.stable_set
    if isinstance(x, SupportBase):
        return base_to_sos(x).stable_set
    if isinstance(x, StableSet):
        return x
    raise InvalidInput("expected a support system or base")


def from_stable_set(Z: StableSet) -> SupportSystem:
    if Z.finite:
        return SupportSystem(Z.model, [Z.data])
    return SupportSystem(Z.model, [Z.data])


def base_of(Z: StableSet) -> SupportBase:
    return SupportBase(Z.model, Z.representative())


def finitary(x) -> bool:
    """Bases and systems of supports on an affine noetherian scheme are always finitary."""
    return True


def meet(a, b):
    if a.model != b.model:
        raise RingMismatch("meet of supports on different spaces")
    if isinstance(a, SupportBase):
        if isinstance(a.model, FiniteSpec):
            return SupportBase(a.model, a.ideal + b.ideal)
        return SupportBase(a.model, ideal_sum(a.ideal, b.ideal))
    if isinstance(a, SupportSystem):
        return from_stable_set(a.stable_set & b.stable_set)
    if isinstance(a, StableSet):
        return a & b
    raise InvalidInput("meet expects bases, systems of supports or stable sets")


class PolyMap:
    """Substitution homomorphism k[x] → k[y] given by the images of the variables."""

    def __init__(self, source: PolyRing, target: PolyRing, images):
        if len(images) != source.nvars:
            raise InvalidInput("need one image per source variable")
        if source.field != target.field:
            raise RingMismatch("ring maps must preserve the coefficient field")
        self.source, self.target = source, target
        self.images = [target.parse(g) if isinstance(g, str) else g for g in images]

    def __call__(self, f: Poly) -> Poly:
        return f.substitute(self.images, self.target)

    def extend(self, I: Ideal) -> Ideal:
        return Ideal(self.target, [self(g) for g in I.gens])

    def compose(self, other: "PolyMap") -> "PolyMap":
        """self ∘ other."""
        return PolyMap(other.source, self.target, [self(g) for g in other.images])


def inverse_image(psi, x):
    """Pull a base or system of supports back along ψ (extension of ideals / preimage of primes)."""
    tgt_model = spec_of(psi.target)
    if isinstance(x, SupportBase):
        return SupportBase(tgt_model, psi.extend(x.ideal))
    if isinstance(x, SupportSystem):
        if isinstance(psi, RingMap):
            Y = x.stable_set.data
            T = psi.target
            data = [q for q in range(len(T.primes)) if psi.prime_preimage(q) in Y]
            return SupportSystem(tgt_model, [frozenset(data)])
        return SupportSystem(tgt_model, [psi.extend(I) for I in x.members])
    if isinstance(x, StableSet):
        return inverse_image(psi, from_stable_set(x)).stable_set
    raise InvalidInput("inverse_image expects a base or a system of supports")


# ---------------------------------------------------------------- supports of modules

def support_module(M) -> StableSet:
    """Supp(M): localise at each listed prime (finite) or Z(∏ K_i) for ⊕ S/K_i."""
    if isinstance(M, FiniteModule):
        R = M.ring
        model = FiniteSpec(R)
        return StableSet(model, frozenset(i for i, e in enumerate(R.local_idempotents)
                                          if localize_finite(M, e).module.k))
    if isinstance(M, PolyModule):
        P = Ideal(M.ring, [M.ring.one()])
        for K in M.ideals:
            P = ideal_product(P, K)
        return StableSet(SymbolicSpec(M.ring), P)
    if hasattr(M, "homology_module"):
        from .homotopy.complexes import complex_support
        return complex_support(M)
    raise UnsupportedBackend("support is available for finite modules and sums of cyclic modules")


def annihilator_ideal(M: FiniteModule) -> FiniteIdeal:
    R = M.ring
    mask = np.zeros(R.size, dtype=bool)
    for x in range(R.size):
        mask[x] = not np.any(M.action(x)) if M.k else True
    return FiniteIdeal.from_mask(R, mask)

