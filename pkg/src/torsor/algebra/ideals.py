"""Ideals of polynomial rings and the ideal operations built on Gröbner bases."""
from __future__ import annotations

import threading

from ..errors import InvalidInput, RingMismatch, UnsupportedBackend
from . import groebner as gb
from .poly import Poly, PolyRing


class Ideal:
    """An ideal given by generators; the reduced Gröbner basis is cached on first use."""

    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        gs = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Poly):
                g = ring.const(g)
            if g.ring.vars != ring.vars or g.ring.field != ring.field:
                raise RingMismatch(f"generator in {g.ring!r}, ideal in {ring!r}")
            if g.ring != ring:
                g = Poly(ring, g.terms)
            gs.append(g)
        self.gens = tuple(gs)
        self._gb = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({self.ring!r}, [{', '.join(map(str, self.gens))}])"

    @property
    def gb(self):
        if self._gb is None:
            basis = gb.buchberger(self.gens, self.ring)
            with self._lock:
                if self._gb is None:
                    self._gb = tuple(basis)
        return self._gb

    def normal_form(self, f: Poly) -> Poly:
        return normal_form(f, self)

    def contains(self, f) -> bool:
        if isinstance(f, Ideal):
            return all(self.contains(g) for g in f.gens)
        return not normal_form(f, self).terms

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb == other.gb

    def __hash__(self):
        return hash((self.ring, self.gb))

    def is_unit(self) -> bool:
        return len(self.gb) == 1 and self.gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gb

    def to_json(self):
        return {"ring": self.ring.spec, "gens": [str(g) for g in self.gens]}

    @classmethod
    def from_json(cls, data) -> "Ideal":
        from .poly import parse_ring
        if not isinstance(data, dict) or "ring" not in data or "gens" not in data:
            raise InvalidInput("ideal JSON needs 'ring' and 'gens'")
        ring = parse_ring(data["ring"])
        return cls(ring, [ring.parse(s) for s in data["gens"]])


def groebner(I) -> Ideal:
    """Return ``I`` with its reduced Gröbner basis cached."""
    if not isinstance(I, Ideal):
        raise UnsupportedBackend("Gröbner bases exist only for polynomial ideals")
    I.gb  # noqa: B018
    return I


def normal_form(f: Poly, I: Ideal) -> Poly:
    if f.ring.vars != I.ring.vars or f.ring.field != I.ring.field:
        raise RingMismatch(f"{f.ring!r} vs {I.ring!r}")
    if f.ring != I.ring:
        f = Poly(I.ring, f.terms)
    return gb.reduce(f, I.gb)


def _same(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring!r} vs {J.ring!r}")


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    return Ideal(I.ring, I.gens + J.gens)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    return Ideal(I.ring, [f * g for f in I.gens for g in J.gens])


def intersection(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J = (tI + (1-t)J) ∩ k[x], eliminating the fresh variable t."""
    _same(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    t = "t0"
    while t in ring.vars:
        t = t + "0"
    big = PolyRing((t,) + ring.vars, ring.field, ("elim", 1))
    pos = list(range(1, ring.nvars + 1))
    tv = big.var(t)
    gens = [tv * g.change_ring(big, pos) for g in I.gens]
    gens += [(big.one() - tv) * g.change_ring(big, pos) for g in J.gens]
    basis = gb.buchberger(gens, big)
    keep = []
    for g in basis:
        if all(e[0] == 0 for e in g.terms):
            keep.append(Poly(ring, {e[1:]: c for e, c in g.terms.items()}))
    return Ideal(ring, keep)


def exact_divide(h: Poly, g: Poly) -> Poly:
    """h / g assuming g divides h."""
    ring = h.ring
    fld = ring.field
    q = ring.zero()
    r = h
    while r.terms:
        lm, glm = r.lm, g.lm
        shift = tuple(a - b for a, b in zip(lm, glm))
        if min(shift) < 0:
            raise ValueError("not divisible")
        c = fld.norm(r.lc * fld.inv(g.lc))
        q = q + ring.monomial(shift, c)
        r = r - g.mul_term(shift, c)
    return q


def quotient(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) = ∩_g (I ∩ (g)) / g over the generators g of J."""
    _same(I, J)
    ring = I.ring
    gens = [g for g in J.gens if g.terms]
    if not gens:
        return Ideal(ring, [ring.one()])
    out = None
    for g in gens:
        inter = intersection(I, Ideal(ring, [g]))
        Q = Ideal(ring, [exact_divide(h, g) for h in inter.gb])
        out = Q if out is None else intersection(out, Q)
    return out


def saturation(I: Ideal, J: Ideal, cap: int = 64) -> Ideal:
    """(I : J^∞) by iterating quotients until two consecutive steps agree."""
    cur = I
    for _ in range(cap):
        nxt = quotient(cur, J)
        if nxt == cur:
            return cur
        cur = nxt
    from ..errors import StabilizationCapExceeded
    raise StabilizationCapExceeded(f"saturation did not stabilise in {cap} steps")


def ideal_op(kind: str, I: Ideal, J: Ideal) -> Ideal:
    ops = {
        "sum": ideal_sum,
        "product": ideal_product,
        "intersection": intersection,
        "quotient": quotient,
        "saturation": saturation,
    }
    if kind not in ops:
        raise InvalidInput(f"unknown ideal operation {kind!r}")
    return ops[kind](I, J)


def radical_contains(I: Ideal, J: Ideal) -> bool:
    """Decide √J ⊇ I: each generator g of I has (J : g^∞) = (1)."""
    _same(I, J)
    for g in I.gens:
        if not g.terms:
            continue
        if not saturation(J, Ideal(J.ring, [g])).is_unit():
            return False
    return True


def same_radical(I: Ideal, J: Ideal) -> bool:
    return radical_contains(I, J) and radical_contains(J, I)


def is_monomial_ideal(I: Ideal) -> bool:
    return all(len(g.terms) <= 1 for g in I.gens)
