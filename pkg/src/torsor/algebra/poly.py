"""Sparse multivariate polynomials over Q or F_p, with a small text parser."""
from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property

from ..errors import InvalidInput, RingMismatch


class Field:
    """Coefficient field: ``p == 0`` means Q, otherwise F_p."""

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise InvalidInput(f"F{p}: not a prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "Q" if self.p == 0 else f"F{self.p}"

    def coerce(self, c):
        if self.p:
            if isinstance(c, Fraction):
                return (c.numerator * pow(c.denominator, -1, self.p)) % self.p
            return int(c) % self.p
        return Fraction(c)

    def inv(self, c):
        if self.p:
            return pow(int(c), -1, self.p)
        return 1 / Fraction(c)

    def norm(self, c):
        return c % self.p if self.p else c

    def fmt(self, c) -> str:
        if self.p:
            return str(int(c))
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _grevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class PolyRing:
    """k[x_1..x_n] with a monomial order.

    ``order`` is ``"grevlex"``, ``"lex"`` or ``("elim", k)``; the last one
    compares the first k variables by grevlex before the rest.
    """

    def __init__(self, variables, field: Field | None = None, order="grevlex"):
        self.vars = tuple(variables)
        for v in self.vars:
            if not re.fullmatch(r"[a-z][a-z0-9]*", v):
                raise InvalidInput(f"bad variable name {v!r}")
        if len(set(self.vars)) != len(self.vars):
            raise InvalidInput("repeated variable")
        self.field = field or Field(0)
        self.order = order
        self.nvars = len(self.vars)
        if order == "grevlex":
            self.key = _grevlex
        elif order == "lex":
            self.key = tuple
        elif isinstance(order, tuple) and order[0] == "elim":
            k = order[1]
            self.key = lambda e: (_grevlex(e[:k]), _grevlex(e[k:]))
        else:
            raise InvalidInput(f"unknown monomial order {order!r}")

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.vars == other.vars
                and self.field == other.field and self.order == other.order)

    def __hash__(self):
        return hash((self.vars, self.field, str(self.order)))

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.vars)}]"

    @property
    def spec(self) -> str:
        return repr(self)

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.vars, self.field, order)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field.coerce(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Poly":
        i = self.vars.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.coerce(1)})

    def gens(self):
        return [self.var(v) for v in self.vars]

    def monomial(self, e, c=1) -> "Poly":
        c = self.field.coerce(c)
        return Poly(self, {tuple(e): c} if c else {})

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()


def parse_ring(spec: str) -> PolyRing:
    m = re.fullmatch(r"\s*(Q|QQ|F(\d+)|GF\((\d+)\))\s*\[([^\]]*)\]\s*", spec)
    if not m:
        raise InvalidInput(f"not a polynomial ring description: {spec!r}")
    p = int(m.group(2) or m.group(3) or 0)
    names = [v.strip() for v in m.group(4).split(",") if v.strip()]
    return PolyRing(names, Field(p))


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "__dict__")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- structure
    @cached_property
    def sorted_terms(self):
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    @cached_property
    def lm(self):
        key = self.ring.key
        return max(self.terms, key=key)

    @property
    def lc(self):
        return self.terms[self.lm]

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def _check(self, other):
        if not isinstance(other, Poly):
            return self.ring.const(other)
        if other.ring.vars != self.ring.vars or other.ring.field != self.ring.field:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        return other

    # -- arithmetic
    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        f = self.ring.field
        for e, c in other.terms.items():
            v = f.norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {e: f.norm(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        f = self.ring.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.ring, {e: f.norm(c) for e, c in out.items() if f.norm(c)})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.coerce(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {e: f.norm(v * c) for e, v in self.terms.items()})

    def mul_term(self, e, c) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, {tuple(a + b for a, b in zip(m, e)): f.norm(v * c)
                                for m, v in self.terms.items()})

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        return self.ring.vars == other.ring.vars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def change_ring(self, ring: PolyRing, positions=None) -> "Poly":
        """Re-embed into ``ring``; ``positions[i]`` is the target index of variable i."""
        if positions is None:
            positions = [ring.vars.index(v) for v in self.ring.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, a in enumerate(e):
                if a:
                    ne[positions[i]] += a
            out[tuple(ne)] = ring.field.coerce(c)
        return Poly(ring, out)

    def substitute(self, images, target: PolyRing) -> "Poly":
        """Evaluate with variable i replaced by ``images[i]`` (polynomials in target)."""
        out = target.zero()
        for e, c in self.terms.items():
            t = target.const(c)
            for img, a in zip(images, e):
                if a:
                    t = t * img ** a
            out = out + t
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms):
            mono = "*".join(v if a == 1 else f"{v}^{a}" for v, a in zip(self.ring.vars, e) if a)
            if f.p:
                neg, mag = False, c
            else:
                neg, mag = c < 0, abs(c)
            if mono:
                body = mono if mag == 1 else f"{f.fmt(mag)}*{mono}"
            else:
                body = f.fmt(mag)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def _split_juxtaposed(word: str, names):
    """Read an unknown identifier such as ``xy`` as a product of ring variables."""
    if not word:
        return []
    for v in sorted(names, key=len, reverse=True):
        if word.startswith(v):
            rest = _split_juxtaposed(word[len(v):], names)
            if rest is not None:
                return [v] + rest
    return None


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|(.))")


class _Parser:
    """Recursive descent for sums of products of powers; '/' only between numbers."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.toks.append(("num", int(m.group(1))))
            elif m.group(2):
                self.toks.append(("var", m.group(2)))
            elif m.group(3) and not m.group(3).isspace():
                self.toks.append(("op", m.group(3)))
        self.i = 0

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def _take(self):
        t = self._peek()
        self.i += 1
        return t

    def fail(self, msg):
        raise InvalidInput(f"cannot parse {self.text!r}: {msg}")

    def parse(self) -> Poly:
        if not self.toks:
            self.fail("empty")
        p = self._sum()
        if self.i != len(self.toks):
            self.fail(f"unexpected {self._peek()[1]!r}")
        return p

    def _sum(self):
        sign = 1
        if self._peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self._take()[1] == "-" else 1
        acc = self._product().scale(sign)
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            t = self._product()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _product(self):
        acc = self._power()
        while self._peek() == ("op", "*"):
            self._take()
            acc = acc * self._power()
        return acc

    def _power(self):
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            kind, val = self._take()
            if kind != "num":
                self.fail("exponent must be a nonnegative integer")
            return base ** val
        return base

    def _atom(self):
        kind, val = self._take()
        if kind == "num":
            if self._peek() == ("op", "/"):
                self._take()
                k2, den = self._take()
                if k2 != "num" or den == 0:
                    self.fail("bad rational constant")
                if self.ring.field.p and den % self.ring.field.p == 0:
                    self.fail("denominator divisible by the characteristic")
                return self.ring.const(Fraction(val, den))
            return self.ring.const(val)
        if kind == "var":
            if val in self.ring.vars:
                return self.ring.var(val)
            split = _split_juxtaposed(val, self.ring.vars)
            if split is None:
                self.fail(f"unknown variable {val!r}")
            out = self.ring.one()
            for v in split:
                out = out * self.ring.var(v)
            return out
        if (kind, val) == ("op", "("):
            inner = self._sum()
            if self._take() != ("op", ")"):
                self.fail("missing ')'")
            return inner
        if (kind, val) == ("op", "-"):
            return -self._power()
        self.fail(f"unexpected {val!r}")
