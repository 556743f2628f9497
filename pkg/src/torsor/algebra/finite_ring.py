"""Explicit finite commutative rings.

A ring is stored through an additive basis ``b_0..b_{g-1}`` with cyclic
orders and structure constants ``struct[i, j] = coords(b_i * b_j)``.  Elements
are indexed in mixed radix (coordinate 0 is least significant), so for Z/n
the index of an element is its usual residue.
"""
from __future__ import annotations

import itertools
import re
from functools import cached_property

import numpy as np

from .. import _config
from ..errors import InvalidInput, NotAHomomorphism, NotARing, TooLarge
from ..kernels import check_ring_tables, lcm_list
from .poly import Field, PolyRing, _is_prime


class FiniteRing:
    def __init__(self, name: str, orders, struct, one, labels=None, check=True):
        self.name = name
        self.orders = np.asarray(orders, dtype=np.int64)
        self.g = self.orders.size
        self.struct = np.asarray(struct, dtype=np.int64).reshape(self.g, self.g, self.g)
        self.one_coords = np.asarray(one, dtype=np.int64) % self.orders
        self.size = int(np.prod(self.orders)) if self.g else 1
        if self.size > _config.max_ring_size():
            raise TooLarge(f"{name}: {self.size} elements exceeds bound {_config.max_ring_size()}")
        if self.size <= 1:
            raise NotARing(f"{name}: relations collapse the ring to zero")
        self.N = lcm_list(self.orders)
        self.strides = np.cumprod(np.concatenate([[1], self.orders[:-1]])).astype(np.int64)
        self._labels = labels
        if check:
            self.verify()

    def __repr__(self):
        return f"FiniteRing({self.name})"

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and other.name == self.name and other.size == self.size

    def __hash__(self):
        return hash((self.name, self.size))

    # -- element encoding
    @cached_property
    def elem_coords(self) -> np.ndarray:
        idx = np.arange(self.size, dtype=np.int64)
        return (idx[:, None] // self.strides[None, :]) % self.orders[None, :]

    def index(self, coords) -> int:
        c = np.asarray(coords, dtype=np.int64) % self.orders
        return int(c @ self.strides)

    def indices(self, C) -> np.ndarray:
        """Element indices of the coordinate columns of C (shape (g, m))."""
        C = np.asarray(C, dtype=np.int64).reshape(self.g, -1) % self.orders[:, None]
        return self.strides @ C

    def coords(self, x: int) -> np.ndarray:
        return self.elem_coords[int(x)]

    @property
    def zero(self) -> int:
        return 0

    @cached_property
    def one(self) -> int:
        return self.index(self.one_coords)

    def label(self, x: int) -> str:
        if self._labels is not None:
            return self._labels(self, int(x))
        return "(" + ",".join(str(int(v)) for v in self.coords(x)) + ")"

    def parse_element(self, text) -> int:
        text = str(text).strip()
        for x in range(self.size):
            if self.label(x) == text:
                return x
        if re.fullmatch(r"-?\d+", text):
            return self.from_int(int(text))
        raise InvalidInput(f"{text!r} is not an element of {self.name}")

    def from_int(self, k: int) -> int:
        return self.index((k % self.N) * self.one_coords)

    # -- arithmetic via structure constants
    def mul_matrix(self, x: int) -> np.ndarray:
        """Matrix of y ↦ x*y on coordinates."""
        c = self.coords(x)
        return np.tensordot(c, self.struct, axes=(0, 0)).T % self.orders[:, None]

    @cached_property
    def basis_mul(self) -> np.ndarray:
        """Stack of multiplication matrices of the basis elements, shape (g, g, g)."""
        return np.stack([self.struct[j].T % self.orders[:, None] for j in range(self.g)])

    def add(self, x: int, y: int) -> int:
        return self.index(self.coords(x) + self.coords(y))

    def neg(self, x: int) -> int:
        return self.index(-self.coords(x))

    def mul(self, x: int, y: int) -> int:
        return self.index(self.mul_matrix(x) @ self.coords(y))

    def power(self, x: int, k: int) -> int:
        out = self.one
        for _ in range(k):
            out = self.mul(out, x)
        return out

    @cached_property
    def add_table(self) -> np.ndarray:
        C = self.elem_coords
        S = (C[:, None, :] + C[None, :, :]) % self.orders
        return (S @ self.strides).astype(np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        C = self.elem_coords
        # coords(x*y)_k = sum_ij x_i y_j struct[i, j, k]
        T = np.einsum("ai,ijk->ajk", C, self.struct)
        out = np.empty((self.size, self.size), dtype=np.int32)
        for a in range(self.size):
            prod = (C @ T[a]) % self.orders
            out[a] = prod @ self.strides
        return out

    def verify(self):
        """Check the ring axioms on the tables: exhaustively up to a size limit, sampled above."""
        add, mul = self.add_table, self.mul_table
        n = self.size
        if n <= _config.EXHAUSTIVE_AXIOM_LIMIT:
            bad = check_ring_tables(add, mul)
        else:
            rng = np.random.default_rng(_config.seed())
            triples = rng.integers(0, n, size=(20000, 3))
            bad = check_ring_tables(add, mul, triples)
        if bad != -1:
            raise NotARing(f"{self.name}: ring axioms fail")
        if not np.array_equal(mul[self.one], np.arange(n)):
            raise NotARing(f"{self.name}: 1 is not a multiplicative identity")

    # -- idempotents and primes
    @cached_property
    def units(self) -> np.ndarray:
        return np.any(self.mul_table == self.one, axis=1)

    @cached_property
    def idempotents(self) -> list[int]:
        mt = self.mul_table
        return [int(e) for e in range(self.size) if mt[e, e] == e]

    @cached_property
    def local_idempotents(self) -> list[int]:
        """Primitive idempotents, sorted by index."""
        mt = self.mul_table
        nonzero = [e for e in self.idempotents if e != 0]
        prim = [e for e in nonzero if not any(f != e and mt[e, f] == f for f in nonzero)]
        total = 0
        for e in prim:
            total = self.add(total, e)
        if total != self.one:
            raise NotARing(f"{self.name}: primitive idempotents do not sum to 1")
        for a, b in itertools.combinations(prim, 2):
            if mt[a, b] != 0:
                raise NotARing(f"{self.name}: primitive idempotents not orthogonal")
        return sorted(prim)

    @cached_property
    def primes(self) -> list["FiniteIdeal"]:
        """The maximal ideals, one per local idempotent, in the same order."""
        mt, at = self.mul_table, self.add_table
        out = []
        units = self.units
        for e in self.local_idempotents:
            comp = self.add(self.one, self.neg(e))
            ex = mt[e]  # e*x for all x
            mask = ~units[at[ex, comp]]
            p = FiniteIdeal.from_mask(self, mask)
            out.append(p)
        for p in out:
            p.check_maximal()
        return out

    def prime_of_idempotent(self, e: int) -> int:
        return self.local_idempotents.index(e)

    def zero_set(self, ideal: "FiniteIdeal") -> frozenset:
        """Indices of the primes containing the ideal."""
        return frozenset(i for i, p in enumerate(self.primes) if ideal.issubset(p))

    def idempotent_of(self, primes) -> int:
        """Sum of the local idempotents for the given prime indices."""
        e = 0
        for i in primes:
            e = self.add(e, self.local_idempotents[i])
        return e

    def ideal(self, gens) -> "FiniteIdeal":
        return FiniteIdeal(self, [self.parse_element(g) if isinstance(g, str) else int(g) for g in gens])

    def prime_label(self, i: int) -> str:
        return repr(self.primes[i])


class FiniteIdeal:
    """An ideal of a FiniteRing, stored as a boolean membership mask."""

    def __init__(self, ring: FiniteRing, gens):
        self.ring = ring
        gens = [int(x) for x in gens]
        mask = np.zeros(ring.size, dtype=bool)
        mask[0] = True
        mt, at = ring.mul_table, ring.add_table
        # additive closure of all multiples
        mults = np.unique(mt[gens].ravel()) if gens else np.zeros(0, dtype=np.int64)
        frontier = np.array([0])
        while frontier.size and mults.size:
            cand = np.unique(at[np.ix_(frontier, mults)].ravel())
            frontier = cand[~mask[cand]]
            mask[frontier] = True
        self.mask = mask
        self.gens = tuple(gens)

    @classmethod
    def from_mask(cls, ring: FiniteRing, mask) -> "FiniteIdeal":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.mask = np.asarray(mask, dtype=bool)
        obj.gens = tuple(obj.canonical_gens)
        full = cls(ring, obj.gens)
        if not np.array_equal(full.mask, obj.mask):
            raise NotARing(f"{ring.name}: subset is not an ideal")
        return obj

    @cached_property
    def elements(self) -> list[int]:
        return [int(x) for x in np.flatnonzero(self.mask)]

    @cached_property
    def canonical_gens(self) -> list[int]:
        """Greedy generating set scanning elements in index order."""
        cur = FiniteIdeal(self.ring, [])
        out = []
        for x in self.elements:
            if not cur.mask[x]:
                out.append(x)
                cur = FiniteIdeal(self.ring, out)
                if np.array_equal(cur.mask, self.mask):
                    break
        return out

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def issubset(self, other: "FiniteIdeal") -> bool:
        return not np.any(self.mask & ~other.mask)

    def __eq__(self, other):
        return isinstance(other, FiniteIdeal) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.mask.tobytes())

    def __add__(self, other: "FiniteIdeal") -> "FiniteIdeal":
        return FiniteIdeal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "FiniteIdeal") -> "FiniteIdeal":
        mt = self.ring.mul_table
        return FiniteIdeal(self.ring, [int(mt[a, b]) for a in self.gens for b in other.gens])

    def power(self, t: int) -> "FiniteIdeal":
        out = FiniteIdeal(self.ring, [self.ring.one])
        for _ in range(t):
            out = out * self
        return out

    def is_unit(self) -> bool:
        return bool(self.mask[self.ring.one])

    def is_zero(self) -> bool:
        return int(self.mask.sum()) == 1

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def check_maximal(self):
        """The quotient is a field: every element outside is invertible modulo the ideal."""
        R = self.ring
        if self.is_unit():
            raise NotARing("a listed prime is the unit ideal")
        mt, at = R.mul_table, R.add_table
        neg_one = R.neg(R.one)
        for x in np.flatnonzero(~self.mask):
            # x*y - 1 in ideal for some y
            if not np.any(self.mask[at[mt[x], neg_one]]):
                raise NotARing(f"{R.name}: ideal {self} is not maximal")

    def __repr__(self):
        gens = self.canonical_gens
        if not gens:
            return "(0)"
        return "(" + ",".join(self.ring.label(x) for x in gens) + ")"


# ---------------------------------------------------------------- building

def _poly_label_factory(var: str):
    def label(ring: FiniteRing, x: int) -> str:
        c = ring.coords(x)
        parts = []
        for i in range(len(c) - 1, -1, -1):
            a = int(c[i])
            if a == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                parts.append(str(a))
            elif a == 1:
                parts.append(mono)
            else:
                parts.append(f"{a}*{mono}")
        return " + ".join(parts) if parts else "0"
    return label


def _int_label(ring: FiniteRing, x: int) -> str:
    return str(int(ring.coords(x)[0]))


def zmod(n: int) -> FiniteRing:
    if n < 2:
        raise NotARing(f"Z/{n} is the zero ring")
    return FiniteRing(f"Z/{n}", [n], [[[1]]], [1], labels=_int_label)


def _poly_quotient(p: int, coeffs, name: str, var: str = "x") -> FiniteRing:
    """F_p[x]/(f) with f given by coefficients (constant term first)."""
    coeffs = [c % p for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise InvalidInput(f"{name}: quotient by zero is infinite")
    d = len(coeffs) - 1
    if d == 0:
        raise NotARing(f"{name}: quotient by a unit is the zero ring")
    inv = pow(coeffs[-1], -1, p)
    f = [(c * inv) % p for c in coeffs]
    # x^k mod f for k < 2d-1
    red = []
    cur = [1] + [0] * (d - 1)
    for _ in range(2 * d - 1):
        red.append(list(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        for i in range(d):
            cur[i] = (cur[i] - top * f[i]) % p
    struct = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            struct[i, j] = red[i + j]
    one = [1] + [0] * (d - 1)
    labels = _int_label if d == 1 else _poly_label_factory(var)
    return FiniteRing(name, [p] * d, struct, one, labels=labels)


def _irreducible(p: int, k: int):
    """Smallest monic irreducible of degree k over F_p (coefficients low to high)."""
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        if _irreducible_check(p, f):
            return f
    raise InvalidInput(f"no irreducible of degree {k} over F{p}")


def _irreducible_check(p, f) -> bool:
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if _poly_divides(p, g, f):
                return False
    return True


def _poly_divides(p, g, f) -> bool:
    r = list(f)
    dg = len(g) - 1
    while len(r) - 1 >= dg and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        c = r[-1]
        shift = len(r) - 1 - dg
        for i, gi in enumerate(g):
            r[shift + i] = (r[shift + i] - c * gi) % p
        while r and r[-1] == 0:
            r.pop()
    return not any(r)


def _prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


def product_ring(rings, name=None) -> FiniteRing:
    orders = np.concatenate([r.orders for r in rings])
    g = orders.size
    struct = np.zeros((g, g, g), dtype=np.int64)
    one = np.zeros(g, dtype=np.int64)
    off = 0
    for r in rings:
        s = slice(off, off + r.g)
        struct[s, s, s] = r.struct
        one[s] = r.one_coords
        off += r.g
    name = name or " x ".join(r.name for r in rings)

    def label(ring, x):
        c = ring.coords(x)
        parts, o = [], 0
        for r in rings:
            parts.append(r.label(r.index(c[o:o + r.g])))
            o += r.g
        return "(" + ", ".join(parts) + ")"
    return FiniteRing(name, orders, struct, one, labels=label)


def finite_ring_build(spec: str) -> FiniteRing:
    """Build a ring from ``Z/n``, ``Fq``, ``Fp[x]/(f)``, ``F2`` or products joined by ``×`` / `` x ``."""
    text = spec.strip()
    parts = [s.strip() for s in re.split(r"\s+x\s+|×|(?<=[\d)])x(?=[FGZ])", text)]
    if len(parts) > 1:
        factors = [_single(p) for p in parts]
        total = 1
        for f in factors:
            total *= f.size
        if total > _config.max_ring_size():
            raise TooLarge(f"{spec}: {total} elements exceeds bound {_config.max_ring_size()}")
        return product_ring(factors, name=" x ".join(f.name for f in factors))
    return _single(text)


def _single(text: str) -> FiniteRing:
    m = re.fullmatch(r"Z/\(?(\d+)\)?", text)
    if m:
        return zmod(int(m.group(1)))
    m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?", text)
    if m:
        q = int(m.group(1))
        pk = _prime_power(q)
        if pk is None:
            raise InvalidInput(f"F{q}: {q} is not a prime power")
        p, k = pk
        if q > _config.max_ring_size():
            raise TooLarge(f"F{q} exceeds bound {_config.max_ring_size()}")
        if k == 1:
            r = zmod(p)
            r.name = f"F{p}"
            return r
        return _poly_quotient(p, _irreducible(p, k), f"F{q}")
    m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?\[([a-z][a-z0-9]*)\]\s*/\s*\((.*)\)", text)
    if m:
        p = int(m.group(1))
        if not _is_prime(p):
            raise InvalidInput(f"F{p}: quotients need a prime field")
        var = m.group(2)
        R = PolyRing([var], Field(p))
        f = R.parse(m.group(3))
        d = f.degree()
        if d > 0 and p ** d > _config.max_ring_size():
            raise TooLarge(f"{text} exceeds bound {_config.max_ring_size()}")
        coeffs = [0] * (max(d, 0) + 1)
        for e, c in f.terms.items():
            coeffs[e[0]] = int(c)
        return _poly_quotient(p, coeffs, text.replace(" ", ""), var)
    raise InvalidInput(f"unrecognised ring description {text!r}")


# ---------------------------------------------------------------- ring maps

class RingMap:
    """A ring homomorphism between finite rings, verified on all pairs."""

    def __init__(self, source: FiniteRing, target: FiniteRing, elem_map, check=True):
        self.source = source
        self.target = target
        self.map = np.asarray(elem_map, dtype=np.int64)
        if self.map.shape != (source.size,):
            raise InvalidInput("element map has the wrong length")
        if check:
            self.verify()

    @classmethod
    def from_basis_images(cls, source, target, images, check=True) -> "RingMap":
        imgs = np.stack([target.coords(int(y)) for y in images], axis=1)  # (gT, gS)
        for j, y in enumerate(images):
            if target.index(target.coords(int(y)) * int(source.orders[j])) != 0:
                raise NotAHomomorphism("image order does not divide source order")
        C = (imgs @ source.elem_coords.T) % target.orders[:, None]
        return cls(source, target, target.strides @ C, check=check)

    def verify(self):
        S, T = self.source, self.target
        f = self.map
        if f[S.one] != T.one:
            raise NotAHomomorphism("1 is not sent to 1")
        if not np.array_equal(f[S.add_table], T.add_table[f[:, None], f[None, :]]):
            raise NotAHomomorphism("map is not additive")
        if not np.array_equal(f[S.mul_table], T.mul_table[f[:, None], f[None, :]]):
            raise NotAHomomorphism("map is not multiplicative")

    def __call__(self, x: int) -> int:
        return int(self.map[int(x)])

    @cached_property
    def matrix(self) -> np.ndarray:
        """Target coordinates of the images of the source basis, shape (gT, gS)."""
        S, T = self.source, self.target
        cols = []
        for j in range(S.g):
            e = np.zeros(S.g, dtype=np.int64)
            e[j] = 1
            cols.append(T.coords(self(S.index(e))))
        return np.stack(cols, axis=1)

    def compose(self, other: "RingMap") -> "RingMap":
        """self ∘ other."""
        return RingMap(other.source, self.target, self.map[other.map])

    def preimage(self, ideal: FiniteIdeal) -> FiniteIdeal:
        return FiniteIdeal.from_mask(self.source, ideal.mask[self.map])

    def extend(self, ideal: FiniteIdeal) -> FiniteIdeal:
        return FiniteIdeal(self.target, [self(x) for x in ideal.gens])

    def prime_preimage(self, q: int) -> int:
        """Index of the source prime ψ⁻¹(q)."""
        pre = self.preimage(self.target.primes[q])
        for i, p in enumerate(self.source.primes):
            if p == pre:
                return i
        raise NotARing("preimage of a maximal ideal is not maximal")

    def __repr__(self):
        return f"RingMap({self.source.name} -> {self.target.name}: {list(map(int, self.map))})"


def identity_map(R: FiniteRing) -> RingMap:
    return RingMap(R, R, np.arange(R.size))


def enumerate_ring_maps(S: FiniteRing, T: FiniteRing) -> list[RingMap]:
    """All unital ring maps S → T, by assigning basis images and checking exhaustively."""
    out = []
    for images in itertools.product(range(T.size), repeat=S.g):
        try:
            out.append(RingMap.from_basis_images(S, T, images))
        except NotAHomomorphism:
            continue
    return out
