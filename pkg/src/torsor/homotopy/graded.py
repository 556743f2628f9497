"""Multigraded local cohomology of S or S/J (J monomial) over k[x_1..x_n].

Every localization S[1/x_U] of a monomial quotient has slices of dimension at
most one, so the Čech complex restricted to a multidegree a is a small
complex of 0/1-dimensional spaces with ±1 incidence maps.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..algebra.ideals import Ideal
from ..algebra.poly import Poly, PolyRing
from ..algebra.polymodule import PolyModule
from ..errors import InvalidInput, UnsupportedBackend, WindowRequired


def _monomial_exponents(f: Poly):
    if len(f.terms) != 1:
        return None
    return next(iter(f.terms))


def _monomial_gens(J: Ideal) -> list[tuple]:
    out = []
    for g in J.gens:
        if g.is_zero():
            continue
        e = _monomial_exponents(g)
        if e is None:
            # a monomial ideal may be given by non-monomial generators; its GB is monomial
            out = None
            break
        out.append(e)
    if out is None:
        out = []
        for g in J.gb:
            e = _monomial_exponents(g)
            if e is None:
                raise UnsupportedBackend("graded slices need a monomial ideal")
            out.append(e)
    return out


def _in_monomial_ideal(e, gens) -> bool:
    return any(all(a >= b for a, b in zip(e, g)) for g in gens)


def slice_dim(a, U, gens, big: int) -> int:
    """dim of (S/J)[1/x_U] in degree a, by the monomial slice rule."""
    for i, ai in enumerate(a):
        if i not in U and ai < 0:
            return 0
    e = tuple(big if i in U else ai for i, ai in enumerate(a))
    return 0 if _in_monomial_ideal(e, gens) else 1


def rank(rows) -> int:
    """Exact rank of a small matrix over Q (Fraction elimination)."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M or not M[0]:
        return 0
    r, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


class GradedSlice:
    """The Čech complex of S/J at one multidegree: term dims and incidence matrices."""

    def __init__(self, a, supports, gens, big):
        self.a = tuple(a)
        d = len(supports)
        self.subsets = {j: list(itertools.combinations(range(d), j)) for j in range(d + 1)}
        self.dims = {}
        for j, subs in self.subsets.items():
            for T in subs:
                U = set().union(*[supports[i] for i in T]) if T else set()
                self.dims[T] = slice_dim(a, U, gens, big)
        self.d = d

    def term_dim(self, j: int) -> int:
        return sum(self.dims[T] for T in self.subsets.get(j, []))

    def matrix(self, j: int):
        src = [T for T in self.subsets.get(j, []) if self.dims[T]]
        tgt = [U for U in self.subsets.get(j + 1, []) if self.dims[U]]
        rows = []
        for U in tgt:
            row = []
            for T in src:
                extra = set(U) - set(T)
                if len(extra) == 1 and set(T) <= set(U):
                    i = extra.pop()
                    row.append(-1 if sum(1 for x in T if x < i) % 2 else 1)
                else:
                    row.append(0)
            rows.append(row)
        return rows

    def homology_dim(self, j: int) -> int:
        if j < 0 or j > self.d:
            return 0
        out_rank = rank(self.matrix(j)) if j < self.d else 0
        in_rank = rank(self.matrix(j - 1)) if j > 0 else 0
        return self.term_dim(j) - out_rank - in_rank


def parse_window(window, n: int):
    """[(lo, hi)] * n from '(lo, hi)', a list of pairs or a string like '-2:0' or '-2:0,-1:1'."""
    if window is None:
        raise WindowRequired("graded local cohomology needs a finite degree window")
    if isinstance(window, str):
        parts = [p for p in window.replace(" ", "").split(",") if p]
        pairs = []
        for p in parts:
            lo, _, hi = p.partition(":")
            pairs.append((int(lo), int(hi)))
        window = pairs
    window = list(window)
    if len(window) == 2 and all(isinstance(x, int) for x in window):
        window = [tuple(window)] * n
    if len(window) == 1 and n > 1:
        window = window * n
    if len(window) != n or any(lo > hi for lo, hi in window):
        raise InvalidInput("window needs one (lo, hi) range per variable")
    return [(int(lo), int(hi)) for lo, hi in window]


def _setup(I, M):
    if isinstance(M, PolyModule):
        if M.rank != 1:
            raise UnsupportedBackend("graded local cohomology is implemented for S and S/J")
        J = M.ideals[0]
    elif isinstance(M, Ideal):
        J = M
    else:
        raise UnsupportedBackend("graded local cohomology is implemented for S and S/J")
    ring: PolyRing = J.ring
    gens_I = I.gens if isinstance(I, Ideal) else list(I)
    supports = []
    for t in gens_I:
        t = ring.parse(t) if isinstance(t, str) else t
        e = _monomial_exponents(t)
        if e is None:
            raise UnsupportedBackend("graded Čech complexes need monomial generators")
        supports.append({i for i, x in enumerate(e) if x})
    gens = _monomial_gens(J)
    big = 1 + max((max(g) for g in gens if g), default=0)
    return ring, supports, gens, big


def graded_local_cohomology(I, M, i: int, window) -> dict:
    """{multidegree: dim H^i_I(M)_a} for every a in the window."""
    ring, supports, gens, big = _setup(I, M)
    box = parse_window(window, ring.nvars)
    out = {}
    for a in itertools.product(*[range(lo, hi + 1) for lo, hi in box]):
        out[a] = GradedSlice(a, supports, gens, big).homology_dim(i)
    return out


def graded_json(i: int, dims: dict) -> dict:
    return {"i": i, "dims": {"(" + ",".join(str(x) for x in a) + ")": v for a, v in sorted(dims.items())}}
