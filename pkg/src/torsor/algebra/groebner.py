"""Buchberger's algorithm with the product and chain criteria."""
from __future__ import annotations

from .poly import Poly, PolyRing


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def reduce(f: Poly, G) -> Poly:
    """Full reduction of f by the list G (remainder of the division algorithm)."""
    ring = f.ring
    fld = ring.field
    key = ring.key
    G = [g for g in G if g.terms]
    lead = [(g.lm, g.lc, g) for g in G]
    p = dict(f.terms)
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in lead:
            if _divides(lm, m):
                q = fld.norm(c * fld.inv(lc))
                shift = _sub_exp(m, lm)
                for e, v in g.terms.items():
                    ee = tuple(a + b for a, b in zip(e, shift))
                    nv = fld.norm(p.get(ee, 0) - q * v)
                    if nv:
                        p[ee] = nv
                    else:
                        p.pop(ee, None)
                break
        else:
            rem[m] = c
            del p[m]
    return Poly(ring, rem)


def s_poly(f: Poly, g: Poly) -> Poly:
    fld = f.ring.field
    L = _lcm(f.lm, g.lm)
    a = f.mul_term(_sub_exp(L, f.lm), fld.inv(f.lc))
    b = g.mul_term(_sub_exp(L, g.lm), fld.inv(g.lc))
    return a - b


def buchberger(F, ring: PolyRing | None = None):
    """A reduced Gröbner basis (monic, sorted by descending leading monomial)."""
    F = [f for f in F if f.terms]
    if not F:
        return []
    ring = ring or F[0].ring
    key = ring.key
    G: list[Poly] = []
    pairs: list[tuple[int, int]] = []

    def add(h: Poly):
        h = h.monic()
        k = len(G)
        G.append(h)
        for i in range(k):
            pairs.append((i, k))

    for f in F:
        h = reduce(f, G)
        if h.terms:
            if h.is_constant():
                return [ring.one()]
            add(h)
    done = set()
    while pairs:
        # normal strategy: smallest lcm first
        pairs.sort(key=lambda ij: key(_lcm(G[ij[0]].lm, G[ij[1]].lm)), reverse=True)
        i, j = pairs.pop()
        done.add((i, j))
        li, lj = G[i].lm, G[j].lm
        L = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        if _chain_skip(i, j, L, G, pairs, done):
            continue
        h = reduce(s_poly(G[i], G[j]), G)
        if h.terms:
            if h.is_constant():
                return [ring.one()]
            add(h)
    return interreduce(G)


def _chain_skip(i, j, L, G, pairs, done) -> bool:
    pending = set(pairs)
    for k in range(len(G)):
        if k in (i, j) or not _divides(G[k].lm, L):
            continue
        a = (min(i, k), max(i, k))
        b = (min(j, k), max(j, k))
        if a not in pending and b not in pending:
            return True
    return False


def interreduce(G):
    if not G:
        return []
    key = G[0].ring.key
    G = sorted((g.monic() for g in G if g.terms), key=lambda g: key(g.lm))
    minimal = []
    for g in G:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        out.append(reduce(g, others).monic())
    out.sort(key=lambda g: key(g.lm), reverse=True)
    return out


def is_groebner(G) -> bool:
    """Buchberger certificate: every S-polynomial reduces to zero."""
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if reduce(s_poly(G[i], G[j]), G).terms:
                return False
    return True
