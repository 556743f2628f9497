"""Seeded instance generators shared by the acceptance suite and the tests."""
from __future__ import annotations

import itertools
import random

import numpy as np

from . import _config
from .algebra import modules as fm
from .algebra.finite_ring import FiniteIdeal, FiniteRing, finite_ring_build
from .algebra.ideals import Ideal
from .algebra.poly import PolyRing, parse_ring
from .algebra.polymodule import PolyModule

FLEET = ("Z/4", "Z/6", "Z/8", "Z/9", "Z/12", "Z/30", "F2[x]/(x^2)", "F2xF4")


def rng(offset: int = 0) -> random.Random:
    return random.Random(_config.seed() + offset)


def fleet() -> list[FiniteRing]:
    return [finite_ring_build(s) for s in FLEET]


def all_ideals(R: FiniteRing) -> list[FiniteIdeal]:
    ideals = {R.ideal([x]) for x in range(R.size)}
    while True:
        new = {a + b for a in ideals for b in ideals} - ideals
        if not new:
            return sorted(ideals, key=lambda J: (J.size, J.elements))
        ideals |= new


def principal_generators(R: FiniteRing) -> list[int]:
    """One generator per principal ideal."""
    seen, out = set(), []
    for x in range(R.size):
        J = R.ideal([x])
        if J not in seen:
            seen.add(J)
            out.append(x)
    return out


def cyclic_modules(R: FiniteRing, include_zero: bool = False) -> list[fm.FiniteModule]:
    return [fm.cyclic(R, J) for J in all_ideals(R) if include_zero or not J.is_unit()]


# ---------------------------------------------------------------- Q[x,y]

def _monomial(r: random.Random, max_deg: int):
    while True:
        a, b = r.randint(0, max_deg), r.randint(0, max_deg)
        if 0 < a + b <= max_deg:
            return a, b


def _mono_str(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("x" if a == 1 else f"x^{a}")
    if b:
        parts.append("y" if b == 1 else f"y^{b}")
    return "*".join(parts) or "1"


def random_poly_element(r: random.Random, max_deg: int) -> str:
    m1 = _monomial(r, max_deg)
    if r.random() < 0.5:
        return _mono_str(*m1)
    m2 = _monomial(r, max_deg)
    while m2 == m1:
        m2 = _monomial(r, max_deg)
    return f"{_mono_str(*m1)} - {_mono_str(*m2)}"


def random_poly_ideal(r: random.Random, S: PolyRing, max_deg: int = 3) -> Ideal:
    return Ideal(S, [random_poly_element(r, max_deg) for _ in range(r.randint(1, 2))])


def random_cyclic_poly_module(r: random.Random, S: PolyRing, max_deg: int = 4) -> PolyModule:
    if r.random() < 0.2:
        return PolyModule(S, [Ideal(S, [])])
    return PolyModule(S, [Ideal(S, [random_poly_element(r, max_deg)])])


def poly_triples(n: int, offset: int = 0):
    S = parse_ring("Q[x,y]")
    r = rng(offset)
    for _ in range(n):
        yield random_poly_ideal(r, S), random_poly_ideal(r, S), random_cyclic_poly_module(r, S)


# ---------------------------------------------------------------- chains for the colimit check

def random_finite_chain(r: random.Random, R: FiniteRing, length: int):
    """Cyclic modules R/K_j with maps 1 ↦ a_j (a_j K_j ⊆ K_{j+1})."""
    ideals = all_ideals(R)
    proper = [J for J in ideals if not J.is_unit()]
    mods, maps = [], []
    K = r.choice(proper)
    mods.append(fm.cyclic(R, K))
    for _ in range(length - 1):
        K2 = r.choice(proper)
        cands = [a for a in range(R.size)
                 if all(R.mul(a, k) in K2 for k in K.elements)]
        a = r.choice(cands)  # 0 always qualifies
        M, N = mods[-1], fm.cyclic(R, K2)
        maps.append(_cyclic_map(R, M, N, a))
        mods.append(N)
        K = K2
    return mods, maps


def _cyclic_map(R: FiniteRing, M: fm.FiniteModule, N: fm.FiniteModule, a: int) -> np.ndarray:
    """R/K → R/K', [x] ↦ [a x], as a matrix on the modules' generators."""
    # the coordinates of [x] in R/K are the ring coordinates reduced; images follow by linearity
    imgs = []
    for j in range(M.k):
        e = np.zeros(M.k, dtype=np.int64)
        e[j] = 1
        x = _element_of(R, M, e)
        imgs.append(_coords_in(R, N, R.mul(a, x)))
    F = np.stack(imgs, axis=1) if imgs else np.zeros((N.k, 0), dtype=np.int64)
    if not fm.is_linear(F, M, N):
        raise AssertionError("generated chain map is not linear")
    return F


def _element_of(R: FiniteRing, M: fm.FiniteModule, v) -> int:
    """A ring element whose class in the cyclic module R/K has coordinates v."""
    for x in range(R.size):
        if np.array_equal(_coords_in(R, M, x), M.reduce(np.asarray(v))[:, 0]):
            return x
    raise AssertionError("element not found")


def _coords_in(R: FiniteRing, M: fm.FiniteModule, x: int) -> np.ndarray:
    """Coordinates of the class of x in the cyclic module M = R/K."""
    if M.k == 0:
        return np.zeros(0, dtype=np.int64)
    return M.reduce(M.info["projection"] @ R.coords(x))[:, 0]


def poly_chain(r: random.Random, length: int):
    """Nested submodules of S/K: generated by growing sets of random elements."""
    S = parse_ring("Q[x,y]")
    M = random_cyclic_poly_module(r, S, 3)
    gens, subs = [], []
    for _ in range(length):
        gens.append(random_poly_element(r, 3))
        subs.append(M.submodule([[g] for g in gens]))
    return subs, []


# ---------------------------------------------------------------- bounded complexes over Z/6

def small_complexes(R: FiniteRing, pieces, width: int):
    """Every complex with terms from ``pieces`` in degrees 0..width-1 (all differentials)."""
    from .homotopy.complexes import ChainComplex
    for terms in itertools.product(pieces, repeat=width):
        homs = [list(fm.HomGroup(terms[i], terms[i + 1]).all_elements()) if terms[i].k and terms[i + 1].k
                else [np.zeros((terms[i + 1].k, terms[i].k), dtype=np.int64)]
                for i in range(width - 1)]
        for ds in itertools.product(*homs):
            ok = all(not np.any(terms[i + 2].reduce(ds[i + 1] @ ds[i])) if terms[i + 2].k else True
                     for i in range(width - 2))
            if not ok:
                continue
            C = ChainComplex(R, {i: terms[i] for i in range(width) if terms[i].k},
                             {i: ds[i] for i in range(width - 1)}, check=False)
            yield C
