import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from torsor.algebra import modules as fm
from torsor.algebra.finite_ring import finite_ring_build
from torsor.algebra.ideals import Ideal, ideal_sum, saturation
from torsor.algebra.poly import parse_ring
from torsor.algebra.polymodule import PolyModule
from torsor.corpus import _cyclic_map, all_ideals, cyclic_modules
from torsor.support import FiniteSpec, StableSet
from torsor.torsion import gamma, gamma_by_support, gamma_colimit_check

QXY = parse_ring("Q[x,y]")
SMALL = ["Z/2", "Z/3", "Z/4", "Z/6", "Z/8", "Z/9", "Z/10", "Z/12", "F4", "F2[x]/(x^2)", "F2xF4"]


def brute_gamma(I, M):
    """Elements of M killed by every element of I^t, t = |R| (powers have stabilised by then)."""
    R = M.ring
    P = I.power(R.size)
    out = set()
    for v in M.elements().T:
        if all(not np.any(M.reduce(M.action(a) @ v)) for a in P.elements):
            out.add(tuple(int(x) for x in v))
    return out


def test_gamma_examples():
    R = finite_ring_build("Z/6")
    S = fm.free_module(R, 1)
    assert gamma(R.ideal([1]), S).size == 1
    assert gamma(R.ideal([2]), S).elements() == {(0,), (3,)}
    M = PolyModule(QXY, [Ideal(QXY, ["x*y"])])
    assert gamma(Ideal(QXY, ["x"]), M).generators() == [["y"]]
    assert gamma(Ideal(QXY, ["1"]), M).is_zero()


def test_gamma_carries_certificate():
    R = finite_ring_build("Z/12")
    g = gamma(R.ideal([2]), fm.free_module(R, 1))
    assert g.chain.is_certified()
    assert g.elements() == {(0,), (3,), (6,), (9,)}


def test_gamma_by_support_examples():
    R = finite_ring_build("Z/6")
    spec = FiniteSpec(R)
    S = fm.free_module(R, 1)
    assert gamma_by_support(spec.full(), S).size == 6
    assert gamma_by_support(spec.empty(), S).size == 1
    two = [i for i in range(spec.n) if R.prime_label(i) == "(2)"]
    assert gamma_by_support(StableSet(spec, two), S).elements() == {(0,), (3,)}


def test_colimit_examples():
    R = finite_ring_build("Z/6")
    M = fm.free_module(R, 1)
    ident = np.eye(1, dtype=np.int64)
    assert gamma_colimit_check(R.ideal([2]), ([M, M, M], [ident, ident]))
    Z2 = fm.cyclic(R, R.ideal([2]))
    Z6 = fm.cyclic(R, R.ideal([0]))
    F = _cyclic_map(R, Z2, Z6, 3)
    assert gamma_colimit_check(R.ideal([2]), ([Z2, Z6], [F]))
    assert gamma(R.ideal([2]), Z2).size == 2 and gamma(R.ideal([2]), Z6).size == 2
    Qx = parse_ring("Q[x]")
    N = PolyModule(Qx, [Ideal(Qx, ["x^3"])])
    chain = [N.submodule([["x^2"]]), N.submodule([["x"]]), N.whole()]
    assert gamma_colimit_check(Ideal(Qx, ["x"]), (chain, []))
    assert gamma(Ideal(Qx, ["x"]), N).issubset(N.whole()) and N.whole().issubset(gamma(Ideal(Qx, ["x"]), N))


@pytest.mark.parametrize("name", SMALL)
def test_gamma_matches_brute_force(name):
    R = finite_ring_build(name)
    mods = cyclic_modules(R) + [fm.free_module(R, 1), fm.direct_sum([fm.free_module(R, 1), cyclic_modules(R)[-1]])]
    for I in all_ideals(R):
        for M in mods:
            assert gamma(I, M).elements() == brute_gamma(I, M)


@pytest.mark.parametrize("name", [n for n in SMALL if finite_ring_build(n).size <= 12])
def test_support_path_agrees(name):
    R = finite_ring_build(name)
    for P in all_ideals(R):
        Z = StableSet(FiniteSpec(R), R.zero_set(P))
        for M in cyclic_modules(R) + [fm.free_module(R, 1)]:
            assert gamma_by_support(Z, M) == gamma(P, M)


@pytest.mark.parametrize("name", ["Z/6", "Z/12", "F2[x]/(x^2)", "F2xF4"])
def test_left_exact(name):
    R = finite_ring_build(name)
    M = fm.free_module(R, 2)
    zero = np.zeros(R.g, dtype=np.int64)
    for J in all_ideals(R):
        for shape in ("first", "diagonal"):
            cols = [np.concatenate([R.coords(x), R.coords(x) if shape == "diagonal" else zero])
                    for x in J.canonical_gens]
            sub = fm.Submodule(M, np.stack(cols, axis=1) if cols else np.zeros((M.k, 0), dtype=np.int64))
            for I in all_ideals(R):
                assert gamma(I, sub) == gamma(I, M).intersect(sub)


@pytest.mark.parametrize("name", ["Z/6", "Z/12", "F2xF4"])
def test_direct_sums(name):
    R = finite_ring_build(name)
    mods = cyclic_modules(R)
    for I in all_ideals(R):
        for M, N in itertools.combinations_with_replacement(mods, 2):
            S = fm.direct_sum([M, N])
            left = gamma(I, S).elements()
            gm, gn = gamma(I, M).elements(), gamma(I, N).elements()
            assert left == {a + b for a in gm for b in gn}


@given(st.sampled_from(["Z/6", "Z/8", "Z/12", "Z/30", "F2xF4", "F2[x]/(x^2)"]), st.data())
def test_composition_and_idempotence(name, data):
    R = finite_ring_build(name)
    I = R.ideal([data.draw(st.integers(0, R.size - 1))])
    J = R.ideal([data.draw(st.integers(0, R.size - 1))])
    M = data.draw(st.sampled_from(cyclic_modules(R) + [fm.free_module(R, 1)]))
    assert gamma(I, gamma(J, M)) == gamma(I + J, M)
    g = gamma(I, M)
    assert gamma(I, g) == g


def test_poly_gamma_is_saturation():
    cases = [("x", "x*y"), ("x", "x^2*y - x^2"), ("x,y", "x*y^2"), ("y", "x^3"), ("x*y", "x^2*y^3")]
    for I, K in cases:
        Ii = Ideal(QXY, I.split(","))
        Kk = Ideal(QXY, [K])
        g = gamma(Ii, PolyModule(QXY, [Kk]))
        assert g.ideals[0] == saturation(Kk, Ii)


def test_poly_composition_small():
    M = PolyModule(QXY, [Ideal(QXY, ["x^2*y^3"])])
    I, J = Ideal(QXY, ["x"]), Ideal(QXY, ["y"])
    assert gamma(I, gamma(J, M)) == gamma(ideal_sum(I, J), M)
