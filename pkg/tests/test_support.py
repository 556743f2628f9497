import itertools
import random

import pytest

from torsor.algebra import modules as fm
from torsor.algebra.finite_ring import enumerate_ring_maps, finite_ring_build
from torsor.algebra.ideals import Ideal, radical_contains
from torsor.algebra.poly import parse_ring
from torsor.algebra.polymodule import PolyModule
from torsor.corpus import all_ideals
from torsor.support import (
    FiniteSpec, PolyMap, StableSet, SupportBase, SupportSystem, SymbolicSpec, base_to_sos, from_stable_set,
    inverse_image, meet, sos_to_base, stable_set_of, support_module,
)

QXY = parse_ring("Q[x,y]")
SYM = SymbolicSpec(QXY)


def I_(*g, ring=QXY):
    return Ideal(ring, list(g))


def labels(Z):
    return sorted(Z.model.ring.prime_label(i) for i in Z.data)


def test_base_to_sos_examples():
    phi = base_to_sos(SupportBase(SYM, I_("x", "y")))
    assert len(phi.members) == 1 and radical_contains(phi.members[0], I_("x", "y"))
    empty = base_to_sos(SupportBase(SYM, I_("1")))
    assert empty.stable_set == StableSet(SYM, I_("1"))
    R = finite_ring_build("Z/6")
    phi6 = base_to_sos(SupportBase(FiniteSpec(R), R.ideal([2])))
    assert labels(phi6.stable_set) == ["(2)"]


def test_stable_set_examples():
    Z = stable_set_of(SupportSystem(SYM, [I_("x"), I_("y")]))
    assert Z == StableSet(SYM, I_("x*y"))
    assert from_stable_set(StableSet(SYM, I_("1"))).stable_set == StableSet(SYM, I_("1"))
    R = finite_ring_build("Z/30")
    spec = FiniteSpec(R)
    Z = StableSet(spec, [i for i in range(spec.n) if R.prime_label(i) in ("(2)", "(5)")])
    phi = from_stable_set(Z)
    for J in all_ideals(R):
        assert phi.contains_closed(J) == (R.zero_set(J) <= Z.data)
    assert Z.representative() == R.ideal([10])


def test_inverse_image_examples():
    Qx = parse_ring("Q[x]")
    psi = PolyMap(Qx, QXY, ["x"])
    out = inverse_image(psi, SupportBase(SymbolicSpec(Qx), Ideal(Qx, ["x"])))
    assert out.ideal == I_("x")
    Z6, Z3, Z2 = (finite_ring_build(s) for s in ("Z/6", "Z/3", "Z/2"))
    (red,) = enumerate_ring_maps(Z6, Z3)
    s6 = FiniteSpec(Z6)
    i3 = [i for i in range(s6.n) if Z6.prime_label(i) == "(3)"]
    pulled = inverse_image(red, from_stable_set(StableSet(s6, i3)))
    assert labels(pulled.stable_set) == ["(0)"]
    (red2,) = enumerate_ring_maps(Z6, Z2)
    b = inverse_image(red2, SupportBase(s6, Z6.ideal([3])))
    assert b.ideal.is_unit()
    assert base_to_sos(b).stable_set.data == frozenset()


def test_meet_examples():
    b = meet(SupportBase(SYM, I_("x")), SupportBase(SYM, I_("y")))
    assert b == SupportBase(SYM, I_("x", "y"))
    R = finite_ring_build("Z/6")
    spec = FiniteSpec(R)
    a = StableSet(spec, [0])
    c = StableSet(spec, [1])
    assert meet(a, c).data == frozenset()
    assert (R.ideal([2]) + R.ideal([3])).is_unit()


def test_support_module_examples():
    R = finite_ring_build("Z/6")
    assert len(support_module(fm.free_module(R, 1)).data) == 2
    Z2 = fm.cyclic(R, R.ideal([2]))  # ≅ {0, 3}
    assert labels(support_module(Z2)) == ["(2)"]
    M = PolyModule(QXY, [I_("x")])
    assert support_module(M) == StableSet(SYM, I_("x"))


def _brute_support(M):
    """Primes p with M_p ≠ 0, via annihilators: p ⊇ Ann(M)."""
    R = M.ring
    ann = [x for x in range(R.size) if not M.k or not (M.reduce(M.action(x))).any()]
    return frozenset(i for i, P in enumerate(R.primes) if all(a in P for a in ann))


@pytest.mark.parametrize("name", ["Z/6", "Z/12", "Z/30", "F2xF4", "F2[x]/(x^2)"])
def test_support_module_brute(name):
    R = finite_ring_build(name)
    for J in all_ideals(R):
        M = fm.cyclic(R, J)
        assert support_module(M).data == _brute_support(M)


# ---------------------------------------------------------------- bijection laws

def _random_base_ideal(r):
    opts = ["x", "y", "x*y", "x^2", "x+y", "x^2-y", "x*y^2", "y^3", "x-1", "x^2*y"]
    return I_(*r.sample(opts, r.randint(1, 2)))


def test_bijection_laws_symbolic():
    r = random.Random(1)
    for _ in range(200):
        base = SupportBase(SYM, _random_base_ideal(r))
        assert sos_to_base(base_to_sos(base)) == base
    for _ in range(8):
        base = SupportBase(SYM, _random_base_ideal(r))
        phi = base_to_sos(base)
        for _ in range(50 // 8 + 1):
            J = _random_base_ideal(r)
            assert base.contains(J) == phi.contains_closed(J)


@pytest.mark.parametrize("name", ["Z/6", "Z/30", "Z/12", "F2xF4"])
def test_bijection_laws_finite(name):
    R = finite_ring_build(name)
    spec = FiniteSpec(R)
    ideals = all_ideals(R)
    for P in ideals:
        base = SupportBase(spec, P)
        phi = base_to_sos(base)
        assert sos_to_base(phi) == base
        for J in ideals:
            assert base.contains(J) == phi.contains_closed(J)
        for Q in ideals:
            other = SupportBase(spec, Q)
            a = base <= other
            assert a == (base_to_sos(base) <= base_to_sos(other))
            assert a == (stable_set_of(base) <= stable_set_of(other))
    for Z in spec.all_stable_sets():
        assert stable_set_of(from_stable_set(Z)) == Z


def test_inclusion_preservation_symbolic():
    r = random.Random(2)
    for _ in range(30):
        a, b = SupportBase(SYM, _random_base_ideal(r)), SupportBase(SYM, _random_base_ideal(r))
        inc = a <= b
        assert inc == (base_to_sos(a) <= base_to_sos(b)) == (stable_set_of(a) <= stable_set_of(b))


@pytest.mark.parametrize("name", ["Z/6", "Z/30", "F2", "Z/4"])
def test_meet_laws_exhaustive(name):
    spec = FiniteSpec(finite_ring_build(name))
    sets = spec.all_stable_sets()
    for a in sets:
        assert meet(a, a) == a
        for b in sets:
            assert meet(a, b) == meet(b, a)
            for c in sets:
                assert meet(meet(a, b), c) == meet(a, meet(b, c))


def test_finite_intersection_subfamily():
    R = finite_ring_build("Z/30")
    spec = FiniteSpec(R)
    closed = sorted({R.zero_set(J) for J in all_ideals(R)}, key=sorted)
    for Z in spec.all_stable_sets():
        for k in range(1, 5):
            for fam in itertools.combinations(closed, k):
                total = frozenset.intersection(*fam)
                if total <= Z.data:
                    assert any(frozenset.intersection(*sub) <= Z.data
                               for m in range(1, spec.n + 1) for sub in itertools.combinations(fam, min(m, k)))


def test_inverse_image_functorial():
    names = ["Z/6", "Z/3", "Z/2", "Z/4", "F4"]
    rings = {n: finite_ring_build(n) for n in names}
    for a, b, c in itertools.product(names, repeat=3):
        for phi in enumerate_ring_maps(rings[a], rings[b]):
            for psi in enumerate_ring_maps(rings[b], rings[c]):
                comp = psi.compose(phi)
                for Z in FiniteSpec(rings[a]).all_stable_sets():
                    x = from_stable_set(Z)
                    assert inverse_image(comp, x) == inverse_image(psi, inverse_image(phi, x))
                for J in all_ideals(rings[a]):
                    x = SupportBase(FiniteSpec(rings[a]), J)
                    assert inverse_image(comp, x) == inverse_image(psi, inverse_image(phi, x))
