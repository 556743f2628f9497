import itertools

import numpy as np
import pytest

from torsor.algebra import modules as fm
from torsor.algebra.finite_ring import enumerate_ring_maps, finite_ring_build, identity_map
from torsor.errors import NotASemilattice
from torsor.homotopy.cech import koszul_stable
from torsor.homotopy.complexes import ComplexMap, module_complex, unit_complex, zero_complex
from torsor.idempotents import (
    PreorderedContext, automorphism_orbit, boolean_lattice, chain_poset, classify_idempotents,
    continuity_check, coreflection_check, derived_context, derived_preordered, fold_pair, hom_pairs,
    idempotent_report, idempotent_support, is_continuous, is_idempotent, is_order_isomorphic, leq,
    make_pair, membership_DA, preordered_instance, tensor_pairs, topology_to_idempotent,
)
from torsor.support import FiniteSpec, StableSet

Z6 = finite_ring_build("Z/6")
CTX = derived_context(Z6)


def cech_pair(ctx, ts):
    K = koszul_stable(ctx.ring, ts)
    alpha = ComplexMap(K, ctx.unit(), {i: K.augmentation.at(i) for i in K.degrees}, check=False)
    return make_pair(ctx, K, alpha)


def unit_pair(ctx):
    U = ctx.unit()
    return make_pair(ctx, U, ctx.identity(U))


def zero_pair(ctx):
    Z = zero_complex(ctx.ring)
    return make_pair(ctx, Z, ComplexMap(Z, ctx.unit(), {}))


def primes(ring, *labels):
    spec = FiniteSpec(ring)
    return StableSet(spec, [i for i in range(spec.n) if ring.prime_label(i) in labels])


def summand(ring, g):
    return module_complex(fm.cyclic(ring, ring.ideal([g])))


C2, C3 = cech_pair(CTX, [2]), cech_pair(CTX, [3])
E_Z2 = summand(Z6, 2)   # Z/6/(2) ≅ {0, 3}
E_Z3 = summand(Z6, 3)   # Z/6/(3) ≅ {0, 2, 4}


# ---------------------------------------------------------------- worked examples

def test_is_idempotent_examples():
    U = CTX.unit()
    assert is_idempotent(CTX, U, CTX.identity(U))
    assert is_idempotent(CTX, C2.A, C2.alpha)
    Z2 = finite_ring_build("Z/2")
    c = derived_context(Z2)
    A, alpha = fold_pair(c, fm.free_module(Z2, 2))
    assert not is_idempotent(c, A, alpha)
    rep = idempotent_report(c, A, alpha)
    assert not rep["r_iso"] and rep["witness"] is not None


def test_report_records_both_composites():
    rep = idempotent_report(CTX, C2.A, C2.alpha)
    assert rep["r_iso"] and rep["l_iso"] and rep["equal"] and rep["symmetry_is_identity"]
    assert rep["j_maps"]["holds"]


def test_tensor_pairs_examples():
    T = tensor_pairs(CTX, C2, C3)
    assert T.A.is_acyclic()
    assert idempotent_support(CTX, T).data == frozenset()
    T2 = tensor_pairs(CTX, C2, C2)
    assert leq(CTX, T2, C2) and leq(CTX, C2, T2)


def test_leq_examples():
    O, Z = unit_pair(CTX), zero_pair(CTX)
    for P in (C2, C3, O, Z):
        assert leq(CTX, Z, P)
        assert leq(CTX, P, O)
    assert not leq(CTX, C2, C3)
    assert leq(CTX, C2, O)


def test_hom_pairs_examples():
    assert len(hom_pairs(CTX, C2, C2)) == 1
    assert hom_pairs(CTX, C2, C3) == []
    assert len(hom_pairs(CTX, zero_pair(CTX), C2)) == 1
    assert len(hom_pairs(CTX, C2, unit_pair(CTX), verify_mutual=True)) == 1


def test_membership_examples():
    assert membership_DA(CTX, C2, C2.A)
    assert membership_DA(CTX, C2, E_Z2)
    assert not membership_DA(CTX, C2, E_Z3)


def test_coreflection_examples():
    samples = [CTX.unit(), E_Z2, E_Z3, C3.A]
    assert coreflection_check(CTX, C2, samples) == []
    Z2 = finite_ring_build("Z/2")
    c = derived_context(Z2)
    A, alpha = fold_pair(c, fm.free_module(Z2, 2))
    assert coreflection_check(c, (A, alpha), [c.unit(), A])


def test_topology_to_idempotent_examples():
    spec = FiniteSpec(Z6)
    full = topology_to_idempotent(Z6, spec.full())
    assert leq(CTX, full, unit_pair(CTX)) and leq(CTX, unit_pair(CTX), full)
    empty = topology_to_idempotent(Z6, spec.empty())
    assert empty.A.is_acyclic()
    p2 = topology_to_idempotent(Z6, primes(Z6, "(2)"))
    assert [list(p.invariant_factors) for p in p2.A.profiles() if not p.is_zero()] == [[2]]
    assert p2.A.profile(0).invariant_factors == (2,)
    assert leq(CTX, p2, C2) and leq(CTX, C2, p2)


def test_idempotent_support_examples():
    assert len(idempotent_support(CTX, unit_pair(CTX)).data) == 2
    assert idempotent_support(CTX, C2) == primes(Z6, "(2)")
    assert idempotent_support(CTX, zero_pair(CTX)).data == frozenset()


def test_continuity_examples():
    Z3 = finite_ring_build("Z/3")
    (psi,) = enumerate_ring_maps(Z6, Z3)
    rep = continuity_check(psi, primes(Z6, "(3)"), primes(Z3, "(0)"))
    assert all(rep[c] for c in ("i", "ii", "ii_prime", "v_prime", "iv"))
    rep = continuity_check(psi, primes(Z6, "(2)"), primes(Z3, "(0)"))
    assert not any(rep[c] for c in ("i", "ii", "ii_prime", "v_prime", "iv"))
    for Z in FiniteSpec(Z6).all_stable_sets():
        assert is_continuous(identity_map(Z6), Z, Z)


def test_classify_examples():
    got = sorted(sorted(Z6.prime_label(i) for i in Z.data) for Z, _ in classify_idempotents(Z6))
    assert got == [[], ["(2)"], ["(2)", "(3)"], ["(3)"]]
    assert len(classify_idempotents(finite_ring_build("Z/30"))) == 8
    assert len(classify_idempotents(finite_ring_build("F2"))) == 2


def test_preordered_examples():
    ch = preordered_instance(chain_poset(2))
    assert ch.tensor(0, 1) == 0 and ch.unit() == 1
    bl = preordered_instance(boolean_lattice(["a", "b"]))
    assert len(bl.elements) == 4
    a, b = frozenset("a"), frozenset("b")
    assert bl.tensor(a, b) == frozenset()
    P, classes = derived_preordered(Z6)
    labels = {frozenset(Z6.prime_label(i) for i in Z.data): Z.data for Z, _ in classes}
    bij = {Z.data: frozenset(Z6.prime_label(i) for i in Z.data) for Z, _ in classes}
    assert is_order_isomorphic(P, preordered_instance(boolean_lattice(["(2)", "(3)"])), bij)
    assert len(labels) == 4


def test_preordered_rejects_non_semilattice():
    with pytest.raises(NotASemilattice):
        PreorderedContext(["a", "b"], [])


# ---------------------------------------------------------------- properties

@pytest.mark.parametrize("name", ["Z/6", "Z/12", "Z/30", "F2xF4"])
def test_preorder_laws(name):
    R = finite_ring_build(name)
    ctx = derived_context(R)
    classes = classify_idempotents(R, check_pairs=False)
    ps = [p for _, p in classes]
    for p in ps:
        assert leq(ctx, p, p)
    for (Za, a), (Zb, b) in itertools.product(classes, repeat=2):
        ab = leq(ctx, a, b)
        assert ab == (Za <= Zb)
        assert (ab and leq(ctx, b, a)) == (Za == Zb)
        T = tensor_pairs(ctx, a, b)
        assert leq(ctx, T, a) and leq(ctx, T, b)
        for Zc, c in classes:
            if leq(ctx, c, a) and leq(ctx, c, b):
                assert leq(ctx, c, T)
            if ab and leq(ctx, b, c):
                assert leq(ctx, a, c)


@pytest.mark.parametrize("name", ["Z/6", "Z/4", "F2xF4"])
def test_verified_pairs_satisfy_the_axioms(name):
    R = finite_ring_build(name)
    ctx = derived_context(R)
    for Z, p in classify_idempotents(R, check_pairs=False):
        rep = idempotent_report(ctx, p.A, p.alpha)
        assert rep["r_iso"] and rep["l_iso"] and rep["equal"] and rep["symmetry_is_identity"]


def test_automorphism_orbit_is_single():
    out = automorphism_orbit(CTX, C2.A)
    assert out["idempotent"] and out["single_orbit"]


def test_non_idempotent_pairs_fail_coreflection():
    U = unit_complex(Z6)
    samples = [module_complex(fm.cyclic(Z6, Z6.ideal([g]))) for g in (0, 2, 3)]
    for c in (0, 2, 3, 4):
        alpha = ComplexMap(U, CTX.unit(), {0: Z6.coords(c).reshape(-1, 1)})
        idem = is_idempotent(CTX, U, alpha)
        assert idem == (c == 1)
        assert bool(coreflection_check(CTX, (U, alpha), samples)) == (not idem)


def test_continuity_is_functorial():
    names = ["Z/6", "Z/3", "Z/2"]
    rings = [finite_ring_build(n) for n in names]
    for S, T, U in itertools.product(rings, repeat=3):
        for phi in enumerate_ring_maps(S, T):
            for psi in enumerate_ring_maps(T, U):
                comp = psi.compose(phi)
                for ZS, ZT, ZU in itertools.product(*(FiniteSpec(r).all_stable_sets() for r in (S, T, U))):
                    if is_continuous(phi, ZS, ZT) and is_continuous(psi, ZT, ZU):
                        assert is_continuous(comp, ZS, ZU)


@pytest.mark.parametrize("name", ["Z/6", "Z/30", "F2xF4", "Z/12"])
def test_generator_choice_does_not_change_the_class(name):
    R = finite_ring_build(name)
    ctx = derived_context(R)
    for Z in FiniteSpec(R).all_stable_sets():
        ref = topology_to_idempotent(ctx, Z)
        lists = [[e for i, e in enumerate(R.local_idempotents) if i not in Z.data] or [R.zero],
                 Z.representative().canonical_gens or [R.zero]]
        for ts in lists:
            p = cech_pair(ctx, ts)
            assert leq(ctx, p, ref) and leq(ctx, ref, p)
            assert idempotent_support(ctx, p) == Z
