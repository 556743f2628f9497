import numpy as np

from torsor import corpus
from torsor.algebra import modules as fm
from torsor.algebra.finite_ring import finite_ring_build


def test_seeded_generators_are_reproducible():
    a = [tuple(map(repr, t)) for t in corpus.poly_triples(10)]
    b = [tuple(map(repr, t)) for t in corpus.poly_triples(10)]
    assert a == b


def test_seed_env_changes_corpus(monkeypatch):
    a = [repr(t[0]) for t in corpus.poly_triples(10)]
    monkeypatch.setenv("TORSOR_SEED", "7")
    b = [repr(t[0]) for t in corpus.poly_triples(10)]
    assert a != b


def test_chains_are_linear():
    r = corpus.rng(1)
    for R in corpus.fleet():
        mods, maps = corpus.random_finite_chain(r, R, 3)
        for j, F in enumerate(maps):
            assert fm.is_linear(F, mods[j], mods[j + 1])


def test_small_complexes_square_to_zero():
    R = finite_ring_build("Z/6")
    pieces = [fm.zero_module(R), fm.cyclic(R, R.ideal([2])), fm.free_module(R, 1)]
    n = 0
    for C in corpus.small_complexes(R, pieces, 3):
        C.verify()
        n += 1
    assert n > 9


def test_all_ideals_counts():
    counts = {"Z/6": 4, "Z/12": 6, "Z/30": 8, "F2xF4": 4, "F2[x]/(x^2)": 3}
    for name, k in counts.items():
        assert len(corpus.all_ideals(finite_ring_build(name))) == k
