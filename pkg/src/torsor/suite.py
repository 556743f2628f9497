"""The acceptance criteria as runnable checks with brute-force oracles.

Each criterion returns ``(passed, details)``; ``run_suite`` times them and
compares against the stated runtime budgets.
"""
from __future__ import annotations

import itertools
import sys
import time

from .algebra import modules as fm
from .algebra.finite_ring import finite_ring_build
from .algebra.ideals import Ideal, ideal_sum
from .algebra.poly import parse_ring
from .algebra.polymodule import PolyModule
from .corpus import (
    all_ideals, cyclic_modules, fleet, poly_triples, principal_generators, random_finite_chain, rng,
    small_complexes,
)
from .homotopy.cech import cech_tensor, koszul_stable, local_cohomology_all
from .homotopy.complexes import InvariantProfile, complex_support, module_complex
from .homotopy.derived import derived_intersect_check, ext_local_cohomology
from .homotopy.graded import graded_local_cohomology
from .support import FiniteSpec, StableSet
from .torsion import gamma, gamma_colimit_check


def _fail(details: dict, msg, limit: int = 5):
    details.setdefault("failures", [])
    if len(details["failures"]) < limit:
        details["failures"].append(msg)


# ---------------------------------------------------------------- 1 and 2: composition and idempotence of Γ

def _torsion_corpus(n_poly: int = 200):
    for I, J, M in poly_triples(n_poly):
        yield "poly", I, J, M
    for name in ("Z/6", "Z/12"):
        R = finite_ring_build(name)
        ideals = all_ideals(R)
        for I, J, K in itertools.product(ideals, repeat=3):
            yield name, I, J, fm.cyclic(R, K)


def criteria_1_2(n_poly: int = 200):
    comp = {"checked": 0}
    idem = {"checked": 0}
    for kind, I, J, M in _torsion_corpus(n_poly):
        IJ = ideal_sum(I, J) if kind == "poly" else I + J
        lhs = gamma(I, gamma(J, M))
        rhs = gamma(IJ, M)
        comp["checked"] += 1
        if not lhs == rhs:
            _fail(comp, {"ring": kind, "I": repr(I), "J": repr(J), "M": repr(M)})
        gi = gamma(I, M)
        idem["checked"] += 1
        if not gamma(I, gi) == gi:
            _fail(idem, {"ring": kind, "I": repr(I), "M": repr(M)})
    return (not comp.get("failures"), comp), (not idem.get("failures"), idem)


# ---------------------------------------------------------------- 3: Koszul vs Ext

def criterion_3():
    det = {"checked": 0}
    for R in fleet():
        mods = cyclic_modules(R) + [fm.free_module(R, 1)]
        for t in principal_generators(R):
            I = R.ideal([t])
            for M in mods:
                koszul = local_cohomology_all([t], M)
                for i, p in enumerate(koszul):
                    det["checked"] += 1
                    q = ext_local_cohomology(I, M, i)
                    if not p.isomorphic(q):
                        _fail(det, {"ring": R.name, "t": R.label(t), "M": M.name, "i": i,
                                    "koszul": p.to_json(), "ext": q.to_json()})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 4: graded local cohomology of the maximal ideal

def criterion_4():
    det = {"checked": 0}
    for names in ("x", "x,y", "x,y,z"):
        S = parse_ring(f"Q[{names}]")
        n = S.nvars
        I = Ideal(S, list(S.vars))
        M = PolyModule(S, [Ideal(S, [])])
        window = [(-2, 0)] * n
        for i in range(n + 1):
            dims = graded_local_cohomology(I, M, i, window)
            for a, v in dims.items():
                det["checked"] += 1
                expect = int(i == n and all(x <= -1 for x in a))
                if v != expect:
                    _fail(det, {"n": n, "i": i, "a": a, "dim": v, "expected": expect})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 5: derived intersection

def criterion_5(n_random: int = 50):
    det = {"checked": 0}
    rings = fleet()
    for R in rings:
        M = fm.free_module(R, 1)
        for t, u in itertools.product(principal_generators(R), repeat=2):
            det["checked"] += 1
            if not derived_intersect_check([t], [u], M):
                _fail(det, {"ring": R.name, "t": R.label(t), "u": R.label(u)})
    r = rng(55)
    for _ in range(n_random):
        R = r.choice(rings)
        ts = [r.randrange(R.size) for _ in range(r.randint(1, 2))]
        us = [r.randrange(R.size) for _ in range(r.randint(1, 2))]
        M = r.choice(cyclic_modules(R) + [fm.free_module(R, 1)])
        det["checked"] += 1
        if not derived_intersect_check(ts, us, M):
            _fail(det, {"ring": R.name, "t": [R.label(x) for x in ts], "u": [R.label(x) for x in us],
                        "M": M.name})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 6: idempotent axioms and coreflections

def _samples(R):
    return [module_complex(M) for M in cyclic_modules(R)]


def criterion_6():
    from .homotopy.complexes import ComplexMap, unit_complex, zero_complex
    from .idempotents import coreflection_check, derived_context, fold_pair, is_idempotent, topology_to_idempotent
    det = {"checked": 0, "negatives": []}
    tested = []
    for R in fleet():
        ctx = derived_context(R)
        for Z in FiniteSpec(R).all_stable_sets():
            p = topology_to_idempotent(ctx, Z)
            tested.append((R, ctx, p.A, p.alpha, True, f"Cech {Z}"))
    Z2 = finite_ring_build("Z/2")
    c2 = derived_context(Z2)
    A, alpha = fold_pair(c2, fm.free_module(Z2, 2))
    tested.append((Z2, c2, A, alpha, False, "(S+S, fold)"))
    Z6 = finite_ring_build("Z/6")
    c6 = derived_context(Z6)
    U = unit_complex(Z6)
    two = Z6.coords(2).reshape(-1, 1)
    tested.append((Z6, c6, U, ComplexMap(U, c6.unit(), {0: two}), False, "(O, mult by 2)"))
    zero = ComplexMap(U, c6.unit(), {0: 0 * two})
    tested.append((Z6, c6, U, zero, False, "(O, 0)"))
    Zc = zero_complex(Z6)
    tested.append((Z6, c6, Zc, ComplexMap(Zc, c6.unit(), {}), True, "(0, 0)"))
    for R, ctx, A, alpha, expected, label in tested:
        det["checked"] += 1
        idem = is_idempotent(ctx, A, alpha)
        bad = coreflection_check(ctx, (A, alpha), _samples(R))
        if idem != expected:
            _fail(det, {"ring": R.name, "pair": label, "is_idempotent": idem, "expected": expected})
        if idem != (not bad):
            _fail(det, {"ring": R.name, "pair": label, "is_idempotent": idem, "coreflection_violations": bad[:3]})
        if not expected:
            det["negatives"].append({"ring": R.name, "pair": label, "is_idempotent": idem,
                                     "coreflection_violations": len(bad)})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 7: classification

def criterion_7():
    from .idempotents import classify_idempotents, derived_context, idempotent_support, leq, topology_to_idempotent
    det = {"counts": {}}
    for name, want in (("Z/6", 4), ("Z/30", 8)):
        n = len(classify_idempotents(finite_ring_build(name)))
        det["counts"][name] = n
        if n != want:
            _fail(det, {"ring": name, "classes": n, "expected": want})
    det["round_trips"] = det["leq_pairs"] = 0
    for R in fleet():
        ctx = derived_context(R)
        pairs = []
        for Z in FiniteSpec(R).all_stable_sets():
            p = topology_to_idempotent(ctx, Z)
            det["round_trips"] += 1
            if idempotent_support(ctx, p) != Z:
                _fail(det, {"ring": R.name, "Z": str(Z)})
            pairs.append((Z, p))
        for (Z1, p1), (Z2, p2) in itertools.product(pairs, repeat=2):
            det["leq_pairs"] += 1
            if leq(ctx, p1, p2) != (Z1 <= Z2):
                _fail(det, {"ring": R.name, "B": str(Z1), "A": str(Z2)})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 8: uniqueness of morphisms of pairs

def criterion_8():
    from .idempotents import derived_context, hom_pairs, leq, topology_to_idempotent
    det = {"checked": 0}
    for R in fleet():
        ctx = derived_context(R)
        pairs = [topology_to_idempotent(ctx, Z) for Z in FiniteSpec(R).all_stable_sets()]
        for Q, P in itertools.product(pairs, repeat=2):
            det["checked"] += 1
            n = len(hom_pairs(ctx, Q, P))
            if n > 1 or (n == 1) != leq(ctx, Q, P):
                _fail(det, {"ring": R.name, "B": str(Q.info["stable_set"]), "A": str(P.info["stable_set"]),
                            "hom_pairs": n})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 9: continuity

def criterion_9():
    from .idempotents import continuity_sweep
    rings = [finite_ring_build(s) for s in ("Z/6", "Z/4", "Z/3", "Z/2", "F4")]
    rep = continuity_sweep(rings)
    det = {"checked": rep["checked"], "disagreements": len(rep["disagreements"])}
    for d in rep["disagreements"][:5]:
        _fail(det, {"map": d[0], "Z_S": d[1], "Z_T": d[2]})
    return rep["checked"] > 0 and not rep["disagreements"], det


# ---------------------------------------------------------------- 10: colimits and direct sums

def criterion_10(n_chains: int = 50):
    det = {"chains": 0, "sums": 0}
    r = rng(10)
    rings = fleet()
    for _ in range(n_chains):
        R = r.choice(rings)
        chain = random_finite_chain(r, R, r.randint(2, 4))
        I = R.ideal([r.randrange(R.size)])
        det["chains"] += 1
        if not gamma_colimit_check(I, chain):
            _fail(det, {"ring": R.name, "I": R.label(I.gens[0]), "orders": [list(m.orders) for m in chain[0]]})
    for R in rings:
        mods = cyclic_modules(R)
        for t in principal_generators(R):
            for M, N in itertools.combinations_with_replacement(mods, 2):
                S = fm.direct_sum([M, N])
                CS, CM, CN = (cech_tensor(X, [t]) for X in (S, M, N))
                for i in (0, 1):
                    det["sums"] += 1
                    HS = CS.homology_module(i)
                    HMN = fm.direct_sum([CM.homology_module(i), CN.homology_module(i)], R)
                    ok = InvariantProfile.of(HS, i).isomorphic(InvariantProfile.of(HMN, i))
                    if ok and HS.size <= 256:
                        ok = fm.is_isomorphic(HS, HMN)
                    if not ok:
                        _fail(det, {"ring": R.name, "t": R.label(t), "M": M.name, "N": N.name, "i": i})
    return not det.get("failures"), det


# ---------------------------------------------------------------- 11: membership criterion over Z/6

def _vanishing(R, ts) -> frozenset:
    """Z(t): primes containing every t_i."""
    return frozenset(i for i, P in enumerate(R.primes) if all(t in P for t in ts))


def criterion_11(width: int = 3):
    from .idempotents import derived_context, iota
    from .homotopy.complexes import ComplexMap
    R = finite_ring_build("Z/6")
    ctx = derived_context(R)
    pieces = [fm.zero_module(R)] + [fm.cyclic(R, J) for J in all_ideals(R) if not J.is_unit()]
    t_lists = [list(c) for k in (1, 2) for c in itertools.combinations_with_replacement(range(R.size), k)]
    pairs = []
    for ts in t_lists:
        K = koszul_stable(R, ts)
        alpha = ComplexMap(K, ctx.unit(), {i: K.augmentation.at(i) for i in K.degrees}, check=False)
        pairs.append((ts, alpha, _vanishing(R, ts)))
    det = {"complexes": 0, "checked": 0}
    for w in range(1, width + 1):
        for E in small_complexes(R, pieces, w):
            det["complexes"] += 1
            supp = complex_support(E).data
            for ts, alpha, Z in pairs:
                det["checked"] += 1
                member = supp <= Z
                quasi = ctx.is_iso(iota(ctx, alpha, E))
                if member != quasi:
                    _fail(det, {"t": ts, "complex": [E.term(i).name for i in E.degrees],
                                "support_in_Z": member, "quasi_iso": quasi})
    return not det.get("failures"), det


# ---------------------------------------------------------------- runner

CRITERIA = {
    1: ("composition law G_I G_J = G_{I+J}", 60),
    2: ("idempotence G_I G_I = G_I", 60),
    3: ("Koszul and Ext routes agree", 30),
    4: ("graded H^i of the maximal ideal", 5),
    5: ("derived intersection", 30),
    6: ("idempotent axioms and coreflections", None),
    7: ("classification bijection", None),
    8: ("uniqueness of morphisms of pairs", None),
    9: ("continuity coherence", 120),
    10: ("colimit and direct-sum commutation", None),
    11: ("membership criterion over Z/6", 60),
}

_RUNNERS = {3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6, 7: criterion_7,
            8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11}


def run_criterion(n: int) -> dict:
    """Run one criterion (1 and 2 share a run; asking for either runs both)."""
    return {c["id"]: c for c in _run([n])}[n]


def _run(ids):
    out = []
    if 1 in ids or 2 in ids:
        t0 = time.perf_counter()
        (ok1, d1), (ok2, d2) = criteria_1_2()
        dt = time.perf_counter() - t0
        for n, ok, d in ((1, ok1, d1), (2, ok2, d2)):
            if n in ids:
                out.append(_entry(n, ok, d, dt))
    for n in ids:
        if n in (1, 2):
            continue
        t0 = time.perf_counter()
        ok, d = _RUNNERS[n]()
        out.append(_entry(n, ok, d, time.perf_counter() - t0))
    return sorted(out, key=lambda c: c["id"])


def _entry(n, ok, details, seconds):
    name, budget = CRITERIA[n]
    in_time = budget is None or seconds <= budget
    return {"id": n, "name": name, "passed": bool(ok and in_time), "correct": bool(ok),
            "seconds": round(seconds, 3), "budget_seconds": budget, "details": details}


def format_line(c: dict) -> str:
    budget = f"/{c['budget_seconds']}s" if c["budget_seconds"] else ""
    return f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']:>2} {c['name']} ({c['seconds']:.2f}s{budget})"


def run_suite(only=None, echo: bool = False) -> dict:
    ids = sorted(set(only)) if only else sorted(CRITERIA)
    bad = [n for n in ids if n not in CRITERIA]
    if bad:
        from .errors import InvalidInput
        raise InvalidInput(f"unknown criteria {bad}")
    results = _run(ids)
    if echo:
        for c in results:
            sys.stderr.write(format_line(c) + "\n")
    return {"criteria": results, "passed": all(c["passed"] for c in results)}
