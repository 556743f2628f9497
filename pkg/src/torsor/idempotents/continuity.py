"""Ring maps ψ: S → T and the continuity criteria relating idempotents on both sides."""
from __future__ import annotations

import itertools

import numpy as np

from ..algebra import modules as fm
from ..algebra.finite_ring import FiniteIdeal, FiniteRing, RingMap, enumerate_ring_maps
from ..errors import InvalidInput, RingMismatch
from ..homotopy.complexes import ChainComplex, ComplexMap, complex_support, module_complex, quasi_iso_witness
from ..support import FiniteSpec, StableSet
from .pairs import (
    IdempotentPair, _ctx, hom_pairs, iota, is_idempotent, membership_DA, topology_to_idempotent,
)

CONDITIONS = ("i", "ii", "ii_prime", "v_prime", "iv")


def extend_complex(C: ChainComplex, psi: RingMap) -> ChainComplex:
    """ψ^*C, degreewise M ↦ M ⊗_S T (flat enough for degreewise projective C)."""
    terms = {i: fm.extend_scalars(C.term(i), psi) for i in C.degrees}
    diffs = {}
    for i in C.degrees:
        if i + 1 in terms:
            diffs[i] = fm.extend_map(C.d(i), C.term(i), C.term(i + 1), terms[i], terms[i + 1])
    return ChainComplex(psi.target, terms, diffs, name=f"ψ^*{C.name}")


def restrict_complex(C: ChainComplex, psi: RingMap) -> ChainComplex:
    """ψ_*C: the same groups and differentials viewed over S."""
    terms = {i: fm.restrict_scalars(C.term(i), psi) for i in C.degrees}
    return ChainComplex(psi.source, terms, {i: C.d(i) for i in C.degrees}, name=f"ψ_*{C.name}")


def extend_pair(P: IdempotentPair, psi: RingMap) -> IdempotentPair:
    """(ψ^*A, ψ^*α) with ψ^*𝒪_S identified with 𝒪_T through the counit."""
    A, alpha = P.A, P.alpha
    ctx_T = _ctx(psi.target)
    EA = extend_complex(A, psi)
    U_S = alpha.target.term(0)
    EU = fm.extend_scalars(U_S, psi)
    counit = fm.extension_counit(EU)
    a0 = fm.extend_map(alpha.at(0), A.term(0), U_S, EA.term(0), EU)
    ealpha = ComplexMap(EA, ctx_T.unit(), {0: counit @ a0})
    return IdempotentPair(ctx_T, EA, ealpha)


def _all_ideals(R: FiniteRing) -> list[FiniteIdeal]:
    ideals = {R.ideal([x]) for x in range(R.size)}
    while True:
        new = {a + b for a in ideals for b in ideals} - ideals
        if not new:
            return sorted(ideals, key=lambda J: (J.size, sorted(J.elements)))
        ideals |= new


def supported_family(R: FiniteRing, Z: StableSet, extra=()) -> list[ChainComplex]:
    """Cyclic modules R/J with V(J) ⊆ Z (one per ideal), as complexes, plus ``extra``."""
    out = []
    for J in _all_ideals(R):
        if J.is_unit():
            continue
        if R.zero_set(J) <= Z.data:
            out.append(module_complex(fm.cyclic(R, J)))
    for E in extra:
        if complex_support(E) <= Z:
            out.append(E)
    return out


def continuity_check(psi: RingMap, Z_S: StableSet, Z_T: StableSet) -> dict:
    """Evaluate (i), (ii), (ii)′, (v)′ and the prime-pullback criterion independently."""
    S, T = psi.source, psi.target
    if Z_S.model != FiniteSpec(S) or Z_T.model != FiniteSpec(T):
        raise RingMismatch("stable sets must live on the source and target of ψ")
    ctx_S, ctx_T = _ctx(S), _ctx(T)
    PA = topology_to_idempotent(ctx_S, Z_S)
    PB = topology_to_idempotent(ctx_T, Z_T)
    B = PB.A
    ePA = extend_pair(PA, psi)
    if not is_idempotent(ctx_T, ePA.A, ePA.alpha, cross_check=False):
        raise AssertionError("ψ^* did not preserve idempotence")
    rep, wit = {}, {}
    # (i) B ≼ ψ^*A, via the hom-set
    rep["i"] = len(hom_pairs(ctx_T, PB, ePA)) == 1
    # (ii) α ⊗_ψ 1_B : ψ^*A ⊗_T B → B is an isomorphism
    phi = iota(ctx_T, ePA.alpha, B)
    rep["ii"] = ctx_T.is_iso(phi)
    if not rep["ii"]:
        wit["ii"] = quasi_iso_witness(phi)
    # (ii)' α ⊗_S 1 on ψ_*B over S
    rB = restrict_complex(B, psi)
    rep["ii_prime"] = membership_DA(ctx_S, PA, rB)
    # (v)' ψ_* carries T-complexes supported in Z_T into D_A(S)
    rep["v_prime"] = True
    for E in supported_family(T, Z_T, extra=(B,)):
        if not membership_DA(ctx_S, PA, restrict_complex(E, psi)):
            rep["v_prime"] = False
            wit["v_prime"] = {"complex": E.name, "profiles": [p.to_json() for p in E.profiles()]}
            break
    # (iv) ψ^{-1}(q) ∈ Z_S for q ∈ Z_T
    bad = [q for q in sorted(Z_T.data) if psi.prime_preimage(q) not in Z_S.data]
    rep["iv"] = not bad
    if bad:
        wit["iv"] = {"prime": T.prime_label(bad[0]), "preimage": S.prime_label(psi.prime_preimage(bad[0]))}
    rep["agree"] = len({rep[c] for c in CONDITIONS}) == 1
    rep["witnesses"] = wit
    return rep


def is_continuous(psi: RingMap, Z_S: StableSet, Z_T: StableSet) -> bool:
    rep = continuity_check(psi, Z_S, Z_T)
    if not rep["agree"]:
        raise AssertionError(f"continuity criteria disagree: {rep}")
    return rep["iv"]


def continuity_sweep(rings) -> dict:
    """Every ring map among ``rings`` and every pair of stable sets."""
    total, disagreements = 0, []
    for S, T in itertools.product(rings, repeat=2):
        sets_S = FiniteSpec(S).all_stable_sets()
        sets_T = FiniteSpec(T).all_stable_sets()
        for psi in enumerate_ring_maps(S, T):
            for Z_S, Z_T in itertools.product(sets_S, sets_T):
                rep = continuity_check(psi, Z_S, Z_T)
                total += 1
                if not rep["agree"]:
                    disagreements.append((repr(psi), str(Z_S), str(Z_T), rep))
    return {"checked": total, "disagreements": disagreements}


def parse_ring_map(S: FiniteRing, T: FiniteRing, text) -> RingMap:
    """A ring map from basis images: '1', '[1]', '1,x' or a JSON list; 'id' for the identity."""
    if isinstance(text, str):
        raw = text.strip()
        if raw in ("id", "identity"):
            if S != T:
                raise InvalidInput("identity map needs equal source and target")
            return RingMap(S, T, np.arange(S.size))
        raw = raw.strip("[]")
        images = [p.strip() for p in raw.split(",") if p.strip()]
    else:
        images = list(text)
    if len(images) != S.g:
        raise InvalidInput(f"ring map needs {S.g} basis image(s)")
    vals = [T.parse_element(x) if isinstance(x, str) else int(x) for x in images]
    return RingMap.from_basis_images(S, T, vals)
