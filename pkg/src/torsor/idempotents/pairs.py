"""Idempotent pairs (A, α: A → 𝒪) in a monoidal context, and what they classify."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from ..algebra import modules as fm
from ..algebra.finite_ring import FiniteRing
from ..errors import InconsistentSupport, InvalidInput, NotAMorphism, UnsupportedBackend
from ..homotopy.cech import koszul_stable
from ..homotopy.complexes import (
    ChainComplex, _same_shape, complex_support, module_complex, quasi_iso_witness,
)
from ..homotopy.derived import is_degreewise_projective
from ..support import FiniteSpec, StableSet
from .context import DerivedContext, PreorderedContext


@functools.lru_cache(maxsize=64)
def derived_context(ring: FiniteRing) -> DerivedContext:
    return DerivedContext(ring)


@dataclass
class IdempotentPair:
    ctx: object
    A: object
    alpha: object
    verified: bool = False
    info: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.A, self.alpha))


def _as_pair(ctx, p):
    if isinstance(p, IdempotentPair):
        return p.A, p.alpha
    return p


def _check_alpha(ctx, A, alpha):
    U = ctx.unit()
    tgt, src = ctx.target(alpha), ctx.source(alpha)
    if isinstance(ctx, DerivedContext):
        if not (tgt is U or _same_shape(tgt, U)) or not (src is A or _same_shape(src, A)):
            raise NotAMorphism("α must be a map A → 𝒪")
        if not is_degreewise_projective(A):
            raise UnsupportedBackend("idempotent checks need A degreewise projective (replace A by a free model)")
    elif src != A or tgt != U:
        raise NotAMorphism("α must be a map A → 𝒪")


def _composites(ctx, A, alpha):
    """r∘(1⊗α) and l∘(α⊗1), both A⊗A → A."""
    one = ctx.identity(A)
    c_r = ctx.compose(ctx.right_unitor(A), ctx.tensor_maps(one, alpha))
    c_l = ctx.compose(ctx.left_unitor(A), ctx.tensor_maps(alpha, one))
    return c_r, c_l


def iota(ctx, alpha, E):
    """ι_α(E) = l_E ∘ (α ⊗ 1_E): A ⊗ E → E."""
    return ctx.compose(ctx.left_unitor(E), ctx.tensor_maps(alpha, ctx.identity(E)))


def j_map_report(ctx, A, alpha) -> dict:
    """Injectivity of j_{A,A}, j_{A,𝒪} and surjectivity of j_{𝒪,A}.

    j_{F,G}: Hom(A⊗F, A⊗G) → Hom(A⊗F, G), f ↦ l_G ∘ (α⊗1_G) ∘ f.
    """
    U = ctx.unit()
    out = {}
    for name, F, G, want in (("AA", A, A, "injective"), ("AO", A, U, "injective"),
                             ("OA", U, A, "surjective")):
        AF, AG = ctx.tensor(A, F), ctx.tensor(A, G)
        H1, H2 = ctx.homs(AF, [AG, G])
        ker, img = ctx.postcompose(H1, iota(ctx, alpha, G), H2)
        out[name] = (ker == 1) if want == "injective" else (img == H2.size)
    out["holds"] = all(out.values())
    return out


def idempotent_report(ctx, A, alpha) -> dict:
    _check_alpha(ctx, A, alpha)
    c_r, c_l = _composites(ctx, A, alpha)
    rep = {"r_iso": ctx.is_iso(c_r), "l_iso": ctx.is_iso(c_l)}
    rep["equal"] = ctx.equal(c_r, c_l)
    rep["idempotent"] = rep["r_iso"] and rep["l_iso"] and rep["equal"]
    rep["symmetry_is_identity"] = ctx.equal(ctx.symmetry(A, A), ctx.identity(ctx.tensor(A, A)))
    if getattr(ctx, "has_homs", False):
        rep["j_maps"] = j_map_report(ctx, A, alpha)
    if isinstance(ctx, DerivedContext) and not rep["r_iso"]:
        rep["witness"] = quasi_iso_witness(c_r)
    return rep


def is_idempotent(ctx, A, alpha, cross_check: bool = True) -> bool:
    """r∘(1⊗α) and l∘(α⊗1) are equal isomorphisms A⊗A → A.

    With ``cross_check`` the j-map criterion and the symmetry identity are
    computed too and must agree; a disagreement is an internal error.
    """
    if not cross_check:
        _check_alpha(ctx, A, alpha)
        c_r, c_l = _composites(ctx, A, alpha)
        return ctx.is_iso(c_r) and ctx.is_iso(c_l) and ctx.equal(c_r, c_l)
    rep = idempotent_report(ctx, A, alpha)
    if "j_maps" in rep and rep["j_maps"]["holds"] != rep["idempotent"]:
        raise AssertionError(f"j-map criterion disagrees with the composites: {rep}")
    if rep["idempotent"] and not rep["symmetry_is_identity"]:
        raise AssertionError("symmetry on A⊗A is not the identity for an idempotent pair")
    return rep["idempotent"]


def make_pair(ctx, A, alpha, cross_check: bool = True) -> IdempotentPair:
    ok = is_idempotent(ctx, A, alpha, cross_check)
    if not ok:
        raise InvalidInput("the pair is not idempotent")
    return IdempotentPair(ctx, A, alpha, verified=True)


def fold_pair(ctx, M: fm.FiniteModule):
    """(M, fold): every generator of M goes to 1.  Only linear when M is free."""
    import numpy as np
    from ..homotopy.complexes import ComplexMap
    R = ctx.ring
    A = module_complex(M)
    ones = np.zeros((R.g, M.k), dtype=np.int64)
    for j in range(M.k):
        ones[:, j] = R.coords(R.one)
    return A, ComplexMap(A, ctx.unit(), {0: ones})


def tensor_pairs(ctx, P, Q) -> IdempotentPair:
    """(A⊗B, μ∘(α⊗β)) with μ = l_𝒪 = r_𝒪."""
    A, alpha = _as_pair(ctx, P)
    B, beta = _as_pair(ctx, Q)
    gamma = ctx.compose(ctx.left_unitor(ctx.unit()), ctx.tensor_maps(alpha, beta))
    return make_pair(ctx, ctx.tensor(A, B), gamma, cross_check=False)


def leq(ctx, Q, P) -> bool:
    """B ≼ A: l_B ∘ (α⊗1_B): A⊗B → B is an isomorphism."""
    B, _ = _as_pair(ctx, Q)
    A, alpha = _as_pair(ctx, P)
    return ctx.is_iso(iota(ctx, alpha, B))


def hom_pairs(ctx, Q, P, verify_mutual: bool = False) -> list:
    """All λ: B → A with α∘λ = β (there is at most one)."""
    B, beta = _as_pair(ctx, Q)
    A, alpha = _as_pair(ctx, P)
    H, HO = ctx.homs(B, [A, ctx.unit()])
    want = ctx.key(HO, beta)
    out = [lam for lam in H.elements() if ctx.key(HO, ctx.compose(alpha, lam)) == want]
    if len(out) > 1:
        raise AssertionError(f"{len(out)} morphisms of idempotent pairs; expected at most one")
    if verify_mutual and out:
        back = hom_pairs(ctx, P, Q)
        if back and not ctx.is_iso(ctx.compose(back[0], out[0])):
            raise AssertionError("composite of mutual morphisms is not an automorphism")
    return out


def membership_DA(ctx, P, E) -> bool:
    """E ∈ D_A: ι_α(E) = l_E ∘ (α⊗1_E) is an isomorphism."""
    A, alpha = _as_pair(ctx, P)
    ok = ctx.is_iso(iota(ctx, alpha, E))
    if isinstance(ctx, DerivedContext):
        by_support = complex_support(E) <= idempotent_support(ctx, P)
        if by_support != ok:
            raise InconsistentSupport("D_A membership disagrees with homology support containment")
    return ok


def coreflection_check(ctx, P, samples) -> list:
    """Violations of the ⊗-coreflection axioms for Γ = A⊗(−), ι = ι_α.

    For every sample E: Γ(ι(E)) and ι(ΓE) must be equal isomorphisms ΓΓE → ΓE.
    For every pair (F, G) of samples: Hom(ΓF, ΓG) → Hom(ΓF, G) via ι(G) must be
    bijective.
    """
    A, alpha = _as_pair(ctx, P)
    bad = []
    for n, E in enumerate(samples):
        GE = ctx.tensor(A, E)
        g_iota = ctx.tensor_maps(ctx.identity(A), iota(ctx, alpha, E))
        iota_g = iota(ctx, alpha, GE)
        if not ctx.is_iso(g_iota):
            bad.append({"sample": n, "check": "Gamma(iota) iso"})
        if not ctx.is_iso(iota_g):
            bad.append({"sample": n, "check": "iota(Gamma) iso"})
        if not ctx.equal(g_iota, iota_g):
            bad.append({"sample": n, "check": "Gamma(iota) = iota(Gamma)"})
    if getattr(ctx, "has_homs", False):
        for (m, F), (n, G) in itertools.product(enumerate(samples), repeat=2):
            GF, GG = ctx.tensor(A, F), ctx.tensor(A, G)
            H1, H2 = ctx.homs(GF, [GG, G])
            ker, img = ctx.postcompose(H1, iota(ctx, alpha, G), H2)
            if ker != 1 or img != H2.size or H1.size != H2.size:
                bad.append({"sample": (m, n), "check": "Hom bijection",
                            "sizes": [H1.size, H2.size], "kernel": ker, "image": img})
    return bad


# ---------------------------------------------------------------- derived instances over finite rings

def _ctx(x) -> DerivedContext:
    if isinstance(x, DerivedContext):
        return x
    if isinstance(x, FiniteRing):
        return derived_context(x)
    raise InvalidInput("expected a finite ring or its derived context")


def complement_idempotent(ring: FiniteRing, Z: StableSet) -> int:
    """t = Σ e_q over primes q outside Z, so that Z(t) = Z."""
    t = ring.zero
    for i, e in enumerate(ring.local_idempotents):
        if i not in Z.data:
            t = ring.add(t, e)
    return t


def topology_to_idempotent(ring, Z: StableSet) -> IdempotentPair:
    """(𝒦•_∞(t), augmentation) with t = Σ_{q∉Z} e_q."""
    ctx = _ctx(ring)
    R = ctx.ring
    if not isinstance(Z.model, FiniteSpec) or Z.model.ring != R:
        raise InvalidInput("stable set is not on this ring's primes")
    t = complement_idempotent(R, Z)
    K = koszul_stable(R, [t])
    aug = K.augmentation
    # K.unit is a fresh unit complex of the same shape; route α to the context's unit
    from ..homotopy.complexes import ComplexMap
    alpha = ComplexMap(K, ctx.unit(), {i: aug.at(i) for i in K.degrees}, check=False)
    pair = make_pair(ctx, K, alpha, cross_check=False)
    pair.info["t"] = t
    pair.info["stable_set"] = Z
    return pair


def idempotent_support(ring, P) -> StableSet:
    """{p : A ⊗ k(p) not acyclic}, compared with the union of homology supports."""
    ctx = _ctx(ring.ctx if isinstance(ring, IdempotentPair) else ring)
    A, _ = _as_pair(ctx, P)
    R = ctx.ring
    by_field = set()
    for i in range(len(R.primes)):
        k = module_complex(fm.residue_field(R, i))
        if not ctx.tensor(A, k).is_acyclic():
            by_field.add(i)
    by_homology = complex_support(A)
    if frozenset(by_field) != by_homology.data:
        raise InconsistentSupport(f"residue-field support {sorted(by_field)} != homology support "
                                  f"{sorted(by_homology.data)}")
    return by_homology


def classify_idempotents(ring: FiniteRing, check_pairs: bool = True) -> list:
    """One (stable set, pair) per idempotent class, verified."""
    ctx = _ctx(ring)
    spec = FiniteSpec(ctx.ring)
    if spec.n > 5:
        raise InvalidInput("classification is limited to rings with at most 5 primes")
    out = []
    for Z in spec.all_stable_sets():
        pair = topology_to_idempotent(ctx, Z)
        if idempotent_support(ctx, pair) != Z:
            raise AssertionError(f"round trip failed for {Z}")
        out.append((Z, pair))
    if check_pairs:
        for (Z1, p1), (Z2, p2) in itertools.combinations(out, 2):
            if leq(ctx, p1, p2) and leq(ctx, p2, p1):
                raise AssertionError(f"classes {Z1} and {Z2} are isomorphic")
    return out


def automorphism_orbit(ctx, A) -> dict:
    """The α making (A, α) idempotent, and the orbit of one of them under Aut_D(A).

    Expected to be a single orbit.
    """
    HO, HA = ctx.homs(A, [ctx.unit(), A])
    idem = {}
    for alpha in HO.elements():
        if is_idempotent(ctx, A, alpha, cross_check=False):
            idem[ctx.key(HO, alpha)] = alpha
    autos = [s for s in HA.elements() if HA.is_iso(s)]
    orbit = set()
    if idem:
        alpha0 = next(iter(idem.values()))
        orbit = {ctx.key(HO, ctx.compose(alpha0, s)) for s in autos}
    return {"idempotent": set(idem), "orbit": orbit, "automorphisms": len(autos),
            "single_orbit": set(idem) == orbit}


# ---------------------------------------------------------------- preordered instances

def chain_poset(n: int) -> dict:
    return {"elements": list(range(n)), "leq": [(i, i + 1) for i in range(n - 1)]}


def boolean_lattice(atoms) -> dict:
    atoms = list(atoms)
    els = [frozenset(c) for r in range(len(atoms) + 1) for c in itertools.combinations(atoms, r)]
    return {"elements": els, "leq": [(a, b) for a in els for b in els if a <= b]}


def preordered_instance(desc, name: str = "P") -> PreorderedContext:
    """Build and exhaustively verify a preordered monoidal context.

    ``desc`` is {"elements": [...], "leq": [(a, b), ...]} (a ≤ b; reflexive and
    transitive closure taken) or an existing PreorderedContext.
    """
    if isinstance(desc, PreorderedContext):
        ctx = desc
    else:
        ctx = PreorderedContext(desc["elements"], desc.get("leq", []), name)
    top = ctx.unit()
    pairs = {a: (a, ctx._arrow(a, top)) for a in ctx.elements}
    for a, p in pairs.items():
        if not is_idempotent(ctx, *p):
            raise AssertionError(f"object {a!r} is not idempotent")
    for a, b in itertools.product(ctx.elements, repeat=2):
        if leq(ctx, pairs[b], pairs[a]) != ctx.le(b, a):
            raise AssertionError(f"leq disagrees with the order at ({b!r}, {a!r})")
    return ctx


def derived_preordered(ring: FiniteRing) -> tuple[PreorderedContext, list]:
    """I_D of the derived context as a preordered context, meet = tensor_pairs, top = 𝒪."""
    ctx = _ctx(ring)
    classes = classify_idempotents(ctx)
    labels = [Z.data for Z, _ in classes]
    order = [(labels[i], labels[j]) for (i, (_, p)), (j, (_, q)) in
             itertools.product(enumerate(classes), repeat=2) if leq(ctx, p, q)]
    P = preordered_instance({"elements": labels, "leq": order}, name=f"I_D({ctx.ring.name})")
    # meet in the poset is the class of the tensor product
    for (i, (_, p)), (j, (_, q)) in itertools.combinations_with_replacement(enumerate(classes), 2):
        T = tensor_pairs(ctx, p, q)
        if idempotent_support(ctx, T).data != P.tensor(labels[i], labels[j]):
            raise AssertionError("tensor_pairs is not the meet")
    return P, classes


def is_order_isomorphic(P: PreorderedContext, Q: PreorderedContext, bijection: dict) -> bool:
    if sorted(map(repr, bijection)) != sorted(map(repr, P.elements)):
        return False
    if len(set(bijection.values())) != len(Q.elements):
        return False
    return all(P.le(a, b) == Q.le(bijection[a], bijection[b])
               for a, b in itertools.product(P.elements, repeat=2))
