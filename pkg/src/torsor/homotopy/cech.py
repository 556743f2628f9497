"""Stable Koszul (Čech) complexes and local cohomology over finite rings."""
from __future__ import annotations

import itertools

import numpy as np

from ..algebra import modules as fm
from ..algebra.finite_ring import FiniteIdeal, FiniteRing
from ..algebra.modules import FiniteModule, Localization
from ..errors import InvalidInput
from .complexes import (
    ChainComplex, ComplexMap, InvariantProfile, left_unitor, module_complex, tensor, tensor_map,
    unit_complex,
)


class CechComplex(ChainComplex):
    """𝒦•_∞(t) over a finite ring, with its augmentation to the unit complex."""

    def __init__(self, base: ChainComplex, ts, augmentation_maps: dict, unit: ChainComplex):
        super().__init__(base.ring, {i: base.term(i) for i in base.degrees},
                         {i: base.d(i) for i in base.degrees}, name=base.name,
                         info=base.info, check=False)
        self.ts = tuple(ts)
        self.unit = unit
        self.augmentation = ComplexMap(self, unit, augmentation_maps, check=False)


def _element_list(ring: FiniteRing, ts) -> list[int]:
    if isinstance(ts, FiniteIdeal):
        return ts.canonical_gens or [ring.zero]
    out = []
    for t in ts:
        out.append(ring.parse_element(t) if isinstance(t, str) else int(t))
    return out


def localization_complex(ring: FiniteRing, t: int, unit: ChainComplex | None = None) -> CechComplex:
    """𝒦•_∞(t) = [R → R[1/t]] in degrees 0, 1."""
    unit = unit or unit_complex(ring)
    R = unit.term(0)
    loc = Localization(R, t)
    base = ChainComplex(ring, {0: R, 1: loc.module}, {0: loc.map}, name=f"Č({ring.label(t)})",
                        check=False)
    return CechComplex(base, [t], {0: np.eye(R.k, dtype=np.int64)}, unit)


def koszul_stable(ring: FiniteRing, ts) -> CechComplex:
    """⊗_i 𝒦•_∞(t_i) with augmentation l_𝒪 ∘ (aug ⊗ aug)."""
    ts = _element_list(ring, ts)
    if not ts:
        raise InvalidInput("the stable Koszul complex needs at least one element")
    unit = unit_complex(ring)
    K = localization_complex(ring, ts[0], unit)
    for j, t in enumerate(ts[1:], 2):
        K2 = localization_complex(ring, t, unit)
        T = tensor(K, K2)
        UU = tensor(unit, unit)
        aug = left_unitor(UU).compose(tensor_map(K.augmentation, K2.augmentation, T, UU))
        T.name = f"Č({', '.join(ring.label(x) for x in ts[:j])})"
        K = CechComplex(T, list(K.ts) + [t], {i: aug.at(i) for i in T.degrees}, unit)
    return K


def cech_complex(M: FiniteModule, ts) -> ChainComplex:
    """Čech complex of M built directly from localizations e_T M and incidence signs.

    Term j is ⊕ over j-subsets T of M[1/∏_{i∈T} t_i]; the component T → T ∪ {i}
    is the localization map with sign (-1)^{#{j ∈ T : j < i}}.
    """
    R = M.ring
    ts = _element_list(R, ts)
    d = len(ts)
    subsets = {j: list(itertools.combinations(range(d), j)) for j in range(d + 1)}
    locs = {}
    for j in range(d + 1):
        for T in subsets[j]:
            t = R.one
            for i in T:
                t = R.mul(t, ts[i])
            locs[T] = Localization(M, t)
    terms, diffs, offs = {}, {}, {}
    for j in range(d + 1):
        mods = [locs[T].module for T in subsets[j]]
        terms[j] = fm.direct_sum(mods, R)
        offs[j] = list(np.cumsum([0] + [m.k for m in mods[:-1]]))
    for j in range(d):
        D = np.zeros((terms[j + 1].k, terms[j].k), dtype=np.int64)
        for a, T in enumerate(subsets[j]):
            src = locs[T]
            if not src.module.k:
                continue
            for b, U in enumerate(subsets[j + 1]):
                extra = set(U) - set(T)
                if len(extra) != 1 or not set(T) <= set(U):
                    continue
                i = extra.pop()
                tgt = locs[U]
                if not tgt.module.k:
                    continue
                sign = -1 if sum(1 for x in T if x < i) % 2 else 1
                E = M.action(tgt.idempotent)
                B = tgt.submodule.sq.coords(E @ src.inclusion)
                oa, ob = offs[j][a], offs[j + 1][b]
                D[ob:ob + tgt.module.k, oa:oa + src.module.k] = sign * B
        diffs[j] = D
    return ChainComplex(R, terms, diffs, name=f"Č({', '.join(R.label(x) for x in ts)}; {M.name})")


def cech_tensor(M: FiniteModule, ts) -> ChainComplex:
    """𝒦•_∞(t) ⊗ M as a total tensor complex."""
    return tensor(koszul_stable(M.ring, ts), module_complex(M))


def local_cohomology(I, M, i: int, window=None):
    """H^i_I(M).

    Finite modules: the InvariantProfile of H^i(𝒦•_∞(t) ⊗ M) with t the given
    generators of I.  Polynomial rings: per-multidegree dimensions on a window
    (see ``graded.graded_local_cohomology``).
    """
    if isinstance(M, FiniteModule):
        C = cech_tensor(M, I)
        return C.profile(i)
    from .graded import graded_local_cohomology
    return graded_local_cohomology(I, M, i, window)


def local_cohomology_all(I, M: FiniteModule) -> list[InvariantProfile]:
    C = cech_tensor(M, I)
    d = len(_element_list(M.ring, I))
    return [C.profile(i) for i in range(d + 1)]
