"""The torsion functor Γ_I: annihilator path, support path and colimit check."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra.finite_ring import FiniteIdeal
from .algebra.ideals import Ideal, intersection, quotient
from .algebra import zmod
from .algebra.modules import (
    FiniteModule, Submodule, is_linear, kernel, localize_finite, whole, zero_submodule,
)
from .algebra.polymodule import PolyModule, PolySubmodule
from .errors import InvalidInput, StabilizationCapExceeded, UnsupportedBackend

STEP_CAP = 64


@dataclass
class TorsionChain:
    """The ascending chain (0 :_M I^t), t = 0, 1, ..., t*+1, with entry t* = entry t*+1."""

    ideal: object
    ambient: object
    chain: list = field(default_factory=list)
    stable_index: int = 0

    @property
    def result(self):
        return self.chain[self.stable_index]

    def is_certified(self) -> bool:
        c = self.chain
        if len(c) < self.stable_index + 2:
            return False
        ascending = all(c[i].issubset(c[i + 1]) for i in range(len(c) - 1))
        return ascending and c[self.stable_index] == c[self.stable_index + 1]


def _as_finite_ideal(I, ring) -> FiniteIdeal:
    if isinstance(I, FiniteIdeal):
        return I
    if isinstance(I, (list, tuple)):
        return ring.ideal(I)
    raise InvalidInput("expected an ideal of the module's ring")


def _annihilated(M: FiniteModule, gens) -> Submodule:
    """(0 :_M J) for J generated by ``gens``."""
    if M.k == 0:
        return zero_submodule(M)
    gens = [g for g in gens]
    if not gens:
        return whole(M)
    F = np.concatenate([M.action(g) for g in gens], axis=0)
    K = zmod.group_kernel(F, M.orders, np.tile(M.orders, len(gens)), M.N)
    return Submodule(M, K)


def _gamma_finite(I: FiniteIdeal, M: FiniteModule, within: Submodule | None) -> TorsionChain:
    cert = TorsionChain(I, M)
    power = FiniteIdeal(M.ring, [M.ring.one])
    chain = [zero_submodule(M)]
    for t in range(1, STEP_CAP + 2):
        power = power * I
        ann = _annihilated(M, power.gens)
        if within is not None:
            ann = ann.intersect(within)
        chain.append(ann)
        if len(chain) >= 3 and chain[-2] == chain[-1]:
            cert.chain = chain
            cert.stable_index = len(chain) - 2
            return cert
    raise StabilizationCapExceeded(f"torsion chain did not stabilise within {STEP_CAP} steps")


def _gamma_poly(I: Ideal, N: PolySubmodule) -> TorsionChain:
    M = N.ambient
    if I.ring != M.ring:
        raise InvalidInput("ideal and module live over different rings")
    cert = TorsionChain(I, M)
    Q = list(M.ideals)
    chain = [M.zero()]
    for t in range(1, STEP_CAP + 2):
        Q = [quotient(q, I) for q in Q]
        entry = PolySubmodule(M, [intersection(L, q) if not L.is_unit() else q
                                  for L, q in zip(N.ideals, Q)])
        chain.append(entry)
        if len(chain) >= 3 and chain[-2] == chain[-1]:
            cert.chain = chain
            cert.stable_index = len(chain) - 2
            return cert
    raise StabilizationCapExceeded(f"torsion chain did not stabilise within {STEP_CAP} steps")


def gamma(I, M):
    """Γ_I(M) = ∪_t (0 :_M I^t) as a submodule of the ambient module.

    ``M`` may be a module or a submodule; the result carries its certificate
    in ``.chain``.
    """
    if isinstance(M, FiniteModule):
        cert = _gamma_finite(_as_finite_ideal(I, M.ring), M, None)
    elif isinstance(M, Submodule):
        cert = _gamma_finite(_as_finite_ideal(I, M.ambient.ring), M.ambient, M)
    elif isinstance(M, PolyModule):
        cert = _gamma_poly(I, M.whole())
    elif isinstance(M, PolySubmodule):
        cert = _gamma_poly(I, M)
    else:
        raise UnsupportedBackend(f"gamma is not available for {type(M).__name__}")
    out = cert.result
    out.chain = cert
    return out


def gamma_by_support(Z, M):
    """{m : m ↦ 0 in M_p for every listed prime p outside Z} (finite rings only)."""
    from .support import FiniteSpec
    if not isinstance(Z.model, FiniteSpec):
        raise UnsupportedBackend("the support path needs an explicit prime list")
    within = None
    if isinstance(M, Submodule):
        within, M = M, M.ambient
    if not isinstance(M, FiniteModule):
        raise UnsupportedBackend("the support path needs a finite module")
    R = M.ring
    out = whole(M) if within is None else within
    for i, e in enumerate(R.local_idempotents):
        if i in Z.data:
            continue
        loc = localize_finite(M, e)
        out = out.intersect(kernel(loc.map, M, loc.module))
    return out


def gamma_colimit_check(I, chain) -> bool:
    """colim Γ_I(M_j) = Γ_I(colim M_j) for a finite chain.

    ``chain`` is a list of modules ``[M_1, ..., M_k]`` with maps
    ``[f_1, ..., f_{k-1}]`` given as ``(modules, maps)``; the colimit of a
    finite chain is its last term, with each M_j mapped there by the composite.
    Polynomial chains are lists of nested submodules of one ambient module.
    """
    modules, maps = chain
    if not modules:
        raise InvalidInput("empty chain")
    if isinstance(modules[0], (PolySubmodule, PolyModule)):
        subs = [m.whole() if isinstance(m, PolyModule) else m for m in modules]
        for a, b in zip(subs, subs[1:]):
            if not a.issubset(b):
                raise InvalidInput("polynomial chains must be nested submodules")
        lhs = None
        for s in subs:
            g = gamma(I, s)
            lhs = g if lhs is None else lhs + g
        rhs = gamma(I, subs[-1])
        return lhs == rhs
    last = modules[-1]
    for j, F in enumerate(maps):
        if not is_linear(F, modules[j], modules[j + 1]):
            raise InvalidInput(f"map {j} is not a module homomorphism")
    # composite maps into the colimit
    comps = []
    for j in range(len(modules)):
        C = np.eye(modules[j].k, dtype=np.int64)
        for F in maps[j:]:
            C = np.asarray(F, dtype=np.int64) @ C
        comps.append(last.reduce(C) if last.k else C)
    lhs = zero_submodule(last)
    for j, M in enumerate(modules):
        g = gamma(I, M)
        if j < len(maps) and modules[j + 1].k:
            # Γ is a functor: f_j(Γ M_j) ⊆ Γ M_{j+1}
            if not gamma(I, modules[j + 1]).contains(np.asarray(maps[j]) @ g.gens):
                return False
        if last.k and M.k:
            lhs = lhs + Submodule(last, comps[j] @ g.gens)
    return lhs == gamma(I, last)
