from .context import DerivedContext, MonoidalContext, PreorderedContext
from .continuity import (
    continuity_check, continuity_sweep, extend_complex, extend_pair, is_continuous, parse_ring_map,
    restrict_complex,
)
from .pairs import (
    IdempotentPair, automorphism_orbit, boolean_lattice, chain_poset, classify_idempotents,
    coreflection_check, derived_context, derived_preordered, fold_pair, hom_pairs, idempotent_report,
    idempotent_support, iota, is_idempotent, is_order_isomorphic, leq, make_pair, membership_DA,
    preordered_instance, tensor_pairs, topology_to_idempotent,
)
