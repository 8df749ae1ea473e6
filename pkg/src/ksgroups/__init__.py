"""Finite groups, direct-product decompositions and truncated profinite towers."""

from .corpus import corpus, named_group, parse_named
from .endo import (
    EndoKind,
    automorphic_summand,
    classify_normal_endo,
    endo_sum,
    enumerate_endomorphisms,
    fitting_decomposition,
    is_normal_endomorphism,
)
from .errors import GroupError
from .groups import (
    FiniteGroup,
    GroupHom,
    NormalSubgroup,
    Subgroup,
    build_group_from_permutations,
    build_group_from_table,
    direct_product,
    normal_subgroups,
    quotient,
    verbal_power_subgroup,
)
from .iso import are_isomorphic, find_isomorphism, fingerprint
from .krull_schmidt import (
    InternalDecomposition,
    cancel_factor,
    complement_splits,
    decompose,
    is_indecomposable,
    match_decompositions,
    property_p_match,
)
from .tower import (
    FiberPowerSpec,
    ProfiniteTower,
    fiber_power,
    fin_images,
    levelwise_cancellation,
    same_fin,
    tower_decompose,
    validate_tower,
    verbal_quotient_tower,
    verify_image,
)

__all__ = [
    "EndoKind",
    "FiberPowerSpec",
    "FiniteGroup",
    "GroupError",
    "GroupHom",
    "InternalDecomposition",
    "NormalSubgroup",
    "ProfiniteTower",
    "Subgroup",
    "are_isomorphic",
    "automorphic_summand",
    "build_group_from_permutations",
    "build_group_from_table",
    "cancel_factor",
    "classify_normal_endo",
    "complement_splits",
    "corpus",
    "decompose",
    "direct_product",
    "endo_sum",
    "enumerate_endomorphisms",
    "fiber_power",
    "fin_images",
    "find_isomorphism",
    "fingerprint",
    "fitting_decomposition",
    "is_indecomposable",
    "is_normal_endomorphism",
    "levelwise_cancellation",
    "match_decompositions",
    "named_group",
    "normal_subgroups",
    "parse_named",
    "property_p_match",
    "quotient",
    "same_fin",
    "tower_decompose",
    "validate_tower",
    "verbal_power_subgroup",
    "verbal_quotient_tower",
    "verify_image",
]

__version__ = "0.1.0"
