"""Finite commutative rings, their unit groups, and which groups occur as unit groups."""

from .analyzer import UnitGroupReport, analyze, filtration_report, split_units, unit_group, verify_power_lemma
from .builders import (
    BuildRecipe,
    build_example_2,
    build_example_p,
    build_from_recipe,
    build_odd_family,
    build_truncated,
    build_two_family,
    build_zn,
    find_irreducible,
    galois_ring,
    parse_recipe,
    predicted_unit_group,
)
from .groups import AbelianGroupType, BlackBoxGroup, blackbox_structure, format_group, parse_group
from .realizability import (
    CardinalityTerm,
    RealizabilityVerdict,
    Status,
    cyclic_realizable,
    ditor_realizable,
    enumerate_cardinalities,
    enumerate_terms,
    field_product_realizable,
    group_realizable,
    local_factor_necessary,
    local_factor_sufficient,
    odd_order_classify,
)
from .ring import FiniteRing, RingElement, direct_product, factor_ring, is_local, make_ring

__version__ = "0.1.0"
