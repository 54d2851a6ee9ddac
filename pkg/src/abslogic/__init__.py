"""Finite abstract logics, distributive lattices, Heyting algebras and their
dual spaces, with morphism checks and exhaustive enumeration of small models."""
from .abstract_logic import (
    AbstractLogic,
    GeneratorReport,
    LogicClass,
    TheoryReport,
    check_disjunction,
    classify_logic,
    closure,
    entails,
    generator_report,
    is_theory,
    prime_extension_avoiding,
    prime_separation,
    theory_report,
    validate_logic,
)
from .core_order import (
    ExprSet,
    FiniteLattice,
    FinitePoset,
    HeytingAlgebra,
    chain_lattice,
    diamond,
    filters,
    heyting_implication,
    is_distributive,
    lattice_from_order,
    m3,
    n5,
    upset_lattice,
    upsets,
    validate_poset,
)
from .documents import StructureDocument, parse_document, serialize, to_document
from .duality import (
    DualSpace,
    QuotientLattice,
    dual_space,
    heyting_to_logic,
    lattice_to_logic,
    logic_to_heyting,
    logic_to_lattice,
    roundtrip_lattice,
    roundtrip_logic,
    space_to_lattice,
)
from .enumeration import (
    EnumBudget,
    canonical_form,
    canonical_iso_class,
    enumerate_distributive_lattices,
    enumerate_filter_logics,
    enumerate_heyting_algebras,
    enumerate_posets,
)
from .errors import StructureError
from .morphisms import (
    StabilityReport,
    StructureMap,
    check_downset_preimage,
    compose,
    correspondence_check,
    dualize_map,
    enumerate_maps,
    is_esakia_morphism,
    is_heyting_hom,
    is_lattice_hom,
    stability_report,
)

__version__ = "0.1.0"
