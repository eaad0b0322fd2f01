"""Units of Burnside rings of small finite groups.

Build a group from a spec string, wrap it in a BurnsideRing, and compute
its unit group four independent ways; see README for the tour.
"""

from .burnside import BurnsideElem, BurnsideRing, NotInEpsilonFamily, ring_of
from .groups import (
    Group,
    GuardExceeded,
    IsoClass,
    SpecParseError,
    UnsupportedSpecError,
    build_from_permutations,
    build_preset,
    classify,
    quotient_group,
)
from .lattice import (
    MoebiusTable,
    Section,
    SectionClass,
    Subgroup,
    SubgroupTable,
    all_subgroups,
    enumerate_sections,
    moebius,
    realize_subgroup,
)
from .bisets import (
    BisetMatrix,
    ProductContext,
    deflation_matrix,
    defres_matrix,
    dual_action,
    elementary_matrix,
    factorize,
    indinf_matrix,
    induction_matrix,
    inflation_matrix,
    iso_matrix,
    restriction_matrix,
    section_ring,
    transitive_biset,
)
from .units import (
    UnitGroupDescription,
    compute_ranks,
    faithful_units,
    iota,
    sectional_limit_rank,
    theorem_image_rank,
    units_oracle,
    yoshida_rank,
)
from .functor_lab import (
    IdentityReport,
    KernelReport,
    epsilon_identities,
    kernel_L,
    remark_invariant_forms,
)

__version__ = "0.1.0"

__all__ = [
    "BisetMatrix",
    "BurnsideElem",
    "BurnsideRing",
    "Group",
    "GuardExceeded",
    "IdentityReport",
    "IsoClass",
    "KernelReport",
    "MoebiusTable",
    "NotInEpsilonFamily",
    "ProductContext",
    "Section",
    "SectionClass",
    "SpecParseError",
    "Subgroup",
    "SubgroupTable",
    "UnitGroupDescription",
    "UnsupportedSpecError",
    "all_subgroups",
    "build_from_permutations",
    "build_preset",
    "classify",
    "compute_ranks",
    "deflation_matrix",
    "defres_matrix",
    "dual_action",
    "elementary_matrix",
    "enumerate_sections",
    "epsilon_identities",
    "factorize",
    "faithful_units",
    "indinf_matrix",
    "induction_matrix",
    "inflation_matrix",
    "iota",
    "iso_matrix",
    "kernel_L",
    "moebius",
    "quotient_group",
    "realize_subgroup",
    "remark_invariant_forms",
    "restriction_matrix",
    "ring_of",
    "section_ring",
    "sectional_limit_rank",
    "theorem_image_rank",
    "transitive_biset",
    "units_oracle",
    "yoshida_rank",
]
