"""Exact computations with finite EI categories and their algebras."""

from .algebra import (
    CategoryAlgebra,
    RadicalData,
    RadicalMethod,
    aut_invertibility,
    build_algebra,
    radical,
    semisimple_quotient_module,
)
from .builtins import builtin_category
from .category import (
    FiniteCategory,
    OrderAnalysis,
    above,
    analyze_order,
    below,
    build_group_category,
    build_path_category,
    build_poset_category,
    full_subcategory,
    is_ideal,
    load_category,
    validate_category,
)
from .exactla import ExactMatrix, FieldSpec, kernel_basis, rref, solve
from .homology import (
    PdVerdict,
    ProbeReport,
    Resolution,
    Strategy,
    canonical_cover,
    findim_probe,
    global_dim,
    is_projective,
    proj_dim,
    resolve,
    syzygy,
    verify_support_report,
)
from .rep import (
    Representation,
    build_simple,
    extend_by_zero,
    hom_space,
    induce,
    representable,
    restrict,
    support_analysis,
    validate_rep,
)

__version__ = "0.1.0"
