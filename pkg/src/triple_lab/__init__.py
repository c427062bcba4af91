"""triple_lab: numerics for bounded symmetric domains in matrix triples.

Triple products and Bergman operator calculus on three concrete models,
Mobius transvections of the open unit ball, radial weights with certified
associated-weight envelopes, and boundedness diagnostics for composition
operators between weighted spaces of ball-valued holomorphic maps.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    DomainError,
    InvalidMapError,
    NumericalFailureError,
    SingularMatrixError,
    TripleLabError,
    UsageError,
)
from .linalg import CMatrix, Spectrum, principal_sqrt, solve_linear, spectral_norm, spectrum
from .sampling import SamplingBudget, stream
from .triples import (
    TripleElement,
    TripleModel,
    axiom_suite,
    bergman_rep,
    bergman_sqrt,
    box_rep,
    disc,
    element,
    hilbert,
    matrix,
    op_norm_triple,
    parse_model,
    quadratic_rep,
    triple_norm,
    triple_product,
)
from .mobius import (
    MobiusMap,
    mobius_apply,
    mobius_apply_series,
    mobius_inverse,
    mobius_map,
    norm_identity_residual,
    round_trip_residual,
    sphere_sup,
    symmetry_apply,
)
from .weights import (
    AssociatedWeightEstimate,
    Weight,
    associated_upper_lp,
    associated_upper_mono,
    boundary_l,
    build_associated_estimate,
    condition_I_check,
    constant_weight,
    doubling_check,
    expdecay_weight,
    moment,
    parse_weight,
    power_weight,
    table_weight,
    weight_domination,
)
from .compop import (
    HoloMap,
    compose_maps,
    consistency_matrix,
    criterion_sup_ratio,
    criterion_tail,
    identity_map,
    linear_map,
    map_apply,
    mobius_holo,
    normalize_at_origin,
    parse_map,
    power_map,
    schwarz_check,
    spot_check_mobius_family,
    theorem_verdict,
)

__all__ = [
    "AssociatedWeightEstimate",
    "HoloMap",
    "MobiusMap",
    "Weight",
    "associated_upper_lp",
    "associated_upper_mono",
    "boundary_l",
    "build_associated_estimate",
    "compose_maps",
    "condition_I_check",
    "consistency_matrix",
    "constant_weight",
    "criterion_sup_ratio",
    "criterion_tail",
    "doubling_check",
    "expdecay_weight",
    "identity_map",
    "linear_map",
    "map_apply",
    "mobius_apply",
    "mobius_apply_series",
    "mobius_holo",
    "mobius_inverse",
    "mobius_map",
    "moment",
    "norm_identity_residual",
    "normalize_at_origin",
    "parse_map",
    "parse_weight",
    "power_map",
    "power_weight",
    "round_trip_residual",
    "schwarz_check",
    "sphere_sup",
    "spot_check_mobius_family",
    "symmetry_apply",
    "table_weight",
    "theorem_verdict",
    "weight_domination",
    "CMatrix",
    "DomainError",
    "InvalidMapError",
    "NumericalFailureError",
    "SamplingBudget",
    "SingularMatrixError",
    "Spectrum",
    "TripleElement",
    "TripleLabError",
    "TripleModel",
    "UsageError",
    "axiom_suite",
    "bergman_rep",
    "bergman_sqrt",
    "box_rep",
    "disc",
    "element",
    "hilbert",
    "matrix",
    "op_norm_triple",
    "parse_model",
    "principal_sqrt",
    "quadratic_rep",
    "solve_linear",
    "spectral_norm",
    "spectrum",
    "stream",
    "triple_norm",
    "triple_product",
    "__version__",
]
