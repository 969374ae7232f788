"""GL-submodules of the quotients H_q(r, n) of generalized Reed-Muller codes."""

from __future__ import annotations

__version__ = "0.1.0"

from .duality import c_map, gl_equivalent, orbit, theta, verify_duality
from .factors import (
                       composition_chain,
                       counting_series,
                       dim_formula,
                       factor_action,
                       irreducibility_sample_check,
                       nonisomorphism_evidence,
                       total_length,
)
from .gf import FieldElement, FieldSizeError, FieldSpec, field_of_order, make_field
from .glaction import (
                       GroupElement,
                       action_matrix,
                       action_matrix_combinatorial,
                       action_matrix_direct,
                       apply,
                       apply_h,
                       generators,
)
from .lattice import (
                       TPoset,
                       closure_oracle,
                       enumerate_signatures,
                       ideals_enumerate,
                       module_of_ideal,
                       t_signature,
                       verify_theorem38,
)
from .polyfun import (
                       HElement,
                       ReducedPolynomial,
                       enumerate_omega,
                       pairing,
                       parse_polynomial,
)

__all__ = [
                       "FieldElement",
                       "FieldSizeError",
                       "FieldSpec",
                       "GroupElement",
                       "HElement",
                       "ReducedPolynomial",
                       "TPoset",
                       "action_matrix",
                       "action_matrix_combinatorial",
                       "action_matrix_direct",
                       "apply",
                       "apply_h",
                       "c_map",
                       "closure_oracle",
                       "composition_chain",
                       "counting_series",
                       "dim_formula",
                       "enumerate_omega",
                       "enumerate_signatures",
                       "factor_action",
                       "field_of_order",
                       "generators",
                       "gl_equivalent",
                       "ideals_enumerate",
                       "irreducibility_sample_check",
                       "make_field",
                       "module_of_ideal",
                       "nonisomorphism_evidence",
                       "orbit",
                       "pairing",
                       "parse_polynomial",
                       "t_signature",
                       "theta",
                       "total_length",
                       "verify_duality",
                       "verify_theorem38",
]
