"""Exact closed forms for multivariate Chebyshev generating sums.

The package builds the common denominator polynomials w_n, the numerators of
the mixed first/second-kind generating functions, the correlation-matrix
lattice sums f_T/f_U, and their q-deformed relatives, all over exact
rational arithmetic, and verifies every closed form against independent
brute-force series oracles.
"""

from .cheb import ChebIndex, cheb_eval, cheb_linearize_UU, cheb_poly, geom_trig_sum, multi_trig_sum
from .denom import WPoly, build_w, build_w_recursive, w_specialize_one
from .errors import (ArityError, ChebsumError, ConvergenceError, DegeneratePivot,
                     DomainError, MissingAssignment, OverlapError, ScaleError,
                     SingularAngle, UnknownId)
from .forms import compare_form, known_form, known_form_spec, registry_ids
from .genfun import (GenSpec, RationalFn, chi_angle_eval, chi_closed, chi_closed_value,
                     chi_series_oracle, marginal_check, numerator_l,
                     series_convolution_residual)
from .kibble import (CorrMatrix, f_U3_closed, f_U3_compare, kibble_closed_eval,
                     kibble_denominator, kibble_series_oracle)
from .poly import (Poly, TrigSum, TrigTerm, poly_arith, poly_eval, poly_rho_coeff,
                   trig_product_to_sum, trig_to_poly)
from .qseries import (QContext, conjecture_probe, d2_coeff, d_coeff, hb_poly,
                      idb_check, q_symbols, tn_construct)

__all__ = [
    "ChebIndex", "cheb_eval", "cheb_linearize_UU", "cheb_poly", "geom_trig_sum",
    "multi_trig_sum", "WPoly", "build_w", "build_w_recursive", "w_specialize_one",
    "compare_form", "known_form", "known_form_spec", "registry_ids", "GenSpec",
    "RationalFn", "chi_angle_eval", "chi_closed", "chi_closed_value",
    "chi_series_oracle", "marginal_check", "numerator_l",
    "series_convolution_residual", "CorrMatrix", "f_U3_closed", "f_U3_compare",
    "kibble_closed_eval", "kibble_denominator", "kibble_series_oracle", "Poly",
    "TrigSum", "TrigTerm", "poly_arith", "poly_eval", "poly_rho_coeff",
    "trig_product_to_sum", "trig_to_poly", "QContext", "conjecture_probe",
    "d2_coeff", "d_coeff", "hb_poly", "idb_check", "q_symbols", "tn_construct",
    "ChebsumError", "ArityError", "ConvergenceError", "DegeneratePivot",
    "DomainError", "MissingAssignment", "OverlapError", "ScaleError",
    "SingularAngle", "UnknownId",
]
