"""Jets of flows of polynomial vector fields and shift-function recovery."""

from .borel import BorelRealization, bump, finite_diff_jet, realize_jet
from .errors import (InconsistentJetError, JetflowError, NoSuchFactorError,
                     NotDivisibleError, NotOnSubgroupError, ParseError)
from .fields import (BinaryFormProfile, ExpSubgroupClass, StarReport,
                     binary_form_profile, check_star, classify_exp_subgroup,
                     cross_product_field, reduced_hamiltonian,
                     stabilizer_tangent, verify_integral_representation)
from .jet import (BiJet, FlowJet, VectorFieldJet, flow_bijet, flow_taylor_coeffs,
                  flow_time_jet, hatted_shift_jet, jet_inverse, shift_jet)
from .linalg import RatMatrix
from .parsing import parse_poly
from .poly import (EXACT, FLOAT, HomogPoly, MultiPoly, PolyMap,
                   bivariate_homog_gcd, compose, divide_exact)
from .recover import (RecoveryResult, delta0_linear, divide_by_initial_part,
                      recover_shift_jet, verify_residual)

__all__ = [
    "BiJet", "BinaryFormProfile", "BorelRealization", "EXACT",
    "ExpSubgroupClass", "FLOAT", "FlowJet", "HomogPoly",
    "InconsistentJetError", "JetflowError", "MultiPoly", "NoSuchFactorError",
    "NotDivisibleError", "NotOnSubgroupError", "ParseError", "PolyMap",
    "RatMatrix", "RecoveryResult", "StarReport", "VectorFieldJet",
    "binary_form_profile", "bivariate_homog_gcd", "bump", "check_star",
    "classify_exp_subgroup", "compose", "cross_product_field",
    "delta0_linear", "divide_by_initial_part", "divide_exact",
    "finite_diff_jet", "flow_bijet", "flow_taylor_coeffs", "flow_time_jet",
    "hatted_shift_jet", "jet_inverse", "parse_poly", "realize_jet",
    "recover_shift_jet", "reduced_hamiltonian", "shift_jet",
    "stabilizer_tangent", "verify_integral_representation", "verify_residual",
]
