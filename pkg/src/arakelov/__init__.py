"""Arakelov divisor arithmetic and theta-series sizes for number fields."""

from .bundles import (ArakelovBundle, bundle_chi, bundle_degree, bundle_dual,
                      bundle_from_descriptor, bundle_h0, bundle_rr_defect,
                      divisor_bundle, realize_bundle, steinitz_bundle,
                      twist_bundle)
from .divisors import (ArakelovDivisor, DivisorClassPoint, add_divisors,
                       canonical_divisor, chi, degree, divisor_class_point,
                       divisor_norm, dual_divisor, effectivity, metric_norm,
                       pic_point, principal_divisor, trivial_divisor)
from .errors import BudgetError, NumericError, ValidationError
from .field import (FieldElement, FractionalIdeal, NumberField,
                    dedekind_coefficients, field_from_descriptor,
                    ideal_contains_one, ideal_inverse, ideal_mul,
                    kronecker_symbol, quadratic_field, rational_field,
                    trace_dual)
from .lattice import (DivisorLattice, ThetaResult, dual_lattice,
                      enumerate_below, hermite_constant, realize,
                      shortest_vector, theta_sum)
from .size import (EtaReport, ScanResult, SizeEvaluation, b0, bound_check,
                   eta_invariant, h0, omega_constants, pic0_argmax, pic0_scan,
                   rr_defect)
from .zeta import (CurveZetaSpec, ZetaValue, completed_zeta,
                   curve_two_variable_zeta, curve_zeta_from_profile,
                   restriction_check, two_variable_zeta_q,
                   zeta_via_pic_integral)

__version__ = "0.1.0"
