"""Sigma functions, prime forms and their identities on cyclic (r, s) curves."""

from .curve import (AffinePoint, CurveSpec, build_curve, galois_exponents, gap_sequence,
                    lift_points, load_curve, monomial_basis, random_curve, young_data)
from .periods import PeriodData, period_data
from .sigma import SigmaEvaluator, build_sigma, sigma_for
from .abel import LiftedPoint, abel, abel_divisor
from .primeform import PrimeForm, PrimeFormValue, prime_form_sigma
from .verify import IdentityReport, run_suite

__all__ = [
    "AffinePoint", "CurveSpec", "build_curve", "galois_exponents", "gap_sequence",
    "lift_points", "load_curve", "monomial_basis", "random_curve", "young_data",
    "PeriodData", "period_data", "SigmaEvaluator", "build_sigma", "sigma_for",
    "LiftedPoint", "abel", "abel_divisor", "PrimeForm", "PrimeFormValue",
    "prime_form_sigma", "IdentityReport", "run_suite",
]
