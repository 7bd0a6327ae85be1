"""Exact verification tools for class multiplication coefficients and
Baer-Suzuki type generation bounds."""

from .chartable import CharacterTable, ClassInfo, load_fixture, load_table, validate
from .cyclo import Cyclotomic, E
from .structconst import class_mult_coeff, coeff_sweep
from .betachain import (BetaCertificate, alpha_bound, beta_upper_bound, check_sporadic_theorem,
                        load_alpha_data, verify_certificate)
from .permgroup import Permutation, PermGroup, PrimeSet

__all__ = [
    "BetaCertificate", "CharacterTable", "ClassInfo", "Cyclotomic", "E", "PermGroup", "Permutation",
    "PrimeSet", "alpha_bound", "beta_upper_bound", "check_sporadic_theorem", "class_mult_coeff",
    "coeff_sweep", "load_alpha_data", "load_fixture", "load_table", "validate", "verify_certificate",
]
