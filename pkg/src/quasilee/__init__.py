"""2-quasi-perfect Lee codes from finite-field generator sets, and their Cayley graphs."""

from .code import LeeCode, build_coset_table, lee_distance, lee_weight, syndrome_decode
from .field import FieldElement, FieldParams
from .generators import (
    Family,
    GeneratorSet,
    Ordering,
    QuadraticForm,
    build_generator_set,
    cubic_set,
    hyperbola_set,
    li_norm_set,
    norm_one_set,
    quadratic_unit_set,
)
from .kernels import BACKEND
from .spectral import full_spectrum
from .verify import Verdict, check_quasi_perfect

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Family",
    "FieldElement",
    "FieldParams",
    "GeneratorSet",
    "LeeCode",
    "Ordering",
    "QuadraticForm",
    "Verdict",
    "build_coset_table",
    "build_generator_set",
    "check_quasi_perfect",
    "cubic_set",
    "full_spectrum",
    "hyperbola_set",
    "lee_distance",
    "lee_weight",
    "li_norm_set",
    "norm_one_set",
    "quadratic_unit_set",
    "syndrome_decode",
]
