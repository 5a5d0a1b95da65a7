"""Exact homological perturbation for differential graded Lie algebras:
contractions onto homology, twisting cochains, perturbed Chevalley-Eilenberg
differentials and the formal Kuranishi construction."""

from .contraction import Contraction, build_contraction, suspend_contraction, validate_contraction
from .dgla import Dgla, quadratic_data, truncate_minus1_minus2, validate
from .graded import ChainComplex, GradedMap, GradedSpace
from .hpt import check_formality, check_twisting_cochain, compute_tau_and_D
from .kuranishi import analyze, formal_inverse, kuranishi_coalgebra, kuranishi_map, obstruction_series
from .linalg import Matrix, Rational
from .problem import ProblemSpec, load_example, load_problem, parse_problem
from .symcoalg import SymCoalgebra, TruncationError

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "Contraction",
    "Dgla",
    "GradedMap",
    "GradedSpace",
    "Matrix",
    "ProblemSpec",
    "Rational",
    "SymCoalgebra",
    "TruncationError",
    "analyze",
    "build_contraction",
    "check_formality",
    "check_twisting_cochain",
    "compute_tau_and_D",
    "formal_inverse",
    "kuranishi_coalgebra",
    "kuranishi_map",
    "load_example",
    "load_problem",
    "obstruction_series",
    "parse_problem",
    "quadratic_data",
    "suspend_contraction",
    "truncate_minus1_minus2",
    "validate",
    "validate_contraction",
]
