"""Exact computation of Pisot groups, their symbolic representation and toral codings."""
from .coding import CodingMapSpec, TorusPoint, companion_matrix, endomorphism_A
from .errors import InputRefused, PisotLabError, VerificationFailure
from .field import AlgebraicNumber, parse_element
from .finitary import finitary_classify
from .lattice import group_structure, is_in_pbeta, xi0
from .numeration import expand_positive, greedy_expand, parry_sequence
from .polynomial import PisotPolynomial, parse_polynomial
from .symbolic import PeriodicWord, enumerate_group, recognize_xi, recurrent_sequence, tail_of_coset

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber",
    "CodingMapSpec",
    "InputRefused",
    "PeriodicWord",
    "PisotLabError",
    "PisotPolynomial",
    "TorusPoint",
    "VerificationFailure",
    "companion_matrix",
    "endomorphism_A",
    "enumerate_group",
    "expand_positive",
    "finitary_classify",
    "greedy_expand",
    "group_structure",
    "is_in_pbeta",
    "parry_sequence",
    "parse_element",
    "parse_polynomial",
    "recognize_xi",
    "recurrent_sequence",
    "tail_of_coset",
    "xi0",
]
