"""Character theory of SL_2(F_q) through the oscillator representation and
the eta-correspondence, with the commutator-map uniformity estimates."""

from .dualpair import (
    CharacterTable,
    IntegrityError,
    IrrepRecord,
    QuadraticSpace,
    assemble_chartable,
    eta_decompose,
    steinberg_char,
)
from .field import AdditiveCharacter, FieldElement, find_nonsquare, gauss_sum, legendre
from .group import GroupElement, classify, enumerate_classes, enumerate_group
from .harmonic import brute_fibers, commutator_report, frobenius_N, partial_sums
from .oscillator import OscillatorRep, char_omega_closed, omega

__version__ = "0.1.0"

__all__ = [
    "AdditiveCharacter",
    "CharacterTable",
    "FieldElement",
    "GroupElement",
    "IntegrityError",
    "IrrepRecord",
    "OscillatorRep",
    "QuadraticSpace",
    "assemble_chartable",
    "brute_fibers",
    "char_omega_closed",
    "classify",
    "commutator_report",
    "enumerate_classes",
    "enumerate_group",
    "eta_decompose",
    "find_nonsquare",
    "frobenius_N",
    "gauss_sum",
    "legendre",
    "omega",
    "partial_sums",
    "steinberg_char",
]
