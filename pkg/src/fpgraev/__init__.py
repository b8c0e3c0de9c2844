"""Graev extensions of bounded quasi-pseudometrics to free groups, with
finite-instance checks of the neighbourhood structure of free
paratopological groups."""

__version__ = "0.1.0"

from .graev import GraevExtension
from .metrics import QuasiPseudometric, extend_dstar, validate
from .schemes import Representation, Scheme, enumerate_schemes, gamma, nested_normalize
from .topology import FiniteTopology, inverse_topology, validate_topology
from .words import EPSILON, ReducedWord, Word, enumerate_FPn, parse_reduced, parse_word, reduce

__all__ = [
    "EPSILON",
    "FiniteTopology",
    "GraevExtension",
    "QuasiPseudometric",
    "ReducedWord",
    "Representation",
    "Scheme",
    "Word",
    "enumerate_FPn",
    "enumerate_schemes",
    "extend_dstar",
    "gamma",
    "inverse_topology",
    "nested_normalize",
    "parse_reduced",
    "parse_word",
    "reduce",
    "validate",
    "validate_topology",
]
