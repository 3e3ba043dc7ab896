"""Exact l2-Betti enclosures over crossed-product algebras C(X) x_T Z."""

__version__ = "0.1.0"

from .betti import BettiResult, Enclosure, betti_enclosure, census, closed_form_enclosure
from .crossed import CrossedElement, CrossedMatrix
from .dynamics import Cylinder, LCFunction, Space
from .exactla import QMatrix, kernel_dim, rank
from .factories import PolySpec, factory
from .odometer import odo_rank
from .ratlang import Automaton, alpha
from .scheme import Scheme, compress, enumerate_windows, preset

__all__ = [
    "Automaton",
    "BettiResult",
    "CrossedElement",
    "CrossedMatrix",
    "Cylinder",
    "Enclosure",
    "LCFunction",
    "PolySpec",
    "QMatrix",
    "Scheme",
    "Space",
    "alpha",
    "betti_enclosure",
    "census",
    "closed_form_enclosure",
    "compress",
    "enumerate_windows",
    "factory",
    "kernel_dim",
    "odo_rank",
    "preset",
    "rank",
]
