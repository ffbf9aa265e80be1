"""Exact arithmetic for relatively minimal elliptic fibrations.

Kodaira fibre data, intersection lattices, Zariski decomposition of vertical
divisors, local blow-up calculus and the tangent-bundle pseudo-effectivity
verdict, all over the rationals.
"""

from .invariants import FibrationSpec, report
from .kodaira import KodairaType, fibre_model, normalized_fibre
from .lattice import DivisorVec, Lattice
from .verify import verify_tables
from .zariski import VerticalDivisor, vertical_psef_oracle, zariski_decompose

__version__ = "0.1.0"

__all__ = [
    "DivisorVec",
    "FibrationSpec",
    "KodairaType",
    "Lattice",
    "VerticalDivisor",
    "fibre_model",
    "normalized_fibre",
    "report",
    "verify_tables",
    "vertical_psef_oracle",
    "zariski_decompose",
]
