"""Repeat-until-success Clifford+T synthesis of z-rotations on two qubits."""

from __future__ import annotations

from ._core import BACKEND
from .angles import Angle
from .pipeline import SearchParams, single_qubit_design
from .ring import CyclotomicInt, RingUnitary, Root2Int
from .rus2q import RusProtocol, rus_synthesis, synthesize
from .verify import validate_protocol

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Angle",
    "CyclotomicInt",
    "RingUnitary",
    "Root2Int",
    "RusProtocol",
    "SearchParams",
    "rus_synthesis",
    "single_qubit_design",
    "synthesize",
    "validate_protocol",
]
