"""
Coherent-state (Bargmann) propagators: exact oracle, bare semiclassical sum over complex
trajectories, conjugate propagator and the caustic-free uniform Airy approximation.
"""
from bargmann.core import BargmannError, Label, StateParams
from bargmann.models import build_model
from bargmann.oracle import exact_propagator
from bargmann.propagators import (
    PropagatorValue,
    bare_propagator,
    conjugate_propagator,
    uniform_propagator,
)

__version__ = "0.1.0"

__all__ = [
    "BargmannError",
    "Label",
    "PropagatorValue",
    "StateParams",
    "bare_propagator",
    "build_model",
    "conjugate_propagator",
    "exact_propagator",
    "uniform_propagator",
]
