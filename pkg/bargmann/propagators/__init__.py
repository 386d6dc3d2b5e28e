"""Bare, conjugate and uniform semiclassical propagators."""
from .semiclassical import (
    bare_propagator,
    conjugate_contribution,
    conjugate_propagator,
    continued_vv_family,
    continued_vv_root,
    quadratic_inverse,
    trajectory_contribution,
    uu_problem,
    vv_problem,
)
from .uniform import (
    UniformPair,
    UniformTracker,
    assemble_pair,
    coalescence_limit,
    cubic_exponent,
    fallback_to_bare,
    pair_amplitude,
    uniform_propagator,
)
from .values import Method, PropagatorValue, Status

__all__ = [
    "Method",
    "PropagatorValue",
    "Status",
    "UniformPair",
    "UniformTracker",
    "assemble_pair",
    "bare_propagator",
    "coalescence_limit",
    "conjugate_contribution",
    "conjugate_propagator",
    "continued_vv_family",
    "continued_vv_root",
    "cubic_exponent",
    "fallback_to_bare",
    "pair_amplitude",
    "quadratic_inverse",
    "trajectory_contribution",
    "uniform_propagator",
    "uu_problem",
    "vv_problem",
]
