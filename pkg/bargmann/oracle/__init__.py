"""Exact propagators used as validation oracles."""
from .exact import SpectrumSpec, exact_conjugate, exact_kernel, exact_propagator, fock_truncation

__all__ = ["SpectrumSpec", "exact_conjugate", "exact_kernel", "exact_propagator", "fock_truncation"]
