"""Hamiltonian symbols and the model registry."""
from .symbols import (
    MODEL_REGISTRY,
    MatrixModel,
    ModelSymbol,
    NumberDiagonalModel,
    SymbolJet,
    build_model,
    harmonic_oscillator,
    poisson_truncation,
    quartic_number,
    symbol_jet,
)

__all__ = [
    "MODEL_REGISTRY",
    "MatrixModel",
    "ModelSymbol",
    "NumberDiagonalModel",
    "SymbolJet",
    "build_model",
    "harmonic_oscillator",
    "poisson_truncation",
    "quartic_number",
    "symbol_jet",
]
