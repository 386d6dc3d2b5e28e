"""Conjugate Bargmann transform pair."""
from .conjugate import (
    DEFAULT_LINE,
    DEFAULT_RAY,
    SQRT_2PI_I,
    ContourKind,
    ContourSpec,
    conjugate_apply,
    conjugate_invert,
)

__all__ = [
    "DEFAULT_LINE",
    "DEFAULT_RAY",
    "SQRT_2PI_I",
    "ContourKind",
    "ContourSpec",
    "conjugate_apply",
    "conjugate_invert",
]
