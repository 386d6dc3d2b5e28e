"""Coherent-state conventions shared by all modules."""
from .errors import (
    BargmannError,
    CausticAdjacentError,
    CausticNotFoundError,
    CoalescenceError,
    ConfigError,
    IntegrationError,
    ModelDomainError,
    NoRootError,
    PoleProximityError,
    StateParamsError,
    TransformUndefinedError,
    TruncationError,
)
from .states import DEFAULT_PARAMS, Label, PhasePoint, StateParams, overlap, qp_from_uv, uv_from_qp

__all__ = [
    "BargmannError",
    "CausticAdjacentError",
    "CausticNotFoundError",
    "CoalescenceError",
    "ConfigError",
    "IntegrationError",
    "ModelDomainError",
    "NoRootError",
    "PoleProximityError",
    "StateParamsError",
    "TransformUndefinedError",
    "TruncationError",
    "DEFAULT_PARAMS",
    "Label",
    "PhasePoint",
    "StateParams",
    "overlap",
    "qp_from_uv",
    "uv_from_qp",
]
