"""
Exception hierarchy shared by every bargmann module.
"""
from typing import Any, Dict, Optional


class BargmannError(Exception):
    """Base class for all propagator-library errors."""
    pass


class StateParamsError(BargmannError):
    """Invalid coherent-state parameter set."""
    pass


class ModelDomainError(BargmannError):
    """A Hamiltonian symbol was evaluated outside its domain."""
    pass


class IntegrationError(BargmannError):
    """Trajectory integration failed before reaching the final time."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoRootError(BargmannError):
    """Newton shooting did not converge."""

    def __init__(self, message: str, last_v0: Optional[complex] = None):
        super().__init__(message)
        self.last_v0 = last_v0


class CausticAdjacentError(NoRootError):
    """Shooting Jacobian vanished; the iterate sits next to a caustic."""
    pass


class CausticNotFoundError(BargmannError):
    """No caustic inside the scanned interval."""

    def __init__(self, message: str, nearest: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.nearest = nearest or {}


class TransformUndefinedError(BargmannError):
    """Conjugate transform integral does not converge along the chosen contour."""
    pass


class TruncationError(BargmannError):
    """Fock-space truncation failed to converge within the cap."""

    def __init__(self, message: str, required_n: Optional[int] = None):
        super().__init__(message)
        self.required_n = required_n


class PoleProximityError(BargmannError):
    """Evaluation point too close to a known pole."""
    pass


class ConfigError(BargmannError):
    """Scenario configuration is invalid."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if field:
            location = f" [field {field}" + (f", line {line}]" if line else "]")
        super().__init__(f"{message}{location}")
        self.field = field
        self.line = line


class CoalescenceError(BargmannError):
    """The two stationary trajectories of a uniform pair coincide."""
    pass
