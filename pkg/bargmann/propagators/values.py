"""Result type shared by every propagator method."""
import cmath
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class Method(Enum):
    BARE = "bare"
    CONJUGATE = "conjugate"
    UNIFORM = "uniform"
    EXACT = "exact"


class Status:
    OK = "ok"
    CAUSTIC = "caustic"
    FALLBACK = "fallback"
    FAILED = "failed"


@dataclass
class PropagatorValue:
    """One propagator value with its provenance.

    A bare or conjugate value at a caustic is stored as complex infinity with
    caustic_flag set and status "caustic".
    """
    value: complex
    method: Method
    n_traj: int = 0
    caustic_flag: bool = False
    b_coeff: Optional[complex] = None
    status: str = Status.OK
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def abs2(self) -> float:
        return abs(self.value) ** 2

    @property
    def is_finite(self) -> bool:
        return cmath.isfinite(self.value)

    @classmethod
    def at_caustic(cls, method: Method, n_traj: int, **diagnostics: Any) -> "PropagatorValue":
        return cls(value=complex(float("inf"), float("inf")), method=method, n_traj=n_traj,
                   caustic_flag=True, status=Status.CAUSTIC, diagnostics=dict(diagnostics))
