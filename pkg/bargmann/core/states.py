"""
Coherent-state parameters, labels and the (q, p) <-> (u, v) maps.

All coherent states are non-normalized: |z> = exp(z a^dagger)|0>, so that
<z_f|z_0> = exp(z_f^* z_0).
"""
import cmath
import math
from dataclasses import dataclass, field
from typing import Tuple

from .errors import StateParamsError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class StateParams:
    """Widths and action unit of the coherent-state family.

    Args:
        hbar: Action unit, > 0
        b: Position width, > 0
        c: Momentum width, > 0, with b * c == hbar
        mass: Mass entering the implied oscillator frequency
    """
    hbar: float = 1.0
    b: float = 1.0
    c: float = 1.0
    mass: float = 1.0
    omega: float = field(init=False)

    def __post_init__(self) -> None:
        for name in ("hbar", "b", "c", "mass"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise StateParamsError(f"{name} must be finite and positive, got {value}")
        if abs(self.b * self.c - self.hbar) > 1e-12 * max(1.0, self.hbar):
            raise StateParamsError(
                f"widths must satisfy b*c = hbar (b={self.b}, c={self.c}, hbar={self.hbar})"
            )
        object.__setattr__(self, "omega", self.hbar / (self.mass * self.b ** 2))


DEFAULT_PARAMS = StateParams()


@dataclass(frozen=True)
class PhasePoint:
    """Complexified phase-space point in dimensionless (u, v) variables."""
    u: complex
    v: complex

    def is_real_phase(self, tol: float = 1e-12) -> bool:
        """True when v is the complex conjugate of u, i.e. (q, p) are real."""
        return abs(self.v - self.u.conjugate()) <= tol


@dataclass(frozen=True)
class Label:
    """Coherent-state label: mean position and momentum plus the complex z."""
    q0: float
    p0: float
    params: StateParams = DEFAULT_PARAMS
    z0: complex = field(init=False)

    def __post_init__(self) -> None:
        z = complex(self.q0 / self.params.b, self.p0 / self.params.c) / SQRT2
        object.__setattr__(self, "z0", z)

    @classmethod
    def from_complex(cls, z: complex, params: StateParams = DEFAULT_PARAMS) -> "Label":
        """Build the label whose z0 equals ``z``."""
        z = complex(z)
        return cls(q0=SQRT2 * params.b * z.real, p0=SQRT2 * params.c * z.imag, params=params)


def uv_from_qp(q: complex, p: complex, params: StateParams = DEFAULT_PARAMS) -> PhasePoint:
    """Map (q, p), possibly complex, to (u, v)."""
    qs = complex(q) / params.b
    ps = complex(p) / params.c
    return PhasePoint(u=(qs + 1j * ps) / SQRT2, v=(qs - 1j * ps) / SQRT2)


def qp_from_uv(pt: PhasePoint, params: StateParams = DEFAULT_PARAMS) -> Tuple[complex, complex]:
    """Inverse of :func:`uv_from_qp`."""
    q = params.b * (pt.u + pt.v) / SQRT2
    p = params.c * (pt.u - pt.v) / (1j * SQRT2)
    return q, p


def overlap(zf: Label, z0: Label) -> complex:
    """Non-normalized overlap <z_f|z_0> = exp(z_f^* z_0)."""
    return cmath.exp(zf.z0.conjugate() * z0.z0)
