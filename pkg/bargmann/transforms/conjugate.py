"""
Conjugate Bargmann application and its inverse.

    f~(w)  = (1/sqrt(2 pi i)) int_gamma  f(z*) exp(-z* w) dz*      (ray z* = r e^{-i arg w})
    f(z*)  = (1/sqrt(2 pi i)) int_gamma' f~(w) exp(+z* w) dw       (line w = (alpha + i t) e^{i arg z})

sqrt(2 pi i) is taken on the principal branch, e^{i pi/4} sqrt(2 pi).
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from bargmann.core.errors import TransformUndefinedError
from bargmann.utils.quadrature import complex_quad

logger = logging.getLogger(__name__)

SQRT_2PI_I = cmath.exp(0.25j * math.pi) * math.sqrt(2 * math.pi)
TAIL_REL_TOL = 1e-10
MAX_DOUBLINGS = 12


class ContourKind(Enum):
    RAY = "ray"
    SHIFTED_LINE = "shifted_line"


@dataclass(frozen=True)
class ContourSpec:
    """Integration path and resolution for the forward or inverse transform.

    Args:
        kind: Ray for the forward transform, shifted line for the inverse
        alpha: Offset of the inverse line, > 0
        r_max: Ray truncation; None selects it from the decay rate and tail checks
        t_max: Line truncation; None integrates the whole line with a Fourier quadrature
        n_points: Subinterval budget handed to the adaptive quadrature
    """
    kind: ContourKind = ContourKind.RAY
    alpha: float = 1.0
    r_max: Optional[float] = None
    t_max: Optional[float] = None
    n_points: int = 200

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.n_points < 10:
            raise ValueError(f"n_points must be at least 10, got {self.n_points}")


DEFAULT_RAY = ContourSpec(ContourKind.RAY)
DEFAULT_LINE = ContourSpec(ContourKind.SHIFTED_LINE)


def conjugate_apply(f: Callable[[complex], complex], w: complex,
                    contour: ContourSpec = DEFAULT_RAY) -> complex:
    """Forward transform f~(w) along the ray where z* w is real and positive.

    Args:
        f: Function of z*, analytic along the ray
        w: Evaluation point, |w| > 0
        contour: Ray specification

    Returns:
        f~(w)

    Raises:
        TransformUndefinedError: the integrand does not decay along the ray
    """
    w = complex(w)
    if w == 0:
        raise ValueError("conjugate_apply needs |w| > 0 to orient the ray")
    if contour.kind is not ContourKind.RAY:
        raise ValueError("conjugate_apply integrates along a ray contour")
    rate = abs(w)
    direction = cmath.exp(-1j * cmath.phase(w))

    def integrand(r: float) -> complex:
        return f(r * direction) * math.exp(-r * rate) * direction

    def segment(a: float, b: float) -> complex:
        with np.errstate(all="ignore"):
            try:
                return complex_quad(integrand, a, b, limit=contour.n_points)
            except OverflowError as exc:
                raise TransformUndefinedError(f"integrand overflows on [{a:.3g}, {b:.3g}]") from exc

    if contour.r_max is not None:
        return segment(0.0, contour.r_max) / SQRT_2PI_I

    r_max = 40.0 / rate
    total = segment(0.0, r_max)
    previous_tail = math.inf
    for _ in range(MAX_DOUBLINGS):
        tail = segment(r_max, 2 * r_max)
        if not cmath.isfinite(tail):
            raise TransformUndefinedError(f"non-finite tail beyond r={r_max:.3g} at w={w}")
        total += tail
        if abs(tail) <= TAIL_REL_TOL * abs(total):
            return total / SQRT_2PI_I
        if abs(tail) >= previous_tail:
            raise TransformUndefinedError(f"integrand grows along the ray at w={w} (r={r_max:.3g})")
        previous_tail = abs(tail)
        r_max *= 2
    raise TransformUndefinedError(f"tail still above tolerance at r={r_max:.3g} for w={w}")


def conjugate_invert(ftil: Callable[[complex], complex], z_star: complex,
                     contour: ContourSpec = DEFAULT_LINE) -> complex:
    """Inverse transform f(z*) on the line w = (alpha + i t) e^{i arg z}.

    On that line z* w = |z| (alpha + i t), so the integral is a Fourier integral in t and is
    evaluated with the cos/sin-weighted quadrature over the half line.

    Raises:
        TransformUndefinedError: f~ does not decay along the line
    """
    z_star = complex(z_star)
    if contour.kind is not ContourKind.SHIFTED_LINE:
        raise ValueError("conjugate_invert integrates along a shifted line contour")
    k = abs(z_star)
    phase = cmath.exp(-1j * cmath.phase(z_star)) if k > 0 else 1.0
    alpha = contour.alpha

    def g(t: float) -> complex:
        return ftil((alpha + 1j * t) * phase)

    near, far = abs(g(1e3)), abs(g(1e4))
    if not math.isfinite(far) or (far > 1e-300 and far >= near):
        raise TransformUndefinedError(f"f~ does not decay along the line through alpha={alpha}")

    upper = np.inf if contour.t_max is None else contour.t_max
    with np.errstate(all="ignore"):
        if k == 0:
            integral = complex_quad(lambda t: g(t) + g(-t), 0.0, upper, limit=contour.n_points)
        else:
            even = complex_quad(lambda t: g(t) + g(-t), 0.0, upper,
                                limit=contour.n_points, weight="cos", wvar=k)
            odd = complex_quad(lambda t: g(t) - g(-t), 0.0, upper,
                               limit=contour.n_points, weight="sin", wvar=k)
            integral = even + 1j * odd
    # dw = i e^{i arg z} dt and exp(z* w) = exp(k alpha) exp(i k t)
    return 1j * phase * math.exp(k * alpha) * integral / SQRT_2PI_I
