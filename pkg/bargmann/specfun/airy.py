"""
Airy functions of complex argument and the cubic oscillatory integral

    (1/sqrt(2 pi)) * int (c0 + c1 X) exp{i (A - B X + X^3/3)} dX

along contours joining the three valleys of exp(i X^3 / 3).
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import airy as _scipy_airy
from scipy.special import airye as _scipy_airye

from bargmann.utils.quadrature import complex_quad

logger = logging.getLogger(__name__)

OMEGA = cmath.exp(2j * math.pi / 3)
SQRT_2PI = math.sqrt(2 * math.pi)
MAX_ARGUMENT = 1e4
# valley k of exp(i X^3/3) is centred on the ray arg X = pi/6 + 2 pi k / 3
VALLEY_ANGLES = tuple(math.pi / 6 + 2 * math.pi * k / 3 for k in range(3))
SECTOR_EDGE_TOL = 1e-12


class AiryBranch(Enum):
    """Airy solutions Ai(omega^k z), omega = exp(2 pi i / 3)."""
    PRINCIPAL = 0
    ROT_PLUS = 1
    ROT_MINUS = 2

    @property
    def rotation(self) -> complex:
        return OMEGA ** self.value


@dataclass(frozen=True)
class AiryValue:
    """Ai and Ai' at the (rotated) argument, possibly in scaled form.

    The represented values are ai * exp(scale_exponent) and ai_prime * exp(scale_exponent).
    """
    ai: complex
    ai_prime: complex
    branch: AiryBranch = AiryBranch.PRINCIPAL
    scale_exponent: complex = 0j

    @property
    def is_scaled(self) -> bool:
        return self.scale_exponent != 0

    def unscaled(self) -> Tuple[complex, complex]:
        factor = cmath.exp(self.scale_exponent) if self.is_scaled else 1.0
        return self.ai * factor, self.ai_prime * factor


def airy(z: complex) -> AiryValue:
    """Principal Ai(z), Ai'(z).

    Values that under- or overflow are returned in scaled form with
    scale_exponent = -(2/3) z^(3/2).
    """
    z = complex(z)
    if not abs(z) < MAX_ARGUMENT:
        raise ValueError(f"|z| must be below {MAX_ARGUMENT:g}, got {abs(z):.6g}")
    with np.errstate(all="ignore"):
        ai, aip, _, _ = _scipy_airy(z)
    ai, aip = complex(ai), complex(aip)
    if cmath.isfinite(ai) and cmath.isfinite(aip) and (ai != 0 or z == 0):
        return AiryValue(ai, aip)
    eai, eaip, _, _ = _scipy_airye(z)
    zeta = (2.0 / 3.0) * z * cmath.sqrt(z)
    return AiryValue(complex(eai), complex(eaip), scale_exponent=-zeta)


def airy_solution(z: complex, branch: AiryBranch) -> AiryValue:
    """Ai and Ai' evaluated at omega^k z for the branch's k."""
    value = airy(branch.rotation * complex(z))
    return AiryValue(value.ai, value.ai_prime, branch, value.scale_exponent)


def airy_bi(z: complex) -> Tuple[complex, complex]:
    """Bi(z), Bi'(z) from the rotated Ai solutions."""
    up = airy_solution(z, AiryBranch.ROT_PLUS).unscaled()
    down = airy_solution(z, AiryBranch.ROT_MINUS).unscaled()
    e_plus, e_minus = cmath.exp(1j * math.pi / 6), cmath.exp(-1j * math.pi / 6)
    bi = e_plus * up[0] + e_minus * down[0]
    bip = e_plus * OMEGA * up[1] + e_minus * OMEGA ** 2 * down[1]
    return bi, bip


Valleys = Tuple[int, int]
ContourHint = Union[str, int, AiryBranch, Valleys]


@dataclass(frozen=True)
class OscillatoryIntegral:
    value: complex
    valleys: Valleys
    on_stokes_line: bool = False


def branch_valleys(branch: AiryBranch) -> Valleys:
    """Contour of branch k runs from valley k+1 to valley k."""
    return (branch.value + 1) % 3, branch.value


def sector_branch(B: complex) -> Tuple[AiryBranch, bool]:
    """Airy solution for -B by thirds of the plane; on an edge returns principal and True.

    The chosen k rotates omega^k (-B) into the oscillatory sector |arg z - pi| < pi/3, where
    both saddles X = +-B^(1/2) lie on the contour.
    """
    theta = cmath.phase(-complex(B))
    edges = (0.0, 2 * math.pi / 3, -2 * math.pi / 3)
    if B == 0 or any(abs(theta - e) < SECTOR_EDGE_TOL for e in edges):
        return AiryBranch.PRINCIPAL, B != 0
    if 0 < theta < 2 * math.pi / 3:
        return AiryBranch.ROT_PLUS, False
    if -2 * math.pi / 3 < theta < 0:
        return AiryBranch.ROT_MINUS, False
    return AiryBranch.PRINCIPAL, False


def _resolve_valleys(B: complex, contour: ContourHint) -> Tuple[Valleys, bool]:
    if isinstance(contour, str):
        if contour != "auto":
            raise ValueError(f"unknown contour hint {contour!r}")
        branch, edge = sector_branch(B)
        if edge:
            logger.warning(f"-B = {-B:.6g} lies on a sector edge; using the principal solution")
        return branch_valleys(branch), edge
    if isinstance(contour, AiryBranch):
        return branch_valleys(contour), False
    if isinstance(contour, (int, np.integer)):
        return branch_valleys(AiryBranch(int(contour) % 3)), False
    a, b = (int(x) % 3 for x in contour)
    if a == b:
        raise ValueError("contour must join two different valleys")
    return (a, b), False


def cubic_oscillatory_integral(A: complex, B: complex, c0: complex, c1: complex,
                               contour: ContourHint = "auto") -> OscillatoryIntegral:
    """Closed-form value of the cubic oscillatory integral in terms of Airy functions.

    Args:
        A: Constant exponent
        B: Linear coefficient
        c0: Constant amplitude
        c1: Linear amplitude
        contour: "auto" (sector rule on -B), a branch or its index, or (from, to) valleys

    Returns:
        OscillatoryIntegral with the valleys used and the sector-edge flag
    """
    (a, b), edge = _resolve_valleys(complex(B), contour)
    if a == (b + 1) % 3:
        k, sign = b, 1.0
    else:
        k, sign = a, -1.0
    branch = AiryBranch(k)
    rot = branch.rotation
    solution = airy_solution(-complex(B), branch)
    # one exponential; exp(iA) and the Airy scale can overflow separately
    envelope = cmath.exp(1j * A + solution.scale_exponent)
    value = sign * SQRT_2PI * envelope * (c0 * rot * solution.ai
                                          - 1j * c1 * rot * rot * solution.ai_prime)
    return OscillatoryIntegral(value=value, valleys=(a, b), on_stokes_line=edge)


def valley_quadrature(A: complex, B: complex, c0: complex, c1: complex,
                      valleys: Valleys) -> complex:
    """Numerical value of the cubic integral along the two valley rays through the origin."""
    a, b = valleys
    # |exp(-r^3/3 + |B| r)| < 1e-18 beyond r_max
    r_max = 3.0
    while r_max ** 3 / 3 - abs(B) * r_max < 42:
        r_max *= 1.25

    def ray(angle: float) -> complex:
        e = cmath.exp(1j * angle)
        return complex_quad(lambda r: (c0 + c1 * r * e) * cmath.exp(-1j * B * r * e - r ** 3 / 3) * e,
                            0.0, r_max, limit=400)

    total = ray(VALLEY_ANGLES[b]) - ray(VALLEY_ANGLES[a])
    return cmath.exp(1j * A) * total / SQRT_2PI


def descent_valleys(B: complex, saddle: complex, direction: complex) -> Valleys:
    """Valleys reached by the steepest-descent path of i(-B X + X^3/3) through a saddle.

    The path is traced backward along -direction and forward along +direction from the
    saddle; returns (valley of the -direction end, valley of the +direction end).
    """
    B, saddle = complex(B), complex(saddle)
    radius = 3.0 * max(1.0, abs(B) ** 0.5) + 3.0
    eps = 1e-3 * max(1.0, abs(saddle))

    def flow(_s: float, y: np.ndarray) -> np.ndarray:
        X = complex(y[0], y[1])
        grad = np.conj(1j * (X * X - B))
        norm = abs(grad) or 1.0
        step = -grad / norm
        return np.array([step.real, step.imag])

    def escaped(_s: float, y: np.ndarray) -> float:
        return math.hypot(y[0], y[1]) - radius

    escaped.terminal = True

    def end_valley(sign: float) -> int:
        start = saddle + sign * eps * direction / abs(direction)
        sol = solve_ivp(flow, (0.0, 10 * radius), [start.real, start.imag], events=escaped,
                        rtol=1e-8, atol=1e-10, max_step=0.05 * radius)
        end = complex(sol.y[0, -1], sol.y[1, -1])
        angle = cmath.phase(end)
        return int(np.argmin([abs(cmath.phase(cmath.exp(1j * (angle - v)))) for v in VALLEY_ANGLES]))

    return end_valley(-1.0), end_valley(1.0)
