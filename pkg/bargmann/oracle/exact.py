"""
Exact propagators in the non-normalized coherent-state convention.

    K(zf*, z0, T) = <zf| exp(-i H T / hbar) |z0>

Number-diagonal models use the Fock sum  sum_m (zf* z0)^m / m! exp(-i E_m T / hbar);
matrix models exponentiate their truncated Hamiltonian.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from bargmann.core.errors import PoleProximityError, TransformUndefinedError, TruncationError
from bargmann.core.states import Label
from bargmann.models.symbols import FOCK_CAP, MatrixModel, ModelSymbol, NumberDiagonalModel
from bargmann.transforms.conjugate import SQRT_2PI_I, conjugate_apply

logger = logging.getLogger(__name__)

TAIL_TOL = 1e-16
POLE_GUARD = 1e-8
SERIES_CAP = 200000


@dataclass(frozen=True)
class SpectrumSpec:
    """What the oracle sums or exponentiates for a model."""
    eigenvalue: Optional[Callable[[np.ndarray], np.ndarray]] = None
    matrix: Optional[np.ndarray] = None
    truncation: Optional[int] = None

    @classmethod
    def for_model(cls, model: ModelSymbol, truncation: Optional[int] = None) -> "SpectrumSpec":
        if isinstance(model, NumberDiagonalModel):
            return cls(eigenvalue=model.eigenvalue, truncation=truncation)
        if isinstance(model, MatrixModel):
            return cls(matrix=model.hamiltonian, truncation=truncation or model.hamiltonian.shape[0])
        raise TypeError(f"no spectrum description for {model!r}")


def fock_truncation(x: complex, cap: int = FOCK_CAP) -> int:
    """Smallest N past the peak with |x|^N / N! < 1e-16 of sum_m |x|^m / m!."""
    a = abs(x)
    if a == 0:
        return 1
    log_a = math.log(a)
    # sum_m |x|^m/m! = e^|x|
    for m in range(1, cap + 1):
        if m > a and m * log_a - math.lgamma(m + 1) - a < math.log(TAIL_TOL):
            return m
    required = int(math.e * a) + 40
    raise TruncationError(f"Fock sum for |zf* z0| = {a:.4g} needs about {required} terms "
                          f"(cap {cap})", required_n=required)


def _is_oscillator(model: ModelSymbol) -> bool:
    return model.model_id == "ho" and hasattr(model, "omega")


def exact_kernel(model: ModelSymbol, zf_star: complex, z0: complex, T: float,
                 truncation: Optional[int] = None) -> complex:
    """K as a function of the complex numbers zf* and z0."""
    x = complex(zf_star) * complex(z0)
    hbar = model.hbar
    if T == 0 and truncation is None:
        return cmath.exp(x)
    if _is_oscillator(model) and truncation is None:
        wt = model.omega * T
        return cmath.exp(x * cmath.exp(-1j * wt) - 0.5j * wt)
    spectrum = SpectrumSpec.for_model(model, truncation)
    if spectrum.eigenvalue is not None:
        size = spectrum.truncation or fock_truncation(x)
        m = np.arange(size)
        energies = np.asarray(spectrum.eigenvalue(m), dtype=float)
        if x == 0:
            return cmath.exp(-1j * energies[0] * T / hbar)
        logs = m * cmath.log(x) - gammaln(m + 1) - 1j * energies * T / hbar
        return complex(np.sum(np.exp(logs)))
    size = spectrum.truncation
    if size > spectrum.matrix.shape[0]:
        raise TruncationError(f"{model.model_id}: truncation {size} exceeds the matrix size "
                              f"{spectrum.matrix.shape[0]}", required_n=size)
    U = expm(-1j * T / hbar * spectrum.matrix[:size, :size])
    k = np.arange(size)
    left = np.power(complex(zf_star), k) * np.exp(-0.5 * gammaln(k + 1))
    right = np.power(complex(z0), k) * np.exp(-0.5 * gammaln(k + 1))
    return complex(left @ U @ right)


def exact_propagator(model: ModelSymbol, z0: Label, zf: Label, T: float,
                     truncation: Optional[int] = None) -> complex:
    """Exact K(zf*, z0, T).

    Args:
        model: Hamiltonian
        z0: Initial label
        zf: Final label
        T: Duration
        truncation: Force a Fock size instead of the tail-bound choice (and skip closed forms)

    Returns:
        The propagator value
    """
    return exact_kernel(model, zf.z0.conjugate(), z0.z0, T, truncation)


def exact_conjugate(model: ModelSymbol, w: complex, z0: Label, T: float) -> complex:
    """Exact conjugate propagator K~(w, z0, T).

    Raises:
        PoleProximityError: within 1e-8 of the oscillator pole z0 exp(-i omega T)
        TransformUndefinedError: |w| <= |z0| for the number-diagonal series
    """
    w = complex(w)
    z = z0.z0
    hbar = model.hbar
    if _is_oscillator(model):
        wt = model.omega * T
        pole = z * cmath.exp(-1j * wt)
        if abs(w - pole) < POLE_GUARD:
            raise PoleProximityError(f"w={w} is within {POLE_GUARD:g} of the pole {pole}")
        return cmath.exp(-0.5j * wt) / (w - pole) / SQRT_2PI_I
    if isinstance(model, NumberDiagonalModel):
        ratio = abs(z) / abs(w) if w != 0 else math.inf
        if ratio >= 1:
            raise TransformUndefinedError(f"series for K~ needs |w| > |z0| (|w|={abs(w):.4g})")
        if z == 0:
            return cmath.exp(-1j * float(model.eigenvalue(np.arange(1))[0]) * T / hbar) / w / SQRT_2PI_I
        size = int(math.log(TAIL_TOL) / math.log(ratio)) + 2
        if size > SERIES_CAP:
            raise TruncationError(f"|z0/w|={ratio:.6f} too close to 1 for the series",
                                  required_n=size)
        m = np.arange(size)
        energies = np.asarray(model.eigenvalue(m), dtype=float)
        terms = np.exp(m * cmath.log(z / w) - 1j * energies * T / hbar)
        return complex(np.sum(terms)) / w / SQRT_2PI_I
    logger.debug(f"exact_conjugate for {model.model_id} via numerical transform")
    return conjugate_apply(lambda zs: exact_kernel(model, zs, z, T), w)
