"""
Hamiltonian models as smooth symbols H~(u, v) = <v|H|u> / <v|u> with their 2-jets.

Number-diagonal Hamiltonians (H|m> = E_m|m>) have symbols that depend on n = u*v only:
h(n) = exp(-n) * sum_m E_m n^m / m!. Their first and second n-derivatives are the same
Poisson-weighted sums over the first and second differences of E_m.
"""
import cmath
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from bargmann.core.errors import ModelDomainError, TruncationError

logger = logging.getLogger(__name__)

FOCK_CAP = 512
FOCK_REL_TOL = 1e-16

NumberDerivatives = Tuple[complex, complex, complex]


@dataclass(frozen=True)
class SymbolJet:
    """Value and first/second partial derivatives of H~ at one (u, v)."""
    h: complex
    h_u: complex
    h_v: complex
    h_uu: complex
    h_uv: complex
    h_vv: complex

    def is_finite(self) -> bool:
        return all(cmath.isfinite(x) for x in
                   (self.h, self.h_u, self.h_v, self.h_uu, self.h_uv, self.h_vv))


class ModelSymbol(ABC):
    """A Hamiltonian exposed through its smooth coherent-state symbol."""

    number_diagonal: bool = False

    def __init__(self, model_id: str, hbar: float = 1.0):
        self.model_id = model_id
        self.hbar = float(hbar)

    @abstractmethod
    def jet(self, u: complex, v: complex) -> SymbolJet:
        """Evaluate the symbol and its five partials, using closed forms when available."""

    @abstractmethod
    def fock_jet(self, u: complex, v: complex) -> SymbolJet:
        """Evaluate the jet from the Fock-space definition (cross-check oracle)."""

    @abstractmethod
    def matrix(self, size: int) -> np.ndarray:
        """Truncated Hamiltonian matrix in the number basis."""

    def energy(self, u: complex, v: complex) -> complex:
        return self.jet(u, v).h

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.model_id!r}, hbar={self.hbar})"


def _checked(jet: SymbolJet, model_id: str, u: complex, v: complex) -> SymbolJet:
    if not jet.is_finite():
        raise ModelDomainError(f"{model_id}: non-finite symbol at u={u}, v={v}")
    return jet


def poisson_truncation(n: complex, cap: int = FOCK_CAP) -> int:
    """Smallest N past the Poisson peak with |n|^N / N! below 1e-16 of the running sum."""
    a = abs(n)
    if a == 0.0:
        return 3
    log_a = math.log(a)
    log_sum = 0.0
    for m in range(1, cap + 1):
        log_term = m * log_a - math.lgamma(m + 1)
        log_sum = max(log_sum, log_term)
        if m > a and log_term - log_sum < math.log(FOCK_REL_TOL):
            return m + 1
    raise TruncationError(f"Fock sum at |n|={a:.3g} needs more than {cap} terms", required_n=cap)


class NumberDiagonalModel(ModelSymbol):
    """Model with H|m> = E_m|m>; the symbol depends on u, v only through n = u v.

    Args:
        model_id: Identifier used by configuration
        eigenvalue: Vectorized E_m as a function of integer m
        hbar: Action unit
        derivatives: Optional closed form n -> (h, h', h'')
        affine: Optional (a, b) with h'(n) = a n + b exactly
    """

    number_diagonal = True

    def __init__(self, model_id: str, eigenvalue: Callable[[np.ndarray], np.ndarray],
                 hbar: float = 1.0,
                 derivatives: Optional[Callable[[complex], NumberDerivatives]] = None,
                 affine: Optional[Tuple[float, float]] = None):
        super().__init__(model_id, hbar)
        self.eigenvalue = eigenvalue
        self._derivatives = derivatives
        self.affine = affine

    @property
    def has_closed_form(self) -> bool:
        return self._derivatives is not None

    def number_derivatives(self, n: complex) -> NumberDerivatives:
        """(h, h', h'') at n, closed form when known."""
        if self._derivatives is not None:
            return self._derivatives(n)
        return self.fock_number_derivatives(n)

    def fock_number_derivatives(self, n: complex, size: Optional[int] = None) -> NumberDerivatives:
        n = complex(n)
        size = size or poisson_truncation(n)
        m = np.arange(size + 2)
        energies = np.asarray(self.eigenvalue(m), dtype=complex)
        d1 = np.diff(energies)
        d2 = np.diff(energies, 2)
        if n == 0:
            return energies[0], d1[0], d2[0]
        # n^m / m! via logs; complex log keeps the phase
        weights = np.exp(m[:size] * cmath.log(n) - gammaln(m[:size] + 1) - n)
        return (complex(weights @ energies[:size]),
                complex(weights @ d1[:size]),
                complex(weights @ d2[:size]))

    def _jet_from_n(self, u: complex, v: complex, derivs: NumberDerivatives) -> SymbolJet:
        h, hp, hpp = derivs
        n = u * v
        return _checked(SymbolJet(h=h, h_u=hp * v, h_v=hp * u, h_uu=hpp * v * v,
                                  h_uv=hp + n * hpp, h_vv=hpp * u * u),
                        self.model_id, u, v)

    def jet(self, u: complex, v: complex) -> SymbolJet:
        return self._jet_from_n(u, v, self.number_derivatives(u * v))

    def fock_jet(self, u: complex, v: complex) -> SymbolJet:
        return self._jet_from_n(u, v, self.fock_number_derivatives(u * v))

    def matrix(self, size: int) -> np.ndarray:
        return np.diag(np.asarray(self.eigenvalue(np.arange(size)), dtype=complex))


class MatrixModel(ModelSymbol):
    """Model defined by a truncated Fock-space matrix H_jk.

    The symbol is exp(-uv) * sum_jk v^j H_jk u^k / sqrt(j! k!); it is exact only while the
    coherent states involved are well represented in the truncated space.
    """

    def __init__(self, model_id: str, hamiltonian: np.ndarray, hbar: float = 1.0):
        super().__init__(model_id, hbar)
        hamiltonian = np.asarray(hamiltonian, dtype=complex)
        if hamiltonian.ndim != 2 or hamiltonian.shape[0] != hamiltonian.shape[1]:
            raise ModelDomainError(f"{model_id}: Hamiltonian matrix must be square")
        self.hamiltonian = hamiltonian
        k = np.arange(hamiltonian.shape[0])
        self._inv_sqrt_fact = np.exp(-0.5 * gammaln(k + 1))
        self._k = k

    def _powers(self, x: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        k = self._k
        with np.errstate(divide="ignore", invalid="ignore"):
            p0 = np.power(complex(x), k) * self._inv_sqrt_fact
            p1 = np.where(k >= 1, k * np.power(complex(x), np.maximum(k - 1, 0)), 0) * self._inv_sqrt_fact
            p2 = np.where(k >= 2, k * (k - 1) * np.power(complex(x), np.maximum(k - 2, 0)), 0) * self._inv_sqrt_fact
        return p0, p1, p2

    def jet(self, u: complex, v: complex) -> SymbolJet:
        H = self.hamiltonian
        u0, u1, u2 = self._powers(u)
        v0, v1, v2 = self._powers(v)
        P = v0 @ H @ u0
        Pu, Pv = v0 @ H @ u1, v1 @ H @ u0
        Puu, Pvv, Puv = v0 @ H @ u2, v2 @ H @ u0, v1 @ H @ u1
        e = cmath.exp(-u * v)
        jet = SymbolJet(
            h=e * P,
            h_u=e * (Pu - v * P),
            h_v=e * (Pv - u * P),
            h_uu=e * (Puu - 2 * v * Pu + v * v * P),
            h_uv=e * (Puv - u * Pu - v * Pv + (u * v - 1) * P),
            h_vv=e * (Pvv - 2 * u * Pv + u * u * P),
        )
        return _checked(jet, self.model_id, u, v)

    def fock_jet(self, u: complex, v: complex) -> SymbolJet:
        return self.jet(u, v)

    def matrix(self, size: int) -> np.ndarray:
        if size > self.hamiltonian.shape[0]:
            raise TruncationError(
                f"{self.model_id}: requested {size} states, matrix holds {self.hamiltonian.shape[0]}",
                required_n=size)
        return self.hamiltonian[:size, :size]


def harmonic_oscillator(omega: float = 1.0, hbar: float = 1.0) -> NumberDiagonalModel:
    """H = hbar*omega*(a^dagger a + 1/2); symbol hbar*omega*(uv + 1/2)."""
    e = hbar * omega

    def derivatives(n: complex) -> NumberDerivatives:
        return e * (n + 0.5), complex(e), 0j

    model = NumberDiagonalModel("ho", lambda m: e * (m + 0.5), hbar=hbar, derivatives=derivatives,
                                affine=(0.0, e))
    model.omega = omega
    return model


def quartic_number(scale: float = 1.0, hbar: float = 1.0) -> NumberDiagonalModel:
    """H = scale*(a^dagger a + 1/2)^2; symbol scale*((uv)^2 + 2uv + 1/4)."""

    def derivatives(n: complex) -> NumberDerivatives:
        return scale * (n * n + 2 * n + 0.25), scale * (2 * n + 2), complex(2 * scale)

    return NumberDiagonalModel("quartic-number", lambda m: scale * (m + 0.5) ** 2,
                               hbar=hbar, derivatives=derivatives,
                               affine=(2.0 * scale, 2.0 * scale))


MODEL_REGISTRY: Dict[str, Callable[..., ModelSymbol]] = {
    "ho": harmonic_oscillator,
    "quartic-number": quartic_number,
}


def build_model(model_id: str, hbar: float = 1.0, **params) -> ModelSymbol:
    """Instantiate a registered model by id.

    Args:
        model_id: "ho" (accepts omega) or "quartic-number" (accepts scale)
        hbar: Action unit
        **params: Model parameters; unknown keys are ignored with a debug message

    Returns:
        The model symbol
    """
    try:
        factory = MODEL_REGISTRY[model_id]
    except KeyError:
        raise ModelDomainError(f"unknown model id {model_id!r}; known: {sorted(MODEL_REGISTRY)}")
    accepted = {"ho": ("omega",), "quartic-number": ("scale",)}[model_id]
    kwargs = {k: v for k, v in params.items() if k in accepted and v is not None}
    ignored = set(params) - set(accepted)
    if ignored:
        logger.debug(f"{model_id}: ignoring parameters {sorted(ignored)}")
    return factory(hbar=hbar, **kwargs)


def symbol_jet(model: ModelSymbol, u: complex, v: complex) -> SymbolJet:
    """H~ and its five partials at (u, v)."""
    return model.jet(complex(u), complex(v))
