"""
Complex Hamiltonian flow of a symbol H~(u, v) together with its tangent matrix, action,
slow correction and the continuously unwound phases of m_vv and m_uv.

Equations of motion:  i hbar du/dt = dH~/dv,   i hbar dv/dt = -dH~/du.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy.integrate import DOP853

from bargmann.core.errors import IntegrationError, ModelDomainError
from bargmann.models.symbols import ModelSymbol, NumberDiagonalModel

logger = logging.getLogger(__name__)

TOL_RANGE = (1e-13, 1e-6)
PHASE_STEP_CAP = 0.5 * math.pi
MAX_STEP_HALVINGS = 60


def seed_uv_phase(seed: complex) -> float:
    """Phase of the small-time m_uv ~ seed * t on the branch (pi/2, 5pi/2]."""
    phase = cmath.phase(seed)
    return phase + 2 * math.pi if phase <= 0.5 * math.pi else phase


@dataclass(frozen=True)
class TangentMatrix:
    """Linearized flow: [[du(T)/du0, du(T)/dv0], [dv(T)/du0, dv(T)/dv0]]."""
    m_uu: complex
    m_uv: complex
    m_vu: complex
    m_vv: complex

    @classmethod
    def identity(cls) -> "TangentMatrix":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @property
    def det(self) -> complex:
        return self.m_uu * self.m_vv - self.m_uv * self.m_vu

    def as_array(self) -> np.ndarray:
        return np.array([[self.m_uu, self.m_uv], [self.m_vu, self.m_vv]], dtype=complex)


@dataclass
class TrajectoryRecord:
    """Endpoints and accumulated quantities of one complex trajectory of duration T."""
    u0: complex
    v0: complex
    uT: complex
    vT: complex
    S: complex
    G: complex
    M: TangentMatrix
    sigma_vv: float
    sigma_uv: float
    T: float
    hbar: float = 1.0
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def S_tilde(self) -> complex:
        """Action of the conjugate representation, S + i hbar u(T) v(T)."""
        return self.S + 1j * self.hbar * self.uT * self.vT

    @property
    def n(self) -> complex:
        return self.u0 * self.v0


def _validate_tol(tol: float) -> None:
    lo, hi = TOL_RANGE
    if not lo <= tol <= hi:
        raise ValueError(f"tol must lie in [{lo:g}, {hi:g}], got {tol:g}")


def integrate(model: ModelSymbol, u0: complex, v0: complex, T: float, tol: float = 1e-10,
              method: str = "auto", max_step: float = np.inf) -> TrajectoryRecord:
    """Integrate the flow from (u0, v0) for a time T.

    Args:
        model: Hamiltonian symbol
        u0: Initial u
        v0: Initial v
        T: Duration, >= 0
        tol: Local tolerance in [1e-13, 1e-6]
        method: "auto" (closed form for number-diagonal models), "analytic" or "rk"
        max_step: Upper bound on the step of the numerical integrator

    Returns:
        TrajectoryRecord with S including the boundary term -(i hbar/2)(u(T)v(T) + u0 v0)
    """
    _validate_tol(tol)
    if T < 0:
        raise ValueError(f"T must be non-negative, got {T}")
    u0, v0, T = complex(u0), complex(v0), float(T)
    if method not in ("auto", "analytic", "rk"):
        raise ValueError(f"unknown integration method {method!r}")
    if T == 0.0:
        return TrajectoryRecord(u0=u0, v0=v0, uT=u0, vT=v0, S=-1j * model.hbar * u0 * v0, G=0j,
                                M=TangentMatrix.identity(), sigma_vv=0.0, sigma_uv=0.0, T=0.0,
                                hbar=model.hbar, diagnostics={"method": "trivial", "n_steps": 0})
    if method == "analytic" or (method == "auto" and isinstance(model, NumberDiagonalModel)):
        if not isinstance(model, NumberDiagonalModel):
            raise ValueError(f"closed-form flow needs a number-diagonal model, got {model!r}")
        return _integrate_number_diagonal(model, u0, v0, T)
    return _integrate_rk(model, u0, v0, T, tol, max_step)


def _integrate_number_diagonal(model: NumberDiagonalModel, u0: complex, v0: complex,
                               T: float) -> TrajectoryRecord:
    hbar = model.hbar
    n = u0 * v0
    h, hp, hpp = model.number_derivatives(n)
    phi = hp / hbar
    tau = T * hpp * n / hbar
    try:
        rot_u = cmath.exp(-1j * phi * T)
        rot_v = cmath.exp(1j * phi * T)
    except OverflowError as exc:
        raise ModelDomainError(f"{model.model_id}: flow overflows at n={n}, T={T}") from exc
    M = TangentMatrix(
        m_uu=rot_u * (1 - 1j * tau),
        m_uv=rot_u * (-1j * T * hpp * u0 * u0 / hbar),
        m_vu=rot_v * (1j * T * hpp * v0 * v0 / hbar),
        m_vv=rot_v * (1 + 1j * tau),
    )
    sigma_vv = phi.real * T + cmath.phase(1 + 1j * tau)
    uv_seed = -1j * hpp * u0 * u0 / hbar
    degenerate = uv_seed == 0
    sigma_uv = 0.0 if degenerate else -phi.real * T + seed_uv_phase(uv_seed)
    return TrajectoryRecord(
        u0=u0, v0=v0, uT=u0 * rot_u, vT=v0 * rot_v,
        S=T * (n * hp - h) - 1j * hbar * n,
        G=0.5 * T * (hp + n * hpp),
        M=M, sigma_vv=sigma_vv, sigma_uv=sigma_uv, T=T, hbar=hbar,
        diagnostics={"method": "analytic", "n_steps": 0, "m_uv_degenerate": degenerate},
    )


def _rhs(model: ModelSymbol):
    hbar = model.hbar
    ih = 1j / hbar

    def fun(_t: float, y: np.ndarray) -> np.ndarray:
        u, v = y[0], y[1]
        jet = model.jet(u, v)
        du = -ih * jet.h_v
        dv = ih * jet.h_u
        a, b = -ih * jet.h_uv, -ih * jet.h_vv
        c, d = ih * jet.h_uu, ih * jet.h_uv
        m_uu, m_uv, m_vu, m_vv = y[2], y[3], y[4], y[5]
        return np.array([
            du, dv,
            a * m_uu + b * m_vu, a * m_uv + b * m_vv,
            c * m_uu + d * m_vu, c * m_uv + d * m_vv,
            0.5j * hbar * (du * v - u * dv) - jet.h,
            0.5 * jet.h_uv,
        ], dtype=complex)

    return fun


def _integrate_rk(model: ModelSymbol, u0: complex, v0: complex, T: float, tol: float,
                  max_step: float) -> TrajectoryRecord:
    hbar = model.hbar
    fun = _rhs(model)
    y = np.array([u0, v0, 1, 0, 0, 1, 0, 0], dtype=complex)
    t = 0.0
    step_cap = min(max_step, T)
    sigma_vv = 0.0
    sigma_uv: Optional[float] = None
    n_steps = n_rejected = 0
    jet0 = model.jet(u0, v0)
    energy0 = model.energy(u0, v0)
    uv_seed = -1j * jet0.h_vv / hbar

    def diagnostics() -> Dict[str, Any]:
        return {"method": "rk", "t_reached": t, "n_steps": n_steps, "n_rejected": n_rejected,
                "max_step": step_cap}

    solver = DOP853(fun, t, y, T, max_step=step_cap, rtol=tol, atol=tol * 1e-2)
    while t < T:
        with np.errstate(over="ignore", invalid="ignore"):
            try:
                message = solver.step()
            except (ModelDomainError, OverflowError) as exc:
                raise IntegrationError(f"symbol evaluation failed at t={t:.6g}: {exc}",
                                       diagnostics()) from exc
        if solver.status == "failed" or not np.all(np.isfinite(solver.y)):
            raise IntegrationError(f"integrator failed at t={t:.6g}: {message}", diagnostics())
        y_new = solver.y
        d_vv = cmath.phase(y_new[5] / y[5]) if y[5] != 0 else 0.0
        d_uv = cmath.phase(y_new[3] / y[3]) if (sigma_uv is not None and y[3] != 0) else 0.0
        if abs(d_vv) >= PHASE_STEP_CAP or abs(d_uv) >= PHASE_STEP_CAP:
            n_rejected += 1
            step_cap = 0.5 * min(step_cap, solver.t - t)
            if n_rejected > MAX_STEP_HALVINGS or step_cap < 1e-14 * max(1.0, T):
                raise IntegrationError(f"step size underflow at t={t:.6g}", diagnostics())
            solver = DOP853(fun, t, y, T, max_step=step_cap, rtol=tol, atol=tol * 1e-2)
            continue
        sigma_vv += d_vv
        if sigma_uv is None:
            if y_new[3] != 0 and uv_seed != 0:
                sigma_uv = seed_uv_phase(uv_seed) + cmath.phase(y_new[3] / uv_seed)
            elif y_new[3] != 0:
                sigma_uv = seed_uv_phase(y_new[3])
        else:
            sigma_uv += d_uv
        t, y = solver.t, y_new.copy()
        n_steps += 1

    uT, vT = y[0], y[1]
    M = TangentMatrix(y[2], y[3], y[4], y[5])
    info = diagnostics()
    info["energy_drift"] = abs(model.energy(uT, vT) - energy0)
    info["m_uv_degenerate"] = sigma_uv is None
    logger.debug(f"rk trajectory u0={u0:.6g} v0={v0:.6g} T={T:.6g}: {n_steps} steps, "
                 f"{n_rejected} rejected")
    return TrajectoryRecord(
        u0=u0, v0=v0, uT=uT, vT=vT,
        S=y[6] - 0.5j * hbar * (uT * vT + u0 * v0),
        G=y[7], M=M, sigma_vv=sigma_vv, sigma_uv=sigma_uv or 0.0, T=T, hbar=hbar,
        diagnostics=info,
    )
