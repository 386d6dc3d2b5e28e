"""
Quadratic semiclassical propagators.

Bare K sums |m_vv|^(-1/2) exp{i (S + G)/hbar - i sigma_vv/2} over VV trajectories
(u(0) = z0, v(T) = zf*). The conjugate K~ sums sqrt(i/|m_uv|) exp{i (S~ + G)/hbar - i sigma_uv/2}
over UU trajectories (u(0) = z0, u(T) = w).
"""
import cmath
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from bargmann.core.errors import ModelDomainError
from bargmann.core.states import Label
from bargmann.dynamics.shooting import (
    BvpKind,
    BvpProblem,
    SearchBox,
    continue_family,
    find_all_roots,
    number_state_uu_roots,
    solve_bvp,
)
from bargmann.dynamics.trajectory import TrajectoryRecord
from bargmann.models.symbols import ModelSymbol

from .values import Method, PropagatorValue

logger = logging.getLogger(__name__)

CAUSTIC_THRESHOLD = 1e-10
CONTINUATION_STEP = 0.05
SQRT_I = cmath.exp(0.25j * math.pi)
UU_N_FLOOR = -0.5


def vv_problem(z0: Label, zf: Label, T: float, model_id: str = "") -> BvpProblem:
    return BvpProblem(BvpKind.VV, z0.z0, zf.z0.conjugate(), float(T), model_id)


def uu_problem(z0: Label, u_final: complex, T: float, model_id: str = "") -> BvpProblem:
    return BvpProblem(BvpKind.UU, z0.z0, complex(u_final), float(T), model_id)


def continued_vv_family(model: ModelSymbol, z0: Label, zf: Label, T_grid: Sequence[float],
                        on_failure: str = "raise") -> List[Optional[TrajectoryRecord]]:
    """VV roots along T_grid continued from T = 0, where v0 = zf* exactly."""
    grid = [0.0] + [float(t) for t in T_grid]
    family = continue_family(model, lambda t: vv_problem(z0, zf, t, model.model_id), grid,
                             zf.z0.conjugate(), on_failure=on_failure)
    return family[1:]


def continued_vv_root(model: ModelSymbol, z0: Label, zf: Label, T: float,
                      max_step: float = CONTINUATION_STEP) -> TrajectoryRecord:
    """The physical VV root at T, reached by continuation in T from T = 0."""
    if T == 0:
        return solve_bvp(model, vv_problem(z0, zf, 0.0), zf.z0.conjugate())
    n = max(1, int(math.ceil(T / max_step)))
    return continued_vv_family(model, z0, zf, np.linspace(0.0, T, n + 1)[1:])[-1]


def _exp_or_raise(exponent: complex, record: TrajectoryRecord) -> complex:
    try:
        return cmath.exp(exponent)
    except OverflowError as exc:
        raise ModelDomainError(
            f"contribution overflows at T={record.T:.6g}, v0={record.v0:.6g} "
            f"(Re exponent {exponent.real:.4g})") from exc


def trajectory_contribution(record: TrajectoryRecord) -> complex:
    """|m_vv|^(-1/2) exp{i (S + G)/hbar - i sigma_vv/2} for one VV trajectory."""
    m_vv = abs(record.M.m_vv)
    if m_vv < CAUSTIC_THRESHOLD:
        raise ZeroDivisionError(f"|m_vv|={m_vv:.3g} at a caustic")
    phase = 1j * (record.S + record.G) / record.hbar - 0.5j * record.sigma_vv
    return _exp_or_raise(phase, record) / math.sqrt(m_vv)


def conjugate_contribution(record: TrajectoryRecord) -> complex:
    """sqrt(i/|m_uv|) exp{i (S~ + G)/hbar - i sigma_uv/2} for one UU trajectory."""
    m_uv = abs(record.M.m_uv)
    if m_uv < CAUSTIC_THRESHOLD:
        raise ZeroDivisionError(f"|m_uv|={m_uv:.3g} at a conjugate caustic")
    phase = 1j * (record.S_tilde + record.G) / record.hbar - 0.5j * record.sigma_uv
    return SQRT_I * _exp_or_raise(phase, record) / math.sqrt(m_uv)


def bare_propagator(model: ModelSymbol, z0: Label, zf: Label, T: float,
                    trajectories: Optional[Sequence[TrajectoryRecord]] = None,
                    extra_roots: Sequence[TrajectoryRecord] = (),
                    include_extra: bool = False) -> PropagatorValue:
    """Quadratic semiclassical K(zf*, z0, T).

    Args:
        model: Hamiltonian symbol
        z0: Initial label
        zf: Final label
        T: Duration
        trajectories: Contributing VV roots; defaults to the T-continued root
        extra_roots: Further roots (e.g. from multistart), reported in diagnostics
        include_extra: Add extra_roots to the sum

    Returns:
        PropagatorValue; flagged and infinite when any |m_vv| < 1e-10
    """
    if trajectories is None:
        trajectories = [continued_vv_root(model, z0, zf, T)]
    used = list(trajectories) + (list(extra_roots) if include_extra else [])
    diagnostics = {"extra_roots": len(extra_roots), "v0": [r.v0 for r in used]}
    if any(abs(r.M.m_vv) < CAUSTIC_THRESHOLD for r in used):
        logger.debug(f"bare K at caustic, T={T:.6g}")
        return PropagatorValue.at_caustic(Method.BARE, len(used), **diagnostics)
    value = sum(trajectory_contribution(r) for r in used)
    return PropagatorValue(value=value, method=Method.BARE, n_traj=len(used),
                           diagnostics=diagnostics)


def conjugate_propagator(model: ModelSymbol, u_final: complex, z0: Label, T: float,
                         trajectories: Optional[Sequence[TrajectoryRecord]] = None,
                         guess_v0: Optional[complex] = None,
                         search_box: Optional[SearchBox] = None,
                         grid_n: int = 12) -> PropagatorValue:
    """Quadratic semiclassical K~(w = u_final, z0, T).

    UU roots come from `trajectories`, else from Newton on guess_v0. Otherwise every root
    whose saddle lies inside the number-state sum (Re n > -1/2) contributes: closed form for
    number-diagonal models with an affine frequency, a multistart search (default box of
    half-width 16 around the origin) for the rest.

    Raises:
        ModelDomainError: a contribution overflows
    """
    problem = uu_problem(z0, u_final, T, model.model_id)
    if trajectories is None:
        if guess_v0 is not None:
            trajectories = [solve_bvp(model, problem, guess_v0)]
        else:
            trajectories = number_state_uu_roots(model, problem)
            if not trajectories:
                box = search_box or SearchBox.around(0j, 16.0)
                trajectories = [r for r in find_all_roots(model, problem, box, grid_n)
                                if r.n.real > UU_N_FLOOR]
    trajectories = list(trajectories)
    if any(abs(r.M.m_uv) < CAUSTIC_THRESHOLD for r in trajectories):
        return PropagatorValue.at_caustic(Method.CONJUGATE, len(trajectories),
                                          degenerate=any(r.diagnostics.get("m_uv_degenerate")
                                                         for r in trajectories))
    value = sum(conjugate_contribution(r) for r in trajectories)
    return PropagatorValue(value=value, method=Method.CONJUGATE, n_traj=len(trajectories),
                           diagnostics={"v0": [r.v0 for r in trajectories]})


def quadratic_inverse(record: TrajectoryRecord) -> complex:
    """Steepest-descent inverse transform of one conjugate term back to z* = v(T).

    The stationary point of exp{i S~/hbar + z* w} sits at w = u(T) with curvature
    -m_vv/m_uv, so the Gaussian integral multiplies the conjugate term by
    sqrt(m_uv / (i m_vv)) exp(u(T) v(T)); the square-root branch follows the unwound phases.
    """
    ratio = abs(record.M.m_uv) / abs(record.M.m_vv)
    branch = cmath.exp(0.5j * (record.sigma_uv - record.sigma_vv)) / SQRT_I
    return math.sqrt(ratio) * branch * conjugate_contribution(record) * cmath.exp(record.uT * record.vT)
