"""
Two-point boundary problems for the complex flow, solved by Newton shooting on v0.

VV problems fix u(0) = u' and v(T) = v''; UU problems fix u(0) = u' and u(T) = u''.
The Newton derivative is the tangent-matrix element m_vv (VV) or m_uv (UU).
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares
from scipy.special import lambertw

from bargmann.core.errors import (
    CausticAdjacentError,
    CausticNotFoundError,
    IntegrationError,
    ModelDomainError,
    NoRootError,
)
from bargmann.models.symbols import ModelSymbol, NumberDiagonalModel

from .trajectory import TrajectoryRecord, integrate

logger = logging.getLogger(__name__)

MAX_ITER = 50
MAX_HALVINGS = 8
JACOBIAN_FLOOR = 1e-12
DEDUP_TOL = 1e-7
CAUSTIC_TOL = 1e-6


class BvpKind(Enum):
    VV = "vv"
    UU = "uu"


@dataclass(frozen=True)
class BvpProblem:
    """Boundary data: u(0) = u_initial and v(T) (VV) or u(T) (UU) = final."""
    kind: BvpKind
    u_initial: complex
    final: complex
    T: float
    model_id: str = ""

    def __post_init__(self) -> None:
        if not self.T >= 0:
            raise ValueError(f"BVP duration must be non-negative, got {self.T}")

    def at(self, T: float) -> "BvpProblem":
        return replace(self, T=float(T))

    def residual(self, record: TrajectoryRecord) -> complex:
        end = record.vT if self.kind is BvpKind.VV else record.uT
        return end - self.final

    def derivative(self, record: TrajectoryRecord) -> complex:
        return record.M.m_vv if self.kind is BvpKind.VV else record.M.m_uv


@dataclass(frozen=True)
class SearchBox:
    """Axis-aligned rectangle in the complex v0 plane."""
    center: complex
    half_width: float
    half_height: float

    @classmethod
    def around(cls, center: complex, radius: float) -> "SearchBox":
        return cls(complex(center), float(radius), float(radius))

    def contains(self, z: complex) -> bool:
        d = z - self.center
        return abs(d.real) <= self.half_width and abs(d.imag) <= self.half_height

    def lattice(self, grid_n: int, rng: Optional[np.random.Generator] = None,
                jitter: float = 0.0) -> np.ndarray:
        re = np.linspace(-self.half_width, self.half_width, grid_n)
        im = np.linspace(-self.half_height, self.half_height, grid_n)
        points = (self.center + re[None, :] + 1j * im[:, None]).ravel()
        if rng is not None and jitter > 0:
            scale = jitter * np.array([self.half_width, self.half_height]) / max(grid_n - 1, 1)
            points = points + scale[0] * rng.uniform(-1, 1, points.size) \
                + 1j * scale[1] * rng.uniform(-1, 1, points.size)
        return points


def _safe_integrate(model: ModelSymbol, problem: BvpProblem, v0: complex, int_tol: float,
                    method: str) -> Optional[TrajectoryRecord]:
    try:
        with np.errstate(all="ignore"):
            record = integrate(model, problem.u_initial, v0, problem.T, tol=int_tol, method=method)
    except (IntegrationError, ModelDomainError, OverflowError, ZeroDivisionError):
        return None
    if not np.isfinite(problem.residual(record)) or not np.isfinite(problem.derivative(record)):
        return None
    return record


def solve_bvp(model: ModelSymbol, problem: BvpProblem, guess_v0: complex, tol: float = 1e-10,
              max_iter: int = MAX_ITER, int_tol: float = 1e-11,
              method: str = "auto") -> TrajectoryRecord:
    """Newton shooting on the free initial value v0.

    Args:
        model: Hamiltonian symbol
        problem: Boundary data
        guess_v0: Starting iterate
        tol: Residual tolerance, relative to max(1, |final|)
        max_iter: Newton iteration cap
        int_tol: Integrator tolerance
        method: Integration method passed to integrate()

    Returns:
        The converged trajectory; diagnostics carry newton_iterations and residual

    Raises:
        CausticAdjacentError: Newton derivative below 1e-12
        NoRootError: no convergence within max_iter
    """
    guess_v0 = complex(guess_v0)
    if not np.isfinite(guess_v0):
        raise ValueError(f"non-finite Newton guess {guess_v0}")
    scale = max(1.0, abs(problem.final))

    if problem.T == 0.0:
        if problem.kind is BvpKind.VV:
            v0 = complex(problem.final)
        elif abs(problem.u_initial - problem.final) <= tol * scale:
            v0 = guess_v0
        else:
            raise NoRootError("UU problem at T=0 requires u'' = u'", last_v0=guess_v0)
        record = integrate(model, problem.u_initial, v0, 0.0, tol=int_tol, method=method)
        record.diagnostics.update(newton_iterations=0, residual=0.0)
        return record

    v0 = guess_v0
    record = _safe_integrate(model, problem, v0, int_tol, method)
    if record is None:
        raise NoRootError(f"trajectory from guess v0={v0} cannot be integrated", last_v0=v0)
    residual = problem.residual(record)
    for iteration in range(max_iter + 1):
        if abs(residual) < tol * scale:
            record.diagnostics.update(newton_iterations=iteration, residual=abs(residual))
            return record
        if iteration == max_iter:
            break
        jac = problem.derivative(record)
        if abs(jac) < JACOBIAN_FLOOR:
            raise CausticAdjacentError(
                f"Newton derivative {abs(jac):.3g} vanishes at T={problem.T:.6g}", last_v0=v0)
        step = residual / jac
        lam = 1.0
        trial_record, trial_v0 = None, v0
        for _ in range(MAX_HALVINGS + 1):
            candidate = v0 - lam * step
            candidate_record = _safe_integrate(model, problem, candidate, int_tol, method)
            if candidate_record is not None:
                trial_record, trial_v0 = candidate_record, candidate
                if abs(problem.residual(candidate_record)) < abs(residual):
                    break
            lam *= 0.5
        if trial_record is None:
            raise NoRootError(f"Newton step from v0={v0} left the integrable region", last_v0=v0)
        v0, record = trial_v0, trial_record
        residual = problem.residual(record)
    raise NoRootError(
        f"no convergence in {max_iter} iterations (|residual|={abs(residual):.3g})", last_v0=v0)


def _dedup(records: Sequence[TrajectoryRecord]) -> List[TrajectoryRecord]:
    unique: List[TrajectoryRecord] = []
    for record in records:
        if all(abs(record.v0 - kept.v0) >= DEDUP_TOL for kept in unique):
            unique.append(record)
    return sorted(unique, key=lambda r: (r.v0.real, r.v0.imag))


def find_all_roots(model: ModelSymbol, problem: BvpProblem, search_box: SearchBox,
                   grid_n: int = 8, tol: float = 1e-10, seed: Optional[int] = None,
                   jitter: float = 0.0, max_workers: Optional[int] = None,
                   max_iter: int = 30) -> List[TrajectoryRecord]:
    """Multistart Newton from a grid_n x grid_n lattice covering the search box.

    Args:
        model: Hamiltonian symbol
        problem: Boundary data
        search_box: Rectangle of starting guesses; roots outside it are dropped
        grid_n: Lattice size per axis, >= 2
        tol: Newton residual tolerance
        seed: Seed for the lattice jitter
        jitter: Jitter amplitude as a fraction of the lattice spacing
        max_workers: Thread pool size
        max_iter: Newton iteration cap per start

    Returns:
        Distinct roots sorted by (Re v0, Im v0); empty when none is found
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be at least 2, got {grid_n}")
    rng = np.random.default_rng(seed) if seed is not None else None
    starts = search_box.lattice(grid_n, rng, jitter)

    def attempt(guess: complex) -> Optional[TrajectoryRecord]:
        try:
            return solve_bvp(model, problem, guess, tol=tol, max_iter=max_iter)
        except (NoRootError, ValueError):
            return None

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(attempt, starts))
    found = [r for r in results if r is not None and search_box.contains(r.v0)]
    roots = _dedup(found)
    logger.debug(f"multistart {problem.kind.value} T={problem.T:.6g}: {len(roots)} roots "
                 f"from {starts.size} starts")
    return roots


def continue_family(model: ModelSymbol, problem_factory: Callable[[float], BvpProblem],
                    T_grid: Sequence[float], guess_v0: complex, tol: float = 1e-10,
                    on_failure: str = "raise",
                    max_subdivisions: int = 6) -> List[Optional[TrajectoryRecord]]:
    """Continue one root along a grid of durations with a secant predictor.

    A failed step is retried through bisected intermediate durations. With on_failure="skip",
    points that still fail are returned as None and continuation resumes from the last root.

    Args:
        model: Hamiltonian symbol
        problem_factory: Maps T to the boundary problem at that duration
        T_grid: Increasing durations
        guess_v0: Guess at the first grid point
        tol: Newton residual tolerance
        on_failure: "raise" or "skip"
        max_subdivisions: Bisection depth for a failing step

    Returns:
        One record (or None) per grid point
    """
    if on_failure not in ("raise", "skip"):
        raise ValueError(f"on_failure must be 'raise' or 'skip', got {on_failure!r}")
    records: List[Optional[TrajectoryRecord]] = []
    t_cur: Optional[float] = None
    v_cur = complex(guess_v0)
    slope = 0j

    for target in T_grid:
        target = float(target)
        if t_cur is None:
            try:
                record = solve_bvp(model, problem_factory(target), v_cur, tol=tol)
            except NoRootError:
                if on_failure == "raise":
                    raise
                records.append(None)
                continue
            t_cur, v_cur = target, record.v0
            records.append(record)
            continue

        pending = [target]
        result: Optional[TrajectoryRecord] = None
        min_dt = (target - t_cur) / 2 ** max_subdivisions
        while pending:
            t_next = pending[-1]
            guess = v_cur + slope * (t_next - t_cur)
            try:
                record = solve_bvp(model, problem_factory(t_next), guess, tol=tol)
            except NoRootError as exc:
                if t_next - t_cur <= min_dt:
                    if on_failure == "raise":
                        raise NoRootError(f"continuation stalled at T={t_next:.6g}: {exc}",
                                          last_v0=exc.last_v0) from exc
                    logger.debug(f"continuation skipped T={target:.6g}")
                    break
                pending.append(0.5 * (t_cur + t_next))
                continue
            if t_next > t_cur:
                slope = (record.v0 - v_cur) / (t_next - t_cur)
            t_cur, v_cur = t_next, record.v0
            pending.pop()
            if t_next == target:
                result = record
        records.append(result)
    return records


@dataclass
class CausticLocation:
    T_c: float
    trajectory: TrajectoryRecord
    scan: List[Tuple[float, float]]


def locate_caustic(model: ModelSymbol, problem_factory: Callable[[float], BvpProblem],
                   family: Sequence[Optional[TrajectoryRecord]],
                   tol: float = CAUSTIC_TOL) -> CausticLocation:
    """Find the duration where the continued family's Newton derivative vanishes.

    The family must show an interior minimum of |m_vv| (|m_uv| for UU problems) clearly
    below both ends; the minimum is then polished in (v0, T) with Levenberg-Marquardt on the
    boundary residual and the vanishing tangent element.

    Raises:
        CausticNotFoundError: no interior minimum, or the polish misses tol
    """
    scan = [(r.T, abs(problem_factory(r.T).derivative(r))) for r in family if r is not None]
    if len(scan) < 3:
        raise CausticNotFoundError("need at least three continued roots to scan",
                                   nearest={"points": len(scan)})
    values = np.array([m for _, m in scan])
    k = int(np.argmin(values))
    nearest = {"T": scan[k][0], "abs_element": float(values[k])}
    if k in (0, len(scan) - 1) or values[k] >= 0.5 * min(values[0], values[-1]):
        raise CausticNotFoundError("no interior minimum of the tangent element", nearest=nearest)

    records = [r for r in family if r is not None]
    start = records[k]

    def residuals(x: np.ndarray) -> np.ndarray:
        T = float(x[2])
        problem = problem_factory(max(T, 0.0))
        record = _safe_integrate(model, problem, complex(x[0], x[1]), 1e-12, "auto")
        if record is None:
            return np.full(4, 1e6)
        r, d = problem.residual(record), problem.derivative(record)
        return np.array([r.real, r.imag, d.real, d.imag])

    fit = least_squares(residuals, [start.v0.real, start.v0.imag, start.T], method="lm",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    T_c = float(fit.x[2])
    problem = problem_factory(T_c)
    record = integrate(model, problem.u_initial, complex(fit.x[0], fit.x[1]), T_c, tol=1e-12)
    element = abs(problem.derivative(record))
    if element >= tol or abs(problem.residual(record)) >= tol:
        nearest.update(T_polished=T_c, abs_element_polished=element)
        raise CausticNotFoundError(f"caustic polish stalled at |element|={element:.3g}",
                                   nearest=nearest)
    logger.debug(f"caustic located at T_c={T_c:.12g} (|element|={element:.3g})")
    return CausticLocation(T_c=T_c, trajectory=record, scan=scan)




def has_closed_form_roots(model: ModelSymbol, problem: BvpProblem) -> bool:
    """True when the model's frequency h'(n) is affine in n and u(0) is nonzero."""
    return (isinstance(model, NumberDiagonalModel) and model.affine is not None
            and problem.u_initial != 0 and problem.T > 0)


def closed_form_number(model: NumberDiagonalModel, problem: BvpProblem, branch: int) -> complex:
    """Occupation n = u0 v0 of the root on a given branch, for h'(n) = a n + b.

    The flow rotates u and v by exp(-/+ i h'(n) T / hbar), so a VV root solves
    n exp(i a n T / hbar) = u' v'' exp(-i b T / hbar) (Lambert W, branch 0 is the root
    continued from T = 0) and a UU root solves exp(-i (a n + b) T / hbar) = u'' / u' on the
    logarithm branch `branch`.
    """
    a, b = model.affine
    hbar, T, u0 = model.hbar, problem.T, complex(problem.u_initial)
    if problem.kind is BvpKind.VV:
        x = u0 * complex(problem.final) * np.exp(-1j * b * T / hbar)
        if a == 0:
            return complex(x)
        c = 1j * a * T / hbar
        return complex(lambertw(c * x, k=branch)) / c
    if a == 0:
        raise NoRootError("UU roots of a linear flow exist only when u'' = u' exp(-i b T/hbar)",
                          last_v0=0j)
    log_ratio = np.log(complex(problem.final) / u0)
    return ((1j * hbar * log_ratio + 2 * np.pi * branch * hbar) / T - b) / a


def closed_form_roots(model: ModelSymbol, problem: BvpProblem, branches: Sequence[int] = (0,),
                      tol: float = 1e-8) -> List[TrajectoryRecord]:
    """Roots of a number-diagonal BVP with affine frequency, one per branch.

    Branches whose trajectory fails to integrate or to meet the boundary data within tol are
    dropped. Returns distinct roots in branch order.
    """
    if not has_closed_form_roots(model, problem):
        raise ValueError(f"{model!r} has no closed-form {problem.kind.value} roots")
    scale = max(1.0, abs(problem.final))
    roots: List[TrajectoryRecord] = []
    for branch in branches:
        try:
            n = closed_form_number(model, problem, branch)
        except NoRootError:
            continue
        record = _safe_integrate(model, problem, n / problem.u_initial, 1e-12, "auto")
        if record is None or abs(problem.residual(record)) >= tol * scale:
            continue
        if all(abs(record.v0 - kept.v0) >= DEDUP_TOL for kept in roots):
            record.diagnostics["branch"] = branch
            roots.append(record)
    return roots


def number_state_uu_roots(model: ModelSymbol, problem: BvpProblem, count: int = 6,
                          n_floor: float = -0.5) -> List[TrajectoryRecord]:
    """The `count` UU roots with the smallest Re(n) above n_floor.

    A saddle at Re(n) <= -1/2 lies outside the number-state sum the conjugate propagator
    resums, so only roots above the floor contribute.
    """
    if not has_closed_form_roots(model, problem) or model.affine[0] == 0:
        return []
    a, b = model.affine
    theta = np.angle(complex(problem.final) / complex(problem.u_initial))
    k_star = ((a * n_floor + b) * problem.T / model.hbar + theta) / (2 * np.pi)
    if a > 0:
        start = int(np.floor(k_star)) + 1
        branches = range(start, start + count)
    else:
        start = int(np.ceil(k_star)) - 1
        branches = range(start, start - count, -1)
    roots = [r for r in closed_form_roots(model, problem, branches) if r.n.real > n_floor]
    logger.debug(f"closed-form uu T={problem.T:.6g}: branches {branches.start}.. -> "
                 f"{len(roots)} roots")
    return roots
