"""
Uniform (Airy) approximation built from a coalescing pair of stationary trajectories.

The two VV roots c (continued physical root) and p (its partner) are mapped onto the
saddles X = +-B^(1/2) of A - B X + X^3/3. With E_s the exponent placed on the cubic and
g_s = bare_s exp(-i E_s), the amplitudes are f_s = g_s sqrt(-2 i X_s), and

    K = (1/sqrt(2 pi)) int (c0 + c1 X) exp{i (A - B X + X^3/3)} dX,
    c0 = (f+ + f-)/2,  c1 = (f+ - f-)/(2 X+).

The partner is the root closest to c (in u(T)) where the pair comes closest over the
requested durations. From there both roots, B, f+ and f- are continued in T, and the valleys
joined by the contour are fixed once, by steepest descent through the physical saddle at a
short reference duration where the physical root alone carries the propagator. A single
contour then represents the integral on both sides of a caustic.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bargmann.core.errors import (
    BargmannError,
    CausticAdjacentError,
    CoalescenceError,
    ModelDomainError,
    NoRootError,
)
from bargmann.core.states import Label
from bargmann.dynamics.shooting import (
    BvpProblem,
    SearchBox,
    closed_form_roots,
    find_all_roots,
    has_closed_form_roots,
    solve_bvp,
)
from bargmann.dynamics.trajectory import TrajectoryRecord
from bargmann.models.symbols import ModelSymbol
from bargmann.specfun.airy import OMEGA, Valleys, cubic_oscillatory_integral, descent_valleys

from .semiclassical import (
    CAUSTIC_THRESHOLD,
    bare_propagator,
    continued_vv_family,
    continued_vv_root,
    vv_problem,
)
from .values import Method, PropagatorValue, Status

logger = logging.getLogger(__name__)

MAPPINGS = ("action", "full")
SAME_ROOT_TOL = 1e-6
COALESCENCE_TOL = 1e-10
# half-width of the bracket used for the B -> 0 limit at exact coalescence
COALESCENCE_STEP = 1e-3
SEARCH_RADII = (16.0, 32.0, 64.0)
CLOSED_FORM_BRANCHES = range(-3, 4)
REFERENCE_T = 0.05
SCAN_POINTS = 21
DEGENERATE_B = 1e-3
MAX_SUBDIVISIONS = 6
JUMP_FACTOR = 4.0
# a recovered partner further than this many pair spacings is a different root
RECOVERY_SPREAD = 4.0


def cubic_exponent(record: TrajectoryRecord, mapping: str = "action") -> complex:
    """Exponent E placed on the cubic: S/hbar, or (S + R~)/hbar for the full mapping.

    R~ = G + (i hbar/2) ln|m_uv| - (hbar/2) sigma_uv collects the slowly varying terms.
    """
    if mapping == "action":
        return record.S / record.hbar
    if mapping == "full":
        hbar = record.hbar
        r_tilde = record.G + 0.5j * hbar * math.log(abs(record.M.m_uv)) - 0.5 * hbar * record.sigma_uv
        return (record.S + r_tilde) / hbar
    raise ValueError(f"unknown exponent mapping {mapping!r}; expected one of {MAPPINGS}")


def pair_amplitude(record: TrajectoryRecord, mapping: str = "action") -> complex:
    """g = bare term times exp(-i E), with the exponents combined before exponentiation.

    Raises:
        CoalescenceError: |m_vv| below the caustic threshold
        ModelDomainError: the amplitude itself overflows
    """
    m_vv = abs(record.M.m_vv)
    if m_vv < CAUSTIC_THRESHOLD:
        raise CoalescenceError(f"|m_vv|={m_vv:.3g} at a caustic")
    residual = record.S / record.hbar - cubic_exponent(record, mapping)
    exponent = 1j * (residual + record.G / record.hbar) - 0.5j * record.sigma_vv
    try:
        return cmath.exp(exponent) / math.sqrt(m_vv)
    except OverflowError as exc:
        raise ModelDomainError(f"uniform amplitude overflows at T={record.T:.6g}") from exc


def _nearest(candidates: Sequence[complex], target: complex) -> complex:
    return min(candidates, key=lambda c: abs(c - target))


@dataclass(frozen=True)
class UniformPair:
    """Stationary pair mapped onto the cubic, with the branch choices already resolved."""
    traj_plus: TrajectoryRecord
    traj_minus: TrajectoryRecord
    A: complex
    B: complex
    f_plus: complex
    f_minus: complex
    x_plus: complex
    mapping: str = "action"

    @property
    def c0(self) -> complex:
        return 0.5 * (self.f_plus + self.f_minus)

    @property
    def c1(self) -> complex:
        return (self.f_plus - self.f_minus) / (2 * self.x_plus)

    def swapped(self) -> "UniformPair":
        """Same pair with the labels exchanged (X -> -X)."""
        return replace(self, traj_plus=self.traj_minus, traj_minus=self.traj_plus,
                       f_plus=self.f_minus, f_minus=self.f_plus, x_plus=-self.x_plus)

    def seed_valleys(self) -> Valleys:
        """Valleys joined by the steepest-descent path through the + saddle."""
        direction = cmath.sqrt(1j / (2 * self.x_plus))
        return descent_valleys(self.B, self.x_plus, direction)

    def value(self, valleys: Valleys) -> complex:
        try:
            return cubic_oscillatory_integral(self.A, self.B, self.c0, self.c1, valleys).value
        except OverflowError as exc:
            raise ModelDomainError(f"cubic integral overflows (B={self.B:.4g})") from exc

    def exponent_residual(self) -> float:
        """Largest mismatch between the cubic at X = +-B^(1/2) and the mapped exponents."""
        x = self.x_plus
        cubic = lambda X: self.A - self.B * X + X ** 3 / 3
        return max(abs(cubic(x) - cubic_exponent(self.traj_plus, self.mapping)),
                   abs(cubic(-x) - cubic_exponent(self.traj_minus, self.mapping)))


def assemble_pair(plus: TrajectoryRecord, minus: TrajectoryRecord, mapping: str = "action",
                  B_hint: Optional[complex] = None,
                  f_hints: Tuple[Optional[complex], Optional[complex]] = (None, None)) -> UniformPair:
    """Map two stationary trajectories onto the cubic.

    Without hints B is the principal cube root of w^2, f+ = g+ / sqrt(i/(2 X+)) on the
    principal square root and f- takes the sign closest to f+. With hints, each choice is the
    candidate nearest its hint.

    Raises:
        CoalescenceError: the two exponents coincide
    """
    e_plus, e_minus = cubic_exponent(plus, mapping), cubic_exponent(minus, mapping)
    A = 0.5 * (e_plus + e_minus)
    w = -0.75 * (e_plus - e_minus)
    if abs(w) < COALESCENCE_TOL:
        raise CoalescenceError(f"stationary exponents coincide (|w|={abs(w):.3g})")
    B = cmath.exp(cmath.log(w * w) / 3)
    if B_hint is not None:
        B = _nearest([B, B * OMEGA, B * OMEGA ** 2], B_hint)
    x = cmath.sqrt(B)
    if abs((-x) ** 3 - w) < abs(x ** 3 - w):
        x = -x

    g_plus = pair_amplitude(plus, mapping)
    g_minus = pair_amplitude(minus, mapping)
    root_plus = cmath.sqrt(-2j * x) * g_plus
    root_minus = cmath.sqrt(2j * x) * g_minus
    hint_plus, hint_minus = f_hints
    if hint_plus is None:
        f_plus = g_plus / cmath.sqrt(1j / (2 * x))
    else:
        f_plus = _nearest([root_plus, -root_plus], hint_plus)
    f_minus = _nearest([root_minus, -root_minus], f_plus if hint_minus is None else hint_minus)
    return UniformPair(plus, minus, A, B, f_plus, f_minus, x, mapping)


def coalescence_limit(before: UniformPair, after: UniformPair, valleys: Valleys) -> complex:
    """The B -> 0 value between two pairs bracketing an exact coalescence.

    A, c0 and c1 are smooth through the coalescence (and unchanged by relabelling the
    pair), so their midpoint values go with B = 0, where the integral reduces to Ai(0)
    and Ai'(0).
    """
    A = 0.5 * (before.A + after.A)
    c0 = 0.5 * (before.c0 + after.c0)
    c1 = 0.5 * (before.c1 + after.c1)
    return cubic_oscillatory_integral(A, 0j, c0, c1, valleys).value


def _extrapolate(history: Sequence[Tuple[float, complex]], T: float) -> Optional[complex]:
    if not history:
        return None
    if len(history) == 1:
        return history[-1][1]
    (t1, y1), (t2, y2) = history[-2], history[-1]
    if t2 == t1:
        return y2
    return y2 + (y2 - y1) * (T - t2) / (t2 - t1)


class _RootJump(Exception):
    """A continued root landed far from its predicted position."""


@dataclass
class _TrackState:
    T: float
    c: TrajectoryRecord
    p: TrajectoryRecord
    pair: UniformPair


@dataclass(frozen=True)
class _Cursor:
    """A tracked state and the last two values of every continued quantity."""
    state: _TrackState
    history: Dict[str, Tuple[Tuple[float, complex], ...]]

    @classmethod
    def start(cls, state: _TrackState) -> "_Cursor":
        return cls(state, {}).moved(state)

    def moved(self, state: _TrackState) -> "_Cursor":
        latest = {"B": state.pair.B, "f_plus": state.pair.f_plus,
                  "f_minus": state.pair.f_minus, "c": state.c.v0, "p": state.p.v0}
        history = {key: (self.history.get(key, ()) + ((state.T, value),))[-2:]
                   for key, value in latest.items()}
        return _Cursor(state, history)

    def predict(self, key: str, T: float) -> Optional[complex]:
        return _extrapolate(self.history.get(key, ()), T)


@dataclass
class UniformTracker:
    """Continues a uniform pair in T with one contour for every duration.

    Args:
        model: Hamiltonian symbol
        z0: Initial label
        zf: Final label
        mapping: "action" or "full" exponent placement
        max_step: Largest T increment between evaluations of the pair
        seed_grid: Multistart lattice size when a model has no closed-form roots
        rng_seed: Jitter seed for multistart lattices
        reference_t: Duration at which the contour is fixed
    """
    model: ModelSymbol
    z0: Label
    zf: Label
    mapping: str = "action"
    max_step: float = 0.01
    seed_grid: int = 24
    rng_seed: Optional[int] = 0
    reference_t: float = REFERENCE_T
    valleys: Optional[Valleys] = None
    seed_T: Optional[float] = None
    _anchor: Optional[_Cursor] = field(default=None, repr=False)
    _cursors: Dict[float, _Cursor] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.mapping not in MAPPINGS:
            raise ValueError(f"unknown exponent mapping {self.mapping!r}")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if not self.reference_t > 0:
            raise ValueError("reference_t must be positive")

    def _problem(self, T: float) -> BvpProblem:
        return vv_problem(self.z0, self.zf, T, self.model.model_id)

    def _other_roots(self, T: float, c: TrajectoryRecord) -> List[TrajectoryRecord]:
        """Every VV root at T except c: closed form when available, else multistart."""
        problem = self._problem(T)
        if has_closed_form_roots(self.model, problem):
            roots = closed_form_roots(self.model, problem, CLOSED_FORM_BRANCHES)
            return [r for r in roots if abs(r.v0 - c.v0) > SAME_ROOT_TOL]
        for radius in SEARCH_RADII:
            roots = find_all_roots(self.model, problem, SearchBox.around(c.v0, radius),
                                   self.seed_grid, seed=self.rng_seed, jitter=0.25)
            others = [r for r in roots if abs(r.v0 - c.v0) > SAME_ROOT_TOL]
            if others:
                return others
        return []

    def nearest_partner(self, T: float, c: TrajectoryRecord) -> Optional[TrajectoryRecord]:
        """The root whose u(T) lies closest to c's, or None."""
        others = self._other_roots(T, c)
        return min(others, key=lambda r: abs(r.uT - c.uT)) if others else None

    def locate_seed(self, T_lo: float, T_hi: float, points: int = SCAN_POINTS) -> _TrackState:
        """Scan [T_lo, T_hi] for the duration where c and its nearest partner come closest.

        Points where the pair has (nearly) coalesced are skipped; their unhinted branch
        choices are unreliable.

        Raises:
            NoRootError: no duration in the window has a partner
        """
        grid = [T for T in np.linspace(T_lo, T_hi, max(points, 2)) if T > 0]
        family = continued_vv_family(self.model, self.z0, self.zf, grid, on_failure="skip")
        best: Optional[Tuple[float, _TrackState]] = None
        for T, c in zip(grid, family):
            if c is None:
                continue
            p = self.nearest_partner(T, c)
            if p is None:
                continue
            try:
                pair = assemble_pair(c, p, self.mapping)
            except (CoalescenceError, ModelDomainError):
                continue
            if abs(pair.B) < DEGENERATE_B:
                continue
            distance = abs(c.uT - p.uT)
            if best is None or distance < best[0]:
                best = (distance, _TrackState(float(T), c, p, pair))
        if best is None:
            raise NoRootError(f"no partner root for the uniform pair in [{T_lo:.6g}, {T_hi:.6g}]",
                              last_v0=self.zf.z0.conjugate())
        logger.debug(f"closest approach {best[0]:.4g} at T={best[1].T:.6g}")
        return best[1]

    def seed(self, T: float, guess_v0: Optional[complex] = None) -> None:
        """Pair the physical root at T with its nearest partner there and fix the contour.

        Raises:
            NoRootError: no partner root was found
        """
        if guess_v0 is None:
            c = continued_vv_root(self.model, self.z0, self.zf, T)
        else:
            c = solve_bvp(self.model, self._problem(T), guess_v0)
        p = self.nearest_partner(T, c)
        if p is None:
            raise NoRootError(f"no partner root for the uniform pair at T={T:.6g}", last_v0=c.v0)
        self._install(_TrackState(float(T), c, p, assemble_pair(c, p, self.mapping)))

    def seed_auto(self, T_lo: float, T_hi: float, points: int = SCAN_POINTS) -> None:
        """Seed where the pair comes closest over [T_lo, T_hi] and fix the contour."""
        self._install(self.locate_seed(T_lo, T_hi, points))

    def _install(self, state: _TrackState) -> None:
        anchor = _Cursor.start(state)
        self._anchor, self.seed_T = anchor, state.T
        self._cursors = {1.0: anchor, -1.0: anchor}
        reference = min(self.reference_t, state.T)
        try:
            early = self._walk(anchor, reference) if reference < state.T else anchor
        except BargmannError as exc:
            logger.debug(f"contour fixed at the seed, reference walk failed: {exc}")
            early = anchor
        self._cursors[-1.0] = early
        self.valleys = early.state.pair.seed_valleys()
        logger.debug(f"uniform pair seeded at T={state.T:.6g} (B={state.pair.B:.6g}); "
                     f"contour {self.valleys} fixed at T={early.state.T:.6g}")

    def _continue_root(self, cursor: _Cursor, key: str, T: float,
                       check: bool) -> TrajectoryRecord:
        guess = cursor.predict(key, T)
        record = solve_bvp(self.model, self._problem(T), guess)
        if check and len(cursor.history[key]) == 2:
            predicted = abs(guess - cursor.history[key][-1][1])
            if abs(record.v0 - guess) > JUMP_FACTOR * predicted + 1e-6 * (1 + abs(guess)):
                raise _RootJump(key)
        return record

    def _step(self, cursor: _Cursor, T: float, check: bool = True) -> _Cursor:
        try:
            c = self._continue_root(cursor, "c", T, check)
        except CausticAdjacentError as exc:
            raise CoalescenceError(f"physical root stalls at a caustic, T={T:.6g}") from exc
        try:
            p = self._continue_root(cursor, "p", T, check)
        except NoRootError:
            p = None
        if p is None or abs(p.v0 - c.v0) <= SAME_ROOT_TOL:
            # partner collapsed onto c: take the other root nearest its predicted position
            p_guess = cursor.predict("p", T)
            others = self._other_roots(T, c)
            if not others:
                raise CoalescenceError(f"partner lost at T={T:.6g}")
            p = min(others, key=lambda r: abs(r.v0 - p_guess))
            spacing = abs(cursor.state.p.v0 - cursor.state.c.v0)
            if abs(p.v0 - c.v0) > RECOVERY_SPREAD * spacing + SAME_ROOT_TOL:
                raise CoalescenceError(f"partner merged with the physical root at T={T:.6g}")
        pair = assemble_pair(c, p, self.mapping, B_hint=cursor.predict("B", T),
                             f_hints=(cursor.predict("f_plus", T), cursor.predict("f_minus", T)))
        return cursor.moved(_TrackState(T, c, p, pair))

    def _reach(self, cursor: _Cursor, T: float, depth: int = 0) -> _Cursor:
        try:
            return self._step(cursor, T, check=depth < MAX_SUBDIVISIONS)
        except _RootJump:
            middle = 0.5 * (cursor.state.T + T)
            return self._reach(self._reach(cursor, middle, depth + 1), T, depth + 1)

    def _walk(self, cursor: _Cursor, T: float) -> _Cursor:
        start = cursor.state.T
        n = max(1, int(math.ceil(abs(T - start) / self.max_step)))
        for k in range(1, n + 1):
            target = start + (T - start) * k / n
            try:
                cursor = self._reach(cursor, target)
            except CoalescenceError:
                if k == n:
                    raise
                logger.debug(f"skipping coalescence at T={target:.6g}")
        return cursor

    def _value(self, state: _TrackState, **extra) -> PropagatorValue:
        pair = state.pair
        return PropagatorValue(
            value=pair.value(self.valleys),
            method=Method.UNIFORM,
            n_traj=2,
            caustic_flag=any(abs(r.M.m_vv) < CAUSTIC_THRESHOLD for r in (state.c, state.p)),
            b_coeff=pair.B,
            diagnostics={"A": pair.A, "valleys": self.valleys, "v0_plus": state.c.v0,
                         "v0_minus": state.p.v0, "seed_T": self.seed_T, **extra},
        )

    def _start_for(self, T: float, direction: float) -> _Cursor:
        cursor = self._cursors.get(direction, self._anchor)
        if (T - cursor.state.T) * direction < 0:
            return self._anchor
        return cursor

    def advance(self, T: float) -> PropagatorValue:
        """Uniform value at T, continued from the seed (or from the last value on that side).

        Raises:
            RuntimeError: the tracker has not been seeded
            NoRootError: T = 0, where only one root exists
        """
        if self._anchor is None:
            raise RuntimeError("tracker must be seeded before advancing")
        T = float(T)
        if T <= 0:
            raise NoRootError("single root at T=0", last_v0=self.zf.z0.conjugate())
        if T == self.seed_T:
            return self._value(self._anchor.state)
        direction = math.copysign(1.0, T - self.seed_T)
        start = self._start_for(T, direction)
        try:
            cursor = self._walk(start, T)
        except CoalescenceError:
            return self._at_coalescence(start, T, direction)
        self._cursors[direction] = cursor
        return self._value(cursor.state)

    def _at_coalescence(self, start: _Cursor, T: float, direction: float) -> PropagatorValue:
        before_T = T - direction * COALESCENCE_STEP
        before = self._walk(start, before_T) if (before_T - start.state.T) * direction > 0 else start
        after = self._walk(before, T + direction * COALESCENCE_STEP)
        self._cursors[direction] = after
        value = coalescence_limit(before.state.pair, after.state.pair, self.valleys)
        logger.debug(f"uniform value at exact coalescence, T={T:.6g}")
        result = self._value(after.state, coalescence_limit=True)
        return replace(result, value=value, b_coeff=0j, caustic_flag=True)

    def sweep(self, Ts: Sequence[float]) -> List[PropagatorValue]:
        """Values at any durations, each side of the seed visited in order of distance.

        Per-point failures become bare fallbacks.
        """
        if self._anchor is None:
            raise RuntimeError("tracker must be seeded before sweeping")
        order = sorted(range(len(Ts)), key=lambda i: (float(Ts[i]) < self.seed_T,
                                                      abs(float(Ts[i]) - self.seed_T)))
        values: Dict[int, PropagatorValue] = {}
        for i in order:
            values[i] = self._safe_advance(float(Ts[i]))
        return [values[i] for i in range(len(Ts))]

    def _safe_advance(self, T: float) -> PropagatorValue:
        try:
            return self.advance(T)
        except BargmannError as exc:
            return fallback_to_bare(self.model, self.z0, self.zf, T, reason=str(exc))


def fallback_to_bare(model: ModelSymbol, z0: Label, zf: Label, T: float,
                     reason: str) -> PropagatorValue:
    """Bare value relabelled as a uniform fallback."""
    logger.warning(f"uniform approximation unavailable at T={T:.6g} ({reason}); using bare")
    try:
        bare = bare_propagator(model, z0, zf, T)
    except BargmannError as exc:
        return PropagatorValue(value=complex(float("nan"), float("nan")), method=Method.UNIFORM,
                               status=Status.FAILED, diagnostics={"error": str(exc), "reason": reason})
    status = Status.CAUSTIC if bare.caustic_flag else Status.FALLBACK
    return replace(bare, method=Method.UNIFORM, status=status,
                   diagnostics={**bare.diagnostics, "fallback": "bare", "reason": reason})


def uniform_propagator(model: ModelSymbol, z0: Label, zf: Label, T: float,
                       seed_fraction: Optional[float] = None, mapping: str = "action",
                       **tracker_options) -> PropagatorValue:
    """Uniform K(zf*, z0, T).

    By default the pair is seeded where it comes closest over [min(0.05, T/2), T]; with
    seed_fraction the pair found at seed_fraction * T is used instead. Falls back to the
    bare value (status "fallback") when no partner root exists.
    """
    if seed_fraction is not None and not 0 < seed_fraction <= 1:
        raise ValueError(f"seed_fraction must lie in (0, 1], got {seed_fraction}")
    if T == 0:
        return fallback_to_bare(model, z0, zf, T, reason="single root at T=0")
    tracker = UniformTracker(model, z0, zf, mapping=mapping, **tracker_options)
    try:
        if seed_fraction is None:
            tracker.seed_auto(min(tracker.reference_t, 0.5 * T), T)
        else:
            tracker.seed(seed_fraction * T)
        return tracker.advance(T)
    except BargmannError as exc:
        return fallback_to_bare(model, z0, zf, T, reason=str(exc))
