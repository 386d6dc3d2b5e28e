"""
Scenario runner: sweeps T for every requested method and collects one table row per (T, method).
"""
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from bargmann.config.config_validator import ScenarioConfig
from bargmann.core.errors import BargmannError, CausticNotFoundError
from bargmann.core.states import Label
from bargmann.dynamics.shooting import (
    SearchBox,
    continue_family,
    find_all_roots,
    has_closed_form_roots,
    locate_caustic,
)
from bargmann.models.symbols import ModelSymbol, harmonic_oscillator
from bargmann.oracle.exact import exact_conjugate, exact_kernel, exact_propagator
from bargmann.propagators.semiclassical import (
    bare_propagator,
    conjugate_propagator,
    continued_vv_family,
    uu_problem,
    vv_problem,
)
from bargmann.propagators.uniform import REFERENCE_T, UniformTracker, fallback_to_bare
from bargmann.propagators.values import Method, PropagatorValue, Status
from bargmann.transforms.conjugate import SQRT_2PI_I, conjugate_apply, conjugate_invert
from bargmann.utils.emoji_logger import EmojiLogger

logger = logging.getLogger(__name__)

COLUMNS = ["T", "re_K", "im_K", "abs2_K", "method", "n_traj", "caustic_flag", "re_B", "im_B",
           "status"]
NAN = complex(float("nan"), float("nan"))


def _failed(method: Method, exc: Exception) -> PropagatorValue:
    return PropagatorValue(value=NAN, method=method, status=Status.FAILED,
                           diagnostics={"error": str(exc)})


def _progress(config: ScenarioConfig, Ts: Sequence[float], method: str):
    return tqdm(Ts, desc=method, leave=False, disable=not config.progress)


def _exact_values(model: ModelSymbol, config: ScenarioConfig,
                  Ts: Sequence[float]) -> List[PropagatorValue]:
    z0, zf = config.labels
    values = []
    for T in _progress(config, Ts, "exact"):
        try:
            values.append(PropagatorValue(value=exact_propagator(model, z0, zf, T),
                                          method=Method.EXACT))
        except (BargmannError, OverflowError) as exc:
            values.append(_failed(Method.EXACT, exc))
    return values


def _bare_values(model: ModelSymbol, config: ScenarioConfig,
                 Ts: Sequence[float]) -> List[PropagatorValue]:
    z0, zf = config.labels
    family = continued_vv_family(model, z0, zf, Ts, on_failure="skip")
    values = []
    for T, record in zip(_progress(config, Ts, "bare"), family):
        if record is None:
            values.append(_failed(Method.BARE, BargmannError(f"no continued root at T={T:.6g}")))
            continue
        try:
            value = bare_propagator(model, z0, zf, T, trajectories=[record])
        except BargmannError as exc:
            values.append(_failed(Method.BARE, exc))
            continue
        if value.caustic_flag:
            EmojiLogger.caustic(f"bare propagator at a caustic, T={T:.6g}", extra={"v0": record.v0})
        values.append(value)
    return values


def _uniform_values(model: ModelSymbol, config: ScenarioConfig,
                    Ts: Sequence[float]) -> List[PropagatorValue]:
    """Seed where the pair comes closest over the grid (or at UNIFORM_SEED_T) and track
    every duration from there."""
    z0, zf = config.labels
    Ts = [float(T) for T in Ts]
    positive = [T for T in Ts if T > 0]
    if not positive:
        return [fallback_to_bare(model, z0, zf, T, reason="single root at T=0") for T in Ts]

    tracker = UniformTracker(model, z0, zf, mapping=config.mapping, seed_grid=config.search_grid,
                             rng_seed=config.seed, reference_t=min(REFERENCE_T, min(positive)))
    try:
        if config.uniform_seed_t is None:
            tracker.seed_auto(min(positive), max(positive))
        else:
            tracker.seed(min(positive, key=lambda T: abs(T - config.uniform_seed_t)))
    except BargmannError as exc:
        EmojiLogger.fallback("uniform pair could not be seeded", extra={"error": str(exc)})
        return [fallback_to_bare(model, z0, zf, T, reason=str(exc)) for T in Ts]
    EmojiLogger.log('airy', f"uniform pair seeded at T={tracker.seed_T:.6g}",
                    extra={"valleys": tracker.valleys, "reference_T": tracker.reference_t})

    values = tracker.sweep(Ts)
    for value in values:
        if value.status == Status.FALLBACK:
            EmojiLogger.fallback("uniform value replaced by bare", extra=value.diagnostics)
    return values


def _conjugate_values(model: ModelSymbol, config: ScenarioConfig,
                      Ts: Sequence[float]) -> List[PropagatorValue]:
    """K~(w = zf, z0, T): every closed-form root inside the number-state sum when the model
    has them, otherwise multistart at the first reachable T and UU continuation."""
    z0, zf = config.labels
    w = zf.z0
    factory = lambda T: uu_problem(z0, w, T, model.model_id)
    Ts = [float(T) for T in Ts]
    if any(has_closed_form_roots(model, factory(T)) for T in Ts):
        values = []
        for T in _progress(config, Ts, "conjugate"):
            try:
                value = conjugate_propagator(model, w, z0, T)
            except BargmannError as exc:
                value = _failed(Method.CONJUGATE, exc)
            if value.n_traj == 0 and value.status == Status.OK:
                value = _failed(Method.CONJUGATE, BargmannError(f"no UU root at T={T:.6g}"))
            values.append(value)
        EmojiLogger.log('shooting', "conjugate roots from the closed form",
                        extra={"n_traj": [v.n_traj for v in values]})
        return values

    box = SearchBox.around(0j, config.search_radius)
    values: List[PropagatorValue] = []
    for i, T in enumerate(Ts):
        try:
            roots = find_all_roots(model, factory(T), box, config.search_grid, seed=config.seed)
        except BargmannError as exc:
            logger.debug(f"UU multistart failed at T={T:.6g}: {exc}")
            roots = []
        if not roots:
            values.append(_failed(Method.CONJUGATE, BargmannError(f"no UU root at T={T:.6g}")))
            continue
        start = min(roots, key=lambda r: abs(r.v0 - zf.z0.conjugate()))
        family = continue_family(model, factory, Ts[i:], start.v0, on_failure="skip")
        for T_k, record in zip(Ts[i:], family):
            if record is None:
                values.append(_failed(Method.CONJUGATE,
                                      BargmannError(f"UU continuation lost at T={T_k:.6g}")))
            else:
                try:
                    values.append(conjugate_propagator(model, w, z0, T_k, trajectories=[record]))
                except BargmannError as exc:
                    values.append(_failed(Method.CONJUGATE, exc))
        break
    return values


METHOD_RUNNERS: Dict[str, Callable[[ModelSymbol, ScenarioConfig, Sequence[float]], List[PropagatorValue]]] = {
    "exact": _exact_values,
    "bare": _bare_values,
    "uniform": _uniform_values,
    "conjugate": _conjugate_values,
}


def _rows(Ts: Sequence[float], values: Sequence[PropagatorValue], method: str) -> List[dict]:
    rows = []
    for T, value in zip(Ts, values):
        b = value.b_coeff if value.b_coeff is not None else NAN
        rows.append({
            "T": float(T),
            "re_K": value.value.real,
            "im_K": value.value.imag,
            "abs2_K": value.abs2,
            "method": method,
            "n_traj": value.n_traj,
            "caustic_flag": bool(value.caustic_flag),
            "re_B": b.real,
            "im_B": b.imag,
            "status": value.status,
        })
    return rows


def run_scenario(config: ScenarioConfig) -> pd.DataFrame:
    """Evaluate every method on the scenario's T grid.

    Methods run concurrently; a point that fails becomes a row with status "failed" and the
    sweep continues.

    Returns:
        Table with one row per (T, method), sorted by method then T
    """
    model = config.build_model()
    Ts = config.T_grid
    EmojiLogger.sweep(f"Scenario {config.name!r}: {model.model_id}, {len(Ts)} durations, "
                      f"methods {', '.join(config.methods)}")
    rows: List[dict] = []
    with ThreadPoolExecutor(max_workers=min(config.workers, len(config.methods))) as pool:
        futures = {pool.submit(METHOD_RUNNERS[m], model, config, Ts): m for m in config.methods}
        for future in tqdm(as_completed(futures), total=len(futures), desc="methods",
                           disable=not config.progress):
            method = futures[future]
            try:
                values = future.result()
            except (BargmannError, ArithmeticError) as exc:
                EmojiLogger.error(f"{method} sweep failed: {exc}")
                values = [_failed(Method(method), exc) for _ in Ts]
            rows.extend(_rows(Ts, values, method))
            logger.debug(f"{method}: {len(values)} values")
    table = pd.DataFrame(rows, columns=COLUMNS)
    table = table.sort_values(["method", "T"], kind="mergesort").reset_index(drop=True)
    failed = int((table["status"] == Status.FAILED).sum())
    EmojiLogger.success(f"Scenario {config.name!r}: {len(table)} rows, {failed} failed")
    return table


def write_table(table: pd.DataFrame, path: Optional[str] = None, output_format: str = "csv") -> None:
    """Write the table as CSV (17 significant digits) or JSON records; None writes to stdout."""
    target = sys.stdout if path is None else Path(path)
    if isinstance(target, Path):
        target.parent.mkdir(parents=True, exist_ok=True)
    if output_format == "csv":
        table.to_csv(target, index=False, float_format="%.17g")
    elif output_format == "json":
        table.to_json(target, orient="records", double_precision=15, indent=2)
    else:
        raise ValueError(f"unknown output format {output_format!r}")
    if path is not None:
        EmojiLogger.log('save', f"Wrote {len(table)} rows to {path}")


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b)


def transform_demo(seed: int = 0, orders: Sequence[int] = range(6)) -> pd.DataFrame:
    """Forward and inverse transforms of z*^m plus the oscillator K~ against closed forms.

    Returns:
        One row per check: check, max_error, threshold, passed
    """
    rng = np.random.default_rng(seed)
    ws = [r * np.exp(1j * a) for r, a in zip(rng.uniform(0.6, 2.0, 4), rng.uniform(-np.pi, np.pi, 4))]
    zs = [r * np.exp(1j * a) for r, a in zip(rng.uniform(0.3, 1.5, 4), rng.uniform(-np.pi, np.pi, 4))]

    def phi_tilde(m: int) -> Callable[[complex], complex]:
        return lambda w: math.factorial(m) / w ** (m + 1) / SQRT_2PI_I

    forward = max(_relative(conjugate_apply(lambda zs_, m=m: zs_ ** m, w), phi_tilde(m)(w))
                  for m in orders for w in ws)
    round_trip = max(_relative(conjugate_invert(phi_tilde(m), z), z ** m)
                     for m in orders for z in zs)

    model = harmonic_oscillator(omega=1.0)
    errors = []
    for _ in range(10):
        z0 = Label.from_complex(complex(*rng.uniform(-0.8, 0.8, 2)))
        w = (abs(z0.z0) + rng.uniform(0.3, 1.5)) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        T = float(rng.uniform(0.0, 2 * np.pi))
        numeric = conjugate_apply(lambda zs_: exact_kernel(model, zs_, z0.z0, T), w)
        errors.append(_relative(numeric, exact_conjugate(model, w, z0, T)))

    report = pd.DataFrame([
        {"check": "forward phi_m", "max_error": forward, "threshold": 1e-7},
        {"check": "round trip phi_m", "max_error": round_trip, "threshold": 1e-6},
        {"check": "oscillator K~", "max_error": max(errors), "threshold": 1e-6},
    ])
    report["passed"] = report["max_error"] < report["threshold"]
    EmojiLogger.log('transform', "Transform checks: " + ", ".join(
        f"{row.check}={row.max_error:.2e}" for row in report.itertuples()),
        extra={"passed": bool(report["passed"].all())})
    return report


def caustic_scan(config: ScenarioConfig) -> Tuple[pd.DataFrame, dict]:
    """|m_vv| along the continued VV family and the located caustic (or the nearest approach)."""
    model = config.build_model()
    z0, zf = config.labels
    Ts = config.T_grid
    family = continued_vv_family(model, z0, zf, Ts, on_failure="skip")
    table = pd.DataFrame({
        "T": [float(T) for T in Ts],
        "abs_m_vv": [abs(r.M.m_vv) if r is not None else float("nan") for r in family],
        "re_v0": [r.v0.real if r is not None else float("nan") for r in family],
        "im_v0": [r.v0.imag if r is not None else float("nan") for r in family],
    })
    factory = lambda T: vv_problem(z0, zf, T, model.model_id)
    try:
        location = locate_caustic(model, factory, family)
        summary = {"found": True, "T_c": location.T_c, "v0": location.trajectory.v0,
                   "abs_m_vv": abs(location.trajectory.M.m_vv)}
        EmojiLogger.caustic(f"Caustic located at T_c={location.T_c:.10g}", extra=summary)
    except CausticNotFoundError as exc:
        summary = {"found": False, **exc.nearest}
        EmojiLogger.info(f"No caustic in [{config.t_min}, {config.t_max}]: {exc}")
    return table, summary
