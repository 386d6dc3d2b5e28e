"""Tests for the bare and conjugate semiclassical propagators."""
import cmath
import math

import numpy as np
import pytest

from bargmann.core.errors import ModelDomainError
from bargmann.core.states import Label
from bargmann.dynamics.shooting import (
    BvpKind,
    BvpProblem,
    SearchBox,
    closed_form_roots,
    find_all_roots,
    solve_bvp,
)
from bargmann.dynamics.trajectory import integrate
from bargmann.oracle.exact import exact_conjugate, exact_propagator
from bargmann.propagators.semiclassical import (
    bare_propagator,
    conjugate_contribution,
    conjugate_propagator,
    continued_vv_family,
    continued_vv_root,
    quadratic_inverse,
    trajectory_contribution,
    uu_problem,
)
from bargmann.propagators.values import Method, PropagatorValue, Status

from tests.conftest import CAUSTIC_T, CAUSTIC_Z0, CAUSTIC_ZF_STAR, relative_error


class TestPropagatorValue:

    def test_caustic_value(self):
        value = PropagatorValue.at_caustic(Method.BARE, 1, note="x")
        assert not value.is_finite
        assert value.caustic_flag and value.status == Status.CAUSTIC
        assert value.diagnostics == {"note": "x"}

    def test_abs2(self):
        assert PropagatorValue(3 + 4j, Method.EXACT).abs2 == pytest.approx(25.0)


class TestBareOscillator:
    """The bare propagator is exact for quadratic Hamiltonians."""

    def test_random_points(self, ho, rng):
        for _ in range(50):
            z0 = Label.from_complex(complex(*rng.uniform(-1, 1, 2)))
            zf = Label.from_complex(complex(*rng.uniform(-1, 1, 2)))
            T = float(rng.uniform(0.0, 4 * math.pi))
            bare = bare_propagator(ho, z0, zf, T)
            assert bare.status == Status.OK and bare.n_traj == 1
            assert relative_error(bare.value, exact_propagator(ho, z0, zf, T)) < 1e-9

    def test_overflow_is_a_domain_error(self, ho):
        z = Label.from_complex(40.0)
        with pytest.raises(ModelDomainError):
            bare_propagator(ho, z, z, 1.0)

    def test_zero_duration(self, ho):
        z0, zf = Label.from_complex(0.3 + 0.2j), Label.from_complex(-0.1 + 0.5j)
        assert bare_propagator(ho, z0, zf, 0.0).value == pytest.approx(
            cmath.exp(zf.z0.conjugate() * z0.z0))


class TestBareQuartic:
    """Accuracy and breakdown along the diagonal sweep at z = 1/(2 sqrt 2)."""

    def test_accurate_at_short_times(self, quartic, fig1_labels):
        z0, zf = fig1_labels
        Ts = np.linspace(0.1, 1.5, 8)
        family = continued_vv_family(quartic, z0, zf, Ts)
        for T, record in zip(Ts, family):
            bare = bare_propagator(quartic, z0, zf, T, trajectories=[record])
            assert relative_error(bare.value, exact_propagator(quartic, z0, zf, T)) < 0.05

    @pytest.mark.slow
    def test_breaks_down_at_long_times(self, quartic, fig1_labels):
        z0, zf = fig1_labels
        Ts = np.linspace(2.0, 3.0, 11)
        family = continued_vv_family(quartic, z0, zf, Ts, on_failure="skip")
        errors = [relative_error(bare_propagator(quartic, z0, zf, T, trajectories=[r]).value,
                                 exact_propagator(quartic, z0, zf, T))
                  for T, r in zip(Ts, family) if r is not None]
        assert max(errors) > 0.5

    def test_single_trajectory_assembly(self, quartic, fig1_labels):
        z0, zf = fig1_labels
        record = continued_vv_root(quartic, z0, zf, 0.5)
        phase = 1j * (record.S + record.G) - 0.5j * record.sigma_vv
        expected = cmath.exp(phase) / math.sqrt(abs(record.M.m_vv))
        assert trajectory_contribution(record) == pytest.approx(expected)
        assert bare_propagator(quartic, z0, zf, 0.5, trajectories=[record]).value == pytest.approx(expected)

    def test_extra_roots(self, quartic, fig1_labels):
        z0, zf = fig1_labels
        record = continued_vv_root(quartic, z0, zf, 0.5)
        others = [r for r in find_all_roots(quartic, BvpProblem(BvpKind.VV, z0.z0, zf.z0, 0.5),
                                            SearchBox.around(0j, 2.0), grid_n=8)
                  if abs(r.v0 - record.v0) > 1e-7]
        reported = bare_propagator(quartic, z0, zf, 0.5, trajectories=[record], extra_roots=others)
        summed = bare_propagator(quartic, z0, zf, 0.5, trajectories=[record], extra_roots=others,
                                 include_extra=True)
        assert reported.n_traj == 1
        assert reported.diagnostics["extra_roots"] == len(others)
        assert summed.n_traj == 1 + len(others)


class TestCaustic:

    def test_flagged_at_caustic(self, quartic, caustic_labels):
        z0, zf = caustic_labels
        record = integrate(quartic, CAUSTIC_Z0, 0.5j / CAUSTIC_Z0, CAUSTIC_T)
        assert record.vT == pytest.approx(CAUSTIC_ZF_STAR)
        value = bare_propagator(quartic, z0, zf, CAUSTIC_T, trajectories=[record])
        assert value.caustic_flag and value.status == Status.CAUSTIC
        assert not value.is_finite
        with pytest.raises(ZeroDivisionError):
            trajectory_contribution(record)


class TestConjugate:
    """Structural properties of the conjugate propagator."""

    def test_quadratic_inverse_recovers_bare_term(self, quartic, fig1_labels):
        z0, zf = fig1_labels
        for T in (0.3, 0.8):
            record = continued_vv_root(quartic, z0, zf, T)
            assert quadratic_inverse(record) == pytest.approx(trajectory_contribution(record), rel=1e-10)

    def test_sum_of_contributions(self, quartic):
        z0 = Label.from_complex(0.5 + 0.3j)
        w = 0.4 - 0.5j
        record = solve_bvp(quartic, BvpProblem(BvpKind.UU, z0.z0, w, 0.6), 0.1)
        value = conjugate_propagator(quartic, w, z0, 0.6, trajectories=[record])
        assert value.method is Method.CONJUGATE and value.is_finite
        assert value.value == pytest.approx(conjugate_contribution(record))
        phase = 1j * (record.S_tilde + record.G) - 0.5j * record.sigma_uv
        assert abs(value.value) == pytest.approx(abs(cmath.exp(phase)) / math.sqrt(abs(record.M.m_uv)))

    def test_newton_from_guess(self, quartic):
        z0 = Label.from_complex(0.5 + 0.3j)
        value = conjugate_propagator(quartic, 0.4 - 0.5j, z0, 0.6, guess_v0=0.1)
        assert value.n_traj == 1 and value.is_finite

    def test_oscillator_is_degenerate(self, ho):
        z0 = Label.from_complex(0.5 + 0.3j)
        w = z0.z0 * cmath.exp(-1j * 0.7)
        value = conjugate_propagator(ho, w, z0, 0.7, guess_v0=0.0)
        assert value.caustic_flag
        assert value.diagnostics["degenerate"]

    def test_large_occupation_against_exact(self, quartic):
        z0 = Label.from_complex(3.0)
        w = 3.06 * cmath.exp(-2j)
        value = conjugate_propagator(quartic, w, z0, 0.1)
        assert value.n_traj >= 1
        assert relative_error(value.value, exact_conjugate(quartic, w, z0, 0.1)) < 0.1

    def test_growth_towards_initial_label(self, quartic):
        # w on the ray z0 exp(-i h'(n0) T) keeps the branch-0 root at n0 while |w - z0| ~ T
        z0 = Label.from_complex(0.5 + 0.3j)
        n0 = 0.125 + 0.5j
        distances, sizes = [], []
        for T in np.geomspace(1e-3, 1e-2, 6):
            w = z0.z0 * cmath.exp(-1j * (2 * n0 + 2) * T)
            (record,) = closed_form_roots(quartic, uu_problem(z0, w, T), branches=(0,))
            assert record.n == pytest.approx(n0, abs=1e-9)
            distances.append(abs(w - z0.z0))
            sizes.append(abs(conjugate_contribution(record)))
        slope = np.polyfit(np.log(distances), np.log(sizes), 1)[0]
        assert slope == pytest.approx(-0.5, abs=0.05)
