"""Tests for the conjugate transform and its inverse."""
import cmath
import math

import numpy as np
import pytest

from bargmann.core.errors import TransformUndefinedError
from bargmann.core.states import Label
from bargmann.oracle.exact import exact_conjugate, exact_kernel
from bargmann.transforms.conjugate import (
    DEFAULT_LINE,
    SQRT_2PI_I,
    ContourKind,
    ContourSpec,
    conjugate_apply,
    conjugate_invert,
)

from tests.conftest import relative_error

W_POINTS = [1.0, 0.8 + 0.9j, -1.3 + 0.2j, 0.4 - 1.1j]
Z_POINTS = [0.7, 0.5 + 0.6j, -0.9 - 0.3j, 1.2j]


def phi_tilde(m):
    """Closed-form transform of z*^m."""
    return lambda w: math.factorial(m) / w ** (m + 1) / SQRT_2PI_I


class TestContourSpec:

    @pytest.mark.parametrize("kwargs", [{"alpha": 0.0}, {"alpha": -1.0}, {"n_points": 5}])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            ContourSpec(**kwargs)

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            conjugate_apply(lambda z: 1.0, 1.0, DEFAULT_LINE)
        with pytest.raises(ValueError):
            conjugate_invert(phi_tilde(0), 1.0, ContourSpec(ContourKind.RAY))


class TestForward:

    @pytest.mark.parametrize("m", range(9))
    def test_monomials(self, m):
        for w in W_POINTS:
            value = conjugate_apply(lambda zs: zs ** m, w)
            assert relative_error(value, phi_tilde(m)(w)) < 1e-7

    def test_linearity(self):
        f = lambda zs: cmath.exp(0.3 * zs)
        g = lambda zs: zs ** 2
        w = 0.9 - 0.4j
        combined = conjugate_apply(lambda zs: f(zs) - 2j * g(zs), w)
        assert combined == pytest.approx(conjugate_apply(f, w) - 2j * conjugate_apply(g, w), rel=1e-9)

    def test_oscillator_propagator(self, ho, rng):
        for _ in range(5):
            z0 = Label.from_complex(complex(*rng.uniform(-0.7, 0.7, 2)))
            w = (abs(z0.z0) + rng.uniform(0.3, 1.5)) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            T = float(rng.uniform(0.0, 2 * math.pi))
            numeric = conjugate_apply(lambda zs: exact_kernel(ho, zs, z0.z0, T), w)
            assert relative_error(numeric, exact_conjugate(ho, w, z0, T)) < 1e-6

    def test_zero_argument(self):
        with pytest.raises(ValueError):
            conjugate_apply(lambda zs: 1.0, 0.0)

    def test_growing_integrand(self):
        with pytest.raises(TransformUndefinedError):
            conjugate_apply(lambda zs: cmath.exp(3.0 * zs), 1.0)

    def test_fixed_truncation(self):
        spec = ContourSpec(ContourKind.RAY, r_max=60.0)
        assert relative_error(conjugate_apply(lambda zs: zs, 1.0, spec), phi_tilde(1)(1.0)) < 1e-10


class TestInverse:

    @pytest.mark.parametrize("m", range(6))
    def test_round_trip(self, m):
        for z_star in Z_POINTS:
            assert relative_error(conjugate_invert(phi_tilde(m), z_star), z_star ** m) < 1e-6

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_independent_of_offset(self, alpha):
        spec = ContourSpec(ContourKind.SHIFTED_LINE, alpha=alpha)
        for z_star in Z_POINTS[:2]:
            assert conjugate_invert(phi_tilde(2), z_star, spec) == pytest.approx(
                conjugate_invert(phi_tilde(2), z_star), rel=1e-6)

    def test_linearity(self):
        a, b = 0.7 - 0.2j, -1.5j
        combined = lambda w: sum(coef * phi_tilde(m)(w) for m, coef in enumerate((a, 0.0, b, 1.0)))
        for z_star in Z_POINTS:
            expected = a + b * z_star ** 2 + z_star ** 3
            assert relative_error(conjugate_invert(combined, z_star), expected) < 1e-6

    @pytest.mark.slow
    def test_round_trip_through_forward_transform(self):
        f = lambda zs: 0.5 - zs + 2j * zs ** 2 + zs ** 3
        ftil = lambda w: conjugate_apply(f, w)
        z_star = 0.5 + 0.6j
        assert relative_error(conjugate_invert(ftil, z_star), f(z_star)) < 1e-5

    def test_origin(self):
        assert abs(conjugate_invert(phi_tilde(1), 0.0)) < 1e-8

    def test_non_decaying(self):
        with pytest.raises(TransformUndefinedError):
            conjugate_invert(lambda w: 1.0, 0.5)

    def test_inverts_oscillator_propagator(self, ho):
        z0, T = Label.from_complex(0.3 - 0.2j), 0.9
        z_star = 0.4 + 0.5j
        value = conjugate_invert(lambda w: exact_conjugate(ho, w, z0, T), z_star)
        assert relative_error(value, exact_kernel(ho, z_star, z0.z0, T)) < 1e-6
