"""Tests for complex Airy functions and the cubic oscillatory integral."""
import cmath
import math

import numpy as np
import pytest
from scipy.special import airy as scipy_airy
from scipy.special import airye as scipy_airye

from bargmann.specfun.airy import (
    OMEGA,
    AiryBranch,
    airy,
    airy_bi,
    airy_solution,
    branch_valleys,
    cubic_oscillatory_integral,
    descent_valleys,
    sector_branch,
    valley_quadrature,
)

AI0 = 0.3550280538878172
AIP0 = -0.2588194037928068


def random_points(rng, count=8, radius=4.0):
    return radius * np.sqrt(rng.uniform(0, 1, count)) * np.exp(2j * np.pi * rng.uniform(0, 1, count))


class TestAiryValues:

    def test_origin(self):
        value = airy(0)
        assert value.ai == pytest.approx(AI0, rel=1e-14)
        assert value.ai_prime == pytest.approx(AIP0, rel=1e-14)
        assert not value.is_scaled

    def test_connection_formula(self, rng):
        for z in random_points(rng):
            total = sum(OMEGA ** k * airy_solution(z, AiryBranch(k)).unscaled()[0] for k in range(3))
            assert abs(total) < 1e-12 * max(1.0, abs(airy(z).ai))

    def test_wronskian(self, rng):
        for z in random_points(rng, radius=3.0):
            ai, aip = airy(z).unscaled()
            bi, bip = airy_bi(z)
            assert ai * bip - aip * bi == pytest.approx(1 / math.pi, rel=1e-10)

    def test_bi_matches_scipy(self, rng):
        for z in random_points(rng, radius=3.0):
            _, _, bi, bip = scipy_airy(z)
            assert airy_bi(z)[0] == pytest.approx(bi, rel=1e-10)
            assert airy_bi(z)[1] == pytest.approx(bip, rel=1e-10)

    @pytest.mark.parametrize("x", [-5.0, -1.0, 0.5, 3.0])
    def test_real_axis(self, x):
        value = airy(x)
        ai, aip, _, _ = scipy_airy(x)
        assert abs(value.ai.imag) < 1e-15
        assert value.ai == pytest.approx(ai, rel=1e-10)
        assert value.ai_prime == pytest.approx(aip, rel=1e-10)

    @pytest.mark.parametrize("angle", [0.0, 0.7, 2.0, -2.5])
    def test_continuous_across_radius_six(self, angle):
        inner = airy(5.9999999 * cmath.exp(1j * angle)).unscaled()
        outer = airy(6.0000001 * cmath.exp(1j * angle)).unscaled()
        assert outer[0] == pytest.approx(inner[0], rel=1e-5)
        assert outer[1] == pytest.approx(inner[1], rel=1e-5)

    def test_scaled_beyond_underflow(self):
        value = airy(200.0)
        assert value.is_scaled
        eai, eaip, _, _ = scipy_airye(200.0)
        assert value.ai == pytest.approx(eai, rel=1e-12)
        assert value.scale_exponent == pytest.approx(-(2 / 3) * 200.0 ** 1.5)

    def test_argument_limit(self):
        with pytest.raises(ValueError):
            airy(2e4)


class TestSectors:
    """Choice of Airy solution by the sector of -B."""

    @pytest.mark.parametrize("minus_b,expected", [
        (cmath.exp(1j * math.pi / 3), AiryBranch.ROT_PLUS),
        (cmath.exp(-1j * math.pi / 3), AiryBranch.ROT_MINUS),
        (-1.0, AiryBranch.PRINCIPAL),
        (cmath.exp(0.9j * math.pi), AiryBranch.PRINCIPAL),
    ])
    def test_interior(self, minus_b, expected):
        assert sector_branch(-minus_b) == (expected, False)

    def test_edge_flag(self):
        assert sector_branch(-1.0) == (AiryBranch.PRINCIPAL, True)
        assert sector_branch(0) == (AiryBranch.PRINCIPAL, False)

    def test_edge_flag_reported(self):
        result = cubic_oscillatory_integral(0.0, -1.0, 1.0, 0.0)
        assert result.on_stokes_line

    def test_branch_valleys(self):
        assert branch_valleys(AiryBranch.PRINCIPAL) == (1, 0)
        assert branch_valleys(AiryBranch.ROT_PLUS) == (2, 1)
        assert branch_valleys(AiryBranch.ROT_MINUS) == (0, 2)


class TestCubicIntegral:
    """Closed form against quadrature along the valley rays."""

    def test_real_line_limit(self):
        """With contour valley 1 -> valley 0 and c1 = 0 the integral is sqrt(2 pi) Ai(-B)."""
        B = 1.3
        result = cubic_oscillatory_integral(0.0, B, 1.0, 0.0, contour=(1, 0))
        assert result.value == pytest.approx(math.sqrt(2 * math.pi) * airy(-B).ai, rel=1e-13)

    @pytest.mark.parametrize("valleys", [(1, 0), (2, 1), (0, 2), (0, 1), (1, 2), (2, 0)])
    def test_closed_form_matches_quadrature(self, rng, valleys):
        for _ in range(3):
            A = complex(*rng.normal(0, 0.5, 2))
            B = complex(*rng.normal(0, 1.0, 2))
            c0, c1 = complex(*rng.normal(0, 1, 2)), complex(*rng.normal(0, 1, 2))
            closed = cubic_oscillatory_integral(A, B, c0, c1, contour=valleys).value
            numeric = valley_quadrature(A, B, c0, c1, valleys)
            assert closed == pytest.approx(numeric, rel=1e-8, abs=1e-9)

    def test_reversed_contour(self):
        forward = cubic_oscillatory_integral(0.2, 0.5 + 0.5j, 1.0, 0.3, contour=(2, 1)).value
        backward = cubic_oscillatory_integral(0.2, 0.5 + 0.5j, 1.0, 0.3, contour=(1, 2)).value
        assert backward == pytest.approx(-forward)

    def test_same_valley_rejected(self):
        with pytest.raises(ValueError):
            cubic_oscillatory_integral(0.0, 1.0, 1.0, 0.0, contour=(1, 1))

    def test_descent_through_positive_saddle(self):
        """For real B > 0 the path through X = +B^(1/2) runs from valley 2 to valley 0."""
        assert descent_valleys(1.0, 1.0, cmath.sqrt(0.5j)) == (2, 0)

    @pytest.mark.slow
    def test_random_draws(self, rng):
        contours = [(1, 0), (2, 1), (0, 2), (0, 1), (1, 2), (2, 0), "auto"]
        for _ in range(200):
            contour = contours[rng.integers(len(contours))]
            A = complex(*rng.normal(0, 0.5, 2))
            B = complex(*rng.normal(0, 1.0, 2))
            c0, c1 = complex(*rng.normal(0, 1, 2)), complex(*rng.normal(0, 1, 2))
            result = cubic_oscillatory_integral(A, B, c0, c1, contour=contour)
            if contour != "auto":
                assert result.valleys == contour
            numeric = valley_quadrature(A, B, c0, c1, result.valleys)
            assert result.value == pytest.approx(numeric, rel=1e-8, abs=1e-9)

    def test_large_constant_and_small_airy(self):
        """exp(iA) alone overflows and Ai(-B) alone underflows; their product is O(1)."""
        x = 121.0
        zeta = 2.0 / 3.0 * x ** 1.5
        result = cubic_oscillatory_integral(-1j * zeta, -x, 1.0, 0.0, contour=(1, 0))
        expected = math.sqrt(2 * math.pi) * scipy_airye(x)[0]
        assert result.value == pytest.approx(expected, rel=1e-10)
