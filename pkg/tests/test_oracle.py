"""Tests for the exact propagators."""
import cmath
import math

import numpy as np
import pytest

from bargmann.core.errors import PoleProximityError, TransformUndefinedError, TruncationError
from bargmann.core.states import Label, overlap
from bargmann.models.symbols import MatrixModel
from bargmann.oracle.exact import (
    SpectrumSpec,
    exact_conjugate,
    exact_kernel,
    exact_propagator,
    fock_truncation,
)
from bargmann.transforms.conjugate import conjugate_apply

from tests.conftest import FIG1_Z, relative_error

Z0 = Label.from_complex(0.5 + 0.3j)
ZF = Label.from_complex(0.2 - 0.4j)


class TestExactPropagator:

    def test_zero_duration_is_overlap(self, quartic):
        assert exact_propagator(quartic, Z0, ZF, 0.0) == pytest.approx(overlap(ZF, Z0))

    def test_fig1_initial_value(self, quartic):
        z = Label.from_complex(FIG1_Z)
        assert abs(exact_propagator(quartic, z, z, 0.0)) ** 2 == pytest.approx(math.exp(0.25))

    @pytest.mark.parametrize("T", [0.3, 1.0, 4.0])
    def test_oscillator_closed_form_matches_fock(self, ho, T):
        closed = exact_propagator(ho, Z0, ZF, T)
        fock = exact_propagator(ho, Z0, ZF, T, truncation=60)
        assert relative_error(fock, closed) < 1e-12
        x = ZF.z0.conjugate() * Z0.z0
        assert closed == pytest.approx(cmath.exp(x * cmath.exp(-1j * T) - 0.5j * T))

    def test_quartic_half_period(self, quartic):
        """E_m T / hbar mod 2 pi is m-independent at T = pi."""
        for T in (0.4, 1.7):
            shifted = exact_propagator(quartic, Z0, ZF, T + math.pi)
            assert shifted == pytest.approx(cmath.exp(-0.25j * math.pi) * exact_propagator(quartic, Z0, ZF, T),
                                            rel=1e-10)

    def test_doubling_truncation_changes_nothing(self, quartic):
        x = ZF.z0.conjugate() * Z0.z0
        n = fock_truncation(x)
        base = exact_propagator(quartic, Z0, ZF, 1.3, truncation=n)
        assert exact_propagator(quartic, Z0, ZF, 1.3, truncation=2 * n) == pytest.approx(base, rel=1e-14)

    def test_holomorphic_in_final_label(self, quartic):
        zs, h = 0.3 + 0.2j, 1e-6
        K = lambda a: exact_kernel(quartic, a, Z0.z0, 0.8)
        along_real = (K(zs + h) - K(zs - h)) / (2 * h)
        along_imag = (K(zs + 1j * h) - K(zs - 1j * h)) / (2j * h)
        assert along_real == pytest.approx(along_imag, rel=1e-6)

    def test_matrix_model(self, quartic):
        model = MatrixModel("quartic-matrix", quartic.matrix(50))
        assert exact_propagator(model, Z0, ZF, 0.7) == pytest.approx(
            exact_propagator(quartic, Z0, ZF, 0.7), rel=1e-10)
        with pytest.raises(TruncationError):
            exact_propagator(model, Z0, ZF, 0.7, truncation=80)

    def test_spectrum_spec(self, quartic):
        spec = SpectrumSpec.for_model(quartic)
        assert spec.eigenvalue is not None and spec.matrix is None

    def test_truncation_cap(self):
        assert fock_truncation(0) == 1
        with pytest.raises(TruncationError) as info:
            fock_truncation(1000.0)
        assert info.value.required_n > 1000


class TestExactConjugate:

    def test_series_matches_transform(self, quartic):
        z0 = Label.from_complex(0.3 + 0.1j)
        for w in (1.0, 0.6 - 0.8j):
            series = exact_conjugate(quartic, w, z0, 0.9)
            numeric = conjugate_apply(lambda zs: exact_kernel(quartic, zs, z0.z0, 0.9), w)
            assert relative_error(numeric, series) < 1e-6

    def test_series_domain(self, quartic):
        with pytest.raises(TransformUndefinedError):
            exact_conjugate(quartic, 0.2, Label.from_complex(0.5), 1.0)

    def test_oscillator_pole(self, ho):
        T = 0.6
        pole = Z0.z0 * cmath.exp(-1j * T)
        with pytest.raises(PoleProximityError):
            exact_conjugate(ho, pole + 1e-10, Z0, T)
        assert np.isfinite(exact_conjugate(ho, pole + 0.1, Z0, T))
