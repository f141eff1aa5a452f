import math

import numpy as np
import pytest
from scipy.integrate import quad

from fracdyn.errors import ParameterError
from fracdyn.special import (
    g_profile,
    incomplete_gamma_upper,
    mittag_leffler,
    one_sided_stable_density,
    stable_inverse_density_closed,
)
from fracdyn.special import _ml_asymptotic, _ml_integral, _ml_taylor


class TestMittagLeffler:
    def test_exponential_case(self):
        assert mittag_leffler(1.0, 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_zero_argument(self):
        assert mittag_leffler(0.7, 0.0) == 1.0

    def test_half_order_erfc_identity(self):
        # oracle: E_{1/2}(-x) = exp(x^2) erfc(x)
        for x in (0.3, 1.0, 2.5, 7.0):
            oracle = math.exp(x * x) * math.erfc(x)
            assert mittag_leffler(0.5, -x) == pytest.approx(oracle, rel=1e-11)

    def test_branch_seams_agree(self):
        for alpha in (0.3, 0.5, 0.8):
            t = _ml_taylor(alpha, -1.0, 1e-13)
            i = _ml_integral(alpha, -1.0, 1e-13)
            assert t == pytest.approx(i, rel=1e-10)
            i50 = _ml_integral(alpha, -50.0, 1e-13)
            a50 = _ml_asymptotic(alpha, -50.0, 1e-13)
            assert i50 == pytest.approx(a50, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_completely_monotone_samples(self, alpha):
        xs = np.linspace(0.01, 40.0, 300)
        vals = np.array([mittag_leffler(alpha, -x) for x in xs])
        assert np.all(vals > 0.0)
        assert np.all(np.diff(vals) < 0.0)
        assert np.all(np.diff(vals, 2) > 0.0)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_algebraic_tail(self, alpha):
        x = 1e6
        ratio = mittag_leffler(alpha, -x) * x * math.gamma(1.0 - alpha)
        assert abs(ratio - 1.0) < 0.01

    def test_positive_argument_series(self):
        # oracle: direct high-order series for small positive z
        z, alpha = 0.7, 0.6
        oracle = math.fsum(z**n / math.gamma(alpha * n + 1.0) for n in range(80))
        assert mittag_leffler(alpha, z) == pytest.approx(oracle, rel=1e-12)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ParameterError):
            mittag_leffler(1.2, -1.0)
        with pytest.raises(ParameterError):
            mittag_leffler(0.0, -1.0)


class TestIncompleteGamma:
    def test_order_one(self):
        assert incomplete_gamma_upper(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-14)

    def test_half_order_at_zero(self):
        assert incomplete_gamma_upper(0.5, 0.0) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_order_zero_against_quadrature(self):
        oracle, _ = quad(lambda s: math.exp(-s) / s, 1.0, np.inf)
        assert incomplete_gamma_upper(0.0, 1.0) == pytest.approx(oracle, rel=1e-10)

    @pytest.mark.parametrize("nu", [-1.3, -0.2, 0.7, 2.0])
    @pytest.mark.parametrize("z", [0.5, 2.0, 8.0])
    def test_recurrence(self, nu, z):
        lhs = incomplete_gamma_upper(nu + 1.0, z)
        rhs = nu * incomplete_gamma_upper(nu, z) + z**nu * math.exp(-z)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_negative_order_against_quadrature(self):
        oracle, _ = quad(lambda s: math.exp(-s) * s**-1.5, 1.0, np.inf)
        assert incomplete_gamma_upper(-0.5, 1.0) == pytest.approx(oracle, rel=1e-10)

    def test_divergence_at_zero(self):
        with pytest.raises(ParameterError):
            incomplete_gamma_upper(-0.5, 0.0)


class TestStableDensity:
    def test_half_closed_form(self):
        for x in (0.05, 0.3, 1.0, 4.0):
            oracle = x**-1.5 * math.exp(-1.0 / (4.0 * x)) / (2.0 * math.sqrt(math.pi))
            assert one_sided_stable_density(0.5, x) == pytest.approx(oracle, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_normalization(self, alpha):
        val, _ = quad(lambda x: one_sided_stable_density(alpha, x), 0.0, np.inf, limit=500)
        assert val == pytest.approx(1.0, abs=5e-8)

    def test_series_integral_seam(self):
        for alpha in (0.3, 0.7):
            lo = one_sided_stable_density(alpha, 0.999)
            hi = one_sided_stable_density(alpha, 1.001)
            # continuity across the representation switch
            assert abs(lo - hi) < 0.01 * abs(lo)


class TestInverseStableDensity:
    def test_value_at_origin(self):
        assert stable_inverse_density_closed(0.5, 1.0, 0.0) == pytest.approx(
            1.0 / math.sqrt(math.pi), rel=1e-14
        )

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    @pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
    def test_normalization(self, alpha, t):
        val, _ = quad(
            lambda tau: stable_inverse_density_closed(alpha, t, tau), 0.0, np.inf, limit=500
        )
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_transform_identity_half(self):
        # int e^(-tau) G_1(tau) dtau must equal E_{1/2}(-1) = e erfc(1)
        val, _ = quad(
            lambda tau: math.exp(-tau) * stable_inverse_density_closed(0.5, 1.0, tau),
            0.0, np.inf, limit=500,
        )
        assert val == pytest.approx(math.e * math.erfc(1.0), rel=1e-8)

    def test_transform_identity_general(self):
        for alpha in (0.3, 0.8):
            val, _ = quad(
                lambda tau: math.exp(-tau) * stable_inverse_density_closed(alpha, 1.0, tau),
                0.0, np.inf, limit=500,
            )
            assert val == pytest.approx(mittag_leffler(alpha, -1.0), rel=1e-7)


def test_g_profile():
    assert g_profile(0.5, 1.0) == pytest.approx(1.0 / math.gamma(0.5), rel=1e-14)
    assert g_profile(1.0, 7.3) == pytest.approx(1.0, rel=1e-14)
