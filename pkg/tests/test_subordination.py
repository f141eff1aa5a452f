import math

import numpy as np
import pytest

from fracdyn.density import GEvaluator, laplace_tau
from fracdyn.errors import ParameterError
from fracdyn.flows import (
    constant_observable,
    expabs_observable,
    exppow_observable,
    flow_start,
    linear_flow,
    power_flow,
)
from fracdyn.kernels import KernelSpec, make_triple
from fracdyn.special import mittag_leffler
from fracdyn.subordination import (
    SubordinatedSolution,
    asymptotic_profile,
    decay_ratio,
    evolution_residual,
    gfd_apply,
    predicted_decay,
    profile_probe,
    subordinate,
    subordinate_grid,
)


def _linear_solution(spec, v=1.0, a=1.0, method="auto"):
    return SubordinatedSolution(GEvaluator(spec, method=method), linear_flow(v),
                                expabs_observable(a), 0.0)


class TestSubordinate:
    def test_constant_is_preserved(self):
        sol = SubordinatedSolution(GEvaluator(KernelSpec.stable(0.5), method="contour"),
                                   linear_flow(1.0), constant_observable(1.0), 0.0)
        for t in (0.5, 3.0):
            assert subordinate(sol, t) == pytest.approx(1.0, abs=1e-7)

    def test_stable_matches_transform(self):
        sol = _linear_solution(KernelSpec.stable(0.5), method="contour")
        assert subordinate(sol, 1.0) == pytest.approx(math.e * math.erfc(1.0), rel=1e-7)

    def test_initial_value(self):
        sol = _linear_solution(KernelSpec.stable(0.5))
        assert subordinate(sol, 0.0) == 1.0

    def test_power_flow_reduces_to_transform(self):
        pf = power_flow(2.0, 1.0)
        sol = SubordinatedSolution(GEvaluator(KernelSpec.stable(0.5), method="contour"),
                                   pf, exppow_observable(1.0, 2.0), flow_start(pf))
        g = GEvaluator(KernelSpec.stable(0.5))
        for t in (0.5, 2.0):
            ref = math.exp(-1.0) * laplace_tau(g, t, 1.0)
            assert subordinate(sol, t) == pytest.approx(ref, rel=1e-7)

    def test_identity_clock(self):
        sol = _linear_solution(KernelSpec.identity())
        assert subordinate(sol, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-14)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_eigenfunction_identity(self, alpha):
        # ties the subordination integral, the density transform, and the
        # Mittag-Leffler evaluation together
        g = GEvaluator(KernelSpec.stable(alpha), method="contour")
        for c in (0.5, 1.0):
            for t in (1.0, 5.0):
                sol = SubordinatedSolution(g, linear_flow(c), expabs_observable(1.0), 0.0)
                assert subordinate(sol, t) == pytest.approx(
                    mittag_leffler(alpha, -c * t**alpha), rel=1e-6
                )

    def test_bounded_range(self):
        sol = _linear_solution(KernelSpec.gamma_process(1.0, 1.0))
        for t in (0.1, 1.0, 10.0):
            v = subordinate(sol, t)
            assert -1e-9 <= v <= 1.0 + 1e-9

    def test_monotone_decay_for_cm_observable(self):
        sol = _linear_solution(KernelSpec.stable(0.5), method="contour")
        vals = subordinate_grid(sol, np.geomspace(0.1, 50.0, 12))
        assert np.all(np.diff(vals) < 0.0)


class TestConvolutionDerivative:
    def test_constant_annihilated(self):
        tri = make_triple(KernelSpec.stable(0.5))
        assert abs(gfd_apply(tri, lambda s: 2.5, 1.0)) < 1e-6

    def test_caputo_of_linear(self):
        # classical result: derivative of t is t^(1-a)/Gamma(2-a)
        tri = make_triple(KernelSpec.stable(0.5))
        val = gfd_apply(tri, lambda s: s, 1.0)
        assert val == pytest.approx(1.0 / math.gamma(1.5), rel=1e-9)

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_mittag_leffler_eigenfunction(self, t):
        tri = make_triple(KernelSpec.stable(0.5))
        w = lambda s: mittag_leffler(0.5, -(s**0.5)) if s > 0 else 1.0
        val = gfd_apply(tri, w, t, n=2000)
        assert val == pytest.approx(-mittag_leffler(0.5, -(t**0.5)), rel=1e-4)

    def test_gamma_kernel_of_linear(self):
        # oracle: d/dt int k(t-s) s ds = N(t) for w(s) = s
        tri = make_triple(KernelSpec.gamma_process(1.0, 1.0))
        val = gfd_apply(tri, lambda s: s, 2.0)
        assert val == pytest.approx(float(tri.kernel_cumulative(2.0)), rel=1e-9)


class TestEvolutionResidual:
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_stable_linear(self, t):
        sol = _linear_solution(KernelSpec.stable(0.5), method="contour")
        assert evolution_residual(sol, t) < 1e-4

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_gamma_linear(self, t):
        sol = _linear_solution(KernelSpec.gamma_process(1.0, 1.0))
        assert evolution_residual(sol, t) < 1e-4

    def test_constant_observable_trivial(self):
        sol = SubordinatedSolution(GEvaluator(KernelSpec.stable(0.5), method="contour"),
                                   linear_flow(1.0), constant_observable(1.0), 0.0)
        assert evolution_residual(sol, 1.0) < 1e-5

    @pytest.mark.parametrize(
        "spec",
        [KernelSpec.sum_stable(0.25, 0.75), KernelSpec.distributed_order(),
         KernelSpec.tempered(0.5, 2.0)],
        ids=lambda s: s.family,
    )
    def test_other_clocks(self, spec):
        sol = _linear_solution(spec)
        assert evolution_residual(sol, 1.0, n_grid=2000) < 1e-3


class TestAsymptoticProfiles:
    def test_stable(self):
        p = asymptotic_profile(KernelSpec.stable(0.3))
        assert p.valid and p.gamma_exp == pytest.approx(0.7)
        assert float(p.slowly_varying(123.0)) == 1.0

    def test_sumstable(self):
        p = asymptotic_profile(KernelSpec.sum_stable(0.25, 0.75))
        assert p.valid and p.gamma_exp == pytest.approx(0.75)
        assert float(p.slowly_varying(1e4)) == pytest.approx(1.0 + 1e-2, rel=1e-12)

    def test_distributed(self):
        p = asymptotic_profile(KernelSpec.distributed_order())
        assert p.valid and p.gamma_exp == 1.0
        # asymptotically 1/log t
        assert float(p.slowly_varying(1e8)) == pytest.approx(1.0 / math.log(1e8), rel=1e-7)

    def test_gamma_profile_invalid_boundary(self):
        # the gamma clock has K(0+) = a/b finite: exponent 0, no power law
        p = asymptotic_profile(KernelSpec.gamma_process(1.0, 1.0))
        assert not p.valid and p.gamma_exp == 0.0
        # its slowly varying factor still matches the transform exactly
        assert float(p.slowly_varying(1e6)) == pytest.approx(1.0, rel=1e-5)
        with pytest.raises(ParameterError):
            predicted_decay(p, 1.0, 10.0)

    @pytest.mark.parametrize(
        "spec",
        [KernelSpec.truncated_stable(0.5, 1.0), KernelSpec.tempered(0.5, 2.0)],
        ids=lambda s: s.family,
    )
    def test_bounded_kernels_invalid(self, spec):
        p = asymptotic_profile(spec)
        assert not p.valid
        assert p.reason

    @pytest.mark.parametrize(
        "spec",
        [KernelSpec.stable(0.3), KernelSpec.sum_stable(0.25, 0.75),
         KernelSpec.distributed_order()],
        ids=lambda s: s.family,
    )
    def test_probe_tends_to_one(self, spec):
        ratios = profile_probe(spec)
        assert abs(ratios[-1] - 1.0) < 1e-6
        assert np.all(np.abs(ratios - 1.0) < np.abs(ratios[0] - 1.0) + 1e-9)


class TestPredictedDecay:
    def test_stable_value(self):
        p = asymptotic_profile(KernelSpec.stable(0.5))
        assert predicted_decay(p, 1.0, 1e6) == pytest.approx(1e-3 / math.gamma(0.5), rel=1e-12)

    def test_boundary_exponent_one(self):
        p = asymptotic_profile(KernelSpec.stable(1e-9)) if False else None
        # gamma_exp = 1, Q = 1 gives 1/z at any t (no decay at the boundary)
        from fracdyn.subordination import AsymptoticProfile

        prof = AsymptoticProfile("synthetic", 1.0, lambda t: np.ones_like(np.asarray(t)), True)
        for t in (1.0, 100.0):
            assert predicted_decay(prof, 2.0, t) == pytest.approx(0.5, rel=1e-12)

    def test_sumstable_large_time(self):
        p = asymptotic_profile(KernelSpec.sum_stable(0.25, 0.75))
        t = 1e8
        expected = t**-0.25 * (1.0 + t**-0.5) / math.gamma(0.75)
        assert predicted_decay(p, 1.0, t) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_decay_ratio_converges(self, alpha):
        sol = _linear_solution(KernelSpec.stable(alpha), method="contour")
        assert abs(decay_ratio(sol, 1.0, 1e6) - 1.0) < 0.02
