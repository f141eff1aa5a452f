import math

import numpy as np
import pytest
import scipy.stats as st

from fracdyn.density import GEvaluator, moment
from fracdyn.errors import ParameterError
from fracdyn.flows import expabs_observable, linear_flow
from fracdyn.kernels import KernelSpec
from fracdyn.mc import (
    PathSample,
    default_jump_cutoff,
    empirical_density,
    empirical_expectation,
    first_passage_inverse,
    laplace_match,
    passage_times,
    rng_for,
    sample_path_general,
    sample_stable_increment,
    truncation_bias,
)

SAMPLABLE = [
    KernelSpec.stable(0.5),
    KernelSpec.gamma_process(1.0, 1.0),
    KernelSpec.sum_stable(0.25, 0.75),
    KernelSpec.truncated_stable(0.5, 1.0),
    KernelSpec.tempered(0.5, 2.0),
    KernelSpec.distributed_order(),
]


class TestStableIncrement:
    def test_laplace_identity(self):
        rng = rng_for(7)
        s = sample_stable_increment(0.5, 1.0, rng, size=150_000)
        for lam in (0.5, 1.0, 2.0):
            vals = np.exp(-lam * s)
            z = (vals.mean() - math.exp(-(lam**0.5))) / (vals.std(ddof=1) / math.sqrt(s.size))
            assert abs(z) < 3.0

    def test_distribution_vs_levy(self):
        # oracle: at alpha 1/2 the law is Levy with scale 1/2
        rng = rng_for(8)
        s = sample_stable_increment(0.5, 1.0, rng, size=100_000)
        assert st.kstest(s, st.levy(scale=0.5).cdf).pvalue > 0.01

    def test_scaling_property(self):
        rng = rng_for(9)
        alpha, c = 0.4, 3.0
        s1 = sample_stable_increment(alpha, c, rng, size=100_000)
        s2 = c ** (1.0 / alpha) * sample_stable_increment(alpha, 1.0, rng, size=100_000)
        assert st.ks_2samp(s1, s2).pvalue > 0.01

    def test_rejects_bad_alpha(self):
        with pytest.raises(ParameterError):
            sample_stable_increment(1.0, 1.0, rng_for(0))


class TestGeneralSampler:
    @pytest.mark.parametrize("spec", SAMPLABLE, ids=lambda s: s.family)
    def test_laplace_match(self, spec):
        rows = laplace_match(spec, [0.5, 1.0, 2.0], 100_000, seed=11)
        assert max(abs(r[3]) for r in rows) < 3.0

    def test_gamma_example_value(self):
        # E exp(-S(1)) = exp(-phi(1)) = 1/2 for the unit gamma clock
        rows = laplace_match(KernelSpec.gamma_process(1.0, 1.0), [1.0], 100_000, seed=3)
        _, emp, exact, z = rows[0]
        assert exact == pytest.approx(0.5, rel=1e-12)
        assert abs(z) < 3.0

    def test_truncated_jumps_respect_delta(self):
        path = sample_path_general(KernelSpec.truncated_stable(0.5, 1.0), 5.0, seed=4)
        assert np.all(path.jump_sizes <= 1.0)

    def test_path_invariants(self):
        path = sample_path_general(KernelSpec.gamma_process(1.0, 1.0), 30.0, seed=2)
        assert path.s_values[0] == 0.0
        assert np.all(np.diff(path.s_values) >= 0.0)

    def test_general_vs_exact_stable(self):
        from fracdyn.mc import _sample_jumps, jump_rate, small_jump_mean

        spec = KernelSpec.stable(0.5)
        eps = default_jump_cutoff(spec)
        rate = jump_rate(spec, eps)
        drift = small_jump_mean(spec, eps)
        rng = rng_for(13)
        n = 50_000
        n_j = rng.poisson(rate, size=n)
        sizes = _sample_jumps(spec, eps, int(n_j.sum()), rng)
        bounds = np.concatenate(([0], np.cumsum(n_j)))
        sums = np.add.reduceat(np.concatenate((sizes, [0.0])), bounds[:-1])
        sums[n_j == 0] = 0.0
        s_general = drift + sums
        s_exact = sample_stable_increment(0.5, 1.0, rng, size=n)
        assert st.ks_2samp(s_general, s_exact).pvalue > 0.01

    def test_infeasible_cutoff_rejected(self):
        with pytest.raises(ParameterError) as err:
            sample_path_general(KernelSpec.stable(0.9), 100.0, jump_cutoff=1e-12, seed=1)
        assert "cutoff" in str(err.value)

    def test_truncation_bias_budget(self):
        spec = KernelSpec.stable(0.5)
        eps = default_jump_cutoff(spec, lam=2.0, n_paths=10**6)
        assert truncation_bias(spec, eps, 2.0) < 3.0 * 0.5 / math.sqrt(10**6)


class TestFirstPassage:
    def test_deterministic_path(self):
        path = PathSample(np.empty(0), np.empty(0), 1.0, 10.0)
        assert first_passage_inverse(path, 2.3) == pytest.approx(2.3, rel=1e-14)

    def test_step_path(self):
        path = PathSample(np.array([1.0]), np.array([2.0]), 0.0, 3.0)
        assert first_passage_inverse(path, 1.5) == 1.0

    def test_exhausted_path(self):
        path = PathSample(np.array([1.0]), np.array([0.5]), 0.0, 3.0)
        with pytest.raises(ParameterError) as err:
            first_passage_inverse(path, 2.0)
        assert "horizon" in str(err.value)

    def test_passage_bracket(self):
        path = sample_path_general(KernelSpec.gamma_process(1.0, 1.0), 30.0, seed=2)
        e5 = first_passage_inverse(path, 5.0)
        assert float(path.value(e5 - 1e-9)) <= 5.0 <= float(path.value(e5 + 1e-9))

    def test_mean_matches_moment_law(self):
        clocks = passage_times(KernelSpec.stable(0.5), 1.0, 150_000, seed=21)
        ref = 1.0 / math.gamma(1.5)
        z = (clocks.mean() - ref) / (clocks.std(ddof=1) / math.sqrt(clocks.size))
        assert abs(z) < 3.0

    def test_gamma_mean_matches_quadrature(self):
        clocks = passage_times(KernelSpec.gamma_process(1.0, 1.0), 2.0, 100_000, seed=23)
        ref = moment(GEvaluator(KernelSpec.gamma_process(1.0, 1.0)), 2.0, 1)
        z = (clocks.mean() - ref) / (clocks.std(ddof=1) / math.sqrt(clocks.size))
        assert abs(z) < 3.0


class TestExpectations:
    def test_constant_observable_exact(self):
        r = empirical_expectation(
            KernelSpec.stable(0.5), linear_flow(1.0), lambda p: np.ones(p.shape[0]),
            1.0, 1000, seed=5,
        )
        assert r.mean == 1.0 and r.std_error == 0.0

    def test_identity_clock_zero_variance(self):
        r = empirical_expectation(
            KernelSpec.identity(), linear_flow(1.0), expabs_observable(1.0).f, 1.0, 100, seed=1
        )
        assert r.mean == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert r.std_error == 0.0

    def test_linear_flow_matches_transform(self):
        # oracle: A(1, 1) = E_{1/2}(-1) = e erfc(1)
        r = empirical_expectation(
            KernelSpec.stable(0.5), linear_flow(1.0), expabs_observable(1.0).f,
            1.0, 100_000, seed=31,
        )
        assert abs(r.mean - math.e * math.erfc(1.0)) < 3.0 * r.std_error

    def test_reproducibility(self):
        kw = dict(t=1.0, n_paths=20_000, seed=31)
        r1 = empirical_expectation(KernelSpec.stable(0.5), linear_flow(1.0),
                                   expabs_observable(1.0).f, **kw)
        r2 = empirical_expectation(KernelSpec.stable(0.5), linear_flow(1.0),
                                   expabs_observable(1.0).f, **kw)
        assert r1.mean == r2.mean and r1.std_error == r2.std_error

    def test_bit_identical_streams(self):
        a = passage_times(KernelSpec.stable(0.5), 1.0, 5000, seed=9)
        b = passage_times(KernelSpec.stable(0.5), 1.0, 5000, seed=9)
        assert np.array_equal(a, b)

    def test_minimum_paths(self):
        with pytest.raises(ParameterError):
            empirical_expectation(KernelSpec.stable(0.5), linear_flow(1.0),
                                  expabs_observable(1.0).f, 1.0, 10, seed=1)


class TestEmpiricalDensity:
    def test_mass_book_keeping(self):
        samples = rng_for(3).exponential(1.0, 20_000)
        ed = empirical_density(samples, np.linspace(0.0, 3.0, 31))
        assert ed.masses.sum() + ed.overflow_mass == pytest.approx(1.0, abs=1e-12)
        assert ed.n_samples == 20_000

    def test_against_inverted_density(self):
        # binned clock samples against the inverted density of the stable clock
        clocks = passage_times(KernelSpec.stable(0.5), 1.0, 100_000, seed=17)
        edges = np.linspace(0.0, 3.0, 16)
        ed = empirical_density(clocks, edges)
        g = GEvaluator(KernelSpec.stable(0.5))
        from scipy.integrate import quad

        for i in range(len(edges) - 1):
            mass, _ = quad(lambda u: math.exp(-u * u / 4.0) / math.sqrt(math.pi),
                           edges[i], edges[i + 1])
            se = math.sqrt(mass * (1.0 - mass) / ed.n_samples)
            assert abs(ed.masses[i] - mass) < 4.0 * se + 1e-4
