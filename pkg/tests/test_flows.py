import math

import numpy as np
import pytest

from fracdyn.errors import ParameterError
from fracdyn.flows import (
    constant_observable,
    expabs_observable,
    exppow_observable,
    flow_from_field,
    flow_start,
    linear_flow,
    liouville_residual,
    liouville_u,
    orbit_points,
    parse_flow_config,
    parse_obs_config,
    power_flow,
)


class TestFlows:
    def test_linear_values(self):
        fl = linear_flow(1.0, 0.0)
        assert fl(3.0, 0.0) == 3.0
        assert fl(0.0, 1.7) == 1.7

    def test_linear_semigroup(self):
        fl = linear_flow(2.5)
        assert fl(1.0, fl(2.0, 0.3)) == pytest.approx(fl(3.0, 0.3), rel=1e-14)

    def test_power_flow_display(self):
        pf = power_flow(2.0, 1.0)
        assert pf(3.0, flow_start(pf)) == pytest.approx(2.0, rel=1e-14)

    def test_power_reduces_to_linear(self):
        p1 = power_flow(1.0, 1.0)
        assert p1(2.5, 1.0) == pytest.approx(3.5, rel=1e-14)

    def test_power_domain(self):
        with pytest.raises(ParameterError):
            power_flow(2.0, 1.0)(1.0, -0.5)
        with pytest.raises(ParameterError):
            power_flow(0.5, 1.0)

    @pytest.mark.parametrize("flow", [power_flow(2.0, 1.0), power_flow(3.0, 2.0)],
                             ids=["beta2", "beta3"])
    def test_semigroup_random_triples(self, flow):
        rng = np.random.default_rng(0)
        for _ in range(10):
            s, t = rng.uniform(0.1, 2.0, 2)
            x = rng.uniform(0.5, 2.0)
            assert flow(t, flow(s, x)) == pytest.approx(flow(t + s, x), rel=1e-8)

    def test_numeric_flow_matches_closed(self):
        nf = flow_from_field(lambda x: x**-1.0 / 2.0, dim=1)
        assert nf(3.0, 1.0) == pytest.approx(2.0, rel=1e-8)
        ts = np.array([0.5, 2.0, 1.0])
        out = flow_from_field(lambda x: 1.0, dim=1)(ts, 0.0)
        assert out == pytest.approx(ts, rel=1e-10)

    def test_orbit_points_shape(self):
        pts = orbit_points(linear_flow([1.0, -1.0]), [0.0, 1.0, 2.0], np.zeros(2))
        assert pts.shape == (3, 2)
        assert pts[2] == pytest.approx([2.0, -2.0])


class TestObservables:
    def test_liouville_values(self):
        fl = linear_flow(1.0)
        obs = expabs_observable(1.0)
        assert liouville_u(fl, obs, 1.0, 0.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert liouville_u(fl, obs, 0.0, 0.3) == pytest.approx(math.exp(-0.3), rel=1e-14)

    def test_power_composition(self):
        # substitute the power orbit into exp(-a x^beta): u(t) = e^-(t + C)
        pf = power_flow(2.0, 1.0)
        obs = exppow_observable(1.0, 2.0)
        x0 = flow_start(pf)
        for t in (0.0, 1.0, 3.0):
            assert liouville_u(pf, obs, t, x0) == pytest.approx(math.exp(-(t + 1.0)), rel=1e-13)

    def test_gradient_matches_finite_differences(self):
        for obs, x in [(expabs_observable(0.8), 0.7), (exppow_observable(1.2, 2.0), 1.3)]:
            g = obs.grad(np.array([x]))[0]
            h = 1e-6
            fd = (obs.f(np.array([x + h])) - obs.f(np.array([x - h]))) / (2.0 * h)
            assert g == pytest.approx(fd, rel=1e-6)

    def test_batch_convention(self):
        obs = expabs_observable(1.0)
        pts = np.array([[1.0], [2.0]])
        assert obs.f(pts) == pytest.approx([math.exp(-1.0), math.exp(-2.0)])
        pts2 = np.array([[3.0, 4.0]])
        assert obs.f(pts2) == pytest.approx([math.exp(-5.0)])


class TestResiduals:
    def test_linear_flow_residual(self):
        r = liouville_residual(linear_flow(1.0), expabs_observable(1.0), 0.7, 0.0, h=1e-4)
        assert r < 1e-6

    def test_constant_observable_residual(self):
        r = liouville_residual(linear_flow(1.0), constant_observable(2.0), 0.7, 0.0)
        assert r < 1e-12

    def test_power_flow_residual(self):
        r = liouville_residual(power_flow(2.0, 1.0), exppow_observable(1.0, 2.0), 1.0, 1.0, h=1e-4)
        assert r < 1e-6

    def test_h_squared_decay(self):
        flow = power_flow(3.0, 2.0)
        obs = exppow_observable(0.7, 3.0)
        r1 = liouville_residual(flow, obs, 1.0, 1.1, h=1e-3)
        r2 = liouville_residual(flow, obs, 1.0, 1.1, h=5e-4)
        assert 3.5 <= r1 / r2 <= 4.5


class TestConfigs:
    def test_flow_configs(self):
        assert parse_flow_config("flow=linear v=1.0 x0=0.0").name == "linear"
        pf = parse_flow_config("flow=power beta=2 C=1")
        assert pf.params == {"beta": 2.0, "C": 1.0}

    def test_obs_configs(self):
        assert parse_obs_config("obs=expabs a=1.0").params == {"a": 1.0}
        assert parse_obs_config("obs=exppow a=1.0 beta=2").params == {"a": 1.0, "beta": 2.0}

    def test_rejects_unknown(self):
        with pytest.raises(ParameterError):
            parse_flow_config("flow=linear v=1 bogus=2")
        with pytest.raises(ParameterError):
            parse_obs_config("obs=mystery q=1")
