"""Deterministic flows, observables, and the transport equation residual.

A Flow carries the vector field b and the flow map X(t, x); the transport
generator acts as (L g)(x) = b(x) . grad g(x).  Closed-form maps are
provided for the linear flow and the one-dimensional power flow; arbitrary
fields integrate numerically with a tight-tolerance adaptive Runge-Kutta.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ParameterError


@dataclass(frozen=True)
class Flow:
    """Dynamical system X(t, x) with X(0, x) = x and field b.

    flow_map broadcasts over a vector of times for fixed x: for dim == 1 it
    returns an array shaped like t; for dim > 1 an array (..., dim).
    """

    dim: int
    field: Callable
    flow_map: Callable
    name: str = "flow"
    params: dict = None

    def __call__(self, t, x):
        return self.flow_map(t, x)


@dataclass(frozen=True)
class Observable:
    """Scalar observable f with a gradient (closed form or central differences)."""

    f: Callable
    gradient: Optional[Callable] = None
    name: str = "obs"
    params: dict = None

    def grad(self, x):
        if self.gradient is not None:
            return self.gradient(x)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        h = 1e-6
        out = np.empty_like(x)
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = h
            out[i] = (self.f(x + e) - self.f(x - e)) / (2.0 * h)
        return out


def linear_flow(v, x0=0.0) -> Flow:
    """Constant-velocity flow X(t, x) = x + v t."""
    v_arr = np.atleast_1d(np.asarray(v, dtype=float))
    dim = v_arr.size

    def b(x):
        return v_arr if dim > 1 else float(v_arr[0])

    if dim == 1:
        v0 = float(v_arr[0])

        def X(t, x):
            t = np.asarray(t, dtype=float)
            return np.asarray(x, dtype=float) + v0 * t
    else:
        def X(t, x):
            t = np.asarray(t, dtype=float)
            return np.asarray(x, dtype=float) + np.multiply.outer(t, v_arr)

    return Flow(dim, b, X, name="linear", params={"v": v, "x0": x0})


def power_flow(beta, C=1.0) -> Flow:
    """One-dimensional flow with field b(x) = x^(1-beta)/beta on x > 0.

    Started from x, X(t, x) = (t + x^beta)^(1/beta); from the canonical
    start x0 = C^(1/beta) this is (t + C)^(1/beta).  beta = 1 reduces to the
    unit-speed linear flow.
    """
    if beta < 1.0:
        raise ParameterError("power flow requires beta >= 1")
    if C <= 0.0:
        raise ParameterError("power flow requires C > 0")

    def b(x):
        x = float(np.asarray(x).reshape(()))
        if x <= 0.0:
            raise ParameterError("power flow field is singular at x <= 0")
        return x ** (1.0 - beta) / beta

    def X(t, x):
        x = float(np.asarray(x).reshape(()))
        if x <= 0.0:
            raise ParameterError("power flow is defined for x > 0")
        t = np.asarray(t, dtype=float)
        return (t + x**beta) ** (1.0 / beta)

    return Flow(1, b, X, name="power", params={"beta": beta, "C": C})


def flow_from_field(b, dim=1, rtol=1e-10, atol=1e-12) -> Flow:
    """Numeric flow map for an arbitrary field, integrated by RK45."""

    def X(t, x):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        x0 = np.atleast_1d(np.asarray(x, dtype=float))
        order = np.argsort(ts)
        t_sorted = ts[order]
        out = np.empty((ts.size, dim))
        sol = solve_ivp(
            lambda s, y: np.atleast_1d(b(y)), (0.0, max(t_sorted[-1], 1e-30)),
            x0, t_eval=np.maximum(t_sorted, 0.0), rtol=rtol, atol=atol,
            method="RK45", dense_output=False,
        )
        out[order] = sol.y.T
        res = out if dim > 1 else out[:, 0]
        return res if np.ndim(t) else res[0]

    return Flow(dim, b, X, name="numeric", params={})


def _radius(x):
    # convention: ndim <= 1 is a single point, a 2-D array is a batch of
    # points with the state dimension on the last axis
    x = np.asarray(x, dtype=float)
    if x.ndim <= 1:
        return float(np.linalg.norm(np.atleast_1d(x)))
    return np.linalg.norm(x, axis=-1)


def expabs_observable(a=1.0) -> Observable:
    """f(x) = exp(-a |x|) with |.| the Euclidean norm."""
    if a <= 0.0:
        raise ParameterError("decay rate a must be > 0")

    def f(x):
        return np.exp(-a * _radius(x))

    def grad(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        r = np.linalg.norm(x)
        if r == 0.0:
            raise ParameterError("gradient of exp(-a|x|) is undefined at x = 0")
        return -a * x / r * math.exp(-a * r)

    return Observable(f, grad, name="expabs", params={"a": a})


def exppow_observable(a=1.0, beta=2.0) -> Observable:
    """f(x) = exp(-a |x|^beta), the natural pairing for the power flow."""
    if a <= 0.0 or beta <= 0.0:
        raise ParameterError("a and beta must be > 0")

    def f(x):
        return np.exp(-a * _radius(x) ** beta)

    def grad(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        r = np.linalg.norm(x)
        if r == 0.0 and beta < 1.0:
            raise ParameterError("gradient undefined at x = 0")
        return -a * beta * r ** (beta - 2.0) * x * math.exp(-a * r**beta) if r > 0 else np.zeros_like(x)

    return Observable(f, grad, name="exppow", params={"a": a, "beta": beta})


def constant_observable(c=1.0) -> Observable:
    def f(x):
        x = np.asarray(x, dtype=float)
        if x.ndim <= 1:
            return float(c)
        return np.full(x.shape[:-1], float(c))

    return Observable(f, lambda x: np.zeros_like(np.atleast_1d(np.asarray(x, dtype=float))),
                      name="const", params={"c": c})


def coordinate_observable(index=0) -> Observable:
    def f(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return float(x)
        if x.ndim == 1:
            return float(x[index])
        return x[..., index]

    def grad(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        g = np.zeros_like(x)
        g[index] = 1.0
        return g

    return Observable(f, grad, name="coord", params={"index": index})


def orbit_points(flow: Flow, ts, x) -> np.ndarray:
    """Batch of orbit points X(t_i, x) shaped (len(ts), dim)."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    pts = np.asarray(flow.flow_map(ts, x), dtype=float)
    if flow.dim == 1:
        return pts.reshape(-1, 1)
    return pts.reshape(-1, flow.dim)


def liouville_u(flow: Flow, obs: Observable, t, x):
    """Transport solution u(t, x) = f(X(t, x))."""
    if np.ndim(t) == 0:
        return obs.f(flow.flow_map(t, x))
    return obs.f(orbit_points(flow, t, x))


def liouville_residual(flow: Flow, obs: Observable, t, x, h=1e-4) -> float:
    """|d/dt u - b(X) . grad f(X)| with a central difference in t; O(h^2)."""
    up = liouville_u(flow, obs, t + h, x)
    um = liouville_u(flow, obs, t - h, x)
    dudt = (float(up) - float(um)) / (2.0 * h)
    y = flow.flow_map(t, x)
    by = np.atleast_1d(np.asarray(flow.field(y), dtype=float))
    gy = np.atleast_1d(np.asarray(obs.grad(y), dtype=float))
    return abs(dudt - float(by @ gy))


def parse_flow_config(text: str) -> Flow:
    """Parse 'flow=linear v=1.0 x0=0.0' or 'flow=power beta=2 C=1'."""
    fields = _parse_kv(text)
    kind = fields.pop("flow", None)
    if kind == "linear":
        v = _vector(fields.pop("v", "1"))
        x0 = _vector(fields.pop("x0", "0"))
        _reject_extra(fields, "linear flow")
        return linear_flow(v if len(v) > 1 else v[0], x0 if len(x0) > 1 else x0[0])
    if kind == "power":
        beta = float(fields.pop("beta", "1"))
        C = float(fields.pop("C", fields.pop("c", "1")))
        _reject_extra(fields, "power flow")
        return power_flow(beta, C)
    raise ParameterError(f"unknown flow kind {kind!r}")


def parse_obs_config(text: str) -> Observable:
    """Parse 'obs=expabs a=1.0', 'obs=exppow a=1.0 beta=2', 'obs=const', 'obs=coord'."""
    fields = _parse_kv(text)
    kind = fields.pop("obs", None)
    if kind == "expabs":
        a = float(fields.pop("a", "1"))
        _reject_extra(fields, "expabs")
        return expabs_observable(a)
    if kind == "exppow":
        a = float(fields.pop("a", "1"))
        beta = float(fields.pop("beta", "2"))
        _reject_extra(fields, "exppow")
        return exppow_observable(a, beta)
    if kind == "const":
        c = float(fields.pop("c", "1"))
        _reject_extra(fields, "const")
        return constant_observable(c)
    if kind == "coord":
        idx = int(fields.pop("index", "0"))
        _reject_extra(fields, "coord")
        return coordinate_observable(idx)
    raise ParameterError(f"unknown observable kind {kind!r}")


def flow_start(flow: Flow):
    """Canonical starting point from the flow's config parameters."""
    if flow.name == "linear":
        x0 = flow.params.get("x0", 0.0)
        return np.asarray(x0, dtype=float)
    if flow.name == "power":
        return np.asarray(flow.params["C"] ** (1.0 / flow.params["beta"]), dtype=float)
    raise ParameterError(f"flow {flow.name!r} has no canonical start")


def _parse_kv(text):
    fields = {}
    for tok in text.replace(",", " ").split():
        if "=" not in tok:
            raise ParameterError(f"malformed token {tok!r}; expected key=value")
        key, val = tok.split("=", 1)
        fields[key.strip()] = val.strip()
    return fields


def _vector(text):
    return [float(part) for part in text.split(";")]


def _reject_extra(fields, what):
    if fields:
        raise ParameterError(f"unknown keys for {what}: {sorted(fields)}")
