"""Subordination of deterministic dynamics by an inverse clock.

The subordinated observable is v(t, x) = int_0^inf u(tau, x) G_t(tau) dtau
with u(tau, x) = f(X(tau, x)).  This module evaluates that integral, the
convolution (generalized fractional) derivative D^(k) built from the clock
kernel, the residual of the subordinated evolution equation
D^(k) v = L v, and the long-time decay law predicted by the small-frequency
behaviour of the kernel transform K(lam) ~ lam^(-g) Q(1/lam) with Q slowly
varying.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .density import GEvaluator, clock_moment2, density_rule, mean_clock
from .errors import InversionError, ParameterError
from .flows import Flow, Observable, liouville_u, orbit_points
from .kernels import (
    DISTRIBUTED,
    GAMMA,
    IDENTITY,
    STABLE,
    SUMSTABLE,
    TEMPERED,
    TRUNCSTABLE,
    KernelSpec,
    make_triple,
)


@dataclass
class SubordinatedSolution:
    """v(t, x) for one (clock, flow, observable, start) configuration."""

    g: GEvaluator
    flow: Flow
    obs: Observable
    x: object
    tol: float = 1e-8

    def u(self, taus):
        return liouville_u(self.flow, self.obs, taus, self.x)


def subordinate(sol: SubordinatedSolution, t: float) -> float:
    """v(t, x) by quadrature of u against the inverted density.

    v(0, x) = f(x) exactly; the identity clock returns u(t, x).  For a
    bounded f the result is clamped-checked by the density-mass guard inside
    density_rule.
    """
    if t < 0.0:
        raise ParameterError("t must be >= 0")
    if t == 0.0:
        return float(sol.obs.f(np.asarray(sol.x, dtype=float)))
    if sol.g.spec.family == IDENTITY:
        return float(sol.obs.f(sol.flow.flow_map(t, sol.x)))
    rule = density_rule(sol.g, t)
    u_vals = np.asarray(sol.u(rule.taus), dtype=float)
    if not np.all(np.isfinite(u_vals)):
        raise ParameterError("observable values are not finite over the clock support")
    return rule.integrate(u_vals)


def subordinate_grid(sol: SubordinatedSolution, ts) -> np.ndarray:
    return np.array([subordinate(sol, float(t)) for t in np.atleast_1d(ts)])


def _graded_mesh(t, n, power=2.0):
    """Mesh on [0, t] refined toward both ends (kernel singular at the right
    end of the convolution, the subordinated solution steep at the left).

    Nodes closer to zero than 1e-4 t are dropped: the first-cell
    product-integration error they would fix is already far below roundoff,
    and extremely short times can sit outside the density inversion regime.
    """
    u = np.linspace(0.0, 1.0, n + 1)
    left = 0.5 * (2.0 * u[u <= 0.5]) ** power
    right = 1.0 - 0.5 * (2.0 * (1.0 - u[u > 0.5])) ** power
    mesh = t * np.concatenate((left, right))
    keep = (mesh == 0.0) | (mesh >= 1e-4 * t)
    return mesh[keep]


def gfd_apply(triple, w: Callable, t: float, h: Optional[float] = None,
              n: Optional[int] = None, grading: float = 2.0) -> float:
    """Convolution derivative with kernel k at time t.

    d/dt int_0^t k(t - s) w(s) ds - k(t) w(0), evaluated in the equivalent
    form int_0^t k(s) w'(t - s) ds, which is exact for the piecewise-linear
    interpolant of w because the kernel integrates in closed form between
    nodes (product integration).  h sets the coarsest mesh width, or pass n
    node intervals directly; the mesh is graded toward both endpoints.
    """
    if t <= 0.0:
        raise ParameterError("t must be > 0")
    if n is None:
        n = max(64, int(math.ceil(t / h))) if h is not None else 1024
    mesh = _graded_mesh(t, n, grading)
    w_vals = np.asarray([float(w(s)) for s in mesh], dtype=float)
    slopes = np.diff(w_vals) / np.diff(mesh)
    # segment [mesh_j, mesh_{j+1}] of w corresponds to s in
    # [t - mesh_{j+1}, t - mesh_j] under s = t - tau
    cum = np.asarray(triple.kernel_cumulative(np.maximum(t - mesh, 0.0)), dtype=float)
    seg = cum[:-1] - cum[1:]
    return float(np.dot(slopes, seg))


def evolution_residual(sol: SubordinatedSolution, t: float, n_grid: int = 1200) -> float:
    """Relative residual |D^(k) v - L v| of the subordinated evolution law.

    Both sides share the same quadrature rule in tau at time t: v and L v
    are integrated against the same inverted-density nodes, and the
    convolution derivative consumes v values built from the same machinery,
    so discretization bias largely cancels.
    """
    if sol.g.spec.family == IDENTITY:
        raise ParameterError("identity clock: the evolution law is the plain transport equation")
    rule = density_rule(sol.g, t)
    pts = orbit_points(sol.flow, rule.taus, sol.x)
    f_vals = np.asarray(sol.obs.f(pts), dtype=float)
    lu_vals = np.empty_like(f_vals)
    for i in range(pts.shape[0]):
        y = pts[i] if sol.flow.dim > 1 else float(pts[i, 0])
        by = np.atleast_1d(np.asarray(sol.flow.field(y), dtype=float))
        gy = np.atleast_1d(np.asarray(sol.obs.grad(y), dtype=float))
        lu_vals[i] = float(by @ gy)
    v_t = rule.integrate(f_vals)
    lv_t = rule.integrate(lu_vals)

    x0 = np.asarray(sol.x, dtype=float)
    f0 = float(sol.obs.f(x0))
    # orbit derivatives of u at 0+ by one-sided differences; robust at kinks
    # of f (|x| at the origin) where the classical gradient is undefined
    du = 1e-5 * t
    u1, u2 = float(sol.u(du)), float(sol.u(2.0 * du))
    lu0 = (u1 - f0) / du
    llu0 = (u2 - 2.0 * u1 + f0) / (du * du)

    def w(s):
        try:
            return subordinate(sol, s)
        except InversionError:
            # Short times can fall outside the pointwise inversion regime
            # for slowly varying clocks.  Very short times use the expansion
            # v(s) = f + (Lf) E E(s) + (LLf) E E(s)^2 / 2 + O(E E(s)^3);
            # a bumpy marginal zone is bridged by a renormalized loose rule
            # (mass defects up to 3e-3 divided out).
            if s <= 5e-2 * t:
                return f0 + lu0 * mean_clock(sol.g, s) + 0.5 * llu0 * clock_moment2(sol.g, s)
            loose = density_rule(sol.g, s, mass_tol=3e-3)
            u_vals = np.asarray(sol.u(loose.taus), dtype=float)
            return loose.integrate(u_vals) / (1.0 + loose.mass_defect)

    dv = gfd_apply(sol.g.triple, w, t, n=n_grid)
    scale = max(abs(v_t), abs(lv_t), 1e-30)
    return abs(dv - lv_t) / scale


@dataclass(frozen=True)
class AsymptoticProfile:
    """Small-frequency classification K(lam) ~ lam^(-g) Q(1/lam).

    valid requires both g in (0, 1] and Q slowly varying; only then does
    the long-time law A(t, z) ~ t^(g-1) Q(t) / (z Gamma(g)) apply.
    """

    family: str
    gamma_exp: float
    slowly_varying: Callable
    valid: bool
    reason: str = ""


def asymptotic_profile(spec: KernelSpec) -> AsymptoticProfile:
    """Symbolic (exponent, slowly varying factor) per clock family.

    The bounded-kernel clocks (gamma process, exponentially weighted and
    truncated kernels) have K(0+) finite: the exponent degenerates to 0,
    the subordinated decay is exponential rather than a power, and the
    profile is marked invalid.
    """
    f = spec.family
    if f == STABLE:
        return AsymptoticProfile(f, 1.0 - spec.alpha, lambda t: np.ones_like(np.asarray(t, dtype=float)), True)
    if f == SUMSTABLE:
        al, be = spec.alpha, spec.beta
        return AsymptoticProfile(f, 1.0 - al, lambda t: 1.0 + np.asarray(t, dtype=float) ** (al - be), True)
    if f == DISTRIBUTED:
        def q(t):
            t = np.asarray(t, dtype=float)
            return (1.0 - 1.0 / t) / np.log(t)
        return AsymptoticProfile(f, 1.0, q, True)
    if f == GAMMA:
        a, b = spec.a, spec.b
        def q(t):
            t = np.asarray(t, dtype=float)
            return a * t * np.log1p(1.0 / (b * t))
        return AsymptoticProfile(
            f, 0.0, q, False,
            reason=(
                "kernel transform stays finite at zero frequency (K(0+) = a/b): the "
                "exponent degenerates to 0 and the subordinated decay is exponential, "
                "outside the power-law regime"
            ),
        )
    if f == TEMPERED:
        g0 = spec.gamma_temper ** (spec.alpha - 1.0)
        return AsymptoticProfile(
            f, 0.0, lambda t: np.full_like(np.asarray(t, dtype=float), g0), False,
            reason="kernel transform finite at zero frequency; exponent 0 is the Gamma-pole boundary",
        )
    if f == TRUNCSTABLE:
        tri = make_triple(spec)
        g0 = float(tri.kernel_cumulative(spec.delta))
        return AsymptoticProfile(
            f, 0.0, lambda t: np.full_like(np.asarray(t, dtype=float), g0), False,
            reason="truncated jumps make the kernel integrable; exponent 0, no power-law decay",
        )
    if f == IDENTITY:
        return AsymptoticProfile(f, 0.0, lambda t: np.ones_like(np.asarray(t, dtype=float)), False,
                                 reason="deterministic clock: no decay law")
    raise ParameterError(f"no asymptotic classification for family {f}")


def profile_probe(spec: KernelSpec, lam_values=None) -> np.ndarray:
    """Ratios K(lam) lam^g / Q(1/lam) at small lam; tends to 1 when the
    stored profile matches the transform."""
    prof = asymptotic_profile(spec)
    tri = make_triple(spec)
    lam_values = np.asarray(lam_values if lam_values is not None else [10.0**-k for k in range(4, 11)])
    out = []
    for lam in lam_values:
        Kv = float(np.real(tri.transform(lam)))
        out.append(Kv * lam**prof.gamma_exp / float(prof.slowly_varying(1.0 / lam)))
    return np.asarray(out)


def predicted_decay(profile: AsymptoticProfile, z: float, t: float) -> float:
    """Long-time prediction (1/z) t^(g-1) Q(t) / Gamma(g).

    Refuses invalid profiles and the exponent-0 boundary, where the Gamma
    factor blows up and the law gives no information.
    """
    if not profile.valid:
        raise ParameterError(
            f"no power-law decay prediction for {profile.family}: {profile.reason}"
        )
    g = profile.gamma_exp
    if not 0.0 < g <= 1.0:
        raise ParameterError(f"decay exponent {g} outside (0, 1]")
    if z <= 0.0 or t <= 0.0:
        raise ParameterError("z and t must be > 0")
    return t ** (g - 1.0) * float(profile.slowly_varying(t)) / (z * math.gamma(g))


def decay_ratio(sol: SubordinatedSolution, z: float, t: float) -> float:
    """subordinate(t) / predicted_decay(t) for exponential observables along
    the orbit; approaches 1 under a valid profile."""
    prof = asymptotic_profile(sol.g.spec)
    return subordinate(sol, t) / predicted_decay(prof, z, t)
