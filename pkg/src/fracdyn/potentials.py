"""Potentials of the flow, orbit Green measures, and the renormalized
subordinated potential.

U(f, x) = int_0^inf u(t, x) dt is the plain potential; for a monotone
one-dimensional orbit it has the Green-measure representation
U = int f(y) / |b(y)| dy along the orbit.  The naive subordinated potential
int_0^inf v dt generally diverges for power-law clocks; dividing the
running integral by N(T) = int_0^T k recovers U in the limit, which
renormalized_Vr evaluates at a finite horizon.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.stats import linregress

from .density import GEvaluator
from .errors import DivergenceError, ParameterError
from .flows import Flow, Observable, liouville_u
from .kernels import IDENTITY, KernelSpec, make_triple
from .subordination import SubordinatedSolution, subordinate

_GAUSS32 = leggauss(32)


def potential_U(flow: Flow, obs: Observable, x, tol=1e-8, max_doublings=40) -> float:
    """int_0^inf u(t, x) dt with divergence detection.

    Partial integrals over doubling horizons must become Cauchy; if the
    increments stop shrinking the integral is declared divergent.
    """
    partials = []
    increments = []
    total = 0.0
    lo = 0.0
    hi = 1.0
    for _ in range(max_doublings):
        inc, _ = quad(lambda s: float(liouville_u(flow, obs, s, x)), lo, hi, limit=200)
        total += inc
        partials.append(total)
        increments.append(abs(inc))
        if len(increments) >= 4:
            recent = increments[-3:]
            if all(r <= 1e-4 * max(abs(total), 1e-300) for r in recent):
                return total
            if increments[-1] > 0.5 * increments[-4] and increments[-1] > tol * abs(total):
                # increments not contracting across three doublings
                if len(increments) >= 8:
                    raise DivergenceError(
                        f"potential integral diverges: partial {total:.6g} still "
                        f"growing by {increments[-1]:.3g} per doubling at T={hi:.3g}"
                    )
        lo, hi = hi, 2.0 * hi
    raise DivergenceError(
        f"potential integral did not settle after {max_doublings} doublings (T={lo:.3g})"
    )


@dataclass(frozen=True)
class GreenMeasure:
    """Orbit representation of the potential: density 1/|b| along the ray.

    representable is a tri-state: "representable" for monotone positive
    speed along a 1-d (or straight, hence arclength-reducible) orbit,
    "not_representable" when the speed vanishes (stationary orbit),
    "unknown" otherwise.  point_at maps the integration variable to state
    points when the orbit is parametrized by arclength.
    """

    representable: str
    density: Optional[Callable]
    start: float
    direction: float
    reason: str = ""
    point_at: Optional[Callable] = None


def green_measure(flow: Flow, x) -> GreenMeasure:
    """Orbit measure with density 1/|b(y)| along the orbit from x."""
    if flow.dim != 1:
        v = np.atleast_1d(np.asarray(flow.field(x), dtype=float))
        speed = float(np.linalg.norm(v))
        if speed == 0.0:
            return GreenMeasure("not_representable", None, float("nan"), 0.0,
                                reason="stationary orbit: the speed vanishes at the start")
        if flow.name == "linear":
            unit = v / speed
            x0 = np.atleast_1d(np.asarray(x, dtype=float))
            return GreenMeasure(
                "representable", lambda s: 1.0 / speed, 0.0, 1.0,
                point_at=lambda s: x0 + s * unit,
            )
        return GreenMeasure("unknown", None, float("nan"), 0.0,
                            reason="curved multi-dimensional orbit: reduction not implemented")
    x0 = float(np.asarray(x).reshape(()))
    b0 = float(flow.field(x0))
    if b0 == 0.0:
        return GreenMeasure("not_representable", None, x0, 0.0,
                            reason="stationary orbit: b(x) = 0")
    direction = 1.0 if b0 > 0.0 else -1.0

    def density(y):
        by = float(flow.field(y))
        if by == 0.0 or (by > 0) != (b0 > 0):
            raise ParameterError(f"orbit speed changes sign at y={y}")
        return 1.0 / abs(by)

    return GreenMeasure("representable", density, x0, direction)


def green_integral(gm: GreenMeasure, f, tol=1e-9) -> float:
    """int f dmu^x along the orbit ray; equals the potential by the
    time-to-arclength change of variables."""
    if gm.representable != "representable":
        raise ParameterError(f"Green measure not representable: {gm.reason}")
    if gm.point_at is not None:
        def integrand(s):
            return float(f(gm.point_at(s))) * gm.density(s)
        val, err = quad(integrand, 0.0, np.inf, limit=400, epsabs=1e-14, epsrel=tol)
        return val
    if gm.direction > 0:
        val, err = quad(lambda y: float(f(y)) * gm.density(y), gm.start, np.inf,
                        limit=400, epsabs=1e-14, epsrel=tol)
    else:
        val, err = quad(lambda y: float(f(y)) * gm.density(y), -np.inf, gm.start,
                        limit=400, epsabs=1e-14, epsrel=tol)
    return val


@dataclass(frozen=True)
class RenormalizedPotential:
    value_at_T: float
    N_T: float
    T: float


def renormalized_Vr(flow: Flow, obs: Observable, x, spec: KernelSpec, T: float,
                    tol=1e-7) -> RenormalizedPotential:
    """(1/N(T)) int_0^T v(s, x) ds with N(T) = int_0^T k.

    Converges to U(f, x) as T grows when U exists.  The identity clock has
    no kernel, hence no renormalization: it is rejected.  The existence of
    U is pre-checked, matching the contract that Vr renormalizes a
    convergent underlying potential.
    """
    if spec.family == IDENTITY:
        raise ParameterError(
            "identity clock: renormalization is undefined (no jump kernel); "
            "the plain potential already applies"
        )
    potential_U(flow, obs, x, tol=1e-6)  # raises DivergenceError when U does not exist
    g = GEvaluator(spec)
    sol = SubordinatedSolution(g, flow, obs, x, tol=tol)
    total = _integrate_v(sol, T)
    triple = make_triple(spec)
    n_T = float(triple.kernel_cumulative(T))
    return RenormalizedPotential(total / n_T, n_T, T)


def _integrate_v(sol, T, panel_nodes=_GAUSS32):
    """int_0^T v ds by per-decade Gauss panels (v decays like a power)."""
    x, w = panel_nodes
    edges = [0.0, min(1.0, T)]
    while edges[-1] < T:
        edges.append(min(10.0 * edges[-1], T))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (hi - lo)
        ss = lo + mid * (x + 1.0)
        vals = [subordinate(sol, float(s)) for s in ss]
        total += mid * float(np.dot(w, vals))
    return total


@dataclass(frozen=True)
class DivergenceReport:
    T_grid: np.ndarray
    partials: np.ndarray
    fitted_exponent: float
    diverges: bool


def naive_V_divergence_check(spec: KernelSpec, flow: Flow, obs: Observable, x,
                             T_grid=None) -> DivergenceReport:
    """Partial integrals of the naive subordinated potential over a growing
    horizon, with a log-log growth-exponent fit and a Cauchy verdict.

    Power-law clocks push the partials up like T^g (times slowly varying
    corrections); clocks with an integrable kernel leave the integral
    convergent, and the identity clock reduces to the plain potential.
    """
    if T_grid is None:
        T_grid = np.geomspace(1e2, 1e6, 9)
    T_grid = np.asarray(sorted(T_grid), dtype=float)
    if spec.family == IDENTITY:
        sol = None
    else:
        sol = SubordinatedSolution(GEvaluator(spec), flow, obs, x)
    partials = []
    prev_T = 0.0
    total = 0.0
    for T in T_grid:
        if sol is None:
            inc, _ = quad(lambda s: float(liouville_u(flow, obs, s, x)), prev_T, T, limit=300)
        else:
            inc = _integrate_v_segment(sol, prev_T, T)
        total += inc
        partials.append(total)
        prev_T = T
    partials = np.asarray(partials)
    fit = linregress(np.log(T_grid), np.log(np.maximum(partials, 1e-300)))
    increments = np.diff(partials) / np.maximum(partials[1:], 1e-300)
    diverges = bool(fit.slope > 0.1 and increments[-1] > 1e-4)
    return DivergenceReport(T_grid, partials, float(fit.slope), diverges)


def _integrate_v_segment(sol, lo, hi):
    x, w = _GAUSS32
    edges = [lo, min(max(1.0, lo * 10.0), hi)] if lo > 0 else [0.0, min(1.0, hi)]
    while edges[-1] < hi:
        edges.append(min(10.0 * edges[-1], hi))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (b - a)
        ss = a + mid * (x + 1.0)
        vals = [subordinate(sol, float(s)) for s in ss]
        total += mid * float(np.dot(w, vals))
    return total
