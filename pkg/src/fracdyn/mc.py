"""Monte Carlo oracle: subordinator paths, first-passage clocks, expectations.

Paths are compound-Poisson approximations: jumps above a cutoff eps arrive
at rate sigma((eps, inf)) with the exact conditional jump law, and the
discarded small jumps are replaced by their compensating drift
int_0^eps x dsigma(x) per unit time.  First passage over a level is then
exact given the path (linear between jumps).  The truncation bias in
E exp(-lam S(t)) is (lam^2/2) int_0^eps x^2 dsigma(x) t to leading order;
default_jump_cutoff picks eps so that bias stays below the Monte Carlo
noise of the requested sample size.

Randomness is counter-based (Philox keyed by (seed, path block)), so runs
are reproducible bit-for-bit regardless of scheduling.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from .errors import ParameterError
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
    small_jump_mean,
    small_jump_second_moment,
)
from .special import zolotarev_a

_MAX_EXPECTED_JUMPS = 1e8


def rng_for(seed, stream=0):
    """Counter-based generator for (seed, stream); independent across streams."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def sample_stable_increment(alpha, dt, rng, size=None):
    """Exact one-sided stable increment(s) over dt via Kanter's representation.

    S(dt) = dt^(1/alpha) * (a(U)/W)^((1-alpha)/alpha) with U uniform on
    (0, pi) and W unit exponential, giving E exp(-lam S(dt)) =
    exp(-dt lam^alpha).
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0, 1)")
    if dt <= 0.0:
        raise ParameterError("dt must be > 0")
    u = rng.uniform(0.0, math.pi, size=size)
    w = rng.standard_exponential(size=size)
    base = (zolotarev_a(u, alpha) / w) ** ((1.0 - alpha) / alpha)
    return dt ** (1.0 / alpha) * base


@dataclass(frozen=True)
class PathSample:
    """One compound-Poisson-plus-drift path of a subordinator.

    s_grid holds 0 followed by the jump times; s_values the path values at
    those instants (right limits, so jumps are included).  Between grid
    points the path grows linearly at the drift rate.
    """

    jump_times: np.ndarray
    jump_sizes: np.ndarray
    drift: float
    horizon: float
    seed: Optional[int] = None

    @property
    def s_grid(self):
        return np.concatenate(([0.0], self.jump_times))

    @property
    def s_values(self):
        levels = self.drift * self.jump_times + np.cumsum(self.jump_sizes)
        return np.concatenate(([0.0], levels))

    def value(self, s):
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.jump_times, s, side="right")
        jumps = np.concatenate(([0.0], np.cumsum(self.jump_sizes)))
        return self.drift * s + jumps[idx]


@dataclass(frozen=True)
class EmpiricalDensity:
    bin_edges: np.ndarray
    masses: np.ndarray
    overflow_mass: float
    n_samples: int


def empirical_density(samples, bin_edges) -> EmpiricalDensity:
    """Histogram masses over the edges; mass past the last edge is kept
    separately so that masses.sum() + overflow == 1 exactly."""
    samples = np.asarray(samples, dtype=float)
    edges = np.asarray(bin_edges, dtype=float)
    counts, _ = np.histogram(samples, bins=edges)
    inside = counts.sum()
    n = samples.size
    below = np.count_nonzero(samples < edges[0])
    overflow = (n - inside - below) / n
    return EmpiricalDensity(edges, counts / n, overflow, n)


# ---------------------------------------------------------------------------
# Conditional jump sampling above the cutoff, per family
# ---------------------------------------------------------------------------

def jump_rate(spec: KernelSpec, eps: float) -> float:
    """Arrival rate of jumps above eps, sigma((eps, inf)) = k(eps)."""
    if spec.family == TRUNCSTABLE and eps >= spec.delta:
        raise ParameterError("jump cutoff must lie below the truncation level delta")
    tri = make_triple(spec)
    rate = float(tri.kernel(eps))
    if rate <= 0.0:
        raise ParameterError(f"no jump mass above cutoff eps={eps}")
    return rate


def _sample_jumps(spec, eps, n, rng):
    """n draws from the jump law conditioned on exceeding eps."""
    f = spec.family
    u = rng.uniform(0.0, 1.0, size=n)
    if f == STABLE:
        return eps * u ** (-1.0 / spec.alpha)
    if f == TRUNCSTABLE:
        al, dl = spec.alpha, spec.delta
        lo, hi = eps ** (-al), dl ** (-al)
        return (lo - u * (lo - hi)) ** (-1.0 / al)
    if f == SUMSTABLE:
        al, be = spec.alpha, spec.beta
        ra = eps ** (-al) / math.gamma(1.0 - al)
        rb = eps ** (-be) / math.gamma(1.0 - be)
        pick_b = rng.uniform(0.0, 1.0, size=n) < rb / (ra + rb)
        out = eps * u ** (-1.0 / al)
        out[pick_b] = eps * u[pick_b] ** (-1.0 / be)
        return out
    if f == GAMMA:
        return _sample_gamma_jumps(spec, eps, n, rng)
    if f == TEMPERED:
        return _sample_tempered_jumps(spec, eps, n, rng)
    if f == DISTRIBUTED:
        return _sample_distributed_jumps(spec, eps, n, rng)
    raise ParameterError(f"family {f} has no path sampler")


def _sample_gamma_jumps(spec, eps, n, rng):
    # log-uniform proposal on (eps, A) with acceptance e^(-b x); the rate
    # beyond A is below double precision of the Monte Carlo for bA >= 36
    b = spec.b
    A = max(36.0 / b, 10.0 * eps)
    span = math.log(A / eps)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        x = eps * np.exp(span * rng.uniform(0.0, 1.0, size=todo.size))
        acc = rng.uniform(0.0, 1.0, size=todo.size) < np.exp(-b * (x - eps))
        out[todo[acc]] = x[acc]
        todo = todo[~acc]
    return out


def _sample_tempered_jumps(spec, eps, n, rng):
    # Pareto proposal with acceptance ratio proportional to
    # e^(-g x)(1 + (g/alpha) x); the ratio peaks at x* = max(eps, (1-a)/g)
    al, g = spec.alpha, spec.gamma_temper
    xstar = max(eps, (1.0 - al) / g)
    peak = math.exp(-g * xstar) * (1.0 + g * xstar / al)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        x = eps * rng.uniform(0.0, 1.0, size=todo.size) ** (-1.0 / al)
        ratio = np.exp(-g * x) * (1.0 + g * x / al) / peak
        acc = rng.uniform(0.0, 1.0, size=todo.size) < ratio
        out[todo[acc]] = x[acc]
        todo = todo[~acc]
    return out


_DIST_TABLE_CACHE = {}


def _sample_distributed_jumps(spec, eps, n, rng):
    # tabulated inverse of the monotone tail k(x) on a dense log grid; the
    # interpolation error on each jump is ~1e-6 relative, far below Monte
    # Carlo noise.  Targets falling beyond the table (the tail is only
    # logarithmically light, total probability ~1e-4 of jumps) clamp to the
    # table end, where exp(-lam * jump) has long since underflowed.
    key = (spec.family, round(math.log(eps), 12))
    if key not in _DIST_TABLE_CACHE:
        tri = make_triple(spec)
        logx = math.log(eps) + np.linspace(0.0, 120.0, 4000)
        logk = np.log(tri.kernel(np.exp(logx)))
        _DIST_TABLE_CACHE[key] = (logk[::-1].copy(), logx[::-1].copy())
    logk_rev, logx_rev = _DIST_TABLE_CACHE[key]
    k_eps = math.exp(logk_rev[-1])
    targets = np.log(k_eps) + np.log(rng.uniform(0.0, 1.0, size=n))
    return np.exp(np.interp(targets, logk_rev, logx_rev))


def truncation_bias(spec: KernelSpec, eps: float, lam: float, t: float = 1.0) -> float:
    """Leading bias bound for E exp(-lam S(t)) under the eps-cutoff sampler."""
    return 0.5 * lam * lam * t * small_jump_second_moment(spec, eps)


def default_jump_cutoff(spec: KernelSpec, lam: float = 2.0, n_paths: int = 10**6) -> float:
    """Cutoff eps such that the truncation bias stays below ~1/5 of the
    3-sigma Monte Carlo band of E exp(-lam S(1)) at n_paths samples."""
    budget = 0.2 * 3.0 * 0.5 / math.sqrt(n_paths)
    eps = 0.05
    for _ in range(60):
        if truncation_bias(spec, eps, lam) <= budget:
            return eps
        eps *= 0.7
    return eps


def sample_path_general(spec: KernelSpec, horizon: float, jump_cutoff=None,
                        rng=None, seed=None) -> PathSample:
    """Compound-Poisson path with drift compensation up to the horizon."""
    if horizon <= 0.0:
        raise ParameterError("horizon must be > 0")
    if spec.family == IDENTITY:
        return PathSample(np.empty(0), np.empty(0), 1.0, horizon, seed)
    eps = jump_cutoff if jump_cutoff is not None else default_jump_cutoff(spec)
    rate = jump_rate(spec, eps)
    expected = rate * horizon
    if expected > _MAX_EXPECTED_JUMPS:
        raise ParameterError(
            f"expected jump count {expected:.3g} exceeds {_MAX_EXPECTED_JUMPS:.0e}; "
            "increase the jump cutoff eps"
        )
    if rng is None:
        rng = rng_for(seed if seed is not None else 0)
    drift = small_jump_mean(spec, eps)
    n = rng.poisson(expected)
    times = np.sort(rng.uniform(0.0, horizon, size=n))
    sizes = _sample_jumps(spec, eps, n, rng)
    return PathSample(times, sizes, drift, horizon, seed)


def first_passage_inverse(path: PathSample, t: float) -> float:
    """First-passage clock E(t) = inf{s > 0 : S(s) > t}, exact on the path.

    Between jumps the path is linear, so crossings inside a segment are
    solved in closed form; a jump over the level passes at the jump time.
    """
    if t < 0.0:
        raise ParameterError("t must be >= 0")
    if t == 0.0:
        return 0.0
    levels_after = path.s_values[1:]  # value right after each jump
    jumps = np.concatenate(([0.0], np.cumsum(path.jump_sizes)))
    # crossing by drift inside segment i (before jump i+1) or at a jump
    n = path.jump_times.size
    prev_time = 0.0
    prev_level = 0.0
    for i in range(n):
        tj = path.jump_times[i]
        level_before = path.drift * tj + jumps[i]
        if path.drift > 0.0 and level_before > t:
            return prev_time + (t - prev_level) / path.drift
        level_after = level_before + path.jump_sizes[i]
        if level_after > t:
            return tj
        prev_time, prev_level = tj, level_after
    end_level = path.drift * path.horizon + (jumps[-1] if n else 0.0)
    if path.drift > 0.0 and end_level > t:
        return prev_time + (t - prev_level) / path.drift
    raise ParameterError(
        f"path exhausted at level {end_level:.6g} before reaching t={t}; "
        "request a longer horizon"
    )


def passage_times(spec: KernelSpec, t: float, n_paths: int, seed=12345,
                  jump_cutoff=None, chunk=100_000) -> np.ndarray:
    """Vectorized first-passage clock samples E(t) over many paths.

    Paths are generated in blocks of jumps until every path has crossed the
    level; per-chunk substreams derive from (seed, chunk index).
    """
    if spec.family == IDENTITY:
        return np.full(n_paths, float(t))
    if t < 0.0:
        raise ParameterError("t must be >= 0")
    if t == 0.0:
        return np.zeros(n_paths)
    eps = jump_cutoff if jump_cutoff is not None else default_jump_cutoff(spec)
    rate = jump_rate(spec, eps)
    drift = small_jump_mean(spec, eps)
    out = np.empty(n_paths)
    start = 0
    stream = 0
    while start < n_paths:
        m = min(chunk, n_paths - start)
        rng = rng_for(seed, stream)
        out[start:start + m] = _passage_chunk(spec, t, m, eps, rate, drift, rng)
        start += m
        stream += 1
    return out


def _passage_chunk(spec, t, m, eps, rate, drift, rng, block=64):
    res = np.full(m, np.nan)
    active = np.arange(m)
    time_off = np.zeros(m)
    level_off = np.zeros(m)
    while active.size:
        na = active.size
        gaps = rng.exponential(1.0 / rate, size=(na, block))
        times = np.cumsum(gaps, axis=1)
        sizes = _sample_jumps(spec, eps, na * block, rng).reshape(na, block)
        cum = np.cumsum(sizes, axis=1)
        lvl_before = level_off[active, None] + drift * times + cum - sizes
        lvl_after = lvl_before + sizes
        need = t - 0.0
        crossed_drift = lvl_before > need  # drift crossed strictly inside segment
        crossed_jump = lvl_after > need
        crossed = crossed_drift | crossed_jump
        any_cross = crossed.any(axis=1)
        idx = np.argmax(crossed, axis=1)
        rows = np.nonzero(any_cross)[0]
        if rows.size:
            j = idx[rows]
            by_drift = crossed_drift[rows, j]
            # drift crossing happens in the open segment before jump j
            seg_start_level = lvl_before[rows, j] - drift * gaps[rows, j]
            seg_start_time = times[rows, j] - gaps[rows, j]
            t_drift = time_off[active[rows]] + seg_start_time + (
                (need - seg_start_level) / max(drift, 1e-300)
            )
            t_jump = time_off[active[rows]] + times[rows, j]
            res[active[rows]] = np.where(by_drift, t_drift, t_jump)
        # stragglers continue from the end of the block
        rest = np.nonzero(~any_cross)[0]
        if rest.size:
            time_off[active[rest]] += times[rest, -1]
            level_off[active[rest]] = lvl_after[rest, -1]
        active = active[rest]
    return res


@dataclass(frozen=True)
class MCExpectation:
    mean: float
    std_error: float
    n_paths: int


def empirical_expectation(spec: KernelSpec, flow, f, t: float, n_paths: int,
                          seed=12345, x=None, jump_cutoff=None) -> MCExpectation:
    """Monte Carlo estimate of E f(X(E(t), x)) with its standard error."""
    if n_paths < 100:
        raise ParameterError("n_paths must be >= 100")
    from .flows import orbit_points  # local import to avoid a cycle

    x0 = 0.0 if x is None else x
    if spec.family == IDENTITY:
        val = float(f(flow.flow_map(t, x0)))
        return MCExpectation(val, 0.0, n_paths)
    clocks = passage_times(spec, t, n_paths, seed=seed, jump_cutoff=jump_cutoff)
    pts = orbit_points(flow, clocks, x0)
    vals = np.asarray(f(pts), dtype=float)
    return MCExpectation(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n_paths)), n_paths)


def laplace_match(spec: KernelSpec, lams, n_samples: int, seed=12345, jump_cutoff=None):
    """Empirical E exp(-lam S(1)) against exp(-phi(lam)) for each lam.

    Returns rows (lam, empirical, exact, z_score); |z| <= 3 is the
    acceptance band.  S(1) is sampled once and reused across the lams.
    """
    if spec.family == IDENTITY:
        tri = None
        s1 = np.ones(n_samples)
    else:
        eps = jump_cutoff if jump_cutoff is not None else default_jump_cutoff(spec, max(lams), n_samples)
        tri = make_triple(spec)
        rate = jump_rate(spec, eps)
        drift = small_jump_mean(spec, eps)
        s1 = np.empty(n_samples)
        start = 0
        stream = 0
        while start < n_samples:
            m = min(200_000, n_samples - start)
            rng = rng_for(seed, stream)
            n_jumps = rng.poisson(rate, size=m)
            total = int(n_jumps.sum())
            sums = np.zeros(m)
            if total:
                sizes = _sample_jumps(spec, eps, total, rng)
                bounds = np.concatenate(([0], np.cumsum(n_jumps)))
                sums = np.add.reduceat(np.concatenate((sizes, [0.0])), bounds[:-1])
                sums[n_jumps == 0] = 0.0
            s1[start:start + m] = drift + sums
            start += m
            stream += 1
    rows = []
    for lam in lams:
        vals = np.exp(-lam * s1)
        emp = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(n_samples))
        exact = math.exp(-float(tri.phi(lam))) if tri is not None else math.exp(-lam)
        z = (emp - exact) / se if se > 0.0 else 0.0
        rows.append((float(lam), emp, exact, z))
    return rows
