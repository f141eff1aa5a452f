"""Command-line interface: every computation as a reproducible subcommand.

Each subcommand writes a delimited report (CSV with '#' metadata lines, or
JSON mirroring the columns) and prints a one-line summary to stdout.  Exit
codes: 0 success, 2 validation error, 3 numeric failure (divergence or
non-convergence).  With --plot a PNG is rendered next to the output file.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .density import GEvaluator, density_grid, double_laplace_check, laplace_tau
from .errors import NumericsError, ParameterError
from .flows import flow_start, liouville_u, parse_flow_config, parse_obs_config
from .kernels import (
    consistency_report,
    hypothesis_H_check,
    make_triple,
    parse_kernel_config,
)
from .mc import empirical_expectation, laplace_match, passage_times
from .potentials import (
    green_integral,
    green_measure,
    naive_V_divergence_check,
    potential_U,
    renormalized_Vr,
)
from .reports import write_report
from .special import mittag_leffler
from .subordination import (
    SubordinatedSolution,
    asymptotic_profile,
    gfd_apply,
    predicted_decay,
    subordinate,
)
from .trajectory import mean_trajectory


def parse_grid(text):
    """Grid syntax: 'start:stop:count:lin|log', a comma list, or one value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise ParameterError(f"grid spec {text!r} must be start:stop:count:spacing")
        start, stop, count, spacing = float(parts[0]), float(parts[1]), int(parts[2]), parts[3]
        if count < 1:
            raise ParameterError("grid count must be >= 1")
        if spacing in ("lin", "linear"):
            return np.linspace(start, stop, count)
        if spacing == "log":
            return np.geomspace(start, stop, count)
        raise ParameterError(f"unknown grid spacing {spacing!r}")
    return np.array([float(p) for p in text.split(",") if p.strip()])


def _common(parser, kernel=True, flowobs=False):
    parser.add_argument("--output", default=None, help="report path (default <subcommand>.csv)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--plot", action="store_true", help="render a PNG next to the report")
    parser.add_argument("--config", default=None, help="file with one key=value per line")
    if kernel:
        parser.add_argument("--kernel", default=None, help='e.g. "family=stable alpha=0.5"')
    if flowobs:
        parser.add_argument("--flow", default=None, help='e.g. "flow=linear v=1 x0=0"')
        parser.add_argument("--obs", default=None, help='e.g. "obs=expabs a=1"')
        parser.add_argument("--x", default=None, help="start point (defaults to the flow's)")


def build_parser():
    p = argparse.ArgumentParser(prog="fracdyn", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kernel-check", help="transform identities and limit probes for one clock")
    _common(s)
    s.add_argument("--lambda-grid", default="1e-2:1e2:9:log")

    s = sub.add_parser("density", help="inverse-clock density values and transform checks")
    _common(s)
    s.add_argument("--t", default="1")
    s.add_argument("--tau", default="0")
    s.add_argument("--verify-transform", default=None,
                   help="comma list of z: checks int e^(-z tau) G dtau against the transform")
    s.add_argument("--double-laplace", default=None,
                   help="'L1,L2xP1,P2': relative errors of the double-transform identity")

    s = sub.add_parser("subordinate", help="v(t, x) = int u(tau, x) G_t(tau) dtau")
    _common(s, flowobs=True)
    s.add_argument("--t", default="1")

    s = sub.add_parser("asymptotics", help="v(t) against the long-time decay prediction")
    _common(s, flowobs=True)
    s.add_argument("--t", default="1e2:1e6:9:log")
    s.add_argument("--fit-exponent", action="store_true",
                   help="also fit the log-log decay exponent of v")

    s = sub.add_parser("gfd-residual", help="convolution-derivative residuals")
    _common(s, flowobs=True)
    s.add_argument("--t", default="0.5,1,2")
    s.add_argument("--mode", choices=("evolution", "eigen"), default="evolution")

    s = sub.add_parser("potential", help="potential of the flow and Green-measure duality")
    _common(s, kernel=False, flowobs=True)

    s = sub.add_parser("renormalize", help="renormalized subordinated potential over a horizon")
    _common(s, flowobs=True)
    s.add_argument("--T", default="1e2:1e6:5:log")
    s.add_argument("--naive", action="store_true",
                   help="report the naive potential partial integrals instead")

    s = sub.add_parser("trajectory", help="average trajectory under the random clock")
    _common(s, flowobs=True)
    s.add_argument("--t", default="1")

    s = sub.add_parser("mc-validate", help="Monte Carlo cross-checks against transforms")
    _common(s, flowobs=True)
    s.add_argument("--check", choices=("laplace", "moment", "expectation"), default="laplace")
    s.add_argument("--n", type=int, default=100_000)
    s.add_argument("--lambdas", default="0.5,1,2")
    s.add_argument("--t", default="1")
    s.add_argument("--dump", default=None,
                   help="also write raw clock samples (path_id, t, E_t) to this CSV")
    return p


def _apply_config(args):
    if getattr(args, "config", None):
        cfg = {}
        for line in Path(args.config).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"malformed config line {line!r}")
            key, val = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = val.strip()
        for key, val in cfg.items():
            if hasattr(args, key) and getattr(args, key) in (None,):
                setattr(args, key, val)
    return args


def _need(args, name):
    val = getattr(args, name, None)
    if val is None:
        raise ParameterError(f"--{name} is required for this subcommand")
    return val


def _setup(args, subcommand):
    out = Path(args.output) if args.output else Path(f"{subcommand}.csv")
    if args.format == "json" and out.suffix == ".csv" and args.output is None:
        out = out.with_suffix(".json")
    meta = {
        "tool": "fracdyn",
        "version": __version__,
        "argv": " ".join(sys.argv[1:]),
        "seed": args.seed,
    }
    return out, meta


def _emit(args, subcommand, columns, rows, meta, summary):
    out, base_meta = _setup(args, subcommand)
    base_meta.update(meta)
    write_report(out, columns, rows, base_meta, args.format)
    if args.plot:
        from .plotting import render_for

        cols = {name: [row[i] for row in rows] for i, name in enumerate(columns)}
        render_for(subcommand, cols, out.with_suffix(".png"))
    print(summary)
    return 0


def cmd_kernel_check(args):
    spec = parse_kernel_config(_need(args, "kernel"))
    tri = make_triple(spec)
    grid = parse_grid(args.lambda_grid)
    rows = []
    worst = 0.0
    for lam in grid:
        err = consistency_report(tri, [lam])
        phi_v = float(np.real(tri.phi(lam)))
        K_v = float(np.real(tri.transform(lam)))
        rows.append((float(lam), phi_v, K_v, err))
        worst = max(worst, err)
    h = hypothesis_H_check(tri)
    meta = {
        "kernel": spec.label(),
        "K_at_0_diverges": h.K_at_0_diverges,
        "K_at_inf_vanishes": h.K_at_inf_vanishes,
        "Phi_at_0_vanishes": h.Phi_at_0_vanishes,
        "Phi_at_inf_diverges": h.Phi_at_inf_diverges,
    }
    return _emit(args, "kernel-check", ("lambda", "phi", "K", "rel_err"), rows, meta,
                 f"max_rel_err={worst:.6e}")


def cmd_density(args):
    spec = parse_kernel_config(_need(args, "kernel"))
    g = GEvaluator(spec, tol=args.tol)
    ts = parse_grid(args.t)
    taus = parse_grid(args.tau)
    rows = density_grid(g, ts, taus)
    meta = {"kernel": spec.label()}
    summary = f"G={rows[-1][2]:.6f}"
    if args.verify_transform:
        zs = [float(z) for z in args.verify_transform.split(",")]
        worst = 0.0
        for t in ts:
            for z in zs:
                a_quad = laplace_tau(g, float(t), z, via="quadrature")
                a_ref = laplace_tau(g, float(t), z, via="auto")
                worst = max(worst, abs(a_quad / a_ref - 1.0))
        meta["transform_check_max_rel_err"] = f"{worst:.6e}"
        summary = f"max_rel_err={worst:.6e}"
    if args.double_laplace:
        lam_part, p_part = args.double_laplace.split("x")
        worst = 0.0
        for lam in (float(v) for v in lam_part.split(",")):
            for pp in (float(v) for v in p_part.split(",")):
                worst = max(worst, double_laplace_check(g, lam, pp))
        meta["double_laplace_max_rel_err"] = f"{worst:.6e}"
        summary = f"max_rel_err={worst:.6e}"
    return _emit(args, "density", ("t", "tau", "G"), rows, meta, summary)


def _solution(args, tol=None):
    spec = parse_kernel_config(_need(args, "kernel"))
    flow = parse_flow_config(_need(args, "flow"))
    obs = parse_obs_config(_need(args, "obs"))
    if args.x is not None:
        x = np.array([float(v) for v in str(args.x).split(";")])
        x = float(x[0]) if x.size == 1 else x
    else:
        x = flow_start(flow)
        x = float(x) if np.ndim(x) == 0 or np.size(x) == 1 else x
    g = GEvaluator(spec, tol=tol if tol is not None else args.tol)
    return SubordinatedSolution(g, flow, obs, x), spec, flow, obs, x


def cmd_subordinate(args):
    sol, spec, _, _, _ = _solution(args)
    ts = parse_grid(args.t)
    rows = [(float(t), subordinate(sol, float(t))) for t in ts]
    return _emit(args, "subordinate", ("t", "v"), rows, {"kernel": spec.label()},
                 f"v={rows[-1][1]:.6f}")


def cmd_asymptotics(args):
    sol, spec, flow, obs, x = _solution(args)
    prof = asymptotic_profile(spec)
    if not prof.valid:
        raise ParameterError(
            f"no decay prediction for {spec.label()}: {prof.reason}"
        )
    # decay scale of the transported observable along the orbit
    du = 1e-7
    u0 = float(liouville_u(flow, obs, 0.0, x))
    z = -(float(liouville_u(flow, obs, du, x)) - u0) / (du * u0)
    prefactor = u0
    ts = parse_grid(args.t)
    rows = []
    for t in ts:
        v = subordinate(sol, float(t))
        pred = prefactor * predicted_decay(prof, z, float(t))
        rows.append((float(t), v, pred, v / pred))
    meta = {"kernel": spec.label(), "gamma_exp": prof.gamma_exp, "decay_rate_z": z}
    summary = f"ratio={rows[-1][3]:.6f}"
    if args.fit_exponent:
        vals = np.array([r[1] for r in rows])
        slope = np.polyfit(np.log([r[0] for r in rows]), np.log(vals), 1)[0]
        meta["fitted_exponent"] = f"{slope:.6f}"
        summary = f"fitted_exponent={slope:.6f}"
    return _emit(args, "asymptotics", ("t", "v", "predicted", "ratio"), rows, meta, summary)


def cmd_gfd_residual(args):
    from .subordination import evolution_residual

    spec = parse_kernel_config(_need(args, "kernel"))
    ts = parse_grid(args.t)
    if args.mode == "eigen":
        if spec.family != "stable":
            raise ParameterError("eigen mode is defined for the stable clock")
        tri = make_triple(spec)
        al = spec.alpha
        rows = []
        for t in ts:
            val = gfd_apply(tri, lambda s: mittag_leffler(al, -(s**al)) if s > 0 else 1.0,
                            float(t), n=2000)
            target = -mittag_leffler(al, -(t**al))
            rows.append((float(t), val, target, abs(val / target - 1.0)))
        worst = max(r[3] for r in rows)
        return _emit(args, "gfd-residual", ("t", "derivative", "target", "rel_err"), rows,
                     {"kernel": spec.label(), "mode": "eigen"}, f"max_rel_err={worst:.6e}")
    sol, spec, _, _, _ = _solution(args)
    rows = [(float(t), evolution_residual(sol, float(t))) for t in ts]
    worst = max(r[1] for r in rows)
    return _emit(args, "gfd-residual", ("t", "residual"), rows,
                 {"kernel": spec.label(), "mode": "evolution"}, f"max_residual={worst:.6e}")


def cmd_potential(args):
    flow = parse_flow_config(_need(args, "flow"))
    obs = parse_obs_config(_need(args, "obs"))
    x = float(args.x) if args.x is not None else float(np.asarray(flow_start(flow)).reshape(()))
    U = potential_U(flow, obs, x, tol=args.tol)
    gm = green_measure(flow, x)
    rows = [("U", U)]
    meta = {"flow": flow.name, "representable": gm.representable}
    if gm.representable == "representable":
        gU = green_integral(gm, obs.f if gm.point_at is not None else (lambda y: obs.f(np.asarray(y))))
        rows.append(("green_U", gU))
        rows.append(("duality_gap", abs(gU - U) / max(abs(U), 1e-300)))
    return _emit(args, "potential", ("quantity", "value"), rows, meta, f"U={U:.6f}")


def cmd_renormalize(args):
    spec = parse_kernel_config(_need(args, "kernel"))
    flow = parse_flow_config(_need(args, "flow"))
    obs = parse_obs_config(_need(args, "obs"))
    x = float(args.x) if args.x is not None else float(np.asarray(flow_start(flow)).reshape(()))
    Ts = parse_grid(args.T)
    if args.naive:
        rep = naive_V_divergence_check(spec, flow, obs, x, T_grid=Ts)
        rows = list(zip(rep.T_grid.tolist(), rep.partials.tolist()))
        meta = {"kernel": spec.label(), "fitted_exponent": f"{rep.fitted_exponent:.6f}",
                "diverges": rep.diverges}
        return _emit(args, "renormalize", ("T", "partial_integral"), rows, meta,
                     f"fitted_exponent={rep.fitted_exponent:.6f}")
    U = potential_U(flow, obs, x, tol=1e-6)
    rows = []
    for T in Ts:
        r = renormalized_Vr(flow, obs, x, spec, float(T), tol=args.tol)
        rows.append((float(T), r.value_at_T * r.N_T, r.N_T, r.value_at_T / U))
    meta = {"kernel": spec.label(), "U": f"{U:.17g}"}
    return _emit(args, "renormalize", ("T", "partial_integral", "N_T", "ratio"), rows, meta,
                 f"ratio={rows[-1][3]:.6f}")


def cmd_trajectory(args):
    spec = parse_kernel_config(_need(args, "kernel"))
    flow = parse_flow_config(_need(args, "flow"))
    x = flow_start(flow) if args.x is None else float(args.x)
    ts = parse_grid(args.t)
    rep = mean_trajectory(flow, spec, x, ts, tol=args.tol)
    dim = rep.mean_y.shape[1]
    columns = ["t"] + [f"meanY_{d+1}" for d in range(dim)] + [f"X_{d+1}" for d in range(dim)] + ["ratio"]
    rows = []
    for i, t in enumerate(rep.t_grid):
        ref_norm = float(np.linalg.norm(rep.reference[i]))
        mean_norm = float(np.linalg.norm(rep.mean_y[i]))
        ratio = mean_norm / ref_norm if ref_norm > 0 else math.nan
        rows.append((float(t), *rep.mean_y[i].tolist(), *rep.reference[i].tolist(), ratio))
    meta = {"kernel": spec.label(), "slowdown_exponent_fit": f"{rep.slowdown_exponent_fit:.6f}"}
    if ts.size == 1:
        summary = f"meanY={float(np.linalg.norm(rep.mean_y[0])):.6f}"
    else:
        summary = f"slowdown_exponent={rep.slowdown_exponent_fit:.6f}"
    return _emit(args, "trajectory", columns, rows, meta, summary)


def cmd_mc_validate(args):
    spec = parse_kernel_config(_need(args, "kernel"))
    rows = []
    if args.check == "laplace":
        lams = [float(v) for v in args.lambdas.split(",")]
        for lam, emp, exact, z in laplace_match(spec, lams, args.n, seed=args.seed):
            rows.append((spec.family, "laplace", lam, emp, exact, z))
    elif args.check == "moment":
        from .density import GEvaluator as GE, moment as density_moment

        g = GE(spec, tol=args.tol)
        for t in parse_grid(args.t):
            clocks = passage_times(spec, float(t), args.n, seed=args.seed)
            emp = float(clocks.mean())
            se = float(clocks.std(ddof=1) / math.sqrt(args.n))
            exact = density_moment(g, float(t), 1)
            rows.append((spec.family, "moment", float(t), emp, exact, (emp - exact) / se))
    else:
        sol, spec, flow, obs, x = _solution(args)
        for t in parse_grid(args.t):
            r = empirical_expectation(spec, flow, obs.f, float(t), args.n, seed=args.seed, x=x)
            exact = subordinate(sol, float(t))
            z = (r.mean - exact) / r.std_error if r.std_error > 0 else 0.0
            rows.append((spec.family, "expectation", float(t), r.mean, exact, z))
    if args.dump:
        from .reports import write_csv

        dump_rows = []
        for t in parse_grid(args.t):
            clocks = passage_times(spec, float(t), args.n, seed=args.seed)
            dump_rows.extend(
                (i, float(t), float(e)) for i, e in enumerate(clocks)
            )
        write_csv(args.dump, ("path_id", "t", "E_t"), dump_rows,
                  meta={"seed": args.seed, "kernel": spec.label()})
    worst = max(abs(r[5]) for r in rows)
    return _emit(args, "mc-validate",
                 ("family", "check", "argument", "empirical", "exact", "z_score"), rows,
                 {"kernel": spec.label(), "n": args.n}, f"max_abs_z={worst:.3f}")


_COMMANDS = {
    "kernel-check": cmd_kernel_check,
    "density": cmd_density,
    "subordinate": cmd_subordinate,
    "asymptotics": cmd_asymptotics,
    "gfd-residual": cmd_gfd_residual,
    "potential": cmd_potential,
    "renormalize": cmd_renormalize,
    "trajectory": cmd_trajectory,
    "mc-validate": cmd_mc_validate,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args)
        return _COMMANDS[args.command](args)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
