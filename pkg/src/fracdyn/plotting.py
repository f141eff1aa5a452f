"""Figure rendering for the report path.

Each renderer takes the column dictionary of one report and writes a PNG
next to the delimited output.  Plots are deliberately plain: log axes where
the quantity spans decades, a reference line where the report carries one.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _new_axes(title):
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=150)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def render_density(cols, path):
    fig, ax = _new_axes("inverse-clock density")
    taus = np.asarray(cols["tau"])
    ts = np.asarray(cols["t"])
    for t in sorted(set(ts)):
        m = ts == t
        ax.plot(taus[m], np.asarray(cols["G"])[m], label=f"t={t:g}")
    ax.set_xlabel("tau")
    ax.set_ylabel("G_t(tau)")
    ax.legend()
    return _save(fig, path)


def render_curve(cols, path, xname, ynames, title, loglog=False):
    fig, ax = _new_axes(title)
    x = np.asarray(cols[xname])
    for yname in ynames:
        if yname in cols:
            ax.plot(x, np.asarray(cols[yname]), label=yname)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xname)
    ax.legend()
    return _save(fig, path)


def render_ratio(cols, path, xname="t", title="ratio to prediction"):
    fig, ax = _new_axes(title)
    x = np.asarray(cols[xname])
    ax.semilogx(x, np.asarray(cols["ratio"]), marker="o")
    ax.axhline(1.0, color="black", linewidth=0.8)
    ax.set_xlabel(xname)
    ax.set_ylabel("ratio")
    return _save(fig, path)


def render_trajectory(cols, path):
    fig, ax = _new_axes("average trajectory under the random clock")
    t = np.asarray(cols["t"])
    mean_cols = sorted(c for c in cols if c.startswith("meanY_"))
    ref_cols = sorted(c for c in cols if c.startswith("X_"))
    for c in mean_cols:
        ax.loglog(t, np.abs(np.asarray(cols[c])), label=c)
    for c in ref_cols:
        ax.loglog(t, np.abs(np.asarray(cols[c])), linestyle="--", label=c)
    ax.set_xlabel("t")
    ax.legend()
    return _save(fig, path)


def render_mc(cols, path):
    fig, ax = _new_axes("Monte Carlo z-scores")
    z = np.asarray(cols["z_score"])
    ax.bar(np.arange(z.size), z)
    ax.axhline(3.0, color="red", linewidth=0.8)
    ax.axhline(-3.0, color="red", linewidth=0.8)
    ax.set_xlabel("check index")
    ax.set_ylabel("z")
    return _save(fig, path)


RENDERERS = {
    "density": render_density,
    "trajectory": render_trajectory,
    "mc-validate": render_mc,
}


def render_for(subcommand, cols, path):
    """Dispatch a figure for one subcommand's report columns."""
    if subcommand in RENDERERS:
        return RENDERERS[subcommand](cols, path)
    if "ratio" in cols and "t" in cols:
        return render_ratio(cols, path)
    if "T" in cols:
        return render_curve(cols, path, "T",
                            [c for c in cols if c != "T"], subcommand, loglog=True)
    if "t" in cols:
        return render_curve(cols, path, "t",
                            [c for c in cols if c != "t"], subcommand,
                            loglog=bool(np.asarray(cols["t"]).size > 2))
    if "lambda" in cols:
        return render_curve(cols, path, "lambda",
                            [c for c in cols if c != "lambda"], subcommand, loglog=True)
    raise ValueError(f"no renderer for {subcommand}")
