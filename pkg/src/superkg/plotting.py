"""Static PNG renderings of exported CSV files.

matplotlib is imported lazily with the Agg backend so the numerical core
never depends on it. Figures are rendered from the CSV files themselves,
which keeps the picture and the data in step.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .export import read_csv


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _label(meta):
    return f"a={meta.get('a')}"


def plot_series(paths, out, zoom=(-2.0, 2.0)):
    """Re u against x for several single-time CSV files, plus a zoomed panel."""
    plt = _pyplot()
    fig, (ax, axz) = plt.subplots(1, 2, figsize=(10, 4), gridspec_kw={"width_ratios": [2, 1]})
    meta, t0 = {}, None
    for path in paths:
        meta, _, data = read_csv(path)
        t0 = data[0, 1]
        ax.plot(data[:, 0], data[:, 2], lw=1, label=_label(meta))
        inside = (data[:, 0] >= zoom[0]) & (data[:, 0] <= zoom[1])
        axz.plot(data[inside, 0], data[inside, 2], lw=1)
    xz = np.linspace(*zoom, 400)
    axz.plot(xz, np.cos(xz), "k--", lw=0.8, label="cos x")
    ax.set_xlabel("x")
    ax.set_ylabel("Re u_n(x, t)")
    ax.set_title(f"n={meta.get('n')}, m={meta.get('m')}, t={t0:g}")
    ax.legend(fontsize=8)
    axz.set_xlabel("x")
    axz.set_title("zoom")
    axz.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return Path(out)


def plot_surface(path, out):
    """Re u over the (x, t) grid of one CSV file (t outer, x inner)."""
    plt = _pyplot()
    meta, _, data = read_csv(path)
    xs = np.unique(data[:, 0])
    ts = np.unique(data[:, 1])
    re = data[:, 2].reshape(len(ts), len(xs))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    mesh = ax.pcolormesh(xs, ts, re, shading="auto", cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label="Re u_n")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(f"n={meta.get('n')}, a={meta.get('a')}, m={meta.get('m')}")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return Path(out)


def plot_evolve_outputs(paths) -> list[Path]:
    """One PNG next to the CSV output(s): a line plot for single-time files, else a map."""
    paths = [Path(p) for p in paths if Path(p).suffix == ".csv"]
    if not paths:
        return []
    single_time = all(len(np.unique(read_csv(p)[2][:, 1])) == 1 for p in paths)
    if single_time:
        first = paths[0]
        stem = first.stem.rsplit("_a", 1)[0] if len(paths) > 1 else first.stem
        return [plot_series(paths, first.with_name(stem + ".png"))]
    return [plot_surface(p, p.with_suffix(".png")) for p in paths]


def plot_kernel(path, out):
    """Heat map of K(s, t) from a kernel CSV with columns s, t, K."""
    plt = _pyplot()
    _, _, data = read_csv(path)
    s_vals, t_vals = np.unique(data[:, 0]), np.unique(data[:, 1])
    k = data[:, 2].reshape(len(s_vals), len(t_vals))
    fig, ax = plt.subplots(figsize=(5, 4.5))
    mesh = ax.pcolormesh(t_vals, s_vals, k, shading="auto")
    fig.colorbar(mesh, ax=ax, label="K(s, t)")
    ax.set_xlabel("t")
    ax.set_ylabel("s")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return Path(out)
