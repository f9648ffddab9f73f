"""
Plot utilities - static SVG figures

Figures are a side channel: every function takes data that has already been
written to CSV and only renders it. Figures are plain Figure objects without
pyplot state, so worker threads may render concurrently.
"""

from pathlib import Path
from typing import Mapping, Sequence, Tuple, Union

import numpy as np
from matplotlib.figure import Figure

PathLike = Union[str, Path]


def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    return path


def plot_sweep(path: PathLike, rows: Sequence, lattice: str) -> Path:
    """sigma0 and lambda, d1 and d2, p1 and p2 against alpha"""
    alpha = np.array([r.alpha for r in rows], dtype=float)
    fig = Figure(figsize=(13, 4))
    axes = fig.subplots(1, 3)
    panels = (("sigma0", "lam"), ("d1", "d2"), ("p1", "p2"))
    for ax, names in zip(axes, panels):
        for name in names:
            ax.plot(alpha, [getattr(r, name) for r in rows], label=name)
        ax.set_xlabel("alpha")
        ax.legend()
        ax.grid(alpha=0.3)
    fig.suptitle(f"{lattice} lattice")
    return _save(fig, path)


def plot_profiles(path: PathLike, xi: np.ndarray, profiles: Mapping[str, np.ndarray],
                  title: str = "KdV-limit profiles") -> Path:
    """Both components of several profiles (label -> array of shape (2, N))"""
    fig = Figure(figsize=(11, 4))
    axes = fig.subplots(1, 2, sharex=True)
    for label, values in profiles.items():
        for i, ax in enumerate(axes):
            ax.plot(xi, values[i], label=label)
    for i, ax in enumerate(axes):
        ax.set_xlabel("xi")
        ax.set_ylabel(f"W{i + 1}")
        ax.grid(alpha=0.3)
    axes[0].legend(fontsize="small")
    fig.suptitle(title)
    return _save(fig, path)


def plot_solution(path: PathLike, xi: np.ndarray, profile: np.ndarray, leading: np.ndarray,
                  title: str) -> Path:
    """W_eps against xi with W0 dashed, and the W2-versus-W1 scatter"""
    fig = Figure(figsize=(11, 4))
    (left, right) = fig.subplots(1, 2)
    for i, color in enumerate(("tab:blue", "tab:orange")):
        left.plot(xi, profile[i], color=color, label=f"W{i + 1}")
        left.plot(xi, leading[i], color=color, linestyle="--", linewidth=0.8,
                  label=f"W0 component {i + 1}")
    left.set_xlabel("xi")
    left.legend(fontsize="small")
    left.grid(alpha=0.3)
    right.plot(profile[0], profile[1], ".", markersize=2)
    right.set_xlabel("W1")
    right.set_ylabel("W2")
    right.grid(alpha=0.3)
    fig.suptitle(title)
    return _save(fig, path)


def plot_t_curve(path: PathLike, z: np.ndarray, t: np.ndarray, bound: np.ndarray,
                 title: str) -> Path:
    """T(z) with the comparison curve delta0 * min(|z|, 2)^2"""
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    ax.plot(z, t, label="T(z)")
    ax.plot(z, bound, "k--", label="delta0 min(z, 2)^2")
    ax.set_xlabel("z")
    ax.legend()
    ax.grid(alpha=0.3)
    ax.set_title(title)
    return _save(fig, path)


def plot_det_curves(path: PathLike, curves: Mapping[float, Tuple[np.ndarray, np.ndarray]],
                    lower_bound: float, title: str) -> Path:
    """det B_eps(z) for several eps with the horizontal lower bound"""
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    for eps, (z, det) in curves.items():
        ax.plot(z, det, label=f"eps={eps:g}")
    ax.axhline(lower_bound, color="k", linestyle="--", label="2 sigma0 - (c1 + c3)")
    ax.set_xlabel("z")
    ax.legend()
    ax.grid(alpha=0.3)
    ax.set_title(title)
    return _save(fig, path)


def plot_dispersion(path: PathLike, z: np.ndarray, mu1: np.ndarray, mu2: np.ndarray,
                    sigma0: float, title: str) -> Path:
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    ax.plot(z, mu1, label="mu1")
    ax.plot(z, mu2, label="mu2")
    ax.axhline(sigma0, color="k", linestyle=":", label="sigma0")
    ax.set_xlabel("z")
    ax.legend()
    ax.grid(alpha=0.3)
    ax.set_title(title)
    return _save(fig, path)


def plot_rate(path: PathLike, eps: Sequence[float], norms: Sequence[float], title: str) -> Path:
    """|W_eps - W0|_2 against eps on log axes with an eps^2 guide"""
    eps = np.asarray(eps, dtype=float)
    norms = np.asarray(norms, dtype=float)
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    ax.loglog(eps, norms, "o-", label="|W_eps - W0|")
    ax.loglog(eps, norms[0] * (eps / eps[0]) ** 2, "k--", label="eps^2")
    ax.set_xlabel("eps")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    ax.set_title(title)
    return _save(fig, path)


def plot_dynamics(path: PathLike, report) -> Path:
    """Tracked peak position against time, and the shape error"""
    fig = Figure(figsize=(11, 4))
    (left, right) = fig.subplots(1, 2)
    times = np.asarray(report.times)
    left.plot(times, report.positions, "o", markersize=3, label="tracked peak")
    left.plot(times, report.positions[0] + report.speed_expected * times, "k--", label="c_eps t")
    left.set_xlabel("t")
    left.legend()
    left.grid(alpha=0.3)
    right.plot(times, report.shape_errors)
    right.set_xlabel("t")
    right.set_ylabel("relative shape error")
    right.grid(alpha=0.3)
    fig.suptitle(f"lattice dynamics, alpha={report.alpha:.4f}, eps={report.eps:g}")
    return _save(fig, path)
