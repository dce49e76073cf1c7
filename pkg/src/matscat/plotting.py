"""Figures written to image files next to CLI output (non-interactive backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_transmission_asymmetry(ks, norms, path):
    """``||T_l(k) - T_r(k)||_2`` against ``k``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, norms, lw=1.5)
    ax.set_xlabel("k")
    ax.set_ylabel(r"$\|T_l(k) - T_r(k)\|_2$")
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_transmission_moduli(ks, det_tl, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, np.abs(det_tl), lw=1.5)
    ax.set_xlabel("k")
    ax.set_ylabel(r"$|\det T_l(k)|$")
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_phase(ks, phase, path, rhs=None):
    """Unwrapped ``arg det S`` against ``k`` on a log axis."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(ks, phase, lw=1.5)
    if rhs is not None:
        ax.axhline(rhs, color="k", ls="--", lw=1, label="predicted value at 0+")
        ax.legend()
    ax.set_xlabel("k")
    ax.set_ylabel(r"$\arg\det S(k)$")
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_imaginary_axis(kappas, values, zeros, path):
    """``det T_l(i kappa)^{-1}`` with the located zeros marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(kappas, np.sign(values) * np.log1p(np.abs(values)), lw=1.5)
    for z in zeros:
        ax.axvline(z, color="r", ls=":", lw=1)
    ax.axhline(0, color="k", lw=0.5)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"sign $\cdot$ log(1 + |det|)")
    ax.grid(alpha=0.3)
    return _save(fig, path)
