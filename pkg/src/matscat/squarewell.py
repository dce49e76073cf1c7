"""Scalar square well: closed forms, Born limit and exceptionality criteria.

Two closed forms are kept side by side.  ``plane_wave_transmission`` comes
from matching plane waves at the two walls and is the trusted oracle.
``alternative_transmission`` uses the denominator
``(-b - k^2 + kq) + (-k^2 + kq) e^{iqa} + (b + 2k^2 + 2kq) e^{-iqa}``, which
circulates in the literature; the report quantifies how far it is from the
transfer-matrix result.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .jost import transmission
from .potential import PiecewisePotential, fragment_at
from .spectral import genericity_degree


def square_well_potential(a: float, b: float, center: float = 0.0) -> PiecewisePotential:
    """Depth-``b`` well of width ``a`` centered at ``center``."""
    return PiecewisePotential.from_pieces([(center - a / 2, center + a / 2, [[-b]])]).validate()


def square_well_fragments(b: float, cut: float) -> list[PiecewisePotential]:
    """The well ``-b`` on ``(-1, 1)`` split at ``cut``."""
    return fragment_at(square_well_potential(2.0, b), [cut])


def _q(k, b):
    return np.sqrt(np.asarray(k, dtype=np.complex128) ** 2 + b)


def plane_wave_transmission(a: float, b: float, k) -> complex:
    """``4kq e^{-ika} / [(q+k)^2 e^{-iqa} - (q-k)^2 e^{iqa}]`` with ``q^2 = k^2 + b``.

    Even in ``q``, so the square-root branch is irrelevant.
    """
    k = np.asarray(k, dtype=np.complex128)
    q = _q(k, b)
    den = (q + k) ** 2 * np.exp(-1j * q * a) - (q - k) ** 2 * np.exp(1j * q * a)
    return 4 * k * q * np.exp(-1j * k * a) / den


def alternative_transmission(a: float, b: float, k) -> complex:
    """The literature closed form with the three-term denominator (see module docstring)."""
    k = np.asarray(k, dtype=np.complex128)
    q = _q(k, b)
    den = ((-b - k * k + k * q) + (-k * k + k * q) * np.exp(1j * a * q)
           + (b + 2 * k * k + 2 * k * q) * np.exp(-1j * a * q))
    return 4 * k * q * np.exp(-1j * k * a) / den


def born_inverse(a: float, b: float, k):
    """First-order approximation ``1/T ~ 1 - i a b / (2k)``."""
    return 1 - 1j * a * b / (2 * np.asarray(k))


def is_exceptional_by_sine(a: float, b: float, tol: float = 1e-9) -> bool:
    """Zero-energy resonance criterion ``sin(a sqrt b) = 0`` from the plane-wave form."""
    return abs(np.sin(a * np.sqrt(b))) < tol


def is_exceptional_by_alternative(a: float, b: float, tol: float = 1e-9) -> bool:
    """Criterion implied by the alternative form: ``a sqrt b`` a multiple of ``2 pi``."""
    r = (a * np.sqrt(b) / (2 * np.pi)) % 1.0
    return min(r, 1 - r) < tol


@dataclass(frozen=True)
class SquareWellReport:
    a: float
    b: float
    oracle_residual: float
    alternative_deviation: float
    born_residuals: tuple
    born_order: float
    nu: int
    exceptional_by_sine: bool
    exceptional_by_alternative: bool

    def lines(self) -> list[str]:
        return [
            f"square_well a={self.a:.12g} b={self.b:.12g}",
            f"transfer_vs_plane_wave max_abs_diff {self.oracle_residual:.3e}",
            f"transfer_vs_alternative_form max_abs_diff {self.alternative_deviation:.3e} "
            f"({'DEVIATES' if self.alternative_deviation > 1e-6 else 'agrees'})",
            "born_thin_well residuals " + " ".join(f"{r:.3e}" for r in self.born_residuals)
            + f" observed_order {self.born_order:.2f}",
            f"genericity nu={self.nu} sine_criterion={self.exceptional_by_sine} "
            f"two_pi_criterion={self.exceptional_by_alternative}",
        ]


def square_well_report(a: float, b: float, ks: Sequence[float] | None = None,
                       born_k: float = 3.0, born_widths: Sequence[float] = (0.04, 0.02, 0.01)
                       ) -> SquareWellReport:
    """Compare transfer-matrix data of a square well with both closed forms.

    The Born check keeps the depth ``b`` and shrinks the width, so the
    first-order term ``a b / 2k`` is small and the residual must fall like
    ``a^2``.
    """
    ks = np.linspace(0.1, 10, 20) if ks is None else np.asarray(ks, dtype=float)
    p = square_well_potential(a, b)
    t_transfer = np.array([transmission(p, k)[0][0, 0] for k in ks])
    oracle = float(np.max(np.abs(t_transfer - plane_wave_transmission(a, b, ks))))
    alt = float(np.max(np.abs(t_transfer - alternative_transmission(a, b, ks))))
    born = []
    for w in born_widths:
        t = transmission(square_well_potential(w, b), born_k)[0][0, 0]
        born.append(float(abs(1 / t - born_inverse(w, b, born_k))))
    order = float(np.polyfit(np.log(born_widths), np.log(born), 1)[0])
    return SquareWellReport(a, b, oracle, alt, tuple(born), order, genericity_degree(p),
                            is_exceptional_by_sine(a, b), is_exceptional_by_alternative(a, b))
