"""Transition matrices and the composition of fragment scattering data.

For a potential split into adjacent fragments, the ``2n x 2n`` transition
matrix ``Lambda`` of the whole potential is the left-to-right product of the
fragment matrices, and ``Sigma`` (its inverse) is the product in reverse
order.  Both are assembled from coefficients at ``k`` and ``-k``.  The
four coefficients of a two-fragment potential can also be composed directly
from the fragment coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import MixedKind, MixedWavenumber, Singular, SingularCoupling, ZeroWavenumber
from .jost import ScatteringData, scattering_data
from .matrixcore import block, dagger, lu_det, lu_inverse, spectral_norm
from .potential import PiecewisePotential, fragment_at, shift

LAMBDA = "Lambda"
SIGMA = "Sigma"
COUPLING_LIMIT = 1e12


@dataclass(frozen=True)
class TransitionMatrix:
    """A ``2n x 2n`` transition matrix of kind ``"Lambda"`` or ``"Sigma"`` at real ``k``."""

    kind: str
    k: float
    matrix: np.ndarray

    def __post_init__(self):
        if self.kind not in (LAMBDA, SIGMA):
            raise ValueError(f"unknown transition kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def det(self) -> complex:
        return lu_det(self.matrix)


def _check_pair(d_plus: ScatteringData, d_minus: ScatteringData) -> float:
    k = float(np.real(d_plus.k))
    if k == 0:
        raise ZeroWavenumber("transition matrices are undefined at k = 0")
    if not np.isclose(np.real(d_minus.k), -k, rtol=1e-14, atol=0):
        raise MixedWavenumber(f"expected data at k={k} and k={-k}, got {d_minus.k}")
    return k


def build_lambda(d_plus: ScatteringData, d_minus: ScatteringData) -> TransitionMatrix:
    """``Lambda(k)`` from left coefficients at ``k`` and ``-k``."""
    k = _check_pair(d_plus, d_minus)
    a = lu_inverse(d_plus.Tl)
    d = lu_inverse(d_minus.Tl)
    m = block(a, d_minus.L @ d, d_plus.L @ a, d)
    return TransitionMatrix(LAMBDA, k, m)


def build_sigma(d_plus: ScatteringData, d_minus: ScatteringData) -> TransitionMatrix:
    """``Sigma(k)`` from right coefficients at ``k`` and ``-k``."""
    k = _check_pair(d_plus, d_minus)
    a = lu_inverse(d_minus.Tr)
    d = lu_inverse(d_plus.Tr)
    m = block(a, d_plus.R @ d, d_minus.R @ a, d)
    return TransitionMatrix(SIGMA, k, m)


def compose(transitions: Sequence[TransitionMatrix]) -> TransitionMatrix:
    """Transition matrix of the concatenated potential.

    ``transitions`` is in spatial order, left to right.  ``Lambda`` factors
    multiply in that order and ``Sigma`` factors in reverse.
    """
    if not transitions:
        raise ValueError("nothing to compose")
    kind, k = transitions[0].kind, transitions[0].k
    for t in transitions[1:]:
        if t.kind != kind:
            raise MixedKind(f"cannot compose {kind} with {t.kind}")
        if t.k != k:
            raise MixedWavenumber(f"cannot compose k={k} with k={t.k}")
    seq = transitions if kind == LAMBDA else list(reversed(transitions))
    m = seq[0].matrix
    for t in seq[1:]:
        m = m @ t.matrix
    return TransitionMatrix(kind, k, m)


def shift_transition(t: TransitionMatrix, b: float) -> TransitionMatrix:
    """Transition matrix of the potential ``V(x + b)``: conjugation by ``diag(e^{ikb}, e^{-ikb})``."""
    n = t.n
    ph = np.concatenate([np.full(n, np.exp(1j * t.k * b)), np.full(n, np.exp(-1j * t.k * b))])
    return TransitionMatrix(t.kind, t.k, (ph[:, None] * t.matrix) / ph[None, :])


def data_pair(p: PiecewisePotential, k: float) -> tuple[ScatteringData, ScatteringData]:
    return scattering_data(p, k), scattering_data(p, -k)


def transitions_of(p: PiecewisePotential, k: float) -> tuple[TransitionMatrix, TransitionMatrix]:
    """``(Lambda, Sigma)`` of a potential at real ``k``."""
    dp, dm = data_pair(p, k)
    return build_lambda(dp, dm), build_sigma(dp, dm)


def fragment_transitions(p: PiecewisePotential, cuts: Sequence[float], k: float):
    """Per-fragment ``(Lambda_j, Sigma_j)`` lists after cutting ``p`` at ``cuts``."""
    lams, sigs = [], []
    for piece in fragment_at(p, cuts):
        lam, sig = transitions_of(piece, k)
        lams.append(lam)
        sigs.append(sig)
    return lams, sigs


def shifted_factorization(p: PiecewisePotential, cut: float, k: float) -> TransitionMatrix:
    """``Lambda`` of ``p`` via fragments translated so that the cut sits at the origin.

    Each fragment is shifted by ``cut``, its transition matrix computed
    there, the product formed, and the result shifted back.
    """
    left, right = fragment_at(p, [cut])
    lam1 = transitions_of(shift(left, cut), k)[0]
    lam2 = transitions_of(shift(right, cut), k)[0]
    return shift_transition(compose([lam1, lam2]), -cut)


def _coupling_inverse(m: np.ndarray) -> np.ndarray:
    try:
        inv = lu_inverse(m)
    except Singular as exc:
        raise SingularCoupling(str(exc)) from exc
    norm = spectral_norm(inv)
    if norm > COUPLING_LIMIT:
        raise SingularCoupling(f"coupling inverse norm {norm:.3e} exceeds {COUPLING_LIMIT:.0e}")
    return inv


def compose_scattering(left: tuple[ScatteringData, ScatteringData],
                       right: tuple[ScatteringData, ScatteringData]) -> ScatteringData:
    """Coefficients of the concatenation of two fragments.

    Parameters
    ----------
    left, right : tuple of ScatteringData
        Data of the left and right fragment at ``(k, -k)``.

    Returns
    -------
    ScatteringData
        Whole-potential coefficients at ``k``.

    Raises
    ------
    SingularCoupling
        If ``I - R_1 L_2`` is numerically singular.
    """
    d1, d1m = left
    d2, d2m = right
    k = _check_pair(d1, d1m)
    if _check_pair(d2, d2m) != k:
        raise MixedWavenumber("fragments evaluated at different k")
    eye = np.eye(d1.n, dtype=np.complex128)
    m_left = _coupling_inverse(eye - d1.R @ d2.L)
    m_right = _coupling_inverse(eye - d2.L @ d1.R)
    tr1m_h = dagger(d1m.Tr)
    tl2m_h = dagger(d2m.Tl)
    Tl = d2.Tl @ m_left @ tr1m_h
    L = lu_inverse(dagger(d1.Tr)) @ (d2.L - d1m.R) @ m_left @ tr1m_h
    Tr = d1.Tr @ m_right @ tl2m_h
    R = d2.Tl @ m_left @ (d1.R - d2m.L) @ lu_inverse(d2m.Tl)
    return ScatteringData(k, Tl, Tr, L, R)


def composed_scattering_data(p: PiecewisePotential, cut: float, k: float) -> ScatteringData:
    """Whole-potential coefficients at real ``k`` by composing the pieces left and right of ``cut``."""
    left, right = fragment_at(p, [cut])
    return compose_scattering(data_pair(left, k), data_pair(right, k))
