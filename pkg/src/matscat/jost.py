"""Jost solutions and matrix scattering coefficients by exact transfer matrices.

On each interval where the potential is a constant Hermitian matrix the
first-order system ``d/dx [psi; psi'] = [[0, I], [V - k^2, 0]] [psi; psi']``
is solved in closed form in the eigenbasis of the matrix.  The blocks
``cos(w d)`` and ``sin(w d) / w`` with ``w^2 = k^2 - lambda`` are even in
``w``, so they are evaluated as functions of ``z = w^2 d^2`` and no square
root branch ever has to be chosen.  Outside the support the potential is
exactly zero, so the plane-wave forms of the Jost solutions hold there
without truncation error and the coefficients are read off at the support
edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ShapeMismatch, ZeroWavenumber
from .matrixcore import HermEigDecomposition, herm_eig, lu_inverse
from .potential import Fragment, PiecewisePotential

SERIES_CUTOFF = 1e-8  # on |z| = |w d|^2, i.e. |w d| < 1e-4


@dataclass(frozen=True)
class SolutionState:
    """Matrix solution value and derivative at a point."""

    k: complex
    x: float
    value: np.ndarray
    derivative: np.ndarray

    def __post_init__(self):
        if np.shape(self.value) != np.shape(self.derivative):
            raise ShapeMismatch("value and derivative must have equal shapes")

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack([self.value, self.derivative])

    @classmethod
    def from_stacked(cls, k, x, y) -> "SolutionState":
        n = y.shape[0] // 2
        return cls(k, x, y[:n], y[n:])


@dataclass(frozen=True)
class ScatteringData:
    """Transmission and reflection coefficients at one wavenumber."""

    k: complex
    Tl: np.ndarray
    Tr: np.ndarray
    L: np.ndarray
    R: np.ndarray

    @property
    def n(self) -> int:
        return self.Tl.shape[0]

    @classmethod
    def free(cls, n: int, k) -> "ScatteringData":
        eye = np.eye(n, dtype=np.complex128)
        zero = np.zeros((n, n), dtype=np.complex128)
        return cls(k, eye, eye.copy(), zero, zero.copy())


def _even_trig(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``cos(sqrt z)`` and ``sin(sqrt z)/sqrt z`` elementwise, branch-free."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < SERIES_CUTOFF
    s = np.sqrt(np.where(small, 1.0, z))
    c = np.where(small, 1 - z / 2 + z * z / 24, np.cos(s))
    sinc = np.where(small, 1 - z / 6 + z * z / 120, np.sin(s) / s)
    return c, sinc


def _propagator_from_eig(eig: HermEigDecomposition | None, n: int, d: float, k) -> np.ndarray:
    if d == 0:
        return np.eye(2 * n, dtype=np.complex128)
    k = complex(k)
    lam = np.zeros(n) if eig is None else eig.eigenvalues
    w2 = k * k - lam
    c, sinc = _even_trig(w2 * d * d)
    s = d * sinc          # sin(w d) / w
    ws = -w2 * s          # -w sin(w d)
    if eig is None:
        blocks = [np.diag(c), np.diag(s), np.diag(ws)]
    else:
        u = eig.eigenvectors
        ud = u.conj().T
        blocks = [(u * v) @ ud for v in (c, s, ws)]
    cm, sm, wsm = blocks
    return np.block([[cm, sm], [wsm, cm]])


def fragment_propagator(Vc, d: float, k, eig: HermEigDecomposition | None = None) -> np.ndarray:
    """Transfer matrix across a constant-potential interval of length ``d``.

    Returns ``P`` with ``[psi(x + d); psi'(x + d)] = P [psi(x); psi'(x)]``.
    Negative ``d`` propagates backwards and gives the inverse of the
    forward propagator.

    Parameters
    ----------
    Vc : array_like
        Constant Hermitian n x n matrix.
    d : float
        Interval length.
    k : complex
        Wavenumber; any complex value is allowed.
    eig : HermEigDecomposition, optional
        Precomputed eigendecomposition of ``Vc``.
    """
    Vc = np.atleast_2d(np.asarray(Vc, dtype=np.complex128))
    n = Vc.shape[0]
    if eig is None and np.any(Vc):
        eig = herm_eig(Vc)
    return _propagator_from_eig(eig, n, float(d), k)


def _segments(p: PiecewisePotential, x0: float, x1: float):
    """Constant pieces ``(lo, hi, fragment or None)`` covering ``[min, max]`` of x0, x1."""
    lo, hi = min(x0, x1), max(x0, x1)
    out = []
    pos = lo
    for f in p.fragments:
        if f.x_max <= lo or f.x_min >= hi:
            continue
        a, b = max(f.x_min, lo), min(f.x_max, hi)
        if a > pos:
            out.append((pos, a, None))
        out.append((a, b, f))
        pos = b
    if pos < hi:
        out.append((pos, hi, None))
    return out


def _segment_propagator(n: int, frag: Fragment | None, d: float, k) -> np.ndarray:
    if frag is None or not np.any(frag.matrix):
        return _propagator_from_eig(None, n, d, k)
    return _propagator_from_eig(frag.eig, n, d, k)


def transfer_matrix(p: PiecewisePotential, k, x0: float, x1: float) -> np.ndarray:
    """Transfer matrix carrying ``[psi; psi']`` from ``x0`` to ``x1`` (either direction)."""
    n = p.n
    m = np.eye(2 * n, dtype=np.complex128)
    segs = _segments(p, x0, x1)
    if x1 >= x0:
        for a, b, f in segs:
            m = _segment_propagator(n, f, b - a, k) @ m
    else:
        for a, b, f in reversed(segs):
            m = _segment_propagator(n, f, a - b, k) @ m
    return m


def propagate(p: PiecewisePotential, state: SolutionState, x1: float) -> SolutionState:
    y = transfer_matrix(p, state.k, state.x, x1) @ state.stacked
    return SolutionState.from_stacked(state.k, float(x1), y)


def left_state(p: PiecewisePotential, k, x: float) -> SolutionState:
    """Left Jost solution ``f_l(k, x)`` and its derivative; any complex ``k``."""
    k = complex(k)
    eye = np.eye(p.n, dtype=np.complex128)
    xb = p.support[1]
    anchor = max(xb, x)
    e = np.exp(1j * k * anchor)
    start = SolutionState(k, anchor, e * eye, 1j * k * e * eye)
    return start if x >= xb else propagate(p, start, x)


def right_state(p: PiecewisePotential, k, x: float) -> SolutionState:
    """Right Jost solution ``f_r(k, x)`` and its derivative; any complex ``k``."""
    k = complex(k)
    eye = np.eye(p.n, dtype=np.complex128)
    xa = p.support[0]
    anchor = min(xa, x)
    e = np.exp(-1j * k * anchor)
    start = SolutionState(k, anchor, e * eye, -1j * k * e * eye)
    return start if x <= xa else propagate(p, start, x)


def _over_ik(m: np.ndarray, k: complex) -> np.ndarray:
    """``m / (ik)``, correctly rounded componentwise when ``k`` is real."""
    if k.imag == 0:
        return m.imag / k.real - 1j * (m.real / k.real)
    return m / (1j * k)


def jost_left(p: PiecewisePotential, k):
    """Left Jost solution at the left support edge and its coefficient blocks.

    Returns
    -------
    state : SolutionState
        ``f_l`` and ``f_l'`` at ``x_a``.
    Tl_inv, LTl_inv : ndarray
        ``T_l(k)^{-1}`` and ``L(k) T_l(k)^{-1}``.  ``LTl_inv`` is only
        meaningful for real ``k``.
    """
    k = complex(k)
    if k == 0:
        raise ZeroWavenumber("coefficients are undefined at k = 0")
    xa = p.support[0]
    st = left_state(p, k, xa)
    q = _over_ik(st.derivative, k)
    Tl_inv = np.exp(-1j * k * xa) * (st.value + q) / 2
    LTl_inv = np.exp(1j * k * xa) * (st.value - q) / 2
    return st, Tl_inv, LTl_inv


def jost_right(p: PiecewisePotential, k):
    """Right Jost solution at the right support edge, ``T_r^{-1}`` and ``R T_r^{-1}``."""
    k = complex(k)
    if k == 0:
        raise ZeroWavenumber("coefficients are undefined at k = 0")
    xb = p.support[1]
    st = right_state(p, k, xb)
    q = _over_ik(st.derivative, k)
    Tr_inv = np.exp(1j * k * xb) * (st.value - q) / 2
    RTr_inv = np.exp(-1j * k * xb) * (st.value + q) / 2
    return st, Tr_inv, RTr_inv


def transmission_inverses(p: PiecewisePotential, k) -> tuple[np.ndarray, np.ndarray]:
    """``(T_l(k)^{-1}, T_r(k)^{-1})``; valid for complex ``k``."""
    return jost_left(p, k)[1], jost_right(p, k)[1]


def transmission(p: PiecewisePotential, k) -> tuple[np.ndarray, np.ndarray]:
    """``(T_l(k), T_r(k))`` for complex ``k`` away from poles."""
    a, b = transmission_inverses(p, k)
    return lu_inverse(a), lu_inverse(b)


def scattering_data(p: PiecewisePotential, k: float) -> ScatteringData:
    """All four coefficients at real ``k != 0``.

    Raises
    ------
    ZeroWavenumber
        At ``k == 0``.
    Singular
        If a transmission inverse cannot be inverted.
    """
    k = float(np.real(k))
    _, Tl_inv, LTl_inv = jost_left(p, k)
    _, Tr_inv, RTr_inv = jost_right(p, k)
    Tl = lu_inverse(Tl_inv)
    Tr = lu_inverse(Tr_inv)
    return ScatteringData(k, Tl, Tr, LTl_inv @ Tl, RTr_inv @ Tr)


@dataclass(frozen=True)
class PhysicalSolutions:
    """Samples of ``Psi_l = f_l T_l`` and ``Psi_r = f_r T_r`` with derivatives.

    Arrays have shape ``(len(x), n, n)``.
    """

    k: float
    x: np.ndarray
    psi_l: np.ndarray
    dpsi_l: np.ndarray
    psi_r: np.ndarray
    dpsi_r: np.ndarray


def physical_solutions(p: PiecewisePotential, k: float, x_samples: Sequence[float],
                       data: ScatteringData | None = None) -> PhysicalSolutions:
    data = scattering_data(p, k) if data is None else data
    xs = np.asarray(x_samples, dtype=float).ravel()
    out = {name: [] for name in ("pl", "dpl", "pr", "dpr")}
    for x in xs:
        fl = left_state(p, k, x)
        fr = right_state(p, k, x)
        out["pl"].append(fl.value @ data.Tl)
        out["dpl"].append(fl.derivative @ data.Tl)
        out["pr"].append(fr.value @ data.Tr)
        out["dpr"].append(fr.derivative @ data.Tr)
    arr = {key: np.array(v).reshape(len(xs), p.n, p.n) for key, v in out.items()}
    return PhysicalSolutions(float(k), xs, arr["pl"], arr["dpl"], arr["pr"], arr["dpr"])


def ode_oracle(p: PiecewisePotential, k, x0: float, x1: float, initial: SolutionState,
               steps: int) -> SolutionState:
    """Classical fourth-order Runge-Kutta integration of the first-order system.

    Steps are shared among the constant pieces in proportion to their length
    (at least one each) so that no step straddles a discontinuity.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    k = complex(k)
    n = p.n
    y = initial.stacked.astype(np.complex128)
    segs = _segments(p, x0, x1)
    if x1 < x0:
        segs = [(b, a, f) for a, b, f in reversed(segs)]
    total = abs(x1 - x0)
    eye = np.eye(n)
    for a, b, f in segs:
        v = np.zeros((n, n), dtype=np.complex128) if f is None else f.matrix
        gen = np.block([[np.zeros((n, n)), eye], [v - k * k * eye, np.zeros((n, n))]])
        m = max(1, int(round(steps * abs(b - a) / total))) if total > 0 else 1
        h = (b - a) / m
        for _ in range(m):
            k1 = gen @ y
            k2 = gen @ (y + 0.5 * h * k1)
            k3 = gen @ (y + 0.5 * h * k2)
            k4 = gen @ (y + h * k3)
            y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return SolutionState.from_stacked(k, float(x1), y)


def richardson(g: Callable[[float], np.ndarray], eps: float = 1e-4) -> np.ndarray:
    """Limit of ``g(h)`` as ``h -> 0`` from samples at ``eps * {1, 2, 4}``.

    Removes the linear and quadratic error terms.
    """
    return (8 * np.asarray(g(eps)) - 6 * np.asarray(g(2 * eps)) + np.asarray(g(4 * eps))) / 3


def laurent_on_circle(f: Callable[[complex], np.ndarray], radius: float = 0.3,
                      nodes: int = 64, center: complex = 0.0, lowest: int = -1,
                      highest: int = 2) -> dict[int, np.ndarray]:
    """Laurent coefficients of ``f`` about ``center`` by the trapezoid rule on a circle.

    ``f`` must be analytic in the punctured disk.  Returns a dict mapping the
    power to the coefficient array.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    pts = center + radius * np.exp(1j * theta)
    vals = np.array([np.asarray(f(z), dtype=np.complex128) for z in pts])
    out = {}
    for j in range(lowest, highest + 1):
        w = np.exp(-1j * j * theta) / radius ** j
        out[j] = np.tensordot(w, vals, axes=(0, 0)) / nodes
    return out


def laurent_on_real_axis(f: Callable[[float], np.ndarray], radius: float = 0.3,
                         nodes: int = 64, degree: int = 24, lowest: int = -1,
                         highest: int = 2) -> dict[int, np.ndarray]:
    """Laurent coefficients of ``f`` at 0 from real samples only.

    ``k**(-lowest) * f(k)`` is fitted by a polynomial of ``degree`` in
    ``k / radius`` by least squares on Chebyshev points of ``[-radius,
    radius]`` (an even node count keeps ``k = 0`` out).  Suited to functions
    available only for real ``k``, such as those built from reflection
    coefficients.
    """
    if nodes % 2:
        nodes += 1
    t = np.cos(np.pi * (np.arange(nodes) + 0.5) / nodes)
    ks = radius * t
    vals = np.array([np.asarray(f(k), dtype=np.complex128) * k ** (-lowest) for k in ks])
    shape = vals.shape[1:]
    vand = np.vander(t, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vand, vals.reshape(nodes, -1), rcond=None)
    out = {}
    for j in range(lowest, highest + 1):
        out[j] = coef[j - lowest].reshape(shape) / radius ** (j - lowest)
    return out
