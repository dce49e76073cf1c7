"""Bound states, genericity degree, Levinson phase balance and the half-line map.

Bound states sit at ``k = i kappa`` where ``det T_l(k)^{-1}`` vanishes.  On
the imaginary axis this determinant is real, so zeros are found from sign
changes on a logarithmic grid followed by bisection, and their order is
read from the winding number of the determinant around a small circle.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BracketingFailure, NonRealDeterminant, PhaseJump, ZeroWavenumber
from .analysis import assemble_S, involution_constants
from .jost import jost_left, jost_right, left_state, physical_solutions, richardson, scattering_data
from .matrixcore import block, dagger, frobenius, lu_det, lu_inverse, singular_values
from .potential import PiecewisePotential, build_halfline

SCAN_NODES = 2000
SCAN_KAPPA_MIN = 1e-6
WINDING_NODES = 64
REALITY_RTOL = 1e-9
NU_RTOL = 1e-6
NU_ABS = 1e-10
PHASE_STEP = np.pi / 2
MAX_REFINE_DEPTH = 12


@dataclass(frozen=True)
class SpectralReport:
    """Bound-state and Levinson summary.

    ``kappas`` are increasing, ``multiplicities`` are the orders of the
    zeros of ``det T_l^{-1}``, ``N`` counts distinct bound states and
    ``Ntot`` counts them with multiplicity.  Levinson fields are filled by
    :func:`levinson_check`.
    """

    kappas: tuple = ()
    multiplicities: tuple = ()
    nu: int | None = None
    levinson_lhs: float | None = None
    levinson_rhs: float | None = None
    levinson_count: int | None = None
    n: int | None = None

    @property
    def N(self) -> int:
        return len(self.kappas)

    @property
    def Ntot(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def residual(self) -> float | None:
        if self.levinson_lhs is None or self.levinson_rhs is None:
            return None
        return abs(self.levinson_lhs - self.levinson_rhs)

    def lines(self) -> list[str]:
        out = [f"N {self.N}", f"Ntot {self.Ntot}"]
        for kap, m in zip(self.kappas, self.multiplicities):
            out.append(f"kappa {format(kap, '.12g')} multiplicity {m}")
        if self.nu is not None:
            out.append(f"nu {self.nu}")
        if self.levinson_lhs is not None:
            out += [f"levinson_lhs {self.levinson_lhs:.12g}",
                    f"levinson_rhs {self.levinson_rhs:.12g}",
                    f"levinson_residual {self.residual:.3e}",
                    f"levinson_count {self.levinson_count}"]
        return out


def det_Tl_inv(p: PiecewisePotential, k) -> complex:
    """``det T_l(k)^{-1}`` at complex ``k != 0``."""
    return lu_det(jost_left(p, k)[1])


def det_Tl_inv_imag_axis(p: PiecewisePotential, kappa: float, rtol: float = REALITY_RTOL,
                         allow_negative: bool = False) -> float:
    """``det T_l(i kappa)^{-1}``, which is real on the imaginary axis.

    Raises
    ------
    NonRealDeterminant
        If the imaginary part exceeds ``rtol`` relative to ``||T_l^{-1}||_F ** n``.
    """
    if kappa <= 0 and not allow_negative:
        raise ValueError("kappa must be positive")
    if kappa == 0:
        raise ZeroWavenumber("kappa = 0 is the threshold, not a bound state")
    tli = jost_left(p, 1j * kappa)[1]
    d = lu_det(tli)
    scale = max(1.0, frobenius(tli) ** p.n)
    if abs(d.imag) > rtol * scale:
        raise NonRealDeterminant(
            f"imaginary part {d.imag:.3e} of det T_l^-1 at kappa={kappa} (scale {scale:.3e})")
    return float(d.real)


def winding_number(p: PiecewisePotential, center: complex, radius: float,
                   nodes: int = WINDING_NODES) -> int:
    """Number of zeros of ``det T_l^{-1}`` inside a circle, by phase accumulation."""
    theta = 2 * np.pi * np.arange(nodes + 1) / nodes
    vals = np.array([det_Tl_inv(p, center + radius * np.exp(1j * t)) for t in theta])
    steps = np.angle(vals[1:] / vals[:-1])
    return int(round(float(np.sum(steps)) / (2 * np.pi)))


def default_kappa_max(p: PiecewisePotential) -> float:
    return float(np.sqrt(abs(min(p.most_negative_eigenvalue(), 0.0)))) + 1.0


def _bisect(f, a, b, fa, tol):
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0:
            return m
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _golden_min(f, a, b, tol):
    g = (np.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _circle_radius(kappa, tol):
    return min(max(1e-4, 10 * tol), kappa / 2)


def bound_states(p: PiecewisePotential, kappa_max: float | None = None, tol: float = 1e-10,
                 nodes: int = SCAN_NODES) -> SpectralReport:
    """Locate bound states ``k = i kappa`` with ``0 < kappa < kappa_max``.

    Odd-order zeros of the determinant are bracketed by sign changes;
    even-order zeros are caught as near-zero local minima of its modulus and
    kept only if the winding number confirms them.

    Raises
    ------
    BracketingFailure
        If a sign change does not enclose an odd number of zeros.
    """
    if p.is_free:
        return SpectralReport(n=p.n)
    kappa_max = default_kappa_max(p) if kappa_max is None else float(kappa_max)
    grid = np.geomspace(SCAN_KAPPA_MIN, kappa_max, nodes)
    f = lambda kap: det_Tl_inv_imag_axis(p, kap)
    vals = np.array([f(kap) for kap in grid])
    found = []
    for i in range(nodes - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0:
            found.append((a, True))
        elif np.sign(fa) != np.sign(fb) and fb != 0:
            found.append((_bisect(f, a, b, fa, tol), True))
    mags = np.abs(vals)
    for i in range(1, nodes - 1):
        if mags[i] < mags[i - 1] and mags[i] <= mags[i + 1] and np.sign(vals[i - 1]) == np.sign(vals[i + 1]):
            kap = _golden_min(lambda x: abs(f(x)), grid[i - 1], grid[i + 1], tol)
            if abs(f(kap)) < 1e-6 * max(mags[i - 1], mags[i + 1]):
                found.append((kap, False))
    kappas, mults = [], []
    for kap, odd in sorted(found):
        if kappas and kap - kappas[-1] < 2 * tol:
            continue
        m = winding_number(p, 1j * kap, _circle_radius(kap, tol))
        if odd and m % 2 == 0:
            raise BracketingFailure(
                f"sign change near kappa={kap:.6g} has winding {m}; refine the grid")
        if not odd and (m <= 0 or m % 2):
            continue
        kappas.append(float(kap))
        mults.append(int(m))
    return SpectralReport(tuple(kappas), tuple(mults), n=p.n)


def delta_left(p: PiecewisePotential, method: str = "exact") -> np.ndarray:
    """Zero-energy limit of ``2ik T_l(k)^{-1}``.

    ``method="exact"`` evaluates it as the derivative of the zero-energy left
    Jost solution at the left support edge.  ``method="richardson"``
    extrapolates ``2ik T_l(k)^{-1}`` from ``k = i eps {1, 2, 4}``.
    """
    if method == "exact":
        return left_state(p, 0.0, p.support[0]).derivative
    if method == "richardson":
        return np.real_if_close(richardson(lambda e: -2 * e * jost_left(p, 1j * e)[1]))
    raise ValueError(f"unknown method {method!r}")


def delta_right(p: PiecewisePotential, method: str = "exact") -> np.ndarray:
    """Zero-energy limit of ``2ik T_r(k)^{-1}``."""
    if method == "exact":
        from .jost import right_state
        return -right_state(p, 0.0, p.support[1]).derivative
    if method == "richardson":
        return np.real_if_close(richardson(lambda e: -2 * e * jost_right(p, 1j * e)[1]))
    raise ValueError(f"unknown method {method!r}")


def genericity_degree(p: PiecewisePotential, rtol: float = NU_RTOL, method: str = "exact") -> int:
    """Number of linearly independent bounded zero-energy solutions, ``0 <= nu <= n``.

    Counts singular values of the zero-energy limit of ``2ik T_l^{-1}``
    below ``rtol`` times the largest one.
    """
    delta = np.asarray(delta_left(p, method), dtype=np.complex128)
    sv = singular_values(delta)
    if sv[0] < NU_ABS:
        return p.n
    return int(np.sum(sv < rtol * sv[0]))


def threshold_exponent(p: PiecewisePotential, eps: Sequence[float] | None = None) -> float:
    """Slope of ``log|det T_l(i eps)|`` against ``log eps`` for small ``eps``."""
    eps = np.geomspace(1e-6, 1e-5, 8) if eps is None else np.asarray(eps, dtype=float)
    y = [-np.log(abs(det_Tl_inv(p, 1j * e))) for e in eps]
    return float(np.polyfit(np.log(eps), y, 1)[0])


def _phase_increment(f, k0, k1, v0, v1, depth):
    step = float(np.angle(v1 / v0))
    if abs(step) < PHASE_STEP:
        return step
    if depth >= MAX_REFINE_DEPTH:
        raise PhaseJump(f"phase step {step:.3f} rad between k={k0:.6g} and k={k1:.6g} "
                        f"after {MAX_REFINE_DEPTH} refinements")
    km = np.sqrt(k0 * k1)
    vm = f(km)
    return (_phase_increment(f, k0, km, v0, vm, depth + 1)
            + _phase_increment(f, km, k1, vm, v1, depth + 1))


def unwrapped_phase(p: PiecewisePotential, ks: Sequence[float]) -> np.ndarray:
    """Continuous ``arg det T_l(k)`` along the path ``ks``, anchored at the principal value at ``ks[0]``."""
    f = lambda k: 1.0 / det_Tl_inv(p, k)
    vals = [f(k) for k in ks]
    phase = [float(np.angle(vals[0]))]
    for i in range(len(ks) - 1):
        phase.append(phase[-1] + _phase_increment(f, ks[i], ks[i + 1], vals[i], vals[i + 1], 0))
    return np.array(phase)


def levinson_check(p: PiecewisePotential, k_min: float | None = None, k_max: float = 1e3,
                   nodes: int = 400, report: SpectralReport | None = None,
                   kappa_max: float | None = None) -> SpectralReport:
    """Compare the winding of ``arg det S`` with ``pi (2 Ntot - n + nu)``.

    The phase of ``det S = (det T_l)^2 / |det T_l|^2`` is tracked from
    ``k_max`` (where the principal branch is continuous with the value 0 at
    infinity) down to small ``k``.  Its value at ``0+`` is extrapolated from
    ``k_min {1, 2, 4}``; ``k_min`` defaults to ``min(1e-3, kappa_1 / 100)``
    and is halved until successive extrapolations agree.
    """
    if report is None:
        report = bound_states(p, kappa_max)
    nu = genericity_degree(p)
    if k_min is None:
        k_min = 1e-3 if not report.kappas else min(1e-3, 0.01 * report.kappas[0])
    grid = np.geomspace(k_max, k_min, nodes)
    end_phase = unwrapped_phase(p, grid)[-1]
    prev = lhs = None
    kk = k_min
    for _ in range(30):
        ph = unwrapped_phase(p, [grid[-1], 4 * kk, 2 * kk, kk])
        ph = ph - ph[0] + end_phase
        lhs = 2.0 * (8 * ph[3] - 6 * ph[2] + ph[1]) / 3
        if prev is not None and abs(lhs - prev) < 1e-6:
            break
        prev = lhs
        kk /= 2
    rhs = np.pi * (2 * report.Ntot - p.n + nu)
    count = int(round((lhs / np.pi + p.n - nu) / 2))
    return dataclasses.replace(report, nu=nu, levinson_lhs=lhs, levinson_rhs=float(rhs),
                               levinson_count=count, n=p.n)


# --- half-line correspondence ------------------------------------------------

def boundary_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The boundary pair ``A = [[0, I], [0, I]]`` and ``B = [[-I, 0], [I, 0]]``."""
    eye = np.eye(n, dtype=np.complex128)
    zero = np.zeros((n, n), dtype=np.complex128)
    return block(zero, eye, zero, eye), block(-eye, zero, eye, zero)


@dataclass(frozen=True)
class HalfLineData:
    """Half-line Jost matrix and scattering matrix at one ``k`` with consistency residuals."""

    k: complex
    jost: np.ndarray
    S_half: np.ndarray
    jost_inverse: np.ndarray | None = None
    residuals: dict = dataclasses.field(default_factory=dict)


def _jost_matrix_from_states(fl, flp, fr, frp) -> np.ndarray:
    """Jost matrix from full-line Jost data at ``-conj(k)`` and ``x = 0``."""
    H = dagger
    return block(-H(fl), -H(flp), H(fr), H(frp))


def jost_matrix(p: PiecewisePotential, k) -> np.ndarray:
    """Half-line Jost matrix from full-line Jost solutions at ``x = 0``."""
    from .jost import right_state
    km = -np.conj(complex(k))
    fl = left_state(p, km, 0.0)
    fr = right_state(p, km, 0.0)
    return _jost_matrix_from_states(fl.value, fl.derivative, fr.value, fr.derivative)


def jost_matrix_direct(p: PiecewisePotential, k) -> np.ndarray:
    """Half-line Jost matrix from the folded ``2n x 2n`` potential itself."""
    n = p.n
    a, b = boundary_matrices(n)
    hp = build_halfline(p, 0.0).as_block_potential()
    st = left_state(hp, -np.conj(complex(k)), 0.0)
    return dagger(st.value) @ b - dagger(st.derivative) @ a


def jost_matrix_inverse(p: PiecewisePotential, k: float) -> np.ndarray:
    """Closed-form inverse of the Jost matrix at real ``k != 0``."""
    from .jost import right_state
    d = scattering_data(p, k)
    fl = left_state(p, k, 0.0)
    fr = right_state(p, k, 0.0)
    zero = np.zeros((p.n, p.n), dtype=np.complex128)
    core = block(fr.derivative, fl.derivative, -fr.value, -fl.value)
    return core @ block(d.Tr, zero, zero, d.Tl) / (2j * k)


def halfline_map(p: PiecewisePotential, k: float, with_inverse: bool = True) -> HalfLineData:
    """Half-line Jost matrix and scattering matrix at real ``k != 0``.

    ``S_half = -J(-k) J(k)^{-1}`` is compared with ``S Q``; determinant and
    unitarity relations and the agreement of the two Jost-matrix routes are
    recorded in ``residuals``.
    """
    k = float(k)
    if k == 0:
        raise ZeroWavenumber("half-line scattering matrix undefined at k = 0")
    n = p.n
    jk = jost_matrix(p, k)
    jmk = jost_matrix(p, -k)
    jk_inv = lu_inverse(jk)
    s_half = -jmk @ jk_inv
    d = scattering_data(p, k)
    s = assemble_S(d)
    _, q = involution_constants(n)
    det_tl = lu_det(d.Tl)
    det_s = lu_det(s)
    ref_det = (2j * k) ** n
    res = {
        "S_half_equals_SQ": frobenius(s_half - s @ q) / max(1.0, frobenius(s)),
        "det_jost_times_det_Tl": abs(lu_det(jk) * det_tl - ref_det) / abs(ref_det),
        "det_S_half_sign": abs(lu_det(s_half) - (-1) ** n * det_s),
        "det_S_half_phase": abs(lu_det(s_half) - (-1) ** n * det_tl / np.conj(det_tl)),
        "S_half_unitarity": frobenius(dagger(s_half) @ s_half - np.eye(2 * n)),
        "jost_direct_route": frobenius(jost_matrix_direct(p, k) - jk) / max(1.0, frobenius(jk)),
    }
    inv = None
    if with_inverse:
        inv = jost_matrix_inverse(p, k)
        res["jost_inverse_formula"] = frobenius(jk @ inv - np.eye(2 * n))
    return HalfLineData(k, jk, s_half, inv, res)


@dataclass(frozen=True)
class HalfLinePhysical:
    """Half-line physical solution samples (shape ``(len(x), 2n, 2n)``) and checks."""

    k: float
    x: np.ndarray
    value: np.ndarray
    derivative: np.ndarray
    boundary_residual: float
    jost_form_residual: float


def halfline_physical(p: PiecewisePotential, k: float, x_samples: Sequence[float]) -> HalfLinePhysical:
    """Assemble ``[[Psi_r(x), Psi_l(x)], [Psi_r(-x), Psi_l(-x)]]`` for ``x >= 0``.

    Also checks the boundary condition ``-B^dagger Psi(0) + A^dagger Psi'(0) = 0``
    and the representation ``Psi = f(-k, x) + f(k, x) S_half`` through the
    folded Jost solution ``diag(f_l(k, x), f_r(k, -x))``.
    """
    from .jost import right_state
    xs = np.asarray(x_samples, dtype=float).ravel()
    if np.any(xs < 0):
        raise ValueError("half-line samples must be nonnegative")
    n = p.n
    d = scattering_data(p, k)
    pos = physical_solutions(p, k, xs, d)
    neg = physical_solutions(p, k, -xs, d)
    val = np.array([block(pos.psi_r[i], pos.psi_l[i], neg.psi_r[i], neg.psi_l[i])
                    for i in range(len(xs))])
    der = np.array([block(pos.dpsi_r[i], pos.dpsi_l[i], -neg.dpsi_r[i], -neg.dpsi_l[i])
                    for i in range(len(xs))])
    a, b = boundary_matrices(n)
    zero_phys = physical_solutions(p, k, [0.0], d)
    v0 = block(zero_phys.psi_r[0], zero_phys.psi_l[0], zero_phys.psi_r[0], zero_phys.psi_l[0])
    d0 = block(zero_phys.dpsi_r[0], zero_phys.dpsi_l[0], -zero_phys.dpsi_r[0], -zero_phys.dpsi_l[0])
    bres = frobenius(-dagger(b) @ v0 + dagger(a) @ d0)
    s_half = assemble_S(d) @ involution_constants(n)[1]
    z = np.zeros((n, n), dtype=np.complex128)
    worst = 0.0
    for i, x in enumerate(xs):
        fk = block(left_state(p, k, x).value, z, z, right_state(p, k, -x).value)
        fmk = block(left_state(p, -k, x).value, z, z, right_state(p, -k, -x).value)
        worst = max(worst, frobenius(fmk + fk @ s_half - val[i]) / max(1.0, frobenius(val[i])))
    return HalfLinePhysical(float(k), xs, val, der, bres, worst)
