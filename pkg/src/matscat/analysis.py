"""Scattering matrix assembly and a battery of numerical identity checks.

Every identity is a named residual function registered in ``IDENTITIES``.
Residuals are normalized by ``max(1, |reference|)`` so they are relative
for large quantities and absolute for small ones.  Identities that depend
on position are evaluated at both support edges and the support midpoint
and the worst value is reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .factorization import build_lambda, build_sigma
from .jost import ScatteringData, SolutionState, left_state, right_state, scattering_data
from .matrixcore import block, dagger, frobenius, lu_det, lu_inverse
from .potential import PiecewisePotential

DEFAULT_TOL = 1e-9


def assemble_S(d: ScatteringData) -> np.ndarray:
    """``S = [[T_l, R], [L, T_r]]``."""
    return block(d.Tl, d.R, d.L, d.Tr)


def involution_constants(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``J = diag(I, -I)`` and ``Q = [[0, I], [I, 0]]`` of size ``2n``."""
    eye = np.eye(n, dtype=np.complex128)
    zero = np.zeros((n, n), dtype=np.complex128)
    return block(eye, zero, zero, -eye), block(zero, eye, eye, zero)


def F_left(fl_k: SolutionState, fl_mk: SolutionState) -> np.ndarray:
    """``[[f_l(k), f_l(-k)], [f_l'(k), f_l'(-k)]]`` at one ``x``."""
    return block(fl_k.value, fl_mk.value, fl_k.derivative, fl_mk.derivative)


def F_right(fr_k: SolutionState, fr_mk: SolutionState) -> np.ndarray:
    """``[[f_r(-k), f_r(k)], [f_r'(-k), f_r'(k)]]`` at one ``x``."""
    return block(fr_mk.value, fr_k.value, fr_mk.derivative, fr_k.derivative)


def G_matrix(fl: SolutionState, fr: SolutionState) -> np.ndarray:
    """``[[f_l(k), f_r(k)], [f_l'(k), f_r'(k)]]`` at one ``x``."""
    return block(fl.value, fr.value, fl.derivative, fr.derivative)


def F_left_inverse(k, fl_k: SolutionState, fl_mk: SolutionState) -> np.ndarray:
    """Closed-form inverse of :func:`F_left` for real ``k != 0``."""
    H = dagger
    return block(-H(fl_k.derivative), H(fl_k.value),
                 H(fl_mk.derivative), -H(fl_mk.value)) / (2j * k)


def F_right_inverse(k, fr_k: SolutionState, fr_mk: SolutionState) -> np.ndarray:
    """Closed-form inverse of :func:`F_right` for real ``k != 0``."""
    H = dagger
    return block(-H(fr_mk.derivative), H(fr_mk.value),
                 H(fr_k.derivative), -H(fr_k.value)) / (2j * k)


def G_inverse(k, d: ScatteringData, fl_mk: SolutionState, fr_mk: SolutionState) -> np.ndarray:
    """Closed-form inverse of :func:`G_matrix` from the Jost solutions at ``-k``."""
    H = dagger
    n = d.n
    zero = np.zeros((n, n), dtype=np.complex128)
    core = block(H(fr_mk.derivative), -H(fr_mk.value), -H(fl_mk.derivative), H(fl_mk.value))
    return -block(d.Tl, zero, zero, d.Tr) @ core / (2j * k)


def wronskian(f: SolutionState, g: SolutionState) -> np.ndarray:
    """``[f^dagger; g] = f^dagger g' - f'^dagger g``."""
    return dagger(f.value) @ g.derivative - dagger(f.derivative) @ g.value


def _rel(a, ref) -> float:
    a = np.asarray(a)
    ref = np.asarray(ref)
    if a.ndim == 0:
        return float(abs(a - ref) / max(1.0, abs(ref)))
    return frobenius(a - ref) / max(1.0, frobenius(ref))


@dataclass
class IdentityContext:
    """Everything the residual functions need at one wavenumber."""

    p: PiecewisePotential | None
    k: float
    d: ScatteringData
    dm: ScatteringData
    xs: tuple = ()
    fl: list = field(default_factory=list)
    flm: list = field(default_factory=list)
    fr: list = field(default_factory=list)
    frm: list = field(default_factory=list)

    @classmethod
    def build(cls, p: PiecewisePotential, k: float) -> "IdentityContext":
        xa, xb = p.support
        xs = (xa, 0.5 * (xa + xb), xb)
        ctx = cls(p, k, scattering_data(p, k), scattering_data(p, -k), xs)
        for x in xs:
            ctx.fl.append(left_state(p, k, x))
            ctx.flm.append(left_state(p, -k, x))
            ctx.fr.append(right_state(p, k, x))
            ctx.frm.append(right_state(p, -k, x))
        return ctx

    @property
    def n(self) -> int:
        return self.d.n

    def over_x(self, func) -> float:
        return max(func(i) for i in range(len(self.xs)))


@dataclass(frozen=True)
class Identity:
    name: str
    residual: Callable[[IdentityContext], float]
    needs_states: bool = True
    applies: Callable[[PiecewisePotential], bool] = lambda p: True


IDENTITIES: list[Identity] = []


def identity(name, needs_states=True, applies=None):
    def register(func):
        IDENTITIES.append(Identity(name, func, needs_states, applies or (lambda p: True)))
        return func
    return register


def _eye(ctx):
    return np.eye(ctx.n, dtype=np.complex128)


# --- coefficient-only identities ---------------------------------------------

@identity("unitarity_SdagS", needs_states=False)
def _unitarity(ctx):
    s = assemble_S(ctx.d)
    return _rel(dagger(s) @ s, np.eye(2 * ctx.n))


@identity("unitarity_SSdag", needs_states=False)
def _unitarity_right(ctx):
    s = assemble_S(ctx.d)
    return _rel(s @ dagger(s), np.eye(2 * ctx.n))


@identity("unitarity_blocks_columns", needs_states=False)
def _unitarity_blocks(ctx):
    d, H, z = ctx.d, dagger, np.zeros((ctx.n, ctx.n))
    return max(_rel(H(d.Tl) @ d.Tl + H(d.L) @ d.L, _eye(ctx)),
               _rel(H(d.R) @ d.R + H(d.Tr) @ d.Tr, _eye(ctx)),
               _rel(H(d.Tl) @ d.R + H(d.L) @ d.Tr, z),
               _rel(H(d.R) @ d.Tl + H(d.Tr) @ d.L, z))


@identity("unitarity_blocks_rows", needs_states=False)
def _unitarity_blocks_rows(ctx):
    d, H, z = ctx.d, dagger, np.zeros((ctx.n, ctx.n))
    return max(_rel(d.Tl @ H(d.Tl) + d.R @ H(d.R), _eye(ctx)),
               _rel(d.L @ H(d.L) + d.Tr @ H(d.Tr), _eye(ctx)),
               _rel(d.Tl @ H(d.L) + d.R @ H(d.Tr), z))


@identity("symmetry_L", needs_states=False)
def _sym_l(ctx):
    return _rel(ctx.dm.L, dagger(ctx.d.L))


@identity("symmetry_R", needs_states=False)
def _sym_r(ctx):
    return _rel(ctx.dm.R, dagger(ctx.d.R))


@identity("symmetry_T", needs_states=False)
def _sym_t(ctx):
    return _rel(ctx.dm.Tl, dagger(ctx.d.Tr))


@identity("det_Tl_equals_det_Tr", needs_states=False)
def _det_t(ctx):
    return _rel(lu_det(ctx.d.Tl), lu_det(ctx.d.Tr))


@identity("det_S_phase_formula", needs_states=False)
def _det_s(ctx):
    dt = lu_det(ctx.d.Tl)
    return _rel(lu_det(assemble_S(ctx.d)), dt / np.conj(dt))


@identity("det_S_via_Tr", needs_states=False)
def _det_s_tr(ctx):
    return _rel(lu_det(assemble_S(ctx.d)), lu_det(ctx.d.Tr) / lu_det(ctx.dm.Tr))


@identity("det_S_unit_modulus", needs_states=False)
def _det_s_mod(ctx):
    return abs(abs(lu_det(assemble_S(ctx.d))) - 1.0)


@identity("det_Lambda_is_one", needs_states=False)
def _det_lambda(ctx):
    return _rel(build_lambda(ctx.d, ctx.dm).det, 1.0)


@identity("det_Sigma_is_one", needs_states=False)
def _det_sigma(ctx):
    return _rel(build_sigma(ctx.d, ctx.dm).det, 1.0)


@identity("Lambda_times_Sigma", needs_states=False)
def _lam_sig(ctx):
    lam = build_lambda(ctx.d, ctx.dm).matrix
    sig = build_sigma(ctx.d, ctx.dm).matrix
    return _rel(lam @ sig, np.eye(2 * ctx.n))


def _is_real(p):
    return p is not None and all(not np.any(f.matrix.imag) for f in p.fragments)


@identity("real_potential_transpose", needs_states=False, applies=_is_real)
def _real_transpose(ctx):
    return _rel(ctx.d.Tl.T, ctx.d.Tr)


# --- position-dependent identities -------------------------------------------

@identity("det_F_left")
def _det_fl(ctx):
    ref = (-2j * ctx.k) ** ctx.n
    return ctx.over_x(lambda i: _rel(lu_det(F_left(ctx.fl[i], ctx.flm[i])), ref))


@identity("det_F_right")
def _det_fr(ctx):
    ref = (-2j * ctx.k) ** ctx.n
    return ctx.over_x(lambda i: _rel(lu_det(F_right(ctx.fr[i], ctx.frm[i])), ref))


@identity("det_G_times_det_Tr")
def _det_g(ctx):
    ref = (-2j * ctx.k) ** ctx.n
    dtr = lu_det(ctx.d.Tr)
    return ctx.over_x(lambda i: _rel(lu_det(G_matrix(ctx.fl[i], ctx.fr[i])) * dtr, ref))


@identity("inverse_F_left")
def _inv_fl(ctx):
    e = np.eye(2 * ctx.n)
    return ctx.over_x(lambda i: _rel(
        F_left_inverse(ctx.k, ctx.fl[i], ctx.flm[i]) @ F_left(ctx.fl[i], ctx.flm[i]), e))


@identity("inverse_F_right")
def _inv_fr(ctx):
    e = np.eye(2 * ctx.n)
    return ctx.over_x(lambda i: _rel(
        F_right_inverse(ctx.k, ctx.fr[i], ctx.frm[i]) @ F_right(ctx.fr[i], ctx.frm[i]), e))


@identity("inverse_G")
def _inv_g(ctx):
    e = np.eye(2 * ctx.n)
    return ctx.over_x(lambda i: _rel(
        G_inverse(ctx.k, ctx.d, ctx.flm[i], ctx.frm[i]) @ G_matrix(ctx.fl[i], ctx.fr[i]), e))


@identity("F_left_from_F_right_and_Lambda")
def _fl_lambda(ctx):
    lam = build_lambda(ctx.d, ctx.dm).matrix
    return ctx.over_x(lambda i: _rel(F_right(ctx.fr[i], ctx.frm[i]) @ lam,
                                     F_left(ctx.fl[i], ctx.flm[i])))


@identity("F_right_from_F_left_and_Sigma")
def _fr_sigma(ctx):
    sig = build_sigma(ctx.d, ctx.dm).matrix
    return ctx.over_x(lambda i: _rel(F_left(ctx.fl[i], ctx.flm[i]) @ sig,
                                     F_right(ctx.fr[i], ctx.frm[i])))


@identity("G_reflection_relation")
def _g_minus_k(ctx):
    J, Q = involution_constants(ctx.n)
    s = assemble_S(ctx.d)
    return ctx.over_x(lambda i: _rel(G_matrix(ctx.fl[i], ctx.fr[i]) @ J @ s @ J @ Q,
                                     G_matrix(ctx.flm[i], ctx.frm[i])))


@identity("jost_right_in_left_basis")
def _fr_expansion(ctx):
    d = ctx.d
    tri = lu_inverse(d.Tr)
    return ctx.over_x(lambda i: _rel(ctx.fl[i].value @ d.R @ tri + ctx.flm[i].value @ tri,
                                     ctx.fr[i].value))


@identity("jost_left_in_right_basis")
def _fl_expansion(ctx):
    d = ctx.d
    tli = lu_inverse(d.Tl)
    return ctx.over_x(lambda i: _rel(ctx.fr[i].value @ d.L @ tli + ctx.frm[i].value @ tli,
                                     ctx.fl[i].value))


@identity("wronskian_fl_fl")
def _w1(ctx):
    k, d, H = ctx.k, ctx.d, dagger
    tli = lu_inverse(d.Tl)
    alt = 2j * k * lu_inverse(H(d.Tl)) @ (_eye(ctx) - H(d.L) @ d.L) @ tli
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.fl[i], ctx.fl[i]), 2j * k * _eye(ctx))),
               _rel(alt, 2j * k * _eye(ctx)))


@identity("wronskian_fl_minus_fl")
def _w2(ctx):
    k, d, dm, H = ctx.k, ctx.d, ctx.dm, dagger
    alt = 2j * k * lu_inverse(H(dm.Tl)) @ (H(dm.L) - d.L) @ lu_inverse(d.Tl)
    z = np.zeros((ctx.n, ctx.n))
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.flm[i], ctx.fl[i]), z)), _rel(alt, z))


@identity("wronskian_fr_fr")
def _w3(ctx):
    k, d, H = ctx.k, ctx.d, dagger
    alt = -2j * k * lu_inverse(H(d.Tr)) @ (_eye(ctx) - H(d.R) @ d.R) @ lu_inverse(d.Tr)
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.fr[i], ctx.fr[i]), -2j * k * _eye(ctx))),
               _rel(alt, -2j * k * _eye(ctx)))


@identity("wronskian_fr_minus_fr")
def _w4(ctx):
    k, d, dm, H = ctx.k, ctx.d, ctx.dm, dagger
    alt = 2j * k * lu_inverse(H(dm.Tr)) @ (d.R - H(dm.R)) @ lu_inverse(d.Tr)
    z = np.zeros((ctx.n, ctx.n))
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.frm[i], ctx.fr[i]), z)), _rel(alt, z))


@identity("wronskian_fl_fr")
def _w5(ctx):
    k, d, H = ctx.k, ctx.d, dagger
    ref = 2j * k * d.R @ lu_inverse(d.Tr)
    alt = -2j * k * lu_inverse(H(d.Tl)) @ H(d.L)
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.fl[i], ctx.fr[i]), ref)), _rel(alt, ref))


@identity("wronskian_fl_minus_fr")
def _w6(ctx):
    k, d, dm, H = ctx.k, ctx.d, ctx.dm, dagger
    ref = -2j * k * lu_inverse(d.Tr)
    alt = -2j * k * lu_inverse(H(dm.Tl))
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.flm[i], ctx.fr[i]), ref)), _rel(alt, ref))


@identity("wronskian_fr_minus_fl")
def _w7(ctx):
    k, d, dm, H = ctx.k, ctx.d, ctx.dm, dagger
    ref = 2j * k * lu_inverse(d.Tl)
    alt = 2j * k * lu_inverse(H(dm.Tr))
    return max(ctx.over_x(lambda i: _rel(wronskian(ctx.frm[i], ctx.fl[i]), ref)), _rel(alt, ref))


# --- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    name: str
    k: float
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)

    def line(self) -> str:
        return (f"{self.name} {format(self.k, '.17g')} {self.residual:.3e} {self.tol:.1e} "
                f"{'PASS' if self.passed else 'FAIL'}")


def _run(ctx: IdentityContext, tol: float, with_states: bool) -> list[IdentityReport]:
    out = []
    for ident in IDENTITIES:
        if ident.needs_states and not with_states:
            continue
        if not ident.applies(ctx.p):
            continue
        try:
            r = float(ident.residual(ctx))
        except Exception:
            r = float("inf")
        out.append(IdentityReport(ident.name, ctx.k, r, tol))
    return out


def check_scattering_data(d_plus: ScatteringData, d_minus: ScatteringData,
                          tol: float = DEFAULT_TOL) -> list[IdentityReport]:
    """Coefficient-only identities on externally supplied data at ``k`` and ``-k``."""
    ctx = IdentityContext(None, float(np.real(d_plus.k)), d_plus, d_minus)
    return _run(ctx, tol, with_states=False)


def verify_identities(p: PiecewisePotential, ks: Sequence[float],
                      tol: float = DEFAULT_TOL) -> list[IdentityReport]:
    """Run the whole battery at each real ``k`` of ``ks`` (zero excluded)."""
    reports = []
    for k in ks:
        if k == 0:
            raise ValueError("the k grid must exclude 0")
        reports.extend(_run(IdentityContext.build(p, float(k)), tol, with_states=True))
    return reports


def large_k_residual(p: PiecewisePotential, k: float) -> float:
    """Relative distance between ``2ik (T_l - I)`` and the integral of ``V``."""
    d = scattering_data(p, k)
    ref = p.integral()
    return frobenius(2j * k * (d.Tl - np.eye(p.n)) - ref) / max(frobenius(ref), 1e-300)


def transmission_asymmetry(d: ScatteringData) -> float:
    """Spectral norm of ``T_l - T_r``."""
    from .matrixcore import spectral_norm
    return spectral_norm(d.Tl - d.Tr)
