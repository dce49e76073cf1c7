"""Small dense complex linear algebra.

Everything here works on ``numpy`` complex arrays of modest size (the
potentials handled by the package are n x n with n rarely above 6, and the
transition and half-line matrices are 2n x 2n).  Inputs are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian, Singular

HERMITIAN_RTOL = 1e-12
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
SINGULAR_RTOL = 1e-13


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def frobenius(m) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def dagger(m) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_defect(m) -> float:
    """Frobenius norm of ``m - m^dagger``."""
    m = np.asarray(m)
    return frobenius(m - dagger(m))


def is_hermitian(m, rtol=HERMITIAN_RTOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return hermitian_defect(m) <= rtol * max(1.0, frobenius(m))


@dataclass(frozen=True)
class HermEigDecomposition:
    """Eigenvalues in ascending order and the unitary matrix of eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ dagger(u)


def herm_eig(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS) -> HermEigDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it.  Sweeps
    stop once the off-diagonal Frobenius mass drops below ``tol * ||m||_F``.

    Raises
    ------
    NotHermitian
        If ``||m - m^dagger||_F`` exceeds ``1e-12 * max(1, ||m||_F)``.
    NoConvergence
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[1] != n or not is_hermitian(a):
        raise NotHermitian()
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=np.complex128)
    scale = frobenius(a)
    if scale == 0.0:
        return HermEigDecomposition(np.zeros(n), v)

    def off(x):
        return frobenius(x - np.diag(np.diag(x)))

    for _ in range(max_sweeps):
        if off(a) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = dagger(g) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        if off(a) >= tol * scale:
            raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return HermEigDecomposition(w[order], v[:, order])


def lu_factor(m):
    """LU factorization with partial pivoting.

    Returns ``(lu, perm, sign)`` where ``lu`` packs the unit-lower and upper
    factors, ``perm`` is the row permutation and ``sign`` its parity.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("LU factorization needs a square matrix")
    perm = np.arange(n)
    sign = 1
    for j in range(n):
        pivot = j + int(np.argmax(np.abs(a[j:, j])))
        if pivot != j:
            a[[j, pivot]] = a[[pivot, j]]
            perm[[j, pivot]] = perm[[pivot, j]]
            sign = -sign
        if a[j, j] == 0:
            continue
        a[j + 1:, j] /= a[j, j]
        a[j + 1:, j + 1:] -= np.outer(a[j + 1:, j], a[j, j + 1:])
    return a, perm, sign


def lu_det(m) -> complex:
    lu, _, sign = lu_factor(m)
    d = complex(sign)
    for x in np.diag(lu):
        d *= x
    return d


def lu_solve(lu, perm, b) -> np.ndarray:
    n = lu.shape[0]
    y = np.array(b, dtype=np.complex128)[perm]
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
    return y


def lu_inverse(m) -> np.ndarray:
    """Inverse through the LU factors.

    Raises :class:`Singular` when ``|det m| < 1e-13 * ||m||_F ** rows``.
    """
    a = as_matrix(m)
    lu, perm, sign = lu_factor(a)
    n = a.shape[0]
    det = sign * np.prod(np.diag(lu))
    if abs(det) < SINGULAR_RTOL * frobenius(a) ** n or abs(det) == 0.0:
        raise Singular(f"matrix is numerically singular (|det| = {abs(det):.3e})")
    return lu_solve(lu, perm, np.eye(n, dtype=np.complex128))


def spectral_norm(m) -> float:
    """Largest singular value, from the eigenvalues of ``m^dagger m``."""
    m = as_matrix(m)
    if not np.any(m):
        return 0.0
    w = herm_eig(dagger(m) @ m).eigenvalues
    return float(np.sqrt(max(w[-1], 0.0)))


def singular_values(m) -> np.ndarray:
    """Singular values in descending order, from the eigenvalues of ``m^dagger m``."""
    m = as_matrix(m)
    w = herm_eig(dagger(m) @ m).eigenvalues
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def block(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]])
