import numpy as np
import pytest

from matscat.errors import NotHermitian, Singular
from matscat.matrixcore import (dagger, frobenius, herm_eig, lu_det, lu_inverse,
                                singular_values, spectral_norm)


def random_unit_disk(rng, n):
    r = np.sqrt(rng.uniform(0, 1, (n, n)))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, (n, n)))


@pytest.mark.parametrize("m, expected", [
    ([[2, 1 + 1j], [1 - 1j, -2]], [-np.sqrt(6), np.sqrt(6)]),
    ([[3, 2], [2, 0]], [-1.0, 4.0]),
    (np.eye(3), [1.0, 1.0, 1.0]),
])
def test_herm_eig_known_spectra(m, expected):
    dec = herm_eig(m)
    assert np.allclose(dec.eigenvalues, expected, atol=1e-12)
    assert np.all(np.diff(dec.eigenvalues) >= 0)


def test_herm_eig_identity_keeps_identity_vectors():
    dec = herm_eig(np.eye(4))
    assert np.array_equal(dec.eigenvectors, np.eye(4))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_herm_eig_random_reconstruction_and_unitarity(rng, n):
    for _ in range(20):
        a = random_unit_disk(rng, n)
        m = (a + dagger(a)) / 2
        dec = herm_eig(m)
        u = dec.eigenvectors
        assert frobenius(dagger(u) @ u - np.eye(n)) <= 1e-12
        assert frobenius(dec.reconstruct() - m) <= 1e-11
        assert np.allclose(dec.eigenvalues, np.linalg.eigvalsh(m), atol=1e-12)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig([[3, 2], [1, 0]])


def test_herm_eig_does_not_mutate_input():
    m = np.array([[1, 2j], [-2j, 0]])
    before = m.copy()
    herm_eig(m)
    assert np.array_equal(m, before)


def _q(n):
    z = np.zeros((n, n))
    return np.block([[z, np.eye(n)], [np.eye(n), z]])


@pytest.mark.parametrize("m, expected", [
    (np.eye(4), 1.0),
    (_q(2), 1.0),
    (_q(1), -1.0),
    (np.diag([2, 3j]), 6j),
])
def test_lu_det_examples(m, expected):
    assert lu_det(m) == pytest.approx(expected, abs=1e-15)


def test_lu_det_identity_is_exactly_one():
    assert lu_det(np.eye(6)) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_lu_det_multiplicative(rng, n):
    for _ in range(20):
        a, b = random_unit_disk(rng, n), random_unit_disk(rng, n)
        lhs, rhs = lu_det(a @ b), lu_det(a) * lu_det(b)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@pytest.mark.parametrize("m, expected", [
    (np.eye(3), np.eye(3)),
    (_q(2), _q(2)),
    (np.diag([2, 1j]), np.diag([0.5, -1j])),
])
def test_lu_inverse_examples(m, expected):
    assert np.allclose(lu_inverse(m), expected, atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_lu_inverse_involution(rng, n):
    for _ in range(20):
        a = random_unit_disk(rng, n) + 2 * np.eye(n)
        if np.linalg.cond(a) > 1e6:
            continue
        assert frobenius(lu_inverse(lu_inverse(a)) - a) <= 1e-9 * frobenius(a)
        assert frobenius(a @ lu_inverse(a) - np.eye(n)) <= 1e-10 * np.linalg.cond(a)


def test_lu_inverse_singular_raises():
    with pytest.raises(Singular):
        lu_inverse([[1, 2], [2, 4]])


def test_singular_values_match_numpy(rng):
    a = random_unit_disk(rng, 4)
    assert np.allclose(singular_values(a), np.linalg.svd(a, compute_uv=False), atol=1e-12)
    assert spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-12)
