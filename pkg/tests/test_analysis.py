import numpy as np
import pytest

from matscat.analysis import (IDENTITIES, assemble_S, check_scattering_data, involution_constants,
                              large_k_residual, verify_identities)
from matscat.jost import ScatteringData, scattering_data
from matscat.matrixcore import lu_det
from matscat.potential import PiecewisePotential

from potentials import COMPLEX_PAIR, THREE_BOUND, random_suite


def test_free_potential_scattering_matrix_is_identity():
    s = assemble_S(scattering_data(PiecewisePotential.free(2), 1.0))
    assert np.allclose(s, np.eye(4))


def test_scattering_matrix_block_layout():
    d = scattering_data(COMPLEX_PAIR, 0.9)
    s = assemble_S(d)
    assert np.array_equal(s[:2, :2], d.Tl) and np.array_equal(s[:2, 2:], d.R)
    assert np.array_equal(s[2:, :2], d.L) and np.array_equal(s[2:, 2:], d.Tr)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_involution_constants(n):
    J, Q = involution_constants(n)
    eye = np.eye(2 * n)
    assert np.array_equal(J @ J, eye) and np.array_equal(Q @ Q, eye)
    assert np.array_equal(J @ Q, -Q @ J)
    assert lu_det(J) == (-1) ** n and lu_det(Q) == (-1) ** n


def test_involution_constants_scalar_case():
    J, Q = involution_constants(1)
    assert np.array_equal(J, np.diag([1, -1])) and np.array_equal(Q, [[0, 1], [1, 0]])


def test_free_potential_battery_is_exact():
    reports = verify_identities(PiecewisePotential.free(2), [0.5, 1.0, 3.0])
    assert all(r.residual <= 1e-12 for r in reports)


@pytest.mark.parametrize("p", [COMPLEX_PAIR, THREE_BOUND], ids=["complex", "real"])
def test_battery_passes_on_paired_fragments(p):
    reports = verify_identities(p, [0.5, 1.0, 2.0])
    failed = [r.line() for r in reports if not r.passed]
    assert not failed


def test_battery_covers_every_registered_identity():
    names = {r.name for r in verify_identities(THREE_BOUND, [1.0])}
    assert names == {i.name for i in IDENTITIES}


def test_real_only_identity_skipped_for_complex_potential():
    names = {r.name for r in verify_identities(COMPLEX_PAIR, [1.0])}
    assert "real_potential_transpose" not in names


def test_corrupted_reflection_fails_unitarity():
    k = 1.0
    d, dm = scattering_data(COMPLEX_PAIR, k), scattering_data(COMPLEX_PAIR, -k)
    bad = ScatteringData(k, d.Tl, d.Tr, d.L + 1e-3, d.R)
    reports = {r.name: r for r in check_scattering_data(bad, dm)}
    assert not reports["unitarity_SdagS"].passed
    good = {r.name: r for r in check_scattering_data(d, dm)}
    assert all(r.passed for r in good.values())


def test_report_line_format():
    r = verify_identities(COMPLEX_PAIR, [1.0])[0]
    parts = r.line().split()
    assert len(parts) == 5 and parts[-1] in ("PASS", "FAIL")


def test_random_battery_on_log_grid():
    ks = np.geomspace(0.2, 20, 20)
    for p in random_suite(5, seed=5):
        failed = [r.line() for r in verify_identities(p, ks) if not r.passed]
        assert not failed


def test_det_S_has_unit_modulus_on_grid():
    for k in np.geomspace(0.2, 20, 20):
        assert abs(abs(lu_det(assemble_S(scattering_data(COMPLEX_PAIR, k)))) - 1) <= 1e-10


def test_large_k_residual_small():
    assert large_k_residual(COMPLEX_PAIR, 1e3) < 0.05


def test_zero_in_grid_rejected():
    with pytest.raises(ValueError):
        verify_identities(COMPLEX_PAIR, [0.0])
