"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N PASS|FAIL: detail`` line (visible
without ``-s``) and then asserts.  Run the file directly for the summary
alone: ``python3 tests/test_acceptance.py``.
"""
import sys
import time

import numpy as np
import pytest

from matscat.analysis import transmission_asymmetry, verify_identities
from matscat.factorization import (compose, composed_scattering_data, fragment_transitions,
                                   shifted_factorization, transitions_of)
from matscat.jost import (SolutionState, fragment_propagator, laurent_on_real_axis, ode_oracle,
                          scattering_data)
from matscat.matrixcore import frobenius, lu_det, lu_inverse
from matscat.potential import Fragment, PiecewisePotential
from matscat.spectral import (bound_states, delta_left, delta_right, halfline_map,
                              halfline_physical, levinson_check)
from matscat.squarewell import square_well_potential, square_well_report

from potentials import (COMPLEX_PAIR, THREE_BOUND, random_hermitian, random_suite, real_coupled,
                        square_well)

SUITE = random_suite(200)
KS = (0.3, 1.0, 5.0)


def report(capsys, number, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return line


# Published small-k expansion coefficients of the inverse transmission
# coefficients of the complex two-fragment potential, keyed by
# (matrix, row, col) -> {power: value}.
PUBLISHED_LAURENT = {
    ("Tl", 0, 0): {-1: -(7.05652 - 74.13522j), 0: -(133.844 + 14.3522j),
                   1: 19.0756 - 170.827j, 2: 160.955 + 18.1729j},
    ("Tl", 0, 1): {-1: -(19.9839 - 22.4176j), 0: -(50.5188 + 39.0893j),
                   1: 51.289 - 68.6615j, 2: 65.0516 + 48.4089j},
    ("Tl", 1, 0): {-1: 10.5752 - 15.2172j, 0: 26.0265 + 19.9529j,
                   1: -(25.8548 - 33.0752j), 2: -(31.8705 + 24.1783j)},
    ("Tl", 1, 1): {-1: 7.05652 - 2.55528j, 0: 7.27335 + 14.3522j,
                   1: -(19.0756 - 11.1659j), 2: -(10.4903 + 18.1729j)},
    ("Tr", 0, 0): {-1: 7.05652 + 74.13522j, 0: -(133.844 - 14.3522j),
                   1: -(19.0756 + 170.827j), 2: 160.955 - 18.1729j},
    ("Tr", 0, 1): {-1: -(10.5752 + 15.2172j), 0: 26.0265 - 19.9529j,
                   1: 25.8548 + 33.0752j, 2: -(31.8705 - 24.1783j)},
    ("Tr", 1, 0): {-1: 19.9839 + 22.4176j, 0: -(50.5188 - 39.0893j),
                   1: -(51.289 + 68.6615j), 2: 65.0516 - 48.4089j},
    ("Tr", 1, 1): {-1: -(7.05652 + 2.55528j), 0: 7.27335 - 14.3522j,
                   1: 19.0756 + 11.1659j, 2: -(10.4903 - 18.1729j)},
}


def composed_inverse_transmissions(k):
    d = composed_scattering_data(COMPLEX_PAIR, 0.0, k)
    return np.stack([lu_inverse(d.Tl), lu_inverse(d.Tr)])


def test_criterion_1_small_k_expansion(capsys):
    t0 = time.perf_counter()
    coef = laurent_on_real_axis(composed_inverse_transmissions, radius=0.3, nodes=64, degree=24)
    elapsed = time.perf_counter() - t0
    bad = []
    total = 0
    for (name, i, j), table in PUBLISHED_LAURENT.items():
        idx = 0 if name == "Tl" else 1
        for power, ref in table.items():
            total += 1
            got = coef[power][idx, i, j]
            rel = abs(got - ref) / abs(ref)
            if rel > 5e-3:
                bad.append(f"{name}[{i + 1}{j + 1}] k^{power}: {got:.6g} vs {ref:.6g} ({rel:.2%})")
    ok = not bad and elapsed < 10
    detail = f"{total - len(bad)}/{total} coefficients within 0.5%, {elapsed:.1f}s"
    if bad:
        detail += "; off: " + "; ".join(bad)
    report(capsys, 1, ok, detail)
    assert ok, detail


def _c_threshold():
    brentq = pytest.importorskip("scipy.optimize").brentq
    return brentq(lambda c: lu_det(delta_left(real_coupled(c))).real, 0.5, 2.0, xtol=1e-12)


def test_criterion_2_coupled_real_eigenvalues(capsys):
    t0 = time.perf_counter()
    checks = []
    k0 = bound_states(real_coupled(0.0)).kappas
    checks.append(("c=0 kappa", len(k0) == 1 and abs(k0[0] - 0.551) <= 0.002, k0, 0.551))
    k1 = bound_states(real_coupled(1.0)).kappas
    checks.append(("c=1 kappa", len(k1) == 1 and abs(k1[0] - 0.0695) <= 0.0005, k1, 0.0695))
    cstar = _c_threshold()
    checks.append(("threshold c", abs(cstar - 1.13725) <= 0.001, cstar, 1.13725))
    k3 = np.array(bound_states(THREE_BOUND).kappas)
    ref3 = np.array([0.005635, 1.2737, 2.08802])
    checks.append(("three kappas", len(k3) == 3 and np.all(np.abs(k3 - ref3) <= 5e-3 * ref3),
                   k3, ref3))
    ref_l = np.array([[-130.267, 28.3984], [-43.555, 9.46508]])
    ref_r = ref_l.T
    dl, dr = delta_left(THREE_BOUND).real, delta_right(THREE_BOUND).real
    checks.append(("2ik Tl^-1(0)", bool(np.all(np.abs(dl - ref_l) <= 5e-3 * np.abs(ref_l))),
                   np.round(dl, 4).tolist(), ref_l.tolist()))
    checks.append(("2ik Tr^-1(0)", bool(np.all(np.abs(dr - ref_r) <= 5e-3 * np.abs(ref_r))),
                   np.round(dr, 4).tolist(), ref_r.tolist()))
    elapsed = time.perf_counter() - t0
    ok = all(c[1] for c in checks) and elapsed < 60
    detail = "; ".join(f"{name} {'ok' if good else 'off'} (got {got}, published {ref})"
                       for name, good, got, ref in checks) + f"; {elapsed:.1f}s"
    report(capsys, 2, ok, detail)
    assert ok, detail


def test_criterion_3_transmission_asymmetry(capsys):
    ks = np.linspace(0.1, 5, 200)
    matrix_min = min(transmission_asymmetry(scattering_data(THREE_BOUND, k)) for k in ks)
    scalar = [p for p in SUITE if p.n == 1]
    scalar_max = max(transmission_asymmetry(scattering_data(p, k)) for p in scalar for k in ks[::20])
    ok = matrix_min > 1e-3 and scalar_max <= 1e-10
    detail = (f"min ||Tl-Tr|| on [0.1,5] = {matrix_min:.4g} (matrix case); "
              f"max over {len(scalar)} scalar potentials = {scalar_max:.2e}")
    report(capsys, 3, ok, detail)
    assert ok, detail


def _rel(a, b):
    return frobenius(a - b) / max(1.0, frobenius(b))


def test_criterion_4_factorization_suite(capsys):
    t0 = time.perf_counter()
    worst = dict(lam=0.0, sig=0.0, comp=0.0, det=0.0, shift=0.0)
    for p in SUITE:
        pts = p.breakpoints
        cuts = [0.5 * (f.x_max + g.x_min) for f, g in zip(p.fragments, p.fragments[1:])]
        mid = 0.5 * (pts[0] + pts[-1])
        for k in KS:
            lam, sig = transitions_of(p, k)
            lams, sigs = fragment_transitions(p, cuts or [mid], k)
            worst["lam"] = max(worst["lam"], _rel(compose(lams).matrix, lam.matrix))
            worst["sig"] = max(worst["sig"], _rel(compose(sigs).matrix, sig.matrix))
            worst["det"] = max(worst["det"], abs(lam.det - 1))
            d = scattering_data(p, k)
            c = composed_scattering_data(p, mid, k)
            worst["comp"] = max(worst["comp"], *(_rel(a, b) for a, b in
                                                 ((c.Tl, d.Tl), (c.Tr, d.Tr), (c.L, d.L), (c.R, d.R))))
            worst["shift"] = max(worst["shift"],
                                 _rel(shifted_factorization(p, mid, k).matrix, lam.matrix))
    elapsed = time.perf_counter() - t0
    ok = (worst["lam"] <= 1e-8 and worst["sig"] <= 1e-8 and worst["comp"] <= 1e-8
          and worst["det"] <= 1e-9 and worst["shift"] <= 1e-8 and elapsed < 120)
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + f"; {elapsed:.1f}s"
    report(capsys, 4, ok, detail)
    assert ok, detail


def test_criterion_5_identity_battery(capsys):
    worst = {}
    for p in SUITE:
        for r in verify_identities(p, KS):
            worst[r.name] = max(worst.get(r.name, 0.0), r.residual)
    name, value = max(worst.items(), key=lambda kv: kv[1])
    ok = value <= 1e-9
    detail = f"{len(worst)} identities x {len(SUITE)} potentials x {len(KS)} k; worst {name} {value:.2e}"
    report(capsys, 5, ok, detail)
    assert ok, detail


def test_criterion_6_halfline_correspondence(capsys):
    worst = {}
    limits = {"S_half_equals_SQ": 1e-9, "det_jost_times_det_Tl": 1e-8,
              "det_S_half_sign": 1e-10, "det_S_half_phase": 1e-9, "S_half_unitarity": 1e-9,
              "jost_direct_route": 1e-9, "jost_inverse_formula": 1e-9}
    for p in SUITE:
        for k in KS:
            for name, v in halfline_map(p, k).residuals.items():
                worst[name] = max(worst.get(name, 0.0), v)
    boundary = max(halfline_physical(p, k, [0.0, 0.5]).boundary_residual
                   for p in SUITE[:40] + [COMPLEX_PAIR] for k in KS)
    free = halfline_map(PiecewisePotential.free(2), 1.0).S_half
    q = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    free_err = float(np.max(np.abs(free - q)))
    ok = (all(worst[n] <= lim for n, lim in limits.items()) and boundary <= 1e-9
          and free_err <= 1e-12)
    detail = (", ".join(f"{n} {worst[n]:.1e}" for n in limits)
              + f", boundary {boundary:.1e}, free S=Q {free_err:.1e}")
    report(capsys, 6, ok, detail)
    assert ok, detail


LEVINSON_CASES = [
    ("free", PiecewisePotential.free(2)),
    ("well a*sqrt(b)=pi", square_well(2.0, (np.pi / 2) ** 2)),
    ("well a*sqrt(b)=2pi", square_well(2.0, np.pi ** 2)),
    ("well a*sqrt(b)=2", square_well(2.0, 1.0)),
    ("coupled c=0", real_coupled(0.0)),
    ("coupled c=1", real_coupled(1.0)),
    ("coupled c=1.3", real_coupled(1.3)),
    ("three bound states", THREE_BOUND),
]


def test_criterion_7_levinson(capsys):
    t0 = time.perf_counter()
    parts, ok = [], True
    for name, p in LEVINSON_CASES:
        r = levinson_check(p)
        good = r.residual <= 1e-3 and r.levinson_count == r.Ntot
        ok &= good
        parts.append(f"{name}: Ntot={r.Ntot} nu={r.nu} rhs={r.levinson_rhs / np.pi:.0f}pi "
                     f"res={r.residual:.1e}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 120
    detail = "; ".join(parts) + f"; {elapsed:.1f}s"
    report(capsys, 7, ok, detail)
    assert ok, detail


def test_criterion_8_oracle_equivalence(capsys):
    rng = np.random.default_rng(808)
    worst, ratios = 0.0, []
    for _ in range(20):
        n = int(rng.integers(1, 4))
        v = random_hermitian(rng, n)
        width = rng.uniform(0.2, 1.0)
        k = rng.uniform(0.1, 5.0)
        p = PiecewisePotential(n, (Fragment(0.0, width, v),))
        init = SolutionState(k, 0.0, np.eye(n, dtype=complex), 1j * k * np.eye(n))
        exact = fragment_propagator(v, width, k) @ init.stacked
        rk = ode_oracle(p, k, 0.0, width, init, 10_000).stacked
        worst = max(worst, frobenius(rk - exact) / frobenius(exact))
        e1 = frobenius(ode_oracle(p, k, 0.0, width, init, 20).stacked - exact)
        e2 = frobenius(ode_oracle(p, k, 0.0, width, init, 40).stacked - exact)
        ratios.append(e1 / e2)
    ok = worst <= 1e-8 and all(14 <= r <= 18 for r in ratios)
    detail = f"max RK4(1e4 steps) deviation {worst:.1e}; halving ratios {min(ratios):.2f}..{max(ratios):.2f}"
    report(capsys, 8, ok, detail)
    assert ok, detail


def test_criterion_9_square_well_record(capsys):
    rep = square_well_report(2.0, 3.0, ks=np.linspace(0.1, 10, 20))
    ok = rep.oracle_residual <= 1e-10 and rep.born_order >= 1.8 and rep.alternative_deviation > 0
    detail = (f"transfer vs plane-wave {rep.oracle_residual:.1e} over 20 k; Born residual order "
              f"{rep.born_order:.2f}; alternative closed form deviates by {rep.alternative_deviation:.3f}")
    report(capsys, 9, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for test in [test_criterion_1_small_k_expansion, test_criterion_2_coupled_real_eigenvalues,
                 test_criterion_3_transmission_asymmetry, test_criterion_4_factorization_suite,
                 test_criterion_5_identity_battery, test_criterion_6_halfline_correspondence,
                 test_criterion_7_levinson, test_criterion_8_oracle_equivalence,
                 test_criterion_9_square_well_record]:
        try:
            test(None)
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
