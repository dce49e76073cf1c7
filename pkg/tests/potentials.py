"""Shared test potentials and a seeded random generator."""
import numpy as np

from matscat.potential import Fragment, PiecewisePotential

COMPLEX_PAIR = PiecewisePotential.from_pieces([
    (-2, 0, [[3, -2 + 1j], [-2 - 1j, -5]]),
    (0, 1, [[2, 1 + 1j], [1 - 1j, -2]]),
])

THREE_BOUND = PiecewisePotential.from_pieces([
    (-2, 0, [[3, -2], [-2, -5]]),
    (0, 1, [[2, 1], [1, -2]]),
])


def real_coupled(c):
    """Real 2x2 pair whose lower-right entry on the left fragment is ``c``."""
    return PiecewisePotential.from_pieces([
        (-2, 0, [[3, 2], [2, c]]),
        (0, 1, [[2, 1], [1, 1]]),
    ])


def square_well(a, b):
    return PiecewisePotential.from_pieces([(-a / 2, a / 2, [[-b]])])


def random_hermitian(rng, n, bound=2.0):
    if n == 1:
        return np.array([[rng.uniform(-bound, bound)]], dtype=complex)
    a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    h = (a + a.conj().T) / 2
    return bound * h / max(1.0, np.max(np.abs(h)))


def random_potential(rng, n=None, fragments=None, max_length=3.0):
    """Random Hermitian potential: n in {1,2,3}, 1-4 fragments, entries <= 2, total length <= 3."""
    n = int(rng.integers(1, 4)) if n is None else n
    m = int(rng.integers(1, 5)) if fragments is None else fragments
    length = rng.uniform(0.5, max_length)
    widths = rng.dirichlet(np.ones(2 * m)) * length
    x = rng.uniform(-1.5, 0.0)
    frags = []
    for j in range(m):
        x += widths[2 * j] if j else 0.0
        lo, hi = x, x + widths[2 * j + 1]
        frags.append(Fragment(lo, hi, random_hermitian(rng, n)))
        x = hi
    return PiecewisePotential(n, tuple(frags)).validate()


def random_suite(count=200, seed=20240611):
    rng = np.random.default_rng(seed)
    return [random_potential(rng) for _ in range(count)]
