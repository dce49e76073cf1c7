"""Piecewise-constant Hermitian matrix potentials on the real line.

A potential is an ordered list of fragments, each carrying a constant n x n
Hermitian matrix on an interval; it vanishes outside the union of the
intervals.  Units follow the convention in which the equation reads
``-psi'' + V psi = k^2 psi``: positions in length, ``k`` in inverse length,
``V`` in inverse length squared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyFragment, NotHermitian, OverlappingSupports, ShapeMismatch
from .matrixcore import HermEigDecomposition, herm_eig, is_hermitian


def _frozen_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Fragment:
    """Constant matrix ``matrix`` on the open interval ``(x_min, x_max)``."""

    x_min: float
    x_max: float
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "matrix", _frozen_matrix(self.matrix))

    def __eq__(self, other):
        if not isinstance(other, Fragment):
            return NotImplemented
        return (self.x_min == other.x_min and self.x_max == other.x_max
                and self.matrix.shape == other.matrix.shape
                and bool(np.array_equal(self.matrix, other.matrix)))

    def __hash__(self):
        return hash((self.x_min, self.x_max, self.matrix.tobytes()))

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eig(self) -> HermEigDecomposition:
        """Cached eigendecomposition of the fragment matrix."""
        return herm_eig(self.matrix)

    def restricted(self, lo: float, hi: float) -> "Fragment | None":
        lo, hi = max(lo, self.x_min), min(hi, self.x_max)
        if lo >= hi:
            return None
        return Fragment(lo, hi, self.matrix)


@dataclass(frozen=True)
class PiecewisePotential:
    """Ordered constant-matrix fragments; zero outside their supports.

    Parameters
    ----------
    n : int
        Matrix size.
    fragments : sequence of Fragment
        Sorted, with disjoint interiors.  An empty sequence is the free
        potential.
    """

    n: int
    fragments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "fragments", tuple(self.fragments))

    @classmethod
    def from_pieces(cls, pieces, n=None) -> "PiecewisePotential":
        """Build from ``(x_min, x_max, matrix)`` triples."""
        frags = tuple(Fragment(a, b, m) for a, b, m in pieces)
        if n is None:
            if not frags:
                raise ValueError("matrix size needed for an empty potential")
            n = frags[0].n
        return cls(n, frags)

    @classmethod
    def free(cls, n: int) -> "PiecewisePotential":
        return cls(n, ())

    @property
    def is_free(self) -> bool:
        return not self.fragments

    @property
    def support(self) -> tuple[float, float]:
        """``(x_a, x_b)`` of the total support; ``(0, 0)`` for the free potential."""
        if not self.fragments:
            return (0.0, 0.0)
        return (self.fragments[0].x_min, self.fragments[-1].x_max)

    @property
    def breakpoints(self) -> list[float]:
        pts = []
        for f in self.fragments:
            for x in (f.x_min, f.x_max):
                if not pts or pts[-1] != x:
                    pts.append(x)
        return pts

    def validate(self) -> "PiecewisePotential":
        """Check shapes, Hermiticity, nonempty supports and ordering.

        Returns the potential itself so calls can be chained.

        Raises
        ------
        ShapeMismatch, NotHermitian, EmptyFragment, OverlappingSupports
            Each carrying the offending fragment index.
        """
        for j, f in enumerate(self.fragments):
            if f.matrix.shape != (self.n, self.n):
                raise ShapeMismatch(
                    f"fragment {j}: matrix shape {f.matrix.shape} != ({self.n}, {self.n})", j)
            if not np.all(np.isfinite(f.matrix)) or not np.isfinite([f.x_min, f.x_max]).all():
                raise ShapeMismatch(f"fragment {j}: non-finite entries", j)
            if not is_hermitian(f.matrix):
                raise NotHermitian(index=j)
            if not f.x_min < f.x_max:
                raise EmptyFragment(f"fragment {j}: x_min {f.x_min} >= x_max {f.x_max}", j)
        for j in range(len(self.fragments) - 1):
            if self.fragments[j].x_max > self.fragments[j + 1].x_min:
                raise OverlappingSupports(
                    f"fragments {j} and {j + 1} overlap or are out of order", j)
        return self

    def at(self, x: float) -> np.ndarray:
        """Potential matrix at ``x``.  At a shared endpoint the right fragment wins."""
        for f in reversed(self.fragments):
            if f.x_min <= x < f.x_max:
                return f.matrix
        return np.zeros((self.n, self.n), dtype=np.complex128)

    def integral(self) -> np.ndarray:
        total = np.zeros((self.n, self.n), dtype=np.complex128)
        for f in self.fragments:
            total += f.width * f.matrix
        return total

    def most_negative_eigenvalue(self) -> float:
        if not self.fragments:
            return 0.0
        return min(float(f.eig.eigenvalues[0]) for f in self.fragments)


def fragment_at(p: PiecewisePotential, cuts: Sequence[float]) -> list[PiecewisePotential]:
    """Split ``p`` at the given cut points into ``len(cuts) + 1`` pieces.

    Piece ``j`` is ``p`` restricted to ``(cuts[j-1], cuts[j])`` and zero
    elsewhere; a piece may be the free potential.
    """
    cuts = [float(c) for c in cuts]
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cut points must be strictly increasing")
    edges = [-np.inf] + cuts + [np.inf]
    pieces = []
    for lo, hi in zip(edges, edges[1:]):
        frags = [r for f in p.fragments if (r := f.restricted(lo, hi)) is not None]
        pieces.append(PiecewisePotential(p.n, tuple(frags)))
    return pieces


def shift(p: PiecewisePotential, b: float) -> PiecewisePotential:
    """The potential ``x -> V(x + b)``; supports move by ``-b``."""
    return PiecewisePotential(
        p.n, tuple(Fragment(f.x_min - b, f.x_max - b, f.matrix) for f in p.fragments))


def concatenate(pieces: Sequence[PiecewisePotential]) -> PiecewisePotential:
    """Join pieces with disjoint, ordered supports into one potential."""
    n = pieces[0].n
    return PiecewisePotential(n, tuple(f for q in pieces for f in q.fragments))


@dataclass(frozen=True)
class HalfLinePotential:
    """Block-diagonal ``2n x 2n`` potential on the positive half line.

    ``upper`` holds the part of the full-line potential to the right of the
    fold point, read at ``cut + x``; ``lower`` holds the part to the left,
    read at ``cut - x``.  Both are stored as potentials on ``x > 0``.
    """

    n: int
    upper: PiecewisePotential
    lower: PiecewisePotential
    cut: float = 0.0

    @property
    def n2(self) -> int:
        return 2 * self.n

    def at(self, x: float) -> np.ndarray:
        out = np.zeros((self.n2, self.n2), dtype=np.complex128)
        out[:self.n, :self.n] = self.upper.at(x)
        out[self.n:, self.n:] = self.lower.at(x)
        return out

    def as_block_potential(self) -> PiecewisePotential:
        """The same potential as a ``2n x 2n`` piecewise potential on ``(0, inf)``."""
        pts = sorted(set(self.upper.breakpoints) | set(self.lower.breakpoints))
        frags = []
        for lo, hi in zip(pts, pts[1:]):
            m = self.at(0.5 * (lo + hi))
            if np.any(m):
                frags.append(Fragment(lo, hi, m))
        return PiecewisePotential(self.n2, tuple(frags))


def build_halfline(p: PiecewisePotential, cut: float = 0.0) -> HalfLinePotential:
    """Fold ``p`` at ``cut`` into a block-diagonal half-line potential."""
    left, right = fragment_at(p, [cut])
    upper = shift(right, cut)
    lower = PiecewisePotential(p.n, tuple(
        Fragment(cut - f.x_max, cut - f.x_min, f.matrix) for f in reversed(left.fragments)))
    return HalfLinePotential(p.n, upper, lower, float(cut))


def sample_function(func: Callable[[float], np.ndarray], x_min: float, x_max: float,
                    count: int) -> PiecewisePotential:
    """Approximate a matrix function by ``count`` constant fragments (midpoint values)."""
    if count < 1 or not x_min < x_max:
        raise ValueError("need count >= 1 and x_min < x_max")
    edges = np.linspace(x_min, x_max, count + 1)
    frags = []
    for lo, hi in zip(edges, edges[1:]):
        m = np.atleast_2d(np.asarray(func(0.5 * (lo + hi)), dtype=np.complex128))
        frags.append(Fragment(lo, hi, 0.5 * (m + m.conj().T)))
    return PiecewisePotential(frags[0].n, tuple(frags)).validate()
