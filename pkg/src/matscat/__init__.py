"""Scattering theory for the full-line matrix Schrodinger equation with
piecewise-constant Hermitian potentials."""
from .errors import ScatteringError
from .potential import Fragment, HalfLinePotential, PiecewisePotential, build_halfline, fragment_at, shift
from .jost import ScatteringData, SolutionState, jost_left, jost_right, scattering_data
from .factorization import TransitionMatrix, build_lambda, build_sigma, compose, compose_scattering
from .analysis import IdentityReport, assemble_S, verify_identities
from .spectral import SpectralReport, bound_states, genericity_degree, halfline_map, levinson_check

__all__ = [
    "ScatteringError", "Fragment", "HalfLinePotential", "PiecewisePotential", "build_halfline",
    "fragment_at", "shift", "ScatteringData", "SolutionState", "jost_left", "jost_right",
    "scattering_data", "TransitionMatrix", "build_lambda", "build_sigma", "compose",
    "compose_scattering", "IdentityReport", "assemble_S", "verify_identities", "SpectralReport",
    "bound_states", "genericity_degree", "halfline_map", "levinson_check",
]
