"""Command-line front end.

Subcommands: ``scatter``, ``factorize``, ``boundstates``, ``levinson``,
``halfline`` and ``verify``.  Checks are reported one per line as
``name k residual tol PASS|FAIL``; the exit status is 0 exactly when every
check passes.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import plotting
from .analysis import IdentityReport, transmission_asymmetry, verify_identities
from .config import fmt, parse_potential_file, scattering_header, scattering_row, write_csv
from .errors import ScatteringError
from .factorization import (compose, composed_scattering_data, fragment_transitions,
                            shifted_factorization, transitions_of)
from .jost import scattering_data
from .matrixcore import frobenius, lu_det
from .spectral import (bound_states, default_kappa_max, det_Tl_inv_imag_axis, halfline_map,
                       levinson_check, unwrapped_phase)

COMMANDS = ("scatter", "factorize", "boundstates", "levinson", "halfline", "verify")
DEFAULT_TOL = {"levinson": 1e-3, "factorize": 1e-8}


@dataclass(frozen=True)
class RunConfig:
    command: str
    potential: str
    k_min: float = 0.1
    k_max: float = 10.0
    k_steps: int = 50
    log: bool = False
    cuts: tuple = ()
    out: str | None = None
    tol: float | None = None
    kappa_max: float | None = None
    norm_diff: bool = False
    plot: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.k_min <= 0:
            raise ValueError("--kmin must be positive")
        if self.k_steps < 2:
            raise ValueError("--ksteps must be at least 2")
        if self.k_max <= self.k_min:
            raise ValueError("--kmax must exceed --kmin")

    @property
    def tolerance(self) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOL.get(self.command, 1e-9)

    def k_grid(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.k_min, self.k_max, self.k_steps)
        return np.linspace(self.k_min, self.k_max, self.k_steps)

    def sibling(self, suffix: str) -> Path:
        """Path for an auxiliary file placed next to the main output."""
        base = Path(self.out) if self.out else Path(f"{self.command}.csv")
        return base.with_name(f"{base.stem}_{suffix}")


def _emit(cfg: RunConfig, lines: Sequence[str], stream) -> None:
    text = "\n".join(lines) + "\n"
    if cfg.out and cfg.command not in ("scatter", "halfline"):
        Path(cfg.out).write_text(text)
    stream.write(text)


def _report(name, k, residual, tol) -> IdentityReport:
    return IdentityReport(name, float(k), float(residual), tol)


def _cmd_scatter(cfg, p, stream):
    ks = cfg.k_grid()
    rows, norms, dets = [], [], []
    for k in ks:
        d = scattering_data(p, k)
        nd = transmission_asymmetry(d)
        norms.append(nd)
        dets.append(lu_det(d.Tl))
        rows.append(scattering_row(d, nd if cfg.norm_diff else None))
    out = Path(cfg.out) if cfg.out else None
    header = scattering_header(p.n, cfg.norm_diff)
    if out:
        write_csv(out, header, rows)
    else:
        stream.write(",".join(header) + "\n")
        for r in rows:
            stream.write(",".join(r) + "\n")
    if cfg.plot:
        plotting.plot_transmission_asymmetry(ks, norms, cfg.sibling("asymmetry.png"))
        plotting.plot_transmission_moduli(ks, dets, cfg.sibling("det_Tl.png"))
    return []


def _cmd_factorize(cfg, p, stream):
    tol = cfg.tolerance
    cuts = list(cfg.cuts) or [x for x in p.breakpoints[1:-1]] or [0.5 * sum(p.support)]
    reports = []
    for k in cfg.k_grid():
        lam, sig = transitions_of(p, k)
        lams, sigs = fragment_transitions(p, cuts, k)
        prod_l, prod_s = compose(lams), compose(sigs)
        reports.append(_report("lambda_product", k, frobenius(lam.matrix - prod_l.matrix)
                               / frobenius(lam.matrix), tol))
        reports.append(_report("sigma_product", k, frobenius(sig.matrix - prod_s.matrix)
                               / frobenius(sig.matrix), tol))
        reports.append(_report("det_lambda", k, abs(lam.det - 1), tol))
        direct = scattering_data(p, k)
        comp = composed_scattering_data(p, cuts[0], k)
        worst = max(frobenius(a - b) / max(1.0, frobenius(b)) for a, b in
                    ((comp.Tl, direct.Tl), (comp.Tr, direct.Tr), (comp.L, direct.L), (comp.R, direct.R)))
        reports.append(_report("composed_coefficients", k, worst, tol))
        shifted = shifted_factorization(p, cuts[0], k)
        reports.append(_report("shifted_cut_factorization", k,
                               frobenius(shifted.matrix - lam.matrix) / frobenius(lam.matrix), tol))
    _emit(cfg, [r.line() for r in reports], stream)
    return reports


def _cmd_boundstates(cfg, p, stream):
    rep = bound_states(p, cfg.kappa_max, tol=cfg.extra.get("bisect_tol", 1e-10))
    _emit(cfg, rep.lines(), stream)
    if cfg.plot:
        kmax = cfg.kappa_max or default_kappa_max(p)
        grid = np.geomspace(1e-4, kmax, 400)
        vals = [det_Tl_inv_imag_axis(p, x) for x in grid]
        plotting.plot_imaginary_axis(grid, vals, rep.kappas, cfg.sibling("imaginary_axis.png"))
    return []


def _cmd_levinson(cfg, p, stream):
    tol = cfg.tolerance
    rep = levinson_check(p, kappa_max=cfg.kappa_max)
    lines = rep.lines()
    checks = [_report("levinson_balance", 0.0, rep.residual, tol),
              _report("levinson_count_matches", 0.0, abs(rep.levinson_count - rep.Ntot), 0.0)]
    _emit(cfg, lines + [c.line() for c in checks], stream)
    if cfg.plot:
        ks = np.geomspace(1e3, 1e-3, 300)
        plotting.plot_phase(ks, 2 * unwrapped_phase(p, ks), cfg.sibling("phase.png"),
                            rep.levinson_rhs)
    return checks


def _cmd_halfline(cfg, p, stream):
    tol = cfg.tolerance
    reports, rows = [], []
    names = None
    for k in cfg.k_grid():
        h = halfline_map(p, k)
        names = names or list(h.residuals)
        rows.append([fmt(k)] + [fmt(h.residuals[nm]) for nm in names])
        reports += [_report(nm, k, v, tol) for nm, v in h.residuals.items()]
    if cfg.out:
        write_csv(cfg.out, ["k"] + names, rows)
        Path(cfg.sibling("report.txt")).write_text("\n".join(r.line() for r in reports) + "\n")
    stream.write("\n".join(r.line() for r in reports) + "\n")
    return reports


def _cmd_verify(cfg, p, stream):
    reports = verify_identities(p, cfg.k_grid(), cfg.tolerance)
    _emit(cfg, [r.line() for r in reports], stream)
    return reports


DISPATCH = {"scatter": _cmd_scatter, "factorize": _cmd_factorize,
            "boundstates": _cmd_boundstates, "levinson": _cmd_levinson,
            "halfline": _cmd_halfline, "verify": _cmd_verify}


def run(cfg: RunConfig, stream=None, err=None) -> int:
    """Execute one command; returns the process exit code."""
    stream = sys.stdout if stream is None else stream
    err = sys.stderr if err is None else err
    try:
        p = parse_potential_file(cfg.potential)
        checks = DISPATCH[cfg.command](cfg, p, stream)
    except ScatteringError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    return 0 if all(c.passed for c in checks) else 1


def _floats(text: str) -> tuple:
    return tuple(float(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matscat",
        description="Scattering data, factorization, bound states and Levinson checks "
                    "for piecewise-constant matrix potentials.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--potential", required=True, help="JSON potential file")
        sp.add_argument("--kmin", type=float, default=0.1)
        sp.add_argument("--kmax", type=float, default=10.0)
        sp.add_argument("--ksteps", type=int, default=50)
        sp.add_argument("--log", action="store_true", help="log-spaced k grid")
        sp.add_argument("--cuts", type=_floats, default=(), help="comma-separated cut points")
        sp.add_argument("--out", help="output file (CSV or report)")
        sp.add_argument("--tol", type=float, help="pass/fail tolerance override")
        sp.add_argument("--kappa-max", type=float, dest="kappa_max")
        sp.add_argument("--norm-diff", action="store_true", dest="norm_diff",
                        help="add the column ||T_l - T_r||_2 (scatter)")
        sp.add_argument("--plot", action="store_true", help="write PNG figures next to --out")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.potential, args.kmin, args.kmax, args.ksteps,
                        args.log, tuple(args.cuts), args.out, args.tol, args.kappa_max,
                        args.norm_diff, args.plot)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
