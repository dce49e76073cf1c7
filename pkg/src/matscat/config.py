"""Potential configuration files (JSON) and deterministic CSV output.

Schema::

    {"n": 2,
     "fragments": [{"x_min": -2, "x_max": 0,
                    "matrix_re": [[3, -2], [-2, -5]],
                    "matrix_im": [[0, 1], [-1, 0]]}]}

``matrix_im`` is optional and defaults to zero.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError
from .jost import ScatteringData
from .potential import Fragment, PiecewisePotential


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", where)
    return float(value)


def _matrix(rows, n, where):
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"expected {n} rows", where)
    out = np.zeros((n, n))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row length must be {n}", f"{where}[{i}]")
        for j, v in enumerate(row):
            out[i, j] = _number(v, f"{where}[{i}][{j}]")
    return out


def potential_from_dict(data) -> PiecewisePotential:
    """Build and validate a potential from the parsed JSON object."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "<root>")
    if "n" not in data:
        raise ParseError("missing field", "n")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"must be a positive integer, got {n!r}", "n")
    frags_in = data.get("fragments", [])
    if not isinstance(frags_in, list):
        raise ParseError("must be a list", "fragments")
    frags = []
    for j, f in enumerate(frags_in):
        where = f"fragments[{j}]"
        if not isinstance(f, dict):
            raise ParseError("must be an object", where)
        for key in ("x_min", "x_max", "matrix_re"):
            if key not in f:
                raise ParseError("missing field", f"{where}.{key}")
        re = _matrix(f["matrix_re"], n, f"{where}.matrix_re")
        im = _matrix(f["matrix_im"], n, f"{where}.matrix_im") if "matrix_im" in f else 0.0
        frags.append(Fragment(_number(f["x_min"], f"{where}.x_min"),
                              _number(f["x_max"], f"{where}.x_max"), re + 1j * im))
    return PiecewisePotential(n, tuple(frags)).validate()


def parse_potential_text(text: str) -> PiecewisePotential:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return potential_from_dict(data)


def parse_potential_file(path) -> PiecewisePotential:
    """Read, parse and validate a potential file.

    Raises
    ------
    ParseError
        Malformed JSON or schema violation, with the line or field.
    ValidationError
        Forwarded from :meth:`PiecewisePotential.validate`.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from exc
    return parse_potential_text(text)


def potential_to_dict(p: PiecewisePotential) -> dict:
    frags = []
    for f in p.fragments:
        entry = {"x_min": f.x_min, "x_max": f.x_max, "matrix_re": f.matrix.real.tolist()}
        if np.any(f.matrix.imag):
            entry["matrix_im"] = f.matrix.imag.tolist()
        frags.append(entry)
    return {"n": p.n, "fragments": frags}


def serialize_potential(p: PiecewisePotential) -> str:
    return json.dumps(potential_to_dict(p), indent=2)


def scattering_header(n: int, norm_diff: bool = False) -> list[str]:
    cols = ["k"]
    for name in ("Tl", "Tr", "L", "R"):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                cols += [f"{name}_re_{i}{j}", f"{name}_im_{i}{j}"]
    if norm_diff:
        cols.append("norm_Tl_minus_Tr")
    return cols


def scattering_row(d: ScatteringData, norm_diff: float | None = None) -> list[str]:
    row = [fmt(np.real(d.k))]
    for m in (d.Tl, d.Tr, d.L, d.R):
        for z in np.asarray(m).ravel():
            row += [fmt(z.real), fmt(z.imag)]
    if norm_diff is not None:
        row.append(fmt(norm_diff))
    return row


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)
