"""
CSV emission.

Every file starts with a single ``#`` line of ``key=value`` metadata
(scenario hash and seed first), then a header row, then data rows. Floats
are written with 9 significant digits, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.9g}"
    return str(x)


def comment_line(metadata: dict) -> str:
    return "# " + " ".join(f"{k}={fmt(v)}" for k, v in metadata.items())


def _write(path, metadata: dict, header, rows) -> None:
    buf = io.StringIO()
    buf.write(comment_line(metadata) + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    path = Path(path)
    try:
        path.write_bytes(buf.getvalue().encode())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(result, path) -> None:
    """Write a :class:`~nfsec.sweeps.SweepResult`: one row per axis value."""
    header = [result.axis_name] + [s.value for s in result.schemes]
    rows = ([x, *r] for x, r in zip(result.axis_values, result.table))
    _write(path, result.metadata, header, rows)


def emit_spectrum_csv(spectrum, path) -> None:
    """Row-major map: first column the angle, header row the radii."""
    header = ["angle_rad\\radius_m"] + [fmt(r) for r in spectrum.radii]
    rows = ([a, *vals] for a, vals in zip(spectrum.angles, spectrum.values))
    _write(path, spectrum.metadata, header, rows)


DESIGN_COLUMNS = ["scheme", "r_s_m", "theta_s_rad", "r_a_m", "theta_a_rad", "alpha",
                  "rate_user", "rate_eve", "secrecy_rate"]


def design_rows(designs: dict):
    for scheme, d in designs.items():
        qa = d.qa
        yield [scheme.value, d.qs.radius, d.qs.angle,
               qa.radius if qa is not None else "", qa.angle if qa is not None else "",
               d.alpha, d.rate.rate_user, d.rate.rate_eve, d.rate.secrecy_rate]


def emit_designs_csv(designs: dict, metadata: dict, path) -> None:
    _write(path, metadata, DESIGN_COLUMNS, design_rows(designs))


def read_csv(path):
    """Parse a file written here: (metadata, header, rows of strings)."""
    lines = Path(path).read_text().splitlines()
    meta = dict(item.split("=", 1) for item in lines[0][2:].split())
    reader = csv.reader(lines[1:])
    header = next(reader)
    return meta, header, list(reader)
