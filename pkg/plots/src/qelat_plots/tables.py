"""CSV loading with strict schema checks.

Each preset declares the exact header it expects; anything else aborts
with the offending column named, so a stale or truncated simulation
output never renders into a silently wrong panel.
"""
from pathlib import Path

import numpy as np


class SchemaError(RuntimeError):
    pass


# column name -> dtype kind: "f" float, "s" string
SCHEMAS = {
    "fig1b": {"omega": "f", "n_coh": "f", "n_incoh": "f", "n_total": "f",
              "n_classical": "f"},
    "fig1b-inset": {"kx": "f", "ky": "f", "n_coh": "f", "n_incoh": "f",
                    "n_total": "f"},
    "fig2a": {"kx": "f", "ky": "f", "i_central": "f", "i_sidebands": "f",
              "i_total": "f"},
    "fig2b": {"omega_drive": "f", "branch_id": "s", "i_central_coh": "f",
              "i_central_incoh": "f", "i_sidebands": "f", "i_classical": "f"},
    "fig3a": {"period_l": "f", "omega": "f", "branch_id": "s", "x": "f",
              "re_omega_eff": "f", "im_omega_eff": "f", "stable": "f"},
    "fig3b": {"period_l": "f", "omega": "f", "branch_id": "s",
              "peak_index": "f", "omega_p": "f", "gamma_p": "f"},
    "fig3c": {"period_l": "f", "omega": "f", "branch_id": "s",
              "peak_index": "f", "omega_p": "f", "gamma_p": "f"},
    "fig3d": {"omega": "f", "direction": "s", "branch_id": "s", "n_coh": "f",
              "n_incoh": "f", "n_total": "f"},
    "fig3e": {"omega_drive": "f", "direction": "s", "branch_id": "s",
              "i_central_coh": "f", "i_central_incoh": "f",
              "i_sidebands": "f"},
}


def load_table(path, schema):
    """Columns of a CSV as a dict of arrays, validated against schema."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file {path} does not exist")
    lines = path.read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path} is empty")
    header = lines[0].split(",")
    for col in header:
        if col not in schema:
            raise SchemaError(f"{path}: unexpected column {col!r}")
    for col in schema:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r}")
    if len(lines) < 2:
        raise SchemaError(f"{path} has a header but no data rows")
    raw = [line.split(",") for line in lines[1:] if line]
    for i, row in enumerate(raw):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {i + 2} has {len(row)} fields, "
                              f"expected {len(header)}")
    cols = {}
    for j, name in enumerate(header):
        vals = [row[j] for row in raw]
        if schema[name] == "f":
            try:
                cols[name] = np.array([float(v) for v in vals])
            except ValueError as exc:
                raise SchemaError(
                    f"{path}: non-numeric value in column {name!r}: {exc}"
                ) from exc
        else:
            cols[name] = np.array(vals, dtype=object)
    return cols
