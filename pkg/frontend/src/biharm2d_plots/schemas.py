"""Loaders for the solver's CSV artifacts.

Each loader validates the header against the documented schema before
touching any values and raises :class:`SchemaError` on mismatch.  A
``.json`` sidecar next to a grid CSV supplies the grid shape and any
extras (point-load positions); without one the shape is inferred from
the unique coordinate values.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

CONVERGENCE_HEADER = ["n_panels", "n_d", "system_size", "eps"]
CONDITION_HEADER = ["h", "kappa_ours", "kappa_farkas"]
GRID_HEADER = ["x", "y", "inside", "w"]
GRID_REF_COLUMNS = ["w_ref", "abs_err"]


class SchemaError(ValueError):
    """The file does not match the documented artifact schema."""


@dataclass
class GridData:
    """One grid artifact reshaped to (ny, nx); exterior cells are NaN."""

    x: np.ndarray
    y: np.ndarray
    inside: np.ndarray
    w: np.ndarray
    w_ref: np.ndarray | None = None
    abs_err: np.ndarray | None = None
    extras: dict = field(default_factory=dict)


def _read_rows(path: str, expected_header: list, allow_extra=None) -> list:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: empty file, expected header "
                          f"{expected_header}")
    header = rows[0]
    ok = header == expected_header or (
        allow_extra is not None and header == expected_header + allow_extra)
    if not ok:
        raise SchemaError(f"{path}: header {header} does not match schema "
                          f"{expected_header}")
    if len(rows) == 1:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_convergence(path: str) -> np.ndarray:
    """Rows (n_panels, n_d, system_size, eps) as a float array."""
    rows = _read_rows(path, CONVERGENCE_HEADER)
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value ({exc})") from exc
    if np.any(data[:, 3] <= 0):
        raise SchemaError(f"{path}: eps values must be positive")
    return data


def load_condition(path: str) -> np.ndarray:
    """Rows (h, kappa_ours, kappa_farkas) as a float array."""
    rows = _read_rows(path, CONDITION_HEADER)
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value ({exc})") from exc
    if np.any(data <= 0):
        raise SchemaError(f"{path}: h and condition numbers must be positive")
    return data


def _sidecar(path: str) -> dict:
    side = path + ".json"
    if not os.path.exists(side):
        return {}
    with open(side, encoding="utf-8") as fh:
        return json.load(fh)


def load_grid(path: str) -> GridData:
    """Grid artifact with blank (exterior) cells mapped to NaN."""
    rows = _read_rows(path, GRID_HEADER, allow_extra=GRID_REF_COLUMNS)
    has_ref = rows[0] == GRID_HEADER + GRID_REF_COLUMNS
    n = len(rows) - 1
    cols = {name: np.full(n, np.nan) for name in rows[0]}
    try:
        for i, r in enumerate(rows[1:]):
            if len(r) != len(rows[0]):
                raise SchemaError(f"{path}: row {i + 2} has {len(r)} fields")
            for name, v in zip(rows[0], r):
                if v != "":
                    cols[name][i] = float(v)
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value ({exc})") from exc
    inside = cols["inside"].astype(bool)
    if np.any(np.isnan(cols["inside"])):
        raise SchemaError(f"{path}: 'inside' column must be 0/1 on all rows")
    if np.any(inside & np.isnan(cols["w"])):
        raise SchemaError(f"{path}: interior rows must carry a w value")

    meta = _sidecar(path)
    shape = meta.get("shape")
    if shape is None:
        shape = [len(np.unique(cols["y"])), len(np.unique(cols["x"]))]
    ny, nx = int(shape[0]), int(shape[1])
    if ny * nx != n:
        raise SchemaError(f"{path}: {n} rows do not fill a {ny}x{nx} grid")

    def reshape(name):
        return cols[name].reshape(ny, nx)

    extras = {k: v for k, v in meta.items()
              if k not in ("config", "shape", "extent")}
    return GridData(x=reshape("x"), y=reshape("y"),
                    inside=inside.reshape(ny, nx), w=reshape("w"),
                    w_ref=reshape("w_ref") if has_ref else None,
                    abs_err=reshape("abs_err") if has_ref else None,
                    extras=extras)
