"""CSV ingestion and result serialization.

The CSV dialect is deliberately plain: comma-separated, one observation
per row, an optional single header row (detected by a non-numeric first
row).  Missing or non-finite values are rejected, never imputed.  Floats
are written with ``repr`` so a simulate -> CSV -> analyze round trip is
bit-exact.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, IoError, TooFewObservations


@dataclass(frozen=True)
class Series:
    """An n x d matrix of observations with one label per column."""

    values: np.ndarray
    labels: list

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def column(self, key) -> np.ndarray:
        """Select a column by name or 0-based index (int or digit string)."""
        if isinstance(key, (int, np.integer)):
            index = int(key)
        elif isinstance(key, str) and key.strip().lstrip("-").isdigit():
            index = int(key)
        else:
            try:
                index = self.labels.index(key)
            except ValueError:
                raise ConfigError(
                    f"no column named {key!r}; available: {self.labels}"
                )
        if not 0 <= index < len(self.labels):
            raise ConfigError(
                f"column index {index} out of range 0..{len(self.labels) - 1}"
            )
        return self.values[:, index]


def _try_floats(fields):
    try:
        return [float(f) for f in fields]
    except ValueError:
        return None


def read_csv(path) -> Series:
    """Load a CSV file into a :class:`Series`.

    Raises :class:`IoError` with the offending line number on parse
    failures or non-finite values.
    """
    try:
        with open(path, newline="") as handle:
            rows = [
                (lineno, row)
                for lineno, row in enumerate(csv.reader(handle), start=1)
                if row
            ]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}")
    if not rows:
        raise IoError(f"{path}: empty file")

    first_lineno, first = rows[0]
    first_values = _try_floats(first)
    if first_values is None:
        labels = [f.strip() for f in first]
        data_rows = rows[1:]
    else:
        labels = [f"col{i}" for i in range(len(first))]
        data_rows = rows
    if len(set(labels)) != len(labels):
        raise IoError(f"{path}: duplicate column labels {labels}")

    width = len(labels)
    values = []
    for lineno, row in data_rows:
        if len(row) != width:
            raise IoError(
                f"{path}:{lineno}: expected {width} fields, got {len(row)}"
            )
        parsed = _try_floats(row)
        if parsed is None:
            raise IoError(f"{path}:{lineno}: non-numeric value in {row}")
        if not all(math.isfinite(v) for v in parsed):
            raise IoError(f"{path}:{lineno}: non-finite value in {row}")
        values.append(parsed)
    if len(values) < 2:
        raise TooFewObservations(f"{path}: need at least 2 observations")
    return Series(values=np.asarray(values, dtype=float), labels=labels)


def write_series_csv(path, values: np.ndarray, label: str = "x") -> None:
    """Write a single column with a header row, round-trippable bit-exactly."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([label])
        for v in np.asarray(values, dtype=float):
            writer.writerow([repr(float(v))])


def level_column_name(level: float) -> str:
    return f"q{100.0 * level:02g}"


def curve_tsv(lags, values, envelopes: dict | None = None) -> str:
    """Tab-separated lag curve, optionally with per-level envelope columns.

    ``envelopes`` maps a column-name prefix ("" for the primary envelope)
    to a {level: values} mapping; columns appear in level order.
    """
    header = ["lag", "value"]
    columns = []
    if envelopes:
        for prefix, quantiles in envelopes.items():
            for level in sorted(quantiles):
                name = level_column_name(level)
                header.append(f"{prefix}{name}" if prefix else name)
                columns.append(np.asarray(quantiles[level], dtype=float))
    lines = ["\t".join(header)]
    for i, (lag, value) in enumerate(zip(lags, values)):
        row = [str(int(lag)), repr(float(value))]
        row.extend(repr(float(col[i])) for col in columns)
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def result_json(result: dict) -> str:
    return json.dumps(result, indent=2, sort_keys=False) + "\n"
