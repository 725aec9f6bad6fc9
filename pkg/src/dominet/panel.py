"""Multivariate time-series panels: loading, validation and preprocessing.

A panel is a T x M matrix of observations (rows = time, columns = series).
Each series is identified by a (unit, variable) pair; series without a unit
(global series such as commodity prices) carry the reserved unit ``GLOBAL``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DegenerateSeriesError, DimensionError

GLOBAL_UNIT = "GLOBAL"


@dataclass(frozen=True, order=True)
class SeriesId:
    """Identifier of one panel column: a unit label and a variable label."""

    unit: str
    variable: str

    @classmethod
    def parse(cls, header: str) -> "SeriesId":
        """Parse a CSV header cell: ``unit:variable`` or a bare ``variable``.

        A bare variable name (no colon) is a global series and gets the
        reserved unit ``GLOBAL``.
        """
        header = header.strip()
        if not header:
            raise DataError("empty series header")
        if ":" in header:
            unit, _, variable = header.partition(":")
            unit = unit.strip()
            variable = variable.strip()
            if not unit or not variable:
                raise DataError(f"malformed series header {header!r}")
            return cls(unit, variable)
        return cls(GLOBAL_UNIT, header)

    @property
    def is_global(self) -> bool:
        return self.unit == GLOBAL_UNIT

    def __str__(self) -> str:
        if self.is_global:
            return self.variable
        return f"{self.unit}:{self.variable}"


@dataclass(frozen=True, eq=False)
class Panel:
    """Immutable T x M observation matrix with series and time labels.

    ``preprocessing_log`` records the transforms applied so far, in order
    (e.g. ``("diff", "std")``).
    """

    data: np.ndarray
    ids: tuple[SeriesId, ...]
    t_labels: tuple[str, ...]
    preprocessing_log: tuple[str, ...] = field(default=())

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise DimensionError("panel data must be a 2-d array")
        t, m = data.shape
        if t < 1 or m < 2:
            raise DimensionError(f"panel needs T >= 1 and M >= 2, got {t}x{m}")
        if len(self.ids) != m:
            raise DimensionError(f"{len(self.ids)} ids for {m} columns")
        if len(self.t_labels) != t:
            raise DimensionError(f"{len(self.t_labels)} time labels for {t} rows")
        if len(set(self.ids)) != m:
            dupes = sorted({str(s) for s in self.ids if list(self.ids).count(s) > 1})
            raise DataError(f"duplicate series ids: {', '.join(dupes)}")
        if not np.all(np.isfinite(data)):
            raise DataError("panel contains non-finite values")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "t_labels", tuple(str(t) for t in self.t_labels))
        object.__setattr__(self, "preprocessing_log", tuple(self.preprocessing_log))

    @property
    def n_periods(self) -> int:
        return self.data.shape[0]

    @property
    def n_series(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Panel):
            return NotImplemented
        return (
            self.ids == other.ids
            and self.t_labels == other.t_labels
            and self.preprocessing_log == other.preprocessing_log
            and np.array_equal(self.data, other.data)
        )

    def column(self, i: int) -> np.ndarray:
        return self.data[:, i]

    def index_of(self, sid: SeriesId) -> int:
        try:
            return self.ids.index(sid)
        except ValueError:
            raise DataError(f"series {sid} not in panel") from None

    def select(self, indices) -> "Panel":
        """Sub-panel with the given columns, preserving order and log."""
        indices = list(indices)
        return Panel(
            self.data[:, indices],
            tuple(self.ids[i] for i in indices),
            self.t_labels,
            self.preprocessing_log,
        )

    def with_columns(self, new_data: np.ndarray, new_ids, log_entry: str | None = None) -> "Panel":
        """Panel with extra columns appended on the right."""
        new_data = np.atleast_2d(np.asarray(new_data, dtype=float))
        if new_data.shape[0] != self.n_periods:
            raise DimensionError("appended columns must match the panel length")
        log = self.preprocessing_log + ((log_entry,) if log_entry else ())
        return Panel(
            np.hstack([self.data, new_data]),
            self.ids + tuple(new_ids),
            self.t_labels,
            log,
        )


def load_csv(path) -> Panel:
    """Load a panel from CSV.

    Expected layout: header row ``time,unit:variable,unit:variable,...``
    followed by a numeric rectangular body. Raises DataError with the
    offending location for missing values, duplicate headers or
    non-numeric cells.
    """
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path, "r", newline="") as fh:
            text = fh.read()
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise DataError("empty CSV file")
    header = rows[0]
    if not header or header[0].strip() != "time":
        raise DataError("first header cell must be 'time'")
    raw_ids = [cell for cell in header[1:]]
    if len(raw_ids) < 2:
        raise DataError("panel needs at least 2 series columns")
    ids = [SeriesId.parse(cell) for cell in raw_ids]
    seen: dict[SeriesId, str] = {}
    for cell, sid in zip(raw_ids, ids):
        if sid in seen:
            raise DataError(f"duplicate header {cell!r} (same series as {seen[sid]!r})")
        seen[sid] = cell

    body = rows[1:]
    if len(body) < 3:
        raise DataError(f"panel needs at least 3 rows of observations, got {len(body)}")
    t_labels = []
    values = np.empty((len(body), len(ids)), dtype=float)
    for r, row in enumerate(body, start=1):
        if len(row) != len(ids) + 1:
            raise DataError(f"row {r} has {len(row)} cells, expected {len(ids) + 1}")
        t_labels.append(row[0].strip())
        for c, cell in enumerate(row[1:]):
            cell = cell.strip()
            if cell == "":
                raise DataError(f"missing value at (t={r}, {ids[c]})")
            try:
                values[r - 1, c] = float(cell)
            except ValueError:
                raise DataError(
                    f"non-numeric value {cell!r} at (t={r}, {ids[c]})"
                ) from None
            if not np.isfinite(values[r - 1, c]):
                raise DataError(f"non-finite value at (t={r}, {ids[c]})")
    return Panel(values, tuple(ids), tuple(t_labels), ())


def write_csv(panel: Panel, path) -> None:
    """Write a panel to CSV with round-trippable float formatting."""

    def fmt(x: float) -> str:
        return format(x, ".17g")

    own = not hasattr(path, "write")
    fh = open(path, "w", newline="") if own else path
    try:
        writer = csv.writer(fh)
        writer.writerow(["time"] + [str(s) for s in panel.ids])
        for t in range(panel.n_periods):
            writer.writerow([panel.t_labels[t]] + [fmt(v) for v in panel.data[t]])
    finally:
        if own:
            fh.close()


def first_difference(panel: Panel) -> Panel:
    """First-difference every column: out[t] = in[t+1] - in[t]."""
    if panel.n_periods < 2:
        raise DimensionError("first difference needs at least 2 rows")
    diffed = panel.data[1:] - panel.data[:-1]
    return Panel(
        diffed,
        panel.ids,
        panel.t_labels[1:],
        panel.preprocessing_log + ("diff",),
    )


def standardize(panel: Panel) -> Panel:
    """Demean and scale every column to unit sample variance (1/(T-1))."""
    if panel.n_periods < 2:
        raise DimensionError("standardize needs at least 2 rows")
    means = panel.data.mean(axis=0)
    sds = panel.data.std(axis=0, ddof=1)
    for j, sd in enumerate(sds):
        if sd <= 0.0:
            raise DegenerateSeriesError(
                f"series {panel.ids[j]} has zero variance", series=panel.ids[j]
            )
    return Panel(
        (panel.data - means) / sds,
        panel.ids,
        panel.t_labels,
        panel.preprocessing_log + ("std",),
    )


def cross_section_averages(panel: Panel) -> Panel:
    """Append the equal-weight cross-unit mean of every variable.

    For each variable label v observed on at least one non-global unit,
    a series (GLOBAL, "csa_v") is appended. Global series are aggregates
    already and are skipped. The appended columns are not re-standardized.
    """
    variables: list[str] = []
    members: dict[str, list[int]] = {}
    for j, sid in enumerate(panel.ids):
        if sid.is_global:
            continue
        if sid.variable not in members:
            members[sid.variable] = []
            variables.append(sid.variable)
        members[sid.variable].append(j)
    if not variables:
        raise DataError("no unit-level variables to average")
    if not any(len(members[v]) >= 2 for v in variables):
        raise DataError("cross-section averages need a variable with >= 2 units")
    cols = np.column_stack([panel.data[:, members[v]].mean(axis=1) for v in variables])
    new_ids = [SeriesId(GLOBAL_UNIT, f"csa_{v}") for v in variables]
    return panel.with_columns(cols, new_ids, log_entry="csa")
