"""Per-x report tables and their CSV form.

Column order is fixed; a cell that does not apply to a row is left empty,
and every file carries the header row. Floats are written with ten
significant digits so repeated runs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

COLUMNS = (
    "x",
    "ln_predicted",
    "ln_bracket_lo",
    "ln_bracket_hi",
    "ln_path_cert",
    "ln_sandwich_lo",
    "ln_sandwich_hi",
    "ln_atom_lower",
    "p_hat",
    "ci99_lo",
    "ci99_hi",
    "ln_p_hat",
    "ratio_to_normalizer",
)


def fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return format(float(value), ".10g")


def _parse(cell: str) -> Optional[float]:
    return float(cell) if cell != "" else None


@dataclass
class TailReport:
    """Rows keyed by x; each row maps column name to a float or None.

    ``meta`` holds run facts that are not per-x columns; they go to the sidecar.
    """

    rows: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def row(self, x: float) -> dict:
        x = float(x)
        if x not in self.rows:
            self.rows[x] = {c: None for c in COLUMNS}
            self.rows[x]["x"] = x
        return self.rows[x]

    def set(self, x: float, **cells):
        row = self.row(x)
        for name, value in cells.items():
            if name not in COLUMNS:
                raise KeyError(f"unknown report column {name!r}")
            row[name] = value

    def xs(self) -> list:
        return sorted(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(COLUMNS)
        for x in self.xs():
            w.writerow([fmt(self.rows[x][c]) for c in COLUMNS])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TailReport":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or tuple(header) != COLUMNS:
            raise ValueError("not a tail report: header does not match the fixed schema")
        rep = cls()
        for cells in reader:
            if not cells:
                continue
            if len(cells) != len(COLUMNS):
                raise ValueError(f"row has {len(cells)} cells, expected {len(COLUMNS)}")
            vals = dict(zip(COLUMNS, (_parse(c) for c in cells)))
            rep.set(vals.pop("x"), **vals)
        return rep


def merge_reports(reports: Iterable[TailReport]) -> TailReport:
    """Union of rows by x. Two reports may only fill the same cell with the same value."""
    out = TailReport()
    for rep in reports:
        for x in rep.xs():
            row = out.row(x)
            for c in COLUMNS[1:]:
                new = rep.rows[x][c]
                if new is None:
                    continue
                old = row[c]
                if old is not None and not _same(old, new):
                    raise ValueError(f"conflicting {c} at x={fmt(x)}: {fmt(old)} vs {fmt(new)}")
                row[c] = new
    return out


def _same(a: float, b: float) -> bool:
    return fmt(a) == fmt(b) or (math.isnan(a) and math.isnan(b))
