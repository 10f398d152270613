"""Parsed steerkit scan CSVs with schema validation."""

import csv

import numpy as np

#: Columns each figure requires from its scan CSV.
REQUIRED_COLUMNS = {
    1: ("C", "S", "S_M"),
    2: ("s", "C", "S", "steerable", "bell_violable"),
    3: ("p", "theta", "steerable_ab", "bell_violable", "bob_to_alice_unsteerable"),
}


class SchemaError(ValueError):
    """CSV header or contents do not match the documented scan schema."""


class ScanTable:
    """Column-oriented view of one scan CSV."""

    def __init__(self, header, columns, path=""):
        self.header = tuple(header)
        self.columns = columns
        self.path = path

    def __len__(self):
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def floats(self, name):
        if name not in self.columns:
            raise SchemaError(f"column {name!r} missing from {self.path}")
        return np.array([float(v) for v in self.columns[name]])

    def flags(self, name):
        if name not in self.columns:
            raise SchemaError(f"column {name!r} missing from {self.path}")
        return np.array([v.strip() == "1" for v in self.columns[name]])

    def validate_for(self, figure):
        missing = [c for c in REQUIRED_COLUMNS[figure] if c not in self.columns]
        if missing:
            raise SchemaError(
                f"{self.path}: columns {missing} required for figure {figure}"
            )
        if len(self) == 0:
            raise SchemaError(f"{self.path}: table has no rows")
        return self


def load_table(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {i + 2} has {len(row)} fields")
    columns = {name: [row[j] for row in rows] for j, name in enumerate(header)}
    return ScanTable(header, columns, path=path)
