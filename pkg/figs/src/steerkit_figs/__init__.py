"""Figure scripts for steerkit scan CSVs."""

__version__ = "0.1.0"
