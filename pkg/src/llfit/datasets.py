"""Bundled data and file loading for the command line tools."""
from __future__ import annotations

from .distribution import Sample

__all__ = ["INSULATING_FLUID", "BUILTIN_DATASETS", "load_values", "load_sample"]

# Breakdown time, in minutes, of an insulating fluid between electrodes at
# 34 kV; 19 observations, published order.
INSULATING_FLUID = (
    0.19, 0.78, 0.96, 1.31, 2.78, 3.16, 4.15, 4.67, 4.85, 6.50,
    7.35, 8.01, 8.27, 12.06, 31.75, 32.52, 33.91, 36.71, 72.89,
)

BUILTIN_DATASETS = {"insulating-fluid": INSULATING_FLUID}


class DatasetError(ValueError):
    """Unreadable file or a record that is not a positive number."""


def load_values(source: str) -> list[float]:
    """Read observations from ``builtin:<name>`` or from a file.

    Files hold one positive value per record, comma- or whitespace-
    delimited, with an optional single header line.  Errors name the
    offending file and line.
    """
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        try:
            return list(BUILTIN_DATASETS[name])
        except KeyError:
            raise DatasetError(
                f"unknown builtin dataset {name!r}; "
                f"available: {sorted(BUILTIN_DATASETS)}") from None
    try:
        with open(source) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DatasetError(f"cannot read {source}: {exc}") from None
    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        tokens = text.replace(",", " ").split()
        if len(tokens) != 1:
            raise DatasetError(
                f"{source}:{lineno}: expected one value per record, "
                f"got {len(tokens)}")
        try:
            value = float(tokens[0])
        except ValueError:
            if lineno == 1 and not values:
                continue  # header line
            raise DatasetError(
                f"{source}:{lineno}: not a number: {tokens[0]!r}") from None
        if not value > 0.0:
            raise DatasetError(
                f"{source}:{lineno}: observations must be positive, "
                f"got {tokens[0]}")
        values.append(value)
    if not values:
        raise DatasetError(f"{source}: no observations found")
    return values


def load_sample(source: str) -> Sample:
    return Sample(load_values(source))
