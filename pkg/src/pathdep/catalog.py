"""Earthquake catalog ingestion: CSV rows ``time,magnitude[,lat,lon]`` to an EventCatalog."""
from __future__ import annotations

import csv
import logging
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .hawkes import EventCatalog

log = logging.getLogger(__name__)

SECONDS_PER_YEAR = 365.25 * 86400.0
DUPLICATE_NUDGE = 1e-9  # years


class CatalogParseError(ValueError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


def parse_timestamp(text: str) -> datetime:
    """ISO-8601 timestamp; naive values are taken as UTC."""
    s = text.strip()
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def years_between(start: datetime, end: datetime) -> float:
    return (end - start).total_seconds() / SECONDS_PER_YEAR


def read_rows(path) -> list[tuple[datetime, float]]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip().lower() for f in (reader.fieldnames or [])]
        if "time" not in fields or "magnitude" not in fields:
            raise CatalogParseError(1, "header must contain 'time' and 'magnitude'")
        reader.fieldnames = fields
        for lineno, rec in enumerate(reader, start=2):
            try:
                ts = parse_timestamp(rec["time"] or "")
                mag = float(rec["magnitude"])
            except (TypeError, ValueError) as exc:
                raise CatalogParseError(lineno, str(exc)) from None
            if not np.isfinite(mag):
                raise CatalogParseError(lineno, f"non-finite magnitude {rec['magnitude']!r}")
            rows.append((ts, mag))
    return rows


def load_catalog(
    path,
    min_magnitude: float = 5.0,
    start: datetime | str | None = None,
    end: datetime | str | None = None,
) -> EventCatalog:
    """Load, filter (magnitude >= ``min_magnitude``, start <= time <= end) and convert to years.

    Without an explicit window the first and last retained events bound it.
    Tied timestamps are separated by successive nudges of 1e-9 years.
    """
    path = Path(path)
    rows = read_rows(path)
    start = parse_timestamp(start) if isinstance(start, str) else start
    end = parse_timestamp(end) if isinstance(end, str) else end

    kept = [(ts, m) for ts, m in rows if m >= min_magnitude]
    if start is not None:
        kept = [(ts, m) for ts, m in kept if ts >= start]
    if end is not None:
        kept = [(ts, m) for ts, m in kept if ts <= end]
    kept.sort(key=lambda r: r[0])

    if start is None:
        start = kept[0][0] if kept else None
    if end is None:
        end = kept[-1][0] if kept else None
    if start is None or end is None:
        raise ValueError(f"{path}: no window given and no events to infer one from")
    horizon = years_between(start, end)
    if horizon <= 0:
        raise ValueError("window end must be after window start")

    times = np.array([years_between(start, ts) for ts, _ in kept])
    mags = np.array([m for _, m in kept])
    for i in range(1, times.size):
        if times[i] <= times[i - 1]:
            times[i] = times[i - 1] + DUPLICATE_NUDGE
    if times.size and times[-1] > horizon:
        horizon = float(times[-1])  # nudges can spill past the window end
    if not times.size:
        warnings.warn(f"{path}: no events with magnitude >= {min_magnitude} in window", stacklevel=2)
    return EventCatalog(times, horizon, mags)


def write_catalog(catalog: EventCatalog, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["t_years"] + (["magnitude"] if catalog.magnitudes is not None else [])
        w.writerow(header)
        for i, t in enumerate(catalog.times):
            row = [repr(float(t))]
            if catalog.magnitudes is not None:
                row.append(repr(float(catalog.magnitudes[i])))
            w.writerow(row)


def read_normalized(path, horizon: float) -> EventCatalog:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return EventCatalog(np.array([]), horizon)
    mags = data[:, 1] if data.shape[1] > 1 else None
    return EventCatalog(data[:, 0], horizon, mags)
