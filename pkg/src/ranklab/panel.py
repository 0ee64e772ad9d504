"""Price panels: CSV ingestion, cleaning, emission and synthesis.

A :class:`PricePanel` is a complete, rectangular ``T x N`` matrix of strictly
positive prices indexed by calendar dates (rows) and commodity identifiers
(columns). Everything downstream (ranking, backtests, estimators) consumes
this one type, whether the data came from a CSV file or from a simulated
rank-based model.
"""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Literal, Sequence

import numpy as np

from .errors import (
    DomainError,
    DuplicateKeyError,
    InsufficientDataError,
    ParseError,
)

Frequency = Literal["daily", "monthly"]
FREQUENCIES = ("daily", "monthly")
PERIODS_PER_YEAR = {"daily": 252, "monthly": 12}

_ISO_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RawPanel:
    """Parsed but possibly incomplete panel; missing cells are NaN."""

    dates: tuple[date, ...]
    commodities: tuple[str, ...]
    prices: np.ndarray
    frequency: Frequency = "daily"

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.prices)


@dataclass(frozen=True)
class PricePanel:
    """Complete panel of strictly positive prices.

    Parameters
    ----------
    dates : sequence of datetime.date
        Strictly increasing observation dates.
    commodities : sequence of str
        Distinct, case-sensitive identifiers, one per column.
    prices : array_like, shape (T, N)
        Prices in arbitrary per-commodity units.
    frequency : {"daily", "monthly"}
        Sampling frequency; drives annualization and default warm-ups.
    """

    dates: tuple[date, ...]
    commodities: tuple[str, ...]
    prices: np.ndarray = field(repr=False)
    frequency: Frequency = "daily"

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "commodities", tuple(self.commodities))
        object.__setattr__(self, "prices", _readonly(self.prices))
        T, N = len(self.dates), len(self.commodities)
        if self.prices.shape != (T, N):
            raise DomainError(f"price matrix has shape {self.prices.shape}, expected {(T, N)}")
        if self.frequency not in FREQUENCIES:
            raise DomainError(f"unknown frequency {self.frequency!r}")
        if N < 2 or T < 2:
            raise InsufficientDataError(f"panel needs N >= 2 and T >= 2, got N={N}, T={T}")
        if len(set(self.commodities)) != N:
            raise DomainError("commodity identifiers are not distinct")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise DomainError("dates are not strictly increasing")
        if not np.all(np.isfinite(self.prices)) or np.any(self.prices <= 0):
            raise DomainError("prices must be finite and strictly positive")

    @property
    def shape(self) -> tuple[int, int]:
        return self.prices.shape

    @property
    def periods_per_year(self) -> int:
        return PERIODS_PER_YEAR[self.frequency]

    def __eq__(self, other):
        if not isinstance(other, PricePanel):
            return NotImplemented
        return (
            self.dates == other.dates
            and self.commodities == other.commodities
            and self.frequency == other.frequency
            and np.array_equal(self.prices, other.prices)
        )

    __hash__ = None


@dataclass(frozen=True)
class CleaningPolicy:
    """How to turn a :class:`RawPanel` into a complete :class:`PricePanel`.

    ``mode`` is one of ``drop_incomplete_dates`` (default),
    ``drop_incomplete_commodities`` or ``forward_fill``. ``max_gap`` is only
    used by ``forward_fill``: runs of at most ``max_gap`` consecutive missing
    cells that follow an observed price are filled with that price.
    """

    mode: Literal["drop_incomplete_dates", "drop_incomplete_commodities", "forward_fill"] = (
        "drop_incomplete_dates"
    )
    max_gap: int = 0

    def __post_init__(self):
        if self.mode not in ("drop_incomplete_dates", "drop_incomplete_commodities", "forward_fill"):
            raise DomainError(f"unknown cleaning mode {self.mode!r}")
        if self.max_gap < 0:
            raise DomainError("max_gap must be >= 0")

    @classmethod
    def forward_fill(cls, max_gap):
        return cls("forward_fill", max_gap)


# -- parsing -----------------------------------------------------------------


def _parse_date(text, row):
    text = text.strip()
    if not _ISO_DATE.match(text):
        raise ParseError(f"malformed date {text!r} (expected YYYY-MM-DD)", row)
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise ParseError(f"invalid calendar date {text!r}", row) from None


def _parse_price(text, row):
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"malformed number {text!r}", row) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {text!r}", row)
    if value <= 0:
        raise DomainError(f"nonpositive price {text}", row)
    return value


def parse_csv(raw: str, layout: Literal["long", "wide"] = "wide", frequency: Frequency = "daily") -> RawPanel:
    """Parse CSV text into a (possibly incomplete) :class:`RawPanel`.

    ``long`` expects the header ``date,commodity,price``; ``wide`` expects
    ``date`` followed by one column per commodity, where an empty cell marks
    a missing observation. Rows may come in any date order; the result is
    sorted by date. Row numbers in error messages are 1-based lines of
    ``raw`` (the header is line 1).
    """
    if layout not in ("long", "wide"):
        raise ParseError(f"unknown layout {layout!r}")
    if frequency not in FREQUENCIES:
        raise DomainError(f"unknown frequency {frequency!r}")
    reader = csv.reader(io.StringIO(raw.lstrip("\ufeff")))
    rows = [(i, r) for i, r in enumerate(reader, start=1) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty input")
    header_row, header = rows[0]
    header = [h.strip() for h in header]
    body = rows[1:]

    cells: dict[tuple[date, str], float] = {}
    commodities: list[str] = []
    seen_dates: set[date] = set()

    if layout == "long":
        if header != ["date", "commodity", "price"]:
            raise ParseError(f"long layout needs header date,commodity,price, got {','.join(header)}", header_row)
        known = set()
        for i, r in body:
            if len(r) != 3:
                raise ParseError(f"expected 3 fields, got {len(r)}", i)
            d = _parse_date(r[0], i)
            name = r[1].strip()
            if not name:
                raise ParseError("empty commodity identifier", i)
            p = _parse_price(r[2], i)
            if (d, name) in cells:
                raise DuplicateKeyError(f"duplicate (date, commodity) pair ({d}, {name})", i)
            cells[(d, name)] = p
            seen_dates.add(d)
            if name not in known:
                known.add(name)
                commodities.append(name)
    else:
        if len(header) < 2 or header[0] != "date":
            raise ParseError("wide layout needs header date,<id1>,...,<idN>", header_row)
        commodities = header[1:]
        if any(not c for c in commodities):
            raise ParseError("empty commodity identifier in header", header_row)
        if len(set(commodities)) != len(commodities):
            raise DuplicateKeyError("duplicate commodity column in header", header_row)
        for i, r in body:
            if len(r) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(r)}", i)
            d = _parse_date(r[0], i)
            if d in seen_dates:
                raise DuplicateKeyError(f"duplicate date {d}", i)
            seen_dates.add(d)
            for name, cell in zip(commodities, r[1:]):
                if cell.strip():
                    cells[(d, name)] = _parse_price(cell, i)

    dates = sorted(seen_dates)
    prices = np.full((len(dates), len(commodities)), np.nan)
    row_of = {d: t for t, d in enumerate(dates)}
    col_of = {c: j for j, c in enumerate(commodities)}
    for (d, name), p in cells.items():
        prices[row_of[d], col_of[name]] = p
    return RawPanel(tuple(dates), tuple(commodities), prices, frequency)


def _fill_short_gaps(prices, max_gap):
    out = prices.copy()
    T, N = out.shape
    for j in range(N):
        col = out[:, j]
        t = 0
        while t < T:
            if not np.isnan(col[t]):
                t += 1
                continue
            start = t
            while t < T and np.isnan(col[t]):
                t += 1
            if start > 0 and t - start <= max_gap:
                col[start:t] = col[start - 1]
    return out


def clean(raw: RawPanel | PricePanel, policy: CleaningPolicy | None = None) -> PricePanel:
    """Apply ``policy`` and return a complete :class:`PricePanel`."""
    policy = policy or CleaningPolicy()
    prices = np.array(raw.prices, dtype=float)
    if prices.size == 0:
        raise InsufficientDataError("empty panel")
    dates = np.array(raw.dates, dtype=object)
    commodities = np.array(raw.commodities, dtype=object)

    if policy.mode == "drop_incomplete_commodities":
        keep = ~np.isnan(prices).any(axis=0)
        prices, commodities = prices[:, keep], commodities[keep]
    else:
        if policy.mode == "forward_fill":
            if policy.max_gap > len(dates):
                raise DomainError(f"max_gap {policy.max_gap} exceeds panel length {len(dates)}")
            prices = _fill_short_gaps(prices, policy.max_gap)
        keep = ~np.isnan(prices).any(axis=1)
        prices, dates = prices[keep], dates[keep]

    T, N = prices.shape
    if N < 2 or T < 2:
        raise InsufficientDataError(f"cleaning left N={N}, T={T}; need at least 2 of each")
    return PricePanel(tuple(dates), tuple(commodities), prices, raw.frequency)


def to_csv(panel: PricePanel | RawPanel) -> str:
    """Emit ``panel`` as wide CSV; floats are written with ``repr`` so they round-trip exactly."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", *panel.commodities])
    for d, row in zip(panel.dates, panel.prices):
        w.writerow([d.isoformat(), *("" if np.isnan(v) else repr(float(v)) for v in row)])
    return buf.getvalue()


def read_panel(path, layout="wide", frequency: Frequency = "daily", policy: CleaningPolicy | None = None) -> PricePanel:
    with open(path, encoding="utf-8") as fh:
        raw = parse_csv(fh.read(), layout, frequency)
    return clean(raw, policy)


def write_panel(panel: PricePanel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(panel))


def observation_dates(n: int, frequency: Frequency = "daily", start: date = date(2000, 1, 3)) -> list[date]:
    """``n`` synthetic observation dates: weekdays for daily, month starts for monthly."""
    out = []
    if frequency == "monthly":
        y, m = start.year, start.month
        for _ in range(n):
            out.append(date(y, m, 1))
            y, m = (y + 1, 1) if m == 12 else (y, m + 1)
        return out
    d = start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out


def synthesize(spec, seed, commodities: Sequence[str] | None = None, start: date = date(2000, 1, 3)) -> PricePanel:
    """Sample a price panel from the rank-based model ``spec``.

    Prices are ``exp`` of the simulated log prices, one row per observation
    interval including the initial state. Observation intervals of one
    twelfth of a time unit are labelled as monthly; anything else is
    labelled daily on a weekday calendar.
    """
    from .ranksde import simulate

    logp = simulate(spec, seed)
    frequency: Frequency = "monthly" if math.isclose(spec.obs_interval * 12, 1.0) else "daily"
    names = list(commodities) if commodities is not None else [f"c{i + 1}" for i in range(spec.n)]
    if len(names) != spec.n:
        raise DomainError(f"{len(names)} commodity names for {spec.n} particles")
    return PricePanel(observation_dates(len(logp), frequency, start), names, np.exp(logp), frequency)


def parse_series_csv(raw: str) -> tuple[tuple[date, ...], dict[str, np.ndarray]]:
    """Parse a ``date,<col1>,...`` table of real numbers (any sign, empty = NaN).

    Used for market series and for re-reading the series files that ranklab
    itself emits. Dates must be strictly increasing.
    """
    reader = csv.reader(io.StringIO(raw.lstrip("\ufeff")))
    rows = [(i, r) for i, r in enumerate(reader, start=1) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty input")
    header = [h.strip() for h in rows[0][1]]
    if len(header) < 2 or header[0] != "date":
        raise ParseError("series header must be date,<column>,...", rows[0][0])
    if len(set(header)) != len(header):
        raise DuplicateKeyError("duplicate column in header", rows[0][0])
    dates: list[date] = []
    values: list[list[float]] = []
    for i, r in rows[1:]:
        if len(r) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(r)}", i)
        d = _parse_date(r[0], i)
        if dates and d <= dates[-1]:
            if d == dates[-1] or d in dates:
                raise DuplicateKeyError(f"duplicate date {d}", i)
            raise ParseError(f"date {d} out of order", i)
        row = []
        for cell in r[1:]:
            cell = cell.strip()
            if not cell:
                row.append(float("nan"))
                continue
            try:
                row.append(float(cell))
            except ValueError:
                raise ParseError(f"malformed number {cell!r}", i) from None
        dates.append(d)
        values.append(row)
    table = np.array(values, dtype=float).reshape(len(dates), len(header) - 1)
    return tuple(dates), {name: table[:, j].copy() for j, name in enumerate(header[1:])}


def series_to_csv(dates: Sequence[date], columns: dict[str, Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", *columns])
    cols = [np.asarray(c, dtype=float) for c in columns.values()]
    for t, d in enumerate(dates):
        w.writerow([d.isoformat(), *("" if np.isnan(c[t]) else repr(float(c[t])) for c in cols)])
    return buf.getvalue()
