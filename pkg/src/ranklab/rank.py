"""Normalization, relative prices and rank occupancy.

Commodities are quoted in incomparable units, so prices are first divided
by their value on a common base date. Ranks are then taken on the
normalized values: rank 1 is the most expensive commodity, rank N the
cheapest. Ties are broken by ascending commodity index, which keeps every
downstream computation reproducible on discrete data.

Indices are 0-based throughout: ``occupant[k]`` is the column index of the
commodity holding rank ``k + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .errors import DomainError
from .panel import PricePanel, _readonly


@dataclass(frozen=True)
class NormalizedPanel:
    dates: tuple[date, ...]
    commodities: tuple[str, ...]
    values: np.ndarray = field(repr=False)
    base_date: date
    frequency: str = "daily"

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        if np.any(self.values <= 0) or not np.all(np.isfinite(self.values)):
            raise DomainError("normalized values must be finite and strictly positive")

    @property
    def shape(self):
        return self.values.shape

    @property
    def periods_per_year(self) -> int:
        return 252 if self.frequency == "daily" else 12


@dataclass(frozen=True)
class RelativePriceField:
    """``theta[t, i] = N * v[t, i] / sum_j v[t, j]``; every row sums to N."""

    dates: tuple[date, ...]
    commodities: tuple[str, ...]
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "theta", _readonly(self.theta))


@dataclass(frozen=True)
class RankSnapshot:
    date: date
    ranked_theta: np.ndarray
    occupant: np.ndarray


def normalize(panel: PricePanel | NormalizedPanel, base_date: date | None = None) -> NormalizedPanel:
    """Divide every column by its value on ``base_date`` (default: first date)."""
    dates = tuple(panel.dates)
    base_date = dates[0] if base_date is None else base_date
    try:
        t0 = dates.index(base_date)
    except ValueError:
        raise DomainError(f"base date {base_date} not in panel") from None
    raw = panel.prices if isinstance(panel, PricePanel) else panel.values
    values = raw / raw[t0]
    # exact ones on the base row, independent of rounding in the division
    values[t0] = 1.0
    return NormalizedPanel(dates, tuple(panel.commodities), values, base_date, panel.frequency)


def relative_prices(norm: NormalizedPanel) -> RelativePriceField:
    v = norm.values
    n = v.shape[1]
    theta = n * v / v.sum(axis=1, keepdims=True)
    return RelativePriceField(norm.dates, norm.commodities, theta)


def occupants(values: np.ndarray) -> np.ndarray:
    """Occupancy permutation for every row of ``values``.

    Returns an integer array of the same shape whose row ``t`` lists column
    indices from highest to lowest value, ties by ascending index.
    """
    values = np.asarray(values)
    # stable sort on the negated values keeps tied columns in index order
    return np.argsort(-values, axis=-1, kind="stable")


def rank_snapshot(field: RelativePriceField, t: date | int) -> RankSnapshot:
    if isinstance(t, date):
        try:
            t = field.dates.index(t)
        except ValueError:
            raise DomainError(f"date {t} not in field") from None
    if not -len(field.dates) <= t < len(field.dates):
        raise DomainError(f"period index {t} out of range")
    row = field.theta[t]
    occ = occupants(row)
    return RankSnapshot(field.dates[t], row[occ], occ)


def rank_occupancy(field: RelativePriceField | np.ndarray) -> np.ndarray:
    """Fraction of periods commodity ``i`` (row) spends at rank ``k`` (column)."""
    theta = field.theta if isinstance(field, RelativePriceField) else np.asarray(field)
    T, N = theta.shape
    if T < 1:
        raise DomainError("need at least one period")
    occ = occupants(theta)
    counts = np.zeros((N, N))
    ranks = np.broadcast_to(np.arange(N), occ.shape)
    np.add.at(counts, (occ.ravel(), ranks.ravel()), 1.0)
    return counts / T
