"""Low-minus-high (LMH) rank-sorted portfolio backtests.

Each period the normalized prices observed at ``t - 1`` are ranked. The
high leg holds the ``m_high`` top-ranked commodities, the low leg the
``m_low`` bottom-ranked ones, both with equal dollar weights, and the
return is realized over ``(t - 1, t]``. Ranks are recomputed every period,
so the portfolios are rebalanced at the sampling frequency of the panel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Literal

import numpy as np

from . import econometrics
from ._parallel import ordered_map
from .errors import AlignmentError, DomainError, UndefinedStatisticError
from .rank import NormalizedPanel, occupants

DEFAULT_WARMUP = {"daily": 20, "monthly": 5}


@dataclass(frozen=True)
class PortfolioSpec:
    """Cutoff ``m`` ranks per leg, ``warmup`` untraded periods.

    ``m_low``/``m_high`` override ``m`` for asymmetric legs (e.g. bottom 7
    against top 8 out of 15). ``leg`` selects which series
    :attr:`BacktestResult.selected` returns.
    """

    m: int
    warmup: int = 20
    leg: Literal["low", "high", "lmh"] = "lmh"
    m_low: int | None = None
    m_high: int | None = None

    @property
    def low_size(self) -> int:
        return self.m if self.m_low is None else self.m_low

    @property
    def high_size(self) -> int:
        return self.m if self.m_high is None else self.m_high

    def validate(self, n: int, t: int) -> None:
        lo, hi = self.low_size, self.high_size
        if self.m_low is None and self.m_high is None and not 1 <= self.m <= n // 2:
            raise DomainError(f"cutoff m={self.m} outside 1..{n // 2} for N={n}")
        if lo < 1 or hi < 1 or lo + hi > n:
            raise DomainError(f"leg sizes low={lo}, high={hi} do not fit N={n} disjointly")
        if self.warmup < 0:
            raise DomainError("warmup must be >= 0")
        if self.warmup + 2 > t:
            raise DomainError(f"warmup={self.warmup} leaves no trading period in T={t}")
        if self.leg not in ("low", "high", "lmh"):
            raise DomainError(f"unknown leg {self.leg!r}")


@dataclass(frozen=True)
class BacktestMetrics:
    annualized_lmh: float
    sharpe_lmh: float
    n_periods: int


@dataclass(frozen=True)
class BacktestResult:
    """Per-period series for ``dates`` (the trading periods after warm-up).

    ``low_members[j]``/``high_members[j]`` hold the column indices of the
    commodities held over the period ending at ``dates[j]``, ordered by rank.
    """

    dates: tuple[date, ...]
    low_logret: np.ndarray
    high_logret: np.ndarray
    lmh_logret: np.ndarray
    cum_lmh: np.ndarray
    low_simple: np.ndarray = field(repr=False)
    high_simple: np.ndarray = field(repr=False)
    low_members: np.ndarray = field(repr=False)
    high_members: np.ndarray = field(repr=False)
    metrics: BacktestMetrics
    leg: str = "lmh"

    @property
    def lmh_simple(self) -> np.ndarray:
        return self.low_simple - self.high_simple

    @property
    def selected(self) -> np.ndarray:
        return {"low": self.low_logret, "high": self.high_logret, "lmh": self.lmh_logret}[self.leg]

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "low_logret": self.low_logret,
            "high_logret": self.high_logret,
            "lmh_logret": self.lmh_logret,
            "cum_lmh": self.cum_lmh,
        }


def leg_return(norm: NormalizedPanel | np.ndarray, members, t: int) -> float:
    """Equal-dollar simple return over ``(t - 1, t]`` of the commodities in ``members``."""
    v = norm.values if isinstance(norm, NormalizedPanel) else np.asarray(norm)
    members = np.asarray(sorted(members) if isinstance(members, (set, frozenset)) else members, dtype=int)
    if members.size == 0:
        raise DomainError("empty member set")
    if not 1 <= t < v.shape[0]:
        raise DomainError(f"period index {t} out of range 1..{v.shape[0] - 1}")
    return float(np.mean(v[t, members] / v[t - 1, members] - 1.0))


def _metrics(lmh, periods_per_year):
    try:
        sr = econometrics.sharpe(lmh, periods_per_year)
    except UndefinedStatisticError:
        sr = float("nan")
    return BacktestMetrics(econometrics.annualize_mean(lmh, periods_per_year), sr, int(lmh.size))


def run_lmh(norm: NormalizedPanel, spec: PortfolioSpec) -> BacktestResult:
    v = norm.values
    T, N = v.shape
    spec.validate(N, T)
    lo, hi = spec.low_size, spec.high_size

    occ = occupants(v[spec.warmup : T - 1])
    high_members = occ[:, :hi]
    low_members = occ[:, N - lo :]
    gross = v[spec.warmup + 1 :] / v[spec.warmup : T - 1]
    rows = np.arange(gross.shape[0])[:, None]
    low_simple = np.mean(gross[rows, low_members] - 1.0, axis=1)
    high_simple = np.mean(gross[rows, high_members] - 1.0, axis=1)

    low_log = np.log1p(low_simple)
    high_log = np.log1p(high_simple)
    lmh = low_log - high_log
    return BacktestResult(
        dates=tuple(norm.dates[spec.warmup + 1 :]),
        low_logret=low_log,
        high_logret=high_log,
        lmh_logret=lmh,
        cum_lmh=np.cumsum(lmh),
        low_simple=low_simple,
        high_simple=high_simple,
        low_members=low_members,
        high_members=high_members,
        metrics=_metrics(lmh, norm.periods_per_year),
        leg=spec.leg,
    )


def market_returns(levels) -> np.ndarray:
    """Simple returns of a level series; the first entry is NaN."""
    levels = np.asarray(levels, dtype=float)
    if np.any(levels <= 0) or not np.all(np.isfinite(levels)):
        raise DomainError("market levels must be finite and positive")
    out = np.full(levels.shape, np.nan)
    out[1:] = levels[1:] / levels[:-1] - 1.0
    return out


def align_market(panel_dates, market_dates, values, kind: Literal["level", "return"] = "level") -> np.ndarray:
    """Market simple returns on exactly ``panel_dates``.

    A ``level`` series must be observed on every panel date. A ``return``
    series holds the return over the period ending on each date; its first
    value is ignored.
    """
    panel_dates, market_dates = tuple(panel_dates), tuple(market_dates)
    if len(market_dates) != len(panel_dates):
        raise AlignmentError(f"market series has {len(market_dates)} rows, panel has {len(panel_dates)}")
    if market_dates != panel_dates:
        bad = next(d for d, e in zip(market_dates, panel_dates) if d != e)
        raise AlignmentError(f"market date {bad} does not match the panel calendar")
    if kind == "level":
        return market_returns(values)
    if kind != "return":
        raise DomainError(f"unknown market series kind {kind!r}")
    out = np.array(values, dtype=float)
    out[0] = np.nan
    return out


@dataclass(frozen=True)
class SweepRow:
    cutoff: int
    fit: econometrics.RegressionFit


def sweep_cutoffs(
    norm: NormalizedPanel,
    warmup: int,
    market,
    log_returns: bool = False,
    newey_west_lags: int | None = None,
    threads: int | None = None,
) -> list[SweepRow]:
    """Regress LMH excess returns on market returns for every cutoff ``1..N//2``.

    ``market`` holds simple market returns aligned to ``norm.dates`` (entry
    ``t`` is the return over the period ending at ``t``). Both sides enter
    the regression in basis points; with ``log_returns`` the log LMH excess
    and the log market return are used instead of simple returns.
    """
    market = np.asarray(market, dtype=float)
    T, N = norm.values.shape
    if market.shape != (T,):
        raise AlignmentError(f"market series has {market.size} entries, panel has {T} dates")
    x = market[warmup + 1 :]
    if not np.all(np.isfinite(x)):
        raise AlignmentError("market series has missing values inside the trading window")
    if log_returns:
        x = np.log1p(x)
    x = econometrics.to_bp(x)

    def one(m):
        res = run_lmh(norm, PortfolioSpec(m, warmup))
        y = res.lmh_logret if log_returns else res.lmh_simple
        return SweepRow(m, econometrics.ols_market_regression(econometrics.to_bp(y), x, newey_west_lags))

    return ordered_map(one, range(1, N // 2 + 1), threads)


def sweep_to_csv(rows: list[SweepRow]) -> str:
    lines = ["cutoff,intercept_bp,se_intercept,beta,se_beta"]
    for r in rows:
        f = r.fit
        lines.append(f"{r.cutoff},{f.intercept!r},{f.se_intercept!r},{f.beta!r},{f.se_beta!r}")
    return "\n".join(lines) + "\n"
