"""Summary statistics and the market regression used for cutoff tables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, UndefinedStatisticError

BASIS_POINT = 1e-4


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit of ``y = intercept + beta * x``; coefficients share the units of ``y``."""

    intercept: float
    beta: float
    se_intercept: float
    se_beta: float
    n: int
    r2: float


def to_bp(returns) -> np.ndarray:
    return np.asarray(returns, dtype=float) / BASIS_POINT


def ols_market_regression(excess, market, newey_west_lags: int | None = None) -> RegressionFit:
    """Regress ``excess`` on a constant and ``market``.

    Standard errors are the classical homoskedastic ones with
    ``sigma^2 = RSS / (n - 2)`` unless ``newey_west_lags`` is given, in
    which case a Bartlett-kernel HAC covariance with that many lags is used.
    Both inputs are usually in basis points (see :func:`to_bp`).
    """
    y = np.asarray(excess, dtype=float)
    x = np.asarray(market, dtype=float)
    if y.ndim != 1 or y.shape != x.shape:
        raise DomainError(f"series lengths differ: {y.shape} vs {x.shape}")
    n = y.size
    if n < 3:
        raise DomainError(f"need at least 3 observations, got {n}")
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = dx @ dx
    if np.ptp(x) == 0 or not sxx > 0:
        raise SingularityError("market series has zero variance")
    beta = (dx @ dy) / sxx
    intercept = ym - beta * xm
    resid = y - intercept - beta * x
    rss = resid @ resid
    tss = dy @ dy

    if newey_west_lags is None:
        s2 = rss / (n - 2)
        var_beta = s2 / sxx
        var_intercept = s2 * (1.0 / n + xm * xm / sxx)
    else:
        if newey_west_lags < 0:
            raise DomainError("newey_west_lags must be >= 0")
        X = np.column_stack([np.ones(n), x])
        bread = np.linalg.inv(X.T @ X)
        scores = X * resid[:, None]
        meat = scores.T @ scores
        for lag in range(1, min(newey_west_lags, n - 1) + 1):
            w = 1.0 - lag / (newey_west_lags + 1.0)
            g = scores[lag:].T @ scores[:-lag]
            meat += w * (g + g.T)
        cov = bread @ meat @ bread
        var_intercept, var_beta = cov[0, 0], cov[1, 1]

    r2 = 1.0 - rss / tss if tss > 0 else float("nan")
    return RegressionFit(
        intercept=float(intercept),
        beta=float(beta),
        se_intercept=float(np.sqrt(max(var_intercept, 0.0))),
        se_beta=float(np.sqrt(max(var_beta, 0.0))),
        n=n,
        r2=float(r2),
    )


def annualize_mean(logret, periods_per_year: int) -> float:
    r = np.asarray(logret, dtype=float)
    if r.size == 0:
        raise DomainError("cannot annualize an empty series")
    return float(r.mean() * periods_per_year)


def sharpe(returns, periods_per_year: int) -> float:
    """Annualized Sharpe ratio ``mean / std * sqrt(periods_per_year)`` (sample std, ddof=1)."""
    r = np.asarray(returns, dtype=float)
    if r.size < 2:
        raise UndefinedStatisticError("Sharpe ratio needs at least 2 observations")
    sd = r.std(ddof=1)
    if np.ptp(r) == 0 or not sd > 0:
        raise UndefinedStatisticError("Sharpe ratio undefined for a zero-variance series")
    return float(r.mean() / sd * np.sqrt(periods_per_year))


def correlation(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DomainError("correlation needs two 1-d series of equal length")
    if a.size < 2:
        raise DomainError("correlation needs at least 2 observations")
    da, db = a - a.mean(), b - b.mean()
    saa, sbb = da @ da, db @ db
    if np.ptp(a) == 0 or np.ptp(b) == 0 or not (saa > 0 and sbb > 0):
        raise UndefinedStatisticError("correlation undefined for a constant series")
    rho = (da @ db) / np.sqrt(saa * sbb)
    return float(np.clip(rho, -1.0, 1.0))
