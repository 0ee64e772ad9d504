import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import normal_equations_ols
from ranklab.econometrics import (
    annualize_mean,
    correlation,
    ols_market_regression,
    sharpe,
    to_bp,
)
from ranklab.errors import DomainError, SingularityError, UndefinedStatisticError


def test_exact_fit():
    x = np.arange(10.0)
    fit = ols_market_regression(2 + 3 * x, x)
    assert (fit.intercept, fit.beta) == (2.0, 3.0)
    assert fit.se_intercept == 0.0 and fit.se_beta == 0.0
    assert fit.r2 == 1.0 and fit.n == 10


def test_zero_variance_regressor():
    with pytest.raises(SingularityError):
        ols_market_regression(np.arange(5.0), np.ones(5))


def test_too_short_or_mismatched():
    with pytest.raises(DomainError):
        ols_market_regression([1.0, 2.0], [1.0, 3.0])
    with pytest.raises(DomainError):
        ols_market_regression([1.0, 2.0, 3.0], [1.0, 3.0])


@pytest.mark.parametrize("seed", range(10))
def test_matches_normal_equations(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(3, 90, 200)
    y = 9.0 + 0.1 * x + rng.normal(0, 40, 200)
    fit = ols_market_regression(y, x)
    a, b, sa, sb = normal_equations_ols(y, x)
    np.testing.assert_allclose([fit.intercept, fit.beta, fit.se_intercept, fit.se_beta], [a, b, sa, sb], rtol=1e-10)


def test_residual_orthogonality_and_shift():
    rng = np.random.default_rng(5)
    x = rng.normal(size=300)
    y = rng.normal(size=300) + 0.5 * x
    fit = ols_market_regression(y, x)
    resid = y - fit.intercept - fit.beta * x
    assert abs(resid.sum()) <= 1e-9 * np.abs(y).sum()
    assert abs(resid @ x) <= 1e-9 * np.abs(y * x).sum()
    shifted = ols_market_regression(y + 4.2, x)
    assert shifted.intercept - fit.intercept == pytest.approx(4.2, abs=1e-12)
    assert shifted.beta == pytest.approx(fit.beta, abs=1e-14)
    assert shifted.se_beta == pytest.approx(fit.se_beta, rel=1e-9)


def test_newey_west_zero_lags_is_white():
    rng = np.random.default_rng(9)
    x = rng.normal(size=500)
    y = 1 + 2 * x + rng.normal(size=500) * (1 + np.abs(x))
    fit = ols_market_regression(y, x, newey_west_lags=0)
    X = np.column_stack([np.ones(500), x])
    e = y - X @ np.linalg.lstsq(X, y, rcond=None)[0]
    inv = np.linalg.inv(X.T @ X)
    white = inv @ (X.T * e**2) @ X @ inv
    np.testing.assert_allclose([fit.se_intercept, fit.se_beta], np.sqrt(np.diag(white)), rtol=1e-10)
    lagged = ols_market_regression(y, x, newey_west_lags=5)
    assert lagged.beta == fit.beta and lagged.se_beta > 0


def test_basis_points():
    np.testing.assert_allclose(to_bp([0.0001, -0.02]), [1.0, -200.0])


def test_annualize_mean():
    assert annualize_mean(np.full(100, 0.001), 252) == pytest.approx(0.252)
    assert annualize_mean(np.zeros(7), 12) == 0.0
    assert annualize_mean(np.tile([0.01, -0.01], 50), 252) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        annualize_mean([], 252)


def test_sharpe_substitution():
    z = np.random.default_rng(0).normal(size=1000)
    z = (z - z.mean()) / z.std(ddof=1)
    r = 0.0004 + 0.01 * z
    assert sharpe(r, 252) == pytest.approx(0.0004 / 0.01 * np.sqrt(252), rel=1e-9)
    assert sharpe(r, 252) == pytest.approx(0.635, abs=5e-4)
    assert sharpe(-r, 252) == pytest.approx(-sharpe(r, 252), rel=1e-12)
    with pytest.raises(UndefinedStatisticError):
        sharpe(np.full(10, 0.01), 252)


def test_correlation_examples():
    a = np.random.default_rng(1).normal(size=50)
    assert correlation(a, a) == pytest.approx(1.0)
    assert correlation(a, -a) == pytest.approx(-1.0)
    rng = np.random.default_rng(2)
    assert abs(correlation(rng.normal(size=10000), rng.normal(size=10000))) < 0.05
    with pytest.raises(UndefinedStatisticError):
        correlation(np.ones(5), a[:5])


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 100), st.floats(-50, 50), st.floats(0.01, 100), st.integers(0, 10**6))
def test_correlation_affine_invariance(scale_a, shift, scale_b, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=40), rng.normal(size=40)
    assert correlation(scale_a * a + shift, scale_b * b - shift) == pytest.approx(correlation(a, b), abs=1e-9)
