"""Rank effects in asset price panels: ranking, LMH backtests and rank-based diffusions."""
from .backtest import BacktestResult, PortfolioSpec, leg_return, run_lmh, sweep_cutoffs
from .econometrics import RegressionFit, annualize_mean, correlation, ols_market_regression, sharpe
from .errors import (
    AlignmentError,
    DomainError,
    DuplicateKeyError,
    InsufficientDataError,
    NumericalBlowupError,
    ParseError,
    RanklabError,
    SingularityError,
    StationarityError,
    UndefinedStatisticError,
)
from .panel import CleaningPolicy, PricePanel, RawPanel, clean, parse_csv, read_panel, synthesize, to_csv
from .rank import (
    NormalizedPanel,
    RankSnapshot,
    RelativePriceField,
    normalize,
    rank_occupancy,
    rank_snapshot,
    relative_prices,
)
from .ranksde import (
    GapReport,
    RankModelSpec,
    RankStats,
    check_stationarity,
    empirical_gaps,
    estimate_alpha,
    estimate_kappa,
    estimate_rank_stats,
    estimate_sigma,
    simulate,
    simulate_replications,
    theoretical_gaps,
    verify_theorem,
)

__version__ = "0.1.0"
