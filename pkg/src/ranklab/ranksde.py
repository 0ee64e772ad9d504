"""Rank-based diffusions: simulation, rank-level estimators and gap theory.

The simulated model is the first-order (Atlas-type) model

    d log p_i = g_{r(i,t)} dt + s_{r(i,t)} dW_i,

where ``r(i, t)`` is the current rank of particle ``i`` (rank 1 is the
largest log price) and the ``W_i`` are independent Brownian motions. For
this model the rank-level statistics are known in closed form:

* ``alpha_k = g_k - mean(g)``
* ``sigma_k^2 = s_k^2 + s_{k+1}^2``

so every estimator below can be checked against the parameters that
generated the data.

The estimators work on any ``T x N`` log-price matrix sampled every ``dt``
time units, real or simulated. Throughout, the rank occupant of an interval
is the one observed at the start of that interval.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from ._parallel import ordered_map, worker_count
from .errors import (
    DomainError,
    InsufficientDataError,
    NumericalBlowupError,
    ParseError,
    StationarityError,
)
from .panel import PricePanel
from .rank import occupants

DEFAULT_DT = 1.0 / 2520
DEFAULT_BURN_IN = 0.2

_CHUNK = 4096


@dataclass(frozen=True)
class RankModelSpec:
    """Rank-dependent drifts ``g`` and volatilities ``s`` plus integration grid.

    ``obs_interval`` must be a whole number of ``dt`` steps. The number of
    recorded observations is ``floor(horizon / obs_interval)`` after the
    initial state.
    """

    g: np.ndarray
    s: np.ndarray
    dt: float = DEFAULT_DT
    horizon: float = 10.0
    obs_interval: float = 1.0 / 252
    init_log_prices: np.ndarray | None = None

    def __post_init__(self):
        g = np.array(self.g, dtype=float).ravel()
        s = np.array(self.s, dtype=float).ravel()
        if s.size == 1 and g.size > 1:
            s = np.full(g.size, s[0])
        if g.size < 2:
            raise DomainError("need at least 2 particles")
        if s.size != g.size:
            raise DomainError(f"g has {g.size} entries but s has {s.size}")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(s))):
            raise DomainError("g and s must be finite")
        if np.any(s < 0):
            raise DomainError("volatilities must be >= 0")
        if not self.dt > 0:
            raise DomainError("dt must be > 0")
        if not self.obs_interval >= self.dt * (1 - 1e-12):
            raise DomainError("obs_interval must be >= dt")
        if not self.horizon >= self.obs_interval * (1 - 1e-12):
            raise DomainError("horizon must be >= obs_interval")
        ratio = self.obs_interval / self.dt
        if abs(ratio - round(ratio)) > 1e-6 * ratio:
            raise DomainError("obs_interval must be a whole multiple of dt")
        x0 = np.zeros(g.size) if self.init_log_prices is None else np.array(self.init_log_prices, dtype=float).ravel()
        if x0.size != g.size or not np.all(np.isfinite(x0)):
            raise DomainError("init_log_prices must be finite with one entry per particle")
        for name, a in (("g", g), ("s", s), ("init_log_prices", x0)):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def n(self) -> int:
        return self.g.size

    @property
    def steps_per_obs(self) -> int:
        return int(round(self.obs_interval / self.dt))

    @property
    def n_obs(self) -> int:
        return int(math.floor(self.horizon / self.obs_interval + 1e-9))

    def implied_alpha(self) -> np.ndarray:
        return self.g - self.g.mean()

    def implied_sigma(self) -> np.ndarray:
        return np.sqrt(self.s[:-1] ** 2 + self.s[1:] ** 2)


@dataclass(frozen=True)
class ModelConfig:
    spec: RankModelSpec
    seed: int = 0
    burn_in: float = DEFAULT_BURN_IN
    replications: int = 1


def _floats(text):
    return [float(t) for t in re.split(r"[,\s]+", text.strip()) if t]


def parse_model_config(text: str) -> ModelConfig:
    """Read a ``key = value`` model file.

    Recognized keys: ``n``, ``g``, ``s``, ``dt``, ``horizon``,
    ``obs_interval``, ``seed``, ``burn_in``, plus the optional
    ``replications`` and ``init_log_prices``. Vectors are comma or
    whitespace separated; a scalar ``s`` means uniform volatility.
    ``#`` starts a comment.
    """
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^([A-Za-z_]+)\s*[=:]\s*(.*)$", line)
        if not m:
            raise ParseError(f"expected key = value, got {line!r}", lineno)
        key = m.group(1).lower()
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        values[key] = m.group(2)
    known = {"n", "g", "s", "dt", "horizon", "obs_interval", "seed", "burn_in", "replications", "init_log_prices"}
    unknown = set(values) - known
    if unknown:
        raise ParseError(f"unknown key(s): {', '.join(sorted(unknown))}")
    for required in ("g", "s"):
        if required not in values:
            raise ParseError(f"missing required key {required!r}")
    try:
        g = _floats(values["g"])
        s = _floats(values["s"])
        kw = {}
        for key in ("dt", "horizon", "obs_interval"):
            if key in values:
                kw[key] = float(values[key])
        if "init_log_prices" in values:
            kw["init_log_prices"] = _floats(values["init_log_prices"])
        seed = int(values.get("seed", 0))
        burn_in = float(values.get("burn_in", DEFAULT_BURN_IN))
        reps = int(values.get("replications", 1))
        n = int(values["n"]) if "n" in values else len(g)
    except ValueError as exc:
        raise ParseError(f"bad value: {exc}") from None
    if len(g) != n:
        raise DomainError(f"n = {n} but g has {len(g)} entries")
    if not 0 <= burn_in < 1:
        raise DomainError("burn_in must be in [0, 1)")
    if reps < 1:
        raise DomainError("replications must be >= 1")
    return ModelConfig(RankModelSpec(g, s, **kw), seed, burn_in, reps)


# -- simulation ----------------------------------------------------------------


def _integrate(spec: RankModelSpec, rngs: Sequence[np.random.Generator]) -> np.ndarray:
    R, N = len(rngs), spec.n
    every = spec.steps_per_obs
    n_steps = spec.n_obs * every
    x = np.tile(spec.init_log_prices, (R, 1))
    out = np.empty((R, spec.n_obs + 1, N))
    out[:, 0] = x
    rows = np.arange(R)[:, None]
    g_dt = spec.g * spec.dt
    s_root_dt = spec.s * math.sqrt(spec.dt)
    drift = np.empty((R, N))
    vol = np.empty((R, N))
    step = 0
    while step < n_steps:
        size = min(_CHUNK, n_steps - step)
        # each replication owns its stream, so results do not depend on batching
        z = np.stack([rng.standard_normal((size, N)) for rng in rngs], axis=1)
        for j in range(size):
            occ = np.argsort(-x, axis=1, kind="stable")
            drift[rows, occ] = g_dt
            vol[rows, occ] = s_root_dt
            # overflow is reported below as NumericalBlowupError
            with np.errstate(over="ignore", invalid="ignore"):
                x += drift + vol * z[j]
            step += 1
            if step % every == 0:
                if not np.all(np.isfinite(x)):
                    raise NumericalBlowupError(step)
                out[:, step // every] = x
    return out


def simulate(spec: RankModelSpec, seed) -> np.ndarray:
    """Euler-Maruyama log-price path of shape ``(n_obs + 1, N)``.

    Ranks are recomputed from the current log prices at every step (ties by
    particle index). ``seed`` is anything :func:`numpy.random.default_rng`
    accepts; the same ``(spec, seed)`` always yields the same path.
    """
    return _integrate(spec, [np.random.default_rng(seed)])[0]


def replication_seed(seed: int, index: int) -> list[int]:
    return [int(seed), int(index)]


def simulate_replications(spec: RankModelSpec, seed: int, replications: int, threads: int | None = None) -> np.ndarray:
    """Independent paths, shape ``(replications, n_obs + 1, N)``.

    Replication ``r`` equals ``simulate(spec, replication_seed(seed, r))``
    bit for bit. Replications are integrated together in vectorized
    batches, split over at most ``threads`` workers.
    """
    if replications < 1:
        raise DomainError("replications must be >= 1")
    n_workers = min(worker_count(threads), replications)
    bounds = np.linspace(0, replications, n_workers + 1).astype(int)
    groups = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def run(group):
        return _integrate(spec, [np.random.default_rng(replication_seed(seed, r)) for r in group])

    return np.concatenate(ordered_map(run, groups, n_workers), axis=0)


# -- estimators ------------------------------------------------------------------


def _log_paths(data, dt):
    if isinstance(data, PricePanel):
        x = np.log(data.prices)
        if dt is None:
            dt = 1.0 / data.periods_per_year
    else:
        x = np.asarray(data, dtype=float)
        if dt is None:
            dt = 1.0
    if x.ndim != 2:
        raise DomainError("expected a T x N log-price matrix")
    if x.shape[0] < 2:
        raise InsufficientDataError("need at least 2 sampled periods")
    if x.shape[1] < 2:
        raise InsufficientDataError("need at least 2 commodities")
    if not dt > 0:
        raise DomainError("dt must be > 0")
    return x, float(dt)


def _start_occupants(x):
    occ = occupants(x[:-1])
    rows = np.arange(occ.shape[0])[:, None]
    return occ, rows


def estimate_alpha(data, dt: float | None = None, reference: Literal["mean", "total"] = "mean") -> np.ndarray:
    """Time-averaged growth of the rank-``k`` occupant relative to the market.

    ``data`` is a :class:`PricePanel` (``dt`` defaults to one period in
    years) or a ``T x N`` array of log prices (``dt`` defaults to 1).
    With ``reference="mean"`` the benchmark is the cross-sectional mean
    log-price increment, so the result sums to zero. ``reference="total"``
    benchmarks against the log growth of the summed price level instead.
    """
    x, dt = _log_paths(data, dt)
    dx = np.diff(x, axis=0)
    occ, rows = _start_occupants(x)
    if reference == "mean":
        bench = dx.mean(axis=1, keepdims=True)
    elif reference == "total":
        level = np.logaddexp.reduce(x, axis=1)
        bench = np.diff(level)[:, None]
    else:
        raise DomainError(f"unknown reference {reference!r}")
    rel = dx[rows, occ] - bench
    total_time = dx.shape[0] * dt
    return rel.sum(axis=0) / total_time


def estimate_sigma_sq(data, dt: float | None = None) -> np.ndarray:
    """Quadratic-variation rate of the gap between the rank-k and rank-k+1 occupants."""
    x, dt = _log_paths(data, dt)
    dx = np.diff(x, axis=0)
    occ, rows = _start_occupants(x)
    ranked_dx = dx[rows, occ]
    d_gap = ranked_dx[:, :-1] - ranked_dx[:, 1:]
    return (d_gap**2).sum(axis=0) / (dx.shape[0] * dt)


def estimate_sigma(data, dt: float | None = None) -> np.ndarray:
    return np.sqrt(estimate_sigma_sq(data, dt))


def local_time_increments(data) -> np.ndarray:
    """Accumulators ``A_k`` for ``k = 1..N``.

    ``A_k`` sums, over intervals, the increment of the rank-``k`` log price
    minus the increment of the commodity that occupied rank ``k`` at the
    start of the interval. In continuous time this is half the local time
    of gap ``k`` minus half the local time of gap ``k - 1``.
    """
    x, _ = _log_paths(data, 1.0)
    ranked = -np.sort(-x, axis=1)
    occ, rows = _start_occupants(x)
    name_dx = (x[1:] - x[:-1])[rows, occ]
    rank_dx = np.diff(ranked, axis=0)
    return (rank_dx - name_dx).sum(axis=0)


def local_times(data) -> np.ndarray:
    """Accumulated gap local times ``Lambda_1..Lambda_{N-1}`` (``Lambda_0 = 0``)."""
    a = local_time_increments(data)
    return 2.0 * np.cumsum(a)[:-1]


def estimate_kappa(data, dt: float | None = None) -> np.ndarray:
    x, dt = _log_paths(data, dt)
    return local_times(x) / ((x.shape[0] - 1) * dt)


@dataclass(frozen=True)
class StationarityVerdict:
    partial_sums: np.ndarray
    per_rank: tuple[bool, ...]

    @property
    def stationary(self) -> bool:
        return all(self.per_rank)

    @property
    def first_failure(self) -> int | None:
        """1-based rank ``k`` of the first non-negative partial sum, if any."""
        for k, ok in enumerate(self.per_rank, start=1):
            if not ok:
                return k
        return None


def check_stationarity(alpha) -> StationarityVerdict:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size < 2:
        raise DomainError("alpha must be a vector of length N >= 2")
    sums = np.cumsum(alpha)[:-1]
    return StationarityVerdict(sums, tuple(bool(v < 0) for v in sums))


def theoretical_gaps(alpha, sigma) -> np.ndarray:
    """Stationary mean log gaps ``sigma_k^2 / (-4 (alpha_1 + ... + alpha_k))``."""
    alpha = np.asarray(alpha, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    verdict = check_stationarity(alpha)
    if sigma.shape != (alpha.size - 1,):
        raise DomainError(f"sigma must have {alpha.size - 1} entries")
    k = verdict.first_failure
    if k is not None:
        raise StationarityError(k, float(verdict.partial_sums[k - 1]))
    return sigma**2 / (-4.0 * verdict.partial_sums)


def empirical_gaps(paths, burn_in: float = DEFAULT_BURN_IN) -> tuple[np.ndarray, int]:
    """Time-averaged log gaps between adjacent ranks after discarding ``burn_in``.

    ``paths`` is ``(T, N)`` or a stack ``(R, T, N)`` of replications; the
    leading ``burn_in`` fraction of each path is dropped and the rest is
    pooled. Returns the mean gaps and the number of retained samples.
    """
    p = np.asarray(paths, dtype=float)
    if p.ndim == 2:
        p = p[None]
    if p.ndim != 3 or p.shape[2] < 2:
        raise DomainError("paths must have shape (T, N) or (R, T, N) with N >= 2")
    if not 0 <= burn_in < 1:
        raise DomainError("burn_in must be in [0, 1)")
    start = int(math.floor(burn_in * p.shape[1]))
    kept = p[:, start:]
    n = kept.shape[0] * kept.shape[1]
    if n < 100:
        raise InsufficientDataError(f"only {n} post-burn-in samples; need at least 100")
    ranked = -np.sort(-kept, axis=2)
    gaps = ranked[..., :-1] - ranked[..., 1:]
    return gaps.reshape(n, -1).mean(axis=0), n


def _cells(values) -> str:
    # repr of a Python float round-trips exactly
    return ",".join(repr(float(v)) for v in values)


@dataclass(frozen=True)
class RankStats:
    alpha: np.ndarray
    sigma: np.ndarray
    kappa: np.ndarray
    partial_alpha_sums: np.ndarray = field(init=False)
    stationary: bool = field(init=False)

    def __post_init__(self):
        verdict = check_stationarity(self.alpha)
        object.__setattr__(self, "partial_alpha_sums", verdict.partial_sums)
        object.__setattr__(self, "stationary", verdict.stationary)

    def to_csv(self) -> str:
        lines = ["rank,alpha,sigma,kappa,partial_alpha_sum,stationary"]
        n = self.alpha.size
        for k in range(n):
            if k < n - 1:
                ok = bool(self.partial_alpha_sums[k] < 0)
                cells = [self.alpha[k], self.sigma[k], self.kappa[k], self.partial_alpha_sums[k]]
                lines.append(f"{k + 1},{_cells(cells)},{str(ok).lower()}")
            else:
                lines.append(f"{k + 1},{_cells([self.alpha[k]])},,,,")
        return "\n".join(lines) + "\n"


def estimate_rank_stats(data, dt: float | None = None, reference: Literal["mean", "total"] = "mean") -> RankStats:
    return RankStats(
        alpha=estimate_alpha(data, dt, reference),
        sigma=estimate_sigma(data, dt),
        kappa=estimate_kappa(data, dt),
    )


@dataclass(frozen=True)
class GapReport:
    theoretical: np.ndarray
    empirical: np.ndarray
    alpha: np.ndarray
    sigma: np.ndarray
    n_samples: int

    @property
    def relative_deviation(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.empirical - self.theoretical) / self.theoretical

    def passes(self, tol: float) -> np.ndarray:
        return np.abs(self.relative_deviation) < tol

    def to_csv(self) -> str:
        lines = ["rank,theoretical_gap,empirical_gap,relative_deviation,alpha_partial_sum,sigma_sq"]
        sums = np.cumsum(self.alpha)[:-1]
        for k, (th, em, dev) in enumerate(zip(self.theoretical, self.empirical, self.relative_deviation), start=1):
            lines.append(f"{k},{_cells([th, em, dev, sums[k - 1], self.sigma[k - 1] ** 2])}")
        return "\n".join(lines) + "\n"


def verify_theorem(
    spec: RankModelSpec,
    seed: int,
    burn_in: float = DEFAULT_BURN_IN,
    replications: int = 1,
    threads: int | None = None,
) -> GapReport:
    """Compare simulated mean log gaps with their closed-form stationary values.

    The theoretical side uses the implied ``alpha_k = g_k - mean(g)`` and
    ``sigma_k^2 = s_k^2 + s_{k+1}^2``. Stationarity is checked before any
    simulation is run.
    """
    alpha, sigma = spec.implied_alpha(), spec.implied_sigma()
    theory = theoretical_gaps(alpha, sigma)
    paths = simulate_replications(spec, seed, replications, threads)
    emp, n = empirical_gaps(paths, burn_in)
    return GapReport(theory, emp, alpha, sigma, n)
