"""``ranklab`` command-line interface.

Exit codes: 0 success, 1 parse error (or failed verification), 2 domain
error, 3 I/O error. Messages go to standard error.
"""
from __future__ import annotations

import argparse
import sys
from datetime import date
from pathlib import Path

import numpy as np

from . import backtest, econometrics, panel, rank, ranksde, report
from .errors import DomainError, ParseError

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("ingest", "backtest", "sweep", "simulate", "estimate", "verify", "report")
_BOOL_FLAGS = {"log_returns"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ranklab", description="Rank-effect backtests and rank-based diffusion tools.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value file supplying defaults for any flag")
    p.add_argument("--input", help="panel CSV (or series CSV for report)")
    p.add_argument("--layout", choices=("wide", "long"), default="wide")
    p.add_argument("--policy", default="drop_incomplete_dates",
                   choices=("drop_incomplete_dates", "drop_incomplete_commodities", "forward_fill"))
    p.add_argument("--max-gap", type=int, default=0)
    p.add_argument("--market", help="market CSV: date,<level> or date,return on the panel dates")
    p.add_argument("--cutoff", type=int, help="ranks per leg (default N // 2)")
    p.add_argument("--cutoff-low", type=int)
    p.add_argument("--cutoff-high", type=int)
    p.add_argument("--warmup", type=int, help="untraded periods (default 20 daily, 5 monthly)")
    p.add_argument("--frequency", choices=panel.FREQUENCIES, default="daily")
    p.add_argument("--base-date", type=date.fromisoformat)
    p.add_argument("--log-returns", action="store_true", help="sweep on log instead of simple returns")
    p.add_argument("--newey-west", type=int, metavar="LAGS")
    p.add_argument("--reference", choices=("mean", "total"), default="mean")
    p.add_argument("--spec", help="model specification file")
    p.add_argument("--seed", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--burn-in", type=float)
    p.add_argument("--tol", type=float, default=0.10)
    p.add_argument("--panel", help="panel CSV for relative-price plots (report)")
    p.add_argument("--out", default=".", help="output directory")
    return p


def _config_args(path) -> list[str]:
    args = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value in config, got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _BOOL_FLAGS:
            if value.lower() in ("1", "true", "yes"):
                args.append("--" + key.replace("_", "-"))
            continue
        args += ["--" + key.replace("_", "-"), value]
    return args


def _parse(argv):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        cmd = [a for a in argv if a in COMMANDS][:1]
        rest = list(argv)
        if cmd:
            rest.remove(cmd[0])
        # later occurrences win, so explicit flags override the config file
        argv = cmd + _config_args(known.config) + rest
    return parser.parse_args(argv)


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ParseError(f"{args.command} needs --{n.replace('_', '-')}")


def _load_panel(args, path=None) -> panel.PricePanel:
    policy = panel.CleaningPolicy(args.policy, args.max_gap)
    return panel.read_panel(path or args.input, args.layout, args.frequency, policy)


def _load_market(path, dates) -> np.ndarray:
    mdates, cols = panel.parse_series_csv(Path(path).read_text(encoding="utf-8"))
    if len(cols) != 1:
        raise ParseError("market CSV must have exactly one value column")
    (name, values), = cols.items()
    kind = "return" if name.lower() in ("return", "returns", "ret") else "level"
    return backtest.align_market(dates, mdates, values, kind)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def cmd_ingest(args):
    _require(args, "input")
    p = _load_panel(args)
    _write(_outdir(args) / "panel.csv", panel.to_csv(p))
    print(f"{len(p.dates)} dates x {len(p.commodities)} commodities ({p.frequency})")
    return EXIT_OK


def _spec_for(args, n, t):
    warmup = args.warmup if args.warmup is not None else backtest.DEFAULT_WARMUP[args.frequency]
    m = args.cutoff if args.cutoff is not None else n // 2
    return backtest.PortfolioSpec(m, warmup, m_low=args.cutoff_low, m_high=args.cutoff_high)


def cmd_backtest(args):
    _require(args, "input")
    p = _load_panel(args)
    norm = rank.normalize(p, args.base_date)
    spec = _spec_for(args, *reversed(p.shape))
    res = backtest.run_lmh(norm, spec)
    out = _outdir(args)
    _write(out / "backtest.csv", panel.series_to_csv(res.dates, res.columns()))

    ppy = p.periods_per_year
    lines = [
        f"periods                  {res.metrics.n_periods}",
        f"legs                     low {spec.low_size} / high {spec.high_size}, warmup {spec.warmup}",
        f"annualized_lmh           {res.metrics.annualized_lmh:.6f}",
        f"annualized_low           {econometrics.annualize_mean(res.low_logret, ppy):.6f}",
        f"annualized_high          {econometrics.annualize_mean(res.high_logret, ppy):.6f}",
        f"sharpe_lmh               {res.metrics.sharpe_lmh:.6f}",
    ]
    if args.market:
        mkt = _load_market(args.market, p.dates)[spec.warmup + 1 :]
        lines.append(f"correlation_with_market  {econometrics.correlation(res.lmh_simple, mkt):.6f}")
        try:
            lines.append(f"sharpe_market            {econometrics.sharpe(mkt, ppy):.6f}")
        except DomainError:
            pass
    lines.append("convention: annualized = mean per-period log excess return x periods per year")
    summary = "\n".join(lines) + "\n"
    _write(out / "summary.txt", summary)
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_sweep(args):
    _require(args, "input", "market")
    p = _load_panel(args)
    norm = rank.normalize(p, args.base_date)
    warmup = args.warmup if args.warmup is not None else backtest.DEFAULT_WARMUP[args.frequency]
    mkt = _load_market(args.market, p.dates)
    rows = backtest.sweep_cutoffs(norm, warmup, mkt, args.log_returns, args.newey_west)
    text = backtest.sweep_to_csv(rows)
    _write(_outdir(args) / "table1.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def _load_model(args) -> ranksde.ModelConfig:
    _require(args, "spec")
    cfg = ranksde.parse_model_config(Path(args.spec).read_text(encoding="utf-8"))
    return ranksde.ModelConfig(
        cfg.spec,
        cfg.seed if args.seed is None else args.seed,
        cfg.burn_in if args.burn_in is None else args.burn_in,
        cfg.replications if args.replications is None else args.replications,
    )


def cmd_simulate(args):
    cfg = _load_model(args)
    p = panel.synthesize(cfg.spec, cfg.seed)
    _write(_outdir(args) / "panel.csv", panel.to_csv(p))
    print(f"{len(p.dates)} dates x {len(p.commodities)} commodities ({p.frequency}), seed {cfg.seed}")
    return EXIT_OK


def cmd_estimate(args):
    _require(args, "input")
    p = _load_panel(args)
    stats = ranksde.estimate_rank_stats(p, reference=args.reference)
    _write(_outdir(args) / "rank_stats.csv", stats.to_csv())
    sys.stdout.write(stats.to_csv())
    verdict = "stationary" if stats.stationary else "NOT stationary"
    print(f"partial alpha sums all negative: {stats.stationary} -> {verdict} (per-year units)")
    return EXIT_OK


def cmd_verify(args):
    cfg = _load_model(args)
    if args.tol is None or args.tol < 0:
        raise DomainError("--tol must be >= 0")
    rep = ranksde.verify_theorem(cfg.spec, cfg.seed, cfg.burn_in, cfg.replications)
    _write(_outdir(args) / "gap_report.csv", rep.to_csv())
    ok = rep.passes(args.tol)
    for k, (th, em, dev, good) in enumerate(zip(rep.theoretical, rep.empirical, rep.relative_deviation, ok), start=1):
        print(f"k={k} theoretical={th:.6f} empirical={em:.6f} rel_dev={dev:+.4f} {'PASS' if good else 'FAIL'}")
    print(f"samples={rep.n_samples} sigma_k^2 = s_k^2 + s_(k+1)^2 (independent drivers)")
    return EXIT_OK if ok.all() else EXIT_PARSE


def cmd_report(args):
    _require(args, "input")
    dates, cols = panel.parse_series_csv(Path(args.input).read_text(encoding="utf-8"))
    if not dates:
        raise DomainError("series file has no rows")
    out = _outdir(args)
    _write(out / "series.svg", report.line_plot_svg(dates, cols, Path(args.input).stem))
    if {"low_logret", "high_logret", "lmh_logret"} <= cols.keys():
        cum = cols["cum_lmh"] if "cum_lmh" in cols else np.cumsum(cols["lmh_logret"])
        _write(out / "cum_lmh.svg", report.cumulative_lmh_svg(dates, cum))
        _write(out / "legs.svg", report.legs_svg(dates, cols["low_logret"], cols["high_logret"]))
    if args.panel:
        p = _load_panel(args, args.panel)
        _write(out / "relative_prices.svg", report.relative_price_svg(p))
        _write(out / "ranked_relative_prices.svg", report.relative_price_svg(p, ranked=True))
    return EXIT_OK


HANDLERS = {
    "ingest": cmd_ingest,
    "backtest": cmd_backtest,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
        return HANDLERS[args.command](args)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; report the code instead
        return int(exc.code or 0)
    except ParseError as exc:
        print(f"ranklab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"ranklab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"ranklab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
