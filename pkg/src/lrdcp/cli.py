"""``lrdcp`` command line.

Exit codes: 0 on success, 2 for domain or ingestion errors, 3 for numerical
failures.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .efficiency import are_ratio, marginal_model
from .errors import DomainError, NumericalError
from .harness import (
    SimConfig,
    cmd_analyze,
    cmd_simulate,
    local_whittle_H,
    parse_tests,
    preprocess,
    read_series,
    reports_csv,
    trajectories,
    trajectory_csv,
)
from .lrd_sim import MarginalSpec
from .scores import ScoreSpec
from .subsampling import BlockRule

EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _simulate(args) -> None:
    config = SimConfig(
        marginal=MarginalSpec.parse(args.marginal),
        hurst=args.hurst,
        n=args.n,
        tau=args.tau,
        shift=args.shift,
        reps=args.reps,
        block=BlockRule.parse(args.block),
        tests=tuple(parse_tests(args.tests)),
        level=args.level,
        seed=args.seed,
    )
    table = cmd_simulate(config, workers=args.workers)
    _write(args.out, table.to_csv())
    if args.out not in (None, "-"):
        for row in table.rows:
            print(f"{row.test}: {row.rejections}/{row.reps} = {row.rate:.3f}")


def _load(args):
    series = read_series(args.input, getattr(args, "column", None))
    return preprocess(series, getattr(args, "log_returns", False), getattr(args, "abs", False))


def _test(args) -> None:
    series = _load(args)
    analysis = cmd_analyze(series, parse_tests(args.tests), BlockRule.parse(args.block), args.level)
    for rep in analysis.reports:
        print(rep.to_text(), end="")
        print(f"argmax_label={series.label(rep.argmax_k)}")
        print()
    _write(args.out, reports_csv(analysis.reports))
    if args.trajectory:
        _write(args.trajectory, trajectory_csv(series, analysis.trajectories))


def _trajectory(args) -> None:
    series = _load(args)
    _write(args.out, trajectory_csv(series, trajectories(series, parse_tests(args.tests))))


def _hurst(args) -> None:
    series = _load(args)
    bw = None if args.bandwidth in (None, "auto") else int(args.bandwidth)
    print(f"H={local_whittle_H(series, bw)!r}")


def _are(args) -> None:
    res = are_ratio(ScoreSpec.parse(args.score1), ScoreSpec.parse(args.score2),
                    marginal_model(args.marginal), args.rank)
    for key, value in vars(res).items():
        print(f"{key}={value!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lrdcp", description="Self-normalized rank change-point tests "
                                "for long-range dependent time series.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="Monte Carlo rejection rates")
    s.add_argument("--marginal", default="normal", help="normal | pareto[:ALPHA[:K]] | cauchy | chisq")
    s.add_argument("--hurst", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--tau", type=float, default=0.5)
    s.add_argument("--shift", type=float, default=0.0)
    s.add_argument("--reps", type=int, default=500)
    s.add_argument("--block", default="gamma:0.5", help="N or gamma:F")
    s.add_argument("--tests", default="wilcoxon,vdw,cusum")
    s.add_argument("--level", type=float, default=0.05)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="-")
    s.set_defaults(func=_simulate)

    def data_args(q, with_options=True):
        q.add_argument("--input", required=True)
        q.add_argument("--column", default=None, help="value column name or 0-based index (default: last)")
        if with_options:
            q.add_argument("--log-returns", action="store_true")
            q.add_argument("--abs", action="store_true")

    t = sub.add_parser("test", help="subsampling tests on a data file")
    data_args(t)
    t.add_argument("--tests", default="wilcoxon,vdw,cusum")
    t.add_argument("--block", default="gamma:0.5")
    t.add_argument("--level", type=float, default=0.05)
    t.add_argument("--out", default="-", help="report CSV")
    t.add_argument("--trajectory", default=None, help="also write the trajectories CSV here")
    t.set_defaults(func=_test)

    tr = sub.add_parser("trajectory", help="T_k trajectories as CSV")
    data_args(tr)
    tr.add_argument("--tests", default="wilcoxon,vdw,cusum")
    tr.add_argument("--out", default="-")
    tr.set_defaults(func=_trajectory)

    h = sub.add_parser("hurst", help="local Whittle Hurst estimate")
    data_args(h)
    h.add_argument("--bandwidth", default="auto", help="N or auto (floor(n^(2/3)))")
    h.set_defaults(func=_hurst)

    a = sub.add_parser("are", help="asymptotic relative efficiency of two scores")
    a.add_argument("--score1", required=True)
    a.add_argument("--score2", required=True)
    a.add_argument("--marginal", default="gaussian")
    a.add_argument("--rank", type=int, default=None)
    a.set_defaults(func=_are)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DomainError as exc:
        print(f"lrdcp: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"lrdcp: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
