"""
Command-line front end for the lending model.

    python -m src.cli discrete --loan 5 --competitor 5 --interest 1
    python -m src.cli analytic --mu 0.05 --interest 15%
    python -m src.cli breakeven --mu 0.05
    python -m src.cli sweep --mu-range 0:0.10:0.01 --i-range 1%:160%:1%
    python -m src.cli simulate --mode discrete --interest 1 --n 1000000 --seed 7
    python -m src.cli reproduce --out-dir output/artifacts

Flags take precedence over ZSL_SEED, ZSL_WORKERS and ZSL_SIGMA, which take
precedence over the built-in defaults. Negative rates written as percentages
need the `--mu=-5%` form.
"""

import argparse
import sys
from pathlib import Path

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src import __version__
from src.breakeven_solver import BreakevenRequest, solve_breakeven, sweep
from src.discrete_game import (
    DiscreteGameConfig, discrete_breakeven, enumerate_outcomes, summary_frame,
)
from src.gaussian_model import WIN_FORMS, GaussianParams, PayoffSpec, QuadratureConfig
from src.monte_carlo import SimulationConfig, simulate_discrete, simulate_investor
from src.reporting import (
    analytic_report, discrete_report, dumps_json, print_fields, simulation_report,
    write_csv, write_json,
)
from src.reproduce import run_reproduce
from src.utils import (
    DEFAULT_COMPETITOR_COINS, DEFAULT_INTEREST, DEFAULT_INTEREST_RANGE,
    DEFAULT_LOAN_COINS, DEFAULT_MU, DEFAULT_MU_RANGE, DEFAULT_ROUNDS, DEFAULT_SEED,
    DEFAULT_SIGMA, DEFAULT_WORKERS, EXIT_IO, EXIT_NO_BREAKEVEN, EXIT_NUMERICAL,
    EXIT_OK, EXIT_SAMPLING, EXIT_USAGE, OUTPUT_ARTIFACTS, OUTPUT_TABLES,
    DomainError, NoBreakEvenError, NumericalError, RejectionBudgetError,
    env_setting, parse_range, parse_rate, set_log_level, setup_logging,
)

logger = setup_logging(__name__)


def _rate(text: str) -> float:
    try:
        return parse_rate(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _emit(report: dict, as_json: bool, title: str):
    if as_json:
        sys.stdout.write(dumps_json(report))
    else:
        print_fields(report, title)


def cmd_discrete(args) -> int:
    if args.breakeven:
        k = discrete_breakeven(args.loan, args.competitor)
        if k is None:
            raise NoBreakEvenError(
                f"no whole-coin interest up to the pot breaks even for "
                f"L={args.loan}, C={args.competitor}"
            )
        report = {
            "loan_coins": args.loan,
            "competitor_coins": args.competitor,
            "breakeven_interest_coins": k,
            "breakeven_rate": k / args.loan,
        }
        if args.json:
            sys.stdout.write(dumps_json(report))
        else:
            print(f"k={k} ({k / args.loan:.0%})")
        return EXIT_OK

    config = DiscreteGameConfig(args.loan, args.competitor, args.interest)
    summary = enumerate_outcomes(config)
    frame = summary_frame(summary)
    if args.out:
        write_csv(frame, args.out)

    if args.json:
        sys.stdout.write(dumps_json(discrete_report(summary)))
    else:
        print(frame.to_string(index=False))
        print(f"\nExpected investor payoff per round: {summary.expected_net} coins "
              f"({float(summary.expected_net):.6f})")
    return EXIT_OK


def cmd_analytic(args) -> int:
    params = GaussianParams(mu=args.mu, sigma=args.sigma)
    spec = PayoffSpec.for_interest(args.interest, renormalize=args.renormalize,
                                   win_form=args.win_form)
    q = QuadratureConfig(abs_tol=args.abs_tol, max_subdivisions=args.max_subdivisions)
    if spec.interest < args.interest:
        logger.warning(f"Interest {args.interest:.2%} clamped to {spec.interest:.2%}")
    report = analytic_report(spec, params, q, requested_interest=args.interest)
    _emit(report, args.json, "Expected payoff")
    return EXIT_OK


def cmd_breakeven(args) -> int:
    req = BreakevenRequest(params=GaussianParams(mu=args.mu, sigma=args.sigma),
                           i_max=args.i_max, tol=args.tol, renormalize=args.renormalize)
    rate = solve_breakeven(req)
    report = {
        "mu": args.mu,
        "sigma": args.sigma,
        "i_max": args.i_max,
        "tol": args.tol,
        "breakeven_interest": rate,
    }
    if args.json:
        sys.stdout.write(dumps_json(report))
    else:
        print(f"Break-even interest: {rate:.4%} ({rate:.8f})")
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = sweep(parse_range(args.mu_range), parse_range(args.i_range), args.sigma,
                 workers=args.workers, renormalize=args.renormalize)
    frame = grid.to_frame()
    path = write_csv(frame, args.out)

    report = {
        "out": str(path),
        "cells": len(frame),
        "mu_count": len(grid.mu_values),
        "interest_count": len(grid.i_values),
        "sigma": grid.sigma,
        "monotone": grid.is_monotone(),
    }
    if args.json:
        sys.stdout.write(dumps_json(report))
    else:
        print(f"Wrote {len(frame):,} cells to {path}")
    return EXIT_OK


def _coin_interest(text: str | None) -> int:
    if text is None:
        return 0
    try:
        return int(text)
    except ValueError:
        raise DomainError(f"discrete mode needs interest in whole coins, got {text!r}") from None


def cmd_simulate(args) -> int:
    if args.mode == "discrete":
        config = DiscreteGameConfig(args.loan, args.competitor, _coin_interest(args.interest))
        model = {
            "loan_coins": config.loan_coins,
            "competitor_coins": config.competitor_coins,
            "interest_coins": config.interest_coins,
        }
        result = simulate_discrete(config, args.n, seed=args.seed, workers=args.workers)
    else:
        interest = DEFAULT_INTEREST if args.interest is None else parse_rate(args.interest)
        params = GaussianParams(mu=args.mu, sigma=args.sigma)
        spec = PayoffSpec.for_interest(interest)
        model = {
            "mu": params.mu,
            "sigma": params.sigma,
            "interest": spec.interest,
            "lower_bound": spec.lower_bound,
            "upper_bound": spec.upper_bound,
        }
        result = simulate_investor(SimulationConfig(
            n_rounds=args.n, params=params, spec=spec, seed=args.seed, workers=args.workers,
        ))

    # Worker count and timing stay out so equal seeds give equal bytes
    report = simulation_report(result, args.mode, model)
    if args.out:
        write_json(report, args.out)
    sys.stdout.write(dumps_json(report))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    code = run_reproduce(args.out_dir, quick=args.quick, seed=args.seed, workers=args.workers)
    manifest = Path(args.out_dir) / "manifest.json"
    if args.json and manifest.exists():
        sys.stdout.write(manifest.read_text(encoding="utf-8"))
    else:
        print(f"Artifacts written to {args.out_dir} (exit code {code})")
    return code


def build_parser() -> argparse.ArgumentParser:
    """Argument parser; environment defaults are read here."""
    seed = env_setting("seed", DEFAULT_SEED, int)
    workers = env_setting("workers", DEFAULT_WORKERS, int)
    sigma = env_setting("sigma", DEFAULT_SIGMA, parse_rate)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable output")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level on stderr")

    parser = argparse.ArgumentParser(
        prog="zsl", description="Zero-sum hard-money lending model",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discrete", parents=[common], help="Enumerate the coin game")
    p.add_argument("--loan", type=int, default=DEFAULT_LOAN_COINS, help="Coins lent to B")
    p.add_argument("--competitor", type=int, default=DEFAULT_COMPETITOR_COINS,
                   help="Coins held by C")
    p.add_argument("--interest", type=int, default=0, help="Interest in whole coins")
    p.add_argument("--breakeven", action="store_true",
                   help="Report the smallest break-even interest instead of the table")
    p.add_argument("--out", type=Path, default=None, help="Also write the table as CSV")
    p.set_defaults(handler=cmd_discrete)

    p = sub.add_parser("analytic", parents=[common], help="Expected win, loss and ratio")
    p.add_argument("--mu", type=_rate, default=DEFAULT_MU)
    p.add_argument("--sigma", type=_rate, default=sigma)
    p.add_argument("--interest", type=_rate, default=DEFAULT_INTEREST,
                   help="Simple interest, e.g. 0.2 or 20%%")
    p.add_argument("--renormalize", action="store_true",
                   help="Divide by the Gaussian mass inside [-1, 1]")
    p.add_argument("--win-form", choices=WIN_FORMS, default="capped")
    p.add_argument("--abs-tol", type=float, default=QuadratureConfig.abs_tol)
    p.add_argument("--max-subdivisions", type=int, default=QuadratureConfig.max_subdivisions)
    p.set_defaults(handler=cmd_analytic)

    p = sub.add_parser("breakeven", parents=[common], help="Solve for the break-even rate")
    p.add_argument("--mu", type=_rate, default=DEFAULT_MU)
    p.add_argument("--sigma", type=_rate, default=sigma)
    p.add_argument("--i-max", type=_rate, default=BreakevenRequest.i_max)
    p.add_argument("--tol", type=float, default=BreakevenRequest.tol)
    p.add_argument("--renormalize", action="store_true")
    p.set_defaults(handler=cmd_breakeven)

    p = sub.add_parser("sweep", parents=[common], help="Return ratio over a (mu, I) grid")
    p.add_argument("--mu-range", default=DEFAULT_MU_RANGE, help="start:stop:step")
    p.add_argument("--i-range", default=DEFAULT_INTEREST_RANGE, help="start:stop:step")
    p.add_argument("--sigma", type=_rate, default=sigma)
    p.add_argument("--out", type=Path, default=OUTPUT_TABLES / "sweep.csv")
    p.add_argument("--workers", type=int, default=workers)
    p.add_argument("--renormalize", action="store_true")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("simulate", parents=[common], help="Seeded Monte Carlo estimate")
    p.add_argument("--mode", choices=["gaussian", "discrete"], default="gaussian")
    p.add_argument("--n", type=int, default=DEFAULT_ROUNDS, help="Number of rounds")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--workers", type=int, default=workers)
    p.add_argument("--mu", type=_rate, default=DEFAULT_MU)
    p.add_argument("--sigma", type=_rate, default=sigma)
    p.add_argument("--interest", default=None,
                   help="Rate in gaussian mode, whole coins in discrete mode")
    p.add_argument("--loan", type=int, default=DEFAULT_LOAN_COINS)
    p.add_argument("--competitor", type=int, default=DEFAULT_COMPETITOR_COINS)
    p.add_argument("--out", type=Path, default=None, help="Also write the report here")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("reproduce", parents=[common], help="Regenerate every artifact")
    p.add_argument("--out-dir", type=Path, default=OUTPUT_ARTIFACTS)
    p.add_argument("--quick", action="store_true", help="Fewer Monte Carlo rounds")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--workers", type=int, default=workers)
    p.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Parse argv, run one subcommand and return its exit code."""
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except DomainError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except SystemExit as e:
        # argparse exits 2 on bad flags and 0 on --help
        return e.code if isinstance(e.code, int) else EXIT_OK

    set_log_level(args.log_level or ("INFO" if args.command == "reproduce" else "WARNING"))

    try:
        return args.handler(args)
    except DomainError as e:
        logger.error(f"invalid argument: {e}")
        return EXIT_USAGE
    except NoBreakEvenError as e:
        logger.error(str(e))
        return EXIT_NO_BREAKEVEN
    except RejectionBudgetError as e:
        logger.error(str(e))
        return EXIT_SAMPLING
    except NumericalError as e:
        logger.error(f"{e} (estimate={e.estimate:.6g}, error bound={e.error_bound:.3g})")
        return EXIT_NUMERICAL
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
