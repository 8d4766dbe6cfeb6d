"""Command-line entry point for the Gaussian distillation toolkit."""

import argparse
import sys
from typing import Callable, Optional, Sequence

from pydantic import ValidationError

from gaussdist import __version__
from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DomainError, GaussDistError, LayoutError, ReportWriteError
from gaussdist.core.logging import get_logger, log_error_with_context, run_context, setup_logging
from gaussdist.models.gaussian_state import two_mode_symmetric
from gaussdist.schemas.run_config import OutputFormat, RunConfig, Subcommand
from gaussdist.services.entanglement import f_value, g_lower_bound, log_negativity
from gaussdist.services.lemma_checks import check_all
from gaussdist.services.protocol_search import optimize, sweep
from gaussdist.utils.reporting import (
    format_matrix,
    format_number,
    write_json,
    write_records_csv,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, help="diagonal parameter a >= 1")
    parser.add_argument("--c", type=float, help="correlation parameter 0 <= c <= sqrt(a^2 - 1)")
    parser.add_argument("--r", type=float, help="two-mode squeezing; a = cosh 2r, c = sinh 2r")
    parser.add_argument("--eta", type=float, help="transmissivity of equal loss on both halves (with --r)")
    parser.add_argument("--samples", type=int, default=1, help="sweep size")
    parser.add_argument("--trials", type=int, default=1000, help="trials per lemma check")
    parser.add_argument("--restarts", type=int, default=1, help="optimizer restarts")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--squeeze-min", type=float, help="smallest Euler squeezing")
    parser.add_argument("--squeeze-max", type=float, help="largest Euler squeezing")
    parser.add_argument("--out", help="output file")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussdist",
        description="Covariance-matrix checks of two-copy Gaussian entanglement distillation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for command, help_text in (
        (Subcommand.EVAL, "evaluate f, g and E_N of the symmetric input state"),
        (Subcommand.VERIFY, "randomized sweep over protocols"),
        (Subcommand.CHECK_LEMMAS, "randomized determinant identity and inequality checks"),
        (Subcommand.OPTIMIZE, "search local symplectics maximizing the final E_N"),
    ):
        _add_common_flags(subparsers.add_parser(command.value, help=help_text))
    return parser


def _to_config(args: argparse.Namespace) -> RunConfig:
    settings = get_settings()
    return RunConfig(
        subcommand=args.subcommand,
        a=args.a,
        c=args.c,
        r=args.r,
        eta=args.eta,
        samples=args.samples,
        trials=args.trials,
        restarts=args.restarts,
        seed=args.seed,
        squeeze_min=settings.squeeze_min if args.squeeze_min is None else args.squeeze_min,
        squeeze_max=settings.squeeze_max if args.squeeze_max is None else args.squeeze_max,
        out=args.out,
        format=args.format,
    )


def cmd_eval(config: RunConfig) -> int:
    params = config.state_params()
    gamma = two_mode_symmetric(params)
    f, g, en = f_value(gamma), g_lower_bound(gamma), log_negativity(gamma)

    print(f"Gamma0 (a={format_number(params.a)}, c={format_number(params.c)}):")
    print(format_matrix(gamma.entries))
    print(f"f = {format_number(f)}")
    print(f"g = {format_number(g)}")
    print(f"E_N = {format_number(en)}")

    if config.out is not None:
        write_json(
            {
                "a": params.a,
                "c": params.c,
                "covariance": gamma.to_payload(),
                "f": f,
                "g": g,
                "log_negativity": en,
            },
            config.out,
        )
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    result = sweep(
        get_settings().a_range,
        samples=config.samples,
        seed=config.seed,
        squeeze_range=config.squeeze_range,
    )
    if config.out is not None:
        if config.format is OutputFormat.JSON:
            write_json({"summary": result.summary, "records": result.records}, config.out)
        else:
            write_records_csv(result.records, config.out)

    print(result.summary.to_json())
    if not result.chain_holds:
        print(f"chain violated: min slack {format_number(result.min_chain_slack)}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_VIOLATION


def cmd_check_lemmas(config: RunConfig) -> int:
    reports = check_all(config.trials, config.seed)
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{report.lemma} {status} max_deviation={format_number(report.max_deviation)} "
            f"tolerance={format_number(report.tolerance)}"
        )
    if config.out is not None:
        write_json(reports, config.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_optimize(config: RunConfig) -> int:
    report = optimize(
        config.state_params(),
        restarts=config.restarts,
        seed=config.seed,
        squeeze_range=config.squeeze_range,
    )
    record = report.record
    print(f"best margin = {format_number(record.margin)}")
    print(f"E_N initial = {format_number(record.en_initial)}")
    print(f"E_N final = {format_number(record.en_final)}")
    print("euler A = " + " ".join(format_number(v) for v in report.euler_a))
    print("euler B = " + " ".join(format_number(v) for v in report.euler_b))
    if config.out is not None:
        write_json(report, config.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


COMMANDS: dict[Subcommand, Callable[[RunConfig], int]] = {
    Subcommand.EVAL: cmd_eval,
    Subcommand.VERIFY: cmd_verify,
    Subcommand.CHECK_LEMMAS: cmd_check_lemmas,
    Subcommand.OPTIMIZE: cmd_optimize,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 when every checked property holds, 1 on a detected violation,
        2 on usage or I/O errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    settings = get_settings()
    setup_logging(settings.log_level, settings.log_format)

    try:
        config = _to_config(args)
    except (ValidationError, DomainError, LayoutError) as exc:
        print(f"gaussdist {args.subcommand}: invalid arguments\n{exc}", file=sys.stderr)
        return EXIT_USAGE

    with run_context(command=config.subcommand.value, seed=config.seed):
        try:
            return COMMANDS[config.subcommand](config)
        except ReportWriteError as exc:
            log_error_with_context(logger, exc)
            print(f"gaussdist: {exc.detail}", file=sys.stderr)
            return EXIT_USAGE
        except GaussDistError as exc:
            log_error_with_context(logger, exc, {"subcommand": config.subcommand.value})
            print(f"gaussdist: {exc.detail}", file=sys.stderr)
            return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
