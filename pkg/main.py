import argparse
import logging
import sys

import config
from utils.errors import EXIT_IO, MinkError
from utils.helpers import load_params_file
from workflow.commands import COMMANDS, RunConfig, run_command

# Configure logging once at application startup; reports go to files or stdout, logs to stderr
logging.basicConfig(
    level=getattr(logging, config.MINK_LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

FLAG_DEFAULTS = {
    "n": None,
    "j": None,
    "q": None,
    "k": None,
    "x": None,
    "eps": config.DEFAULT_EPS,
    "iters": None,
    "grid": None,
    "max_order": None,
    "cache": None,
    "out": None,
    "fmt": "tsv",
    "compute": False,
    "seed": 0,
    "table": "orders",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mink",
        description="Jacobi matrix of Minkowski's question-mark measure and its diagnostics.",
    )
    parser.add_argument("--version", action="version", version=f"mink {config.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=(COMMANDS[name].__doc__ or name).strip().splitlines()[0])
        # None means "not given" so that --params can fill it
        cmd.add_argument("--n", type=int, default=None, help="coefficient count (jacobi) or graph level (q)")
        cmd.add_argument("--j", default=None, help="order, comma list or range a:b[:step]")
        cmd.add_argument("--q", type=int, default=None, help="Farey denominator")
        cmd.add_argument("--k", default=None, help="Farey depth, list or range a:b")
        cmd.add_argument("--x", default=None, help="point as p/q or decimal")
        cmd.add_argument("--eps", type=float, default=None, help="convergence threshold")
        cmd.add_argument("--iters", type=int, default=None, help="iteration cap")
        cmd.add_argument("--grid", default=None, help="start:stop:step")
        cmd.add_argument("--max-order", dest="max_order", type=int, default=None)
        cmd.add_argument("--cache", default=None, help="Jacobi cache file")
        cmd.add_argument("--out", default=None, help="report file (stdout when omitted)")
        cmd.add_argument("--format", dest="fmt", choices=("tsv", "json"), default=None)
        cmd.add_argument("--compute", action="store_true", default=None, help="compute a missing cache")
        cmd.add_argument("--seed", type=int, default=None, help="seed of the invariant suite")
        cmd.add_argument("--table", choices=("orders", "series"), default=None, help="nevai table")
        cmd.add_argument("--params", default=None, help="JSON5 file with default flag values")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Command line first, then the --params file, then built-in defaults."""
    from_file = load_params_file(args.params) if args.params else {}
    if "format" in from_file:
        from_file["fmt"] = from_file.pop("format")
    unknown = sorted(set(from_file) - set(FLAG_DEFAULTS))
    if unknown:
        logger.warning(f"Ignoring unknown parameters: {', '.join(unknown)}")
    values = {}
    for key, default in FLAG_DEFAULTS.items():
        given = getattr(args, key)
        if given is None:
            given = from_file.get(key, default)
        values[key] = given
    for key in ("j", "k", "x"):
        if values[key] is not None:
            values[key] = str(values[key])
    return RunConfig(command=args.command, **values)


def main(argv=None) -> int:
    """
    Entry point of the ``mink`` command.

    Exit codes: 0 success, 1 I/O or invalid input, 2 partial convergence, 3 missing cache,
    4 inconsistent cache.
    """
    args = build_parser().parse_args(argv)
    try:
        run = run_config_from_args(args)
        return run_command(run)
    except MinkError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
