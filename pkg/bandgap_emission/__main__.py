#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import argparse
import logging
import sys

from . import PACKAGE_NAME, __version__
from .errors import EmissionError, ScenarioError, SweepError
from .presets import DESCRIPTIONS, PRESETS, get_scenario
from .report import FORMATS, write
from .scenario import load_scenario_file, with_tolerance
from .sweep import run
from .utils import dump_document, table_lines

LOG = logging.getLogger(PACKAGE_NAME)

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


def setup_logging(default_level="WARNING"):
    logging.basicConfig(format="%(name)s:%(levelname)s: %(message)s")
    LOG.setLevel(logging.getLevelName(default_level))


def create_parser():
    parser = argparse.ArgumentParser(
        prog=PACKAGE_NAME.replace("_", "-"),
        description="Dipole emission in planar photonic band-gap structures",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="more output, repeat for debug messages",
    )
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    run_parser = commands.add_parser(
        "run",
        help="evaluate a scenario",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    run_parser.add_argument(
        "scenario", metavar="<scenario file>", nargs="?", help="TOML scenario document"
    )
    run_parser.add_argument("--preset", metavar="<name>", help="use a shipped preset")
    run_parser.add_argument(
        "--out", metavar="<path>", help="result file, standard output if omitted"
    )
    run_parser.add_argument("--format", choices=FORMATS, default="csv")
    run_parser.add_argument(
        "--jobs", metavar="<N>", type=int, default=1, help="number of workers"
    )
    run_parser.add_argument(
        "--tol", metavar="<rel>", type=float, help="relative quadrature tolerance"
    )

    commands.add_parser("list-presets", help="show the shipped presets")

    validate_parser = commands.add_parser("validate", help="check a scenario document")
    validate_parser.add_argument("scenario", metavar="<scenario file>")
    validate_parser.add_argument(
        "--dump", metavar="<path>", help="write the normalized document as JSON"
    )
    return parser


def parse_args(args):
    """parse_args(args)
    parsing commandline parameters

    :param args: arguments passed to the main function
    :type args: `List[str]`
    :rtype: :class:`Namespace`
    """

    parser = create_parser()
    parsed = parser.parse_args(args)
    if parsed.command == "run" and (parsed.scenario is None) == (parsed.preset is None):
        parser.error("run needs either a scenario file or --preset")
    if parsed.command == "run" and parsed.jobs < 1:
        parser.error("--jobs must be at least 1")
    return parsed


def list_presets() -> int:
    rows = [("name", "description")]
    rows += [(name, DESCRIPTIONS.get(name, "")) for name in sorted(PRESETS)]
    for line in table_lines(rows):
        print(line)
    return EXIT_OK


def validate(args) -> int:
    scenario = load_scenario_file(args.scenario)
    if args.dump:
        dump_document(scenario.document, args.dump)
    count = len(scenario.points())
    print(f"{args.scenario}: ok, {count} point(s), hash {scenario.digest}")
    return EXIT_OK


def execute(args) -> int:
    if args.preset:
        scenario = get_scenario(args.preset)
    else:
        scenario = load_scenario_file(args.scenario)
    scenario = with_tolerance(scenario, args.tol)
    table = run(scenario, jobs=args.jobs)
    document = write(table, args.out, args.format)
    if args.out is None:
        sys.stdout.write(document)
    else:
        LOG.info("wrote %d rows to %s", len(table.rows), args.out)
    failed = table.metadata["failed"]
    if failed:
        LOG.warning("%d of %d points failed", failed, table.metadata["points"])
        return EXIT_PARTIAL
    return EXIT_OK


def main(argv=None) -> int:
    """main entry point for console script"""
    args = parse_args(sys.argv[1:] if argv is None else argv)
    setup_logging(("WARNING", "INFO", "DEBUG")[min(args.verbose, 2)])

    try:
        if args.command == "list-presets":
            return list_presets()
        if args.command == "validate":
            return validate(args)
        return execute(args)
    except ScenarioError as exc:
        LOG.error("invalid scenario: %s", exc)
    except SweepError as exc:
        LOG.error("%s", exc)
    except (EmissionError, OSError) as exc:
        LOG.error("%s: %s", type(exc).__name__, exc)
    return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
