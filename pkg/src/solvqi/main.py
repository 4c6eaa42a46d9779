# main.py
import argparse
import logging
import sys
from typing import List, Optional

from solvqi import __version__
from solvqi.config.settings import engine_config
from solvqi.controller.command_dispatcher import ARITY, CommandDispatcher, render_text
from solvqi.exceptions import SolvQIError

logger = logging.getLogger(__name__)


def configure_logging(quiet: bool = False, verbose: bool = False):
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solvqi",
        description="Quasiisometry invariants of completely solvable Lie algebras with rational structure constants",
    )
    parser.add_argument("command", choices=list(ARITY), help="operation to run")
    parser.add_argument("files", nargs="*", help=".lie documents (two for compare, none for table1/families/catalog)")
    parser.add_argument("--json", action="store_true", help="machine readable report on stdout")
    parser.add_argument("--extended", metavar="DIR", help="extended catalog directory")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    verbosity.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch, print the report; returns the exit code"""
    args = build_parser().parse_args(argv)
    configure_logging(args.quiet, args.verbose)
    try:
        dispatcher = CommandDispatcher(args.extended, engine_config())
    except SolvQIError as e:
        logger.error(f"Configuration error: {str(e)}")
        return e.exit_code
    report = dispatcher.run(args.command, args.files)
    sys.stdout.write(report.to_json() if args.json else render_text(report))
    return report.exit_code


def main():
    """Console script entry point"""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Internal error: {str(e)}", exc_info=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
