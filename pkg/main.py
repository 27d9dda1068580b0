import argparse
import importlib
import sys
from typing import List, Optional

from utils.errors import exitCodeFor
from utils.logger import getLogger


appLogger = getLogger(__name__)

COMMAND_MODULES = ["commands.socle", "commands.decompose", "commands.verify", "commands.lr"]


def createParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soclelab",
        description="Socle filtrations of tensor modules over gl, sl, sp and so, with finite-rank verification.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for moduleName in COMMAND_MODULES:
        importlib.import_module(moduleName).setup(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = createParser().parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as error:
        appLogger.error("%s failed: %s", args.command, error)
        print(f"error: {error}", file=sys.stderr)
        return exitCodeFor(error)


if __name__ == "__main__":
    sys.exit(main())
