import argparse
from pathlib import Path

from commands.rendering import renderSocle, writeJson
from services.partitions import parsePartition
from services.socleEngine import parseAlgebra, socleLayers
from utils.errors import EXIT_PASS, InvalidShapeError
from utils.logger import getLogger


socleLogger = getLogger(__name__)


def socleCommand(args: argparse.Namespace) -> int:
    algebra = parseAlgebra(args.algebra)
    if args.mu is not None and not algebra.isMixed:
        raise InvalidShapeError(f"--mu only applies to gl and sl, not {algebra.value}.")
    lam = parsePartition(args.lam)
    mu = parsePartition(args.mu)

    diagram = socleLayers(algebra, lam, mu)
    socleLogger.info("Socle diagram %s lambda=%s mu=%s has %s layer(s)", algebra.value, lam, mu, len(diagram.layers))
    print(renderSocle(diagram, args.unicode), end="")
    if args.json is not None:
        writeJson(args.json, diagram.toJson())
    return EXIT_PASS


def setup(subparsers) -> None:
    parser = subparsers.add_parser("socle", help="Socle filtration of one indecomposable tensor module.")
    parser.add_argument("--algebra", required=True, help="gl, sl, sp or so")
    parser.add_argument("--lambda", dest="lam", default="0", help="Covariant partition, e.g. 2,1")
    parser.add_argument("--mu", default=None, help="Contravariant partition (gl/sl only)")
    parser.add_argument("--json", type=Path, help="Write the diagram as JSON to this path")
    parser.add_argument("--unicode", action="store_true", help="Draw boxes with box-drawing characters")
    parser.set_defaults(handler=socleCommand)
