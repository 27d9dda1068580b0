import argparse
from pathlib import Path

from commands.rendering import renderDecomposition, writeJson
from services.socleEngine import decomposeTensor, parseAlgebra
from utils.errors import EXIT_PASS, InvalidShapeError
from utils.logger import getLogger


decomposeLogger = getLogger(__name__)


def decomposeCommand(args: argparse.Namespace) -> int:
    algebra = parseAlgebra(args.algebra)
    if algebra.isMixed:
        if args.d is not None:
            raise InvalidShapeError(f"{algebra.value} takes a mixed shape; use -p and -q instead of --d.")
        p, q = args.p or 0, args.q or 0
    else:
        if args.d is not None and args.p is not None:
            raise InvalidShapeError("Give the tensor degree once, with --d or -p.")
        p = args.d if args.d is not None else (args.p or 0)
        q = args.q or 0

    decomposition = decomposeTensor(algebra, p, q)
    decomposeLogger.info("Decomposed %s tensor space (%s, %s) into %s tower(s)", algebra.value, p, q, len(decomposition.summands))
    print(renderDecomposition(decomposition, args.unicode), end="")
    if args.json is not None:
        writeJson(args.json, decomposition.toJson())
    return EXIT_PASS


def setup(subparsers) -> None:
    parser = subparsers.add_parser("decompose", help="Indecomposable summands of a tensor space with their socle towers.")
    parser.add_argument("--algebra", required=True, help="gl, sl, sp or so")
    parser.add_argument("-p", type=int, default=None, help="Covariant degree")
    parser.add_argument("-q", type=int, default=None, help="Contravariant degree (gl/sl only)")
    parser.add_argument("--d", type=int, default=None, help="Tensor degree for sp/so")
    parser.add_argument("--json", type=Path, help="Write the decomposition as JSON to this path")
    parser.add_argument("--unicode", action="store_true", help="Draw boxes with box-drawing characters")
    parser.set_defaults(handler=decomposeCommand)
