import argparse

from services.littlewoodRichardson import formatExpansion, lrCoefficient, oracleAgrees, schurProductExpand
from services.partitions import parsePartition
from utils.errors import EXIT_MISMATCH, EXIT_PASS


def lrCommand(args: argparse.Namespace) -> int:
    lam = parsePartition(args.lam)
    mu = parsePartition(args.mu)
    if args.nu is not None:
        print(lrCoefficient(lam, mu, parsePartition(args.nu)))
    else:
        print(formatExpansion(schurProductExpand(lam, mu)))

    if args.check:
        agrees = oracleAgrees(lam, mu, fullComparison=args.full)
        print("oracle: agrees" if agrees else "oracle: DISAGREES")
        return EXIT_PASS if agrees else EXIT_MISMATCH
    return EXIT_PASS


def setup(subparsers) -> None:
    parser = subparsers.add_parser("lr", help="Littlewood-Richardson coefficients and expansions.")
    parser.add_argument("--lambda", dest="lam", required=True, help="First partition, e.g. 2,1")
    parser.add_argument("--mu", required=True, help="Second partition")
    parser.add_argument("--nu", default=None, help="Print only the coefficient of this partition")
    parser.add_argument("--check", action="store_true", help="Compare against the Schur polynomial product")
    parser.add_argument("--full", action="store_true", help="With --check, compare every monomial")
    parser.set_defaults(handler=lrCommand)
