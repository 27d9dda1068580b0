import argparse
import re
from pathlib import Path
from typing import Dict, List

from commands.rendering import writeJson
from services.finiteVerifier import verifyLayerMultiplicities, verifyRange
from services.partitions import parsePartition
from services.socleEngine import parseAlgebra
from utils.errors import EXIT_MISMATCH, EXIT_PASS, InvalidShapeError
from utils.logger import getLogger


verifyLogger = getLogger(__name__)

RANK_PATTERN = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?$")


def parseRankRange(text: str) -> List[int]:
    """"5" or "5..6"."""
    match = RANK_PATTERN.match(text)
    if not match:
        raise argparse.ArgumentTypeError(f"Expected a rank like 5 or a range like 5..6, got {text!r}.")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) else low
    if low < 1 or high < low:
        raise argparse.ArgumentTypeError(f"Rank range {text!r} is empty or starts below 1.")
    return list(range(low, high + 1))


def summarizeRun(report: Dict) -> List[str]:
    status = "PASS" if report["pass"] else "MISMATCH"
    lines = [
        f"{report['algebra']} n={report['n']} lambda={report['lambda']} mu={report['mu']}: {status} "
        f"(ambient dim {report['ambient_dim']}, predicted {report['predicted_total']})"
    ]
    for layer in report["layers"]:
        predicted = " + ".join(
            entry["label"] if entry["mult"] == 1 else f"{entry['mult']} {entry['label']}" for entry in layer["predicted"]
        ) or "0"
        counts = ", ".join(
            f"{label}: {'-' if count is None else count}" for label, count in layer["observed_singular_counts"].items()
        )
        lines.append(
            f"  layer {layer['r'] + 1}: {predicted} | dim {layer['observed_dim']}/{layer['predicted_dim']}"
            f" | singular {{{counts}}} | {'ok' if layer['pass'] else 'MISMATCH'}"
        )
    return lines


def verifyCommand(args: argparse.Namespace) -> int:
    algebra = parseAlgebra(args.algebra)
    if args.mu is not None and not algebra.isMixed:
        raise InvalidShapeError(f"--mu only applies to gl and sl, not {algebra.value}.")
    lam = parsePartition(args.lam)
    mu = parsePartition(args.mu)

    if len(args.n) == 1:
        report = verifyLayerMultiplicities(algebra, args.n[0], lam, mu, args.raising)
        lines = summarizeRun(report)
        passed = report["pass"]
    else:
        report = verifyRange(algebra, args.n, lam, mu, args.raising)
        lines = []
        for run in report["runs"]:
            lines.extend(summarizeRun(run))
        lines.append(f"stable across n={args.n[0]}..{args.n[-1]}: {'yes' if report['stable'] else 'NO'}")
        passed = report["pass"] and report["stable"]

    print("\n".join(lines))
    if args.json is not None:
        writeJson(args.json, report)
    if not passed:
        verifyLogger.warning("Verification mismatch for %s lambda=%s mu=%s n=%s", algebra.value, lam, mu, args.n)
        return EXIT_MISMATCH
    return EXIT_PASS


def setup(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Check a socle diagram against a finite-rank model.")
    parser.add_argument("--algebra", required=True, help="gl, sl, sp or so")
    parser.add_argument("--lambda", dest="lam", default="0", help="Covariant partition, e.g. 2,1")
    parser.add_argument("--mu", default=None, help="Contravariant partition (gl/sl only)")
    parser.add_argument("--n", type=parseRankRange, required=True, help="Rank, or a range like 5..6")
    parser.add_argument("--raising", choices=("simple", "all"), default="simple", help="Raising operators for singular vectors")
    parser.add_argument("--json", type=Path, help="Write the JSON report to this path")
    parser.set_defaults(handler=verifyCommand)
