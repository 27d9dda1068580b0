from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, List, Optional, Sequence, Tuple

from utils.errors import PartitionParseError


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive parts; the empty tuple is the zero partition."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(not isinstance(part, int) or part < 1 for part in parts):
            raise PartitionParseError(f"Partition parts must be positive integers, got {parts}.")
        if any(parts[idx] < parts[idx + 1] for idx in range(len(parts) - 1)):
            raise PartitionParseError(f"Partition parts must be weakly decreasing, got {parts}.")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def isZero(self) -> bool:
        return not self.parts

    def part(self, idx: int) -> int:
        """idx-th part (0-based) with the convention that missing parts are 0."""
        return self.parts[idx] if idx < len(self.parts) else 0

    def contains(self, other: "Partition") -> bool:
        """True when the Young diagram of other sits inside this one."""
        if other.length > self.length:
            return False
        return all(self.parts[idx] >= other.parts[idx] for idx in range(other.length))

    def cells(self) -> Iterator[Tuple[int, int]]:
        for rowIdx, rowLength in enumerate(self.parts):
            for colIdx in range(rowLength):
                yield (rowIdx, colIdx)

    def hookLength(self, rowIdx: int, colIdx: int) -> int:
        conjugate = transpose(self)
        return self.parts[rowIdx] - colIdx + conjugate.parts[colIdx] - rowIdx - 1

    @property
    def text(self) -> str:
        return ",".join(str(part) for part in self.parts) if self.parts else "0"

    def __str__(self) -> str:
        return f"({self.text})"

    def __lt__(self, other: "Partition") -> bool:
        return self.parts < other.parts


ZERO = Partition()


def parsePartition(text: Optional[str]) -> Partition:
    """Parse "2,1" style text; empty text or "0" is the zero partition."""
    if text is None:
        return ZERO
    cleaned = text.strip().strip("()").strip()
    if cleaned in ("", "0"):
        return ZERO
    try:
        parts = tuple(int(piece) for piece in cleaned.split(","))
    except ValueError:
        raise PartitionParseError(f"Cannot parse partition from {text!r}; expected text like 2,1.") from None
    return Partition(parts)


def weight(partition: Partition) -> int:
    return partition.weight


def transpose(partition: Partition) -> Partition:
    if partition.isZero:
        return ZERO
    return Partition(tuple(sum(1 for part in partition.parts if part >= idx) for idx in range(1, partition.parts[0] + 1)))


def double(partition: Partition) -> Partition:
    return Partition(tuple(2 * part for part in partition.parts))


def _generatePartitions(remaining: int, maxPart: int) -> Iterator[Tuple[int, ...]]:
    if remaining == 0:
        yield ()
        return
    for part in range(min(remaining, maxPart), 0, -1):
        for tail in _generatePartitions(remaining - part, part):
            yield (part,) + tail


@lru_cache(maxsize=None)
def _partitionsOfCached(d: int) -> Tuple[Partition, ...]:
    return tuple(Partition(parts) for parts in _generatePartitions(d, d))


def partitionsOf(d: int) -> List[Partition]:
    """All partitions of d, largest first in lexicographic order."""
    if d < 0:
        raise ValueError(f"Cannot enumerate partitions of a negative number ({d}).")
    return list(_partitionsOfCached(d))


def symGroupIrrepDim(partition: Partition) -> int:
    """Hook length formula for dim H_lambda."""
    hooks = prod(partition.hookLength(rowIdx, colIdx) for rowIdx, colIdx in partition.cells())
    return factorial(partition.weight) // hooks


def canonicalOrder(partitions: Sequence[Partition]) -> List[Partition]:
    return sorted(partitions, key=lambda partition: partition.parts, reverse=True)


def horizontalStripsRemoved(partition: Partition) -> Iterator[Partition]:
    """Partitions mu inside partition such that partition/mu is a horizontal strip."""

    def walk(rowIdx: int, chosen: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if rowIdx == partition.length:
            yield chosen
            return
        lower = partition.part(rowIdx + 1)
        for rowLength in range(partition.parts[rowIdx], lower - 1, -1):
            yield from walk(rowIdx + 1, chosen + (rowLength,))

    for rows in walk(0, ()):
        yield Partition(tuple(rowLength for rowLength in rows if rowLength > 0))
