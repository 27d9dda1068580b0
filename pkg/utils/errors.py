class PartitionParseError(ValueError):
    """Text that does not describe a partition."""


class InvalidShapeError(ValueError):
    """Algebra, shape or slot arguments that do not fit together."""


class RankTooSmallError(InvalidShapeError):
    """A highest weight that does not fit in the requested rank."""


class SubspaceError(InvalidShapeError):
    pass


class CapacityError(ValueError):
    """A finite model larger than the configured caps."""


EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_CAPACITY = 4


def exitCodeFor(error: Exception) -> int:
    if isinstance(error, PartitionParseError):
        return EXIT_PARSE
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    return EXIT_INVALID
