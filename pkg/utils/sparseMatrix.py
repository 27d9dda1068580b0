from typing import Dict, Hashable, List, Mapping, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from utils.errors import InvalidShapeError


# Sparse vectors keyed by basis labels (index tuples in the finite models).
SparseVector = Dict[Hashable, object]


def toRational(value) -> object:
    if isinstance(value, tuple):
        return QQ(*value)
    return QQ.convert(value)


def addScaled(target: SparseVector, source: Mapping, scale=1) -> SparseVector:
    """target += scale * source, dropping cancelled entries."""
    scale = toRational(scale)
    for key, value in source.items():
        updated = target.get(key, QQ.zero) + scale * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)
    return target


class SparseRationalMatrix:
    """Exact sparse matrix over QQ in the SDM dict-of-dicts layout."""

    def __init__(self, entries: Mapping[Tuple[int, int], object], rows: int, cols: int):
        if rows < 0 or cols < 0:
            raise InvalidShapeError(f"Matrix shape ({rows}, {cols}) is invalid.")
        self.rows = rows
        self.cols = cols
        rowMap: Dict[int, Dict[int, object]] = {}
        for (rowIdx, colIdx), value in entries.items():
            if not (0 <= rowIdx < rows and 0 <= colIdx < cols):
                raise InvalidShapeError(f"Entry ({rowIdx}, {colIdx}) lies outside a {rows}x{cols} matrix.")
            value = toRational(value)
            if value:
                rowMap.setdefault(rowIdx, {})[colIdx] = value
        self.sdm = SDM(rowMap, (rows, cols), QQ)

    @classmethod
    def fromSdm(cls, sdm: SDM) -> "SparseRationalMatrix":
        matrix = cls.__new__(cls)
        matrix.rows, matrix.cols = sdm.shape
        matrix.sdm = SDM({rowIdx: dict(row) for rowIdx, row in sdm.items() if row}, sdm.shape, QQ)
        return matrix

    @classmethod
    def fromColumns(cls, columns: Sequence[Mapping[int, object]], rows: int) -> "SparseRationalMatrix":
        entries = {}
        for colIdx, column in enumerate(columns):
            for rowIdx, value in column.items():
                entries[(rowIdx, colIdx)] = value
        return cls(entries, rows, len(columns))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> Dict[Tuple[int, int], object]:
        return {(rowIdx, colIdx): value for rowIdx, row in self.sdm.items() for colIdx, value in row.items()}

    def nnz(self) -> int:
        return sum(len(row) for row in self.sdm.values())

    def isZero(self) -> bool:
        return self.nnz() == 0

    def get(self, rowIdx: int, colIdx: int):
        return self.sdm.get(rowIdx, {}).get(colIdx, QQ.zero)

    def _checkSameShape(self, other: "SparseRationalMatrix") -> None:
        if self.shape != other.shape:
            raise InvalidShapeError(f"Shapes {self.shape} and {other.shape} do not match.")

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise InvalidShapeError(f"Cannot multiply {self.shape} by {other.shape}.")
        return SparseRationalMatrix.fromSdm(self.sdm.matmul(other.sdm))

    def __add__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        self._checkSameShape(other)
        return SparseRationalMatrix.fromSdm(self.sdm.add(other.sdm))

    def __sub__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        self._checkSameShape(other)
        return SparseRationalMatrix.fromSdm(self.sdm.sub(other.sdm))

    def __neg__(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix.fromSdm(self.sdm.neg())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"SparseRationalMatrix(shape={self.shape}, nnz={self.nnz()})"

    def rrefDen(self):
        """Fraction-free reduced row echelon form: (rref, denominator, pivots)."""
        rrefSdm, denominator, pivots = self.sdm.rref_den()
        return SparseRationalMatrix.fromSdm(rrefSdm), denominator, list(pivots)

    def rank(self) -> int:
        if self.isZero():
            return 0
        _, _, pivots = self.rrefDen()
        return len(pivots)

    def nullspace(self) -> List[Dict[int, object]]:
        """Kernel basis as sparse column vectors."""
        if self.cols == 0:
            return []
        if self.isZero():
            return [{colIdx: QQ.one} for colIdx in range(self.cols)]
        rref, _, pivots = self.rrefDen()
        kernelRows, _ = rref.sdm.nullspace_from_rref(pivots)
        return [dict(row) for _, row in sorted(kernelRows.items()) if row]

    def independentColumns(self) -> List[int]:
        if self.isZero():
            return []
        _, _, pivots = self.rrefDen()
        return pivots

