import pytest
from sympy import QQ

from utils.errors import InvalidShapeError
from utils.sparseMatrix import SparseRationalMatrix, addScaled, toRational


def test_to_rational_accepts_ints_and_pairs():
    assert toRational(3) == QQ(3)
    assert toRational((1, 2)) == QQ(1, 2)


def test_add_scaled_drops_cancelled_entries():
    target = {"a": QQ(1), "b": QQ(2)}
    addScaled(target, {"a": QQ(1), "c": QQ(1)}, -1)
    assert target == {"b": QQ(2), "c": QQ(-1)}


def test_matrix_arithmetic_is_exact():
    left = SparseRationalMatrix({(0, 0): (1, 2), (1, 1): 3}, 2, 2)
    right = SparseRationalMatrix({(0, 1): 2, (1, 0): (1, 3)}, 2, 2)
    product = left @ right
    assert product.get(0, 1) == QQ(1)
    assert product.get(1, 0) == QQ(1)
    assert product.nnz() == 2
    assert (left + right - right) == left
    assert (-left).get(0, 0) == QQ(-1, 2)
    assert (left - left).isZero()


def test_shape_errors():
    with pytest.raises(InvalidShapeError):
        SparseRationalMatrix({(2, 0): 1}, 2, 2)
    with pytest.raises(InvalidShapeError):
        SparseRationalMatrix({}, 2, 3) @ SparseRationalMatrix({}, 2, 3)
    with pytest.raises(InvalidShapeError):
        SparseRationalMatrix({}, 2, 3) + SparseRationalMatrix({}, 3, 2)
    with pytest.raises(InvalidShapeError):
        SparseRationalMatrix({}, -1, 2)


def test_rank_and_nullspace():
    matrix = SparseRationalMatrix({(0, 0): 1, (0, 1): 2, (1, 0): 2, (1, 1): 4, (1, 2): 1}, 2, 3)
    assert matrix.rank() == 2
    kernel = matrix.nullspace()
    assert len(kernel) == 1
    assert (matrix @ SparseRationalMatrix.fromColumns([kernel[0]], rows=matrix.cols)).isZero()
    assert kernel[0].get(1)


def test_nullspace_of_zero_and_full_rank():
    identity = SparseRationalMatrix({(idx, idx): 1 for idx in range(3)}, 3, 3)
    assert SparseRationalMatrix({}, 0, 3).nullspace() == [{0: QQ(1)}, {1: QQ(1)}, {2: QQ(1)}]
    assert identity.nullspace() == []
    assert identity.rank() == 3
    assert SparseRationalMatrix({}, 2, 0).nullspace() == []


def test_independent_columns_from_columns():
    matrix = SparseRationalMatrix.fromColumns([{0: 1}, {0: 2}, {1: 1}], rows=2)
    assert matrix.independentColumns() == [0, 2]
    assert matrix.get(0, 1) == QQ(2)


def test_rank_drops_dependent_columns():
    matrix = SparseRationalMatrix.fromColumns([{0: QQ(1)}, {0: QQ(-1)}, {}], rows=1)
    assert matrix.rank() == 1
    assert len(matrix.nullspace()) == 2


def test_rref_den_is_fraction_free():
    matrix = SparseRationalMatrix.fromColumns([{0: QQ(2)}, {0: QQ(4)}], rows=1)
    rref, denominator, pivots = matrix.rrefDen()
    assert pivots == [0]
    assert rref.get(0, 1) / rref.get(0, 0) == QQ(2)
    assert denominator


def test_equality_and_hash():
    first = SparseRationalMatrix({(0, 1): 1}, 2, 2)
    second = SparseRationalMatrix({(0, 1): QQ(1), (1, 1): 0}, 2, 2)
    assert first == second
    assert hash(first) == hash(second)
    assert first != SparseRationalMatrix({(0, 1): 1}, 2, 3)
