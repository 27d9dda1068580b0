from functools import lru_cache
from typing import Dict, List, Tuple

from services.partitions import Partition, canonicalOrder, horizontalStripsRemoved, partitionsOf
from utils.logger import getLogger


lrLogger = getLogger(__name__)

# nu -> N^nu_{lambda,mu}, zero terms absent, keys in canonical order
SchurExpansion = Dict[Partition, int]
# exponent vector -> integer coefficient
Polynomial = Dict[Tuple[int, ...], int]


def _countLatticeFillings(outer: Partition, inner: Partition, content: Partition) -> int:
    # reverse reading order: rows top to bottom, each row right to left
    cells = [
        (rowIdx, colIdx)
        for rowIdx in range(outer.length)
        for colIdx in range(outer.part(rowIdx) - 1, inner.part(rowIdx) - 1, -1)
    ]
    filling: Dict[Tuple[int, int], int] = {}
    used = [0] * (content.length + 1)

    def place(position: int) -> int:
        if position == len(cells):
            return 1
        rowIdx, colIdx = cells[position]
        upper = content.length
        rightLetter = filling.get((rowIdx, colIdx + 1))
        if rightLetter is not None:
            upper = min(upper, rightLetter)
        aboveLetter = filling.get((rowIdx - 1, colIdx))
        lower = aboveLetter + 1 if aboveLetter is not None else 1
        # a lattice word never puts a letter larger than row+1 in row rowIdx
        upper = min(upper, rowIdx + 1)

        total = 0
        for letter in range(lower, upper + 1):
            if used[letter] >= content.parts[letter - 1]:
                continue
            if letter > 1 and used[letter] + 1 > used[letter - 1]:
                continue
            filling[(rowIdx, colIdx)] = letter
            used[letter] += 1
            total += place(position + 1)
            used[letter] -= 1
            del filling[(rowIdx, colIdx)]
        return total

    return place(0)


@lru_cache(maxsize=None)
def lrCoefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """N^nu_{lam,mu}: lattice-word fillings of nu/lam with content mu."""
    if nu.weight != lam.weight + mu.weight or not nu.contains(lam) or not nu.contains(mu):
        return 0
    return _countLatticeFillings(nu, lam, mu)


def schurProductExpand(lam: Partition, mu: Partition) -> SchurExpansion:
    expansion: SchurExpansion = {}
    for nu in partitionsOf(lam.weight + mu.weight):
        coefficient = lrCoefficient(lam, mu, nu)
        if coefficient:
            expansion[nu] = coefficient
    return expansion


def formatExpansion(expansion: SchurExpansion) -> str:
    return " ".join(f"{nu}:{expansion[nu]}" for nu in canonicalOrder(list(expansion)))


@lru_cache(maxsize=None)
def _schurPolynomialCached(parts: Tuple[int, ...], k: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    partition = Partition(parts)
    if partition.length > k:
        return ()
    if k == 0:
        return (((), 1),) if partition.isZero else ()

    # peel the horizontal strip holding the letter k
    terms: Dict[Tuple[int, ...], int] = {}
    for smaller in horizontalStripsRemoved(partition):
        if smaller.length > k - 1:
            continue
        stripSize = partition.weight - smaller.weight
        for exponents, coefficient in _schurPolynomialCached(smaller.parts, k - 1):
            key = exponents + (stripSize,)
            terms[key] = terms.get(key, 0) + coefficient
    return tuple(sorted(terms.items(), reverse=True))


def schurPolynomial(partition: Partition, k: int) -> Polynomial:
    """Monomial expansion of s_partition(x_1..x_k), built tableau-letter by tableau-letter."""
    if k < 1:
        raise ValueError(f"Schur polynomials need at least one variable, got k={k}.")
    return dict(_schurPolynomialCached(partition.parts, k))


def multiplyPolynomials(left: Polynomial, right: Polynomial) -> Polynomial:
    product: Polynomial = {}
    for leftExp, leftCoeff in left.items():
        for rightExp, rightCoeff in right.items():
            key = tuple(a + b for a, b in zip(leftExp, rightExp))
            product[key] = product.get(key, 0) + leftCoeff * rightCoeff
    return {key: value for key, value in product.items() if value}


def _dominantExponents(degree: int, k: int) -> List[Tuple[int, ...]]:
    return [
        alpha.parts + (0,) * (k - alpha.length)
        for alpha in partitionsOf(degree)
        if alpha.length <= k
    ]


def oracleAgrees(lam: Partition, mu: Partition, fullComparison: bool = False) -> bool:
    """Compare the LR expansion with the product of Schur polynomials in |lam|+|mu| variables.

    Both sides are symmetric polynomials, so by default only the coefficients at
    weakly decreasing exponent vectors are compared; fullComparison multiplies out
    every monomial.
    """
    degree = lam.weight + mu.weight
    k = max(degree, 1)
    leftPoly = schurPolynomial(lam, k)
    rightPoly = schurPolynomial(mu, k)
    expansion = schurProductExpand(lam, mu)

    if fullComparison:
        lhs = multiplyPolynomials(leftPoly, rightPoly)
        rhs: Polynomial = {}
        for nu, coefficient in expansion.items():
            for exponents, value in schurPolynomial(nu, k).items():
                rhs[exponents] = rhs.get(exponents, 0) + coefficient * value
        rhs = {key: value for key, value in rhs.items() if value}
        agrees = lhs == rhs
    else:
        agrees = True
        nuPolys = {nu: schurPolynomial(nu, k) for nu in expansion}
        for alpha in _dominantExponents(degree, k):
            lhsCoeff = 0
            for beta, leftCoeff in leftPoly.items():
                gamma = tuple(a - b for a, b in zip(alpha, beta))
                if min(gamma) < 0:
                    continue
                lhsCoeff += leftCoeff * rightPoly.get(gamma, 0)
            rhsCoeff = sum(coefficient * nuPolys[nu].get(alpha, 0) for nu, coefficient in expansion.items())
            if lhsCoeff != rhsCoeff:
                agrees = False
                break

    if not agrees:
        lrLogger.error("LR expansion of %s * %s disagrees with the polynomial oracle", lam, mu)
    return agrees
