from math import prod
from typing import Tuple

from services.socleEngine import AlgebraKind, IrrepLabel
from utils.errors import RankTooSmallError


def highestWeight(n: int, label: IrrepLabel) -> Tuple[int, ...]:
    """gl_n: (lam_1..lam_p, 0.., -mu_q..-mu_1); sp_2n/so_2n: (lam_1..lam_k, 0..)."""
    lam, mu = label.covariant, label.contravariant
    if label.algebra.isMixed:
        if lam.length + mu.length > n:
            raise RankTooSmallError(f"{label} needs rank at least {lam.length + mu.length}, got n={n}.")
        middle = (0,) * (n - lam.length - mu.length)
        return lam.parts + middle + tuple(-part for part in reversed(mu.parts))
    if lam.length > n:
        raise RankTooSmallError(f"{label} needs rank at least {lam.length}, got n={n}.")
    return lam.parts + (0,) * (n - lam.length)


def weylDim(algebra: AlgebraKind, n: int, label: IrrepLabel) -> int:
    """Weyl dimension formula over the positive roots of gl_n, sp_2n (type C) or so_2n (type D)."""
    weight = highestWeight(n, label)
    if algebra.isMixed:
        numerator = prod(weight[i] - weight[j] + j - i for i in range(n) for j in range(i + 1, n))
        denominator = prod(j - i for i in range(n) for j in range(i + 1, n))
        return numerator // denominator

    if algebra is AlgebraKind.SP:
        rho = tuple(n - i for i in range(n))
    else:
        rho = tuple(n - 1 - i for i in range(n))
    shifted = tuple(w + r for w, r in zip(weight, rho))

    def rootProduct(vector: Tuple[int, ...]) -> int:
        value = prod((vector[i] - vector[j]) * (vector[i] + vector[j]) for i in range(n) for j in range(i + 1, n))
        if algebra is AlgebraKind.SP:
            value *= prod(vector)
        return value

    numerator = rootProduct(shifted)
    denominator = rootProduct(rho)
    return numerator // denominator


def finiteLabelDim(algebra: AlgebraKind, n: int, label: IrrepLabel) -> int:
    """Dimension of the traceless piece labelled by label inside the rank-n tensor space.

    sp: a label of length n+1 has no room and contributes 0; longer labels need the
    modification rules and are rejected.
    so: a label of length exactly n is the sum of the two weights (.., +lam_n) and (.., -lam_n).
    """
    if algebra is AlgebraKind.SP and label.covariant.length > n:
        if label.covariant.length > n + 1:
            raise RankTooSmallError(
                f"{label} has length {label.covariant.length}; sp_{2 * n} needs modification rules beyond length {n + 1}."
            )
        return 0
    dimension = weylDim(algebra, n, label)
    if algebra is AlgebraKind.SO and label.covariant.length == n and n > 0:
        return 2 * dimension
    return dimension
