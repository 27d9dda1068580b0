from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from services.littlewoodRichardson import lrCoefficient
from services.partitions import (
    Partition,
    ZERO,
    canonicalOrder,
    double,
    parsePartition,
    partitionsOf,
    symGroupIrrepDim,
    transpose,
)
from utils.errors import InvalidShapeError


class AlgebraKind(str, Enum):
    GL = "gl"
    SL = "sl"
    SP = "sp"
    SO = "so"

    @property
    def isMixed(self) -> bool:
        """gl and sl act on mixed tensors; sp and so only on V^{⊗d}."""
        return self in (AlgebraKind.GL, AlgebraKind.SL)


def parseAlgebra(text: str) -> AlgebraKind:
    try:
        return AlgebraKind(text.strip().lower())
    except ValueError:
        raise InvalidShapeError(f"Unknown algebra {text!r}; expected one of gl, sl, sp, so.") from None


@dataclass(frozen=True)
class IrrepLabel:
    algebra: AlgebraKind
    covariant: Partition
    contravariant: Partition = ZERO

    def __post_init__(self):
        if not self.algebra.isMixed and not self.contravariant.isZero:
            raise InvalidShapeError(f"{self.algebra.value} labels take a single partition, got contravariant {self.contravariant}.")

    @property
    def sortKey(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.covariant.parts, self.contravariant.parts)

    @property
    def text(self) -> str:
        if self.algebra.isMixed:
            return f"Γ{{{self.covariant.text};{self.contravariant.text}}}"
        if self.algebra is AlgebraKind.SP:
            return f"Γ⟨{self.covariant.text}⟩"
        return f"Γ[{self.covariant.text}]"

    def __str__(self) -> str:
        return self.text


Layer = Tuple[Tuple[IrrepLabel, int], ...]


def _canonicalLayer(multiplicities: Dict[IrrepLabel, int]) -> Layer:
    entries = [(label, mult) for label, mult in multiplicities.items() if mult > 0]
    entries.sort(key=lambda entry: entry[0].sortKey, reverse=True)
    return tuple(entries)


@dataclass(frozen=True)
class SocleDiagram:
    """Socle layers of one indecomposable tensor module, socle first."""

    algebra: AlgebraKind
    covariant: Partition
    contravariant: Partition
    layers: Tuple[Layer, ...] = field(default_factory=tuple)

    @property
    def socle(self) -> Layer:
        return self.layers[0]

    def layer(self, idx: int) -> Dict[IrrepLabel, int]:
        """Layer idx+1 (0 is the socle) as a label -> multiplicity map."""
        return dict(self.layers[idx])

    def constituentCounts(self) -> Dict[IrrepLabel, int]:
        counts: Dict[IrrepLabel, int] = {}
        for layer in self.layers:
            for label, mult in layer:
                counts[label] = counts.get(label, 0) + mult
        return counts

    def toJson(self) -> Dict:
        return {
            "algebra": self.algebra.value,
            "lambda": self.covariant.text,
            "mu": self.contravariant.text,
            "layers": [
                [{"cov": label.covariant.text, "con": label.contravariant.text, "mult": mult} for label, mult in layer]
                for layer in self.layers
            ],
        }

    @classmethod
    def fromJson(cls, payload: Dict) -> "SocleDiagram":
        algebra = parseAlgebra(payload["algebra"])
        layers = []
        for rawLayer in payload["layers"]:
            multiplicities = {
                IrrepLabel(algebra, parsePartition(entry["cov"]), parsePartition(entry["con"])): int(entry["mult"])
                for entry in rawLayer
            }
            layers.append(_canonicalLayer(multiplicities))
        return cls(algebra, parsePartition(payload["lambda"]), parsePartition(payload["mu"]), tuple(layers))


def _buildDiagram(algebra: AlgebraKind, lam: Partition, mu: Partition, layerMaps: Iterable[Dict[IrrepLabel, int]]) -> SocleDiagram:
    layers = [_canonicalLayer(layerMap) for layerMap in layerMaps]
    while layers and not layers[-1]:
        layers.pop()
    return SocleDiagram(algebra, lam, mu, tuple(layer for layer in layers if layer))


def totalMultiplicity(lam: Partition, mu: Partition, lamPrime: Partition, muPrime: Partition) -> int:
    """Jordan-Holder multiplicity of Gamma_{lamPrime;muPrime} in Gamma_{lam;0} (x) Gamma_{0;mu}."""
    shift = lam.weight - lamPrime.weight
    if shift < 0 or shift != mu.weight - muPrime.weight:
        return 0
    return sum(lrCoefficient(lamPrime, gamma, lam) * lrCoefficient(muPrime, gamma, mu) for gamma in partitionsOf(shift))


def glSocleLayers(lam: Partition, mu: Partition, algebra: AlgebraKind = AlgebraKind.GL) -> SocleDiagram:
    if not algebra.isMixed:
        raise InvalidShapeError(f"glSocleLayers does not apply to {algebra.value}.")
    layerMaps = []
    for level in range(min(lam.weight, mu.weight) + 1):
        layerMap: Dict[IrrepLabel, int] = {}
        for lamPrime in partitionsOf(lam.weight - level):
            if not lam.contains(lamPrime):
                continue
            for muPrime in partitionsOf(mu.weight - level):
                if not mu.contains(muPrime):
                    continue
                mult = sum(
                    lrCoefficient(lamPrime, gamma, lam) * lrCoefficient(muPrime, gamma, mu)
                    for gamma in partitionsOf(level)
                )
                if mult:
                    layerMap[IrrepLabel(algebra, lamPrime, muPrime)] = mult
        layerMaps.append(layerMap)
    return _buildDiagram(algebra, lam, mu, layerMaps)


def _classicalLayers(algebra: AlgebraKind, lam: Partition) -> SocleDiagram:
    layerMaps = []
    for level in range(lam.weight // 2 + 1):
        gammas = partitionsOf(level)
        if algebra is AlgebraKind.SP:
            removed = [transpose(double(gamma)) for gamma in gammas]
        else:
            removed = [double(gamma) for gamma in gammas]
        layerMap: Dict[IrrepLabel, int] = {}
        for muPrime in partitionsOf(lam.weight - 2 * level):
            if not lam.contains(muPrime):
                continue
            mult = sum(lrCoefficient(muPrime, shape, lam) for shape in removed)
            if mult:
                layerMap[IrrepLabel(algebra, muPrime)] = mult
        layerMaps.append(layerMap)
    return _buildDiagram(algebra, lam, ZERO, layerMaps)


def spSocleLayers(lam: Partition) -> SocleDiagram:
    return _classicalLayers(AlgebraKind.SP, lam)


def soSocleLayers(lam: Partition) -> SocleDiagram:
    return _classicalLayers(AlgebraKind.SO, lam)


def socleLayers(algebra: AlgebraKind, lam: Partition, mu: Partition = ZERO) -> SocleDiagram:
    if algebra.isMixed:
        return glSocleLayers(lam, mu, algebra)
    if not mu.isZero:
        raise InvalidShapeError(f"{algebra.value} diagrams take a single partition; drop the contravariant part {mu}.")
    if algebra is AlgebraKind.SP:
        return spSocleLayers(lam)
    return soSocleLayers(lam)


def loewyLength(diagram: SocleDiagram) -> int:
    return len(diagram.layers)


def ambientLoewyBound(algebra: AlgebraKind, p: int, q: int = 0) -> int:
    if algebra.isMixed:
        return min(p, q) + 1
    return (p + q) // 2 + 1


def branchingMultiplicity(algebra: AlgebraKind, lam: Partition, mu: Partition) -> int:
    """Multiplicity of the sp/so simple module labelled mu inside Gamma_{lam;0}."""
    if algebra.isMixed:
        raise InvalidShapeError("branchingMultiplicity is defined for sp and so only.")
    shift = lam.weight - mu.weight
    if shift < 0 or shift % 2:
        return 0
    total = 0
    for gamma in partitionsOf(shift // 2):
        shape = transpose(double(gamma)) if algebra is AlgebraKind.SP else double(gamma)
        total += lrCoefficient(mu, shape, lam)
    return total


@dataclass(frozen=True)
class Decomposition:
    algebra: AlgebraKind
    p: int
    q: int
    summands: Tuple[Tuple[Partition, Partition, int], ...]

    def multiplicity(self, lam: Partition, mu: Partition = ZERO) -> int:
        for cov, con, mult in self.summands:
            if cov == lam and con == mu:
                return mult
        return 0

    def diagrams(self) -> List[Tuple[SocleDiagram, int]]:
        return [(socleLayers(self.algebra, cov, con), mult) for cov, con, mult in self.summands]

    def toJson(self) -> Dict:
        return {
            "algebra": self.algebra.value,
            "p": self.p,
            "q": self.q,
            "summands": [
                {"lambda": cov.text, "mu": con.text, "mult": mult, "diagram": socleLayers(self.algebra, cov, con).toJson()}
                for cov, con, mult in self.summands
            ],
        }


def decomposeTensor(algebra: AlgebraKind, p: int, q: int = 0) -> Decomposition:
    if p < 0 or q < 0:
        raise InvalidShapeError(f"Tensor degrees must be nonnegative, got ({p}, {q}).")
    if not algebra.isMixed and q != 0:
        raise InvalidShapeError(f"{algebra.value} acts on V^{{⊗d}}; pass d instead of a mixed shape ({p}, {q}).")

    summands = []
    if algebra.isMixed:
        for lam in canonicalOrder(partitionsOf(p)):
            for mu in canonicalOrder(partitionsOf(q)):
                summands.append((lam, mu, symGroupIrrepDim(lam) * symGroupIrrepDim(mu)))
    else:
        for lam in canonicalOrder(partitionsOf(p)):
            summands.append((lam, ZERO, symGroupIrrepDim(lam)))
    return Decomposition(algebra, p, q, tuple(summands))


def tensorSocleLayers(algebra: AlgebraKind, p: int, q: int = 0) -> List[Dict[IrrepLabel, int]]:
    """Socle layers of the whole tensor space: every summand's layers, weighted by its multiplicity."""
    decomposition = decomposeTensor(algebra, p, q)
    layers: List[Dict[IrrepLabel, int]] = []
    for diagram, mult in decomposition.diagrams():
        for idx, layer in enumerate(diagram.layers):
            while len(layers) <= idx:
                layers.append({})
            for label, labelMult in layer:
                layers[idx][label] = layers[idx].get(label, 0) + mult * labelMult
    return layers


def tensorConstituents(algebra: AlgebraKind, p: int, q: int = 0) -> Dict[IrrepLabel, int]:
    counts: Dict[IrrepLabel, int] = {}
    for layer in tensorSocleLayers(algebra, p, q):
        for label, mult in layer.items():
            counts[label] = counts.get(label, 0) + mult
    return counts


def socleLevelOfConstituent(p: int, q: int, label: IrrepLabel) -> Optional[int]:
    """Smallest r with the constituent inside F^(r), i.e. |lam'| > p - r and |mu'| > q - r."""
    if not label.algebra.isMixed:
        raise InvalidShapeError("socleLevelOfConstituent is stated for gl and sl.")
    shift = p - label.covariant.weight
    if shift < 0 or shift != q - label.contravariant.weight:
        return None
    return shift + 1
