from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ

from config.settings import appSettings
from services.partitions import Partition
from services.socleEngine import AlgebraKind
from utils.errors import CapacityError, InvalidShapeError
from utils.logger import getLogger
from utils.sparseMatrix import SparseRationalMatrix, SparseVector, addScaled


modelLogger = getLogger(__name__)

IndexTuple = Tuple[int, ...]
# linear combination of elementary matrices E_{a,b}, keyed by (a, b)
Element = Dict[Tuple[int, int], object]
SlotPair = Tuple[int, int]
PairArgument = Union[SlotPair, Sequence[SlotPair]]


def sign(value: int) -> int:
    return 1 if value > 0 else -1


def bracket(left: Element, right: Element) -> Element:
    """[X, Y] in gl coordinates via [E_ab, E_cd] = d_bc E_ad - d_da E_cb."""
    result: Element = {}
    for (a, b), leftCoeff in left.items():
        for (c, d), rightCoeff in right.items():
            scale = leftCoeff * rightCoeff
            if b == c:
                addScaled(result, {(a, d): scale})
            if d == a:
                addScaled(result, {(c, b): -scale})
    return result


def combine(*terms: Tuple[object, Element]) -> Element:
    result: Element = {}
    for scale, element in terms:
        addScaled(result, element, scale)
    return result


def unit(a: int, b: int) -> Element:
    return {(a, b): QQ.one}


@dataclass(frozen=True)
class FiniteModel:
    """V_n^{⊗(p,q)} for gl_n/sl_n, or V_{2n}^{⊗d} for sp_2n/so_2n, over exact rationals."""

    algebra: AlgebraKind
    rank: int
    covariantSlots: int
    contravariantSlots: int = 0

    @property
    def shape(self) -> Union[Tuple[int, int], int]:
        if self.algebra.isMixed:
            return (self.covariantSlots, self.contravariantSlots)
        return self.covariantSlots

    @property
    def degree(self) -> int:
        return self.covariantSlots + self.contravariantSlots

    @cached_property
    def letters(self) -> Tuple[int, ...]:
        positive = tuple(range(1, self.rank + 1))
        if self.algebra.isMixed:
            return positive
        return positive + tuple(-idx for idx in positive)

    @property
    def dimension(self) -> int:
        return len(self.letters) ** self.degree

    @cached_property
    def basis(self) -> Tuple[IndexTuple, ...]:
        return tuple(product(self.letters, repeat=self.degree))

    @cached_property
    def basisIndex(self) -> Dict[IndexTuple, int]:
        return {indexTuple: position for position, indexTuple in enumerate(self.basis)}

    @cached_property
    def weightSpaces(self) -> Dict[Tuple[int, ...], Tuple[IndexTuple, ...]]:
        spaces: Dict[Tuple[int, ...], List[IndexTuple]] = {}
        for indexTuple in self.basis:
            spaces.setdefault(self.weightOf(indexTuple), []).append(indexTuple)
        return {weight: tuple(members) for weight, members in spaces.items()}

    def weightOf(self, indexTuple: IndexTuple) -> Tuple[int, ...]:
        coordinates = [0] * self.rank
        for slot, letter in enumerate(indexTuple):
            if self.algebra.isMixed:
                coordinates[letter - 1] += 1 if slot < self.covariantSlots else -1
            else:
                coordinates[abs(letter) - 1] += sign(letter)
        return tuple(coordinates)

    def isCovariantSlot(self, slot: int) -> bool:
        return slot < self.covariantSlots

    def contractedModel(self, pairCount: int) -> "FiniteModel":
        if self.algebra.isMixed:
            return FiniteModel(self.algebra, self.rank, self.covariantSlots - pairCount, self.contravariantSlots - pairCount)
        return FiniteModel(self.algebra, self.rank, self.covariantSlots - 2 * pairCount)

    def enlargedModel(self, pairCount: int) -> "FiniteModel":
        if self.algebra.isMixed:
            return FiniteModel(self.algebra, self.rank, self.covariantSlots + pairCount, self.contravariantSlots + pairCount)
        return FiniteModel(self.algebra, self.rank, self.covariantSlots + 2 * pairCount)

    # Lie algebra action

    def applyElementToTuple(self, element: Element, indexTuple: IndexTuple) -> SparseVector:
        result: SparseVector = {}
        for (a, b), coefficient in element.items():
            for slot, letter in enumerate(indexTuple):
                if self.algebra.isMixed and not self.isCovariantSlot(slot):
                    # E_ab on a dual slot: xi_c* -> -delta_{c,a} xi_b*
                    if letter == a:
                        image = indexTuple[:slot] + (b,) + indexTuple[slot + 1:]
                        addScaled(result, {image: -coefficient})
                elif letter == b:
                    image = indexTuple[:slot] + (a,) + indexTuple[slot + 1:]
                    addScaled(result, {image: coefficient})
        return result

    def applyElement(self, element: Element, vector: SparseVector) -> SparseVector:
        result: SparseVector = {}
        for indexTuple, coefficient in vector.items():
            addScaled(result, self.applyElementToTuple(element, indexTuple), coefficient)
        return result

    def actionMatrix(self, element: Element) -> SparseRationalMatrix:
        entries = {}
        for column, indexTuple in enumerate(self.basis):
            for image, value in self.applyElementToTuple(element, indexTuple).items():
                entries[(self.basisIndex[image], column)] = value
        return SparseRationalMatrix(entries, self.dimension, self.dimension)

    @cached_property
    def generatorElements(self) -> Tuple[Tuple[str, Element], ...]:
        n = self.rank
        generators: List[Tuple[str, Element]] = []
        if self.algebra.isMixed:
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    generators.append((f"E[{a},{b}]", unit(a, b)))
            return tuple(generators)

        symplectic = self.algebra is AlgebraKind.SP
        for i in range(1, n + 1):
            generators.append((f"H[{i}]", combine((1, unit(i, i)), (-1, unit(-i, -i)))))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    generators.append((f"X[e{i}-e{j}]", combine((1, unit(i, j)), (-1, unit(-j, -i)))))
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                if symplectic:
                    generators.append((f"X[e{i}+e{j}]", combine((1, unit(i, -j)), (1, unit(j, -i)))))
                    generators.append((f"X[-e{i}-e{j}]", combine((1, unit(-i, j)), (1, unit(-j, i)))))
                elif i < j:
                    generators.append((f"X[e{i}+e{j}]", combine((1, unit(i, -j)), (-1, unit(j, -i)))))
                    generators.append((f"X[-e{i}-e{j}]", combine((1, unit(-j, i)), (-1, unit(-i, j)))))
        return tuple(generators)

    @cached_property
    def generators(self) -> Tuple[Tuple[str, SparseRationalMatrix], ...]:
        return tuple((generatorId, self.actionMatrix(element)) for generatorId, element in self.generatorElements)

    def generatorElement(self, generatorId: str) -> Element:
        for candidateId, element in self.generatorElements:
            if candidateId == generatorId:
                return element
        raise InvalidShapeError(f"Model has no generator {generatorId!r}.")

    def cartanElements(self) -> List[Element]:
        if self.algebra.isMixed:
            return [unit(i, i) for i in range(1, self.rank + 1)]
        return [combine((1, unit(i, i)), (-1, unit(-i, -i))) for i in range(1, self.rank + 1)]

    def raisingElements(self, kind: str = "simple") -> List[Element]:
        """Positive root vectors: the simple ones, or the whole positive system with kind="all"."""
        n = self.rank
        if kind not in ("simple", "all"):
            raise InvalidShapeError(f"Unknown raising set {kind!r}; expected simple or all.")
        if self.algebra.isMixed:
            if kind == "simple":
                return [unit(i, i + 1) for i in range(1, n)]
            return [unit(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]

        elements = dict(self.generatorElements)
        if kind == "simple":
            chosen = [f"X[e{i}-e{i + 1}]" for i in range(1, n)]
            if self.algebra is AlgebraKind.SP:
                chosen.append(f"X[e{n}+e{n}]")
            elif n >= 2:
                chosen.append(f"X[e{n - 1}+e{n}]")
        else:
            chosen = [f"X[e{i}-e{j}]" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
            for i in range(1, n + 1):
                start = i if self.algebra is AlgebraKind.SP else i + 1
                chosen.extend(f"X[e{i}+e{j}]" for j in range(start, n + 1))
        return [elements[generatorId] for generatorId in chosen]

    # slot pairs

    def slotPositions(self, pairs: PairArgument) -> List[Tuple[int, int]]:
        """Validate 1-based index pairs and return 0-based tensor slot positions."""
        pairList = normalizePairs(pairs)
        positions: List[Tuple[int, int]] = []
        for first, second in pairList:
            if self.algebra.isMixed:
                if not (1 <= first <= self.covariantSlots and 1 <= second <= self.contravariantSlots):
                    raise InvalidShapeError(
                        f"Pair ({first},{second}) needs a covariant slot in 1..{self.covariantSlots} "
                        f"and a contravariant slot in 1..{self.contravariantSlots}."
                    )
                positions.append((first - 1, self.covariantSlots + second - 1))
            else:
                if not (1 <= first < second <= self.degree):
                    raise InvalidShapeError(f"Pair ({first},{second}) needs 1 <= i < j <= {self.degree}.")
                positions.append((first - 1, second - 1))
        used = [slot for pair in positions for slot in pair]
        if len(set(used)) != len(used):
            raise InvalidShapeError(f"Index pairs {pairList} overlap.")
        return positions

    def pairingValue(self, first: int, second: int):
        if self.algebra.isMixed:
            return QQ.one if first == second else QQ.zero
        if first + second != 0:
            return QQ.zero
        if self.algebra is AlgebraKind.SP:
            return QQ(sign(first))
        return QQ.one

    def contractTuple(self, positions: Sequence[Tuple[int, int]], indexTuple: IndexTuple) -> Optional[Tuple[IndexTuple, object]]:
        coefficient = QQ.one
        for first, second in positions:
            coefficient *= self.pairingValue(indexTuple[first], indexTuple[second])
            if not coefficient:
                return None
        removed = {slot for pair in positions for slot in pair}
        image = tuple(letter for slot, letter in enumerate(indexTuple) if slot not in removed)
        return image, coefficient

    def contractVector(self, positions: Sequence[Tuple[int, int]], vector: SparseVector) -> SparseVector:
        result: SparseVector = {}
        for indexTuple, value in vector.items():
            contracted = self.contractTuple(positions, indexTuple)
            if contracted is not None:
                image, coefficient = contracted
                addScaled(result, {image: coefficient}, value)
        return result

    def insertionTerms(self) -> List[Tuple[int, int, object]]:
        """Normalized canonical element: (letter at first slot, letter at second slot, coefficient)."""
        n = self.rank
        if self.algebra.isMixed:
            return [(k, k, QQ(1, n)) for k in range(1, n + 1)]
        scale = QQ(1, 2 * n)
        if self.algebra is AlgebraKind.SP:
            # dual of xi_a under Omega is sign(a) xi_{-a}
            return [(a, -a, scale * sign(a)) for a in self.letters]
        return [(a, -a, scale) for a in self.letters]

    def insertTuple(self, positions: Sequence[Tuple[int, int]], indexTuple: IndexTuple) -> SparseVector:
        """Insert the canonical element at every pair of positions (positions refer to this model)."""
        filled = {slot for pair in positions for slot in pair}
        freeSlots = [slot for slot in range(self.degree) if slot not in filled]
        if len(freeSlots) != len(indexTuple):
            raise InvalidShapeError(f"Cannot insert {len(positions)} pair(s) into a tuple of length {len(indexTuple)}.")
        result: SparseVector = {}
        for choice in product(self.insertionTerms(), repeat=len(positions)):
            letters = [0] * self.degree
            coefficient = QQ.one
            for (first, second), (firstLetter, secondLetter, scale) in zip(positions, choice):
                letters[first] = firstLetter
                letters[second] = secondLetter
                coefficient *= scale
            for slot, letter in zip(freeSlots, indexTuple):
                letters[slot] = letter
            addScaled(result, {tuple(letters): coefficient})
        return result

    def insertVector(self, positions: Sequence[Tuple[int, int]], vector: SparseVector) -> SparseVector:
        result: SparseVector = {}
        for indexTuple, value in vector.items():
            addScaled(result, self.insertTuple(positions, indexTuple), value)
        return result

    def xiTuple(self, positions: Sequence[Tuple[int, int]], indexTuple: IndexTuple) -> Optional[Tuple[IndexTuple, object]]:
        (first, second), = positions
        if indexTuple[first] != self.rank or indexTuple[second] != self.rank:
            return None
        image = tuple(letter for slot, letter in enumerate(indexTuple) if slot not in (first, second))
        return image, QQ(self.rank)

    def xiVector(self, positions: Sequence[Tuple[int, int]], vector: SparseVector) -> SparseVector:
        result: SparseVector = {}
        for indexTuple, value in vector.items():
            mapped = self.xiTuple(positions, indexTuple)
            if mapped is not None:
                image, coefficient = mapped
                addScaled(result, {image: coefficient}, value)
        return result

    def permuteTuple(self, mapping: Sequence[int], indexTuple: IndexTuple) -> IndexTuple:
        """The factor in slot k moves to slot mapping[k]."""
        letters = [0] * len(indexTuple)
        for slot, letter in enumerate(indexTuple):
            letters[mapping[slot]] = letter
        return tuple(letters)


def normalizePairs(pairs: PairArgument) -> List[SlotPair]:
    pairList = list(pairs)
    if len(pairList) == 2 and all(isinstance(entry, int) for entry in pairList):
        return [(pairList[0], pairList[1])]
    return [tuple(pair) for pair in pairList]


def buildModel(algebra: AlgebraKind, n: int, shape: Union[int, Tuple[int, int]]) -> FiniteModel:
    if n < 1:
        raise InvalidShapeError(f"Rank must be positive, got {n}.")
    if isinstance(shape, int):
        covariantSlots, contravariantSlots = shape, 0
    else:
        covariantSlots, contravariantSlots = shape
    if covariantSlots < 0 or contravariantSlots < 0:
        raise InvalidShapeError(f"Tensor shape {shape} has a negative degree.")
    if not algebra.isMixed and contravariantSlots != 0:
        raise InvalidShapeError(f"{algebra.value} models act on V^{{⊗d}}; shape {shape} has dual slots.")

    degree = covariantSlots + contravariantSlots
    if appSettings.isCapped(algebra.value, n, degree):
        modelLogger.warning("Rejected %s model with n=%s and degree %s (capacity cap)", algebra.value, n, degree)
        raise CapacityError(
            f"A {algebra.value} model with n={n} and degree {degree} exceeds the desk-scale caps; "
            "set SOCLE_LAB_MAX_DIM to raise them at your own risk."
        )

    model = FiniteModel(algebra, n, covariantSlots, contravariantSlots)
    modelLogger.debug("Built %s model n=%s shape=%s dim=%s", algebra.value, n, model.shape, model.dimension)
    return model


def _matrixFromTupleMap(source: FiniteModel, target: FiniteModel, tupleMap) -> SparseRationalMatrix:
    entries = {}
    for column, indexTuple in enumerate(source.basis):
        for image, value in tupleMap(indexTuple).items():
            entries[(target.basisIndex[image], column)] = value
    return SparseRationalMatrix(entries, target.dimension, source.dimension)


def contraction(model: FiniteModel, pairs: PairArgument) -> SparseRationalMatrix:
    """Matrix of the (multi-)contraction Phi_{I_1..I_r} into the smaller tensor space."""
    positions = model.slotPositions(pairs)
    target = model.contractedModel(len(positions))
    return _matrixFromTupleMap(model, target, lambda indexTuple: model.contractVector(positions, {indexTuple: QQ.one}))


def insertion(model: FiniteModel, pairs: PairArgument) -> SparseRationalMatrix:
    """Matrix of Psi_I from the smaller tensor space into model; positions are numbered in model."""
    positions = model.slotPositions(pairs)
    source = model.contractedModel(len(positions))
    return _matrixFromTupleMap(source, model, lambda indexTuple: model.insertTuple(positions, indexTuple))


def xiMap(model: FiniteModel, pair: SlotPair) -> SparseRationalMatrix:
    if not model.algebra.isMixed:
        raise InvalidShapeError("Xi maps are defined for gl and sl models.")
    positions = model.slotPositions(pair)
    if len(positions) != 1:
        raise InvalidShapeError("Xi takes a single index pair.")
    target = model.contractedModel(1)
    return _matrixFromTupleMap(model, target, lambda indexTuple: model.xiVector(positions, {indexTuple: QQ.one}))


def permutationMatrix(model: FiniteModel, mapping: Sequence[int]) -> SparseRationalMatrix:
    """Slot permutation (0-based, slot k -> mapping[k]); gl permutations must keep dual slots dual."""
    mapping = tuple(mapping)
    if sorted(mapping) != list(range(model.degree)):
        raise InvalidShapeError(f"{mapping} is not a permutation of {model.degree} slots.")
    if model.algebra.isMixed and any(model.isCovariantSlot(slot) != model.isCovariantSlot(image) for slot, image in enumerate(mapping)):
        raise InvalidShapeError("gl permutations may not mix covariant and contravariant slots.")
    return _matrixFromTupleMap(model, model, lambda indexTuple: {model.permuteTuple(mapping, indexTuple): QQ.one})


def _permutationSign(images: Sequence[int]) -> int:
    seen = set()
    parity = 0
    for start in range(len(images)):
        if start in seen:
            continue
        cycleLength = 0
        current = start
        while current not in seen:
            seen.add(current)
            current = images[current]
            cycleLength += 1
        parity += cycleLength - 1
    return -1 if parity % 2 else 1


def _blockPermutations(blocks: Sequence[Sequence[int]], size: int) -> List[Tuple[int, ...]]:
    """All permutations of range(size) that preserve every block setwise."""
    result = []
    for choice in product(*(permutations(block) for block in blocks)):
        images = list(range(size))
        for block, imageBlock in zip(blocks, choice):
            for source, image in zip(block, imageBlock):
                images[source] = image
        result.append(tuple(images))
    return result


class YoungProjector:
    """Unnormalized Young symmetrizers c = a*b acting on chosen slots of a model.

    Each factor is given as (partition, 1-based slot positions); the row-reading
    standard filling of the partition is laid over the positions in order.
    """

    def __init__(self, model: FiniteModel, factors: Sequence[Tuple[Partition, Sequence[int]]]):
        self.model = model
        self.factors = [(partition, tuple(slots)) for partition, slots in factors]
        usedSlots: List[int] = []
        for partition, slots in self.factors:
            if partition.weight != len(slots):
                raise InvalidShapeError(f"Partition {partition} needs {partition.weight} slots, got {len(slots)}.")
            if any(not 1 <= slot <= model.degree for slot in slots):
                raise InvalidShapeError(f"Slots {slots} fall outside 1..{model.degree}.")
            usedSlots.extend(slots)
        if len(set(usedSlots)) != len(usedSlots):
            raise InvalidShapeError(f"Symmetrizer slots {usedSlots} overlap.")
        self.terms = self._buildTerms()

    def _factorTerms(self, partition: Partition, slots: Tuple[int, ...]) -> List[Tuple[Dict[int, int], int]]:
        cellSlots: List[List[int]] = []
        cursor = 0
        for rowLength in partition.parts:
            cellSlots.append(list(range(cursor, cursor + rowLength)))
            cursor += rowLength
        columns = [[row[colIdx] for row in cellSlots if colIdx < len(row)] for colIdx in range(partition.part(0))]
        size = partition.weight
        rowGroup = _blockPermutations(cellSlots, size)
        columnGroup = _blockPermutations(columns, size)

        terms = []
        for rowPerm in rowGroup:
            for columnPerm in columnGroup:
                composed = tuple(rowPerm[columnPerm[cell]] for cell in range(size))
                mapping = {slots[cell] - 1: slots[composed[cell]] - 1 for cell in range(size)}
                terms.append((mapping, _permutationSign(columnPerm)))
        return terms

    def _buildTerms(self) -> List[Tuple[Tuple[int, ...], int]]:
        combined: List[Tuple[Dict[int, int], int]] = [({}, 1)]
        for partition, slots in self.factors:
            factorTerms = self._factorTerms(partition, slots)
            combined = [
                ({**mapping, **factorMapping}, termSign * factorSign)
                for mapping, termSign in combined
                for factorMapping, factorSign in factorTerms
            ]
        fullTerms = []
        for mapping, termSign in combined:
            fullTerms.append((tuple(mapping.get(slot, slot) for slot in range(self.model.degree)), termSign))
        return fullTerms

    def applyTuple(self, indexTuple: IndexTuple) -> SparseVector:
        result: SparseVector = {}
        for mapping, termSign in self.terms:
            addScaled(result, {self.model.permuteTuple(mapping, indexTuple): QQ(termSign)})
        return result

    def applyVector(self, vector: SparseVector) -> SparseVector:
        result: SparseVector = {}
        for indexTuple, value in vector.items():
            addScaled(result, self.applyTuple(indexTuple), value)
        return result

    def matrix(self) -> SparseRationalMatrix:
        return _matrixFromTupleMap(self.model, self.model, self.applyTuple)


def youngSymmetrizer(partition: Partition, model: FiniteModel, slots: Iterable[int]) -> SparseRationalMatrix:
    """Matrix of c_partition on the given 1-based tensor positions."""
    return YoungProjector(model, [(partition, tuple(slots))]).matrix()


def summandProjector(model: FiniteModel, lam: Partition, mu: Partition) -> YoungProjector:
    """c_lam on the covariant slots times c_mu on the contravariant ones."""
    if lam.weight != model.covariantSlots or mu.weight != model.contravariantSlots:
        raise InvalidShapeError(f"Shapes {lam} and {mu} do not match a model of shape {model.shape}.")
    factors = [(lam, tuple(range(1, model.covariantSlots + 1)))]
    if model.contravariantSlots:
        factors.append((mu, tuple(range(model.covariantSlots + 1, model.degree + 1))))
    return YoungProjector(model, factors)
