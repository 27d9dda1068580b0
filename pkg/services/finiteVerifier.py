import asyncio
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from sympy import QQ

from config.settings import appSettings
from services.finiteModel import (
    FiniteModel,
    IndexTuple,
    YoungProjector,
    bracket,
    buildModel,
    normalizePairs,
    summandProjector,
)
from services.partitions import Partition, ZERO
from services.socleEngine import AlgebraKind, IrrepLabel, socleLayers, socleLevelOfConstituent, tensorConstituents, tensorSocleLayers
from services.weylDimension import finiteLabelDim, highestWeight
from utils.errors import CapacityError, InvalidShapeError, SubspaceError
from utils.logger import getLogger
from utils.sparseMatrix import SparseRationalMatrix, SparseVector, addScaled


verifierLogger = getLogger(__name__)

Weight = Tuple[int, ...]


def _disjointPairSets(model: FiniteModel, depth: int) -> List[List[Tuple[int, int]]]:
    """All sets of depth pairwise disjoint contraction pairs, as 0-based slot positions."""
    if depth == 0:
        return [[]]
    if model.algebra.isMixed:
        p, q = model.covariantSlots, model.contravariantSlots
        pairSets = []
        for covariant in combinations(range(p), depth):
            for contravariant in permutations(range(p, p + q), depth):
                pairSets.append(list(zip(covariant, contravariant)))
        return pairSets

    def matchings(slots: Tuple[int, ...], remaining: int) -> List[List[Tuple[int, int]]]:
        if remaining == 0:
            return [[]]
        result = []
        for idx, first in enumerate(slots):
            for jdx in range(idx + 1, len(slots)):
                second = slots[jdx]
                rest = tuple(slot for slot in slots[idx + 1:] if slot != second)
                for tail in matchings(rest, remaining - 1):
                    result.append([(first, second)] + tail)
        return result

    return matchings(tuple(range(model.degree)), depth)


def _columnsMatrix(columns: Sequence[SparseVector]) -> SparseRationalMatrix:
    """Matrix whose j-th column is columns[j]; row labels are whatever keys the vectors use."""
    rowIndex: Dict[Hashable, int] = {}
    indexed = [{rowIndex.setdefault(key, len(rowIndex)): value for key, value in column.items()} for column in columns]
    return SparseRationalMatrix.fromColumns(indexed, len(rowIndex))


def _kernelCoefficients(columns: Sequence[SparseVector]) -> List[Dict[int, object]]:
    return _columnsMatrix(columns).nullspace()


def _combineVectors(vectors: Sequence[SparseVector], coefficients: Dict[int, object]) -> SparseVector:
    result: SparseVector = {}
    for idx, value in coefficients.items():
        addScaled(result, vectors[idx], value)
    return result


class KernelFiltration:
    """F^(0)=0 ⊂ F^(1) ⊂ ... ⊂ F^(top)=ambient, with F^(r) the common kernel of all r-fold contractions.

    The ambient space is the whole tensor space, the image of the Young symmetrizers
    (projector), or the span of given weight vectors (ambient). Everything is
    computed one weight space at a time.
    """

    def __init__(
        self,
        model: FiniteModel,
        projector: Optional[YoungProjector] = None,
        ambient: Optional[Sequence[SparseVector]] = None,
    ):
        if projector is not None and ambient is not None:
            raise InvalidShapeError("Give the ambient space as a projector or as spanning vectors, not both.")
        self.model = model
        self.projector = projector
        self._spanning: Optional[Dict[Weight, List[SparseVector]]] = None
        if ambient is not None:
            self._spanning = {}
            for vector in ambient:
                weights = {model.weightOf(indexTuple) for indexTuple in vector}
                if len(weights) > 1:
                    raise InvalidShapeError("Spanning vectors must be weight vectors.")
                for weight in weights:
                    self._spanning.setdefault(weight, []).append(dict(vector))
        if model.algebra.isMixed:
            self.maxContractions = min(model.covariantSlots, model.contravariantSlots)
        else:
            self.maxContractions = model.degree // 2
        self.topDepth = self.maxContractions + 1
        self._ambientCache: Dict[Weight, List[SparseVector]] = {}
        self._kernelCache: Dict[Tuple[Weight, int], List[SparseVector]] = {}

    @cached_property
    def _pairSets(self) -> Dict[int, List[List[Tuple[int, int]]]]:
        return {depth: _disjointPairSets(self.model, depth) for depth in range(1, self.maxContractions + 1)}

    def level(self, depth: int) -> "FiltrationLevel":
        if not 0 <= depth <= self.topDepth:
            raise InvalidShapeError(f"Filtration depth {depth} is outside 0..{self.topDepth}.")
        return FiltrationLevel(self, depth)

    def constraints(self, depth: int, vector: SparseVector) -> SparseVector:
        """Stacked images of vector under every depth-fold contraction; zero iff vector lies in F^(depth)."""
        if depth >= self.topDepth:
            return {}
        if depth == 0:
            return {("id", indexTuple): value for indexTuple, value in vector.items()}
        stacked: SparseVector = {}
        for setIdx, positions in enumerate(self._pairSets[depth]):
            for image, value in self.model.contractVector(positions, vector).items():
                stacked[(setIdx, image)] = value
        return stacked

    def ambientBasisAt(self, weight: Weight) -> List[SparseVector]:
        if weight not in self._ambientCache:
            tuples = self.model.weightSpaces.get(weight, ())
            if self._spanning is not None:
                vectors = self._spanning.get(weight, [])
                basis = [vectors[idx] for idx in self._independent(vectors)]
            elif self.projector is None:
                basis = [{indexTuple: QQ.one} for indexTuple in tuples]
            else:
                images = [self.projector.applyTuple(indexTuple) for indexTuple in tuples]
                images = [image for image in images if image]
                basis = [images[idx] for idx in self._independent(images)]
            self._ambientCache[weight] = basis
        return self._ambientCache[weight]

    def inAmbient(self, vector: SparseVector) -> bool:
        if not vector or (self.projector is None and self._spanning is None):
            return True
        byWeight: Dict[Weight, SparseVector] = {}
        for indexTuple, value in vector.items():
            byWeight.setdefault(self.model.weightOf(indexTuple), {})[indexTuple] = value
        for weight, component in byWeight.items():
            basis = self.ambientBasisAt(weight)
            if not basis or _columnsMatrix(basis + [component]).rank() > len(basis):
                return False
        return True

    @staticmethod
    def _independent(vectors: List[SparseVector]) -> List[int]:
        if not vectors:
            return []
        return _columnsMatrix(vectors).independentColumns()

    def basisAt(self, depth: int, weight: Weight) -> List[SparseVector]:
        ambient = self.ambientBasisAt(weight)
        if depth >= self.topDepth:
            return ambient
        if depth == 0 or not ambient:
            return []
        key = (weight, depth)
        if key not in self._kernelCache:
            columns = [self.constraints(depth, vector) for vector in ambient]
            kernel = _kernelCoefficients(columns)
            self._kernelCache[key] = [_combineVectors(ambient, coefficients) for coefficients in kernel]
        return self._kernelCache[key]

    def dimensionAt(self, depth: int, weight: Weight) -> int:
        return len(self.basisAt(depth, weight))

    def dimension(self, depth: int) -> int:
        return sum(self.dimensionAt(depth, weight) for weight in self.model.weightSpaces)

    def basis(self, depth: int) -> List[SparseVector]:
        vectors: List[SparseVector] = []
        for weight in sorted(self.model.weightSpaces, reverse=True):
            vectors.extend(self.basisAt(depth, weight))
        return vectors


@dataclass(frozen=True)
class FiltrationLevel:
    filtration: KernelFiltration
    depth: int

    def contains(self, vector: SparseVector) -> bool:
        if self.filtration.constraints(self.depth, vector):
            return False
        return self.depth == 0 or self.filtration.inAmbient(vector)


@dataclass(frozen=True)
class FiltrationStep:
    depth: int
    dimension: int
    basis: Tuple[SparseVector, ...]


def kernelFiltration(model: FiniteModel, rMax: Optional[int] = None, projector: Optional[YoungProjector] = None) -> List[FiltrationStep]:
    """F^(1) ⊂ ... ⊂ F^(rMax), followed by the full (ambient) space."""
    filtration = KernelFiltration(model, projector)
    if rMax is None:
        rMax = filtration.maxContractions
    if not 0 <= rMax <= filtration.maxContractions:
        raise InvalidShapeError(f"rMax must lie in 0..{filtration.maxContractions}, got {rMax}.")
    steps = []
    for depth in list(range(1, rMax + 1)) + [filtration.topDepth]:
        basis = filtration.basis(depth)
        steps.append(FiltrationStep(depth, len(basis), tuple(basis)))
    return steps


def singularVectorCount(
    model: FiniteModel,
    subspace: FiltrationLevel,
    moduloSubspace: FiltrationLevel,
    weight: Weight,
    raising: str = "simple",
) -> int:
    """Highest weight vectors of the given weight in subspace / moduloSubspace."""
    filtration = subspace.filtration
    if moduloSubspace.filtration is not filtration or filtration.model != model:
        raise SubspaceError("Both subspaces must come from the same kernel filtration of this model.")
    if moduloSubspace.depth > subspace.depth:
        raise SubspaceError(f"F^({moduloSubspace.depth}) does not sit inside F^({subspace.depth}).")
    if len(weight) != model.rank:
        raise InvalidShapeError(f"Weight {weight} has length {len(weight)}, expected {model.rank}.")

    basis = filtration.basisAt(subspace.depth, tuple(weight))
    if not basis:
        return 0
    raisingElements = model.raisingElements(raising)

    columns = []
    for vector in basis:
        stacked: SparseVector = {}
        for elementIdx, element in enumerate(raisingElements):
            raised = model.applyElement(element, vector)
            if not subspace.contains(raised):
                raise SubspaceError(f"F^({subspace.depth}) is not invariant under the raising operators.")
            for key, value in filtration.constraints(moduloSubspace.depth, raised).items():
                stacked[(elementIdx, key)] = value
        columns.append(stacked)

    matrix = _columnsMatrix(columns)
    kernelDim = matrix.cols - matrix.rank()
    return kernelDim - filtration.dimensionAt(moduloSubspace.depth, tuple(weight))


def _stableRange(model: FiniteModel) -> bool:
    return model.rank > model.degree


def _compareLayers(
    model: FiniteModel,
    filtration: KernelFiltration,
    predictedLayers: Sequence[Dict[IrrepLabel, int]],
    raising: str = "simple",
) -> Tuple[List[Dict], bool]:
    algebra = model.algebra
    n = model.rank
    layerReports = []
    allPass = True
    previousDim = 0
    for idx in range(filtration.topDepth):
        predicted = predictedLayers[idx] if idx < len(predictedLayers) else {}
        currentDim = filtration.dimension(idx + 1)
        observedDim = currentDim - previousDim
        previousDim = currentDim

        predictedEntries = []
        singularCounts: Dict[str, Optional[int]] = {}
        multiplicitySpaces: Dict[str, int] = {}
        layerPass = True
        predictedDim = 0
        for label, mult in sorted(predicted.items(), key=lambda entry: entry[0].sortKey, reverse=True):
            labelDim = finiteLabelDim(algebra, n, label)
            predictedDim += mult * labelDim
            predictedEntries.append({"label": label.text, "mult": mult, "dim": labelDim})
            if labelDim == 0:
                singularCounts[label.text] = None
                continue
            count = singularVectorCount(
                model, filtration.level(idx + 1), filtration.level(idx), highestWeight(n, label), raising
            )
            singularCounts[label.text] = count
            if count != mult:
                layerPass = False
        if len(predicted) == 1:
            (label, _), = predicted.items()
            labelDim = finiteLabelDim(algebra, n, label)
            if labelDim:
                multiplicitySpaces[label.text] = observedDim // labelDim

        if observedDim != predictedDim:
            layerPass = False
        allPass = allPass and layerPass
        verifierLogger.info(
            "%s n=%s layer %s: predicted dim %s, observed dim %s, %s",
            algebra.value, n, idx + 1, predictedDim, observedDim, "pass" if layerPass else "MISMATCH",
        )
        layerReports.append(
            {
                "r": idx,
                "predicted": predictedEntries,
                "predicted_dim": predictedDim,
                "observed_dim": observedDim,
                "observed_singular_counts": singularCounts,
                "multiplicity_space_dims": multiplicitySpaces,
                "pass": layerPass,
            }
        )
    return layerReports, allPass


def _modelShape(algebra: AlgebraKind, p: int, q: int):
    return (p, q) if algebra.isMixed else p + q


def verifyLayerMultiplicities(algebra: AlgebraKind, n: int, lam: Partition, mu: Partition = ZERO, raising: str = "simple") -> Dict:
    """Check the socle diagram of Gamma_{lam;mu} against the kernel filtration of im c_lam (x) im c_mu at rank n."""
    diagram = socleLayers(algebra, lam, mu)
    model = buildModel(algebra, n, _modelShape(algebra, lam.weight, mu.weight))
    if not _stableRange(model):
        verifierLogger.warning(
            "n=%s is outside the stable range n > %s for %s; finite-rank edge rules apply", n, model.degree, algebra.value
        )
    filtration = KernelFiltration(model, summandProjector(model, lam, mu))

    layerReports, allPass = _compareLayers(model, filtration, [dict(layer) for layer in diagram.layers], raising)
    ambientDim = filtration.dimension(filtration.topDepth)
    predictedTotal = sum(layer["predicted_dim"] for layer in layerReports)
    ledgerPass = ambientDim == predictedTotal
    return {
        "algebra": algebra.value,
        "n": n,
        "lambda": lam.text,
        "mu": mu.text,
        "stable_range": _stableRange(model),
        "ambient_dim": ambientDim,
        "predicted_total": predictedTotal,
        "layers": layerReports,
        "ledger_pass": ledgerPass,
        "pass": allPass and ledgerPass,
    }


def verifyTensorSpace(algebra: AlgebraKind, n: int, p: int, q: int = 0) -> Dict:
    """Whole-space check: kernel filtration of the full tensor space against the summed socle layers."""
    model = buildModel(algebra, n, _modelShape(algebra, p, q))
    filtration = KernelFiltration(model)
    layerReports, allPass = _compareLayers(model, filtration, tensorSocleLayers(algebra, p, q))
    return {"algebra": algebra.value, "n": n, "p": p, "q": q, "layers": layerReports, "pass": allPass}


def verifyUniqueness(n: int, p: int, q: int) -> Dict:
    """F^(r) holds every constituent with |lam'| > p - r (all copies) and nothing else."""
    model = buildModel(AlgebraKind.GL, n, (p, q))
    filtration = KernelFiltration(model)
    constituents = tensorConstituents(AlgebraKind.GL, p, q)
    results = []
    allPass = True
    for label, total in sorted(constituents.items(), key=lambda entry: entry[0].sortKey, reverse=True):
        weight = highestWeight(n, label)
        level = socleLevelOfConstituent(p, q, label)
        cumulative = 0
        for depth in range(1, filtration.topDepth + 1):
            cumulative += singularVectorCount(model, filtration.level(depth), filtration.level(depth - 1), weight)
            expected = total if level is not None and depth >= level else 0
            passed = cumulative == expected
            allPass = allPass and passed
            results.append({"label": label.text, "r": depth, "expected": expected, "observed": cumulative, "pass": passed})
    return {"n": n, "p": p, "q": q, "checks": results, "pass": allPass}


def directSumDimensions(model: FiniteModel) -> Tuple[int, int]:
    """(dim F^(1), dim of the sum of the images of all theta_I) for single pairs I."""
    filtration = KernelFiltration(model)
    if filtration.maxContractions == 0:
        return (model.dimension, 0)
    positionsList = _disjointPairSets(model, 1)
    traceDim = 0
    for weight, tuples in model.weightSpaces.items():
        images = []
        for positions in positionsList:
            for indexTuple in tuples:
                contracted = model.contractTuple(positions, indexTuple)
                if contracted is None:
                    continue
                image, coefficient = contracted
                inserted = model.insertTuple(positions, image)
                images.append({key: coefficient * value for key, value in inserted.items()})
        traceDim += _columnsMatrix(images).rank() if images else 0
    return (filtration.dimension(1), traceDim)


async def runVerifications(jobs: Sequence[Tuple]) -> List[Dict]:
    semaphore = asyncio.Semaphore(max(appSettings.verifyWorkers, 1))

    async def runOne(job: Tuple) -> Dict:
        async with semaphore:
            try:
                return await asyncio.to_thread(verifyLayerMultiplicities, *job)
            except Exception:
                verifierLogger.exception("Verification job for %s n=%s failed", job[0].value, job[1])
                raise

    return await asyncio.gather(*(runOne(job) for job in jobs))


def _layerMultiplicities(report: Dict) -> List[Dict[str, Optional[int]]]:
    return [layer["observed_singular_counts"] for layer in report["layers"]]


def verifyRange(algebra: AlgebraKind, nValues: Sequence[int], lam: Partition, mu: Partition = ZERO, raising: str = "simple") -> Dict:
    """Verify at several ranks in parallel; stable when consecutive ranks see the same layer multiplicities."""
    for n in nValues:
        if appSettings.isCapped(algebra.value, n, lam.weight + mu.weight):
            raise CapacityError(
                f"A {algebra.value} model with n={n} and degree {lam.weight + mu.weight} exceeds the desk-scale caps; "
                "set SOCLE_LAB_MAX_DIM to raise them at your own risk."
            )
    reports = asyncio.run(runVerifications([(algebra, n, lam, mu, raising) for n in nValues]))
    stable = all(
        _layerMultiplicities(first) == _layerMultiplicities(second)
        for first, second in zip(reports, reports[1:])
    )
    return {
        "runs": reports,
        "stable": stable,
        "pass": all(report["pass"] for report in reports),
    }


def _maxDeviation(result: SparseVector, target: SparseVector):
    deviation = QQ.zero
    for key in set(result) | set(target):
        gap = abs(result.get(key, QQ.zero) - target.get(key, QQ.zero))
        if gap > deviation:
            deviation = gap
    return deviation


def _projectTraceless(model: FiniteModel, vector: SparseVector) -> SparseVector:
    """Component of a weight vector in F^(1) along the split V = F^(1) ⊕ sum_I im theta_I."""
    if not vector or min(model.covariantSlots, model.contravariantSlots) == 0:
        return dict(vector)
    weights = {model.weightOf(indexTuple) for indexTuple in vector}
    if len(weights) != 1:
        raise InvalidShapeError("Only weight vectors can be split into traceless and trace parts.")
    (weight,) = weights

    traceless = KernelFiltration(model).basisAt(1, weight)
    traces: List[SparseVector] = []
    for positions in _disjointPairSets(model, 1):
        for indexTuple in model.contractedModel(1).weightSpaces.get(weight, ()):
            traces.append(model.insertTuple(positions, indexTuple))
    columns = traceless + traces + [vector]
    for coefficients in _kernelCoefficients(columns):
        scale = coefficients.get(len(columns) - 1)
        if scale:
            parts = {idx: -value / scale for idx, value in coefficients.items() if idx < len(traceless)}
            return _combineVectors(traceless, parts)
    raise InvalidShapeError(f"At n={model.rank} the tensor space does not split as F^(1) plus the trace images.")


def asymptoticDeviations(
    lam: Partition,
    mu: Partition,
    insertionPairs: Sequence[Tuple[int, int]],
    xiPairs: Sequence[Tuple[int, int]],
    nValues: Sequence[int],
    distinctIndices: bool = False,
) -> List[Tuple[int, object]]:
    """Deviation of Xi_{J1} Phi_{J2..Jr} Psi_{I1..Ir} v from v (same index sets) or from 0 (different sets).

    v is the traceless part of c_lam (x) c_mu applied to e_1..e_p (x) e_1*..e_q*, so
    covariant and contravariant letters repeat; distinctIndices uses letters 1..p+q
    instead, which is traceless already. The pairs are numbered in the shape
    (|lam|+r, |mu|+r).
    """
    iList = normalizePairs(insertionPairs)
    jList = normalizePairs(xiPairs)
    if not iList or len(iList) != len(jList):
        raise InvalidShapeError("The insertion and Xi pair lists must be nonempty and of equal length.")
    pairCount = len(iList)
    p0, q0 = lam.weight, mu.weight
    sameSets = set(iList) == set(jList)
    if distinctIndices:
        pattern: IndexTuple = tuple(range(1, p0 + q0 + 1))
    else:
        pattern = tuple(range(1, p0 + 1)) + tuple(range(1, q0 + 1))

    results = []
    for n in nValues:
        if n <= p0 + q0:
            raise InvalidShapeError(f"Asymptotics need n > {p0 + q0} so the pattern avoids the index n, got n={n}.")
        smallModel = buildModel(AlgebraKind.GL, n, (p0, q0))
        bigModel = smallModel.enlargedModel(pairCount)

        vector = summandProjector(smallModel, lam, mu).applyTuple(pattern)
        vector = _projectTraceless(smallModel, vector)

        insertionPositions = bigModel.slotPositions(iList)
        xiPositions = bigModel.slotPositions(jList)
        image = bigModel.insertVector(insertionPositions, vector)

        firstPair, laterPairs = xiPositions[0], xiPositions[1:]
        if laterPairs:
            image = bigModel.contractVector(laterPairs, image)
        removed = sorted(slot for pair in laterPairs for slot in pair)
        shifted = tuple(slot - sum(1 for gone in removed if gone < slot) for slot in firstPair)
        middleModel = bigModel.contractedModel(len(laterPairs))
        image = middleModel.xiVector([shifted], image)

        target = vector if sameSets else {}
        deviation = _maxDeviation(image, target)
        verifierLogger.debug("Asymptotics n=%s deviation=%s", n, deviation)
        results.append((n, deviation))
    return results


def bracketFidelity(model: FiniteModel, samples: int = 100, seed: Optional[int] = None) -> List[Tuple[str, str]]:
    """Sampled generator pairs whose matrix commutator differs from the matrix of their bracket (empty when faithful)."""
    rng = random.Random(appSettings.sampleSeed if seed is None else seed)
    elements = dict(model.generatorElements)
    matrices = dict(model.generators)
    generatorIds = list(elements)
    failures = []
    for _ in range(samples):
        leftId, rightId = rng.choice(generatorIds), rng.choice(generatorIds)
        left, right = matrices[leftId], matrices[rightId]
        commutator = left @ right - right @ left
        if commutator != model.actionMatrix(bracket(elements[leftId], elements[rightId])):
            failures.append((leftId, rightId))
    if failures:
        verifierLogger.error("Bracket relation fails for %s sampled pair(s) on %s n=%s", len(failures), model.algebra.value, model.rank)
    return failures
