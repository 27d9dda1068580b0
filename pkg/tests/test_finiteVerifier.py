import asyncio
import logging

import pytest
from sympy import QQ

from config.settings import appSettings
from services import finiteVerifier
from services.finiteModel import buildModel
from services.finiteVerifier import (
    KernelFiltration,
    _projectTraceless,
    asymptoticDeviations,
    directSumDimensions,
    kernelFiltration,
    runVerifications,
    singularVectorCount,
    verifyLayerMultiplicities,
    verifyRange,
    verifyTensorSpace,
    verifyUniqueness,
)
from services.partitions import Partition, ZERO
from services.socleEngine import AlgebraKind, socleLevelOfConstituent
from utils.errors import CapacityError, InvalidShapeError, RankTooSmallError, SubspaceError


GL = AlgebraKind.GL
SP = AlgebraKind.SP
SO = AlgebraKind.SO


def P(*parts):
    return Partition(parts)


@pytest.mark.parametrize(
    "algebra, n, shape, expected",
    [(GL, 2, (1, 1), 3), (GL, 3, (1, 1), 8), (SP, 2, 2, 15), (SO, 2, 2, 15)],
)
def test_first_kernel_dimension(algebra, n, shape, expected):
    model = buildModel(algebra, n, shape)
    steps = kernelFiltration(model, 1)
    assert [step.dimension for step in steps] == [expected, model.dimension]
    assert len(steps[0].basis) == expected


def test_kernel_filtration_dimensions_increase():
    model = buildModel(GL, 3, (2, 2))
    dimensions = [step.dimension for step in kernelFiltration(model)]
    assert len(dimensions) == 3
    assert dimensions == sorted(dimensions)
    assert dimensions[-1] == 81


def test_kernel_filtration_rejects_deep_levels():
    with pytest.raises(InvalidShapeError):
        kernelFiltration(buildModel(GL, 2, (1, 1)), 2)


def test_kernel_basis_vectors_are_traceless():
    model = buildModel(SP, 2, 2)
    filtration = KernelFiltration(model)
    level = filtration.level(1)
    assert all(level.contains(vector) for vector in filtration.basis(1))
    assert not level.contains({(1, -1): QQ(1)})


def test_singular_vector_count_examples():
    glModel = buildModel(GL, 3, (1, 1))
    glFiltration = KernelFiltration(glModel)
    assert singularVectorCount(glModel, glFiltration.level(1), glFiltration.level(0), (1, 0, -1)) == 1
    assert singularVectorCount(glModel, glFiltration.level(2), glFiltration.level(1), (0, 0, 0)) == 1
    assert singularVectorCount(glModel, glFiltration.level(1), glFiltration.level(0), (0, 0, 0)) == 0

    spModel = buildModel(SP, 3, 2)
    spFiltration = KernelFiltration(spModel)
    assert singularVectorCount(spModel, spFiltration.level(1), spFiltration.level(0), (1, 1, 0)) == 1
    assert singularVectorCount(spModel, spFiltration.level(1), spFiltration.level(0), (2, 0, 0)) == 1


def test_singular_vector_count_with_full_positive_system():
    model = buildModel(GL, 3, (1, 1))
    filtration = KernelFiltration(model)
    for raising in ("simple", "all"):
        assert singularVectorCount(model, filtration.level(1), filtration.level(0), (1, 0, -1), raising) == 1


def test_singular_vector_count_rejects_bad_subspaces():
    model = buildModel(GL, 3, (1, 1))
    filtration = KernelFiltration(model)
    with pytest.raises(SubspaceError):
        singularVectorCount(model, filtration.level(0), filtration.level(1), (0, 0, 0))
    other = KernelFiltration(model)
    with pytest.raises(SubspaceError):
        singularVectorCount(model, filtration.level(1), other.level(0), (0, 0, 0))
    with pytest.raises(InvalidShapeError):
        singularVectorCount(model, filtration.level(1), filtration.level(0), (0, 0))


def test_verify_gl_two_two_at_rank_five():
    report = verifyLayerMultiplicities(GL, 5, P(2), P(2))
    assert report["pass"]
    assert report["ledger_pass"]
    assert [layer["observed_dim"] for layer in report["layers"]][-1] == 1
    assert report["layers"][0]["observed_singular_counts"] == {"Γ{2;2}": 1}


def test_verify_sp_exterior_square():
    report = verifyLayerMultiplicities(SP, 3, P(1, 1))
    assert report["pass"]
    assert [layer["observed_dim"] for layer in report["layers"]] == [14, 1]


def test_verify_so_symmetric_square():
    report = verifyLayerMultiplicities(SO, 3, P(2))
    assert report["pass"]
    assert [layer["observed_dim"] for layer in report["layers"]] == [20, 1]
    assert report["layers"][0]["multiplicity_space_dims"] == {"Γ[2]": 1}


def test_verify_report_layout():
    report = verifyLayerMultiplicities(GL, 4, P(2), P(1))
    assert set(report) >= {"algebra", "n", "lambda", "mu", "layers", "pass"}
    layer = report["layers"][1]
    assert layer["r"] == 1
    assert layer["predicted"] == [{"label": "Γ{1;0}", "mult": 1, "dim": 4}]
    assert layer["observed_dim"] == 4
    assert layer["pass"]


def test_verify_outside_stable_range_still_checks(caplog):
    report = verifyLayerMultiplicities(GL, 2, P(1), P(1))
    assert report["pass"]
    assert not report["stable_range"]
    assert "outside the stable range" in caplog.text


def test_verify_with_all_raising_operators():
    assert verifyLayerMultiplicities(GL, 5, P(2), P(1), raising="all")["pass"]


@pytest.mark.slow
@pytest.mark.parametrize("lam, mu", [(P(2), P(2)), (P(1, 1), P(1, 1)), (P(2, 1), P(1))])
@pytest.mark.parametrize("n", [5, 6])
def test_gl_layers_agree_with_finite_rank(lam, mu, n):
    report = verifyLayerMultiplicities(GL, n, lam, mu)
    assert report["pass"], report


@pytest.mark.slow
@pytest.mark.parametrize(
    "algebra, lam",
    [
        (SP, P(2)),
        (SP, P(1, 1)),
        (SP, P(2, 2)),
        (SP, P(2, 1, 1)),
        (SP, P(1, 1, 1, 1)),
        (SO, P(2)),
        (SO, P(1, 1)),
        (SO, P(4)),
        (SO, P(3, 1)),
        (SO, P(2, 2)),
    ],
)
@pytest.mark.parametrize("n", [3, 4])
def test_classical_layers_agree_with_finite_rank(algebra, lam, n):
    report = verifyLayerMultiplicities(algebra, n, lam)
    assert report["pass"], report


def test_sp_label_without_room_is_skipped():
    report = verifyLayerMultiplicities(SP, 3, P(1, 1, 1, 1))
    assert report["pass"]
    assert report["layers"][0]["predicted_dim"] == 0
    assert report["layers"][0]["observed_singular_counts"] == {"Γ⟨1,1,1,1⟩": None}


def test_verify_range_reports_stability():
    report = verifyRange(GL, [4, 5], P(2), P(1))
    assert report["pass"]
    assert report["stable"]
    assert [run["n"] for run in report["runs"]] == [4, 5]


def test_verify_range_checks_caps_first():
    with pytest.raises(CapacityError):
        verifyRange(GL, [20], P(4, 4), P(4))


@pytest.mark.parametrize("algebra, n, p, q", [(GL, 5, 2, 1), (GL, 3, 1, 1), (SP, 3, 2, 0), (SO, 3, 2, 0)])
def test_whole_tensor_space(algebra, n, p, q):
    assert verifyTensorSpace(algebra, n, p, q)["pass"]


def test_uniqueness_characterization():
    report = verifyUniqueness(5, 2, 1)
    assert report["pass"]
    assert {"label": "Γ{1;0}", "r": 1, "expected": 0, "observed": 0, "pass": True} in report["checks"]
    assert {"label": "Γ{1;0}", "r": 2, "expected": 2, "observed": 2, "pass": True} in report["checks"]


@pytest.mark.parametrize("n, shape", [(4, (1, 1)), (4, (2, 1)), (5, (2, 2))])
def test_direct_sum_of_kernel_and_traces(n, shape):
    model = buildModel(GL, n, shape)
    kernelDim, traceDim = directSumDimensions(model)
    assert kernelDim + traceDim == model.dimension


def test_asymptotics_same_pair_is_exact():
    assert asymptoticDeviations(P(1), P(1), [(1, 1)], [(1, 1)], [4, 8]) == [(4, QQ(0)), (8, QQ(0))]


def test_asymptotics_shared_slot_decays_like_one_over_n():
    deviations = dict(asymptoticDeviations(P(1), P(1), [(1, 1)], [(1, 2)], [4, 8]))
    assert deviations == {4: QQ(1, 4), 8: QQ(1, 8)}
    assert deviations[8] <= deviations[4] / 2


def test_asymptotics_shared_slot_on_symmetric_square():
    deviations = asymptoticDeviations(P(2), P(1), [(1, 1)], [(1, 2)], [4, 8])
    assert deviations == [(4, QQ(1, 5)), (8, QQ(1, 9))]


def test_asymptotics_disjoint_pairs():
    traced = asymptoticDeviations(P(1), P(1), [(1, 1)], [(2, 2)], [4, 6, 8])
    assert traced == [(4, QQ(1, 4)), (6, QQ(1, 6)), (8, QQ(1, 8))]
    for _, deviation in asymptoticDeviations(P(1), P(1), [(1, 1)], [(2, 2)], [4, 6, 8], distinctIndices=True):
        assert deviation == 0


def test_asymptotics_chained_pairs_decrease():
    deviations = asymptoticDeviations(ZERO, ZERO, [(1, 1), (2, 2)], [(2, 1), (1, 2)], [4, 6, 8])
    assert [deviation for _, deviation in deviations] == [QQ(1, 4), QQ(1, 6), QQ(1, 8)]


def test_asymptotics_only_sizes_the_small_model(monkeypatch):
    monkeypatch.setattr(appSettings, "glMaxDegree", 2)
    assert asymptoticDeviations(P(1), P(1), [(1, 1)], [(1, 1)], [4]) == [(4, QQ(0))]
    with pytest.raises(CapacityError):
        asymptoticDeviations(P(2), P(1), [(1, 1)], [(1, 1)], [4])


def test_traceless_part_of_a_diagonal_tensor():
    model = buildModel(GL, 4, (1, 1))
    traceless = _projectTraceless(model, {(1, 1): QQ(1)})
    assert traceless == {(1, 1): QQ(3, 4), (2, 2): QQ(-1, 4), (3, 3): QQ(-1, 4), (4, 4): QQ(-1, 4)}
    assert KernelFiltration(model).level(1).contains(traceless)


def test_asymptotics_argument_errors():
    with pytest.raises(InvalidShapeError):
        asymptoticDeviations(P(1), P(1), [(1, 1)], [(1, 1), (2, 2)], [4])
    with pytest.raises(InvalidShapeError):
        asymptoticDeviations(P(1), P(1), [(1, 1)], [(1, 1)], [2])


def test_sp_labels_needing_modification_rules_are_rejected():
    with pytest.raises(RankTooSmallError):
        verifyLayerMultiplicities(SP, 2, P(1, 1, 1, 1))


def test_uniqueness_uses_the_constituent_socle_level(monkeypatch):
    calls = []

    def recordingLevel(p, q, label):
        calls.append(label.text)
        return socleLevelOfConstituent(p, q, label)

    monkeypatch.setattr(finiteVerifier, "socleLevelOfConstituent", recordingLevel)
    assert verifyUniqueness(4, 1, 1)["pass"]
    assert sorted(calls) == ["Γ{0;0}", "Γ{1;1}"]


def test_failed_verification_job_is_logged(monkeypatch, caplog):
    original = finiteVerifier.verifyLayerMultiplicities

    def failingAtFive(algebra, n, *rest):
        if n == 5:
            raise RuntimeError("rank five exploded")
        return original(algebra, n, *rest)

    monkeypatch.setattr(finiteVerifier, "verifyLayerMultiplicities", failingAtFive)
    jobs = [(GL, 4, P(1), P(1), "simple"), (GL, 5, P(1), P(1), "simple")]
    with caplog.at_level(logging.ERROR, logger=finiteVerifier.__name__):
        with pytest.raises(RuntimeError):
            asyncio.run(runVerifications(jobs))
    assert "Verification job for gl n=5 failed" in caplog.text


def test_singular_vector_count_rejects_non_invariant_span():
    model = buildModel(GL, 3, (1, 1))
    filtration = KernelFiltration(model, ambient=[{(2, 1): QQ(1)}])
    assert filtration.dimension(filtration.topDepth) == 1
    with pytest.raises(SubspaceError):
        singularVectorCount(model, filtration.level(filtration.topDepth), filtration.level(0), (-1, 1, 0))


def test_spanning_ambient_arguments():
    model = buildModel(GL, 3, (1, 1))
    with pytest.raises(InvalidShapeError):
        KernelFiltration(model, ambient=[{(2, 1): QQ(1), (1, 1): QQ(1)}])
    filtration = KernelFiltration(model, ambient=[{(2, 1): QQ(1)}, {(2, 1): QQ(2)}])
    assert filtration.dimensionAt(filtration.topDepth, (-1, 1, 0)) == 1
    assert filtration.level(filtration.topDepth).contains({(2, 1): QQ(5)})
    assert not filtration.level(filtration.topDepth).contains({(3, 1): QQ(1)})
