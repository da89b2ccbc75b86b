import pytest

from hgpsurgery.complex import homology_dim
from hgpsurgery.distance import Distance
from hgpsurgery.errors import ZeroVector
from hgpsurgery.gf2 import BinaryVector
from hgpsurgery.surgery import (
    SurgerySequence,
    build_compacted,
    build_deformed,
    measured_logicals,
    verify_fast_conditions,
)
from hgpsurgery.toric import (
    build_toric,
    g1_condition,
    metacheck_graph,
    orthogonal_pairing,
    toric_gadget,
    verify_toric_distances,
)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_toric_parameters(d):
    code = build_toric(d).code
    assert (code.n, code.k) == (2 * d * d, 2)
    assert code.distances() == (Distance(d), Distance(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_face_free_gadget_has_d_squared_ancilla_qubits(d):
    inst = build_toric(d)
    df = build_deformed(inst.code, toric_gadget(inst, BinaryVector.ones(1), faces=False))
    assert df.css.split("qubits")[0] == d * d
    # the unfilled cycle also measures the conjugate logical
    assert homology_dim(df.css.complex, 1) == 0


@pytest.mark.parametrize("d", [2, 3, 4])
def test_face_kept_gadget(d):
    inst = build_toric(d)
    df = build_deformed(inst.code, toric_gadget(inst, BinaryVector.ones(1)))
    assert df.css.split("qubits")[0] == d * d + d
    assert homology_dim(df.css.complex, 1) == 1
    assert df.css.distances() == (Distance(d), Distance(d + 1))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_metacheck_graph(d):
    inst = build_toric(d)
    meta = metacheck_graph(build_deformed(inst.code, toric_gadget(inst, BinaryVector.ones(1))))
    assert meta.shape == (d, d)
    assert meta.graph.number_of_nodes() == d * d
    assert meta.graph.number_of_edges() == 2 * d * d
    assert meta.cycle_rank == d * d + 1
    assert meta.periodic == {"D": True, "G": True}
    assert meta.flipping_directions == ["D"]
    assert meta.min_cycle_weight == d
    assert meta.min_undetected_flip == d
    assert meta.base_support == d * d


def test_zero_block_vector_rejected():
    with pytest.raises(ZeroVector):
        toric_gadget(build_toric(3, 2), BinaryVector.from_support(2, []))


def test_g1_condition_and_pairing():
    inst = build_toric(3, 2)
    b = BinaryVector.from_support(2, [0, 1])
    g = toric_gadget(inst, b)
    perp = inst.annihilator([b])
    assert g1_condition(g, perp, 3)
    assert orthogonal_pairing([b], perp)
    wrong = [BinaryVector.from_support(2, [0])]
    assert not g1_condition(g, wrong, 3)
    assert not orthogonal_pairing([b], wrong)


def test_sequential_toric_fast_surgery():
    inst = build_toric(3)
    gadgets = [toric_gadget(inst, BinaryVector.ones(1), name=f"G{i}") for i in (1, 2)]
    seq = SurgerySequence(inst.code, gadgets, ["C", "C"], allow_repeats=True)
    report = verify_fast_conditions(seq)
    assert report.compacted == (Distance(3), Distance(5))
    assert [m.value for m in report.meta_distances] == [3, 3]
    assert report.passed
    assert report.routes
    assert report.homology_drop == 1


def test_two_block_entangling_measurement():
    inst = build_toric(3, 2)
    assert (inst.code.n, inst.code.k) == (36, 4)
    gadgets = [
        toric_gadget(inst, BinaryVector.from_support(2, [0, 1]), name="G1"),
        toric_gadget(inst, BinaryVector.from_support(2, [0]), name="G2"),
    ]
    comp = build_compacted(SurgerySequence(inst.code, gadgets, ["C", "C"]))
    assert comp.routes
    report = verify_toric_distances(inst, gadgets, compacted=comp)
    assert report.compacted == (Distance(3), Distance(4))
    assert report.deformed == [(Distance(3), Distance(4)), (Distance(3), Distance(3))]
    assert report.k_after == [3, 3]
    assert all(report.g1_conditions)
    assert report.pairing and report.xh_ok and report.xv_ok
    assert report.distances_ok(3)


@pytest.mark.parametrize(
    "support, want",
    [([0, 1], {("L", 0, 0), ("L", 1, 0)}), ([0], {("L", 0, 0)})],
    ids=["both-blocks", "first-block"],
)
def test_measured_operator_in_canonical_basis(support, want):
    inst = build_toric(3, 2)
    g = toric_gadget(inst, BinaryVector.from_support(2, support))
    report = measured_logicals(build_deformed(inst.code, g))
    assert report.distinct == 1 and report.all_certified
    for cls in report.classes:
        assert {lab for lab, bit in cls.coefficients.items() if bit} == want
