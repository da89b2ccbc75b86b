import numpy as np
import pytest

from hgpsurgery.codes import cyclic_repetition, hamming
from hgpsurgery.complex import ChainComplex, homology_dim
from hgpsurgery.distance import Distance
from hgpsurgery.errors import DependentCodewords, OrientationMismatch
from hgpsurgery.gadgets import synthesize
from hgpsurgery.gf2 import BinaryVector
from hgpsurgery.surgery import (
    SurgerySequence,
    build_compacted,
    build_deformed,
    build_hgp,
    canonical_basis,
    disjoint_images,
    measured_logicals,
    multi_block,
    verify_fast_conditions,
)


@pytest.fixture(scope="module")
def hamming_pair(hamming_code):
    c = hamming_code.C
    return [synthesize(c, BinaryVector.from_support(7, [0, 1, 2]), "path"),
            synthesize(c, BinaryVector.from_support(7, [0, 1, 4, 5]), "complete")]


def test_hgp_formulas(hamming_code):
    assert hamming_code.n == hamming_code.n_formula() == 27
    assert hamming_code.k == hamming_code.k_formula() == 4
    assert hamming_code.params() == (27, 4, Distance(3))


def test_canonical_basis_pairs_to_identity(hamming_code):
    basis = canonical_basis(hamming_code)
    assert len(basis.z_vectors()) == 4
    assert np.array_equal(basis.pairing_matrix(), np.eye(4, dtype=np.uint8))
    for z in basis.z_vectors():
        assert hamming_code.hx.matvec(z).is_zero()
    for x in basis.x_vectors():
        assert hamming_code.hz.matvec(x).is_zero()


def test_toric_canonical_basis():
    code = build_hgp(cyclic_repetition(3), cyclic_repetition(3))
    basis = canonical_basis(code)
    assert [lab[0] for lab in basis.labels()] == ["L", "R"]
    assert np.array_equal(basis.pairing_matrix(), np.eye(2, dtype=np.uint8))


def test_path_gadget_measurement(hamming_code, path_gadget):
    df = build_deformed(hamming_code, path_gadget)
    rep = measured_logicals(df)
    assert rep.k_before == 4 and rep.k_after == 3
    assert rep.distinct == 1
    assert len(rep.classes) == 3
    assert rep.all_certified
    assert sorted(c.certificate for c in rep.classes) == [[0, 3, 6], [1, 4, 7], [2, 5, 8]]
    assert df.css.distances() == (Distance(3), Distance(3))


def test_orientation_mismatch(hamming_code, path_gadget):
    with pytest.raises(OrientationMismatch):
        build_deformed(hamming_code, path_gadget, "D")
    with pytest.raises(OrientationMismatch):
        build_deformed(hamming_code, path_gadget, "X")


def test_dependent_codewords_rejected(hamming_code, path_gadget):
    seq = SurgerySequence(hamming_code, [path_gadget, path_gadget], ["C", "C"])
    with pytest.raises(DependentCodewords):
        build_compacted(seq)
    repeats = SurgerySequence(hamming_code, [path_gadget, path_gadget], ["C", "C"], allow_repeats=True)
    assert build_compacted(repeats).css.n == 27 + 12


def test_hamming_compacted_two_gadgets(hamming_code, hamming_pair):
    seq = SurgerySequence(hamming_code, hamming_pair, ["C", "C"])
    comp = build_compacted(seq)
    assert comp.css.n == 57
    assert homology_dim(comp.cone.complex, 1) == 2
    assert comp.routes
    report = verify_fast_conditions(seq, compacted=comp)
    assert report.compacted == (Distance(3), Distance(3))
    assert [m.value for m in report.meta_distances] == [3, 3]
    assert report.passed
    assert report.homology_drop == report.codeword_rank == 2


def test_mixed_orientation_toric():
    h = cyclic_repetition(3)
    code = build_hgp(h, h)
    gc = synthesize(code.C, BinaryVector.ones(3), "cycle")
    gd = synthesize(code.D, BinaryVector.ones(3), "cycle")
    seq = SurgerySequence(code, [gc, gd], ["C", "D"])
    comp = build_compacted(seq)
    assert comp.routes is None
    assert comp.cone.complex.validate()
    assert homology_dim(comp.cone.complex, 1) == 0


def test_disjoint_images(hamming_code, path_gadget):
    df = build_deformed(hamming_code, path_gadget)
    assert disjoint_images(df.chain_map)


def test_budget_gives_inconclusive(hamming_code, hamming_pair):
    seq = SurgerySequence(hamming_code, hamming_pair, ["C", "C"])
    report = verify_fast_conditions(seq, budget=16)
    assert report.inconclusive and not report.passed
    assert not report.base_distance.exact


def test_multi_block_joint_codeword():
    h = hamming(3)
    word = BinaryVector.from_support(14, [0, 1, 2, 7, 8, 9])
    seq = multi_block([h, h], cyclic_repetition(3), word, "cycle")
    comp = build_compacted(seq)
    assert comp.cone.complex.validate()
    assert homology_dim(comp.cone.complex, 1) == seq.code.k - 1


def test_block_factor_is_direct_sum():
    h = hamming(3)
    seq = multi_block([h, h], cyclic_repetition(3), BinaryVector.from_support(14, [0, 1, 2]), "path")
    assert seq.code.C.dims == (6, 14)
    assert homology_dim(seq.code.C, 1) == 8
    assert isinstance(seq.code.C, ChainComplex)
