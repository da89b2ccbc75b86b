import pytest
from hypothesis import given, settings

from hgpsurgery.codes import cyclic_repetition
from hgpsurgery.complex import ChainComplex, homology_dim, tensor_product
from hgpsurgery.cone import (
    ChainMap,
    cone_product_isomorphism_check,
    extract_css,
    mapping_cone,
    tensor_map_with_identity,
    validate_map,
)
from hgpsurgery.errors import DegreeOutOfRange, NotAChainMap
from hgpsurgery.gf2 import BinaryMatrix, BinaryVector
from hgpsurgery.surgery import build_deformed
from hgpsurgery.toric import build_toric, toric_gadget

from conftest import binary_matrices, chain_maps


def identity_map(cx):
    return ChainMap(cx, cx, {i: BinaryMatrix.identity(cx.dim(i)) for i in cx.degrees})


def corrupt(f, degree, row=0, col=0):
    dense = f.at(degree).to_dense().copy()
    dense[row, col] ^= 1
    maps = {i: f.at(i) for i in f.degrees}
    maps[degree] = BinaryMatrix.from_dense(dense, shape=dense.shape)
    return ChainMap(f.source, f.target, maps)


def test_identity_map_validates(hamming_h):
    cx = ChainComplex.classical(hamming_h)
    assert validate_map(identity_map(cx))


def test_path_gadget_map(path_gadget):
    g = path_gadget.chain_map
    assert validate_map(g)
    assert path_gadget.sizes == (3, 2, 0)
    cone = mapping_cone(g).complex
    assert cone.validate()
    assert cone.dim(1) == 2 + 7
    assert cone.dim(2) == 3


def test_flipped_bit_in_g0_fails_at_degree_one(path_gadget):
    bad = corrupt(path_gadget.chain_map, 0)
    chk = validate_map(bad)
    assert not chk
    assert chk.degree == 1
    with pytest.raises(NotAChainMap):
        mapping_cone(bad)


def test_cone_of_empty_source_is_target(hamming_h):
    tgt = ChainComplex.classical(hamming_h)
    empty = ChainComplex(0, (0, 0), name="E")
    cone = mapping_cone(ChainMap(empty, tgt, {})).complex
    assert cone.dim(1) == 7 and cone.dim(0) == 3
    assert cone.boundary(1) == hamming_h


def test_deformed_block_sizes(hamming_code, path_gadget):
    css = build_deformed(hamming_code, path_gadget).css
    assert css.n == 33
    assert css.split("qubits") == (6, 27)
    assert css.meta.rows == 6
    # G1⊗D0 (9) + G0⊗D1 (4) ancilla rows, C1⊗D1 (14) base rows
    assert css.hz.rows == 27
    assert css.split("z_checks") == (13, 14)


def test_tensor_map_identity_and_zero(hamming_h, rep3_t):
    cx = ChainComplex.classical(hamming_h)
    dx = ChainComplex.classical(rep3_t, "D")
    ext = tensor_map_with_identity(identity_map(cx), dx)
    prod = tensor_product(cx, dx)
    for k in prod.degrees:
        assert ext.at(k) == BinaryMatrix.identity(prod.dim(k))
    zero = tensor_map_with_identity(ChainMap(cx, cx, {}), dx)
    assert all(zero.at(k).is_zero() for k in prod.degrees)


def test_extension_validates(path_gadget, rep3_t):
    ext = tensor_map_with_identity(path_gadget.chain_map, ChainComplex.classical(rep3_t, "D"))
    assert validate_map(ext)


def test_cone_product_isomorphism_hamming(path_gadget, rep3_t):
    assert cone_product_isomorphism_check(path_gadget.chain_map, ChainComplex.classical(rep3_t, "D"))


def test_cone_of_identity_is_acyclic(hamming_h, rep3_t):
    cx = ChainComplex.classical(hamming_h)
    dx = ChainComplex.classical(rep3_t, "D")
    assert cone_product_isomorphism_check(identity_map(cx), dx)
    cone = mapping_cone(identity_map(cx)).complex
    assert all(homology_dim(cone, k) == 0 for k in cone.degrees)


@settings(max_examples=30, deadline=None)
@given(chain_maps(), binary_matrices(max_rows=3, max_cols=3))
def test_cone_product_isomorphism_random(f, d):
    assert validate_map(f)
    assert mapping_cone(f).complex.validate()
    assert cone_product_isomorphism_check(f, ChainComplex.classical(d, "D"))


def test_extract_css_products_vanish(hamming_code, path_gadget):
    css = build_deformed(hamming_code, path_gadget).css
    assert (css.hx @ css.hz.T).is_zero()
    assert (css.meta @ css.hz).is_zero()


def test_toric_cone_check_weights():
    inst = build_toric(3)
    g = toric_gadget(inst, BinaryVector.ones(1), faces=False)
    css = build_deformed(inst.code, g).css
    assert int(css.hx.row_weights().max()) <= 5


def test_trivial_cone_has_empty_meta():
    cx = tensor_product(
        ChainComplex.classical(cyclic_repetition(3), "C"), ChainComplex.classical(cyclic_repetition(3), "D")
    )
    empty = ChainComplex(0, (0,), name="E")
    css = extract_css(mapping_cone(ChainMap(empty, cx, {})), 1)
    assert css.meta.rows == 0
    assert css.hx == cx.boundary(1)
    assert css.hz == cx.boundary(2).T


def test_extract_css_degree_out_of_range(hamming_h):
    cx = ChainComplex.classical(hamming_h)
    empty = ChainComplex(0, (0,), name="E")
    with pytest.raises(DegreeOutOfRange):
        extract_css(mapping_cone(ChainMap(empty, cx, {})), 1)
