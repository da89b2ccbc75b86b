import numpy as np
import pytest
from hypothesis import given, settings

from hgpsurgery.codes import CodeSpec, cyclic_repetition, emit_alist, hamming, parse_alist, read_alist, repetition
from hgpsurgery.errors import InputError
from hgpsurgery.gf2 import BinaryMatrix

from conftest import binary_matrices

HAMMING_ALIST = """7 3
3 4
1 1 2 1 2 2 3
4 4 4
1 0 0
2 0 0
1 2 0
3 0 0
1 3 0
2 3 0
1 2 3
1 3 5 7
2 3 6 7
4 5 6 7
"""


def test_alist_identity():
    text = "2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n"
    assert parse_alist(text) == BinaryMatrix.identity(2)


def test_alist_hamming_without_row_block():
    columns_only = "\n".join(HAMMING_ALIST.splitlines()[:11]) + "\n"
    h = parse_alist(columns_only)
    assert h.rank() == 3
    assert h == parse_alist(HAMMING_ALIST) == hamming(3)


def test_alist_row_index_out_of_range():
    text = "2 3\n1 1\n1 1\n1 1 0\n5\n2\n"
    with pytest.raises(InputError, match="out of range"):
        parse_alist(text)


@pytest.mark.parametrize(
    "text, match",
    [
        ("2\n", "four header lines"),
        ("2 2 2\n1 1\n1 1\n1 1\n1\n2\n", "expected 'n m'"),
        ("2 2\n1 1\n1 1\n1 1\n1\n", "index lines"),
        ("2 2\n1 1\n1 1\n1 1\n1\nx\n", "non-integer"),
        ("2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n", "disagree"),
        ("2 2\n1 1\n1 1\n1 1\n1 2\n2\n", "weight says"),
    ],
)
def test_alist_malformed(text, match):
    with pytest.raises(InputError, match=match):
        parse_alist(text)


@pytest.mark.parametrize("m", [BinaryMatrix.identity(3), hamming(3)], ids=["identity3", "hamming"])
def test_alist_roundtrip_fixed(m):
    assert parse_alist(emit_alist(m)) == m


def test_alist_roundtrip_random_5x8():
    rng = np.random.default_rng(7)
    m = BinaryMatrix.from_dense(rng.integers(0, 2, size=(5, 8)), shape=(5, 8))
    assert parse_alist(emit_alist(m)) == m


@settings(max_examples=80, deadline=None)
@given(binary_matrices(max_rows=9, max_cols=12))
def test_alist_roundtrip_property(m):
    assert parse_alist(emit_alist(m)) == m


def test_read_alist_file(tmp_path):
    p = tmp_path / "h.alist"
    p.write_text(HAMMING_ALIST)
    assert read_alist(p) == hamming(3)
    assert CodeSpec.parse("alist:h.alist", tmp_path).matrix == hamming(3)
    with pytest.raises(InputError):
        read_alist(tmp_path / "missing.alist")


@pytest.mark.parametrize(
    "spec, shape",
    [
        ("hamming-7-4", (3, 7)),
        ("hamming", (3, 7)),
        ("hamming(4)", (4, 15)),
        ("rep(3)", (2, 3)),
        ("cyclic-rep(5)", (5, 5)),
        ("transpose(rep(3))", (3, 2)),
        ("transpose-of(hamming-7-4)", (7, 3)),
        ("matrix:110;011", (2, 3)),
    ],
)
def test_code_specs(spec, shape):
    assert CodeSpec.parse(spec).matrix.shape == shape


def test_builtin_matrices():
    assert repetition(3).to_dense().tolist() == [[1, 1, 0], [0, 1, 1]]
    assert cyclic_repetition(3).to_dense().tolist() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    # column j of the Hamming matrix is j + 1 in binary, least significant bit first
    assert hamming(3).to_dense()[:, 5].tolist() == [0, 1, 1]


@pytest.mark.parametrize("spec", ["golay(23)", "rep(x)", "rep(1)", "rep", "matrix:12;01", "matrix:10;1", "transpose()", "(("])
def test_bad_code_specs(spec):
    with pytest.raises(InputError):
        CodeSpec.parse(spec)
