import math
from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgpsurgery.codes import cyclic_repetition, hamming
from hgpsurgery.complex import ChainComplex
from hgpsurgery.cone import validate_map
from hgpsurgery.errors import CheegerBudgetExceeded, GaugeQubits, NotACodeword
from hgpsurgery.gadgets import (
    cheeger_constant,
    cheeger_oracle,
    family_graph,
    relative_cheeger,
    size_bound,
    synthesize,
    verify_conditions,
)
from hgpsurgery.gf2 import BinaryMatrix, BinaryVector, kernel_basis


def incidence(n, edges):
    dense = np.zeros((len(edges), n), dtype=np.uint8)
    for e, (a, b) in enumerate(edges):
        dense[e, a] ^= 1
        dense[e, b] ^= 1
    return BinaryMatrix.from_dense(dense, shape=(len(edges), n))


def cut_oracle(n, edges):
    """Edge expansion from networkx cut sizes over all vertex subsets."""
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    best = math.inf
    for size in range(1, n):
        for s in combinations(range(n), size):
            best = min(best, Fraction(nx.cut_size(g, s), min(size, n - size)))
    return best


@pytest.mark.parametrize(
    "n, edges, want",
    [
        (3, [(0, 1), (1, 2)], Fraction(1)),
        (6, [(i, (i + 1) % 6) for i in range(6)], Fraction(2, 3)),
        (4, list(combinations(range(4), 2)), Fraction(2)),
    ],
    ids=["path3", "cycle6", "complete4"],
)
def test_cheeger_known_graphs(n, edges, want):
    m = incidence(n, edges)
    assert cheeger_constant(m) == want
    assert cheeger_oracle(m) == want


def test_relative_cheeger_cycle6():
    m = incidence(6, [(i, (i + 1) % 6) for i in range(6)])
    assert relative_cheeger(m, 2, range(6)) == 1


def test_cheeger_of_single_vertex_is_infinite():
    assert cheeger_constant(BinaryMatrix(0, 1)) == math.inf


def test_cheeger_budget():
    with pytest.raises(CheegerBudgetExceeded):
        cheeger_constant(BinaryMatrix(1, 30), max_cols=22)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 14))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), max_size=20))
    return n, edges


@settings(max_examples=25, deadline=None)
@given(small_graphs())
def test_cheeger_matches_oracles(graph):
    n, edges = graph
    m = incidence(n, edges)
    want = cut_oracle(n, edges)
    assert cheeger_constant(m) == want
    assert cheeger_oracle(m) == want


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=9, max_size=9), min_size=1, max_size=4))
def test_cheeger_general_matrices(rows):
    m = BinaryMatrix.from_dense(rows)
    assert cheeger_constant(m) == cheeger_oracle(m)


def test_hamming_path_gadget(path_gadget):
    g = path_gadget
    assert g.sizes == (3, 2, 0)
    assert g.vertex_bits == [0, 2, 1]
    assert g.chain_map.at(0).to_dense().tolist() == [[1, 0], [0, 1], [0, 0]]
    rep = verify_conditions(g)
    assert rep.expansion == 1
    assert rep.passed, rep.failures()
    assert rep.size_limit == size_bound(3) == 12


@pytest.mark.parametrize(
    "family, sizes, beta",
    [("path", (4, 3, 0), Fraction(1, 2)), ("cycle", (4, 4, 1), Fraction(1)), ("complete", (4, 6, 3), Fraction(2))],
)
def test_weight_four_codeword_families(hamming_h, family, sizes, beta):
    code = ChainComplex.classical(hamming_h)
    g = synthesize(code, BinaryVector.from_support(7, [0, 1, 4, 5]), family)
    assert g.sizes == sizes
    rep = verify_conditions(g)
    assert rep.expansion == beta
    assert rep.expansion_ok == (beta >= 1)
    assert rep.acyclic_ok and rep.kernel_ok and rep.sparse_ok


def test_strict_cycle_gadget_on_six_bits_fails_expansion():
    code = ChainComplex.classical(cyclic_repetition(6))
    g = synthesize(code, BinaryVector.ones(6), "cycle")
    rep = verify_conditions(g, "strict")
    assert rep.expansion == Fraction(2, 3)
    assert not rep.expansion_ok
    assert "expansion" in rep.failures()
    relative = verify_conditions(g, "relative", t=2)
    assert relative.expansion == 1 and relative.expansion_ok


def test_gauge_cycle_without_face_is_rejected():
    code = ChainComplex.classical(cyclic_repetition(4))
    with pytest.raises(GaugeQubits):
        synthesize(code, BinaryVector.ones(4), "cycle", faces=False)
    g = synthesize(code, BinaryVector.ones(4), "cycle", faces=False, allow_gauge=True)
    rep = verify_conditions(g)
    assert rep.h0_dim == 1 and not rep.acyclic_ok


def test_not_a_codeword(hamming_h):
    code = ChainComplex.classical(hamming_h)
    with pytest.raises(NotACodeword):
        synthesize(code, BinaryVector.from_support(7, [0]))
    with pytest.raises(NotACodeword):
        synthesize(code, BinaryVector.from_support(7, []))


def test_family_graph_shapes():
    edges, faces = family_graph("cycle", 5)
    assert len(edges) == 5 and len(faces) == 1
    edges, faces = family_graph("complete", 4)
    assert len(edges) == 6 and len(faces) == 3
    with pytest.raises(ValueError):
        family_graph("star", 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 15), st.sampled_from(["path", "cycle", "complete"]))
def test_synthesized_gadgets_are_chain_maps(coeffs, family):
    basis = kernel_basis(hamming(3))
    word = BinaryVector.from_int(7, 0)
    for i, v in enumerate(basis):
        if coeffs >> i & 1:
            word = word + v
    g = synthesize(ChainComplex.classical(hamming(3)), word, family)
    assert validate_map(g.chain_map)
    rep = verify_conditions(g)
    assert rep.kernel_ok and rep.acyclic_ok and rep.g1_one_sparse
