"""Cycle-gadget surgery on one or several toric codes.

A toric code is the product of two cyclic repetition codes. With ``M``
blocks the first factor is ``C' = ⊕ C`` and a gadget for a block vector
``b`` measures ``(b ⊗ 1) ⊗ e_l``: its vertex map is ``b ⊗ I_d`` and its edge
map ``b ⊗ g_0``, so the ancilla never grows with ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .codes import cyclic_repetition
from .complex import Check, ChainComplex, homology_dim, tensor_blocks
from .cone import ChainMap, require_chain_map
from .distance import DEFAULT_BUDGET, Distance, min_nontrivial_weight, weight_ordered_search
from .errors import SearchBudgetExceeded, WrongShape, ZeroVector
from .gadgets import SurgeryGadget, gadget_from_graph, family_graph
from .gf2 import BinaryMatrix, BinaryVector, XorBasis, kernel_basis, kron, kron_vec, solve
from .surgery import (
    CompactedCode,
    Deformation,
    HgpCode,
    SurgerySequence,
    block_code,
    build_compacted,
    build_deformed,
    build_hgp,
    measured_logicals,
)


@dataclass
class ToricInstance:
    """``M`` toric codes of distance ``d`` sharing the second factor.

    Attributes:
        d: Code distance.
        blocks: Number of toric blocks ``M``.
        code: ``HGP(⊕ C, D)`` with cyclic repetition factors.
        single: The one-block first factor ``C``.
    """

    d: int
    blocks: int
    code: HgpCode
    single: ChainComplex
    b_vectors: list[BinaryVector] = field(default_factory=list)

    def annihilator(self, vectors=None) -> list[BinaryVector]:
        """Basis of ``{x : x . b = 0 for every b}``."""
        vectors = self.b_vectors if vectors is None else vectors
        if not vectors:
            return [BinaryVector.from_support(self.blocks, [j]) for j in range(self.blocks)]
        return kernel_basis(BinaryMatrix.from_rows(list(vectors)))


def build_toric(d: int, blocks: int = 1) -> ToricInstance:
    """Toric code(s) as ``HGP(⊕_M rep_d, rep_d)`` with cyclic repetition codes."""
    if d < 2 or blocks < 1:
        raise ValueError("need d >= 2 and at least one block")
    h = cyclic_repetition(d)
    c = block_code([h] * blocks) if blocks > 1 else ChainComplex.classical(h, "C")
    code = build_hgp(c, h)
    return ToricInstance(d, blocks, code, ChainComplex.classical(h, "C"))


def toric_gadget(inst: ToricInstance, b: BinaryVector, faces: bool = True, name: str = "G") -> SurgeryGadget:
    """Cycle gadget measuring the rows selected by the block vector ``b``.

    Args:
        inst: The toric instance.
        b: Nonzero length-``M`` vector choosing blocks.
        faces: Fill the cycle with a face. Without it the gadget has no
            degree ``-1`` space and exactly ``d^2`` ancilla qubits, but its
            cycle is an unfilled gauge loop.
    """
    if b.length != inst.blocks:
        raise ValueError(f"block vector has length {b.length}, expected {inst.blocks}")
    if b.is_zero():
        raise ZeroVector("block vector must be nonzero")
    d = inst.d
    ones = BinaryVector.ones(d)
    edges, face_list = family_graph("cycle", d, faces)
    single = gadget_from_graph(inst.single, ones, list(range(d)), edges, face_list, "cycle", name)
    bcol = BinaryMatrix.from_dense(b.to_dense().reshape(-1, 1))
    g1 = kron(bcol, single.chain_map.at(1))
    g0 = kron(bcol, single.chain_map.at(0))
    target = inst.code.C
    cmap = require_chain_map(ChainMap(single.graph, target, {1: g1, 0: g0}))
    codeword = kron_vec(b, ones)
    inst.b_vectors.append(b)
    return SurgeryGadget(target, codeword, "cycle", single.graph, cmap, list(range(d)), edges, face_list)


def g1_condition(gadget: SurgeryGadget, b_perp: list[BinaryVector], d: int) -> Check:
    """``g_1^T (x ⊗ e_j) = 0`` for every ``x`` in ``b_perp`` and every ``j``.

    Equivalently no vertex maps into the span of ``B^⊥ ⊗ F_2^d``.
    """
    g1t = gadget.chain_map.at(1).T
    for x in b_perp:
        for j in range(d):
            v = kron_vec(x, BinaryVector.from_support(d, [j]))
            if not g1t.matvec(v).is_zero():
                return Check(False, f"preimage of {x.support()} ⊗ e_{j} is nonempty")
    return Check(True)


def orthogonal_pairing(b_vectors: list[BinaryVector], b_perp: list[BinaryVector]) -> Check:
    """Every measured block vector is orthogonal to every ``B^⊥`` vector."""
    for b in b_vectors:
        for x in b_perp:
            if b.dot(x):
                return Check(False, f"{b.support()} and {x.support()} overlap oddly")
    return Check(True)


# meta-check decoding graph ------------------------------------------------------


@dataclass
class MetaCheckGraph:
    """Decoding graph of the meta-checks restricted to ancilla Z checks.

    Vertices are meta-checks ``(v, k)`` with ``v`` a gadget vertex and ``k`` a
    bit of ``D``. Vertical edges are checks ``(v, b)`` in ``G_1 ⊗ D_0``,
    horizontal edges are checks ``(e, k)`` in ``G_0 ⊗ D_1``.
    """

    graph: nx.MultiGraph
    shape: tuple[int, int]
    periodic: dict[str, bool]
    flipping_directions: list[str]
    min_cycle_weight: float
    min_undetected_flip: float
    base_support: int

    @property
    def cycle_rank(self) -> int:
        g = self.graph
        return g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)


def _ancilla_restricted_meta(deformation: Deformation):
    css = deformation.css
    n_anc_z, _ = css.split("z_checks")
    n_meta, _ = css.split("meta_checks")
    meta = css.meta
    anc = meta.select_columns(range(n_anc_z))
    base = meta.select_columns(range(n_anc_z, meta.cols))
    return anc, base, n_meta


def flip_functionals(deformation: Deformation) -> list[int]:
    """Indicators of the ancilla Z checks certifying each measured class."""
    report = measured_logicals(deformation)
    out = []
    for cls in report.classes:
        out.append(sum(1 << j for j in cls.certificate))
    return out


def metacheck_graph(deformation: Deformation, budget: int = DEFAULT_BUDGET) -> MetaCheckGraph:
    """Extract and check the meta-check decoding graph of a toric deformation.

    Raises:
        WrongShape: If an ancilla Z check touches other than two
            meta-checks or the block layout is not ``G ⊗ D``.
    """
    if deformation.orientation != "C":
        raise WrongShape("expected a gadget on the first factor")
    anc, base, _ = _ancilla_restricted_meta(deformation)
    graph_cx, dcx = deformation.gadget.graph, deformation.code.D
    nv, ne, nd1, nd0 = graph_cx.dim(1), graph_cx.dim(0), dcx.dim(1), dcx.dim(0)
    if anc.rows != nv * nd1 or anc.cols != nv * nd0 + ne * nd1:
        raise WrongShape("ancilla blocks do not match G ⊗ D")
    g = nx.MultiGraph()
    g.add_nodes_from((v, k) for v in range(nv) for k in range(nd1))
    dense = anc.to_dense()
    edges_of = {"D": [], "G": []}
    for col in range(anc.cols):
        rows = np.flatnonzero(dense[:, col])
        if len(rows) != 2:
            raise WrongShape(f"ancilla Z check {col} touches {len(rows)} meta-checks")
        u, w = (divmod(int(r), nd1) for r in rows)
        direction = "D" if col < nv * nd0 else "G"
        g.add_edge(u, w, index=col, direction=direction)
        edges_of[direction].append((u, w))
    periodic = {}
    for direction, fixed in (("D", 0), ("G", 1)):
        sub = nx.MultiGraph()
        sub.add_edges_from(edges_of[direction])
        comps = [sub.subgraph(c) for c in nx.connected_components(sub)] if sub.number_of_nodes() else []
        periodic[direction] = bool(comps) and all(
            all(deg == 2 for _, deg in c.degree()) and len({n[fixed] for n in c.nodes}) == 1 for c in comps
        )
    if any(deg != 4 for _, deg in g.degree()):
        raise WrongShape("meta-check vertices are not all of degree four")
    zero = BinaryMatrix(anc.cols, 0)
    try:
        raw = min_nontrivial_weight(anc, zero, budget)
    except SearchBudgetExceeded as exc:
        raw = exc.lower_bound
    funcs = flip_functionals(deformation)
    flip = weight_ordered_search(anc, _independent(funcs), budget)
    # straight loops through vertex 0 (D direction) and bit 0 (G direction)
    loops = {
        "D": sum(1 << (0 * nd0 + b) for b in range(nd0)),
        "G": sum(1 << (nv * nd0 + e * nd1) for e in range(ne)),
    }
    flipping = [
        direction
        for direction, loop in loops.items()
        if any(bin(f & loop).count("1") & 1 for f in funcs)
    ]
    return MetaCheckGraph(g, (nv, nd1), periodic, flipping, raw, flip, int(base.row_weights().sum()))


def _independent(funcs: list[int]) -> list[int]:
    span, out = XorBasis(), []
    for f in funcs:
        if span.insert(f):
            out.append(f)
    return out


# distance propositions -------------------------------------------------------------


def xh_witnesses(inst: ToricInstance, gadgets: list[SurgeryGadget], cone_cx: ChainComplex) -> list[list[BinaryVector]]:
    """Deformed ``X̄^h`` representatives on the cone of the given gadgets.

    For each check-space codeword ``c̄_m = e_m ⊗ 1`` of ``C'^T`` and each bit
    ``k`` of ``D`` the representative is ``c̄_m ⊗ e_k`` on ``C'_0 ⊗ D_1``
    plus ``z_i ⊗ e_k`` on every ``G_i[-1] ⊗ D_1`` with
    ``∂_{G,0}^T z_i = g_0^T c̄_m``. Returns an empty list for a gadget
    whose faces cannot absorb the boundary.
    """
    code, d = inst.code, inst.d
    dcx = code.D
    nd1 = dcx.dim(1)
    anc_sizes = []
    for g in gadgets:
        blocks = {(p, q): (off, size) for p, q, off, size in tensor_blocks(g.graph, dcx, 0)}
        anc_sizes.append((sum(s for *_, s in tensor_blocks(g.graph, dcx, 0)), blocks))
    base_blocks = {(p, q): off for p, q, off, _ in tensor_blocks(code.C, dcx, 1)}
    total_anc = sum(s for s, _ in anc_sizes)
    n = cone_cx.dim(1)
    out = []
    for m in range(inst.blocks):
        cbar = kron_vec(BinaryVector.from_support(inst.blocks, [m]), BinaryVector.ones(d))
        zs = []
        for g in gadgets:
            rhs = g.chain_map.at(0).T.matvec(cbar)
            z = solve(g.graph.boundary(0).T, rhs)
            if z is None:
                return []
            zs.append(z)
        reps = []
        for k in range(nd1):
            dense = np.zeros(n, dtype=np.uint8)
            off = 0
            for (size, blocks), z in zip(anc_sizes, zs):
                boff, _ = blocks.get((-1, 1), (0, 0))
                for j in z.support():
                    dense[off + boff + j * nd1 + k] = 1
                off += size
            for j in cbar.support():
                dense[total_anc + base_blocks[(0, 1)] + j * nd1 + k] = 1
            reps.append(BinaryVector.from_dense(dense))
        out.append(reps)
    return out


@dataclass
class ToricReport:
    """Distances and structural checks for toric surgery."""

    base: tuple[Distance, Distance]
    deformed: list[tuple[Distance, Distance]]
    compacted: tuple[Distance, Distance] | None
    g1_conditions: list[Check]
    pairing: Check
    xh_ok: bool | None
    xv_ok: bool
    k_after: list[int]

    def distances_ok(self, d: int) -> bool | None:
        ds = [x for pair in self.deformed for x in pair]
        if self.compacted:
            ds += list(self.compacted)
        verdicts = [x.at_least(d) for x in ds]
        if False in verdicts:
            return False
        return None if None in verdicts else True


def _is_cocycle(cone_cx: ChainComplex, v: BinaryVector) -> bool:
    return cone_cx.boundary(2).T.matvec(v).is_zero()


def _is_coboundary(cone_cx: ChainComplex, v: BinaryVector) -> bool:
    return cone_cx.dim(0) > 0 and solve(cone_cx.boundary(1).T, v) is not None


def verify_toric_distances(
    inst: ToricInstance,
    gadgets: list[SurgeryGadget],
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    compacted: CompactedCode | None = None,
) -> ToricReport:
    """Exhaustive distances plus the structural toric lemmas.

    Checks each single deformation, the compacted code, the vertex-map
    condition per gadget, the orthogonal pairing of ``B`` and ``B^⊥``, that
    the ``X̄^h`` witnesses are disjoint nontrivial cocycles and that
    ``X̄^v = (x ⊗ e_j) ⊗ d̄`` stays a cocycle after every prefix of gadgets.
    """
    kw = dict(budget=budget, threads=threads, on_budget="bound")
    code, d = inst.code, inst.d
    base = code.distances(**kw)
    deformed, k_after = [], []
    for g in gadgets:
        df = build_deformed(code, g, "C")
        deformed.append(df.css.distances(**kw))
        k_after.append(homology_dim(df.css.complex, 1))
    seq = SurgerySequence(code, gadgets, ["C"] * len(gadgets), allow_repeats=True)
    comp = compacted or (build_compacted(seq) if gadgets else None)
    comp_d = comp.css.distances(**kw) if comp else None
    g1s = []
    for g in gadgets:
        b = BinaryVector.from_dense(g.chain_map.at(1).to_dense()[:: d, 0])
        g1s.append(g1_condition(g, inst.annihilator([b]), d))
    bvecs = [BinaryVector.from_dense(g.chain_map.at(1).to_dense()[:: d, 0]) for g in gadgets]
    pairing = orthogonal_pairing(bvecs, inst.annihilator(bvecs))
    xh_ok = None
    if comp:
        witnesses = xh_witnesses(inst, gadgets, comp.cone.complex)
        if witnesses:
            xh_ok = True
            for reps in witnesses:
                supports = [set(r.support()) for r in reps]
                disjoint = all(not (a & b) for i, a in enumerate(supports) for b in supports[i + 1 :])
                good = all(_is_cocycle(comp.cone.complex, r) and not _is_coboundary(comp.cone.complex, r) for r in reps)
                xh_ok = xh_ok and disjoint and good
    xv_ok = True
    dbar_basis = kernel_basis(code.D.boundary(1).T)
    blocks = {(p, q): off for p, q, off, _ in tensor_blocks(code.C, code.D, 1)}
    for tau in range(1, len(gadgets) + 1):
        prefix = SurgerySequence(code, gadgets[:tau], ["C"] * tau, allow_repeats=True)
        cone_cx = build_compacted(prefix).cone.complex
        n_anc = cone_cx.dim(1) - code.n
        for x in inst.annihilator(bvecs[:tau]):
            for j in range(d):
                for dbar in dbar_basis:
                    v = kron_vec(kron_vec(x, BinaryVector.from_support(d, [j])), dbar)
                    dense = np.zeros(cone_cx.dim(1), dtype=np.uint8)
                    dense[n_anc + blocks[(1, 0)] : n_anc + blocks[(1, 0)] + v.length] = v.to_dense()
                    if not _is_cocycle(cone_cx, BinaryVector.from_dense(dense)):
                        xv_ok = False
    return ToricReport(base, deformed, comp_d, g1s, pairing, xh_ok, xv_ok, k_after)
