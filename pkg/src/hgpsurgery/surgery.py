"""Hypergraph-product codes and surgery on them.

Conventions: a classical code ``H`` (``m x n``) is the complex with
``C_1 = bits`` and ``C_0 = checks``. The product ``C ⊗ D`` has Z checks in
degree 2, qubits in degree 1 and X checks in degree 0, so ``H_X = ∂_1`` and
``H_Z = ∂_2^T``. A gadget on the ``C`` side is tensored with ``D`` on the
right; a gadget on the ``D`` side is tensored with ``C`` on the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import (
    Check,
    ChainComplex,
    cocycle_distance,
    cycle_distance,
    homology_dim,
    tensor_blocks,
    tensor_product,
)
from .cone import (
    ChainMap,
    ConeComplex,
    DeformedCssCode,
    extract_css,
    isomorphic_by_keys,
    mapping_cone,
    tensor_map_with_identity,
)
from .distance import DEFAULT_BUDGET, INF, Distance
from .errors import DependentCodewords, MismatchedD, OrientationMismatch
from .gadgets import SurgeryGadget
from .gf2 import (
    BinaryMatrix,
    BinaryVector,
    XorBasis,
    block_matrix,
    kernel_basis_with_info,
    kron_vec,
    solve,
)

ORIENTATIONS = ("C", "D")


def _as_complex(h, name: str) -> ChainComplex:
    if isinstance(h, ChainComplex):
        return h.with_name(name)
    if not isinstance(h, BinaryMatrix):
        h = BinaryMatrix.from_dense(h)
    return ChainComplex.classical(h, name)


@dataclass
class HgpCode:
    """Hypergraph product of two classical codes.

    Attributes:
        C: First factor (degree 1 bits, degree 0 checks).
        D: Second factor.
        product: ``C ⊗ D`` with degrees 2 (Z checks), 1 (qubits), 0 (X checks).
    """

    C: ChainComplex
    D: ChainComplex
    product: ChainComplex

    @property
    def hx(self) -> BinaryMatrix:
        return self.product.boundary(1)

    @property
    def hz(self) -> BinaryMatrix:
        return self.product.boundary(2).T

    @property
    def n(self) -> int:
        return self.product.dim(1)

    @property
    def k(self) -> int:
        return homology_dim(self.product, 1)

    def k_formula(self) -> int:
        """``k_C k_{D^T} + k_{C^T} k_D`` from the factor codes."""
        kc, kct = homology_dim(self.C, 1), homology_dim(self.C, 0)
        kd, kdt = homology_dim(self.D, 1), homology_dim(self.D, 0)
        return kc * kdt + kct * kd

    def n_formula(self) -> int:
        return self.C.dim(1) * self.D.dim(0) + self.C.dim(0) * self.D.dim(1)

    def distances(self, budget=DEFAULT_BUDGET, threads=1, on_budget="raise") -> tuple[Distance, Distance]:
        """``(d_1, d^1)`` of the product at the qubit degree."""
        kw = dict(budget=budget, threads=threads, on_budget=on_budget)
        return cycle_distance(self.product, 1, **kw), cocycle_distance(self.product, 1, **kw)

    def distance(self, **kw) -> Distance:
        dz, dx = self.distances(**kw)
        value = min(dz.value, dx.value)
        # an exact minimum is settled once every bound is at least as large
        exact = any(d.exact and d.value == value for d in (dz, dx))
        return Distance(value, exact, dz.budget or dx.budget)

    def params(self, **kw) -> tuple[int, int, Distance]:
        return self.n, self.k, self.distance(**kw)

    def factor(self, orientation: str) -> ChainComplex:
        return self.C if orientation == "C" else self.D


def build_hgp(hc, hd) -> HgpCode:
    """Build ``HGP(C, D)`` from parity-check matrices or classical complexes."""
    c = _as_complex(hc, "C")
    d = _as_complex(hd, "D")
    return HgpCode(c, d, tensor_product(c, d))


# canonical logical basis ---------------------------------------------------------


@dataclass
class CanonicalBasis:
    """Information-set logical basis of a hypergraph-product code.

    ``z_left[i][j]`` pairs with ``x_left[i][j]`` and ``z_right[p][q]`` with
    ``x_right[p][q]``; all other pairings vanish.
    """

    z_left: list[list[BinaryVector]]
    x_left: list[list[BinaryVector]]
    z_right: list[list[BinaryVector]]
    x_right: list[list[BinaryVector]]
    info: dict[str, list[int]] = field(default_factory=dict)

    def labels(self) -> list[tuple[str, int, int]]:
        out = [("L", i, j) for i, row in enumerate(self.z_left) for j in range(len(row))]
        out += [("R", p, q) for p, row in enumerate(self.z_right) for q in range(len(row))]
        return out

    def z_vectors(self) -> list[BinaryVector]:
        return [v for row in self.z_left for v in row] + [v for row in self.z_right for v in row]

    def x_vectors(self) -> list[BinaryVector]:
        return [v for row in self.x_left for v in row] + [v for row in self.x_right for v in row]

    def z_coefficients(self, z: BinaryVector) -> dict[tuple[str, int, int], int]:
        """Coordinates of a Z logical by pairing with the X basis."""
        return {lab: x.dot(z) for lab, x in zip(self.labels(), self.x_vectors())}

    def pairing_matrix(self) -> np.ndarray:
        zs, xs = self.z_vectors(), self.x_vectors()
        return np.array([[z.dot(x) for x in xs] for z in zs], dtype=np.uint8).reshape(len(zs), len(xs))


def _embed(n_total: int, offset: int, v: BinaryVector) -> BinaryVector:
    dense = np.zeros(n_total, dtype=np.uint8)
    dense[offset : offset + v.length] = v.to_dense()
    return BinaryVector.from_dense(dense)


def canonical_basis(code: HgpCode) -> CanonicalBasis:
    """Logical basis built from kernel bases and their information sets.

    The left sector uses ``ker ∂_C ⊗ e_J`` (Z) and ``e_I ⊗ ker ∂_D^T`` (X),
    the right sector ``e_{I'} ⊗ ker ∂_D`` (Z) and ``ker ∂_C^T ⊗ e_{J'}`` (X),
    where ``I, J, I', J'`` are the information sets of ``∂_C, ∂_D^T,
    ∂_C^T, ∂_D``.
    """
    hc, hd = code.C.boundary(1), code.D.boundary(1)
    lc, info_c = kernel_basis_with_info(hc)
    ldt, info_dt = kernel_basis_with_info(hd.T)
    lct, info_ct = kernel_basis_with_info(hc.T)
    ld, info_d = kernel_basis_with_info(hd)
    blocks = {(p, q): off for p, q, off, _ in tensor_blocks(code.C, code.D, 1)}
    n = code.n
    mc, nc = hc.shape
    md, nd = hd.shape

    def unit(size, j):
        return BinaryVector.from_support(size, [j])

    left_off, right_off = blocks.get((1, 0), 0), blocks.get((0, 1), 0)
    z_left = [[_embed(n, left_off, kron_vec(l, unit(md, j))) for j in info_dt] for l in lc]
    x_left = [[_embed(n, left_off, kron_vec(unit(nc, i), l)) for l in ldt] for i in info_c]
    z_right = [[_embed(n, right_off, kron_vec(unit(mc, p), l)) for l in ld] for p in info_ct]
    x_right = [[_embed(n, right_off, kron_vec(l, unit(nd, q))) for q in info_d] for l in lct]
    info = {"C": info_c, "D^T": info_dt, "C^T": info_ct, "D": info_d}
    return CanonicalBasis(z_left, x_left, z_right, x_right, info)


# single deformation --------------------------------------------------------------


@dataclass
class Deformation:
    """A hypergraph-product code deformed by one gadget.

    Attributes:
        code: The base code.
        gadget: The gadget used.
        orientation: ``"C"`` or ``"D"``: which factor the gadget maps into.
        ancilla: ``G ⊗ D`` or ``C ⊗ G``.
        chain_map: Extended map from ``ancilla`` into the product.
        css: The deformed CSS code.
    """

    code: HgpCode
    gadget: SurgeryGadget
    orientation: str
    ancilla: ChainComplex
    chain_map: ChainMap
    css: DeformedCssCode


def _check_orientation(code: HgpCode, gadget: SurgeryGadget, orientation: str):
    if orientation not in ORIENTATIONS:
        raise OrientationMismatch(f"orientation must be one of {ORIENTATIONS}, got {orientation!r}")
    factor = code.factor(orientation)
    if gadget.code.lo != factor.lo or gadget.code.dims != factor.dims or any(
        gadget.code.boundary(i) != factor.boundary(i) for i in factor.degrees
    ):
        raise OrientationMismatch(f"gadget does not target factor {orientation}")


def extend_gadget(code: HgpCode, gadget: SurgeryGadget, orientation: str) -> ChainMap:
    """Tensor the gadget map with the other factor's identity."""
    _check_orientation(code, gadget, orientation)
    g = ChainMap(gadget.graph, code.factor(orientation), {i: gadget.chain_map.at(i) for i in (1, 0, -1)})
    if orientation == "C":
        return tensor_map_with_identity(g, code.D, "right")
    return tensor_map_with_identity(g, code.C, "left")


def build_deformed(code: HgpCode, gadget: SurgeryGadget, orientation: str = "C") -> Deformation:
    """Cone of the extended gadget map, read as a CSS code at degree 1.

    Raises:
        OrientationMismatch: If the gadget does not target the chosen factor.
    """
    f = extend_gadget(code, gadget, orientation)
    cone = mapping_cone(f)
    return Deformation(code, gadget, orientation, f.source, f, extract_css(cone, 1))


@dataclass
class MeasuredClass:
    """One measured logical representative with its ancilla certificate."""

    index: int
    representative: BinaryVector
    coefficients: dict
    certificate: list[int]
    certified: bool


@dataclass
class MeasurementReport:
    classes: list[MeasuredClass]
    distinct: int
    k_before: int
    k_after: int

    @property
    def all_certified(self) -> bool:
        return all(c.certified for c in self.classes)


def measured_representatives(code: HgpCode, gadget: SurgeryGadget, orientation: str) -> list[BinaryVector]:
    """``c ⊗ e_b`` for each check ``b`` of D, or ``e_a ⊗ c`` for each check of C."""
    blocks = {(p, q): off for p, q, off, _ in tensor_blocks(code.C, code.D, 1)}
    c = gadget.codeword
    reps = []
    if orientation == "C":
        md = code.D.dim(0)
        for b in range(md):
            reps.append(_embed(code.n, blocks[(1, 0)], kron_vec(c, BinaryVector.from_support(md, [b]))))
    else:
        mc = code.C.dim(0)
        for a in range(mc):
            reps.append(_embed(code.n, blocks[(0, 1)], kron_vec(BinaryVector.from_support(mc, [a]), c)))
    return reps


def measured_logicals(deformation: Deformation) -> MeasurementReport:
    """Logical classes measured by the deformation.

    For every representative the ancilla Z checks whose product equals it
    on the base qubits are found by solving a linear system, and the
    product is re-checked exactly.
    """
    code, css = deformation.code, deformation.css
    cone_cx = css.complex
    basis = canonical_basis(code)
    n_anc_z, _ = css.split("z_checks")
    n_anc_q, _ = css.split("qubits")
    anc_cols = cone_cx.boundary(2).select_columns(range(n_anc_z))
    classes = []
    seen = XorBasis()
    distinct = 0
    for idx, rep in enumerate(measured_representatives(code, deformation.gadget, deformation.orientation)):
        lifted = BinaryVector(n_anc_q).concat(rep) if n_anc_q else rep
        x = solve(anc_cols, lifted)
        certified = x is not None and anc_cols.matvec(x) == lifted
        coeffs = basis.z_coefficients(rep)
        key = sum(bit << t for t, bit in enumerate(coeffs.values()))
        if key and seen.insert(key):
            distinct += 1
        classes.append(MeasuredClass(idx, rep, coeffs, x.support() if x is not None else [], certified))
    return MeasurementReport(classes, distinct, code.k, homology_dim(cone_cx, 1))


# compacted code --------------------------------------------------------------------


@dataclass
class SurgerySequence:
    """Gadgets applied to one hypergraph-product code.

    Attributes:
        code: The base code.
        gadgets: One gadget per measured codeword.
        orientations: ``"C"`` or ``"D"`` for each gadget.
        allow_repeats: Accept the same codeword more than once.
    """

    code: HgpCode
    gadgets: list[SurgeryGadget]
    orientations: list[str]
    allow_repeats: bool = False

    def __post_init__(self):
        if len(self.gadgets) != len(self.orientations):
            raise ValueError("one orientation per gadget is required")


@dataclass
class CompactedCode:
    """Cone of the summed gadget maps.

    Attributes:
        sequence: The input sequence.
        ancillas: Per-gadget ancilla complexes.
        maps: Per-gadget extended maps.
        cone: Cone of the summed map.
        css: CSS code at degree 1.
        routes: Comparison with ``cone(sum g) ⊗ D`` when all gadgets share a side.
    """

    sequence: SurgerySequence
    ancillas: list[ChainComplex]
    maps: list[ChainMap]
    cone: ConeComplex
    css: DeformedCssCode
    routes: Check | None


def _check_independence(seq: SurgerySequence):
    for side in ORIENTATIONS:
        words = [g.codeword for g, o in zip(seq.gadgets, seq.orientations) if o == side]
        if not words:
            continue
        if seq.allow_repeats:
            words = list({w.to_int(): w for w in words}.values())
        span = XorBasis()
        for w in words:
            if not span.insert(w.to_int()):
                raise DependentCodewords(f"codewords on factor {side} are linearly dependent")


def sum_of_maps(maps: list[ChainMap], target: ChainComplex) -> ChainMap:
    """``⊕ A_i -> target`` acting as ``maps[i]`` on block ``i``."""
    source = ChainComplex.direct_sum(*[f.source for f in maps])
    out = {}
    for k in source.degrees:
        parts = [f.at(k) for f in maps]
        out[k] = block_matrix([parts]) if target.dim(k) else BinaryMatrix(0, source.dim(k))
    return ChainMap(source, target, out)


def build_compacted(seq: SurgerySequence) -> CompactedCode:
    """Direct assembly of the compacted code, cross-checked when possible.

    Gadget ``i`` is renamed ``G{i+1}`` so coordinates stay distinguishable.
    When every gadget sits on the same factor the cone is rebuilt as
    ``cone(sum g) ⊗ D`` (or ``C ⊗ cone(sum g)``) and compared after
    matching coordinates.

    Raises:
        DependentCodewords: If codewords on one factor are dependent.
        MismatchedD: If a gadget targets a code other than its factor.
    """
    code = seq.code
    _check_independence(seq)
    gadgets = [g.renamed(f"G{i + 1}") for i, g in enumerate(seq.gadgets)]
    maps = []
    for g, o in zip(gadgets, seq.orientations):
        try:
            maps.append(extend_gadget(code, g, o))
        except OrientationMismatch as exc:
            raise MismatchedD(str(exc)) from exc
    fbar = sum_of_maps(maps, code.product)
    cone = mapping_cone(fbar)
    css = extract_css(cone, 1)
    routes = None
    if len(set(seq.orientations)) == 1:
        side = seq.orientations[0]
        factor = code.factor(side)
        gbar = sum_of_maps(
            [ChainMap(g.graph, factor, {i: g.chain_map.at(i) for i in (1, 0, -1)}) for g in gadgets], factor
        )
        small = mapping_cone(gbar).complex
        other = tensor_product(small, code.D) if side == "C" else tensor_product(code.C, small)
        routes = isomorphic_by_keys(cone.complex, other)
    return CompactedCode(seq, [f.source for f in maps], maps, cone, css, routes)


@dataclass
class FastSurgeryReport:
    """Verdicts for the three sufficient conditions of fast surgery.

    ``None`` in a verdict means the search budget ran out first.
    """

    base_distance: Distance
    compacted: tuple[Distance, Distance]
    distance_ok: bool | None
    meta_distances: list[Distance]
    meta_ok: list[bool | None]
    disjoint: list[bool]
    routes: Check | None
    homology_drop: int
    codeword_rank: int

    @property
    def verdicts(self) -> dict[str, bool | None]:
        meta = None if None in self.meta_ok else all(self.meta_ok)
        if False in self.meta_ok:
            meta = False
        return {"distance": self.distance_ok, "metacheck": meta, "disjoint": all(self.disjoint)}

    @property
    def passed(self) -> bool:
        return all(v is True for v in self.verdicts.values())

    @property
    def inconclusive(self) -> bool:
        v = self.verdicts
        return None in v.values() and False not in v.values()


def _decide(dist: Distance, bound) -> bool | None:
    return dist.at_least(bound)


def disjoint_images(f: ChainMap, degree: int = 1) -> bool:
    """Images of distinct basis vectors are disjoint iff no row has two ones."""
    m = f.at(degree)
    return m.rows == 0 or m.cols == 0 or int(m.row_weights().max()) <= 1


def verify_fast_conditions(
    seq: SurgerySequence,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    compacted: CompactedCode | None = None,
    base_distance: Distance | None = None,
) -> FastSurgeryReport:
    """Check compacted distance, meta-check distances and disjointness."""
    compacted = compacted or build_compacted(seq)
    kw = dict(budget=budget, threads=threads, on_budget="bound")
    d = base_distance or seq.code.distance(**kw)
    dz, dx = compacted.css.distances(**kw)
    dist_ok = None
    decisions = [_decide(dz, d.value), _decide(dx, d.value)]
    if not d.exact and False not in decisions:
        decisions.append(None)
    if False in decisions:
        dist_ok = False
    elif all(x is True for x in decisions):
        dist_ok = True
    metas = [cocycle_distance(a, 1, **kw) for a in compacted.ancillas]
    meta_ok = [_decide(m, d.value) for m in metas]
    if not d.exact:
        # passing a lower bound of d proves nothing about d itself
        meta_ok = [None if ok else ok for ok in meta_ok]
    disjoint = [disjoint_images(f) for f in compacted.maps]
    drop = seq.code.k - homology_dim(compacted.cone.complex, 1)
    rank = 0
    for side in ORIENTATIONS:
        span = XorBasis()
        for g, o in zip(seq.gadgets, seq.orientations):
            if o == side:
                span.insert(g.codeword.to_int())
        rank += len(span)
    return FastSurgeryReport(d, (dz, dx), dist_ok, metas, meta_ok, disjoint, compacted.routes, drop, rank)


# several code blocks ---------------------------------------------------------------


def block_code(blocks: list, name: str = "C") -> ChainComplex:
    """Direct sum of classical codes as a single classical complex."""
    parts = [_as_complex(b, f"{name}{j + 1}") for j, b in enumerate(blocks)]
    return ChainComplex.direct_sum(*parts).with_name(name)


def multi_block(blocks: list, hd, joint_codeword: BinaryVector, family: str = "cycle", **kw) -> SurgerySequence:
    """Surgery on a joint codeword of ``⊕ C^(j)`` in ``HGP(⊕ C^(j), D)``.

    Extra keyword arguments go to :func:`~hgpsurgery.gadgets.synthesize`.
    """
    from .gadgets import synthesize

    code = build_hgp(block_code(blocks), hd)
    gadget = synthesize(code.C, joint_codeword, family, **kw)
    return SurgerySequence(code, [gadget], ["C"])


__all__ = [
    "CanonicalBasis",
    "CompactedCode",
    "Deformation",
    "FastSurgeryReport",
    "HgpCode",
    "MeasuredClass",
    "MeasurementReport",
    "SurgerySequence",
    "block_code",
    "build_compacted",
    "build_deformed",
    "build_hgp",
    "canonical_basis",
    "measured_logicals",
    "multi_block",
    "verify_fast_conditions",
    "INF",
]
