"""Chain maps, mapping cones and CSS extraction.

The cone of ``f : A -> C`` has ``cone_k = A_{k-1} ⊕ C_k`` with the
ancilla block first and boundary ``[[∂_A, 0], [f, ∂_C]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import Check, ChainComplex, tensor_blocks, tensor_product
from .distance import DEFAULT_BUDGET, Distance
from .errors import DegreeOutOfRange, DimensionMismatch, NotAChainMap
from .gf2 import BinaryMatrix, block_matrix, kron


class ChainMap:
    """A degree-preserving linear map between two complexes.

    Args:
        source: Domain complex.
        target: Codomain complex.
        maps: Degree ``i`` to matrix of shape ``target.dim(i) x source.dim(i)``.
            Missing degrees are zero.
    """

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict[int, BinaryMatrix]):
        self.source = source
        self.target = target
        self._maps = {}
        for i, m in maps.items():
            want = (target.dim(i), source.dim(i))
            if m.shape != want:
                raise DimensionMismatch(f"map at degree {i} has shape {m.shape}, expected {want}")
            self._maps[i] = m

    def at(self, i: int) -> BinaryMatrix:
        m = self._maps.get(i)
        if m is None:
            return BinaryMatrix(self.target.dim(i), self.source.dim(i))
        return m

    @property
    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.source is not other.source and self.source != other.source:
            raise DimensionMismatch("maps have different sources")
        return ChainMap(self.source, self.target, {i: self.at(i) + other.at(i) for i in self.degrees})

    def __repr__(self):
        return f"ChainMap({self.source.name} -> {self.target.name})"


def validate_map(f: ChainMap) -> Check:
    """Check ``f_{i-1} ∂^A_i = ∂^C_i f_i`` at every degree.

    The returned check names the first degree where the square fails.
    """
    for i in f.degrees:
        lhs = f.at(i - 1) @ f.source.boundary(i)
        rhs = f.target.boundary(i) @ f.at(i)
        if lhs != rhs:
            return Check(False, f"chain-map square fails at degree {i}", i)
    return Check(True)


def require_chain_map(f: ChainMap) -> ChainMap:
    chk = validate_map(f)
    if not chk:
        raise NotAChainMap(chk.detail)
    return f


@dataclass
class ConeComplex:
    """A mapping cone together with its block layout.

    Attributes:
        complex: The cone as a chain complex.
        chain_map: The map it was built from.
        blocks: Degree ``k`` to ``(ancilla_dim, base_dim)``.
    """

    complex: ChainComplex
    chain_map: ChainMap
    blocks: dict[int, tuple[int, int]] = field(default_factory=dict)

    def split(self, k: int) -> tuple[int, int]:
        return self.blocks.get(k, (0, 0))


def mapping_cone(f: ChainMap, name: str | None = None) -> ConeComplex:
    """Build the cone of ``f`` after validating it."""
    require_chain_map(f)
    src, tgt = f.source, f.target
    lo = min(src.lo + 1, tgt.lo)
    hi = max(src.hi + 1, tgt.hi)
    dims = [src.dim(k - 1) + tgt.dim(k) for k in range(lo, hi + 1)]
    bd = {}
    for k in range(lo + 1, hi + 1):
        bd[k] = block_matrix(
            [
                [src.boundary(k - 1), BinaryMatrix(src.dim(k - 2), tgt.dim(k))],
                [f.at(k - 1), tgt.boundary(k)],
            ]
        )
    keys = {k: src.keys(k - 1) + tgt.keys(k) for k in range(lo, hi + 1)}
    labels = {k: src.labels(k - 1) + tgt.labels(k) for k in range(lo, hi + 1)}
    cx = ChainComplex(
        lo, dims, bd, name=name or f"cone({src.name}->{tgt.name})", keys=keys, labels=labels
    )
    blocks = {k: (src.dim(k - 1), tgt.dim(k)) for k in range(lo, hi + 1)}
    return ConeComplex(cx, f, blocks)


def tensor_map_with_identity(f: ChainMap, other: ChainComplex, side: str = "right") -> ChainMap:
    """Extend ``f`` to ``f ⊗ id`` (``side="right"``) or ``id ⊗ f`` (``"left"``).

    Each block ``A_p ⊗ D_q`` maps into ``C_p ⊗ D_q`` by ``kron(f_p, I)``;
    the left variant uses ``kron(I, f_q)`` on ``D_p ⊗ A_q``.
    """
    if side == "right":
        src = tensor_product(f.source, other)
        tgt = tensor_product(f.target, other)
    elif side == "left":
        src = tensor_product(other, f.source)
        tgt = tensor_product(other, f.target)
    else:
        raise ValueError(f"unknown side {side!r}")
    maps = {}
    for k in src.degrees:
        if side == "right":
            sblocks = tensor_blocks(f.source, other, k)
            rows = tensor_blocks(f.target, other, k)
        else:
            sblocks = tensor_blocks(other, f.source, k)
            rows = tensor_blocks(other, f.target, k)
        if not rows or not sblocks:
            continue
        grid = []
        for rp, rq, _, rsize in rows:
            line = []
            for p, q, _, size in sblocks:
                if (rp, rq) != (p, q):
                    line.append(BinaryMatrix(rsize, size))
                elif side == "right":
                    line.append(kron(f.at(p), BinaryMatrix.identity(other.dim(q))))
                else:
                    line.append(kron(BinaryMatrix.identity(other.dim(p)), f.at(q)))
            grid.append(line)
        maps[k] = block_matrix(grid)
    return ChainMap(src, tgt, maps)


def coordinate_permutation(a: ChainComplex, b: ChainComplex) -> dict[int, list[int]] | None:
    """Permutations matching ``b``'s coordinates to ``a``'s by key.

    Returns ``{k: perm}`` with ``perm[j]`` the position in ``a`` of ``b``'s
    coordinate ``j``, or ``None`` when the key sets differ.
    """
    if any(a.dim(k) != b.dim(k) for k in range(min(a.lo, b.lo), max(a.hi, b.hi) + 1)):
        return None
    out = {}
    for k in range(min(a.lo, b.lo), max(a.hi, b.hi) + 1):
        index = {key: j for j, key in enumerate(a.keys(k))}
        if len(index) != a.dim(k):
            return None
        try:
            out[k] = [index[key] for key in b.keys(k)]
        except KeyError:
            return None
    return out


def isomorphic_by_keys(a: ChainComplex, b: ChainComplex) -> Check:
    """Check that ``b`` equals ``a`` after reordering coordinates by key."""
    perm = coordinate_permutation(a, b)
    if perm is None:
        return Check(False, "coordinate keys do not match")
    for k in range(min(a.lo, b.lo) + 1, max(a.hi, b.hi) + 1):
        moved = b.boundary(k).permute_rows(perm[k - 1]).permute_columns(perm[k])
        if moved != a.boundary(k):
            return Check(False, f"boundaries differ at degree {k} after permutation", k)
    return Check(True, data={"permutation": perm})


def cone_product_isomorphism_check(g: ChainMap, other: ChainComplex) -> Check:
    """Compare ``cone(g ⊗ id)`` with ``cone(g) ⊗ D`` coordinate by coordinate."""
    lhs = mapping_cone(tensor_map_with_identity(g, other)).complex
    rhs = tensor_product(mapping_cone(g).complex, other)
    return isomorphic_by_keys(lhs, rhs)


@dataclass
class DeformedCssCode:
    """A CSS code read off three consecutive degrees of a cone.

    Rows of ``hx`` are X checks, rows of ``hz`` are Z checks and columns of
    both are qubits. ``meta`` has one row per meta-check and one column per
    Z check, and ``meta @ hz.T`` vanishes.
    """

    hx: BinaryMatrix
    hz: BinaryMatrix
    meta: BinaryMatrix
    cone: ConeComplex
    qubit_degree: int

    @property
    def complex(self) -> ChainComplex:
        return self.cone.complex

    @property
    def n(self) -> int:
        return self.hx.cols

    def block_layout(self) -> dict[str, list[tuple[str, int]]]:
        q = self.qubit_degree
        cx = self.complex
        return {
            "qubits": cx.labels(q),
            "z_checks": cx.labels(q + 1),
            "x_checks": cx.labels(q - 1),
            "meta_checks": cx.labels(q + 2),
        }

    def split(self, role: str) -> tuple[int, int]:
        """``(ancilla, base)`` sizes for ``qubits``, ``z_checks``, ``x_checks`` or ``meta_checks``."""
        shift = {"qubits": 0, "z_checks": 1, "x_checks": -1, "meta_checks": 2}[role]
        return self.cone.split(self.qubit_degree + shift)

    def logical_dim(self) -> int:
        return self.n - self.hx.rank() - self.hz.rank()

    def distances(self, budget=DEFAULT_BUDGET, threads=1, on_budget="raise") -> tuple[Distance, Distance]:
        """``(d_1, d^1)``: lightest nontrivial Z-type and X-type logicals."""
        from .complex import cocycle_distance, cycle_distance

        kw = dict(budget=budget, threads=threads, on_budget=on_budget)
        return (
            cycle_distance(self.complex, self.qubit_degree, **kw),
            cocycle_distance(self.complex, self.qubit_degree, **kw),
        )


def extract_css(cone: ConeComplex, qubit_degree: int) -> DeformedCssCode:
    """Read ``(H_X, H_Z, M_Z)`` off degrees ``q - 1 .. q + 2`` of a cone.

    ``H_X = ∂_q``, ``H_Z = ∂_{q+1}^T`` and ``M_Z = ∂_{q+2}^T``; a missing
    top degree gives an empty meta-check matrix.

    Raises:
        DegreeOutOfRange: If degrees ``q - 1`` or ``q + 1`` are not stored.
    """
    cx = cone.complex
    q = qubit_degree
    if q - 1 < cx.lo or q + 1 > cx.hi:
        raise DegreeOutOfRange(f"qubit degree {q} needs degrees {q - 1}..{q + 1} in {cx.lo}..{cx.hi}")
    hx = cx.boundary(q)
    hz = cx.boundary(q + 1).T
    meta = cx.boundary(q + 2).T
    return DeformedCssCode(hx, hz, meta, cone, q)
