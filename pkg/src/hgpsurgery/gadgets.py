"""Surgery gadgets: small graph complexes mapped onto a classical code.

A gadget for a codeword ``c`` of a classical code ``C`` (degrees 1, 0) is a
three-term complex ``G`` with vertices in degree 1, edges in degree 0 and
faces in degree -1, plus a chain map ``g : G -> C``. Vertices map one-to-one
onto the support of ``c``. Edges map to checks so that the chain-map square
commutes: each check's incident support vertices are paired up and joined
by shortest paths in the graph.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .complex import ChainComplex, homology_dim
from .cone import ChainMap, require_chain_map
from .errors import CheegerBudgetExceeded, GaugeQubits, NotACodeword
from .gf2 import BinaryMatrix, BinaryVector, kernel_basis

FAMILIES = ("path", "cycle", "complete")
CHEEGER_MAX_COLS = 22


@dataclass
class SurgeryGadget:
    """A gadget complex together with its chain map into the code.

    Attributes:
        code: Target classical complex (degree 1 bits, degree 0 checks).
        codeword: The measured codeword ``c``.
        family: Graph family name.
        graph: The gadget complex ``G``.
        chain_map: ``g : G -> code``.
        vertex_bits: Bit of ``c`` assigned to each vertex.
        edges: Vertex pairs, one per edge.
        faces: Edge index tuples, one per face.
    """

    code: ChainComplex
    codeword: BinaryVector
    family: str
    graph: ChainComplex
    chain_map: ChainMap
    vertex_bits: list[int]
    edges: list[tuple[int, int]]
    faces: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (self.graph.dim(1), self.graph.dim(0), self.graph.dim(-1))

    @property
    def size(self) -> int:
        return sum(self.sizes)

    def renamed(self, name: str) -> "SurgeryGadget":
        graph = self.graph.with_name(name)
        cmap = ChainMap(graph, self.code, {i: self.chain_map.at(i) for i in (1, 0, -1)})
        return SurgeryGadget(
            self.code, self.codeword, self.family, graph, cmap,
            self.vertex_bits, self.edges, self.faces,
        )


# graph families -------------------------------------------------------------


def _check_pairs(h: BinaryMatrix, support: list[int]) -> list[list[int]]:
    """For each check, the vertices (positions in ``support``) it touches."""
    dense = h.to_dense()
    return [[v for v, j in enumerate(support) if dense[r, j]] for r in range(h.rows)]


def _order_vertices(n: int, touched: list[list[int]]) -> list[int]:
    """Order vertices so that checks touching two of them are neighbours.

    If the graph formed by two-vertex checks is a single path or cycle the
    walk follows it; otherwise the natural order is kept.
    """
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for s in touched:
        if len(s) == 2 and s[0] != s[1]:
            adj[s[0]].add(s[1])
            adj[s[1]].add(s[0])
    if n < 3 or any(len(a) > 2 for a in adj.values()):
        return list(range(n))
    ends = [v for v in range(n) if len(adj[v]) <= 1]
    start = ends[0] if ends else 0
    order, prev, cur = [start], None, start
    while True:
        nxt = sorted(adj[cur] - {prev} - set(order))
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order if len(order) == n else list(range(n))


def family_graph(family: str, n: int, faces: bool = True):
    """Edges and faces of a family graph on vertices ``0..n-1``.

    Faces are given as tuples of edge indices.
    """
    if family == "path":
        return [(i, i + 1) for i in range(n - 1)], []
    if family == "cycle":
        if n < 2:
            raise ValueError("a cycle needs at least two vertices")
        edges = [(i, (i + 1) % n) for i in range(n)]
        return edges, ([tuple(range(n))] if faces else [])
    if family == "complete":
        edges = list(combinations(range(n), 2))
        index = {e: i for i, e in enumerate(edges)}
        tri = []
        if faces:
            for j, k in combinations(range(1, n), 2):
                tri.append((index[(0, j)], index[(0, k)], index[(j, k)]))
        return edges, tri
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _shortest_path(n: int, edges: list[tuple[int, int]], usage: list[int], a: int, b: int) -> list[int]:
    """Edge indices of a BFS shortest path; parallel edges are used round-robin."""
    nbrs: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
    for e, (u, v) in enumerate(edges):
        nbrs[u].append((v, e))
        nbrs[v].append((u, e))
    prev: dict[int, tuple[int, int] | None] = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for v, e in sorted(nbrs[u]):
            if v not in prev:
                prev[v] = (u, e)
                queue.append(v)
    if b not in prev:
        raise ValueError("gadget graph is disconnected")
    path, cur = [], b
    while prev[cur] is not None:
        u, e = prev[cur]
        # among parallel edges between u and cur pick the least used
        options = [f for f, (x, y) in enumerate(edges) if {x, y} == {u, cur}]
        e = min(options, key=lambda f: (usage[f], f))
        path.append(e)
        cur = u
    return path


def graph_complex(n: int, edges, faces, name: str = "G") -> ChainComplex:
    """Complex ``vertices -> edges -> faces`` in degrees 1, 0, -1."""
    d1 = BinaryMatrix.from_supports(len(edges), n, [list(e) for e in edges])
    d0 = BinaryMatrix.from_supports(len(faces), len(edges), [list(f) for f in faces])
    return ChainComplex(-1, (len(faces), len(edges), n), {1: d1, 0: d0}, name=name)


def gadget_from_graph(
    code: ChainComplex,
    codeword: BinaryVector,
    vertex_bits: list[int],
    edges,
    faces,
    family: str = "custom",
    name: str = "G",
) -> SurgeryGadget:
    """Build the chain map for a given graph and validate it."""
    h = code.boundary(1)
    n = len(vertex_bits)
    graph = graph_complex(n, edges, faces, name)
    g1_dense = np.zeros((code.dim(1), n), dtype=np.uint8)
    for v, j in enumerate(vertex_bits):
        g1_dense[j, v] = 1
    g1 = BinaryMatrix.from_dense(g1_dense, shape=g1_dense.shape)
    touched = _check_pairs(h, vertex_bits)
    g0_dense = np.zeros((code.dim(0), len(edges)), dtype=np.uint8)
    usage = [0] * len(edges)
    for r, verts in enumerate(touched):
        for a, b in zip(verts[0::2], verts[1::2]):
            for e in _shortest_path(n, edges, usage, a, b):
                g0_dense[r, e] ^= 1
                usage[e] += 1
    g0 = BinaryMatrix.from_dense(g0_dense, shape=g0_dense.shape)
    cmap = require_chain_map(ChainMap(graph, code, {1: g1, 0: g0}))
    return SurgeryGadget(code, codeword, family, graph, cmap, list(vertex_bits), list(edges), list(faces))


def synthesize(
    code: ChainComplex,
    codeword: BinaryVector,
    family: str = "path",
    faces: bool = True,
    allow_gauge: bool = False,
    name: str = "G",
) -> SurgeryGadget:
    """Build a gadget of the given family for ``codeword``.

    Args:
        code: Classical code as a complex with ``∂_1 = H``.
        codeword: Nonzero vector with ``H c = 0``.
        family: ``"path"``, ``"cycle"`` or ``"complete"``.
        faces: Whether to fill cycles with faces.
        allow_gauge: Accept a gadget whose edge homology is nonzero.
        name: Name of the gadget complex.

    Raises:
        NotACodeword: If ``codeword`` is zero or violates a check.
        GaugeQubits: If the gadget leaves unfilled cycles and
            ``allow_gauge`` is false.
    """
    h = code.boundary(1)
    if codeword.length != code.dim(1):
        raise NotACodeword(f"codeword length {codeword.length} vs {code.dim(1)} bits")
    if codeword.is_zero() or not h.matvec(codeword).is_zero():
        raise NotACodeword("vector is zero or violates a parity check")
    support = codeword.support()
    touched = _check_pairs(h, support)
    order = _order_vertices(len(support), touched) if family != "complete" else list(range(len(support)))
    vertex_bits = [support[v] for v in order]
    edges, face_list = family_graph(family, len(support), faces)
    gadget = gadget_from_graph(code, codeword, vertex_bits, edges, face_list, family, name)
    if homology_dim(gadget.graph, 0) and not allow_gauge:
        raise GaugeQubits(
            f"{family} gadget has {homology_dim(gadget.graph, 0)} unfilled cycle(s); "
            "pass allow_gauge to accept them"
        )
    return gadget


# expansion ----------------------------------------------------------------


def _gray_masks(cols: list[int], k: int):
    """Yield ``(mask, image)`` over all subsets of the first ``k`` columns."""
    mask = image = 0
    yield mask, image
    for s in range(1, 1 << k):
        j = (s & -s).bit_length() - 1
        mask ^= 1 << j
        image ^= cols[j]
        yield mask, image


def cheeger_constant(m: BinaryMatrix, max_cols: int = CHEEGER_MAX_COLS):
    """Exact ``min |M v| / min(|v|, n - |v|)`` over ``v`` not 0 or all-ones.

    Args:
        m: Matrix whose columns are indexed by the vertex set.
        max_cols: Enumeration limit on the number of columns.

    Returns:
        A :class:`~fractions.Fraction`, or ``math.inf`` if no admissible
        ``v`` exists.

    Raises:
        CheegerBudgetExceeded: If ``m`` has more than ``max_cols`` columns.
    """
    n = m.cols
    if n > max_cols:
        raise CheegerBudgetExceeded(0, max_cols, f"{n} columns exceed the limit of {max_cols}")
    if n < 2:
        return math.inf
    cols = m.col_ints() if m.rows else [0] * n
    total = 0
    for c in cols:
        total ^= c
    # when M·1 = 0 a set and its complement have the same ratio
    k = n - 1 if total == 0 else n
    full = (1 << n) - 1
    best_num, best_den = None, 1
    for mask, image in _gray_masks(cols, k):
        size = bin(mask).count("1")
        if mask == 0 or mask == full:
            continue
        den = min(size, n - size)
        num = bin(image).count("1")
        if best_num is None or num * best_den < best_num * den:
            best_num, best_den = num, den
    return math.inf if best_num is None else Fraction(best_num, best_den)


def cheeger_oracle(m: BinaryMatrix):
    """Reference Cheeger constant by subset size with fresh products."""
    n = m.cols
    best = math.inf
    for size in range(1, n):
        for supp in combinations(range(n), size):
            v = BinaryVector.from_support(n, supp)
            ratio = Fraction(m.matvec(v).weight, min(size, n - size))
            best = min(best, ratio)
    return best


def relative_cheeger(m: BinaryMatrix, t: int, subset, max_cols: int = CHEEGER_MAX_COLS):
    """Relative expansion ``min |M v| / min(t, |v ∩ P|, |P \\ v|)``.

    Vectors with a zero denominator are skipped; an empty ``P`` gives ``inf``.
    """
    n = m.cols
    if n > max_cols:
        raise CheegerBudgetExceeded(0, max_cols, f"{n} columns exceed the limit of {max_cols}")
    pmask = 0
    for v in subset:
        pmask |= 1 << v
    psize = bin(pmask).count("1")
    if psize == 0 or t <= 0:
        return math.inf
    cols = m.col_ints() if m.rows else [0] * n
    full = (1 << n) - 1
    best_num, best_den = None, 1
    for mask, image in _gray_masks(cols, n):
        if mask == 0 or mask == full:
            continue
        inside = bin(mask & pmask).count("1")
        den = min(t, inside, psize - inside)
        if den == 0:
            continue
        num = bin(image).count("1")
        if best_num is None or num * best_den < best_num * den:
            best_num, best_den = num, den
    return math.inf if best_num is None else Fraction(best_num, best_den)


# condition report -------------------------------------------------------------


def size_bound(weight: int) -> int:
    """Reference size ``|c| log2(|c|)^3`` (log floored at 1)."""
    return math.ceil(weight * max(1.0, math.log2(max(weight, 1))) ** 3)


@dataclass
class GadgetReport:
    """Per-condition verdicts for a gadget.

    Attributes:
        expansion: Cheeger value used for the expansion condition.
        expansion_ok: Expansion is at least one.
        acyclic_ok: Edge and face homology vanish.
        kernel_ok: Vertex homology is one-dimensional, spanned by
            all-ones, which maps onto the codeword.
        sparsity: Largest row or column weight among the gadget maps.
        sparse_ok: ``g_1`` is 1-sparse and ``sparsity`` is within the limit.
        size: Total gadget dimension.
        size_limit: Reference size bound.
        size_ok: ``size <= size_limit``.
    """

    mode: str
    expansion: object
    expansion_ok: bool
    h0_dim: int
    hm1_dim: int
    acyclic_ok: bool
    h1_dim: int
    kernel_ok: bool
    sparsity: int
    g1_one_sparse: bool
    sparse_ok: bool
    size: int
    size_limit: int
    size_ok: bool

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "expansion": self.expansion_ok,
            "acyclic": self.acyclic_ok,
            "kernel": self.kernel_ok,
            "sparsity": self.sparse_ok,
            "size": self.size_ok,
        }

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def failures(self) -> list[str]:
        return [k for k, ok in self.flags.items() if not ok]


def _max_weight(m: BinaryMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(max(m.row_weights().max(), m.col_weights().max()))


def verify_conditions(
    gadget: SurgeryGadget,
    mode: str = "strict",
    t: int | None = None,
    subset=None,
    max_weight: int | None = None,
    max_cols: int = CHEEGER_MAX_COLS,
) -> GadgetReport:
    """Evaluate the five gadget conditions.

    Args:
        gadget: The gadget to check.
        mode: ``"strict"`` uses the Cheeger constant, ``"relative"`` the
            relative expansion with parameter ``t`` over ``subset``.
        t: Relative expansion parameter (defaults to the code distance proxy
            ``|c|``).
        subset: Vertex subset for relative mode; defaults to vertices with
            nonzero image.
        max_weight: Optional limit for the sparsity condition.
        max_cols: Cheeger enumeration limit.
    """
    graph, g = gadget.graph, gadget.chain_map
    d1 = graph.boundary(1)
    if mode == "strict":
        beta = cheeger_constant(d1, max_cols)
    elif mode == "relative":
        if subset is None:
            g1 = g.at(1)
            subset = [v for v in range(graph.dim(1)) if not g1.column(v).is_zero()]
        beta = relative_cheeger(d1, t if t is not None else gadget.codeword.weight, subset, max_cols)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    h0 = homology_dim(graph, 0)
    hm1 = homology_dim(graph, -1)
    ker = kernel_basis(d1)
    ones = BinaryVector.ones(graph.dim(1))
    kernel_ok = len(ker) == 1 and ker[0] == ones and g.at(1).matvec(ones) == gadget.codeword
    g1 = g.at(1)
    one_sparse = _max_weight(g1) <= 1
    w = max(_max_weight(d1), _max_weight(graph.boundary(0)), _max_weight(g.at(0)), _max_weight(g1))
    size = gadget.size
    limit = size_bound(gadget.codeword.weight)
    return GadgetReport(
        mode=mode,
        expansion=beta,
        expansion_ok=beta >= 1,
        h0_dim=h0,
        hm1_dim=hm1,
        acyclic_ok=h0 == 0 and hm1 == 0,
        h1_dim=homology_dim(graph, 1),
        kernel_ok=kernel_ok,
        sparsity=w,
        g1_one_sparse=one_sparse,
        sparse_ok=one_sparse and (max_weight is None or w <= max_weight),
        size=size,
        size_limit=limit,
        size_ok=size <= limit,
    )
