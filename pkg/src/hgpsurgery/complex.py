"""Chain complexes over GF(2) with explicit degree ranges.

A complex stores a contiguous range of degrees ``lo..hi``. Outside that
range every space is zero-dimensional and every boundary is the canonical
zero map, so callers never have to special-case empty degrees.

Every coordinate also carries a hashable key. Tensor products pair keys,
and cones and direct sums keep them, so two complexes that are equal up to
a reordering of coordinates can be compared by matching keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .distance import (
    DEFAULT_BUDGET,
    INF,
    Distance,
    inf_mul,
    min_nontrivial_weight,
)
from .errors import DimensionMismatch, NotAComplex, SearchBudgetExceeded
from .gf2 import BinaryMatrix, BinaryVector, XorBasis, block_matrix, kernel_basis, kron


@dataclass
class Check:
    """Outcome of a validation: ``ok`` plus a human-readable detail.

    ``degree`` names the first offending degree when relevant.
    """

    ok: bool
    detail: str = ""
    degree: int | None = None
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


class ChainComplex:
    """A finite chain complex of GF(2) vector spaces.

    Args:
        lo: Lowest stored degree.
        dims: Dimensions of degrees ``lo, lo + 1, ...``.
        boundaries: Map from degree ``i`` to ``∂_i`` of shape
            ``dims(i - 1) x dims(i)``; missing entries are zero.
        name: Short name used in coordinate keys and labels.
        keys: Optional per-degree coordinate keys.
    """

    def __init__(
        self,
        lo: int,
        dims: Sequence[int],
        boundaries: dict[int, BinaryMatrix] | None = None,
        name: str = "C",
        keys: dict[int, list] | None = None,
        labels: dict[int, list[tuple[str, int]]] | None = None,
    ):
        self.lo = int(lo)
        self._dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in self._dims):
            raise DimensionMismatch("negative dimension")
        self.name = name
        self._bd: dict[int, BinaryMatrix] = {}
        for i, m in (boundaries or {}).items():
            want = (self.dim(i - 1), self.dim(i))
            if m.shape != want:
                raise DimensionMismatch(f"boundary {i} has shape {m.shape}, expected {want}")
            if not (self.lo < i <= self.hi) and not m.is_zero():
                raise DimensionMismatch(f"boundary {i} lies outside the degree range")
            self._bd[i] = m
        if keys is None:
            keys = {i: [(name, i, j) for j in range(self.dim(i))] for i in self.degrees}
        self._keys = keys
        if labels is None:
            labels = {i: [(f"{name}{i}", self.dim(i))] for i in self.degrees}
        self._labels = labels

    # basic accessors ---------------------------------------------------

    @classmethod
    def classical(cls, h: BinaryMatrix, name: str = "C") -> "ChainComplex":
        """Two-term complex ``bits -> checks`` with ``∂_1 = h`` (degrees 1, 0)."""
        return cls(0, (h.rows, h.cols), {1: h}, name=name)

    @property
    def hi(self) -> int:
        return self.lo + len(self._dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    def dim(self, i: int) -> int:
        if self.lo <= i <= self.hi:
            return self._dims[i - self.lo]
        return 0

    def boundary(self, i: int) -> BinaryMatrix:
        """``∂_i : C_i -> C_{i-1}``; the zero map when not stored."""
        m = self._bd.get(i)
        if m is None:
            return BinaryMatrix(self.dim(i - 1), self.dim(i))
        return m

    def keys(self, i: int) -> list:
        return list(self._keys.get(i, [])) if self.dim(i) else []

    def labels(self, i: int) -> list[tuple[str, int]]:
        """Named blocks ``(label, size)`` covering degree ``i`` in order."""
        return list(self._labels.get(i, [])) if self.dim(i) else []

    def block_offsets(self, i: int) -> dict[str, tuple[int, int]]:
        out, off = {}, 0
        for label, size in self.labels(i):
            out[label] = (off, size)
            off += size
        return out

    def with_name(self, name: str) -> "ChainComplex":
        """Copy with fresh keys and labels built from ``name``."""
        return ChainComplex(self.lo, self._dims, dict(self._bd), name=name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self.lo != other.lo or self._dims != other._dims:
            return False
        return all(self.boundary(i) == other.boundary(i) for i in self.degrees)

    def __repr__(self) -> str:
        dims = ", ".join(f"{i}:{self.dim(i)}" for i in self.degrees)
        return f"ChainComplex({self.name}; {dims})"

    # structure -----------------------------------------------------------

    def validate(self) -> Check:
        """Check that ``∂_{i-1} ∂_i = 0`` for every degree.

        A violation is reported at the degree ``i - 1`` of the outer map.
        """
        for i in range(self.lo + 2, self.hi + 1):
            if not (self.boundary(i - 1) @ self.boundary(i)).is_zero():
                return Check(False, f"∂_{i - 1} ∂_{i} is nonzero", i - 1)
        return Check(True)

    def require_valid(self) -> "ChainComplex":
        chk = self.validate()
        if not chk:
            raise NotAComplex(chk.detail)
        return self

    def cochain(self) -> "ChainComplex":
        """Dual complex with ``out_{-i} = C_i`` and ``out ∂_j = (∂_{1-j})^T``.

        Cohomology of the input at degree ``i`` is homology of the output
        at degree ``-i``, and applying this twice returns the input.
        """
        lo = -self.hi
        dims = tuple(reversed(self._dims))
        bd = {}
        for j in range(lo + 1, -self.lo + 1):
            bd[j] = self.boundary(-j + 1).T
        keys = {-i: self.keys(i) for i in self.degrees}
        labels = {-i: self.labels(i) for i in self.degrees}
        return ChainComplex(lo, dims, bd, name=self.name, keys=keys, labels=labels)

    @staticmethod
    def direct_sum(*cxs: "ChainComplex", name: str | None = None) -> "ChainComplex":
        """Degree-wise direct sum, blocks in argument order."""
        if not cxs:
            raise ValueError("need at least one complex")
        lo = min(c.lo for c in cxs)
        hi = max(c.hi for c in cxs)
        dims = [sum(c.dim(i) for c in cxs) for i in range(lo, hi + 1)]
        bd = {}
        for i in range(lo + 1, hi + 1):
            grid = [
                [c.boundary(i) if s == t else BinaryMatrix(a.dim(i - 1), c.dim(i)) for t, c in enumerate(cxs)]
                for s, a in enumerate(cxs)
            ]
            bd[i] = block_matrix(grid)
        keys = {i: [k for c in cxs for k in c.keys(i)] for i in range(lo, hi + 1)}
        for i, ks in keys.items():
            if len(set(ks)) != len(ks):
                keys = {
                    i: [(t, k) for t, c in enumerate(cxs) for k in c.keys(i)]
                    for i in range(lo, hi + 1)
                }
                break
        labels = {i: [lab for c in cxs for lab in c.labels(i)] for i in range(lo, hi + 1)}
        name = name or "+".join(c.name for c in cxs)
        return ChainComplex(lo, dims, bd, name=name, keys=keys, labels=labels)


# homology ------------------------------------------------------------------


@dataclass
class HomologyReport:
    """Homology of a complex at one degree.

    Attributes:
        degree: The degree ``i``.
        dim: ``dim ker ∂_i - rank ∂_{i+1}``.
        representatives: Cycles whose classes form a basis of ``H_i``.
        systolic: Minimum weight of a nontrivial cycle, or ``None`` if not computed.
        cosystolic: Minimum weight of a nontrivial cocycle, or ``None``.
    """

    degree: int
    dim: int
    representatives: list[BinaryVector]
    systolic: Distance | None = None
    cosystolic: Distance | None = None

    @property
    def systolic_distance(self):
        return None if self.systolic is None else self.systolic.value

    @property
    def cosystolic_distance(self):
        return None if self.cosystolic is None else self.cosystolic.value


def homology_dim(cx: ChainComplex, i: int) -> int:
    return cx.dim(i) - cx.boundary(i).rank() - cx.boundary(i + 1).rank()


def homology_representatives(cx: ChainComplex, i: int) -> list[BinaryVector]:
    """Kernel basis vectors of ``∂_i`` independent modulo ``im ∂_{i+1}``."""
    span = XorBasis()
    for c in cx.boundary(i + 1).col_ints() if cx.dim(i + 1) else []:
        span.insert(c)
    reps = []
    for v in kernel_basis(cx.boundary(i)):
        if span.insert(v.to_int()):
            reps.append(v)
    return reps


def cycle_distance(
    cx: ChainComplex,
    i: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    on_budget: str = "raise",
    method: str = "auto",
) -> Distance:
    """Minimum weight of a cycle at degree ``i`` that is not a boundary.

    Args:
        on_budget: ``"raise"`` to propagate :class:`SearchBudgetExceeded`,
            ``"bound"`` to return an inexact :class:`Distance` instead.
    """
    try:
        v = min_nontrivial_weight(cx.boundary(i), cx.boundary(i + 1), budget, threads, method)
    except SearchBudgetExceeded as exc:
        if on_budget == "raise":
            raise
        return Distance(exc.lower_bound, exact=False, budget=budget)
    return Distance(v)


def cocycle_distance(cx: ChainComplex, i: int, **kw) -> Distance:
    """Minimum weight of a cocycle at degree ``i`` that is not a coboundary."""
    return cycle_distance(cx.cochain(), -i, **kw)


def homology(
    cx: ChainComplex,
    i: int,
    distances: bool = True,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    on_budget: str = "raise",
) -> HomologyReport:
    """Dimension, representatives and (optionally) distances of ``H_i``."""
    reps = homology_representatives(cx, i)
    rep = HomologyReport(i, len(reps), reps)
    if distances:
        kw = dict(budget=budget, threads=threads, on_budget=on_budget)
        rep.systolic = cycle_distance(cx, i, **kw)
        rep.cosystolic = cocycle_distance(cx, i, **kw)
    return rep


# tensor products -----------------------------------------------------------


def tensor_blocks(cx: ChainComplex, dx: ChainComplex, k: int) -> list[tuple[int, int, int, int]]:
    """Blocks ``(p, q, offset, size)`` of ``(C ⊗ D)_k`` in descending ``p``."""
    out, off = [], 0
    for p in range(cx.hi, cx.lo - 1, -1):
        q = k - p
        if dx.lo <= q <= dx.hi:
            size = cx.dim(p) * dx.dim(q)
            out.append((p, q, off, size))
            off += size
    return out


def tensor_product(cx: ChainComplex, dx: ChainComplex, name: str | None = None) -> ChainComplex:
    """Tensor product with ``∂(a ⊗ b) = ∂a ⊗ b + a ⊗ ∂b``.

    Inside a block ``C_p ⊗ D_q`` the coordinate of ``(a, b)`` is
    ``a * dim D_q + b``.
    """
    lo, hi = cx.lo + dx.lo, cx.hi + dx.hi
    dims = [sum(s for *_, s in tensor_blocks(cx, dx, k)) for k in range(lo, hi + 1)]
    bd = {}
    for k in range(lo + 1, hi + 1):
        grid = []
        for rp, rq, _, rsize in tensor_blocks(cx, dx, k - 1):
            line = []
            for p, q, _, size in tensor_blocks(cx, dx, k):
                if (rp, rq) == (p - 1, q):
                    line.append(kron(cx.boundary(p), BinaryMatrix.identity(dx.dim(q))))
                elif (rp, rq) == (p, q - 1):
                    line.append(kron(BinaryMatrix.identity(cx.dim(p)), dx.boundary(q)))
                else:
                    line.append(BinaryMatrix(rsize, size))
            grid.append(line)
        bd[k] = block_matrix(grid) if grid and grid[0] else BinaryMatrix(dims[k - 1 - lo], dims[k - lo])
    keys, labels = {}, {}
    for k in range(lo, hi + 1):
        keys[k] = [
            (ka, kb)
            for p, q, _, _ in tensor_blocks(cx, dx, k)
            for ka in cx.keys(p)
            for kb in dx.keys(q)
        ]
        labels[k] = [
            (f"{cx.name}{p}⊗{dx.name}{q}", size) for p, q, _, size in tensor_blocks(cx, dx, k)
        ]
    return ChainComplex(lo, dims, bd, name=name or f"{cx.name}⊗{dx.name}", keys=keys, labels=labels)


def kunneth_check(cx: ChainComplex, dx: ChainComplex) -> Check:
    """Compare ``dim H_k(C ⊗ D)`` with ``Σ_{p+q=k} dim H_p(C) dim H_q(D)``."""
    prod = tensor_product(cx, dx)
    hc = {p: homology_dim(cx, p) for p in cx.degrees}
    hd = {q: homology_dim(dx, q) for q in dx.degrees}
    table = {}
    for k in prod.degrees:
        direct = homology_dim(prod, k)
        formula = sum(hc[p] * hd.get(k - p, 0) for p in cx.degrees)
        table[k] = (direct, formula)
        if direct != formula:
            return Check(False, f"degree {k}: direct {direct} vs formula {formula}", k, table)
    return Check(True, data=table)


def product_distance_formula(cx: ChainComplex, dx: ChainComplex, k: int, **kw) -> float:
    """``min_{p+q=k} d_p(C) d_q(D)`` for a two-term ``D``.

    Degrees with zero homology contribute ``inf``.
    """
    if dx.hi - dx.lo > 1:
        raise ValueError("the product formula needs a two-term second factor")
    best = INF
    for q in dx.degrees:
        p = k - q
        dp = cycle_distance(cx, p, **kw).value if homology_dim(cx, p) else INF
        dq = cycle_distance(dx, q, **kw).value if homology_dim(dx, q) else INF
        best = min(best, inf_mul(dp, dq))
    return best


def product_distance_check(cx: ChainComplex, dx: ChainComplex, k: int, **kw) -> Check:
    """Compare the product formula with a direct search on ``C ⊗ D``."""
    formula = product_distance_formula(cx, dx, k, **kw)
    direct = cycle_distance(tensor_product(cx, dx), k, **kw).value
    ok = formula == direct
    detail = "" if ok else f"degree {k}: direct {direct} vs formula {formula}"
    return Check(ok, detail, None if ok else k, {"direct": direct, "formula": formula})
