"""Minimum-weight searches for nontrivial (co)homology classes.

Both engines look for the lightest ``x`` with ``A x = 0`` and ``L x != 0``,
where ``A`` is the outgoing boundary and the rows of ``L`` are functionals
that vanish exactly on the trivial classes. Columns are packed into Python
integers (syndrome bits low, functional bits high) so XOR does the work.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .errors import SearchBudgetExceeded
from .gf2 import BinaryMatrix, XorBasis, kernel_basis

INF = math.inf
DEFAULT_BUDGET = 1 << 26
# beyond this kernel dimension the weight-ordered search is preferred
GRAY_MAX_DIM = 18


def inf_mul(a, b):
    """Product on ``N ∪ {inf}``; ``inf * 0`` is undefined and raises."""
    if (a == INF and b == 0) or (b == INF and a == 0):
        raise ValueError("inf * 0 is undefined")
    if a == INF or b == INF:
        return INF
    return a * b


def inf_min(*values):
    return min(values)


@dataclass(frozen=True)
class Distance:
    """A distance value with a marker for whether it is exact.

    ``value`` is ``math.inf`` when no nontrivial class exists. When
    ``exact`` is false, ``value`` is only a proven lower bound.
    """

    value: float
    exact: bool = True
    budget: int | None = None

    def __str__(self):
        v = "inf" if self.value == INF else str(int(self.value))
        return v if self.exact else f">={v}"

    def at_least(self, bound) -> bool | None:
        """``True``/``False`` when decided, ``None`` when inconclusive."""
        if self.value >= bound:
            return True
        return False if self.exact else None


def nontrivial_functionals(out_map: BinaryMatrix, in_map: BinaryMatrix) -> list[int]:
    """Functionals detecting classes of ``ker out_map / im in_map``.

    Returns integer rows ``l`` (over the middle space) such that, for ``x``
    in ``ker out_map``, ``x`` is a boundary iff every ``l . x`` vanishes.
    The count equals the homology dimension.
    """
    span = XorBasis()
    for r in out_map.row_ints():
        span.insert(r)
    rows = []
    for v in kernel_basis(in_map.T):
        vi = v.to_int()
        if span.insert(vi):
            rows.append(vi)
    return rows


def _column_words(out_map: BinaryMatrix, funcs: list[int]):
    """Pack column ``j`` as ``syndrome | (functional bits << m)``."""
    m = out_map.rows
    cols = out_map.col_ints() if out_map.rows else [0] * out_map.cols
    words = []
    for j, c in enumerate(cols):
        lbits = 0
        for t, f in enumerate(funcs):
            if (f >> j) & 1:
                lbits |= 1 << t
        words.append(c | (lbits << m))
    return words, (1 << m) - 1


def _gray_chunk(args):
    basis, lmask, prefix, nbits = args
    cur_x, cur_v = prefix
    best = INF
    if cur_v & lmask:
        best = bin(cur_x).count("1")
    for s in range(1, 1 << nbits):
        k = (s & -s).bit_length() - 1
        bx, bv = basis[k]
        cur_x ^= bx
        cur_v ^= bv
        if cur_v & lmask:
            w = bin(cur_x).count("1")
            if w < best:
                best = w
                if best == 1:
                    break
    return best


def gray_search(out_map: BinaryMatrix, funcs: list[int], threads: int = 1) -> float:
    """Walk all of ``ker out_map`` in Gray-code order.

    Each step XORs one kernel basis vector, so the cost per vector is O(1)
    word operations. With ``threads > 1`` the walk is split over the top
    basis vectors into independent chunks.
    """
    ker = kernel_basis(out_map)
    if not funcs or not ker:
        return INF
    shifted = []
    for v in ker:
        x = v.to_int()
        lbits = 0
        for t, f in enumerate(funcs):
            if bin(f & x).count("1") & 1:
                lbits |= 1 << t
        shifted.append((x, lbits))
    lmask = (1 << len(funcs)) - 1
    split = 0
    if threads > 1:
        split = min(len(shifted) - 1, max(0, (threads - 1).bit_length() + 2))
    low, high = shifted[: len(shifted) - split], shifted[len(shifted) - split :]
    tasks = []
    for mask in range(1 << split):
        x = v = 0
        for i, (bx, bv) in enumerate(high):
            if (mask >> i) & 1:
                x ^= bx
                v ^= bv
        tasks.append((low, lmask, (x, v), len(low)))
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_gray_chunk, tasks))
    else:
        results = [_gray_chunk(t) for t in tasks]
    return min(results)


def weight_ordered_search(
    out_map: BinaryMatrix, funcs: list[int], budget: int = DEFAULT_BUDGET, max_weight=None
) -> float:
    """Meet-in-the-middle search in increasing weight.

    For weight ``w`` the subsets of size ``w // 2`` are hashed by syndrome
    and matched against subsets of size ``w - w // 2``. Because lighter
    weights have already been excluded, any colliding pair that overlaps
    would give a lighter solution, so every match is a genuine weight-``w``
    solution.

    Raises:
        SearchBudgetExceeded: If more than ``budget`` subsets would be
            generated; ``lower_bound`` is the first weight not yet excluded.
    """
    if not funcs:
        return INF
    words, smask = _column_words(out_map, funcs)
    n = len(words)
    if n == 0:
        return INF
    spent = 0
    table_size = -1
    table: dict[int, set[int]] = {}
    shift = out_map.rows
    cap = n if max_weight is None else min(n, max_weight)
    for w in range(1, cap + 1):
        a, b = w // 2, w - w // 2
        cost = (math.comb(n, a) if a != table_size else 0) + math.comb(n, b)
        if spent + cost > budget:
            raise SearchBudgetExceeded(w, budget)
        spent += cost
        if a != table_size:
            table = {}
            for sub in combinations(words, a):
                acc = 0
                for s in sub:
                    acc ^= s
                table.setdefault(acc & smask, set()).add(acc >> shift)
            table_size = a
        for sub in combinations(words, b):
            acc = 0
            for s in sub:
                acc ^= s
            partners = table.get(acc & smask)
            if partners and (len(partners) > 1 or (acc >> shift) not in partners):
                return w
    if max_weight is not None and cap < n:
        raise SearchBudgetExceeded(cap + 1, budget)
    return INF


def min_nontrivial_weight(
    out_map: BinaryMatrix,
    in_map: BinaryMatrix,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    method: str = "auto",
) -> float:
    """Minimum weight of ``x`` in ``ker out_map`` with ``x`` not in ``im in_map``.

    Args:
        out_map: Outgoing boundary (``m x n``).
        in_map: Incoming boundary (``n x p``).
        budget: Maximum number of enumerated vectors.
        threads: Worker processes for the Gray-code walk.
        method: ``"gray"``, ``"weight"`` or ``"auto"``.

    Returns:
        The minimum weight, or ``math.inf`` if homology is trivial.

    Raises:
        SearchBudgetExceeded: If the search cannot finish within ``budget``.
    """
    if out_map.cols != in_map.rows:
        raise ValueError("boundary shapes do not compose")
    funcs = nontrivial_functionals(out_map, in_map)
    if not funcs:
        return INF
    kdim = out_map.cols - out_map.rank()
    if method == "auto":
        method = "gray" if kdim <= GRAY_MAX_DIM and (1 << kdim) <= budget else "weight"
    if method == "gray":
        if (1 << kdim) > budget:
            raise SearchBudgetExceeded(1, budget)
        return gray_search(out_map, funcs, threads)
    return weight_ordered_search(out_map, funcs, budget)


def brute_force_min_weight(out_map: BinaryMatrix, in_map: BinaryMatrix, max_weight: int | None = None):
    """Reference oracle: test every vector in order of weight.

    Independent of the engines above; uses fresh matrix-vector products
    and a rank test for membership in the image.
    """
    from .gf2 import BinaryVector, in_column_span

    n = out_map.cols
    top = n if max_weight is None else max_weight
    for w in range(1, top + 1):
        for supp in combinations(range(n), w):
            x = BinaryVector.from_support(n, supp)
            if out_map.rows and not out_map.matvec(x).is_zero():
                continue
            if in_map.cols == 0 or not in_column_span(in_map, x):
                return w
    return INF
