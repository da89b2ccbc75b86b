"""Built-in classical codes, alist files and code specifications.

A code specification is a short string:

* ``hamming(r)``: Hamming code whose columns are the binary expansions of
  ``1 .. 2^r - 1``; ``hamming`` and ``hamming-7-4`` mean ``r = 3``.
* ``rep(n)``: repetition code with checks ``x_i + x_{i+1}``.
* ``cyclic-rep(n)``: repetition code with the wrap-around check added.
* ``transpose(spec)`` or ``transpose-of(spec)``: the code whose parity-check matrix is ``H^T``.
* ``matrix:110;011``: rows separated by semicolons.
* ``alist:path``: a MacKay alist file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .gf2 import BinaryMatrix


def hamming(r: int = 3) -> BinaryMatrix:
    """``r x (2^r - 1)`` Hamming check matrix; column ``j`` is ``j + 1`` in binary."""
    n = (1 << r) - 1
    dense = [[((j + 1) >> i) & 1 for j in range(n)] for i in range(r)]
    return BinaryMatrix.from_dense(dense)


def repetition(n: int) -> BinaryMatrix:
    """``(n - 1) x n`` checks ``x_i + x_{i+1}``."""
    dense = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        dense[i, i] = dense[i, i + 1] = 1
    return BinaryMatrix.from_dense(dense, shape=(n - 1, n))


def cyclic_repetition(n: int) -> BinaryMatrix:
    """``n x n`` checks ``x_i + x_{i+1 mod n}``."""
    eye = np.eye(n, dtype=np.uint8)
    return BinaryMatrix.from_dense((eye + np.roll(eye, 1, axis=1)) % 2)


# alist ------------------------------------------------------------------------


def parse_alist(text: str) -> BinaryMatrix:
    """Parse MacKay alist text into a parity-check matrix.

    The row-perspective block is optional; when present it must agree with
    the column block. Zero entries pad short lists and are ignored.

    Raises:
        InputError: On malformed or inconsistent input, naming the line.
    """
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]

    def ints(lineno, toks):
        try:
            return [int(t) for t in toks]
        except ValueError as exc:
            raise InputError(f"alist line {lineno}: non-integer entry") from exc

    if len(lines) < 2 or not lines[0][1]:
        raise InputError("alist needs at least four header lines")
    # missing lines past the end read as empty lists; the weights catch a mismatch
    lines += [(len(lines) + k + 1, []) for k in range(max(0, 4 - len(lines)))]
    (l1, t1), (l2, t2), (l3, t3), (l4, t4) = lines[:4]
    head = ints(l1, t1)
    if len(head) != 2:
        raise InputError(f"alist line {l1}: expected 'n m'")
    n, m = head
    if n < 0 or m < 0:
        raise InputError(f"alist line {l1}: negative size")
    wmax = ints(l2, t2)
    if len(wmax) != 2:
        raise InputError(f"alist line {l2}: expected two maximum weights")
    col_w, row_w = ints(l3, t3), ints(l4, t4)
    if len(col_w) != n or len(row_w) != m:
        raise InputError(f"alist lines {l3}-{l4}: weight list lengths do not match n={n}, m={m}")
    if sum(col_w) != sum(row_w):
        raise InputError("alist column and row weights have different totals")
    if (col_w and max(col_w) != wmax[0]) or (row_w and max(row_w) != wmax[1]):
        raise InputError(f"alist line {l2}: maximum weights disagree with the weight lists")
    body = lines[4:]
    if any(toks for _, toks in body[n + m :]):
        raise InputError(f"alist has more than {n + m} index lines")
    if len(body) < n:
        raise InputError(f"alist has {len(body)} index lines, expected {n} or {n + m}")
    has_rows = any(toks for _, toks in body[n:])
    last = body[-1][0] if body else l4
    body = body[: n + m] + [(last + k + 1, []) for k in range(max(0, n + m - len(body)))]
    if not has_rows:
        body = body[:n]
    dense = np.zeros((m, n), dtype=np.uint8)
    for j, (lineno, toks) in enumerate(body[:n]):
        idx = [v for v in ints(lineno, toks) if v != 0]
        if len(idx) != col_w[j]:
            raise InputError(f"alist line {lineno}: column {j + 1} lists {len(idx)} entries, weight says {col_w[j]}")
        for r in idx:
            if not 1 <= r <= m:
                raise InputError(f"alist line {lineno}: row index {r} out of range")
            dense[r - 1, j] = 1
    if has_rows:
        check = np.zeros_like(dense)
        for i, (lineno, toks) in enumerate(body[n:]):
            idx = [v for v in ints(lineno, toks) if v != 0]
            if len(idx) != row_w[i]:
                raise InputError(f"alist line {lineno}: row {i + 1} lists {len(idx)} entries, weight says {row_w[i]}")
            for c in idx:
                if not 1 <= c <= n:
                    raise InputError(f"alist line {lineno}: column index {c} out of range")
                check[i, c - 1] = 1
        if not np.array_equal(check, dense):
            raise InputError("alist row and column blocks disagree")
    return BinaryMatrix.from_dense(dense, shape=(m, n))


def emit_alist(h: BinaryMatrix) -> str:
    """Render a matrix as alist text with both index blocks, zero padded."""
    dense = h.to_dense()
    m, n = h.shape
    col_w = dense.sum(axis=0).astype(int) if m else np.zeros(n, dtype=int)
    row_w = dense.sum(axis=1).astype(int) if n else np.zeros(m, dtype=int)
    cmax = int(col_w.max()) if n else 0
    rmax = int(row_w.max()) if m else 0
    out = [f"{n} {m}", f"{cmax} {rmax}", " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    for j in range(n):
        idx = [r + 1 for r in np.flatnonzero(dense[:, j])]
        out.append(" ".join(map(str, idx + [0] * (cmax - len(idx)))))
    for i in range(m):
        idx = [c + 1 for c in np.flatnonzero(dense[i])]
        out.append(" ".join(map(str, idx + [0] * (rmax - len(idx)))))
    return "\n".join(out) + "\n"


def read_alist(path) -> BinaryMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read alist file {path}: {exc}") from exc
    return parse_alist(text)


def write_alist(h: BinaryMatrix, path) -> None:
    Path(path).write_text(emit_alist(h))


# code specifications ----------------------------------------------------------

_CALL = re.compile(r"^([a-z][a-z0-9-]*)\s*(?:\((.*)\))?$")


@dataclass(frozen=True)
class CodeSpec:
    """A parsed code specification; ``matrix`` is the parity-check matrix."""

    text: str
    matrix: BinaryMatrix

    @classmethod
    def parse(cls, text: str, base_dir: Path | None = None) -> "CodeSpec":
        return cls(text.strip(), _parse(text.strip(), base_dir or Path.cwd()))


def _parse(text: str, base_dir: Path) -> BinaryMatrix:
    if text.startswith("alist:"):
        path = Path(text[6:].strip())
        return read_alist(path if path.is_absolute() else base_dir / path)
    if text.startswith("matrix:"):
        rows = [r.strip() for r in text[7:].split(";") if r.strip()]
        if not rows or any(set(r) - {"0", "1"} for r in rows) or len({len(r) for r in rows}) != 1:
            raise InputError(f"bad inline matrix {text!r}")
        return BinaryMatrix.from_dense([[int(c) for c in r] for r in rows])
    match = _CALL.match(text)
    if not match:
        raise InputError(f"cannot parse code spec {text!r}")
    name, arg = match.group(1), match.group(2)
    if name in ("transpose", "transpose-of"):
        if not arg:
            raise InputError("transpose needs an argument")
        return _parse(arg.strip(), base_dir).T
    if name == "hamming-7-4" and not arg:
        return hamming(3)
    builders = {"hamming": hamming, "rep": repetition, "cyclic-rep": cyclic_repetition}
    if name not in builders:
        raise InputError(f"unknown code {name!r}")
    if arg is None or arg.strip() == "":
        if name == "hamming":
            return hamming(3)
        raise InputError(f"{name} needs a size argument")
    try:
        size = int(arg)
    except ValueError as exc:
        raise InputError(f"bad size {arg!r} for {name}") from exc
    if size < 2:
        raise InputError(f"size {size} too small for {name}")
    return builders[name](size)
