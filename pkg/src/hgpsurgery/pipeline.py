"""End-to-end surgery runs driven by a small key-value configuration.

A configuration file has one ``[pipeline]`` section::

    [pipeline]
    c = hamming-7-4
    d = transpose(rep(3))
    codewords = support:0,1,2 ; canonical:1
    families = path, complete
    orientations = C
    mode = strict
    relative_t =
    budget = 2^26
    threads = 1
    allow_repeats = false
    faces = true
    allow_gauge = false

``codewords`` holds ``;``-separated selectors: ``support:i,j,...``,
``bits:0110...`` or ``canonical:i`` (the ``i``-th information-set basis
vector of the chosen factor). ``families`` and ``orientations`` give one
entry per codeword or a single entry used for all of them.
"""

from __future__ import annotations

import configparser
import csv
import io
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .codes import CodeSpec, write_alist
from .complex import homology_dim
from .cone import DeformedCssCode
from .distance import DEFAULT_BUDGET, Distance
from .errors import InputError
from .gadgets import FAMILIES, synthesize, verify_conditions
from .gf2 import BinaryMatrix, BinaryVector, kernel_basis_with_info
from .surgery import (
    ORIENTATIONS,
    HgpCode,
    SurgerySequence,
    build_compacted,
    build_deformed,
    build_hgp,
    measured_logicals,
    verify_fast_conditions,
)

SCHEMA = "hgpsurgery-report/1"
STAGES = ("build", "gadget", "deform", "compact", "verify")
EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


def parse_budget(text) -> int:
    """Accept ``1234``, ``2^20`` or ``1<<20``."""
    s = str(text).strip().replace(" ", "")
    try:
        if "^" in s:
            base, exp = s.split("^")
            return int(base) ** int(exp)
        if "<<" in s:
            a, b = s.split("<<")
            return int(a) << int(b)
        return int(s)
    except ValueError as exc:
        raise InputError(f"bad budget {text!r}") from exc


def _split(text: str, sep: str) -> list[str]:
    return [p.strip() for p in text.split(sep) if p.strip()]


def _bool(text: str, key: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise InputError(f"{key} must be a boolean, got {text!r}")


@dataclass
class PipelineConfig:
    """Inputs of one pipeline run.

    Attributes:
        c, d: Code specifications of the two factors.
        codewords: Codeword selectors, one per gadget.
        families: Gadget family per codeword.
        orientations: Factor (``"C"`` or ``"D"``) per codeword.
        mode: ``"strict"`` or ``"relative"`` expansion.
        relative_t: ``t`` for relative expansion; ``None`` uses ``|c|``.
        budget: Distance-search budget in enumerated vectors.
        threads: Worker cap for distance searches.
    """

    c: str
    d: str
    codewords: list[str] = field(default_factory=list)
    families: list[str] = field(default_factory=lambda: ["path"])
    orientations: list[str] = field(default_factory=lambda: ["C"])
    mode: str = "strict"
    relative_t: int | None = None
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    allow_repeats: bool = False
    faces: bool = True
    allow_gauge: bool = False
    base_dir: Path = field(default_factory=Path.cwd)

    def __post_init__(self):
        n = len(self.codewords)
        for name in ("families", "orientations"):
            vals = getattr(self, name)
            if n and len(vals) == 1:
                setattr(self, name, vals * n)
            elif n and len(vals) != n:
                raise InputError(f"{name} needs one entry or one per codeword ({n}), got {len(vals)}")
        for fam in self.families:
            if fam not in FAMILIES:
                raise InputError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
        for o in self.orientations:
            if o not in ORIENTATIONS:
                raise InputError(f"unknown orientation {o!r}; choose C or D")
        if self.mode not in ("strict", "relative"):
            raise InputError(f"mode must be strict or relative, got {self.mode!r}")
        if self.budget < 1 or self.threads < 1:
            raise InputError("budget and threads must be positive")

    @classmethod
    def from_text(cls, text: str, base_dir: Path | None = None) -> "PipelineConfig":
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise InputError(f"config: {exc}") from exc
        if "pipeline" not in parser:
            raise InputError("config needs a [pipeline] section")
        sec = parser["pipeline"]
        known = {
            "c", "d", "codewords", "families", "orientations", "mode", "relative_t",
            "budget", "threads", "allow_repeats", "faces", "allow_gauge",
        }
        extra = set(sec) - known
        if extra:
            raise InputError(f"unknown config keys: {', '.join(sorted(extra))}")
        for key in ("c", "d"):
            if not sec.get(key, "").strip():
                raise InputError(f"config key {key!r} is required")
        t = sec.get("relative_t", "").strip()
        try:
            threads = int(sec.get("threads", "1"))
            rel_t = int(t) if t else None
        except ValueError as exc:
            raise InputError(f"config: {exc}") from exc
        return cls(
            c=sec["c"].strip(),
            d=sec["d"].strip(),
            codewords=_split(sec.get("codewords", ""), ";"),
            families=_split(sec.get("families", "path"), ","),
            orientations=_split(sec.get("orientations", "C"), ","),
            mode=sec.get("mode", "strict").strip(),
            relative_t=rel_t,
            budget=parse_budget(sec.get("budget", str(DEFAULT_BUDGET))),
            threads=threads,
            allow_repeats=_bool(sec.get("allow_repeats", "false"), "allow_repeats"),
            faces=_bool(sec.get("faces", "true"), "faces"),
            allow_gauge=_bool(sec.get("allow_gauge", "false"), "allow_gauge"),
            base_dir=base_dir or Path.cwd(),
        )

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
        return cls.from_text(text, path.parent)


def resolve_codeword(selector: str, h: BinaryMatrix) -> BinaryVector:
    """Turn a ``support:``, ``bits:`` or ``canonical:`` selector into a vector."""
    kind, _, arg = selector.partition(":")
    kind, arg = kind.strip(), arg.strip()
    n = h.cols
    try:
        if kind == "support":
            idx = [int(x) for x in _split(arg, ",")]
            if any(not 0 <= i < n for i in idx):
                raise InputError(f"support index out of range 0..{n - 1} in {selector!r}")
            return BinaryVector.from_support(n, idx)
        if kind == "bits":
            if len(arg) != n or set(arg) - {"0", "1"}:
                raise InputError(f"bits selector needs {n} binary digits, got {arg!r}")
            return BinaryVector.from_dense([int(ch) for ch in arg])
        if kind == "canonical":
            basis, _ = kernel_basis_with_info(h)
            i = int(arg)
            if not 0 <= i < len(basis):
                raise InputError(f"canonical index {i} out of range; the code has {len(basis)} basis codewords")
            return basis[i]
    except ValueError as exc:
        raise InputError(f"bad codeword selector {selector!r}") from exc
    raise InputError(f"unknown codeword selector {selector!r}")


def fmt_distance(d: Distance) -> str:
    """``3 exact`` or ``>=2 lower-bound``."""
    return f"{d} {'exact' if d.exact else 'lower-bound'}"


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return {True: "pass", False: "fail", None: "inconclusive"}[value]
    if isinstance(value, Distance):
        return fmt_distance(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_fmt(v) if not isinstance(v, int) else str(v) for v in value)
    return str(value)


@dataclass
class Section:
    """Either ``key = value`` pairs or a table with a header row."""

    name: str
    pairs: list[tuple[str, object]] = field(default_factory=list)
    header: list[str] | None = None
    rows: list[list[object]] = field(default_factory=list)


@dataclass
class RunReport:
    """Structured result of a run.

    ``sections`` and the verdict form the comparable part of the text;
    ``timings`` are appended last and are expected to vary between runs.
    ``matrices`` and ``codes`` are written next to the report by
    :func:`write_outputs`.
    """

    sections: list[Section] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    inconclusive: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    matrices: dict[str, BinaryMatrix] = field(default_factory=dict)
    codes: dict[str, DeformedCssCode] = field(default_factory=dict)
    meta_graphs: dict[str, object] = field(default_factory=dict)

    def section(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def value(self, section: str, key: str):
        for k, v in self.section(section).pairs:
            if k == key:
                return v
        raise KeyError(key)

    def add(self, name: str, pairs=None, header=None, rows=None) -> Section:
        s = Section(name, list(pairs or []), header, list(rows or []))
        self.sections.append(s)
        return s

    def require(self, label: str, verdict: bool | None):
        """Record a required check: ``False`` fails, ``None`` is inconclusive."""
        if verdict is False:
            self.failures.append(label)
        elif verdict is None:
            self.inconclusive.append(label)

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        return "inconclusive" if self.inconclusive else "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[self.status]

    def to_text(self, timings: bool = True) -> str:
        buf = io.StringIO()
        buf.write(f"schema = {SCHEMA}\ntool_version = {__version__}\n")
        writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
        for s in self.sections:
            buf.write(f"\n[{s.name}]\n")
            for k, v in s.pairs:
                buf.write(f"{k} = {_fmt(v)}\n")
            if s.header is not None:
                writer.writerow(s.header)
                for row in s.rows:
                    writer.writerow([_fmt(c) for c in row])
        buf.write("\n[verdict]\n")
        buf.write(f"status = {self.status}\nexit_code = {self.exit_code}\n")
        buf.write(f"failed = {', '.join(self.failures) or '-'}\n")
        buf.write(f"inconclusive = {', '.join(self.inconclusive) or '-'}\n")
        if timings:
            buf.write("\n[timings]\n")
            for k, v in self.timings.items():
                buf.write(f"{k}_seconds = {v:.3f}\n")
        return buf.getvalue()


class _Timer:
    def __init__(self, report: RunReport, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.start = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.name] = time.perf_counter() - self.start


def _base_section(report: RunReport, cfg: PipelineConfig, code: HgpCode, kw: dict) -> Distance:
    dz, dx = code.distances(**kw)
    d = code.distance(**kw)
    report.add(
        "base",
        [
            ("c", f"{cfg.c} ({code.C.dim(0)}x{code.C.dim(1)})"),
            ("d", f"{cfg.d} ({code.D.dim(0)}x{code.D.dim(1)})"),
            ("n", code.n),
            ("k", code.k),
            ("k_formula", code.k_formula()),
            ("d_z", dz),
            ("d_x", dx),
            ("distance", d),
            ("budget", cfg.budget),
            ("complex_valid", bool(code.product.validate())),
        ],
    )
    report.require("base.complex_valid", bool(code.product.validate()))
    report.require("base.k_formula", code.k == code.k_formula())
    report.matrices["base_hx"] = code.hx
    report.matrices["base_hz"] = code.hz
    return d


def run_pipeline(cfg: PipelineConfig, stage: str = "verify") -> RunReport:
    """Run the stages up to and including ``stage``.

    Stages: ``build`` (base code), ``gadget`` (synthesis and gadget
    conditions), ``deform`` (one deformed code per gadget and its measured
    logicals), ``compact`` (compacted code and route comparison) and
    ``verify`` (fast-surgery conditions).

    Raises:
        InputError: For bad code specs or selectors.
        SurgeryError: Subclasses from the construction steps.
    """
    if stage not in STAGES:
        raise InputError(f"unknown stage {stage!r}")
    upto = STAGES.index(stage)
    report = RunReport()
    kw = dict(budget=cfg.budget, threads=cfg.threads, on_budget="bound")
    with _Timer(report, "build"):
        hc = CodeSpec.parse(cfg.c, cfg.base_dir).matrix
        hd = CodeSpec.parse(cfg.d, cfg.base_dir).matrix
        code = build_hgp(hc, hd)
        base_d = _base_section(report, cfg, code, kw)
    if upto < 1:
        return report
    if not cfg.codewords:
        raise InputError("no codewords selected")

    gadgets = []
    with _Timer(report, "gadget"):
        rows = []
        for i, (sel, fam, o) in enumerate(zip(cfg.codewords, cfg.families, cfg.orientations)):
            factor = code.factor(o)
            word = resolve_codeword(sel, factor.boundary(1))
            g = synthesize(factor, word, fam, faces=cfg.faces, allow_gauge=cfg.allow_gauge, name=f"G{i + 1}")
            rep = verify_conditions(g, cfg.mode, t=cfg.relative_t)
            gadgets.append(g)
            rows.append(
                [i, fam, o, " ".join(map(str, word.support())), "/".join(map(str, g.sizes)),
                 rep.expansion, rep.expansion_ok, rep.acyclic_ok, rep.kernel_ok,
                 rep.sparsity, rep.sparse_ok, f"{rep.size}/{rep.size_limit}", rep.size_ok,
                 ",".join(rep.failures()) or "-"]
            )
            for flag, ok in rep.flags.items():
                report.require(f"gadget{i}.{flag}", ok)
        report.add(
            "gadgets",
            [("mode", cfg.mode), ("count", len(gadgets))],
            ["index", "family", "orientation", "codeword", "sizes", "expansion", "expansion_ok",
             "acyclic", "kernel", "sparsity", "sparse_ok", "size", "size_ok", "failed"],
            rows,
        )
    if upto < 2:
        return report

    with _Timer(report, "deform"):
        drows, mrows = [], []
        for i, (g, o) in enumerate(zip(gadgets, cfg.orientations)):
            df = build_deformed(code, g, o)
            css = df.css
            meas = measured_logicals(df)
            dz, dx = css.distances(**kw)
            k_after = homology_dim(css.complex, 1)
            valid = bool(css.complex.validate())
            drows.append(
                [i, css.n, css.split("qubits")[0], css.hz.rows, css.hx.rows, css.meta.rows,
                 k_after, dz, dx, meas.distinct, len(meas.classes), meas.all_certified, valid]
            )
            for c in meas.classes:
                mrows.append(
                    [i, c.index, " ".join(map(str, c.representative.support())),
                     " ".join(map(str, c.certificate)) or "-", c.certified]
                )
            report.require(f"deform{i}.complex_valid", valid)
            report.require(f"deform{i}.certified", meas.all_certified)
            report.require(f"deform{i}.k_drop", code.k - k_after == 1)
            report.require(f"deform{i}.distance", _both_at_least((dz, dx), base_d))
            report.codes[f"deformed{i}"] = css
            report.matrices[f"deformed{i}_hx"] = css.hx
            report.matrices[f"deformed{i}_hz"] = css.hz
            report.matrices[f"deformed{i}_meta"] = css.meta
        report.add(
            "deformations",
            header=["gadget", "n", "ancilla_qubits", "z_checks", "x_checks", "meta_checks",
                    "k_after", "d_z", "d_x", "distinct_classes", "representatives",
                    "certified", "complex_valid"],
            rows=drows,
        )
        report.add(
            "measured",
            header=["gadget", "representative", "support", "certificate", "certified"],
            rows=mrows,
        )
    if upto < 3:
        return report

    with _Timer(report, "compact"):
        seq = SurgerySequence(code, gadgets, list(cfg.orientations), allow_repeats=cfg.allow_repeats)
        comp = build_compacted(seq)
        routes = comp.routes
        report.add(
            "compacted",
            [
                ("n", comp.css.n),
                ("ancilla_qubits", comp.css.split("qubits")[0]),
                ("z_checks", comp.css.hz.rows),
                ("x_checks", comp.css.hx.rows),
                ("meta_checks", comp.css.meta.rows),
                ("k", homology_dim(comp.cone.complex, 1)),
                ("routes", "n/a" if routes is None else bool(routes)),
            ],
        )
        if routes is not None:
            report.require("compacted.routes", bool(routes))
        report.codes["compacted"] = comp.css
        report.matrices["compacted_hx"] = comp.css.hx
        report.matrices["compacted_hz"] = comp.css.hz
        report.matrices["compacted_meta"] = comp.css.meta
    if upto < 4:
        return report

    with _Timer(report, "verify"):
        fast = verify_fast_conditions(seq, cfg.budget, cfg.threads, compacted=comp, base_distance=base_d)
        v = fast.verdicts
        report.add(
            "fast_surgery",
            [
                ("base_distance", fast.base_distance),
                ("compacted_d_z", fast.compacted[0]),
                ("compacted_d_x", fast.compacted[1]),
                ("distance_condition", v["distance"]),
                ("meta_distances", " ".join(fmt_distance(m) for m in fast.meta_distances)),
                ("metacheck_condition", v["metacheck"]),
                ("disjoint_condition", v["disjoint"]),
                ("homology_drop", fast.homology_drop),
                ("codeword_rank", fast.codeword_rank),
            ],
        )
        for name, ok in v.items():
            report.require(f"fast.{name}", ok)
        report.require("fast.homology_drop", fast.homology_drop == fast.codeword_rank)
    return report


def _both_at_least(pair, base: Distance) -> bool | None:
    votes = [x.at_least(base.value) for x in pair]
    if False in votes and base.exact:
        return False
    if all(v is True for v in votes):
        return True if base.exact else None
    return None


def run_toric_demo(
    d: int,
    blocks: int = 1,
    b_vectors: list[str] | None = None,
    faces: bool = True,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> RunReport:
    """Cycle-gadget surgery on ``blocks`` toric codes of distance ``d``.

    Args:
        b_vectors: Block selectors such as ``"11"``; one gadget each, applied
            in order. Defaults to one gadget on all blocks.
        faces: Fill each cycle gadget with its face.
    """
    from .surgery import SurgerySequence as Seq
    from .toric import build_toric, metacheck_graph, toric_gadget, verify_toric_distances

    if d < 2 or blocks < 1:
        raise InputError("toric demo needs d >= 2 and blocks >= 1")
    report = RunReport()
    b_vectors = b_vectors or ["1" * blocks]
    kw = dict(budget=budget, threads=threads, on_budget="bound")
    with _Timer(report, "build"):
        inst = build_toric(d, blocks)
        code = inst.code
        dz, dx = code.distances(**kw)
        report.add(
            "base",
            [("d", d), ("blocks", blocks), ("n", code.n), ("k", code.k), ("d_z", dz), ("d_x", dx),
             ("budget", budget)],
        )
        report.require("base.params", code.n == 2 * d * d * blocks and code.k == 2 * blocks)
        report.require("base.distance", _both_at_least((dz, dx), Distance(d)))
    gadgets = []
    with _Timer(report, "gadget"):
        for i, bsel in enumerate(b_vectors):
            if len(bsel) != blocks or set(bsel) - {"0", "1"}:
                raise InputError(f"block vector {bsel!r} needs {blocks} binary digits")
            gadgets.append(
                toric_gadget(inst, BinaryVector.from_dense([int(c) for c in bsel]), faces=faces, name=f"G{i + 1}")
            )
    with _Timer(report, "deform"):
        rows = []
        for i, g in enumerate(gadgets):
            df = build_deformed(code, g, "C")
            css = df.css
            meta = metacheck_graph(df, budget)
            report.meta_graphs[f"deformed{i}"] = meta
            report.codes[f"deformed{i}"] = css
            rows.append(
                [i, b_vectors[i], css.split("qubits")[0], homology_dim(css.complex, 1),
                 f"{meta.shape[0]}x{meta.shape[1]}", meta.graph.number_of_nodes(),
                 meta.graph.number_of_edges(), ",".join(k for k, v in meta.periodic.items() if v) or "-",
                 ",".join(meta.flipping_directions) or "-", _inf(meta.min_cycle_weight),
                 _inf(meta.min_undetected_flip)]
            )
            report.require(f"meta{i}.undetected_flip", meta.min_undetected_flip >= d)
        report.add(
            "deformations",
            header=["gadget", "b", "ancilla_qubits", "k_after", "meta_shape", "meta_nodes", "meta_edges",
                    "periodic", "flipping", "min_meta_cycle", "min_undetected_flip"],
            rows=rows,
        )
    with _Timer(report, "verify"):
        comp = None
        if len(gadgets) > 1:
            comp = build_compacted(Seq(code, gadgets, ["C"] * len(gadgets), allow_repeats=True))
            report.codes["compacted"] = comp.css
        tr = verify_toric_distances(inst, gadgets, budget, threads, compacted=comp)
        report.add(
            "toric",
            [
                ("deformed_distances", " | ".join(f"{fmt_distance(a)}, {fmt_distance(b)}" for a, b in tr.deformed)),
                ("compacted_distances", "-" if tr.compacted is None else
                 f"{fmt_distance(tr.compacted[0])}, {fmt_distance(tr.compacted[1])}"),
                ("g1_condition", all(bool(c) for c in tr.g1_conditions)),
                ("orthogonal_pairing", bool(tr.pairing)),
                ("xh_witnesses", "n/a" if tr.xh_ok is None else tr.xh_ok),
                ("xv_cocycles", tr.xv_ok),
                ("distances_at_least_d", tr.distances_ok(d)),
            ],
        )
        report.require("toric.g1_condition", all(bool(c) for c in tr.g1_conditions))
        report.require("toric.pairing", bool(tr.pairing))
        report.require("toric.xv", tr.xv_ok)
        if tr.xh_ok is not None:
            report.require("toric.xh", tr.xh_ok)
        report.require("toric.distances", tr.distances_ok(d))
    return report


def _inf(x) -> str:
    return "inf" if x == float("inf") else str(int(x))


def write_outputs(report: RunReport, out_dir, figures: bool = True) -> list[Path]:
    """Write ``report.txt``, one alist per matrix and optional figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "report.txt"]
    written[0].write_text(report.to_text())
    for name, m in report.matrices.items():
        path = out / f"{name}.alist"
        write_alist(m, path)
        written.append(path)
    if figures:
        from .plotting import render_report_figures

        written += render_report_figures(report, out)
    return written
