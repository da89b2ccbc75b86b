"""Command-line entry point.

Each verb runs the pipeline up to one stage and prints the report. Exit
status: 0 pass, 1 a required condition failed, 2 inconclusive within the
search budget, 3 input error.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import __version__
from .codes import CodeSpec, emit_alist, parse_alist, read_alist
from .errors import SearchBudgetExceeded, SurgeryError
from .gadgets import FAMILIES
from .pipeline import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_PASS,
    PipelineConfig,
    parse_budget,
    run_pipeline,
    run_toric_demo,
    write_outputs,
)


class _Budget(click.ParamType):
    name = "budget"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            return parse_budget(value)
        except SurgeryError as exc:
            self.fail(str(exc), param, ctx)


def _common(f):
    opts = [
        click.option("--budget", type=_Budget(), default="2^26", show_default=True,
                     help="Distance-search budget, e.g. 4096, 2^20 or 1<<20."),
        click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
                     help="Worker cap for distance searches."),
        click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None,
                     help="Directory for report.txt, alist matrices and figures."),
        click.option("--no-figures", is_flag=True, help="Skip matplotlib figures when writing --out."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _surgery_opts(f):
    opts = [
        click.argument("c"),
        click.argument("d"),
        click.option("--codeword", "codewords", multiple=True, required=True,
                     help="support:i,j,... | bits:0101... | canonical:i (repeatable)."),
        click.option("--family", "families", multiple=True, type=click.Choice(FAMILIES), default=("path",),
                     show_default=True, help="Gadget family, once or once per codeword."),
        click.option("--orientation", "orientations", multiple=True, type=click.Choice(["C", "D"]),
                     default=("C",), show_default=True, help="Target factor, once or once per codeword."),
        click.option("--strict/--relative", default=True, help="Strict or relative expansion."),
        click.option("--t", "relative_t", type=int, default=None, help="t for relative expansion."),
        click.option("--faces/--no-faces", default=True, show_default=True, help="Fill gadget cycles."),
        click.option("--allow-gauge", is_flag=True, help="Accept gadgets with unfilled cycles."),
        click.option("--allow-repeats", is_flag=True, help="Accept a codeword more than once."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return _common(f)


def _finish(report, out, no_figures) -> None:
    click.echo(report.to_text(), nl=False)
    if out is not None:
        write_outputs(report, out, figures=not no_figures)
    sys.exit(report.exit_code)


def _guard(fn):
    """Map library errors to exit codes, printing their module-qualified code.

    An exhausted search budget is inconclusive (2); anything else is an
    input error (3).
    """

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SearchBudgetExceeded as exc:
            click.echo(f"inconclusive [{exc.code}]: {exc}", err=True)
            sys.exit(EXIT_INCONCLUSIVE)
        except SurgeryError as exc:
            click.echo(f"error [{exc.code}]: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _stage(stage):
    @_guard
    def run(c, d, codewords, families, orientations, strict, relative_t, faces, allow_gauge,
            allow_repeats, budget, threads, out, no_figures):
        cfg = PipelineConfig(
            c=c, d=d, codewords=list(codewords), families=list(families), orientations=list(orientations),
            mode="strict" if strict else "relative", relative_t=relative_t, budget=budget,
            threads=threads, allow_repeats=allow_repeats, faces=faces, allow_gauge=allow_gauge,
        )
        _finish(run_pipeline(cfg, stage), out, no_figures)

    return run


@click.group()
@click.version_option(__version__, prog_name="hgpsurgery")
def main():
    """Surgery gadgets on hypergraph-product codes.

    Code specs: hamming-7-4, hamming(r), rep(n), cyclic-rep(n),
    transpose(SPEC), matrix:110;011, alist:PATH.
    """


@main.command()
@click.argument("c")
@click.argument("d")
@_common
@_guard
def build(c, d, budget, threads, out, no_figures):
    """Build HGP(C, D) and report [[n, k, d]]."""
    cfg = PipelineConfig(c=c, d=d, budget=budget, threads=threads)
    _finish(run_pipeline(cfg, "build"), out, no_figures)


main.command(name="gadget", help="Synthesize gadgets and check their conditions.")(_surgery_opts(_stage("gadget")))
main.command(name="deform", help="Build each deformed code and certify the measured logicals.")(
    _surgery_opts(_stage("deform"))
)
main.command(name="compact", help="Build the compacted code of all gadgets.")(_surgery_opts(_stage("compact")))


@main.command()
@click.argument("config", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--budget", type=_Budget(), default=None, help="Override the config budget.")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Override the config threads.")
@click.option("--strict/--relative", default=None, help="Override the config expansion mode.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--no-figures", is_flag=True)
@_guard
def verify(config, budget, threads, strict, out, no_figures):
    """Run every stage from a [pipeline] config file."""
    cfg = PipelineConfig.from_file(config)
    if budget is not None:
        cfg.budget = budget
    if threads is not None:
        cfg.threads = threads
    if strict is not None:
        cfg.mode = "strict" if strict else "relative"
    _finish(run_pipeline(cfg, "verify"), out, no_figures)


@main.command(name="toric-demo")
@click.option("--d", "dist", type=click.IntRange(min=2), default=3, show_default=True, help="Toric distance.")
@click.option("--blocks", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--b", "b_vectors", multiple=True,
              help="Block vector per gadget, e.g. --b 11 --b 10. Defaults to all ones.")
@click.option("--faces/--no-faces", default=True, show_default=True)
@_common
@_guard
def toric_demo(dist, blocks, b_vectors, faces, budget, threads, out, no_figures):
    """Cycle-gadget surgery on toric codes with meta-check graph analysis."""
    report = run_toric_demo(dist, blocks, list(b_vectors) or None, faces, budget, threads)
    _finish(report, out, no_figures)


@main.command()
@click.argument("source")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the emitted alist here.")
@_guard
def roundtrip(source, out):
    """Parse an alist file or code spec, re-emit it and compare bit for bit."""
    path = Path(source)
    h = read_alist(path) if path.is_file() else CodeSpec.parse(source).matrix
    text = emit_alist(h)
    again = parse_alist(text)
    ok = again == h
    click.echo(f"shape = {h.rows}x{h.cols}\nrank = {h.rank()}\nroundtrip = {'pass' if ok else 'fail'}")
    if out is not None:
        out.write_text(text)
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


if __name__ == "__main__":
    main()
