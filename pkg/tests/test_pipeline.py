import pytest

from hgpsurgery.errors import InputError
from hgpsurgery.pipeline import (
    SCHEMA,
    PipelineConfig,
    parse_budget,
    resolve_codeword,
    run_pipeline,
    run_toric_demo,
    write_outputs,
)
from hgpsurgery.codes import hamming

HAMMING_RUN = """
[pipeline]
c = hamming-7-4
d = transpose(rep(3))
codewords = support:0,1,2
families = path
"""


def test_parse_budget():
    assert parse_budget("2^4") == 16
    assert parse_budget("1<<10") == 1024
    assert parse_budget(" 77 ") == 77
    with pytest.raises(InputError):
        parse_budget("lots")


def test_resolve_codeword_selectors():
    h = hamming(3)
    assert resolve_codeword("support:0,1,2", h).support() == [0, 1, 2]
    assert resolve_codeword("bits:1110000", h).support() == [0, 1, 2]
    assert h.matvec(resolve_codeword("canonical:0", h)).is_zero()
    for bad in ("support:9", "bits:11", "canonical:4", "word:1", "support:a"):
        with pytest.raises(InputError):
            resolve_codeword(bad, h)


def test_config_validation():
    with pytest.raises(InputError, match="section"):
        PipelineConfig.from_text("[other]\nc = x\n")
    with pytest.raises(InputError, match="unknown config keys"):
        PipelineConfig.from_text(HAMMING_RUN + "colour = blue\n")
    with pytest.raises(InputError, match="families"):
        PipelineConfig(c="hamming", d="rep(3)", codewords=["a", "b", "c"], families=["path", "cycle"])
    with pytest.raises(InputError, match="orientation"):
        PipelineConfig(c="hamming", d="rep(3)", codewords=["a"], orientations=["Q"])


def test_hamming_report():
    report = run_pipeline(PipelineConfig.from_text(HAMMING_RUN))
    assert report.exit_code == 0, report.failures
    assert report.value("base", "n") == 27
    assert report.value("base", "k") == 4
    assert str(report.value("base", "distance")) == "3"
    row = report.section("deformations").rows[0]
    header = report.section("deformations").header
    assert row[header.index("distinct_classes")] == 1
    assert row[header.index("representatives")] == 3
    assert row[header.index("k_after")] == 3
    text = report.to_text()
    assert text.startswith(f"schema = {SCHEMA}")
    assert "d_z = 3 exact" in text


def test_report_is_deterministic_without_timings():
    cfg = PipelineConfig.from_text(HAMMING_RUN)
    assert run_pipeline(cfg).to_text(timings=False) == run_pipeline(cfg).to_text(timings=False)
    assert "[timings]" not in run_pipeline(cfg, "build").to_text(timings=False)


def test_small_budget_is_inconclusive():
    cfg = PipelineConfig.from_text(HAMMING_RUN + "budget = 2^4\n")
    report = run_pipeline(cfg)
    assert report.exit_code == 2
    assert not report.failures
    assert "lower-bound" in report.to_text()


def test_failing_condition_exits_one():
    cfg = PipelineConfig(c="cyclic-rep(6)", d="cyclic-rep(3)", codewords=["bits:111111"], families=["cycle"])
    report = run_pipeline(cfg, "gadget")
    assert report.exit_code == 1
    assert "gadget0.expansion" in report.failures


def test_relative_mode_passes_cycle():
    cfg = PipelineConfig(
        c="cyclic-rep(6)", d="cyclic-rep(3)", codewords=["bits:111111"], families=["cycle"],
        mode="relative", relative_t=2,
    )
    assert run_pipeline(cfg, "gadget").exit_code == 0


def test_toric_d3_two_gadgets_compacted_distance():
    report = run_toric_demo(3, 1, ["1", "1"])
    text = report.to_text()
    assert report.exit_code == 0
    assert "compacted_distances = 3 exact, 5 exact" in text


def test_write_outputs(tmp_path):
    report = run_pipeline(PipelineConfig.from_text(HAMMING_RUN))
    paths = write_outputs(report, tmp_path)
    names = {p.name for p in paths}
    assert {"report.txt", "base_hx.alist", "deformed0_hz.alist", "compacted_meta.alist"} <= names
    assert "deformed0_matrices.png" in names
    assert (tmp_path / "report.txt").read_text() == report.to_text()
