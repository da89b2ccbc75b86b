from click.testing import CliRunner

from hgpsurgery.cli import main
from hgpsurgery.codes import emit_alist, hamming


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_build():
    res = run("build", "hamming-7-4", "transpose(rep(3))")
    assert res.exit_code == 0
    assert "n = 27" in res.output and "k = 4" in res.output


def test_gadget_strict_failure_and_relative_pass():
    args = ["gadget", "cyclic-rep(6)", "cyclic-rep(3)", "--codeword", "bits:111111", "--family", "cycle"]
    assert run(*args).exit_code == 1
    assert run(*args, "--relative", "--t", "2").exit_code == 0


def test_deform_and_outputs(tmp_path):
    res = run("deform", "hamming-7-4", "transpose(rep(3))", "--codeword", "support:0,1,2", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    assert (tmp_path / "deformed0_hx.alist").exists()
    assert (tmp_path / "deformed0_matrices.png").exists()


def test_compact_two_codewords():
    res = run(
        "compact", "hamming-7-4", "transpose(rep(3))",
        "--codeword", "support:0,1,2", "--codeword", "support:0,1,4,5",
        "--family", "path", "--family", "complete", "--no-figures",
    )
    assert res.exit_code == 0, res.output
    assert "routes = pass" in res.output


def test_verify_config_and_budget_override(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[pipeline]\nc = hamming-7-4\nd = transpose(rep(3))\ncodewords = support:0,1,2\n")
    assert run("verify", str(cfg)).exit_code == 0
    assert run("verify", str(cfg), "--budget", "2^4").exit_code == 2


def test_input_errors_exit_three(tmp_path):
    assert run("build", "golay(23)", "rep(3)").exit_code == 3
    assert run("deform", "hamming-7-4", "rep(3)", "--codeword", "support:0").exit_code == 3
    assert run("verify", str(tmp_path / "missing.ini")).exit_code == 3
    res = run("build", "alist:" + str(tmp_path / "nope.alist"), "rep(3)")
    assert res.exit_code == 3
    assert "io.input_error" in res.output


def test_toric_demo(tmp_path):
    res = run("toric-demo", "--d", "3", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    assert (tmp_path / "deformed0_metacheck.png").exists()
    res = run("toric-demo", "--d", "3", "--blocks", "2", "--b", "11", "--b", "10", "--no-figures")
    assert res.exit_code == 0, res.output


def test_roundtrip(tmp_path):
    src = tmp_path / "h.alist"
    src.write_text(emit_alist(hamming(3)))
    res = run("roundtrip", str(src))
    assert res.exit_code == 0 and "roundtrip = pass" in res.output
    res = run("roundtrip", "cyclic-rep(4)", "--out", str(tmp_path / "c.alist"))
    assert res.exit_code == 0
    assert (tmp_path / "c.alist").read_text().startswith("4 4")
