import json

import pytest

from src.utils.content import resolve_resource


def test_eval_stream_term(run_cli):
    status, out = run_cli("eval", "--spec", "zip_alt.spec", "--term", "zip2(zeros, ones)", "-n", "12")
    assert status == 0
    assert "verdict: 010101010101" in out


def test_eval_reports_unresolved_elements(run_cli):
    status, out = run_cli("eval", "--spec", "copy_tail", "--term", "M", "-n", "3")
    assert status == 0
    assert "verdict: 0??" in out


def test_compare_with_default_spec(run_cli):
    status, out = run_cli("compare", "zip2(zeros, ones)", "blink", "-n", "64")
    assert status == 0
    assert "verdict: Equal" in out


def test_compare_finds_the_first_difference(run_cli):
    status, out = run_cli("compare", "zeros", "blink", "-n", "8")
    assert status == 0
    assert "verdict: Diff(1, 0, 1)" in out


def test_tm_commands(run_cli):
    status, out = run_cli("tm-run", "--machine", "parity", "--input", "4")
    assert status == 0
    assert "verdict: Agree" in out
    status, out = run_cli("tm-compile", "--machine", "parity")
    assert "verdict: 18 equations" in out
    status, out = run_cli("ntm-run", "--machine", "bounce", "--word", "(0)", "--steps", "40")
    assert "verdict: Running(40)" in out
    assert "[0, 1]" in out


def test_model_check(run_cli):
    status, out = run_cli("model-check", "--spec", "zip_alt")
    assert status == 0
    assert "verdict: canonical(zip_alt) satisfies zip_alt" in out


def test_hidden_demo(run_cli):
    status, out = run_cli("hidden-demo")
    assert status == 0
    assert "verdict: Counterexample confirmed" in out


def test_lambda_commands(run_cli):
    status, out = run_cli("bohm", "--term", r"\x. x x")
    assert status == 0
    assert "verdict: λx.x [x]" in out
    status, out = run_cli("lt", "--term", "M", "--depth", "4")
    assert "λa.a spine length : 4" in out


def test_obs_refute(run_cli):
    status, out = run_cli("obs-refute", "--m", "M", "--n", "N(T3)")
    assert status == 0
    assert "☐ I I I" in out


def test_reduce_against_golden(run_cli):
    golden = resolve_resource("wf", "golden", ".spec")
    status, out = run_cli("reduce", "--template", "wf", "--relation", "total", "--golden", golden)
    assert status == 0
    assert "verdict: Matches golden" in out


def test_probe(run_cli):
    status, out = run_cli("probe", "--relation", "1,2;2,1", "--x", "(10110)", "--cross-check")
    assert status == 0
    assert "verdict: WitnessOfChain(16)" in out
    assert "direct simulation accepts every pair : True" in out
    status, out = run_cli("probe", "--template", "union", "-n", "4")
    assert "verdict: N = inv(N) has no constructor" in out


def test_json_output(run_cli):
    status, out = run_cli("eval", "--spec", "zip_alt", "--term", "blink", "-n", "4", "--json")
    assert status == 0
    payload = json.loads(out)
    assert payload["verdict"] == "0101"
    assert payload["details"]["elements"] == 4


@pytest.mark.parametrize("argv", [
    ("eval", "--spec", "zip_alt", "--term", "zeros", "--nope"),
    ("probe", "--relation", "total", "--x", "(2)"),
    ("eval", "--spec", "no_such_spec.spec", "--term", "zeros"),
    ("tm-run", "--machine", "bounce"),
    ("reduce", "--template", "wf"),
    (),
])
def test_usage_errors_exit_with_1(run_cli, argv):
    status, _ = run_cli(*argv)
    assert status == 1


def test_input_errors_exit_with_2(run_cli, tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text("sym zeros : S\neq zeros = 0 :\n", encoding="utf-8")
    status, _ = run_cli("eval", "--spec", str(bad), "--term", "zeros")
    assert status == 2
    status, _ = run_cli("bohm", "--term", r"\. x")
    assert status == 2
    status, _ = run_cli("reduce", "--template", "full", "--relation", "total", "--quantifiers", "3")
    assert status == 2


def test_help_exits_cleanly(run_cli):
    status, out = run_cli("--help")
    assert status == 0
    assert "obs-refute" in out


def test_wrong_number_of_tau_values_is_a_usage_error(run_cli, caplog):
    status, _ = run_cli("probe", "--template", "full", "--relation", "total", "--tau", "(0)", "(0)")
    assert status == 1
    assert not [r for r in caplog.records if r.levelname == "ERROR"]
