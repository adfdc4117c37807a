"""Exercise the command line through main(argv), not a subprocess."""

import pytest

from fbe.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_log2_digits(capsys):
    code, out, _ = run(capsys, "eval", "log2", "1.5", "--n", "4")
    assert code == 0
    assert "digits .1001" in out
    assert "approx 0.5625" in out


def test_eval_trace_shows_chain_values(capsys):
    code, out, _ = run(capsys, "eval", "log2", "1.5", "--n", "4",
                       "--m", "16", "--trace")
    assert code == 0
    assert "= 1.265625" in out
    assert "= 1.601806640625" in out


def test_eval_inverse_value(capsys):
    code, out, _ = run(capsys, "eval", "exp2", ".1011", "--m", "16")
    assert code == 0
    assert "= 1.6104736328125" in out


def test_eval_ternary_radix(capsys):
    code, out, _ = run(capsys, "eval", "log2", "1.5", "--n", "7", "--radix", "3")
    assert code == 0
    assert "digits 0.120210" in out


def test_eval_radix_rejected_off_log(capsys):
    code, _, err = run(capsys, "eval", "exp2", ".1", "--radix", "3")
    assert code == 2
    assert "radix" in err


def test_eval_domain_error_exits_2(capsys):
    code, _, err = run(capsys, "eval", "log2", "5.0")
    assert code == 2
    assert "error:" in err


def test_synth_deterministic_bytes(capsys, tmp_path):
    a, b = tmp_path / "a.fbe", tmp_path / "b.fbe"
    assert run(capsys, "synth", "arccot", "--n", "2", "--m", "5",
               "-o", str(a))[0] == 0
    assert run(capsys, "synth", "arccot", "--n", "2", "--m", "5",
               "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_synth_report_comments(capsys):
    code, out, _ = run(capsys, "synth", "log", "--n", "2", "--m", "4",
                       "--report")
    assert code == 0
    assert "# family log n 2 m 4" in out
    assert "# qubits " in out
    # exported body still present alongside the comment lines
    assert "reg RegO output" in out


def test_synth_unknown_family_exits_2(capsys):
    code, _, err = run(capsys, "synth", "sinh", "--n", "2", "--m", "4")
    assert code == 2
    assert "sinh" in err


def test_sim_round_trips_golden_rows(capsys, tmp_path):
    log = tmp_path / "log.fbe"
    assert run(capsys, "synth", "log", "--n", "4", "--m", "4",
               "-o", str(log))[0] == 0
    for inp, want in (("01.00", "digits 0.000"), ("10.00", "digits 1.000")):
        code, out, _ = run(capsys, "sim", str(log), inp)
        assert code == 0 and want in out

    cos = tmp_path / "cos.fbe"
    assert run(capsys, "synth", "cos", "--n", "2", "--m", "5",
               "-o", str(cos))[0] == 0
    for inp, want in ((".01", "value 00.101"), (".11", "value 11.011")):
        code, out, _ = run(capsys, "sim", str(cos), inp)
        assert code == 0 and want in out


def test_sim_reports_infinity(capsys, tmp_path):
    cot = tmp_path / "cot.fbe"
    assert run(capsys, "synth", "cot", "--n", "2", "--m", "5",
               "-o", str(cot))[0] == 0
    code, out, _ = run(capsys, "sim", str(cot), ".00")
    assert code == 0
    assert "value infinite" in out


def test_sim_width_mismatch_exits_2(capsys, tmp_path):
    log = tmp_path / "log.fbe"
    run(capsys, "synth", "log", "--n", "4", "--m", "4", "-o", str(log))
    code, _, err = run(capsys, "sim", str(log), "1.100")
    assert code == 2
    assert "wants" in err


def test_sim_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "sim", str(tmp_path / "nope.fbe"), ".0")
    assert code == 2


def test_verify_table2_passes(capsys):
    code, out, _ = run(capsys, "verify", "table2")
    assert code == 0
    assert "[PASS] table2 golden-rows" in out
    assert "11/11" in out


def test_verify_group1_fails_honestly(capsys):
    code, out, _ = run(capsys, "verify", "group1-exact")
    assert code == 1
    assert "[FAIL] group1-exact" in out
    assert "circuit mismatches 0" in out


def test_verify_fast_suites_pass(capsys):
    for suite in ("group2-bounds", "blocks", "reversibility"):
        code, out, _ = run(capsys, "verify", suite)
        assert code == 0, suite
        assert "[FAIL]" not in out


def test_verify_all_deterministic_and_exit_1(capsys):
    code1, out1, _ = run(capsys, "verify", "all")
    code2, out2, _ = run(capsys, "verify", "all")
    assert code1 == code2 == 1
    assert out1 == out2
    assert "verdict: FAIL" in out1


def test_bench_lists_all_families(capsys):
    code, out, _ = run(capsys, "bench", "--n", "2", "--m", "5")
    assert code == 0
    for family in ("log", "arccos", "arccot", "exp", "cos", "cot"):
        assert f"\n{family}" in "\n" + out


def test_bad_flags_raise_systemexit():
    with pytest.raises(SystemExit):
        main(["synth", "log", "--policy", "messy"])
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])
