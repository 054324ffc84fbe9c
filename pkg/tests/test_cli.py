import subprocess
import sys

import pytest

from xi_moment_lab.cli import (
    EXIT_ACCURACY,
    EXIT_FORMAT,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    UsageError,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gamma_headline(capsys):
    code, out, _ = run(capsys, "gamma")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "0.577215664902"


@pytest.mark.parametrize("method", ["a", "b", "c", "b_series"])
def test_gamma_methods(method, capsys):
    code, out, _ = run(capsys, "gamma", "--method", method, "--show", "10")
    assert code == EXIT_OK and out.startswith("0.5772156649")


def test_lugo(capsys):
    code, out, _ = run(capsys, "lugo")
    assert code == EXIT_OK and out.startswith("-0.384068484342")
    code, out, _ = run(capsys, "lugo", "--direct", "10000", "--show", "3")
    assert code == EXIT_OK and out.strip() == "-0.384"


def test_bernoulli(capsys):
    code, out, _ = run(capsys, "bernoulli", "--r", "1", "--show", "10")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "0.1666666667"
    assert "1/6" in out


def test_table_and_derivatives(capsys):
    code, out, _ = run(capsys, "table")
    assert code == EXIT_OK and len(out.splitlines()) == 2 + 21
    code, out, _ = run(capsys, "derivatives", "--terms", "3")
    assert code == EXIT_OK and len(out.splitlines()) == 5


def test_inequalities(capsys):
    code, out, _ = run(capsys, "inequalities", "--degree", "10")
    assert code == EXIT_OK
    assert "10\t10\tTrue" in out


def test_inequalities_degenerate(capsys):
    code, out, _ = run(capsys, "inequalities", "--degree", "17")
    assert code == EXIT_ACCURACY
    assert "degenerate" in out


def test_zeros_verify(capsys):
    code, out, _ = run(capsys, "zeros-verify")
    assert code == EXIT_OK
    assert "identity rhs  0.0230957" in out
    assert "zeros         100" in out


def test_xi_eval(capsys):
    code, out, _ = run(capsys, "xi-eval", "0.5", "2", "1", "--hadamard", "0", "--show", "8")
    assert code == EXIT_OK
    assert "xi=(0.49712078 + 0.0j)" in out
    assert "zeta=(1.6449341 + 0.0j)" in out
    assert "zeta=undefined" in out
    assert "product=" in out and "validity radius" in out


def test_xi_eval_bad_number(capsys):
    code, _, err = run(capsys, "xi-eval", "half")
    assert code == EXIT_USAGE and "not a complex number" in err


def test_xi_eval_radius_warning(capsys):
    code, _, err = run(capsys, "xi-eval", "0.5+30j")
    assert code == EXIT_OK and "warning:" in err


def test_grid_to_file(tmp_path, capsys):
    out = tmp_path / "g.csv"
    code, _, _ = run(capsys, "grid", "--steps", "7", "--out", str(out))
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "re,im,xi_re,xi_im,xi_abs"
    assert len(lines) == 50


def test_grid_bad_range(capsys):
    code, _, _ = run(capsys, "grid", "--re-min", "1", "--re-max", "0")
    assert code == EXIT_USAGE


def test_moments_cache_feeds_gamma(tmp_path, capsys):
    cache = tmp_path / "m.txt"
    code, _, _ = run(capsys, "moments", "--digits", "30", "--out", str(cache))
    assert code == EXIT_OK
    code, out, _ = run(capsys, "gamma", "--table", str(cache), "--show", "12")
    assert code == EXIT_OK and out.startswith("0.577215664902")


def test_table_file_feeds_gamma(tmp_path, capsys):
    path = tmp_path / "t.tsv"
    run(capsys, "table", "--out", str(path))
    code, out, _ = run(capsys, "gamma", "--table", str(path))
    assert code == EXIT_OK and out.startswith("0.577215664902")


@pytest.mark.parametrize("argv,code", [
    (["gamma", "--terms", "30"], EXIT_USAGE),
    (["gamma", "--digits", "10"], EXIT_USAGE),
    (["gamma", "--method", "z"], EXIT_USAGE),
    (["gamma", "--table", "/nonexistent/t.tsv"], EXIT_IO),
    (["zeros-verify", "--zeros-file", "/nonexistent/z.txt"], EXIT_IO),
])
def test_exit_codes(argv, code, capsys):
    assert run(capsys, *argv)[0] == code


def test_tampered_table_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.tsv"
    path.write_text("0\t1e-2\t-\t-\n1\tnot-a-number\t-\t-\n")
    code, _, err = run(capsys, "gamma", "--table", str(path))
    assert code == EXIT_FORMAT and "line 2" in err


def test_bad_zero_file_exit_code(tmp_path, capsys):
    path = tmp_path / "z.txt"
    path.write_text("14.1347\nfourteen\n")
    assert run(capsys, "zeros-verify", "--zeros-file", str(path))[0] == EXIT_FORMAT


def test_unknown_command():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(digits=19)
    with pytest.raises(UsageError):
        RunConfig(terms=0)
    with pytest.raises(UsageError):
        RunConfig(max_zeros=-1)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "xi_moment_lab", "gamma", "--show", "6"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("0.577216")
