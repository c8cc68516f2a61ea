import io
import contextlib

import pytest

from lambeknbe.cli import main

EXAMPLE43 = (
    "lett[0] (ax (p*q)) (appr (lett[0] (pair (ax p) (ax q)) "
    "(lamr (pair (ax p) (pair (ax q) (ax r))))) (ax r))\n"
)
EXAMPLE43_NF = "lett[0] (ax (p*q)) (pair (sw (ax p)) (pair (sw (ax q)) (sw (ax r))))"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def example_file(tmp_path):
    f = tmp_path / "example43.lam"
    f.write_text("# worked example\n" + EXAMPLE43)
    return str(f)


class TestCheck:
    def test_prints_the_sequent(self, example_file):
        code, out, _ = run(["check", example_file])
        assert code == 0
        assert out == "p*q, r |- p*(q*r)\n"

    def test_ill_formed_exits_one_with_a_path(self, tmp_path):
        f = tmp_path / "bad.lam"
        f.write_text("appr (ax p) (ax p)\n")
        code, out, err = run(["check", str(f)])
        assert code == 1 and out == ""
        assert "[]" in err  # the offending path

    def test_parse_error_position(self, tmp_path):
        f = tmp_path / "bad.lam"
        f.write_text("pair (ax p\n")
        code, _, err = run(["check", str(f)])
        assert code == 1 and "1:" in err


class TestNbe:
    def test_worked_example_golden(self, example_file):
        code, out, _ = run(["nbe", example_file])
        assert code == 0
        assert out == EXAMPLE43_NF + "\n"

    def test_byte_identical_across_runs(self, example_file):
        a = run(["nbe", example_file])
        b = run(["nbe", example_file])
        assert a == b


class TestEquiv:
    def test_same_file_is_related_with_an_empty_trace(self, example_file):
        code, out, _ = run(["equiv", example_file, example_file])
        assert code == 0 and out == ""

    def test_one_step_apart(self, tmp_path):
        f1 = tmp_path / "a.lam"
        f2 = tmp_path / "b.lam"
        f1.write_text("ax (q/p)\n")
        f2.write_text("lamr (appr (ax (q/p)) (ax p))\n")
        code, out, _ = run(["equiv", str(f1), str(f2)])
        assert code == 0
        assert out.strip() == ":EtaOver:RL"

    def test_unknown_exits_two(self, tmp_path):
        # the first deliberately-missing conversion
        f1 = tmp_path / "a.lam"
        f2 = tmp_path / "b.lam"
        f1.write_text("pair (lett[0] (ax (a*b)) (pair (ax a) (ax b))) (ax c)\n")
        f2.write_text("lett[0] (ax (a*b)) (pair (pair (ax a) (ax b)) (ax c))\n")
        code, out, err = run(["equiv", str(f1), str(f2), "--nodes", "40", "--steps", "6"])
        assert code == 2
        assert "unknown" in err

    def test_sequent_mismatch_is_an_error(self, tmp_path):
        f1 = tmp_path / "a.lam"
        f2 = tmp_path / "b.lam"
        f1.write_text("ax p\n")
        f2.write_text("ax q\n")
        code, _, _ = run(["equiv", str(f1), str(f2)])
        assert code == 1


class TestGen:
    def test_deterministic_output(self):
        a = run(["gen", "--seed", "9", "--size", "25"])
        b = run(["gen", "--seed", "9", "--size", "25"])
        assert a == b and a[0] == 0

    def test_output_parses_and_typechecks(self, tmp_path):
        code, out, _ = run(["gen", "--seed", "4", "--size", "20"])
        assert code == 0
        f = tmp_path / "gen.lam"
        f.write_text(out)
        assert run(["check", str(f)])[0] == 0

    def test_mill_and_dill(self, tmp_path):
        for calc in ("mill", "dill"):
            code, out, _ = run(["gen", "--seed", "3", "--size", "18", "--calculus", calc])
            assert code == 0
            f = tmp_path / f"gen-{calc}.lam"
            f.write_text(out)
            assert run(["check", str(f), "--calculus", calc])[0] == 0


class TestStep:
    def test_list_then_apply(self, tmp_path):
        f = tmp_path / "t.lam"
        f.write_text("letu[0] unit (ax p)\n")
        code, out, _ = run(["step", str(f), "--list", "--eta-cap", "0"])
        assert code == 0
        assert ":BetaUnit:LR" in out.splitlines()
        code, out, _ = run(["step", str(f), "--apply", ":BetaUnit:LR"])
        assert code == 0 and out == "ax p\n"

    def test_apply_rejects_non_matching(self, tmp_path):
        f = tmp_path / "t.lam"
        f.write_text("ax p\n")
        code, _, err = run(["step", str(f), "--apply", ":BetaOver:LR"])
        assert code == 1 and "does not match" in err

    def test_mill_steps(self, tmp_path):
        f = tmp_path / "m.lam"
        f.write_text("app (lam x. (ax x : p)) (ax w : p)\n")
        code, out, _ = run(["step", str(f), "--list", "--eta-cap", "0", "--calculus", "mill"])
        assert code == 0 and ":BetaLolli:LR" in out.splitlines()
        code, out, _ = run(["step", str(f), "--apply", ":BetaLolli:LR", "--calculus", "mill"])
        assert code == 0 and out == "ax w : p\n"
