import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambeknbe import dill as dl
from lambeknbe import mill as ml
from lambeknbe.gen import GenConfig, gen_derivation, gen_nf
from lambeknbe.nbe import normalize
from lambeknbe.syntax import Atom, Over, Tensor, Under, Unit
from lambeknbe.text import (
    ParseError,
    parse_derivation,
    parse_formula,
    parse_nf,
    print_derivation,
    print_formula,
    print_nf,
    print_sequent,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


class TestFormulaGrammar:
    def test_explicit_grouping(self):
        assert parse_formula("p * (q * r)") == Tensor(p, Tensor(q, r))

    def test_tensor_left_associates(self):
        assert parse_formula("p * q * r") == Tensor(Tensor(p, q), r)

    def test_residuals_do_not_associate(self):
        with pytest.raises(ParseError):
            parse_formula("q / p \\ r")

    def test_residual_parsing(self):
        assert parse_formula("q / p") == Over(q, p)
        assert parse_formula("p \\ q") == Under(p, q)
        assert parse_formula("(q / p) \\ r") == Under(Over(q, p), r)

    def test_unit_keyword(self):
        assert parse_formula("I") == Unit()
        assert parse_formula("p * I") == Tensor(p, Unit())

    def test_tensor_binds_tighter_than_residuals(self):
        assert parse_formula("p*q/r") == Over(Tensor(p, q), r)
        assert parse_formula("p/q*r") == Over(p, Tensor(q, r))

    def test_lolli_rejected_in_the_ordered_calculus(self):
        with pytest.raises(ParseError):
            parse_formula("p -o q")

    def test_lolli_right_associates(self):
        f = parse_formula("p -o q -o r", calculus="mill")
        assert f == ml.Lolli(p, ml.Lolli(q, r))

    def test_bang_binds_tightest(self):
        f = parse_formula("!p * q", calculus="dill")
        assert f == Tensor(dl.Bang(p), q)
        assert parse_formula("!(p * q)", calculus="dill") == dl.Bang(Tensor(p, q))

    def test_comments_and_whitespace(self):
        assert parse_formula("p # trailing\n * q") == Tensor(p, q)

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as e:
            parse_formula("p * )")
        assert e.value.line == 1 and e.value.col == 5


formulas = st.recursive(
    st.sampled_from([Atom("p"), Atom("q"), Atom("r"), Unit()]),
    lambda inner: st.one_of(
        st.builds(Tensor, inner, inner),
        st.builds(Over, inner, inner),
        st.builds(Under, inner, inner),
    ),
    max_leaves=18,
)


@given(formulas)
@settings(max_examples=300, deadline=None)
def test_formula_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@given(formulas)
@settings(max_examples=200, deadline=None)
def test_formula_print_is_canonical(f):
    s = print_formula(f)
    assert print_formula(parse_formula(s)) == s


class TestTermGrammar:
    def test_spec_example_parses_and_typechecks(self):
        src = (
            "lett[0] (ax (p*q)) (appr (lett[0] (pair (ax p) (ax q)) "
            "(lamr (pair (ax p) (pair (ax q) (ax r))))) (ax r))"
        )
        t = parse_derivation(src)
        from lambeknbe.syntax import Sequent, typecheck

        assert typecheck(t) == Sequent((Tensor(p, q), r), Tensor(p, Tensor(q, r)))

    def test_pair_of_axioms(self):
        from lambeknbe.syntax import Ax, ITensor

        assert parse_derivation("pair (ax p) (ax q)") == ITensor(Ax(p), Ax(q))

    def test_derivation_round_trip_on_population(self):
        for seed in range(400):
            t = gen_derivation(GenConfig(seed=seed, max_nodes=22))
            assert parse_derivation(print_derivation(t)) == t

    def test_nf_round_trip_on_population(self):
        for seed in range(400):
            n = gen_nf(GenConfig(seed=seed, max_nodes=22))
            assert parse_nf(print_nf(n)) == n

    def test_worked_example_nf_round_trip(self):
        n = normalize(
            parse_derivation(
                "lett[0] (ax (p*q)) (appr (lett[0] (pair (ax p) (ax q)) "
                "(lamr (pair (ax p) (pair (ax q) (ax r))))) (ax r))"
            )
        )
        assert parse_nf(print_nf(n)) == n
        assert print_nf(n) == "lett[0] (ax (p*q)) (pair (sw (ax p)) (pair (sw (ax q)) (sw (ax r))))"

    def test_mill_round_trip(self):
        for seed in range(150):
            t = gen_derivation(GenConfig(seed=seed, max_nodes=20, calculus="mill"))
            assert parse_derivation(print_derivation(t), "mill") == t

    def test_dill_round_trip(self):
        for seed in range(150):
            t = gen_derivation(GenConfig(seed=seed, max_nodes=20, calculus="dill"))
            assert parse_derivation(print_derivation(t), "dill") == t

    def test_dill_nf_round_trip(self):
        for seed in range(150):
            t = gen_derivation(GenConfig(seed=seed, max_nodes=16, calculus="dill"))
            n = dl.nbe(t)
            assert parse_nf(print_nf(n), "dill") == n


class TestSequentPrinting:
    def test_ordered(self):
        from lambeknbe.syntax import Sequent

        assert print_sequent(Sequent((Tensor(p, q), r), Tensor(p, Tensor(q, r)))) == "p*q, r |- p*(q*r)"
        assert print_sequent(Sequent((), Unit())) == "|- I"

    def test_named(self):
        seq = ml.MSequent((("x", p), ("y", ml.Lolli(q, p))), p)
        assert print_sequent(seq) == "x : p, y : q-op |- p"

    def test_dual_zone(self):
        seq = dl.DSequent((("w", p),), (("z", dl.Bang(p)),), p)
        assert print_sequent(seq) == "w : p ; z : !p |- p"
