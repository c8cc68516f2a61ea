import pytest

from lambeknbe.gen import GenConfig, gen_derivation
from lambeknbe.nbe import normalize
from lambeknbe.nf import nf_equal
from lambeknbe.rewrite import (
    Direction,
    EquationId,
    LR,
    RL,
    Related,
    RewriteStep,
    SequentMismatch,
    StepNotApplicable,
    Unknown,
    _flip,
    _replace,
    _try_rewrite,
    applicable_steps,
    apply_step,
    equiv_oracle,
    local_rewrites,
    non_equation_witnesses,
    successors,
)
from lambeknbe.syntax import (
    Atom,
    Ax,
    EOver,
    ETensor,
    EUnder,
    EUnit,
    IOver,
    ITensor,
    IUnder,
    IUnit,
    Over,
    Tensor,
    Under,
    children,
    term_size,
    typecheck,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


class TestApplicableSteps:
    def test_unit_beta_at_root(self):
        t = EUnit(0, IUnit(), Ax(p))
        steps = applicable_steps(t, eta_cap=0)
        assert RewriteStep((), EquationId.BetaUnit, LR) in steps

    def test_atom_axiom_with_zero_cap(self):
        assert applicable_steps(Ax(p), eta_cap=0) == []

    def test_beta_over_redex(self):
        t = EOver(IOver(ITensor(Ax(p), Ax(q))), Ax(q))
        steps = applicable_steps(t, eta_cap=0)
        assert RewriteStep((), EquationId.BetaOver, LR) in steps

    def test_expansions_appear_under_a_generous_cap(self):
        steps = applicable_steps(Ax(p), eta_cap=40)
        assert RewriteStep((), EquationId.BetaUnit, RL) in steps

    def test_enumeration_order_is_preorder_then_equation_then_direction(self):
        t = EUnit(0, IUnit(), Ax(p))
        steps = applicable_steps(t, eta_cap=40)
        keys = [(s.path, s.eq.value, s.direction is RL) for s in steps]
        assert keys == sorted(keys)

    def test_indexed_enumeration_matches_brute_force(self, small_derivations):
        def brute(t, cap):
            out = []

            def walk(sub, path):
                for eq in EquationId:
                    for d in (LR, RL):
                        cand = _try_rewrite(sub, eq, d)
                        if cand is None:
                            continue
                        if term_size(cand) > term_size(sub) and term_size(cand) > cap:
                            continue
                        out.append((RewriteStep(path, eq, d), cand))
                for i, c in enumerate(children(sub)):
                    walk(c, path + (i,))

            walk(t, ())
            return out

        for t in small_derivations[:120]:
            assert local_rewrites(t, 40) == brute(t, 40)


class TestApplyStep:
    def test_unit_beta(self):
        t = EUnit(0, IUnit(), Ax(p))
        assert apply_step(t, RewriteStep((), EquationId.BetaUnit, LR)) == Ax(p)

    def test_eta_over_expansion(self):
        t = Ax(Over(q, p))
        out = apply_step(t, RewriteStep((), EquationId.EtaOver, RL))
        assert out == IOver(EOver(Ax(Over(q, p)), Ax(p)))

    def test_not_applicable(self):
        t = ETensor(0, Ax(Tensor(p, q)), ITensor(Ax(p), Ax(q)))
        with pytest.raises(StepNotApplicable):
            apply_step(t, RewriteStep((), EquationId.BetaTensor, LR))

    def test_bad_path(self):
        with pytest.raises(StepNotApplicable):
            apply_step(Ax(p), RewriteStep((3,), EquationId.BetaUnit, LR))

    def test_step_soundness_on_population(self, small_derivations):
        for t in small_derivations[:200]:
            seq = typecheck(t)
            for step, w in successors(t, eta_cap=25):
                assert typecheck(w) == seq

    def test_involution_up_to_normal_form(self, small_derivations):
        for t in small_derivations[:120]:
            n = normalize(t)
            for step in applicable_steps(t, eta_cap=25)[:6]:
                mid = apply_step(t, step)
                try:
                    back = apply_step(mid, _flip(step))
                except StepNotApplicable:
                    continue  # beta contractions have no expressible inverse
                assert nf_equal(normalize(back), n)


class TestPermutativeRows:
    def test_unit_elim_commutes_with_over_intro(self):
        # letu over an introduction pushes inside and back out
        body = ITensor(Ax(p), Ax(q))
        t = EUnit(0, Ax(Unit_()), IOver(body))
        steps = applicable_steps(t, eta_cap=0)
        s = RewriteStep((), EquationId.PermUnitIOver, LR)
        assert s in steps
        out = apply_step(t, s)
        assert out == IOver(EUnit(0, Ax(Unit_()), body))
        assert apply_step(out, _flip(s)) == t

    def test_nested_unit_elims_reassociate(self):
        inner = EUnit(0, Ax(Unit_()), Ax(Unit_()))
        t = EUnit(1, inner, ITensor(Ax(p), Ax(q)))
        s = RewriteStep((), EquationId.PermEUnitEUnit, LR)
        out = apply_step(t, s)
        assert typecheck(out) == typecheck(t)
        assert apply_step(out, _flip(s)) == t


def Unit_():
    from lambeknbe.syntax import Unit

    return Unit()


class TestEquivOracle:
    def test_reflexivity(self):
        t = Ax(p)
        assert equiv_oracle(t, t, 40, 6) == Related(())

    def test_single_step(self):
        t = EUnit(0, IUnit(), Ax(p))
        v = equiv_oracle(t, Ax(p), 40, 6)
        assert isinstance(v, Related) and len(v.trace) == 1

    def test_sequent_mismatch(self):
        with pytest.raises(SequentMismatch):
            equiv_oracle(Ax(p), Ax(q), 40, 6)

    def test_trace_replays(self, small_derivations):
        import itertools

        checked = 0
        for t in small_derivations:
            if checked >= 25:
                break
            u = apply_step_chain(t, 2)
            if u is None:
                continue
            v = equiv_oracle(t, u, 40, 6)
            if isinstance(v, Related):
                cur = t
                for step in v.trace:
                    cur = apply_step(cur, step)
                    assert typecheck(cur) == typecheck(t)
                assert cur == u
                checked += 1
        assert checked >= 20

    def test_missing_equations_stay_unknown(self):
        for a, b in non_equation_witnesses():
            assert equiv_oracle(a, b, 40, 6) == Unknown()


def apply_step_chain(t, k):
    from lambeknbe.gen import SplitMix64

    rng = SplitMix64(hash(t) & ((1 << 32) - 1))
    cur = t
    for _ in range(k):
        opts = applicable_steps(cur, eta_cap=30)
        if not opts:
            return None
        cur = apply_step(cur, opts[rng.below(len(opts))])
    return cur


class TestNonEquationWitnesses:
    def test_exactly_three(self):
        assert len(non_equation_witnesses()) == 3

    def test_pairs_share_sequents(self):
        for a, b in non_equation_witnesses():
            assert typecheck(a) == typecheck(b)

    def test_normal_forms_differ(self):
        for a, b in non_equation_witnesses():
            assert not nf_equal(normalize(a), normalize(b))
