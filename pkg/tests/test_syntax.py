import pytest

from lambeknbe.nf import emb_up
from lambeknbe.syntax import (
    Atom,
    Ax,
    Context,
    EnvMismatch,
    EOver,
    ETensor,
    EUnder,
    EUnit,
    Env,
    IOver,
    ITensor,
    IUnder,
    IUnit,
    IllFormed,
    Over,
    Sequent,
    Tensor,
    Under,
    Unit,
    children,
    ids_env,
    sub1,
    substitute,
    term_size,
    typecheck,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def example43():
    """The tensor-reassociation derivation: p*q, r |- p*(q*r)."""
    inner = IOver(ITensor(Ax(p), ITensor(Ax(q), Ax(r))))
    mid = ETensor(0, ITensor(Ax(p), Ax(q)), inner)
    return ETensor(0, Ax(Tensor(p, q)), EOver(mid, Ax(r)))


class TestTypecheck:
    def test_axiom(self):
        assert typecheck(Ax(p)) == Sequent((p,), p)

    def test_worked_example(self):
        assert typecheck(example43()) == Sequent(
            (Tensor(p, q), r), Tensor(p, Tensor(q, r))
        )

    def test_rule_mismatch(self):
        with pytest.raises(IllFormed):
            typecheck(EOver(Ax(p), Ax(p)))

    def test_error_paths_point_at_the_bad_node(self):
        bad = ITensor(Ax(p), EOver(Ax(p), Ax(q)))
        with pytest.raises(IllFormed) as e:
            typecheck(bad)
        assert e.value.path == (1,)

    def test_unit_rules(self):
        assert typecheck(IUnit()) == Sequent((), Unit())
        t = EUnit(1, IUnit(), ITensor(Ax(p), Ax(q)))
        assert typecheck(t) == Sequent((p, q), Tensor(p, q))

    def test_insert_at_out_of_range(self):
        with pytest.raises(IllFormed):
            typecheck(EUnit(3, IUnit(), Ax(p)))
        with pytest.raises(IllFormed):
            typecheck(ETensor(1, Ax(Tensor(p, q)), ITensor(Ax(p), Ax(q))))

    def test_etensor_components_must_match(self):
        cont = ITensor(Ax(q), Ax(p))  # q, p  but the scrutinee provides p, q
        with pytest.raises(IllFormed):
            typecheck(ETensor(0, Ax(Tensor(p, q)), cont))

    def test_implication_introductions(self):
        assert typecheck(IOver(ITensor(Ax(p), Ax(q)))) == Sequent((p,), Over(Tensor(p, q), q))
        assert typecheck(IUnder(ITensor(Ax(p), Ax(q)))) == Sequent((q,), Under(p, Tensor(p, q)))

    def test_total_on_arbitrary_trees(self, small_derivations):
        for d in small_derivations[:500]:
            typecheck(d)  # never raises on generated terms, never loops


class TestIdsEnv:
    def test_empty(self):
        assert ids_env(()) == Env((), ())

    def test_singleton(self):
        assert ids_env((p,)) == Env((Ax(p),), ((p,),))

    def test_two_entries(self):
        g = (p, Over(q, p))
        assert ids_env(g) == Env((Ax(p), Ax(Over(q, p))), ((p,), (Over(q, p),)))

    def test_source_equals_target(self):
        g = (p, q, Tensor(p, q))
        env = ids_env(g)
        assert env.source == g and env.target == g


class TestSubstitute:
    def test_identity_env_is_syntactic_identity(self):
        t = example43()
        assert substitute(ids_env(typecheck(t).antecedent), t) == t

    def test_axiom_substitution(self):
        u = ITensor(Ax(p), Ax(q))
        sigma = Env((u,), (typecheck(u).antecedent,))
        assert substitute(sigma, Ax(Tensor(p, q))) == u

    def test_insert_at_shifts_with_wider_sources(self):
        # replace the single hypothesis before the splice point by a
        # two-hypothesis derivation and check the conclusion via typecheck
        t = ETensor(1, Ax(Tensor(p, q)), ITensor(Ax(r), ITensor(Ax(p), Ax(q))))
        assert typecheck(t) == Sequent((r, Tensor(p, q)), Tensor(r, Tensor(p, q)))
        sigma = Env(
            (EUnit(0, IUnit(), Ax(r)), Ax(Tensor(p, q))),
            ((r,), (Tensor(p, q),)),
        )
        out = substitute(sigma, t)
        assert typecheck(out) == typecheck(t)
        # a genuinely wider source: r replaced by a derivation from two hypotheses
        two_wide = EUnder(Ax(p), Ax(Under(p, r)))  # p, p\r |- r
        sigma2 = Env((two_wide, Ax(Tensor(p, q))), ((p, Under(p, r)), (Tensor(p, q),)))
        out2 = substitute(sigma2, t)
        assert typecheck(out2) == Sequent((p, Under(p, r), Tensor(p, q)), Tensor(r, Tensor(p, q)))
        assert out2.insert_at == 2  # shifted by the extra hypothesis

    def test_env_mismatch(self):
        with pytest.raises(EnvMismatch):
            substitute(ids_env((p,)), ITensor(Ax(p), Ax(q)))

    def test_type_preservation_on_population(self, small_derivations):
        for d in small_derivations[:400]:
            seq = typecheck(d)
            assert typecheck(substitute(ids_env(seq.antecedent), d)) == seq

    def test_identity_env_population(self, small_derivations, many_nfs):
        population = small_derivations + [emb_up(n) for n in many_nfs[: 10_000 - len(small_derivations)]]
        assert len(population) == 10_000
        for t in population:
            assert substitute(ids_env(typecheck(t).antecedent), t) == t

    def test_split_env_agrees_with_nodewise_substitution(self, small_derivations, many_nfs):
        # at every binary node, substituting the identity environment split
        # into halves equals substituting into the children separately
        checked = 0
        population = small_derivations + [emb_up(n) for n in many_nfs]
        for t in population:
            if checked >= 10_000:
                break
            for c in children(t):
                seq = typecheck(c)
                out = substitute(ids_env(seq.antecedent), c)
                assert out == c and typecheck(out) == seq
                checked += 1
        assert checked >= 10_000


class TestSub1:
    def test_axiom_target(self):
        t = ITensor(Ax(p), Ax(q))
        assert sub1(t, 0, Ax(Tensor(p, q))) == t

    def test_beta_over_shape(self):
        # contracting appr (lamr body) u  must equal plugging u at the last slot
        body = ITensor(Ax(p), Ax(q))  # p, q |- p*q
        u = EUnit(0, IUnit(), Ax(q))  # q |- q, with an extra unit elimination
        plugged = sub1(u, 1, body)
        assert typecheck(plugged) == Sequent((p, q), Tensor(p, q))
        assert plugged == ITensor(Ax(p), u)

    def test_out_of_range(self):
        with pytest.raises(EnvMismatch):
            sub1(Ax(p), 3, ITensor(Ax(p), Ax(q)))

    def test_formula_mismatch(self):
        with pytest.raises(EnvMismatch):
            sub1(Ax(q), 0, ITensor(Ax(p), Ax(q)))


def test_term_size_counts_nodes():
    assert term_size(Ax(p)) == 1
    assert term_size(example43()) == 14


def test_context_concatenation_monoid():
    a: Context = (p, q)
    b: Context = (r,)
    c: Context = ()
    assert (a + b) + c == a + (b + c)
    assert a + () == a == () + a
