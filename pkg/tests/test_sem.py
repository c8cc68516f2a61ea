import pytest

from lambeknbe.gen import SplitMix64
from lambeknbe.nf import (
    GammaPlusViolation,
    NAx,
    NETensor,
    NEUnit,
    NIOver,
    NIUnit,
    NSw,
    typecheck_nf,
)
from lambeknbe.nbe import reflect, reify
from lambeknbe.sem import (
    MEUnit,
    METensor,
    MEta,
    NfSlot,
    SemEnv,
    UNIT_WITNESS,
    VAtom,
    VOver,
    VTensor,
    VUnit,
    lcst_over,
    lcst_under,
    lmst,
    rcst_over,
    rcst_under,
    rmst,
    run_at,
    run_nf,
    tjoin,
    tmap,
    validate_value,
)
from lambeknbe.syntax import Atom, Over, Tensor, Under, Unit

p, q, r = Atom("p"), Atom("q"), Atom("r")


def atom_value(f: Atom) -> VAtom:
    return VAtom(f, (f,), NSw(NAx(f)))


def unit_link(rest, k=0):
    """Wrap a unit-elimination link around a chain, splitting its context at k."""
    return MEUnit(rest.cxt[:k], NAx(Unit()), rest)


def tensor_link(rest, k):
    pair = Tensor(rest.cxt[k], rest.cxt[k + 1])
    return METensor(rest.cxt[:k], NAx(pair), rest)


def rand_chain(rng: SplitMix64, payload, links: int):
    mv = MEta(payload)
    for _ in range(links):
        if rng.chance(50) and len(mv.cxt) >= 2:
            mv = tensor_link(mv, rng.below(len(mv.cxt) - 1))
        else:
            mv = unit_link(mv, rng.below(len(mv.cxt) + 1))
    return mv


def rand_nf_payload(rng: SplitMix64):
    f = Atom((["p", "q", "r"])[rng.below(3)])
    return NfSlot((f,), NSw(NAx(f)))


class TestFunctorAndJoin:
    def test_map_identity(self):
        mv = unit_link(MEta(NfSlot((p,), NSw(NAx(p)))))
        assert tmap(lambda x: x, mv) == mv

    def test_map_unit_case(self):
        slot = NfSlot((p,), NSw(NAx(p)))
        other = NfSlot((p,), NSw(NAx(p)))
        assert tmap(lambda s: other, MEta(slot)) == MEta(other)

    def test_map_under_one_link(self):
        slot = NfSlot((p,), NSw(NAx(p)))
        mv = unit_link(MEta(slot))
        out = tmap(lambda s: s, mv)
        assert out == mv

    def test_join_left_unit(self):
        mv = unit_link(MEta(NfSlot((p,), NSw(NAx(p)))))
        assert tjoin(MEta(mv)) == mv

    def test_join_right_unit(self):
        mv = unit_link(MEta(NfSlot((p,), NSw(NAx(p)))))
        assert tjoin(tmap(MEta, mv)) == mv

    def test_join_concatenates_links(self):
        inner = unit_link(MEta(NfSlot((p,), NSw(NAx(p)))))
        outer = MEUnit((), NAx(Unit()), MEta(inner))
        joined = tjoin(outer)
        assert joined == MEUnit((), NAx(Unit()), inner)

    def test_monad_laws_randomized(self):
        rng = SplitMix64(2024)
        for _ in range(300):
            mv = rand_chain(rng, rand_nf_payload(rng), rng.below(6))
            assert tjoin(MEta(mv)) == mv
            assert tjoin(tmap(MEta, mv)) == mv
        for _ in range(300):
            inner = rand_chain(rng, rand_nf_payload(rng), rng.below(3))
            mid = rand_chain(rng, inner, rng.below(3))
            outer = rand_chain(rng, mid, rng.below(3))
            assert tjoin(tjoin(outer)) == tjoin(tmap(tjoin, outer))


class TestStrengths:
    def test_left_strength_pairs_at_eta(self):
        row = SemEnv((((q,), atom_value(q)),))
        mv = MEta(SemEnv((((p,), atom_value(p)),)))
        out = lmst(row, mv)
        assert out == MEta(row + SemEnv((((p,), atom_value(p)),)))

    def test_left_strength_extends_link_prefix(self):
        row = SemEnv((((q,), atom_value(q)),))
        mv = unit_link(MEta(SemEnv((((p,), atom_value(p)),))))
        out = lmst(row, mv)
        assert isinstance(out, MEUnit)
        assert out.pre == (q,)
        assert out.cxt == (q, Unit(), p)

    def test_right_strength_mirrors(self):
        row = SemEnv((((q,), atom_value(q)),))
        mv = MEta(SemEnv((((p,), atom_value(p)),)))
        out = rmst(mv, row)
        assert out == MEta(SemEnv((((p,), atom_value(p)),)) + row)

    def test_right_strength_keeps_link_prefix(self):
        row = SemEnv((((q,), atom_value(q)),))
        mv = unit_link(MEta(SemEnv((((p,), atom_value(p)),))))
        out = rmst(mv, row)
        assert out.pre == () and out.cxt == (Unit(), p, q)


class TestClosedStrengths:
    def hom_payload(self):
        return reflect(Over(q, p), NAx(Over(q, p)))

    def test_apply_at_eta(self):
        f = self.hom_payload()
        out = rcst_over(MEta(f), (p,), atom_value(p))
        assert isinstance(out, MEta)
        assert out.payload.nf == NSw(NEOverApplied())

    def test_apply_under_one_link(self):
        f = self.hom_payload()
        mv = MEUnit((), NAx(Unit()), MEta(f))
        out = rcst_over(mv, (p,), atom_value(p))
        assert isinstance(out, MEUnit) and isinstance(out.rest, MEta)

    def test_apply_under_two_links(self):
        f = self.hom_payload()
        mv = MEUnit((), NAx(Unit()), MEUnit((), NAx(Unit()), MEta(f)))
        out = rcst_over(mv, (p,), atom_value(p))
        assert isinstance(out, MEUnit) and isinstance(out.rest, MEUnit)
        assert isinstance(out.rest.rest, MEta)

    def test_interdefinable_with_monoidal_strengths(self):
        # pushing one function over a chain of arguments equals pairing the
        # function on the left and then applying pointwise
        f = self.hom_payload()
        apply_row = lambda row: row.entries[0][1].fn(row.entries[1][0], row.entries[1][1])

        arg_vals = unit_link(MEta(atom_value(p)))
        arg_rows = unit_link(MEta(SemEnv((((p,), atom_value(p)),))))
        via_lcst = lcst_over(f, arg_vals)
        via_lmst = tmap(apply_row, lmst(SemEnv(((f.cxt, f),)), arg_rows))
        assert reify_chain_atoms(via_lcst) == reify_chain_atoms(via_lmst)

        fun_chain = unit_link(MEta(f))
        fun_rows = unit_link(MEta(SemEnv(((f.cxt, f),))))
        via_rcst = rcst_over(fun_chain, (p,), atom_value(p))
        via_rmst = tmap(apply_row, rmst(fun_rows, SemEnv((((p,), atom_value(p)),))))
        assert reify_chain_atoms(via_rcst) == reify_chain_atoms(via_rmst)

    def test_under_variant_extends_prefix(self):
        g = reflect(Under(p, q), NAx(Under(p, q)))
        mv = MEUnit((), NAx(Unit()), MEta(g))
        out = rcst_under(mv, (p,), atom_value(p))
        assert out.pre == (p,)

    def test_lcst_under_keeps_links(self):
        g = reflect(Under(p, q), NAx(Under(p, q)))
        arg_chain = unit_link(MEta(atom_value(p)))
        out = lcst_under(g, arg_chain)
        assert isinstance(out, MEUnit) and out.pre == ()


def NEOverApplied():
    from lambeknbe.nf import NEOver

    return NEOver(NAx(Over(q, p)), NSw(NAx(p)))


def reify_chain_atoms(mv):
    """Discharge a chain of atom values into a normal form, for comparisons."""
    return run_nf(tmap(lambda v: NfSlot(v.cxt, v.nf), mv))


class TestRun:
    def test_run_nf_eta(self):
        slot = NfSlot((p,), NSw(NAx(p)))
        assert run_nf(MEta(slot)) == NSw(NAx(p))

    def test_run_nf_unit_link(self):
        slot = NfSlot((p,), NSw(NAx(p)))
        mv = MEUnit((p,), NAx(Unit()), MEta(slot))
        assert run_nf(mv) == NEUnit(1, NAx(Unit()), NSw(NAx(p)))

    def test_run_nf_tensor_link(self):
        pair = Tensor(p, q)
        inner = NfSlot((p, q), NITensor_())
        mv = METensor((), NAx(pair), MEta(inner))
        out = run_nf(mv)
        assert out == NETensor(0, NAx(pair), NITensor_())
        typecheck_nf(out)

    def test_run_nf_guards_negative_succedents(self):
        slot = NfSlot((), NIOver(NSw(NAx(p))))  # concludes p/p
        mv = MEUnit((), NAx(Unit()), MEta(slot))
        with pytest.raises(GammaPlusViolation):
            run_nf(mv)

    def test_run_at_atom_eta(self):
        v = atom_value(p)
        assert run_at(p, MEta(v)) == v

    def test_run_at_tensor_joins(self):
        f = Tensor(p, q)
        v = reflect(f, NAx(f))
        out = run_at(f, MEta(v))
        assert out == v
        validate_value(out)

    def test_run_at_hom_discharges_chain_into_body(self):
        # one unit link over a reflected function: applying the run value at
        # an atom pushes the link inside and reifies to a unit elimination
        f = Over(q, p)
        fun = reflect(f, NAx(f))
        mv = MEUnit((), NAx(Unit()), MEta(fun))
        v = run_at(f, mv)
        out = reify(f, v)
        assert out == NIOver(NEUnit(0, NAx(Unit()), NSw(NEOverApplied())))
        assert typecheck_nf(out).antecedent == (Unit(), f)


def NITensor_():
    from lambeknbe.nf import NITensor

    return NITensor(NSw(NAx(p)), NSw(NAx(q)))


class TestValidator:
    def test_accepts_reflected_values(self):
        for f in (p, Unit(), Tensor(p, q), Tensor(Tensor(p, q), r)):
            v = reflect(f, NAx(f))
            validate_value(v)

    def test_rejects_context_drift(self):
        broken = VUnit(Unit(), (p,), MEta(UNIT_WITNESS))
        with pytest.raises(AssertionError):
            validate_value(broken)
