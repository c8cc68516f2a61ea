"""Kripke-model value domain: per-formula values and the neutral-chain monad.

A `MonadicValue` is a finite chain of unit/tensor eliminations with neutral
scrutinees, ending in a payload.  Payloads are anything carrying a context:
rows of values (`SemEnv`, which doubles as the unit witness when empty and as
the tensor pair when it has two entries), bare semantic values, normal-form
slots, or nested chains.  Context-list concatenation realizes the structural
isomorphisms of the tensor, so associativity and unit bookkeeping is literal
tuple concatenation throughout.

Hom values store plain Python callables taking the argument's context
explicitly; they must be pure (identical reified output for identical
arguments), which tests enforce by reifying twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .nf import GammaPlusViolation, Ne, Nf, typecheck_ne, typecheck_nf
from .syntax import (
    Atom,
    Context,
    Formula,
    Over,
    Sequent,
    Tensor,
    Under,
    Unit,
    is_negative,
)


# ---------------------------------------------------------------------------
# Values

class SemValue:
    __slots__ = ()


@dataclass(frozen=True)
class VAtom(SemValue):
    formula: Atom
    cxt: Context
    nf: Nf


@dataclass(frozen=True)
class VUnit(SemValue):
    formula: Formula
    cxt: Context
    chain: "MonadicValue"  # payloads: empty SemEnv rows


@dataclass(frozen=True)
class VTensor(SemValue):
    formula: Tensor
    cxt: Context
    chain: "MonadicValue"  # payloads: two-entry SemEnv rows


@dataclass(frozen=True)
class VOver(SemValue):
    formula: Over
    cxt: Context
    fn: Callable[[Context, SemValue], SemValue]  # result lives at (cxt, arg cxt)


@dataclass(frozen=True)
class VUnder(SemValue):
    formula: Under
    cxt: Context
    fn: Callable[[Context, SemValue], SemValue]  # result lives at (arg cxt, cxt)


@dataclass(frozen=True)
class SemEnv:
    """A row of semantic values, each with its slice of the home context."""
    entries: tuple[tuple[Context, SemValue], ...] = ()

    @property
    def cxt(self) -> Context:
        return sum((c for c, _ in self.entries), ())

    def __len__(self) -> int:
        return len(self.entries)

    def __add__(self, other: "SemEnv") -> "SemEnv":
        return SemEnv(self.entries + other.entries)

    def split(self, n: int) -> tuple["SemEnv", "SemEnv"]:
        return SemEnv(self.entries[:n]), SemEnv(self.entries[n:])


UNIT_WITNESS = SemEnv(())


@dataclass(frozen=True)
class NfSlot:
    """A normal form together with the context it lives in."""
    cxt: Context
    nf: Nf


# ---------------------------------------------------------------------------
# Monadic values

class MonadicValue:
    __slots__ = ()


@dataclass(frozen=True)
class MEta(MonadicValue):
    payload: object  # anything with .cxt

    @property
    def cxt(self) -> Context:
        return self.payload.cxt


@dataclass(frozen=True)
class MEUnit(MonadicValue):
    """A neutral of unit type spliced after `pre`; the rest skips its context."""
    pre: Context
    ne: Ne
    rest: "MonadicValue"

    @property
    def cxt(self) -> Context:
        mid = typecheck_ne(self.ne).antecedent
        post = self.rest.cxt[len(self.pre):]
        return self.pre + mid + post


@dataclass(frozen=True)
class METensor(MonadicValue):
    """A neutral of tensor type; the rest consumes the two components after `pre`."""
    pre: Context
    ne: Ne
    rest: "MonadicValue"

    @property
    def cxt(self) -> Context:
        mid = typecheck_ne(self.ne).antecedent
        post = self.rest.cxt[len(self.pre) + 2:]
        return self.pre + mid + post


# ---------------------------------------------------------------------------
# Functor, multiplication, strengths

def tmap(f, mv: MonadicValue) -> MonadicValue:
    """Apply a context-preserving payload transformer under the chain."""
    match mv:
        case MEta(x):
            return MEta(f(x))
        case MEUnit(pre, ne, rest):
            return MEUnit(pre, ne, tmap(f, rest))
        case METensor(pre, ne, rest):
            return METensor(pre, ne, tmap(f, rest))
    raise TypeError(f"not a monadic value: {mv!r}")


def tjoin(mv: MonadicValue) -> MonadicValue:
    """Concatenate a chain of chains (payloads must be monadic values)."""
    match mv:
        case MEta(inner):
            return inner
        case MEUnit(pre, ne, rest):
            return MEUnit(pre, ne, tjoin(rest))
        case METensor(pre, ne, rest):
            return METensor(pre, ne, tjoin(rest))
    raise TypeError(f"not a monadic value: {mv!r}")


def lmst(row: SemEnv, mv: MonadicValue) -> MonadicValue:
    """Left strength: pair a row onto the chain, extending link prefixes."""
    g = row.cxt
    match mv:
        case MEta(y):
            return MEta(row + y)
        case MEUnit(pre, ne, rest):
            return MEUnit(g + pre, ne, lmst(row, rest))
        case METensor(pre, ne, rest):
            return METensor(g + pre, ne, lmst(row, rest))
    raise TypeError(f"not a monadic value: {mv!r}")


def rmst(mv: MonadicValue, row: SemEnv) -> MonadicValue:
    """Right strength: link suffixes grow implicitly, only payloads change."""
    match mv:
        case MEta(y):
            return MEta(y + row)
        case MEUnit(pre, ne, rest):
            return MEUnit(pre, ne, rmst(rest, row))
        case METensor(pre, ne, rest):
            return METensor(pre, ne, rmst(rest, row))
    raise TypeError(f"not a monadic value: {mv!r}")


def rcst_over(mv: MonadicValue, arg_cxt: Context, arg: SemValue) -> MonadicValue:
    """Closed strength: push an application to hom payloads under the chain."""
    match mv:
        case MEta(f):
            return MEta(f.fn(arg_cxt, arg))
        case MEUnit(pre, ne, rest):
            return MEUnit(pre, ne, rcst_over(rest, arg_cxt, arg))
        case METensor(pre, ne, rest):
            return METensor(pre, ne, rcst_over(rest, arg_cxt, arg))
    raise TypeError(f"not a monadic value: {mv!r}")


def rcst_under(mv: MonadicValue, arg_cxt: Context, arg: SemValue) -> MonadicValue:
    """Mirror of rcst_over: the argument context lands on the left."""
    g = arg_cxt
    match mv:
        case MEta(f):
            return MEta(f.fn(arg_cxt, arg))
        case MEUnit(pre, ne, rest):
            return MEUnit(g + pre, ne, rcst_under(rest, arg_cxt, arg))
        case METensor(pre, ne, rest):
            return METensor(g + pre, ne, rcst_under(rest, arg_cxt, arg))
    raise TypeError(f"not a monadic value: {mv!r}")


def lcst_over(f: SemValue, mv: MonadicValue) -> MonadicValue:
    """Other closed strength: apply one hom value across a chain of arguments."""
    g = f.cxt
    match mv:
        case MEta(x):
            return MEta(f.fn(x.cxt, x))
        case MEUnit(pre, ne, rest):
            return MEUnit(g + pre, ne, lcst_over(f, rest))
        case METensor(pre, ne, rest):
            return METensor(g + pre, ne, lcst_over(f, rest))
    raise TypeError(f"not a monadic value: {mv!r}")


def lcst_under(f: SemValue, mv: MonadicValue) -> MonadicValue:
    match mv:
        case MEta(x):
            return MEta(f.fn(x.cxt, x))
        case MEUnit(pre, ne, rest):
            return MEUnit(pre, ne, lcst_under(f, rest))
        case METensor(pre, ne, rest):
            return METensor(pre, ne, lcst_under(f, rest))
    raise TypeError(f"not a monadic value: {mv!r}")


# ---------------------------------------------------------------------------
# Running the monad

def run_nf(mv: MonadicValue) -> Nf:
    """Discharge a chain over normal-form payloads into one normal form.

    Only legal when the payload's succedent is non-negative, since the
    residual eliminations cannot conclude an implication.
    """
    from .nf import NEUnit, NETensor

    match mv:
        case MEta(slot):
            return slot.nf
        case MEUnit(pre, ne, rest):
            inner = run_nf(rest)
            if is_negative(typecheck_nf(inner).succedent):
                raise GammaPlusViolation((), "cannot run a unit elimination at an implication")
            return NEUnit(len(pre), ne, inner)
        case METensor(pre, ne, rest):
            inner = run_nf(rest)
            if is_negative(typecheck_nf(inner).succedent):
                raise GammaPlusViolation((), "cannot run a tensor elimination at an implication")
            return NETensor(len(pre), ne, inner)
    raise TypeError(f"not a monadic value: {mv!r}")


def run_at(formula: Formula, mv: MonadicValue) -> SemValue:
    """The per-formula algebra discharging the monad onto a value."""
    match formula:
        case Atom():

            def slot(v: VAtom) -> NfSlot:
                return NfSlot(v.cxt, v.nf)

            return VAtom(formula, mv.cxt, run_nf(tmap(slot, mv)))
        case Unit():
            return VUnit(formula, mv.cxt, tjoin(tmap(lambda v: v.chain, mv)))
        case Tensor():
            return VTensor(formula, mv.cxt, tjoin(tmap(lambda v: v.chain, mv)))
        case Over(result, _):
            home = mv.cxt

            def apply_over(arg_cxt: Context, arg: SemValue) -> SemValue:
                return run_at(result, rcst_over(mv, arg_cxt, arg))

            return VOver(formula, home, apply_over)
        case Under(_, result):
            home = mv.cxt

            def apply_under(arg_cxt: Context, arg: SemValue) -> SemValue:
                return run_at(result, rcst_under(mv, arg_cxt, arg))

            return VUnder(formula, home, apply_under)
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Consistency checks used by the test suite

def validate_value(v: SemValue) -> None:
    """Check tags, payload shapes, and context accounting, recursively."""
    match v:
        case VAtom(formula, cxt, nf):
            seq = typecheck_nf(nf)
            assert seq == Sequent(cxt, formula), f"atom value at {seq}, expected {cxt} => {formula}"
        case VUnit(_, cxt, chain):
            assert chain.cxt == cxt, "unit chain context drifted"
            _validate_chain(chain, _expect_unit_row)
        case VTensor(formula, cxt, chain):
            assert chain.cxt == cxt, "tensor chain context drifted"
            _validate_chain(chain, lambda row: _expect_pair_row(formula, row))
        case VOver() | VUnder():
            pass  # callables are checked extensionally, by reification
        case _:
            raise TypeError(f"not a semantic value: {v!r}")


def _expect_unit_row(row) -> None:
    assert isinstance(row, SemEnv) and len(row) == 0, "unit payload must be the empty row"


def _expect_pair_row(formula: Tensor, row) -> None:
    assert isinstance(row, SemEnv) and len(row) == 2, "tensor payload must be a two-entry row"
    (lc, lv), (rc, rv) = row.entries
    assert lv.formula == formula.left and rv.formula == formula.right, "pair component tags"
    assert lv.cxt == lc and rv.cxt == rc, "pair component contexts"
    validate_value(lv)
    validate_value(rv)


def _validate_chain(mv: MonadicValue, check_payload) -> None:
    match mv:
        case MEta(x):
            check_payload(x)
        case MEUnit(pre, ne, rest):
            seq = typecheck_ne(ne)
            assert seq.succedent == Unit(), "unit link scrutinee type"
            assert rest.cxt[: len(pre)] == pre, "unit link prefix accounting"
            _validate_chain(rest, check_payload)
        case METensor(pre, ne, rest):
            seq = typecheck_ne(ne)
            assert isinstance(seq.succedent, Tensor), "tensor link scrutinee type"
            assert rest.cxt[: len(pre)] == pre, "tensor link prefix accounting"
            assert rest.cxt[len(pre): len(pre) + 2] == (seq.succedent.left, seq.succedent.right), \
                "tensor link components"
            _validate_chain(rest, check_payload)
        case _:
            raise TypeError(f"not a monadic value: {mv!r}")
