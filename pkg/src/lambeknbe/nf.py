"""Beta-eta-long normal forms and neutrals, with embeddings back into plain derivations.

Normal forms (`Nf`) are the backward-chaining phase; neutrals (`Ne`) are an
axiom applied to normal arguments.  The unit/tensor eliminators are only legal
when the conclusion's succedent is non-negative (not an implication), and the
switch from neutral to normal happens at atoms only.
"""

from __future__ import annotations

from functools import lru_cache

from .syntax import (
    Atom,
    Ax,
    Context,
    Derivation,
    EOver,
    ETensor,
    EUnder,
    EUnit,
    Formula,
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
    is_negative,
    node,
)


class Nf:
    __slots__ = ()


class Ne:
    __slots__ = ()


@node
class NAx(Ne):
    formula: Formula


@node
class NEOver(Ne):
    fun: Ne
    arg: Nf


@node
class NEUnder(Ne):
    arg: Nf
    fun: Ne


@node
class NIOver(Nf):
    body: Nf


@node
class NIUnder(Nf):
    body: Nf


@node
class NIUnit(Nf):
    pass


@node
class NEUnit(Nf):
    insert_at: int
    scrutinee: Ne
    cont: Nf


@node
class NITensor(Nf):
    left: Nf
    right: Nf


@node
class NETensor(Nf):
    insert_at: int
    scrutinee: Ne
    cont: Nf


@node
class NSw(Nf):
    """Switch: a neutral of atomic succedent used as a normal form."""
    ne: Ne


class GammaPlusViolation(IllFormed):
    """Unit/tensor elimination concluding an implication."""


class SwNotAtomic(IllFormed):
    """Switch applied to a neutral whose succedent is not an atom."""


class _Ill(Exception):
    def __init__(self, path, reason, cls=IllFormed):
        self.path = path
        self.reason = reason
        self.cls = cls


def typecheck_nf(n: Nf) -> Sequent:
    try:
        return _check_nf(n)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None


def typecheck_ne(n: Ne) -> Sequent:
    try:
        return _check_ne(n)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None


def _at(i: int, thunk, n):
    try:
        return thunk(n)
    except _Ill as e:
        raise _Ill((i,) + e.path, e.reason, e.cls) from None


@lru_cache(maxsize=1 << 16)
def _check_ne(n: Ne) -> Sequent:
    match n:
        case NAx(f):
            return Sequent((f,), f)
        case NEOver(fun, arg):
            sf = _at(0, _check_ne, fun)
            sa = _at(1, _check_nf, arg)
            if not isinstance(sf.succedent, Over) or sf.succedent.arg != sa.succedent:
                raise _Ill((), "neutral application expects a matching Over formula")
            return Sequent(sf.antecedent + sa.antecedent, sf.succedent.result)
        case NEUnder(arg, fun):
            sa = _at(0, _check_nf, arg)
            sf = _at(1, _check_ne, fun)
            if not isinstance(sf.succedent, Under) or sf.succedent.arg != sa.succedent:
                raise _Ill((), "neutral application expects a matching Under formula")
            return Sequent(sa.antecedent + sf.antecedent, sf.succedent.result)
    raise _Ill((), f"not a neutral: {n!r}")


@lru_cache(maxsize=1 << 16)
def _check_nf(n: Nf) -> Sequent:
    match n:
        case NSw(ne):
            s = _at(0, _check_ne, ne)
            if not isinstance(s.succedent, Atom):
                raise _Ill((), f"switch requires an atomic succedent, got {s.succedent}", SwNotAtomic)
            return s
        case NIOver(body):
            s = _at(0, _check_nf, body)
            if not s.antecedent:
                raise _Ill((), "NIOver needs a nonempty context")
            return Sequent(s.antecedent[:-1], Over(s.succedent, s.antecedent[-1]))
        case NIUnder(body):
            s = _at(0, _check_nf, body)
            if not s.antecedent:
                raise _Ill((), "NIUnder needs a nonempty context")
            return Sequent(s.antecedent[1:], Under(s.antecedent[0], s.succedent))
        case NIUnit():
            return Sequent((), Unit())
        case NEUnit(k, scrutinee, cont):
            ss = _at(0, _check_ne, scrutinee)
            sc = _at(1, _check_nf, cont)
            if ss.succedent != Unit():
                raise _Ill((), "NEUnit scrutinee must be a neutral of unit type")
            if is_negative(sc.succedent):
                raise _Ill((), f"NEUnit concluding an implication {sc.succedent}", GammaPlusViolation)
            if not 0 <= k <= len(sc.antecedent):
                raise _Ill((), f"NEUnit insert_at {k} out of range")
            return Sequent(sc.antecedent[:k] + ss.antecedent + sc.antecedent[k:], sc.succedent)
        case NITensor(left, right):
            sl = _at(0, _check_nf, left)
            sr = _at(1, _check_nf, right)
            return Sequent(sl.antecedent + sr.antecedent, Tensor(sl.succedent, sr.succedent))
        case NETensor(k, scrutinee, cont):
            ss = _at(0, _check_ne, scrutinee)
            sc = _at(1, _check_nf, cont)
            if not isinstance(ss.succedent, Tensor):
                raise _Ill((), "NETensor scrutinee must be a neutral of tensor type")
            if is_negative(sc.succedent):
                raise _Ill((), f"NETensor concluding an implication {sc.succedent}", GammaPlusViolation)
            if not 0 <= k <= len(sc.antecedent) - 2:
                raise _Ill((), f"NETensor insert_at {k} out of range")
            if sc.antecedent[k] != ss.succedent.left or sc.antecedent[k + 1] != ss.succedent.right:
                raise _Ill((), "NETensor continuation lacks the tensor components")
            return Sequent(sc.antecedent[:k] + ss.antecedent + sc.antecedent[k + 2:], sc.succedent)
    raise _Ill((), f"not a normal form: {n!r}")


def emb_up(n: Nf) -> Derivation:
    """Embed a normal form into plain derivations, erasing switch nodes."""
    match n:
        case NSw(ne):
            return emb_dn(ne)
        case NIOver(body):
            return IOver(emb_up(body))
        case NIUnder(body):
            return IUnder(emb_up(body))
        case NIUnit():
            return IUnit()
        case NEUnit(k, scrutinee, cont):
            return EUnit(k, emb_dn(scrutinee), emb_up(cont))
        case NITensor(left, right):
            return ITensor(emb_up(left), emb_up(right))
        case NETensor(k, scrutinee, cont):
            return ETensor(k, emb_dn(scrutinee), emb_up(cont))
    raise TypeError(f"not a normal form: {n!r}")


def emb_dn(n: Ne) -> Derivation:
    match n:
        case NAx(f):
            return Ax(f)
        case NEOver(fun, arg):
            return EOver(emb_dn(fun), emb_up(arg))
        case NEUnder(arg, fun):
            return EUnder(emb_up(arg), emb_dn(fun))
    raise TypeError(f"not a neutral: {n!r}")


def nf_equal(a: Nf, b: Nf) -> bool:
    """Structural identity, insert positions included; the syntax has no binders."""
    return a == b


def nf_size(n) -> int:
    match n:
        case NAx() | NIUnit():
            return 1
        case NSw(ne):
            return 1 + nf_size(ne)
        case NIOver(b) | NIUnder(b):
            return 1 + nf_size(b)
        case NEOver(x, y) | NEUnder(x, y) | NITensor(x, y):
            return 1 + nf_size(x) + nf_size(y)
        case NEUnit(_, s, c) | NETensor(_, s, c):
            return 1 + nf_size(s) + nf_size(c)
    raise TypeError(f"not a normal form: {n!r}")
