"""Formulas, contexts, and natural-deduction derivations of the Lambek calculus.

Derivation trees carry no contexts except at axiom leaves; the conclusion
sequent of every node is synthesized bottom-up by `typecheck`.  The unit and
tensor eliminators record their split point `insert_at` explicitly because it
is not recoverable from the subterms.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple


def node(cls):
    """Frozen dataclass whose structural hash is computed once, at construction.

    Terms are compared and hashed constantly (rewrite search keeps visited
    sets keyed on them), so the hash must be O(1) after construction.
    """
    cls = dataclass(frozen=True)(cls)
    names = [f.name for f in dataclasses.fields(cls)]
    base_init = cls.__init__
    tag = cls.__name__

    def __init__(self, *args, **kwargs):
        base_init(self, *args, **kwargs)
        object.__setattr__(
            self, "_hash", hash((tag, tuple(getattr(self, n) for n in names)))
        )

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented
        if self._hash != other._hash:
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    cls.__init__ = __init__
    cls.__eq__ = __eq__
    cls.__hash__ = lambda self: self._hash
    return cls


# ---------------------------------------------------------------------------
# Formulas and contexts

class Formula:
    __slots__ = ()


@node
class Atom(Formula):
    name: str


@node
class Unit(Formula):
    pass


@node
class Tensor(Formula):
    left: Formula
    right: Formula


@node
class Over(Formula):
    """B / A: result on the left, argument expected on the right."""
    result: Formula
    arg: Formula


@node
class Under(Formula):
    """A \\ B: argument expected on the left, result on the right."""
    arg: Formula
    result: Formula


Context = Tuple[Formula, ...]


def is_negative(f: Formula) -> bool:
    """Implications are negative; atoms, unit and tensor are not."""
    return isinstance(f, (Over, Under))


@node
class Sequent:
    antecedent: Context
    succedent: Formula


# ---------------------------------------------------------------------------
# Derivations

class Derivation:
    __slots__ = ()


@node
class Ax(Derivation):
    formula: Formula


@node
class IOver(Derivation):
    """From Gamma, A |- B conclude Gamma |- B / A (binds the last hypothesis)."""
    body: Derivation


@node
class IUnder(Derivation):
    """From A, Gamma |- B conclude Gamma |- A \\ B (binds the first hypothesis)."""
    body: Derivation


@node
class EOver(Derivation):
    fun: Derivation
    arg: Derivation


@node
class EUnder(Derivation):
    arg: Derivation
    fun: Derivation


@node
class IUnit(Derivation):
    pass


@node
class EUnit(Derivation):
    """Splice the scrutinee's context into the continuation's at `insert_at`."""
    insert_at: int
    scrutinee: Derivation
    cont: Derivation


@node
class ITensor(Derivation):
    left: Derivation
    right: Derivation


@node
class ETensor(Derivation):
    """The continuation consumes A, B at positions insert_at, insert_at + 1."""
    insert_at: int
    scrutinee: Derivation
    cont: Derivation


def children(d: Derivation) -> tuple[Derivation, ...]:
    """Subterms in path order (index i is child i of the node)."""
    match d:
        case Ax() | IUnit():
            return ()
        case IOver(body) | IUnder(body):
            return (body,)
        case EOver(fun, arg):
            return (fun, arg)
        case EUnder(arg, fun):
            return (arg, fun)
        case EUnit(_, scrutinee, cont) | ETensor(_, scrutinee, cont):
            return (scrutinee, cont)
        case ITensor(left, right):
            return (left, right)
    raise TypeError(f"not a derivation: {d!r}")


@lru_cache(maxsize=1 << 16)
def term_size(d: Derivation) -> int:
    return 1 + sum(term_size(c) for c in children(d))


# ---------------------------------------------------------------------------
# Errors

class IllFormed(Exception):
    """A rule node whose premises do not fit; `path` addresses the bad node."""

    def __init__(self, path: tuple[int, ...], reason: str):
        super().__init__(f"at {list(path)}: {reason}")
        self.path = path
        self.reason = reason


class EnvMismatch(Exception):
    pass


# ---------------------------------------------------------------------------
# Typechecking

def typecheck(d: Derivation) -> Sequent:
    """Synthesize the unique conclusion sequent, or raise IllFormed."""
    try:
        return _typecheck(d)
    except _Ill as e:
        raise IllFormed(e.path, e.reason) from None


class _Ill(Exception):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason


@lru_cache(maxsize=1 << 16)
def _typecheck(d: Derivation) -> Sequent:
    def child(i: int, c: Derivation) -> Sequent:
        try:
            return _typecheck(c)
        except _Ill as e:
            raise _Ill((i,) + e.path, e.reason) from None

    def fail(reason: str):
        raise _Ill((), reason)

    match d:
        case Ax(f):
            return Sequent((f,), f)
        case IOver(body):
            s = child(0, body)
            if not s.antecedent:
                fail("IOver needs a nonempty context to bind its last hypothesis")
            return Sequent(s.antecedent[:-1], Over(s.succedent, s.antecedent[-1]))
        case IUnder(body):
            s = child(0, body)
            if not s.antecedent:
                fail("IUnder needs a nonempty context to bind its first hypothesis")
            return Sequent(s.antecedent[1:], Under(s.antecedent[0], s.succedent))
        case EOver(fun, arg):
            sf, sa = child(0, fun), child(1, arg)
            if not isinstance(sf.succedent, Over):
                fail(f"EOver expects an Over formula, got {sf.succedent}")
            if sf.succedent.arg != sa.succedent:
                fail("EOver argument formula mismatch")
            return Sequent(sf.antecedent + sa.antecedent, sf.succedent.result)
        case EUnder(arg, fun):
            sa, sf = child(0, arg), child(1, fun)
            if not isinstance(sf.succedent, Under):
                fail(f"EUnder expects an Under formula, got {sf.succedent}")
            if sf.succedent.arg != sa.succedent:
                fail("EUnder argument formula mismatch")
            return Sequent(sa.antecedent + sf.antecedent, sf.succedent.result)
        case IUnit():
            return Sequent((), Unit())
        case EUnit(k, scrutinee, cont):
            ss, sc = child(0, scrutinee), child(1, cont)
            if ss.succedent != Unit():
                fail("EUnit scrutinee must prove the unit")
            if not 0 <= k <= len(sc.antecedent):
                fail(f"EUnit insert_at {k} out of range")
            ante = sc.antecedent[:k] + ss.antecedent + sc.antecedent[k:]
            return Sequent(ante, sc.succedent)
        case ITensor(left, right):
            sl, sr = child(0, left), child(1, right)
            return Sequent(sl.antecedent + sr.antecedent, Tensor(sl.succedent, sr.succedent))
        case ETensor(k, scrutinee, cont):
            ss, sc = child(0, scrutinee), child(1, cont)
            if not isinstance(ss.succedent, Tensor):
                fail("ETensor scrutinee must prove a tensor")
            if not 0 <= k <= len(sc.antecedent) - 2:
                fail(f"ETensor insert_at {k} out of range")
            if sc.antecedent[k] != ss.succedent.left or sc.antecedent[k + 1] != ss.succedent.right:
                fail("ETensor continuation lacks the tensor components at insert_at")
            ante = sc.antecedent[:k] + ss.antecedent + sc.antecedent[k + 2:]
            return Sequent(ante, sc.succedent)
    raise _Ill((), f"not a derivation node: {d!r}")


# ---------------------------------------------------------------------------
# Environments and substitution

@node
class Env:
    """A simultaneous substitution: one derivation per target hypothesis.

    `source_splits[i]` is the antecedent of `items[i]`; their concatenation is
    the source context the substituted derivation will live in.
    """
    items: tuple[Derivation, ...]
    source_splits: tuple[Context, ...]

    @property
    def source(self) -> Context:
        return sum(self.source_splits, ())

    @property
    def target(self) -> Context:
        return tuple(typecheck(t).succedent for t in self.items)


def ids_env(g: Context) -> Env:
    """The identity environment: one axiom per hypothesis."""
    return Env(tuple(Ax(f) for f in g), tuple((f,) for f in g))


def _env_concat(a: Env, b: Env) -> Env:
    return Env(a.items + b.items, a.source_splits + b.source_splits)


def _env_split(sigma: Env, n: int) -> tuple[Env, Env]:
    return (
        Env(sigma.items[:n], sigma.source_splits[:n]),
        Env(sigma.items[n:], sigma.source_splits[n:]),
    )


def substitute(sigma: Env, t: Derivation) -> Derivation:
    """Admissible cut: replace each hypothesis of t by the matching item.

    Substituting the identity environment is a syntactic no-op because Ax
    leaves return the environment item itself.
    """
    if sigma.target != typecheck(t).antecedent:
        raise EnvMismatch(
            f"environment targets {sigma.target}, derivation expects {typecheck(t).antecedent}"
        )
    return _subst(sigma, t)


def _subst(sigma: Env, t: Derivation) -> Derivation:
    match t:
        case Ax():
            return sigma.items[0]
        case IOver(body):
            a = typecheck(body).antecedent[-1]
            inner = _env_concat(sigma, ids_env((a,)))
            return IOver(_subst(inner, body))
        case IUnder(body):
            a = typecheck(body).antecedent[0]
            inner = _env_concat(ids_env((a,)), sigma)
            return IUnder(_subst(inner, body))
        case EOver(fun, arg):
            s1, s2 = _env_split(sigma, len(typecheck(fun).antecedent))
            return EOver(_subst(s1, fun), _subst(s2, arg))
        case EUnder(arg, fun):
            s1, s2 = _env_split(sigma, len(typecheck(arg).antecedent))
            return EUnder(_subst(s1, arg), _subst(s2, fun))
        case IUnit():
            return t
        case EUnit(k, scrutinee, cont):
            m = len(typecheck(scrutinee).antecedent)
            s0, rest = _env_split(sigma, k)
            sm, s1 = _env_split(rest, m)
            new_k = len(s0.source)
            return EUnit(new_k, _subst(sm, scrutinee), _subst(_env_concat(s0, s1), cont))
        case ITensor(left, right):
            s1, s2 = _env_split(sigma, len(typecheck(left).antecedent))
            return ITensor(_subst(s1, left), _subst(s2, right))
        case ETensor(k, scrutinee, cont):
            m = len(typecheck(scrutinee).antecedent)
            tf = typecheck(scrutinee).succedent
            s0, rest = _env_split(sigma, k)
            sm, s1 = _env_split(rest, m)
            new_k = len(s0.source)
            pair_ids = ids_env((tf.left, tf.right))
            inner = _env_concat(_env_concat(s0, pair_ids), s1)
            return ETensor(new_k, _subst(sm, scrutinee), _subst(inner, cont))
    raise TypeError(f"not a derivation: {t!r}")


def sub1(t: Derivation, pos: int, u: Derivation) -> Derivation:
    """Single-hypothesis cut: plug t for u's hypothesis at index `pos`."""
    host = typecheck(u).antecedent
    if not 0 <= pos < len(host):
        raise EnvMismatch(f"position {pos} out of range for context of length {len(host)}")
    if typecheck(t).succedent != host[pos]:
        raise EnvMismatch(f"cut formula mismatch at position {pos}")
    sigma = _env_concat(
        _env_concat(ids_env(host[:pos]), Env((t,), (typecheck(t).antecedent,))),
        ids_env(host[pos + 1:]),
    )
    return substitute(sigma, u)
