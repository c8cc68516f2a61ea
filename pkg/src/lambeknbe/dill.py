"""Dual intuitionistic linear logic: two-zone sequents and the exponential.

Sequents are Gamma ; Delta |- A with a reusable intuitionistic zone and a
linear zone consumed exactly once.  Both zones are named; the intuitionistic
context of a derivation is synthesized as its set of free intuitionistic
assumptions, so an inclusion renaming (growing the ambient zone) is the
identity on syntax.  General renamings are injective name maps acting on free
intuitionistic names.

The model extends the MILL one with a bang value (a chain over payloads that
live at an empty linear zone) and a bang chain link binding one intuitionistic
name; running, reflection, and reification gain one clause each.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .mill import Lolli, NameSupply
from .syntax import Atom, Formula, IllFormed, Tensor, Unit, node


@node
class Bang(Formula):
    inner: Formula


NamedContext = tuple[tuple[str, Formula], ...]


@node
class DSequent:
    intuitionistic: NamedContext  # sorted by name
    linear: NamedContext          # sorted by name
    succedent: Formula


class NonLinearUse(IllFormed):
    pass


class UnusedHypothesis(IllFormed):
    pass


class NameNotCovered(Exception):
    """A renaming applied to a value using names outside its domain."""


# ---------------------------------------------------------------------------
# Derivations (linear binders from MILL, plus the exponential rules)

class DDerivation:
    __slots__ = ()


@node
class DAxLin(DDerivation):
    name: str
    formula: Formula


@node
class DAxInt(DDerivation):
    name: str
    formula: Formula


@node
class DILolli(DDerivation):
    name: str
    body: DDerivation


@node
class DELolli(DDerivation):
    fun: DDerivation
    arg: DDerivation


@node
class DIUnit(DDerivation):
    pass


@node
class DEUnit(DDerivation):
    scrutinee: DDerivation
    cont: DDerivation


@node
class DITensor(DDerivation):
    left: DDerivation
    right: DDerivation


@node
class DETensor(DDerivation):
    x: str
    y: str
    scrutinee: DDerivation
    cont: DDerivation


@node
class DIBang(DDerivation):
    body: DDerivation


@node
class DEBang(DDerivation):
    """Bind the scrutinee's banged formula as intuitionistic hypothesis `x`."""
    x: str
    scrutinee: DDerivation
    cont: DDerivation


def children(d: DDerivation) -> tuple[DDerivation, ...]:
    match d:
        case DAxLin() | DAxInt() | DIUnit():
            return ()
        case DILolli(_, body) | DIBang(body):
            return (body,)
        case DELolli(fun, arg):
            return (fun, arg)
        case DEUnit(s, c) | DETensor(_, _, s, c) | DEBang(_, s, c):
            return (s, c)
        case DITensor(left, right):
            return (left, right)
    raise TypeError(f"not a DILL derivation: {d!r}")


def term_size(d) -> int:
    return 1 + sum(term_size(c) for c in children(d))


# ---------------------------------------------------------------------------
# Typechecking: linear zone by disjoint union, intuitionistic by agreement

class _Ill(Exception):
    def __init__(self, path, reason, cls=IllFormed):
        self.path = path
        self.reason = reason
        self.cls = cls


def _lin_merge(path, a: dict, b: dict) -> dict:
    clash = set(a) & set(b)
    if clash:
        raise _Ill(path, f"linear hypotheses used twice: {sorted(clash)}", NonLinearUse)
    out = dict(a)
    out.update(b)
    return out


def _int_merge(path, a: dict, b: dict) -> dict:
    out = dict(a)
    for n, f in b.items():
        if n in out and out[n] != f:
            raise _Ill(path, f"intuitionistic name {n!r} used at different formulas")
        out[n] = f
    return out


def typecheck(d: DDerivation) -> DSequent:
    try:
        icxt, lcxt, f = _typecheck(d)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None
    return DSequent(tuple(sorted(icxt.items())), tuple(sorted(lcxt.items())), f)


@lru_cache(maxsize=1 << 15)
def _typecheck(d: DDerivation) -> tuple:
    def child(i, c):
        try:
            return _typecheck(c)
        except _Ill as e:
            raise _Ill((i,) + e.path, e.reason, e.cls) from None

    match d:
        case DAxLin(x, f):
            return {}, {x: f}, f
        case DAxInt(x, f):
            return {x: f}, {}, f
        case DILolli(x, body):
            ic, lc, f = child(0, body)
            if x not in lc:
                raise _Ill((), f"binder {x!r} unused in the body", UnusedHypothesis)
            return ic, {n: g for n, g in lc.items() if n != x}, Lolli(lc[x], f)
        case DELolli(fun, arg):
            fi, fl, ff = child(0, fun)
            ai, al, fa = child(1, arg)
            if not isinstance(ff, Lolli) or ff.arg != fa:
                raise _Ill((), f"application expects a matching implication, got {ff}")
            return _int_merge((), fi, ai), _lin_merge((), fl, al), ff.result
        case DIUnit():
            return {}, {}, Unit()
        case DEUnit(s, c):
            si, sl, fs = child(0, s)
            ci, cl, fc = child(1, c)
            if fs != Unit():
                raise _Ill((), "unit elimination scrutinee must prove the unit")
            return _int_merge((), si, ci), _lin_merge((), sl, cl), fc
        case DITensor(left, right):
            li, ll, fl = child(0, left)
            ri, rl, fr = child(1, right)
            return _int_merge((), li, ri), _lin_merge((), ll, rl), Tensor(fl, fr)
        case DETensor(x, y, s, c):
            si, sl, fs = child(0, s)
            ci, cl, fc = child(1, c)
            if not isinstance(fs, Tensor):
                raise _Ill((), "tensor elimination scrutinee must prove a tensor")
            if x == y:
                raise _Ill((), "tensor binders must differ", NonLinearUse)
            for n, want in ((x, fs.left), (y, fs.right)):
                if n not in cl:
                    raise _Ill((), f"binder {n!r} unused in the continuation", UnusedHypothesis)
                if cl[n] != want:
                    raise _Ill((), f"binder {n!r} at {cl[n]}, expected {want}")
            rest = {n: g for n, g in cl.items() if n not in (x, y)}
            return _int_merge((), si, ci), _lin_merge((), sl, rest), fc
        case DIBang(body):
            ic, lc, f = child(0, body)
            if lc:
                raise _Ill((), f"bang introduction requires an empty linear zone, found {sorted(lc)}")
            return ic, {}, Bang(f)
        case DEBang(x, s, c):
            si, sl, fs = child(0, s)
            ci, cl, fc = child(1, c)
            if not isinstance(fs, Bang):
                raise _Ill((), "bang elimination scrutinee must prove a banged formula")
            if x in si:
                raise _Ill((), f"binder {x!r} shadows a free intuitionistic name of the scrutinee")
            if x in ci and ci[x] != fs.inner:
                raise _Ill((), f"binder {x!r} used at {ci[x]}, expected {fs.inner}")
            rest = {n: g for n, g in ci.items() if n != x}
            return _int_merge((), si, rest), _lin_merge((), sl, cl), fc
    raise _Ill((), f"not a DILL derivation node: {d!r}")


# ---------------------------------------------------------------------------
# Normal forms and neutrals

class DNf:
    __slots__ = ()


class DNe:
    __slots__ = ()


@node
class DNAxLin(DNe):
    name: str
    formula: Formula


@node
class DNAxInt(DNe):
    name: str
    formula: Formula


@node
class DNELolli(DNe):
    fun: DNe
    arg: DNf


@node
class DNILolli(DNf):
    name: str
    body: DNf


@node
class DNIUnit(DNf):
    pass


@node
class DNEUnit(DNf):
    scrutinee: DNe
    cont: DNf


@node
class DNITensor(DNf):
    left: DNf
    right: DNf


@node
class DNETensor(DNf):
    x: str
    y: str
    scrutinee: DNe
    cont: DNf


@node
class DNIBang(DNf):
    body: DNf


@node
class DNEBang(DNf):
    x: str
    scrutinee: DNe
    cont: DNf


@node
class DNSw(DNf):
    ne: DNe


def typecheck_nf(n: DNf) -> DSequent:
    try:
        ic, lc, f = _check_nf(n)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None
    return DSequent(tuple(sorted(ic.items())), tuple(sorted(lc.items())), f)


def typecheck_ne(n: DNe) -> DSequent:
    try:
        ic, lc, f = _check_ne(n)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None
    return DSequent(tuple(sorted(ic.items())), tuple(sorted(lc.items())), f)


@lru_cache(maxsize=1 << 15)
def _check_ne(n: DNe) -> tuple:
    match n:
        case DNAxLin(x, f):
            return {}, {x: f}, f
        case DNAxInt(x, f):
            return {x: f}, {}, f
        case DNELolli(fun, arg):
            fi, fl, ff = _check_ne(fun)
            ai, al, fa = _check_nf(arg)
            if not isinstance(ff, Lolli) or ff.arg != fa:
                raise _Ill((), f"neutral application mismatch at {ff}")
            return _int_merge((), fi, ai), _lin_merge((), fl, al), ff.result
    raise _Ill((), f"not a DILL neutral: {n!r}")


@lru_cache(maxsize=1 << 15)
def _check_nf(n: DNf) -> tuple:
    def negative(f):
        return isinstance(f, Lolli)

    match n:
        case DNSw(ne):
            ic, lc, f = _check_ne(ne)
            if not isinstance(f, Atom):
                raise _Ill((), f"switch requires an atom, got {f}")
            return ic, lc, f
        case DNILolli(x, body):
            ic, lc, f = _check_nf(body)
            if x not in lc:
                raise _Ill((), f"binder {x!r} unused", UnusedHypothesis)
            return ic, {k: v for k, v in lc.items() if k != x}, Lolli(lc[x], f)
        case DNIUnit():
            return {}, {}, Unit()
        case DNEUnit(s, c):
            si, sl, fs = _check_ne(s)
            ci, cl, fc = _check_nf(c)
            if fs != Unit():
                raise _Ill((), "unit elimination scrutinee must be a neutral of unit type")
            if negative(fc):
                raise _Ill((), f"unit elimination concluding an implication {fc}")
            return _int_merge((), si, ci), _lin_merge((), sl, cl), fc
        case DNITensor(left, right):
            li, ll, fl = _check_nf(left)
            ri, rl, fr = _check_nf(right)
            return _int_merge((), li, ri), _lin_merge((), ll, rl), Tensor(fl, fr)
        case DNETensor(x, y, s, c):
            si, sl, fs = _check_ne(s)
            ci, cl, fc = _check_nf(c)
            if not isinstance(fs, Tensor):
                raise _Ill((), "tensor elimination scrutinee must be a neutral of tensor type")
            if negative(fc):
                raise _Ill((), f"tensor elimination concluding an implication {fc}")
            if x == y:
                raise _Ill((), "tensor binders must differ", NonLinearUse)
            for nme, want in ((x, fs.left), (y, fs.right)):
                if nme not in cl:
                    raise _Ill((), f"binder {nme!r} unused", UnusedHypothesis)
                if cl[nme] != want:
                    raise _Ill((), f"binder {nme!r} at {cl[nme]}, expected {want}")
            rest = {k: v for k, v in cl.items() if k not in (x, y)}
            return _int_merge((), si, ci), _lin_merge((), sl, rest), fc
        case DNIBang(body):
            ic, lc, f = _check_nf(body)
            if lc:
                raise _Ill((), "bang introduction requires an empty linear zone")
            return ic, {}, Bang(f)
        case DNEBang(x, s, c):
            si, sl, fs = _check_ne(s)
            ci, cl, fc = _check_nf(c)
            if not isinstance(fs, Bang):
                raise _Ill((), "bang elimination scrutinee must be a neutral of banged type")
            if x in si:
                raise _Ill((), f"binder {x!r} shadows a scrutinee name")
            if x in ci and ci[x] != fs.inner:
                raise _Ill((), f"binder {x!r} at {ci[x]}, expected {fs.inner}")
            rest = {k: v for k, v in ci.items() if k != x}
            return _int_merge((), si, rest), _lin_merge((), sl, cl), fc
    raise _Ill((), f"not a DILL normal form: {n!r}")


def emb(n: DNf) -> DDerivation:
    match n:
        case DNSw(ne):
            return emb_ne(ne)
        case DNILolli(x, body):
            return DILolli(x, emb(body))
        case DNIUnit():
            return DIUnit()
        case DNEUnit(s, c):
            return DEUnit(emb_ne(s), emb(c))
        case DNITensor(left, right):
            return DITensor(emb(left), emb(right))
        case DNETensor(x, y, s, c):
            return DETensor(x, y, emb_ne(s), emb(c))
        case DNIBang(body):
            return DIBang(emb(body))
        case DNEBang(x, s, c):
            return DEBang(x, emb_ne(s), emb(c))
    raise TypeError(f"not a DILL normal form: {n!r}")


def emb_ne(n: DNe) -> DDerivation:
    match n:
        case DNAxLin(x, f):
            return DAxLin(x, f)
        case DNAxInt(x, f):
            return DAxInt(x, f)
        case DNELolli(fun, arg):
            return DELolli(emb_ne(fun), emb(arg))
    raise TypeError(f"not a DILL neutral: {n!r}")


def alpha_canonical(n: DNf) -> DNf:
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"#{counter[0]}"

    def go_nf(n, env):
        match n:
            case DNSw(ne):
                return DNSw(go_ne(ne, env))
            case DNILolli(x, body):
                x2 = fresh()
                return DNILolli(x2, go_nf(body, {**env, x: x2}))
            case DNIUnit():
                return n
            case DNEUnit(s, c):
                return DNEUnit(go_ne(s, env), go_nf(c, env))
            case DNITensor(left, right):
                return DNITensor(go_nf(left, env), go_nf(right, env))
            case DNETensor(x, y, s, c):
                s2 = go_ne(s, env)
                x2, y2 = fresh(), fresh()
                return DNETensor(x2, y2, s2, go_nf(c, {**env, x: x2, y: y2}))
            case DNIBang(body):
                return DNIBang(go_nf(body, env))
            case DNEBang(x, s, c):
                s2 = go_ne(s, env)
                x2 = fresh()
                return DNEBang(x2, s2, go_nf(c, {**env, x: x2}))
        raise TypeError(f"not a DILL normal form: {n!r}")

    def go_ne(n, env):
        match n:
            case DNAxLin(x, f):
                return DNAxLin(env.get(x, x), f)
            case DNAxInt(x, f):
                return DNAxInt(env.get(x, x), f)
            case DNELolli(fun, arg):
                return DNELolli(go_ne(fun, env), go_nf(arg, env))
        raise TypeError(f"not a DILL neutral: {n!r}")

    return go_nf(n, {})


def nf_alpha_equal(a: DNf, b: DNf) -> bool:
    return alpha_canonical(a) == alpha_canonical(b)


# ---------------------------------------------------------------------------
# Renamings: injective maps on intuitionistic names

@dataclass(frozen=True)
class Renaming:
    mapping: tuple[tuple[str, str], ...]

    def __post_init__(self):
        targets = [t for _, t in self.mapping]
        if len(set(targets)) != len(targets):
            raise ValueError("renaming must be injective")

    @staticmethod
    def of(d: dict[str, str]) -> "Renaming":
        return Renaming(tuple(sorted(d.items())))

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)

    def compose(self, first: "Renaming") -> "Renaming":
        """self after first."""
        inner = first.as_dict()
        outer = self.as_dict()
        return Renaming.of({k: outer.get(v, v) for k, v in inner.items()})


def _rename_syntax(node_, mapping: dict[str, str], kind: str):
    """Rename free intuitionistic names in derivations, normal forms, neutrals."""

    def go(n):
        match n:
            case DAxInt(x, f):
                return DAxInt(mapping.get(x, x), f)
            case DNAxInt(x, f):
                return DNAxInt(mapping.get(x, x), f)
            case DEBang(x, s, c):
                if x in mapping.values():
                    raise NameNotCovered(f"renaming target collides with binder {x!r}")
                inner = {k: v for k, v in mapping.items() if k != x}
                return DEBang(x, go(s), _rename_syntax(c, inner, kind))
            case DNEBang(x, s, c):
                if x in mapping.values():
                    raise NameNotCovered(f"renaming target collides with binder {x!r}")
                inner = {k: v for k, v in mapping.items() if k != x}
                return DNEBang(x, go(s), _rename_syntax(c, inner, kind))
            case DAxLin() | DNAxLin() | DIUnit() | DNIUnit():
                return n
            case DILolli(x, body):
                return DILolli(x, go(body))
            case DNILolli(x, body):
                return DNILolli(x, go(body))
            case DELolli(f, a):
                return DELolli(go(f), go(a))
            case DNELolli(f, a):
                return DNELolli(go(f), go(a))
            case DEUnit(s, c):
                return DEUnit(go(s), go(c))
            case DNEUnit(s, c):
                return DNEUnit(go(s), go(c))
            case DITensor(l, r):
                return DITensor(go(l), go(r))
            case DNITensor(l, r):
                return DNITensor(go(l), go(r))
            case DETensor(x, y, s, c):
                return DETensor(x, y, go(s), go(c))
            case DNETensor(x, y, s, c):
                return DNETensor(x, y, go(s), go(c))
            case DIBang(b):
                return DIBang(go(b))
            case DNIBang(b):
                return DNIBang(go(b))
            case DNSw(ne):
                return DNSw(go(ne))
        raise TypeError(f"cannot rename {n!r}")

    return go(node_)


def rename(r: Renaming, x):
    """Apply a renaming to a derivation, normal form, neutral, or value."""
    mapping = r.as_dict()
    if isinstance(x, (DDerivation, DNf, DNe)):
        return _rename_syntax(x, mapping, "syntax")
    return rename_value(r, x)


def rename_value(r: Renaming, v):
    """Renaming action on model values; hom values compose lazily."""
    match v:
        case DVAtom(f, nf):
            return DVAtom(f, rename(r, nf))
        case DVUnit(f, chain):
            return DVUnit(f, _rename_chain(r, chain))
        case DVTensor(f, chain):
            return DVTensor(f, _rename_chain(r, chain))
        case DVBang(f, chain):
            return DVBang(f, _rename_chain(r, chain))
        case DVLolli(f, fn):
            return DVLolli(f, lambda arg: rename_value(r, fn(arg)))
    raise TypeError(f"not a DILL value: {v!r}")


def _rename_chain(r: Renaming, mv):
    match mv:
        case DMEta(payload):
            return DMEta(_rename_payload(r, payload))
        case DMEUnit(ne, rest):
            return DMEUnit(rename(r, ne), _rename_chain(r, rest))
        case DMETensor(x, y, ne, rest):
            return DMETensor(x, y, rename(r, ne), _rename_chain(r, rest))
        case DMEBang(x, ne, rest):
            if x in r.as_dict().values():
                raise NameNotCovered(f"renaming target collides with chain binder {x!r}")
            inner = Renaming.of({k: v for k, v in r.as_dict().items() if k != x})
            return DMEBang(x, rename(r, ne), _rename_chain(inner, rest))
    raise TypeError(f"not a DILL chain: {mv!r}")


def _rename_payload(r: Renaming, p):
    match p:
        case DPair(a, b):
            return DPair(_rename_payload(r, a), _rename_payload(r, b))
        case BangPayload(v):
            return BangPayload(rename_value(r, v))
        case ():
            return p
    return rename_value(r, p)


# ---------------------------------------------------------------------------
# Model values and chains

@dataclass(frozen=True)
class DVAtom:
    formula: Atom
    nf: DNf


@dataclass(frozen=True)
class DVUnit:
    formula: Formula
    chain: "DChain"


@dataclass(frozen=True)
class DVTensor:
    formula: Tensor
    chain: "DChain"


@dataclass(frozen=True)
class DVBang:
    formula: Bang
    chain: "DChain"  # payloads: BangPayload


@dataclass(frozen=True)
class DVLolli:
    formula: Lolli
    fn: Callable


@dataclass(frozen=True)
class DPair:
    left: object
    right: object


@dataclass(frozen=True)
class BangPayload:
    """A value at an empty linear zone, the witness being the emptiness itself."""
    value: object


class DChain:
    __slots__ = ()


@dataclass(frozen=True)
class DMEta(DChain):
    payload: object


@dataclass(frozen=True)
class DMEUnit(DChain):
    ne: DNe
    rest: DChain


@dataclass(frozen=True)
class DMETensor(DChain):
    x: str
    y: str
    ne: DNe
    rest: DChain


@dataclass(frozen=True)
class DMEBang(DChain):
    """A banged neutral; everything beneath sees intuitionistic name `x`."""
    x: str
    ne: DNe
    rest: DChain


UNIT_WITNESS = ()


def chain_map(f, mv: DChain) -> DChain:
    match mv:
        case DMEta(x):
            return DMEta(f(x))
        case DMEUnit(ne, rest):
            return DMEUnit(ne, chain_map(f, rest))
        case DMETensor(x, y, ne, rest):
            return DMETensor(x, y, ne, chain_map(f, rest))
        case DMEBang(x, ne, rest):
            return DMEBang(x, ne, chain_map(f, rest))
    raise TypeError(f"not a DILL chain: {mv!r}")


def chain_join(mv: DChain) -> DChain:
    match mv:
        case DMEta(inner):
            return inner
        case DMEUnit(ne, rest):
            return DMEUnit(ne, chain_join(rest))
        case DMETensor(x, y, ne, rest):
            return DMETensor(x, y, ne, chain_join(rest))
        case DMEBang(x, ne, rest):
            return DMEBang(x, ne, chain_join(rest))
    raise TypeError(f"not a DILL chain: {mv!r}")


def run_nf_chain(mv: DChain) -> DNf:
    match mv:
        case DMEta(nf):
            return nf
        case DMEUnit(ne, rest):
            inner = run_nf_chain(rest)
            if isinstance(_check_nf(inner)[2], Lolli):
                raise IllFormed((), "cannot run a unit elimination at an implication")
            return DNEUnit(ne, inner)
        case DMETensor(x, y, ne, rest):
            inner = run_nf_chain(rest)
            if isinstance(_check_nf(inner)[2], Lolli):
                raise IllFormed((), "cannot run a tensor elimination at an implication")
            return DNETensor(x, y, ne, inner)
        case DMEBang(x, ne, rest):
            return DNEBang(x, ne, run_nf_chain(rest))
    raise TypeError(f"not a DILL chain: {mv!r}")


def run_at(formula: Formula, mv: DChain):
    match formula:
        case Atom():
            return DVAtom(formula, run_nf_chain(chain_map(lambda v: v.nf, mv)))
        case Unit():
            return DVUnit(formula, chain_join(chain_map(lambda v: v.chain, mv)))
        case Tensor():
            return DVTensor(formula, chain_join(chain_map(lambda v: v.chain, mv)))
        case Bang():
            return DVBang(formula, chain_join(chain_map(lambda v: v.chain, mv)))
        case Lolli(_, result):
            return DVLolli(formula, lambda arg: run_at(result, _rcst(mv, arg)))
    raise TypeError(f"not a DILL formula: {formula!r}")


def lmst(x, mv: DChain) -> DChain:
    """Left strength.  The bang link extends the ambient intuitionistic zone;
    with requirement-indexed values the inclusion renaming is the identity,
    so the paired value passes through unchanged."""
    match mv:
        case DMEta(y):
            return DMEta(DPair(x, y))
        case DMEUnit(ne, rest):
            return DMEUnit(ne, lmst(x, rest))
        case DMETensor(a, b, ne, rest):
            return DMETensor(a, b, ne, lmst(x, rest))
        case DMEBang(a, ne, rest):
            return DMEBang(a, ne, lmst(x, rest))
    raise TypeError(f"not a DILL chain: {mv!r}")


def rmst(mv: DChain, x) -> DChain:
    match mv:
        case DMEta(y):
            return DMEta(DPair(y, x))
        case DMEUnit(ne, rest):
            return DMEUnit(ne, rmst(rest, x))
        case DMETensor(a, b, ne, rest):
            return DMETensor(a, b, ne, rmst(rest, x))
        case DMEBang(a, ne, rest):
            return DMEBang(a, ne, rmst(rest, x))
    raise TypeError(f"not a DILL chain: {mv!r}")


def _rcst(mv: DChain, arg) -> DChain:
    match mv:
        case DMEta(f):
            return DMEta(f.fn(arg))
        case DMEUnit(ne, rest):
            return DMEUnit(ne, _rcst(rest, arg))
        case DMETensor(x, y, ne, rest):
            return DMETensor(x, y, ne, _rcst(rest, arg))
        case DMEBang(x, ne, rest):
            return DMEBang(x, ne, _rcst(rest, arg))
    raise TypeError(f"not a DILL chain: {mv!r}")


# ---------------------------------------------------------------------------
# Evaluation, reflection, reification

def _split_lin(env: dict, names) -> tuple[dict, dict]:
    return (
        {n: v for n, v in env.items() if n in names},
        {n: v for n, v in env.items() if n not in names},
    )


def _eval(t: DDerivation, ienv: dict, lenv: dict, supply: NameSupply):
    match t:
        case DAxLin(x, _):
            return lenv[x]
        case DAxInt(x, _):
            return ienv[x]
        case DILolli(x, body):

            def fn(arg):
                return _eval(body, ienv, {**lenv, x: arg}, supply)

            return DVLolli(_formula_of(t), fn)
        case DELolli(fun, arg):
            fnames = set(_typecheck(fun)[1])
            lf, la = _split_lin(lenv, fnames)
            return _eval(fun, ienv, lf, supply).fn(_eval(arg, ienv, la, supply))
        case DIUnit():
            return DVUnit(Unit(), DMEta(UNIT_WITNESS))
        case DITensor(left, right):
            lnames = set(_typecheck(left)[1])
            ll, lr = _split_lin(lenv, lnames)
            pair = DPair(_eval(left, ienv, ll, supply), _eval(right, ienv, lr, supply))
            return DVTensor(_formula_of(t), DMEta(pair))
        case DEUnit(s, c):
            snames = set(_typecheck(s)[1])
            ls, lc = _split_lin(lenv, snames)
            spliced = rmst(lmst(ienv, _eval(s, ienv, ls, supply).chain), lc)

            def drop_witness(p: DPair):
                return _eval(c, p.left.left, p.right, supply)

            return run_at(_formula_of(t), chain_map(drop_witness, spliced))
        case DETensor(x, y, s, c):
            snames = set(_typecheck(s)[1])
            ls, lc = _split_lin(lenv, snames)
            spliced = rmst(lmst(ienv, _eval(s, ienv, ls, supply).chain), lc)

            def with_pair(p: DPair):
                pair = p.left.right
                return _eval(c, p.left.left, {**p.right, x: pair.left, y: pair.right}, supply)

            return run_at(_formula_of(t), chain_map(with_pair, spliced))
        case DIBang(body):
            return DVBang(_formula_of(t), DMEta(BangPayload(_eval(body, ienv, {}, supply))))
        case DEBang(x, s, c):
            snames = set(_typecheck(s)[1])
            ls, lc = _split_lin(lenv, snames)
            spliced = rmst(lmst(ienv, _eval(s, ienv, ls, supply).chain), lc)

            def with_bang(p: DPair):
                gamma, bp = p.left.left, p.left.right
                return _eval(c, {**gamma, x: bp.value}, p.right, supply)

            return run_at(_formula_of(t), chain_map(with_bang, spliced))
    raise TypeError(f"not a DILL derivation: {t!r}")


def _formula_of(t: DDerivation) -> Formula:
    return _typecheck(t)[2]


def reflect(formula: Formula, ne: DNe, supply: NameSupply):
    match formula:
        case Atom():
            return DVAtom(formula, DNSw(ne))
        case Lolli(arg, result):

            def fn(v):
                return reflect(result, DNELolli(ne, reify(arg, v, supply)), supply)

            return DVLolli(formula, fn)
        case Unit():
            return DVUnit(formula, DMEUnit(ne, DMEta(UNIT_WITNESS)))
        case Tensor(left, right):
            x, y = supply.fresh(), supply.fresh()
            pair = DPair(
                reflect(left, DNAxLin(x, left), supply),
                reflect(right, DNAxLin(y, right), supply),
            )
            return DVTensor(formula, DMETensor(x, y, ne, DMEta(pair)))
        case Bang(inner):
            x = supply.fresh()
            payload = BangPayload(reflect(inner, DNAxInt(x, inner), supply))
            return DVBang(formula, DMEBang(x, ne, DMEta(payload)))
    raise TypeError(f"not a DILL formula: {formula!r}")


def reify(formula: Formula, v, supply: NameSupply) -> DNf:
    match formula:
        case Atom():
            return v.nf
        case Lolli(arg, result):
            x = supply.fresh()
            return DNILolli(x, reify(result, v.fn(reflect(arg, DNAxLin(x, arg), supply)), supply))
        case Unit():
            return run_nf_chain(chain_map(lambda _w: DNIUnit(), v.chain))
        case Tensor(left, right):

            def pair_nf(p: DPair):
                return DNITensor(reify(left, p.left, supply), reify(right, p.right, supply))

            return run_nf_chain(chain_map(pair_nf, v.chain))
        case Bang(inner):
            return run_nf_chain(chain_map(lambda bp: DNIBang(reify(inner, bp.value, supply)), v.chain))
    raise TypeError(f"not a DILL formula: {formula!r}")


def all_names(d) -> set[str]:
    match d:
        case DAxLin(x, _) | DAxInt(x, _):
            return {x}
        case DILolli(x, body):
            return {x} | all_names(body)
        case DETensor(x, y, s, c):
            return {x, y} | all_names(s) | all_names(c)
        case DEBang(x, s, c):
            return {x} | all_names(s) | all_names(c)
        case _:
            out = set()
            for c in children(d):
                out |= all_names(c)
            return out


def evaluate(t: DDerivation, ienv: dict, lenv: dict, supply: NameSupply | None = None):
    """Interpret a derivation; intuitionistic entries live at an empty linear zone."""
    ic, lc, _ = _typecheck(t)
    if not set(ic) <= set(ienv) or set(lenv) != set(lc):
        raise IllFormed((), "environment does not interpret the contexts")
    return _eval(t, ienv, lenv, supply if supply is not None else NameSupply(all_names(t)))


def nbe(t: DDerivation) -> DNf:
    """Normalize a DILL derivation: linear hypotheses reflect as linear axioms,
    intuitionistic ones as intuitionistic axioms at an empty linear zone."""
    seq = typecheck(t)
    supply = NameSupply(all_names(t))
    ienv = {n: reflect(f, DNAxInt(n, f), supply) for n, f in seq.intuitionistic}
    lenv = {n: reflect(f, DNAxLin(n, f), supply) for n, f in seq.linear}
    return reify(seq.succedent, _eval(t, ienv, lenv, supply), supply)


# ---------------------------------------------------------------------------
# Rewrite steps: the linear rows plus beta/eta for the exponential.
# The calculus's own full equation table is not on record; these transcriptions
# drive the soundness suite only.

class DillEquationId(enum.Enum):
    BetaLolli = enum.auto()
    BetaUnit = enum.auto()
    BetaTensor = enum.auto()
    BetaBang = enum.auto()
    EtaLolli = enum.auto()
    EtaUnit = enum.auto()
    EtaTensor = enum.auto()
    EtaBang = enum.auto()
    PermUnitILolli = enum.auto()
    PermELolliEUnitFun = enum.auto()
    PermELolliEUnitArg = enum.auto()
    PermEUnitEUnit = enum.auto()
    PermTensorILolli = enum.auto()
    PermELolliETensorFun = enum.auto()
    PermELolliETensorArg = enum.auto()
    PermETensorETensor = enum.auto()


@dataclass(frozen=True)
class DStep:
    path: tuple[int, ...]
    eq: DillEquationId
    direction: str


class DStepNotApplicable(Exception):
    pass


def rename_free_lin(d: DDerivation, mapping: dict[str, str]) -> DDerivation:
    """Rename free linear names; linear binders shadow."""
    if not mapping:
        return d
    match d:
        case DAxLin(x, f):
            return DAxLin(mapping.get(x, x), f)
        case DAxInt() | DIUnit():
            return d
        case DILolli(x, body):
            inner = {k: v for k, v in mapping.items() if k != x}
            return DILolli(x, rename_free_lin(body, inner))
        case DELolli(fun, arg):
            return DELolli(rename_free_lin(fun, mapping), rename_free_lin(arg, mapping))
        case DEUnit(s, c):
            return DEUnit(rename_free_lin(s, mapping), rename_free_lin(c, mapping))
        case DITensor(left, right):
            return DITensor(rename_free_lin(left, mapping), rename_free_lin(right, mapping))
        case DETensor(x, y, s, c):
            inner = {k: v for k, v in mapping.items() if k not in (x, y)}
            return DETensor(x, y, rename_free_lin(s, mapping), rename_free_lin(c, inner))
        case DIBang(body):
            return DIBang(rename_free_lin(body, mapping))
        case DEBang(x, s, c):
            return DEBang(x, rename_free_lin(s, mapping), rename_free_lin(c, mapping))
    raise TypeError(f"not a DILL derivation: {d!r}")


def rename_free_int(d: DDerivation, mapping: dict[str, str]) -> DDerivation:
    """Rename free intuitionistic names; bang binders shadow."""
    return _rename_syntax(d, mapping, "syntax") if mapping else d


def _freshen_lin_binders(d: DDerivation, avoid: set[str], supply: NameSupply) -> DDerivation:
    match d:
        case DAxLin() | DAxInt() | DIUnit():
            return d
        case DILolli(x, body):
            body = _freshen_lin_binders(body, avoid, supply)
            if x in avoid:
                x2 = supply.fresh()
                return DILolli(x2, rename_free_lin(body, {x: x2}))
            return DILolli(x, body)
        case DELolli(fun, arg):
            return DELolli(_freshen_lin_binders(fun, avoid, supply), _freshen_lin_binders(arg, avoid, supply))
        case DEUnit(s, c):
            return DEUnit(_freshen_lin_binders(s, avoid, supply), _freshen_lin_binders(c, avoid, supply))
        case DITensor(left, right):
            return DITensor(_freshen_lin_binders(left, avoid, supply), _freshen_lin_binders(right, avoid, supply))
        case DETensor(x, y, s, c):
            s = _freshen_lin_binders(s, avoid, supply)
            c = _freshen_lin_binders(c, avoid, supply)
            ren = {}
            x2, y2 = x, y
            if x in avoid:
                x2 = supply.fresh()
                ren[x] = x2
            if y in avoid:
                y2 = supply.fresh()
                ren[y] = y2
            return DETensor(x2, y2, s, rename_free_lin(c, ren) if ren else c)
        case DIBang(body):
            return DIBang(_freshen_lin_binders(body, avoid, supply))
        case DEBang(x, s, c):
            return DEBang(x, _freshen_lin_binders(s, avoid, supply), _freshen_lin_binders(c, avoid, supply))
    raise TypeError(f"not a DILL derivation: {d!r}")


def _freshen_int_binders(d: DDerivation, avoid: set[str], supply: NameSupply) -> DDerivation:
    match d:
        case DAxLin() | DAxInt() | DIUnit():
            return d
        case DILolli(x, body):
            return DILolli(x, _freshen_int_binders(body, avoid, supply))
        case DELolli(fun, arg):
            return DELolli(_freshen_int_binders(fun, avoid, supply), _freshen_int_binders(arg, avoid, supply))
        case DEUnit(s, c):
            return DEUnit(_freshen_int_binders(s, avoid, supply), _freshen_int_binders(c, avoid, supply))
        case DITensor(left, right):
            return DITensor(_freshen_int_binders(left, avoid, supply), _freshen_int_binders(right, avoid, supply))
        case DETensor(x, y, s, c):
            return DETensor(x, y, _freshen_int_binders(s, avoid, supply), _freshen_int_binders(c, avoid, supply))
        case DIBang(body):
            return DIBang(_freshen_int_binders(body, avoid, supply))
        case DEBang(x, s, c):
            s = _freshen_int_binders(s, avoid, supply)
            c = _freshen_int_binders(c, avoid, supply)
            if x in avoid:
                x2 = supply.fresh()
                return DEBang(x2, s, rename_free_int(c, {x: x2}))
            return DEBang(x, s, c)
    raise TypeError(f"not a DILL derivation: {d!r}")


def substitute_lin(name: str, replacement: DDerivation, host: DDerivation) -> DDerivation:
    """Plug `replacement` for the single linear use of `name` in `host`."""
    _, rl, _ = _typecheck(replacement)
    supply = NameSupply(set(rl) | all_names(host) | all_names(replacement))
    host = _freshen_lin_binders(host, set(rl), supply)

    def go(d):
        match d:
            case DAxLin(x, _):
                return replacement if x == name else d
            case DAxInt() | DIUnit():
                return d
            case DILolli(x, body):
                return d if x == name else DILolli(x, go(body))
            case DELolli(fun, arg):
                return DELolli(go(fun), go(arg))
            case DEUnit(s, c):
                return DEUnit(go(s), go(c))
            case DITensor(left, right):
                return DITensor(go(left), go(right))
            case DETensor(x, y, s, c):
                return DETensor(x, y, go(s), c if name in (x, y) else go(c))
            case DIBang(body):
                return DIBang(go(body))
            case DEBang(x, s, c):
                return DEBang(x, go(s), go(c))
        raise TypeError(f"not a DILL derivation: {d!r}")

    return go(host)


def substitute_int(name: str, replacement: DDerivation, host: DDerivation) -> DDerivation:
    """Plug `replacement` (at an empty linear zone) for every intuitionistic
    use of `name` in `host`."""
    ri, rl, _ = _typecheck(replacement)
    if rl:
        raise IllFormed((), "intuitionistic substitution needs an empty linear zone")
    supply = NameSupply(set(ri) | all_names(host) | all_names(replacement))
    host = _freshen_int_binders(host, set(ri), supply)

    def go(d):
        match d:
            case DAxInt(x, _):
                return replacement if x == name else d
            case DAxLin() | DIUnit():
                return d
            case DILolli(x, body):
                return DILolli(x, go(body))
            case DELolli(fun, arg):
                return DELolli(go(fun), go(arg))
            case DEUnit(s, c):
                return DEUnit(go(s), go(c))
            case DITensor(left, right):
                return DITensor(go(left), go(right))
            case DETensor(x, y, s, c):
                return DETensor(x, y, go(s), go(c))
            case DIBang(body):
                return DIBang(go(body))
            case DEBang(x, s, c):
                return DEBang(x, go(s), c if x == name else go(c))
        raise TypeError(f"not a DILL derivation: {d!r}")

    return go(host)


def _fresh_names(t: DDerivation, n: int) -> list[str]:
    s = NameSupply(all_names(t), prefix="e")
    return [s.fresh() for _ in range(n)]


def _rewrite_root_d(t: DDerivation, eq: DillEquationId, d: str):
    E = DillEquationId
    match eq, d:
        case E.BetaLolli, "LR":
            if isinstance(t, DELolli) and isinstance(t.fun, DILolli):
                return substitute_lin(t.fun.name, t.arg, t.fun.body)
        case E.BetaUnit, "LR":
            if isinstance(t, DEUnit) and isinstance(t.scrutinee, DIUnit):
                return t.cont
        case E.BetaUnit, "RL":
            return DEUnit(DIUnit(), t)
        case E.BetaTensor, "LR":
            if isinstance(t, DETensor) and isinstance(t.scrutinee, DITensor):
                inner = substitute_lin(t.y, t.scrutinee.right, t.cont)
                return substitute_lin(t.x, t.scrutinee.left, inner)
        case E.BetaBang, "LR":
            if isinstance(t, DEBang) and isinstance(t.scrutinee, DIBang):
                return substitute_int(t.x, t.scrutinee.body, t.cont)
        case E.EtaLolli, "LR":
            if (
                isinstance(t, DILolli)
                and isinstance(t.body, DELolli)
                and isinstance(t.body.arg, DAxLin)
                and t.body.arg.name == t.name
            ):
                return t.body.fun
        case E.EtaLolli, "RL":
            f = _formula_of(t)
            if isinstance(f, Lolli):
                (x,) = _fresh_names(t, 1)
                return DILolli(x, DELolli(t, DAxLin(x, f.arg)))
        case E.EtaUnit, "LR":
            if isinstance(t, DEUnit) and isinstance(t.cont, DIUnit):
                return t.scrutinee
        case E.EtaUnit, "RL":
            if _formula_of(t) == Unit():
                return DEUnit(t, DIUnit())
        case E.EtaTensor, "LR":
            if (
                isinstance(t, DETensor)
                and isinstance(t.cont, DITensor)
                and isinstance(t.cont.left, DAxLin)
                and isinstance(t.cont.right, DAxLin)
                and t.cont.left.name == t.x
                and t.cont.right.name == t.y
            ):
                return t.scrutinee
        case E.EtaTensor, "RL":
            f = _formula_of(t)
            if isinstance(f, Tensor):
                x, y = _fresh_names(t, 2)
                return DETensor(x, y, t, DITensor(DAxLin(x, f.left), DAxLin(y, f.right)))
        case E.EtaBang, "LR":
            if (
                isinstance(t, DEBang)
                and isinstance(t.cont, DIBang)
                and isinstance(t.cont.body, DAxInt)
                and t.cont.body.name == t.x
            ):
                return t.scrutinee
        case E.EtaBang, "RL":
            f = _formula_of(t)
            if isinstance(f, Bang):
                (x,) = _fresh_names(t, 1)
                return DEBang(x, t, DIBang(DAxInt(x, f.inner)))
        case E.PermUnitILolli, "LR":
            if isinstance(t, DEUnit) and isinstance(t.cont, DILolli):
                return DILolli(t.cont.name, DEUnit(t.scrutinee, t.cont.body))
        case E.PermUnitILolli, "RL":
            if isinstance(t, DILolli) and isinstance(t.body, DEUnit):
                return DEUnit(t.body.scrutinee, DILolli(t.name, t.body.cont))
        case E.PermELolliEUnitFun, "LR":
            if isinstance(t, DELolli) and isinstance(t.fun, DEUnit):
                return DEUnit(t.fun.scrutinee, DELolli(t.fun.cont, t.arg))
        case E.PermELolliEUnitFun, "RL":
            if isinstance(t, DEUnit) and isinstance(t.cont, DELolli):
                return DELolli(DEUnit(t.scrutinee, t.cont.fun), t.cont.arg)
        case E.PermELolliEUnitArg, "LR":
            if isinstance(t, DELolli) and isinstance(t.arg, DEUnit):
                return DEUnit(t.arg.scrutinee, DELolli(t.fun, t.arg.cont))
        case E.PermELolliEUnitArg, "RL":
            if isinstance(t, DEUnit) and isinstance(t.cont, DELolli):
                return DELolli(t.cont.fun, DEUnit(t.scrutinee, t.cont.arg))
        case E.PermEUnitEUnit, "LR":
            if isinstance(t, DEUnit) and isinstance(t.scrutinee, DEUnit):
                return DEUnit(t.scrutinee.scrutinee, DEUnit(t.scrutinee.cont, t.cont))
        case E.PermEUnitEUnit, "RL":
            if isinstance(t, DEUnit) and isinstance(t.cont, DEUnit):
                return DEUnit(DEUnit(t.scrutinee, t.cont.scrutinee), t.cont.cont)
        case E.PermTensorILolli, "LR":
            if isinstance(t, DETensor) and isinstance(t.cont, DILolli):
                if t.cont.name not in (t.x, t.y):
                    return DILolli(t.cont.name, DETensor(t.x, t.y, t.scrutinee, t.cont.body))
        case E.PermTensorILolli, "RL":
            if isinstance(t, DILolli) and isinstance(t.body, DETensor):
                e = t.body
                if t.name not in (e.x, e.y):
                    return DETensor(e.x, e.y, e.scrutinee, DILolli(t.name, e.cont))
        case E.PermELolliETensorFun, "LR":
            if isinstance(t, DELolli) and isinstance(t.fun, DETensor):
                e = t.fun
                return DETensor(e.x, e.y, e.scrutinee, DELolli(e.cont, t.arg))
        case E.PermELolliETensorFun, "RL":
            if isinstance(t, DETensor) and isinstance(t.cont, DELolli):
                return DELolli(DETensor(t.x, t.y, t.scrutinee, t.cont.fun), t.cont.arg)
        case E.PermELolliETensorArg, "LR":
            if isinstance(t, DELolli) and isinstance(t.arg, DETensor):
                e = t.arg
                return DETensor(e.x, e.y, e.scrutinee, DELolli(t.fun, e.cont))
        case E.PermELolliETensorArg, "RL":
            if isinstance(t, DETensor) and isinstance(t.cont, DELolli):
                return DELolli(t.cont.fun, DETensor(t.x, t.y, t.scrutinee, t.cont.arg))
        case E.PermETensorETensor, "LR":
            if isinstance(t, DETensor) and isinstance(t.scrutinee, DETensor):
                i = t.scrutinee
                return DETensor(i.x, i.y, i.scrutinee, DETensor(t.x, t.y, i.cont, t.cont))
        case E.PermETensorETensor, "RL":
            if isinstance(t, DETensor) and isinstance(t.cont, DETensor):
                i = t.cont
                return DETensor(i.x, i.y, DETensor(t.x, t.y, t.scrutinee, i.scrutinee), i.cont)
    return None


def _try_rewrite_d(t: DDerivation, eq: DillEquationId, d: str):
    try:
        before = typecheck(t)
    except IllFormed:
        return None
    try:
        out = _rewrite_root_d(t, eq, d)
    except IllFormed:
        return None
    if out is None:
        return None
    try:
        if typecheck(out) != before:
            return None
    except IllFormed:
        return None
    return out


def _replace_d(t: DDerivation, path: tuple[int, ...], new: DDerivation) -> DDerivation:
    if not path:
        return new
    i, rest = path[0], path[1:]
    cs = children(t)
    if i >= len(cs):
        raise DStepNotApplicable(f"path {list(path)} does not address a subterm")
    sub = _replace_d(cs[i], rest, new)
    match t:
        case DILolli(x, _):
            return DILolli(x, sub)
        case DELolli(fun, arg):
            return DELolli(sub, arg) if i == 0 else DELolli(fun, sub)
        case DEUnit(s, c):
            return DEUnit(sub, c) if i == 0 else DEUnit(s, sub)
        case DITensor(left, right):
            return DITensor(sub, right) if i == 0 else DITensor(left, sub)
        case DETensor(x, y, s, c):
            return DETensor(x, y, sub, c) if i == 0 else DETensor(x, y, s, sub)
        case DIBang(_):
            return DIBang(sub)
        case DEBang(x, s, c):
            return DEBang(x, sub, c) if i == 0 else DEBang(x, s, sub)
    raise DStepNotApplicable(f"cannot rebuild through {type(t).__name__}")


def successors(t: DDerivation, eta_cap: int):
    out = []

    def walk(sub, path):
        for eq in DillEquationId:
            for d in ("LR", "RL"):
                cand = _try_rewrite_d(sub, eq, d)
                if cand is None:
                    continue
                if term_size(cand) > term_size(sub) and term_size(cand) > eta_cap:
                    continue
                out.append((DStep(path, eq, d), _replace_d(t, path, cand)))
        for i, c in enumerate(children(sub)):
            walk(c, path + (i,))

    walk(t, ())
    return out


def applicable_steps(t: DDerivation, eta_cap: int = 0) -> list[DStep]:
    return [s for s, _ in successors(t, eta_cap)]


def apply_step(t: DDerivation, step: DStep) -> DDerivation:
    sub = t
    for i in step.path:
        cs = children(sub)
        if i >= len(cs):
            raise DStepNotApplicable(f"path {list(step.path)} does not address a subterm")
        sub = cs[i]
    cand = _try_rewrite_d(sub, step.eq, step.direction)
    if cand is None:
        raise DStepNotApplicable(f"{step.eq.name} {step.direction} does not match at {list(step.path)}")
    return _replace_d(t, step.path, cand)


# ---------------------------------------------------------------------------
# Transcription from MILL (everything linear), used by the generators

def from_mill(t):
    from . import mill as m

    match t:
        case m.MAx(x, f):
            return DAxLin(x, formula_from_mill(f))
        case m.MILolli(x, body):
            return DILolli(x, from_mill(body))
        case m.MELolli(fun, arg):
            return DELolli(from_mill(fun), from_mill(arg))
        case m.MIUnit():
            return DIUnit()
        case m.MEUnit(s, c):
            return DEUnit(from_mill(s), from_mill(c))
        case m.MITensor(left, right):
            return DITensor(from_mill(left), from_mill(right))
        case m.METensor(x, y, s, c):
            return DETensor(x, y, from_mill(s), from_mill(c))
    raise TypeError(f"not a MILL derivation: {t!r}")


def formula_from_mill(f: Formula) -> Formula:
    match f:
        case Atom() | Unit():
            return f
        case Tensor(a, b):
            return Tensor(formula_from_mill(a), formula_from_mill(b))
        case Lolli(a, b):
            return Lolli(formula_from_mill(a), formula_from_mill(b))
    raise TypeError(f"not a MILL formula: {f!r}")
