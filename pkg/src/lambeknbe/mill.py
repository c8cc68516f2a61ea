"""Multiplicative intuitionistic linear logic with named hypotheses.

Contexts are multisets realized as maps from hypothesis names to formulas, so
exchange is definitionally free and binary rules partition by name sets
instead of split points.  The two ordered implications collapse into a single
linear implication.  The Kripke model mirrors the Lambek one, but the
symmetric tensor makes the strengths bookkeeping-free: chain links carry no
context slices, only the binder names the eventual eliminations will use.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .syntax import Atom, Formula, IllFormed, Tensor, Unit, node


@node
class Lolli(Formula):
    arg: Formula
    result: Formula


NamedContext = tuple[tuple[str, Formula], ...]  # sorted by name, names distinct


@node
class MSequent:
    context: NamedContext
    succedent: Formula


class NonLinearUse(IllFormed):
    """A hypothesis name consumed more than once."""


class UnusedHypothesis(IllFormed):
    """A binder whose name the body never consumes."""


# ---------------------------------------------------------------------------
# Derivations

class MDerivation:
    __slots__ = ()


@node
class MAx(MDerivation):
    name: str
    formula: Formula


@node
class MILolli(MDerivation):
    name: str
    body: MDerivation


@node
class MELolli(MDerivation):
    fun: MDerivation
    arg: MDerivation


@node
class MIUnit(MDerivation):
    pass


@node
class MEUnit(MDerivation):
    scrutinee: MDerivation
    cont: MDerivation


@node
class MITensor(MDerivation):
    left: MDerivation
    right: MDerivation


@node
class METensor(MDerivation):
    x: str
    y: str
    scrutinee: MDerivation
    cont: MDerivation


def children(d: MDerivation) -> tuple[MDerivation, ...]:
    match d:
        case MAx() | MIUnit():
            return ()
        case MILolli(_, body):
            return (body,)
        case MELolli(fun, arg):
            return (fun, arg)
        case MEUnit(s, c) | METensor(_, _, s, c):
            return (s, c)
        case MITensor(left, right):
            return (left, right)
    raise TypeError(f"not a MILL derivation: {d!r}")


def term_size(d) -> int:
    return 1 + sum(term_size(c) for c in children(d))


# ---------------------------------------------------------------------------
# Typechecking

class _Ill(Exception):
    def __init__(self, path, reason, cls=IllFormed):
        self.path = path
        self.reason = reason
        self.cls = cls


def _merge_disjoint(path, a: dict, b: dict) -> dict:
    clash = set(a) & set(b)
    if clash:
        raise _Ill(path, f"hypotheses used in both premises: {sorted(clash)}", NonLinearUse)
    out = dict(a)
    out.update(b)
    return out


def typecheck(d: MDerivation) -> MSequent:
    try:
        cxt, f = _typecheck(d)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None
    return MSequent(tuple(sorted(cxt.items())), f)


@lru_cache(maxsize=1 << 15)
def _typecheck(d: MDerivation) -> tuple:
    def child(i, c):
        try:
            return _typecheck(c)
        except _Ill as e:
            raise _Ill((i,) + e.path, e.reason, e.cls) from None

    match d:
        case MAx(x, f):
            return {x: f}, f
        case MILolli(x, body):
            cxt, f = child(0, body)
            if x not in cxt:
                raise _Ill((), f"binder {x!r} unused in the body", UnusedHypothesis)
            rest = {n: g for n, g in cxt.items() if n != x}
            return rest, Lolli(cxt[x], f)
        case MELolli(fun, arg):
            cf, ff = child(0, fun)
            ca, fa = child(1, arg)
            if not isinstance(ff, Lolli) or ff.arg != fa:
                raise _Ill((), f"application expects a matching implication, got {ff}")
            return _merge_disjoint((), cf, ca), ff.result
        case MIUnit():
            return {}, Unit()
        case MEUnit(s, c):
            cs, fs = child(0, s)
            cc, fc = child(1, c)
            if fs != Unit():
                raise _Ill((), "unit elimination scrutinee must prove the unit")
            return _merge_disjoint((), cs, cc), fc
        case MITensor(left, right):
            cl, fl = child(0, left)
            cr, fr = child(1, right)
            return _merge_disjoint((), cl, cr), Tensor(fl, fr)
        case METensor(x, y, s, c):
            cs, fs = child(0, s)
            cc, fc = child(1, c)
            if not isinstance(fs, Tensor):
                raise _Ill((), "tensor elimination scrutinee must prove a tensor")
            if x == y:
                raise _Ill((), f"tensor binders must differ, both are {x!r}", NonLinearUse)
            for n, want in ((x, fs.left), (y, fs.right)):
                if n not in cc:
                    raise _Ill((), f"binder {n!r} unused in the continuation", UnusedHypothesis)
                if cc[n] != want:
                    raise _Ill((), f"binder {n!r} has formula {cc[n]}, expected {want}")
            rest = {n: g for n, g in cc.items() if n not in (x, y)}
            return _merge_disjoint((), cs, rest), fc
    raise _Ill((), f"not a MILL derivation node: {d!r}")


# ---------------------------------------------------------------------------
# Names, renaming, substitution

def all_names(d) -> set[str]:
    """Every hypothesis name occurring in the term, free or bound."""
    match d:
        case MAx(x, _):
            return {x}
        case MILolli(x, body):
            return {x} | all_names(body)
        case METensor(x, y, s, c):
            return {x, y} | all_names(s) | all_names(c)
        case _:
            out = set()
            for c in children(d):
                out |= all_names(c)
            return out


class NameSupply:
    """Deterministic fresh names, skipping a set of taken ones."""

    def __init__(self, taken=(), prefix="v"):
        self._taken = set(taken)
        self._prefix = prefix
        self._i = 0

    def fresh(self) -> str:
        while True:
            n = f"{self._prefix}{self._i}"
            self._i += 1
            if n not in self._taken:
                self._taken.add(n)
                return n


def rename_free(d: MDerivation, mapping: dict[str, str]) -> MDerivation:
    """Rename free hypothesis names; binders shadow and stay fixed."""
    if not mapping:
        return d
    match d:
        case MAx(x, f):
            return MAx(mapping.get(x, x), f)
        case MILolli(x, body):
            inner = {k: v for k, v in mapping.items() if k != x}
            return MILolli(x, rename_free(body, inner))
        case MELolli(fun, arg):
            return MELolli(rename_free(fun, mapping), rename_free(arg, mapping))
        case MIUnit():
            return d
        case MEUnit(s, c):
            return MEUnit(rename_free(s, mapping), rename_free(c, mapping))
        case MITensor(left, right):
            return MITensor(rename_free(left, mapping), rename_free(right, mapping))
        case METensor(x, y, s, c):
            inner = {k: v for k, v in mapping.items() if k not in (x, y)}
            return METensor(x, y, rename_free(s, mapping), rename_free(c, inner))
    raise TypeError(f"not a MILL derivation: {d!r}")


def _freshen_binders(d: MDerivation, avoid: set[str], supply: NameSupply) -> MDerivation:
    """Alpha-rename binders clashing with `avoid` so substitution cannot capture."""
    match d:
        case MAx() | MIUnit():
            return d
        case MILolli(x, body):
            body = _freshen_binders(body, avoid, supply)
            if x in avoid:
                x2 = supply.fresh()
                return MILolli(x2, rename_free(body, {x: x2}))
            return MILolli(x, body)
        case MELolli(fun, arg):
            return MELolli(_freshen_binders(fun, avoid, supply), _freshen_binders(arg, avoid, supply))
        case MEUnit(s, c):
            return MEUnit(_freshen_binders(s, avoid, supply), _freshen_binders(c, avoid, supply))
        case MITensor(left, right):
            return MITensor(_freshen_binders(left, avoid, supply), _freshen_binders(right, avoid, supply))
        case METensor(x, y, s, c):
            s = _freshen_binders(s, avoid, supply)
            c = _freshen_binders(c, avoid, supply)
            ren = {}
            x2, y2 = x, y
            if x in avoid:
                x2 = supply.fresh()
                ren[x] = x2
            if y in avoid:
                y2 = supply.fresh()
                ren[y] = y2
            return METensor(x2, y2, s, rename_free(c, ren) if ren else c)
    raise TypeError(f"not a MILL derivation: {d!r}")


def substitute(name: str, replacement: MDerivation, host: MDerivation) -> MDerivation:
    """Plug `replacement` for the (single, linear) use of `name` in `host`."""
    avoid = set(_typecheck(replacement)[0])
    supply = NameSupply(avoid | all_names(host) | all_names(replacement))
    host = _freshen_binders(host, avoid, supply)

    def go(d):
        match d:
            case MAx(x, _):
                return replacement if x == name else d
            case MILolli(x, body):
                return d if x == name else MILolli(x, go(body))
            case MELolli(fun, arg):
                return MELolli(go(fun), go(arg))
            case MIUnit():
                return d
            case MEUnit(s, c):
                return MEUnit(go(s), go(c))
            case MITensor(left, right):
                return MITensor(go(left), go(right))
            case METensor(x, y, s, c):
                return METensor(x, y, go(s), c if name in (x, y) else go(c))
        raise TypeError(f"not a MILL derivation: {d!r}")

    return go(host)


# ---------------------------------------------------------------------------
# Normal forms and neutrals

class MNf:
    __slots__ = ()


class MNe:
    __slots__ = ()


@node
class MNAx(MNe):
    name: str
    formula: Formula


@node
class MNELolli(MNe):
    fun: MNe
    arg: MNf


@node
class MNILolli(MNf):
    name: str
    body: MNf


@node
class MNIUnit(MNf):
    pass


@node
class MNEUnit(MNf):
    scrutinee: MNe
    cont: MNf


@node
class MNITensor(MNf):
    left: MNf
    right: MNf


@node
class MNETensor(MNf):
    x: str
    y: str
    scrutinee: MNe
    cont: MNf


@node
class MNSw(MNf):
    ne: MNe


def typecheck_nf(n: MNf) -> MSequent:
    try:
        cxt, f = _check_nf(n)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None
    return MSequent(tuple(sorted(cxt.items())), f)


def typecheck_ne(n: MNe) -> MSequent:
    try:
        cxt, f = _check_ne(n)
    except _Ill as e:
        raise e.cls(e.path, e.reason) from None
    return MSequent(tuple(sorted(cxt.items())), f)


@lru_cache(maxsize=1 << 15)
def _check_ne(n: MNe) -> tuple:
    match n:
        case MNAx(x, f):
            return {x: f}, f
        case MNELolli(fun, arg):
            cf, ff = _check_ne(fun)
            ca, fa = _check_nf(arg)
            if not isinstance(ff, Lolli) or ff.arg != fa:
                raise _Ill((), f"neutral application mismatch at {ff}")
            return _merge_disjoint((), cf, ca), ff.result
    raise _Ill((), f"not a MILL neutral: {n!r}")


@lru_cache(maxsize=1 << 15)
def _check_nf(n: MNf) -> tuple:
    def negative(f):
        return isinstance(f, Lolli)

    match n:
        case MNSw(ne):
            cxt, f = _check_ne(ne)
            if not isinstance(f, Atom):
                raise _Ill((), f"switch requires an atom, got {f}")
            return cxt, f
        case MNILolli(x, body):
            cxt, f = _check_nf(body)
            if x not in cxt:
                raise _Ill((), f"binder {x!r} unused", UnusedHypothesis)
            return {k: v for k, v in cxt.items() if k != x}, Lolli(cxt[x], f)
        case MNIUnit():
            return {}, Unit()
        case MNEUnit(s, c):
            cs, fs = _check_ne(s)
            cc, fc = _check_nf(c)
            if fs != Unit():
                raise _Ill((), "unit elimination scrutinee must be neutral of unit type")
            if negative(fc):
                raise _Ill((), f"unit elimination concluding an implication {fc}")
            return _merge_disjoint((), cs, cc), fc
        case MNITensor(left, right):
            cl, fl = _check_nf(left)
            cr, fr = _check_nf(right)
            return _merge_disjoint((), cl, cr), Tensor(fl, fr)
        case MNETensor(x, y, s, c):
            cs, fs = _check_ne(s)
            cc, fc = _check_nf(c)
            if not isinstance(fs, Tensor):
                raise _Ill((), "tensor elimination scrutinee must be neutral of tensor type")
            if negative(fc):
                raise _Ill((), f"tensor elimination concluding an implication {fc}")
            if x == y:
                raise _Ill((), "tensor binders must differ", NonLinearUse)
            for nme, want in ((x, fs.left), (y, fs.right)):
                if nme not in cc:
                    raise _Ill((), f"binder {nme!r} unused", UnusedHypothesis)
                if cc[nme] != want:
                    raise _Ill((), f"binder {nme!r} at {cc[nme]}, expected {want}")
            rest = {k: v for k, v in cc.items() if k not in (x, y)}
            return _merge_disjoint((), cs, rest), fc
    raise _Ill((), f"not a MILL normal form: {n!r}")


def emb(n: MNf) -> MDerivation:
    match n:
        case MNSw(ne):
            return emb_ne(ne)
        case MNILolli(x, body):
            return MILolli(x, emb(body))
        case MNIUnit():
            return MIUnit()
        case MNEUnit(s, c):
            return MEUnit(emb_ne(s), emb(c))
        case MNITensor(left, right):
            return MITensor(emb(left), emb(right))
        case MNETensor(x, y, s, c):
            return METensor(x, y, emb_ne(s), emb(c))
    raise TypeError(f"not a MILL normal form: {n!r}")


def emb_ne(n: MNe) -> MDerivation:
    match n:
        case MNAx(x, f):
            return MAx(x, f)
        case MNELolli(fun, arg):
            return MELolli(emb_ne(fun), emb(arg))
    raise TypeError(f"not a MILL neutral: {n!r}")


def alpha_canonical(n: MNf) -> MNf:
    """Rename binders to a canonical scheme in traversal order; free names stay."""
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"#{counter[0]}"

    def go_nf(n, env):
        match n:
            case MNSw(ne):
                return MNSw(go_ne(ne, env))
            case MNILolli(x, body):
                x2 = fresh()
                return MNILolli(x2, go_nf(body, {**env, x: x2}))
            case MNIUnit():
                return n
            case MNEUnit(s, c):
                return MNEUnit(go_ne(s, env), go_nf(c, env))
            case MNITensor(left, right):
                return MNITensor(go_nf(left, env), go_nf(right, env))
            case MNETensor(x, y, s, c):
                s2 = go_ne(s, env)
                x2, y2 = fresh(), fresh()
                return MNETensor(x2, y2, s2, go_nf(c, {**env, x: x2, y: y2}))
        raise TypeError(f"not a MILL normal form: {n!r}")

    def go_ne(n, env):
        match n:
            case MNAx(x, f):
                return MNAx(env.get(x, x), f)
            case MNELolli(fun, arg):
                return MNELolli(go_ne(fun, env), go_nf(arg, env))
        raise TypeError(f"not a MILL neutral: {n!r}")

    return go_nf(n, {})


def nf_alpha_equal(a: MNf, b: MNf) -> bool:
    return alpha_canonical(a) == alpha_canonical(b)


# ---------------------------------------------------------------------------
# Kripke model over name multisets

@dataclass(frozen=True)
class MVAtom:
    formula: Atom
    nf: MNf


@dataclass(frozen=True)
class MVUnit:
    formula: Formula
    chain: "MChain"


@dataclass(frozen=True)
class MVTensor:
    formula: Tensor
    chain: "MChain"


@dataclass(frozen=True)
class MVLolli:
    formula: Lolli
    fn: Callable


class MChain:
    __slots__ = ()


@dataclass(frozen=True)
class MMEta(MChain):
    payload: object


@dataclass(frozen=True)
class MMEUnit(MChain):
    ne: MNe
    rest: MChain


@dataclass(frozen=True)
class MMETensor(MChain):
    x: str
    y: str
    ne: MNe
    rest: MChain


@dataclass(frozen=True)
class MPair:
    left: object
    right: object


UNIT_WITNESS = ()


def chain_map(f, mv: MChain) -> MChain:
    match mv:
        case MMEta(x):
            return MMEta(f(x))
        case MMEUnit(ne, rest):
            return MMEUnit(ne, chain_map(f, rest))
        case MMETensor(x, y, ne, rest):
            return MMETensor(x, y, ne, chain_map(f, rest))
    raise TypeError(f"not a chain: {mv!r}")


def chain_join(mv: MChain) -> MChain:
    match mv:
        case MMEta(inner):
            return inner
        case MMEUnit(ne, rest):
            return MMEUnit(ne, chain_join(rest))
        case MMETensor(x, y, ne, rest):
            return MMETensor(x, y, ne, chain_join(rest))
    raise TypeError(f"not a chain: {mv!r}")


def run_nf_chain(mv: MChain) -> MNf:
    """Discharge a chain over normal-form payloads; positive succedents only."""
    match mv:
        case MMEta(nf):
            return nf
        case MMEUnit(ne, rest):
            inner = run_nf_chain(rest)
            if isinstance(_check_nf(inner)[1], Lolli):
                raise IllFormed((), "cannot run a unit elimination at an implication")
            return MNEUnit(ne, inner)
        case MMETensor(x, y, ne, rest):
            inner = run_nf_chain(rest)
            if isinstance(_check_nf(inner)[1], Lolli):
                raise IllFormed((), "cannot run a tensor elimination at an implication")
            return MNETensor(x, y, ne, inner)
    raise TypeError(f"not a chain: {mv!r}")


def run_at(formula: Formula, mv: MChain):
    match formula:
        case Atom():
            return MVAtom(formula, run_nf_chain(chain_map(lambda v: v.nf, mv)))
        case Unit():
            return MVUnit(formula, chain_join(chain_map(lambda v: v.chain, mv)))
        case Tensor():
            return MVTensor(formula, chain_join(chain_map(lambda v: v.chain, mv)))
        case Lolli(_, result):
            return MVLolli(formula, lambda arg: run_at(result, _rcst(mv, arg)))
    raise TypeError(f"not a MILL formula: {formula!r}")


def lmst(x, mv: MChain) -> MChain:
    """Left strength: pair a value onto the chain.  The symmetric tensor
    needs no context bookkeeping, so links pass through unchanged."""
    match mv:
        case MMEta(y):
            return MMEta(MPair(x, y))
        case MMEUnit(ne, rest):
            return MMEUnit(ne, lmst(x, rest))
        case MMETensor(a, b, ne, rest):
            return MMETensor(a, b, ne, lmst(x, rest))
    raise TypeError(f"not a chain: {mv!r}")


def rmst(mv: MChain, x) -> MChain:
    match mv:
        case MMEta(y):
            return MMEta(MPair(y, x))
        case MMEUnit(ne, rest):
            return MMEUnit(ne, rmst(rest, x))
        case MMETensor(a, b, ne, rest):
            return MMETensor(a, b, ne, rmst(rest, x))
    raise TypeError(f"not a chain: {mv!r}")


def _rcst(mv: MChain, arg) -> MChain:
    match mv:
        case MMEta(f):
            return MMEta(f.fn(arg))
        case MMEUnit(ne, rest):
            return MMEUnit(ne, _rcst(rest, arg))
        case MMETensor(x, y, ne, rest):
            return MMETensor(x, y, ne, _rcst(rest, arg))
    raise TypeError(f"not a chain: {mv!r}")


# ---------------------------------------------------------------------------
# Evaluation, reflection, reification

def _split_env(env: dict, names) -> tuple[dict, dict]:
    taken = {n: v for n, v in env.items() if n in names}
    rest = {n: v for n, v in env.items() if n not in names}
    return taken, rest


def _eval(t: MDerivation, env: dict, supply: NameSupply):
    match t:
        case MAx(x, _):
            return env[x]
        case MILolli(x, body):

            def fn(arg):
                return _eval(body, {**env, x: arg}, supply)

            return MVLolli(_formula_of(t), fn)
        case MELolli(fun, arg):
            fnames = set(_typecheck(fun)[0])
            env_f, env_a = _split_env(env, fnames)
            return _eval(fun, env_f, supply).fn(_eval(arg, env_a, supply))
        case MIUnit():
            return MVUnit(Unit(), MMEta(UNIT_WITNESS))
        case MITensor(left, right):
            lnames = set(_typecheck(left)[0])
            env_l, env_r = _split_env(env, lnames)
            pair = MPair(_eval(left, env_l, supply), _eval(right, env_r, supply))
            return MVTensor(_formula_of(t), MMEta(pair))
        case MEUnit(s, c):
            snames = set(_typecheck(s)[0])
            env_s, env_c = _split_env(env, snames)
            spliced = lmst(env_c, _eval(s, env_s, supply).chain)

            def drop_witness(p: MPair):
                return _eval(c, p.left, supply)

            return run_at(_formula_of(t), chain_map(drop_witness, spliced))
        case METensor(x, y, s, c):
            snames = set(_typecheck(s)[0])
            env_s, env_c = _split_env(env, snames)
            spliced = lmst(env_c, _eval(s, env_s, supply).chain)

            def with_pair(p: MPair):
                return _eval(c, {**p.left, x: p.right.left, y: p.right.right}, supply)

            return run_at(_formula_of(t), chain_map(with_pair, spliced))
    raise TypeError(f"not a MILL derivation: {t!r}")


def _formula_of(t: MDerivation) -> Formula:
    return _typecheck(t)[1]


def reflect(formula: Formula, ne: MNe, supply: NameSupply):
    match formula:
        case Atom():
            return MVAtom(formula, MNSw(ne))
        case Lolli(arg, result):

            def fn(v):
                return reflect(result, MNELolli(ne, reify(arg, v, supply)), supply)

            return MVLolli(formula, fn)
        case Unit():
            return MVUnit(formula, MMEUnit(ne, MMEta(UNIT_WITNESS)))
        case Tensor(left, right):
            x, y = supply.fresh(), supply.fresh()
            pair = MPair(reflect(left, MNAx(x, left), supply), reflect(right, MNAx(y, right), supply))
            return MVTensor(formula, MMETensor(x, y, ne, MMEta(pair)))
    raise TypeError(f"not a MILL formula: {formula!r}")


def reify(formula: Formula, v, supply: NameSupply) -> MNf:
    match formula:
        case Atom():
            return v.nf
        case Lolli(arg, result):
            x = supply.fresh()
            return MNILolli(x, reify(result, v.fn(reflect(arg, MNAx(x, arg), supply)), supply))
        case Unit():
            return run_nf_chain(chain_map(lambda _w: MNIUnit(), v.chain))
        case Tensor(left, right):

            def pair_nf(p: MPair):
                return MNITensor(reify(left, p.left, supply), reify(right, p.right, supply))

            return run_nf_chain(chain_map(pair_nf, v.chain))
    raise TypeError(f"not a MILL formula: {formula!r}")


def evaluate(t: MDerivation, env: dict, supply: NameSupply | None = None):
    """Interpret a derivation in the model, one env entry per hypothesis name."""
    cxt, _ = _typecheck(t)
    if set(env) != set(cxt):
        raise IllFormed((), f"environment names {sorted(env)} do not match {sorted(cxt)}")
    return _eval(t, env, supply if supply is not None else NameSupply(all_names(t)))


def nbe(t: MDerivation) -> MNf:
    """Normalize a MILL derivation; binder names come from a fresh supply."""
    seq = typecheck(t)
    supply = NameSupply(all_names(t))
    env = {name: reflect(f, MNAx(name, f), supply) for name, f in seq.context}
    return reify(seq.succedent, _eval(t, env, supply), supply)


# ---------------------------------------------------------------------------
# The equational theory, transcribed from the ordered calculus

class MillEquationId(enum.Enum):
    BetaLolli = enum.auto()
    BetaUnit = enum.auto()
    BetaTensor = enum.auto()
    EtaLolli = enum.auto()
    EtaUnit = enum.auto()
    EtaTensor = enum.auto()
    PermUnitILolli = enum.auto()
    PermELolliEUnitFun = enum.auto()
    PermELolliEUnitArg = enum.auto()
    PermEUnitEUnit = enum.auto()
    PermTensorILolli = enum.auto()
    PermELolliETensorFun = enum.auto()
    PermELolliETensorArg = enum.auto()
    PermETensorETensor = enum.auto()


@dataclass(frozen=True)
class MStep:
    path: tuple[int, ...]
    eq: MillEquationId
    direction: str  # "LR" | "RL"


class MStepNotApplicable(Exception):
    pass


def _fresh_pair(t: MDerivation) -> tuple[str, str]:
    s = NameSupply(all_names(t), prefix="e")
    return s.fresh(), s.fresh()


def _rewrite_root_m(t: MDerivation, eq: MillEquationId, d: str):
    E = MillEquationId
    match eq, d:
        case E.BetaLolli, "LR":
            if isinstance(t, MELolli) and isinstance(t.fun, MILolli):
                return substitute(t.fun.name, t.arg, t.fun.body)
        case E.BetaUnit, "LR":
            if isinstance(t, MEUnit) and isinstance(t.scrutinee, MIUnit):
                return t.cont
        case E.BetaUnit, "RL":
            return MEUnit(MIUnit(), t)
        case E.BetaTensor, "LR":
            if isinstance(t, METensor) and isinstance(t.scrutinee, MITensor):
                inner = substitute(t.y, t.scrutinee.right, t.cont)
                return substitute(t.x, t.scrutinee.left, inner)
        case E.EtaLolli, "LR":
            if (
                isinstance(t, MILolli)
                and isinstance(t.body, MELolli)
                and isinstance(t.body.arg, MAx)
                and t.body.arg.name == t.name
            ):
                return t.body.fun
        case E.EtaLolli, "RL":
            f = _formula_of(t)
            if isinstance(f, Lolli):
                x, _ = _fresh_pair(t)
                return MILolli(x, MELolli(t, MAx(x, f.arg)))
        case E.EtaUnit, "LR":
            if isinstance(t, MEUnit) and isinstance(t.cont, MIUnit):
                return t.scrutinee
        case E.EtaUnit, "RL":
            if _formula_of(t) == Unit():
                return MEUnit(t, MIUnit())
        case E.EtaTensor, "LR":
            if (
                isinstance(t, METensor)
                and isinstance(t.cont, MITensor)
                and isinstance(t.cont.left, MAx)
                and isinstance(t.cont.right, MAx)
                and t.cont.left.name == t.x
                and t.cont.right.name == t.y
            ):
                return t.scrutinee
        case E.EtaTensor, "RL":
            f = _formula_of(t)
            if isinstance(f, Tensor):
                x, y = _fresh_pair(t)
                return METensor(x, y, t, MITensor(MAx(x, f.left), MAx(y, f.right)))
        case E.PermUnitILolli, "LR":
            if isinstance(t, MEUnit) and isinstance(t.cont, MILolli):
                return MILolli(t.cont.name, MEUnit(t.scrutinee, t.cont.body))
        case E.PermUnitILolli, "RL":
            if isinstance(t, MILolli) and isinstance(t.body, MEUnit):
                return MEUnit(t.body.scrutinee, MILolli(t.name, t.body.cont))
        case E.PermELolliEUnitFun, "LR":
            if isinstance(t, MELolli) and isinstance(t.fun, MEUnit):
                return MEUnit(t.fun.scrutinee, MELolli(t.fun.cont, t.arg))
        case E.PermELolliEUnitFun, "RL":
            if isinstance(t, MEUnit) and isinstance(t.cont, MELolli):
                return MELolli(MEUnit(t.scrutinee, t.cont.fun), t.cont.arg)
        case E.PermELolliEUnitArg, "LR":
            if isinstance(t, MELolli) and isinstance(t.arg, MEUnit):
                return MEUnit(t.arg.scrutinee, MELolli(t.fun, t.arg.cont))
        case E.PermELolliEUnitArg, "RL":
            if isinstance(t, MEUnit) and isinstance(t.cont, MELolli):
                return MELolli(t.cont.fun, MEUnit(t.scrutinee, t.cont.arg))
        case E.PermEUnitEUnit, "LR":
            if isinstance(t, MEUnit) and isinstance(t.scrutinee, MEUnit):
                return MEUnit(t.scrutinee.scrutinee, MEUnit(t.scrutinee.cont, t.cont))
        case E.PermEUnitEUnit, "RL":
            if isinstance(t, MEUnit) and isinstance(t.cont, MEUnit):
                return MEUnit(MEUnit(t.scrutinee, t.cont.scrutinee), t.cont.cont)
        case E.PermTensorILolli, "LR":
            if isinstance(t, METensor) and isinstance(t.cont, MILolli):
                if t.cont.name not in (t.x, t.y):
                    return MILolli(t.cont.name, METensor(t.x, t.y, t.scrutinee, t.cont.body))
        case E.PermTensorILolli, "RL":
            if isinstance(t, MILolli) and isinstance(t.body, METensor):
                e = t.body
                if t.name not in (e.x, e.y):
                    return METensor(e.x, e.y, e.scrutinee, MILolli(t.name, e.cont))
        case E.PermELolliETensorFun, "LR":
            if isinstance(t, MELolli) and isinstance(t.fun, METensor):
                e = t.fun
                return METensor(e.x, e.y, e.scrutinee, MELolli(e.cont, t.arg))
        case E.PermELolliETensorFun, "RL":
            if isinstance(t, METensor) and isinstance(t.cont, MELolli):
                return MELolli(METensor(t.x, t.y, t.scrutinee, t.cont.fun), t.cont.arg)
        case E.PermELolliETensorArg, "LR":
            if isinstance(t, MELolli) and isinstance(t.arg, METensor):
                e = t.arg
                return METensor(e.x, e.y, e.scrutinee, MELolli(t.fun, e.cont))
        case E.PermELolliETensorArg, "RL":
            if isinstance(t, METensor) and isinstance(t.cont, MELolli):
                return MELolli(t.cont.fun, METensor(t.x, t.y, t.scrutinee, t.cont.arg))
        case E.PermETensorETensor, "LR":
            if isinstance(t, METensor) and isinstance(t.scrutinee, METensor):
                i = t.scrutinee
                return METensor(i.x, i.y, i.scrutinee, METensor(t.x, t.y, i.cont, t.cont))
        case E.PermETensorETensor, "RL":
            if isinstance(t, METensor) and isinstance(t.cont, METensor):
                i = t.cont
                return METensor(i.x, i.y, METensor(t.x, t.y, t.scrutinee, i.scrutinee), i.cont)
    return None


def _try_rewrite_m(t: MDerivation, eq: MillEquationId, d: str):
    try:
        before = typecheck(t)
    except IllFormed:
        return None
    try:
        out = _rewrite_root_m(t, eq, d)
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


def _replace_m(t: MDerivation, path: tuple[int, ...], new: MDerivation) -> MDerivation:
    if not path:
        return new
    i, rest = path[0], path[1:]
    cs = children(t)
    if i >= len(cs):
        raise MStepNotApplicable(f"path {list(path)} does not address a subterm")
    sub = _replace_m(cs[i], rest, new)
    match t:
        case MILolli(x, _):
            return MILolli(x, sub)
        case MELolli(fun, arg):
            return MELolli(sub, arg) if i == 0 else MELolli(fun, sub)
        case MEUnit(s, c):
            return MEUnit(sub, c) if i == 0 else MEUnit(s, sub)
        case MITensor(left, right):
            return MITensor(sub, right) if i == 0 else MITensor(left, sub)
        case METensor(x, y, s, c):
            return METensor(x, y, sub, c) if i == 0 else METensor(x, y, s, sub)
    raise MStepNotApplicable(f"cannot rebuild through {type(t).__name__}")


def successors(t: MDerivation, eta_cap: int):
    out = []

    def walk(sub, path):
        for eq in MillEquationId:
            for d in ("LR", "RL"):
                cand = _try_rewrite_m(sub, eq, d)
                if cand is None:
                    continue
                if term_size(cand) > term_size(sub) and term_size(cand) > eta_cap:
                    continue
                out.append((MStep(path, eq, d), _replace_m(t, path, cand)))
        for i, c in enumerate(children(sub)):
            walk(c, path + (i,))

    walk(t, ())
    return out


def applicable_steps(t: MDerivation, eta_cap: int = 0) -> list[MStep]:
    return [s for s, _ in successors(t, eta_cap)]


def apply_step(t: MDerivation, step: MStep) -> MDerivation:
    sub = t
    for i in step.path:
        cs = children(sub)
        if i >= len(cs):
            raise MStepNotApplicable(f"path {list(step.path)} does not address a subterm")
        sub = cs[i]
    cand = _try_rewrite_m(sub, step.eq, step.direction)
    if cand is None:
        raise MStepNotApplicable(f"{step.eq.name} {step.direction} does not match at {list(step.path)}")
    return _replace_m(t, step.path, cand)


# ---------------------------------------------------------------------------
# Transcription from the ordered calculus

def from_lambek(t, names: list[str] | None = None):
    """Transcribe an ordered derivation, naming hypotheses left to right.

    Both implications collapse onto the single linear one; split indices
    become binder names.
    """
    from . import syntax as lk

    seq = lk.typecheck(t)
    if names is None:
        names = [f"x{i}" for i in range(len(seq.antecedent))]
    if len(names) != len(seq.antecedent):
        raise ValueError("one name per hypothesis required")
    supply = NameSupply(set(names), prefix="b")
    return _from_lambek(t, list(names), supply)


def formula_from_lambek(f: Formula) -> Formula:
    from . import syntax as lk

    match f:
        case lk.Atom() | lk.Unit():
            return f
        case lk.Tensor(a, b):
            return Tensor(formula_from_lambek(a), formula_from_lambek(b))
        case lk.Over(result, arg):
            return Lolli(formula_from_lambek(arg), formula_from_lambek(result))
        case lk.Under(arg, result):
            return Lolli(formula_from_lambek(arg), formula_from_lambek(result))
    raise TypeError(f"not an ordered formula: {f!r}")


def _from_lambek(t, names: list[str], supply: NameSupply):
    from . import syntax as lk

    def width(sub) -> int:
        return len(lk.typecheck(sub).antecedent)

    match t:
        case lk.Ax(f):
            return MAx(names[0], formula_from_lambek(f))
        case lk.IOver(body):
            x = supply.fresh()
            return MILolli(x, _from_lambek(body, names + [x], supply))
        case lk.IUnder(body):
            x = supply.fresh()
            return MILolli(x, _from_lambek(body, [x] + names, supply))
        case lk.EOver(fun, arg):
            n = width(fun)
            return MELolli(_from_lambek(fun, names[:n], supply), _from_lambek(arg, names[n:], supply))
        case lk.EUnder(arg, fun):
            n = width(arg)
            return MELolli(
                _from_lambek(fun, names[n:], supply), _from_lambek(arg, names[:n], supply)
            )
        case lk.IUnit():
            return MIUnit()
        case lk.EUnit(k, s, c):
            m = width(s)
            return MEUnit(
                _from_lambek(s, names[k:k + m], supply),
                _from_lambek(c, names[:k] + names[k + m:], supply),
            )
        case lk.ITensor(left, right):
            n = width(left)
            return MITensor(_from_lambek(left, names[:n], supply), _from_lambek(right, names[n:], supply))
        case lk.ETensor(k, s, c):
            m = width(s)
            x, y = supply.fresh(), supply.fresh()
            return METensor(
                x,
                y,
                _from_lambek(s, names[k:k + m], supply),
                _from_lambek(c, names[:k] + [x, y] + names[k + m:], supply),
            )
    raise TypeError(f"not an ordered derivation: {t!r}")


def rename_free_nf(n: MNf, mapping: dict[str, str]) -> MNf:
    """Rename free hypothesis names in a normal form; binders shadow."""
    if not mapping:
        return n
    match n:
        case MNAx(x, f):
            return MNAx(mapping.get(x, x), f)
        case MNSw(ne):
            return MNSw(rename_free_nf(ne, mapping))
        case MNELolli(fun, arg):
            return MNELolli(rename_free_nf(fun, mapping), rename_free_nf(arg, mapping))
        case MNILolli(x, body):
            inner = {k: v for k, v in mapping.items() if k != x}
            return MNILolli(x, rename_free_nf(body, inner))
        case MNIUnit():
            return n
        case MNEUnit(s, c):
            return MNEUnit(rename_free_nf(s, mapping), rename_free_nf(c, mapping))
        case MNITensor(left, right):
            return MNITensor(rename_free_nf(left, mapping), rename_free_nf(right, mapping))
        case MNETensor(x, y, s, c):
            inner = {k: v for k, v in mapping.items() if k not in (x, y)}
            return MNETensor(x, y, rename_free_nf(s, mapping), rename_free_nf(c, inner))
    raise TypeError(f"not a MILL normal form: {n!r}")
