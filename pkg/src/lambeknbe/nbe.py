"""Normalization by evaluation: evaluate a derivation, then read back a normal form.

Evaluation interprets each derivation as a transformation of semantic
environments; reflection embeds neutrals into the model and reification
extracts beta-eta-long normal forms.  The unit/tensor elimination cases follow
the strength-then-run composite literally, with no fusion, so each clause can
be audited in isolation.
"""

from __future__ import annotations

from .nf import NAx, NEOver, NEUnder, NIOver, NITensor, NIUnder, NIUnit, NSw, Ne, Nf
from .sem import (
    MEUnit,
    METensor,
    MEta,
    MonadicValue,
    NfSlot,
    SemEnv,
    SemValue,
    UNIT_WITNESS,
    VAtom,
    VOver,
    VTensor,
    VUnder,
    VUnit,
    lmst,
    rmst,
    run_at,
    run_nf,
    tmap,
)
from .syntax import (
    Atom,
    Ax,
    Context,
    Derivation,
    Env,
    EnvMismatch,
    EOver,
    ETensor,
    EUnder,
    EUnit,
    Formula,
    IOver,
    ITensor,
    IUnder,
    IUnit,
    Over,
    Tensor,
    Under,
    Unit,
    typecheck,
)


def evaluate(t: Derivation, env: SemEnv) -> SemValue:
    """Interpret t in the model, one environment entry per hypothesis."""
    seq = typecheck(t)
    if len(env) != len(seq.antecedent) or any(
        v.formula != f for (_, v), f in zip(env.entries, seq.antecedent)
    ):
        raise EnvMismatch(f"environment does not interpret {seq.antecedent}")
    return _eval(t, env)


def _eval(t: Derivation, env: SemEnv) -> SemValue:
    match t:
        case Ax():
            return env.entries[0][1]
        case IOver(body):
            f = typecheck(t).succedent

            def over_fn(arg_cxt: Context, arg: SemValue) -> SemValue:
                return _eval(body, env + SemEnv(((arg_cxt, arg),)))

            return VOver(f, env.cxt, over_fn)
        case IUnder(body):
            f = typecheck(t).succedent

            def under_fn(arg_cxt: Context, arg: SemValue) -> SemValue:
                return _eval(body, SemEnv(((arg_cxt, arg),)) + env)

            return VUnder(f, env.cxt, under_fn)
        case EOver(fun, arg):
            n = len(typecheck(fun).antecedent)
            env_f, env_a = env.split(n)
            va = _eval(arg, env_a)
            return _eval(fun, env_f).fn(env_a.cxt, va)
        case EUnder(arg, fun):
            n = len(typecheck(arg).antecedent)
            env_a, env_f = env.split(n)
            va = _eval(arg, env_a)
            return _eval(fun, env_f).fn(env_a.cxt, va)
        case IUnit():
            return VUnit(Unit(), (), MEta(UNIT_WITNESS))
        case ITensor(left, right):
            n = len(typecheck(left).antecedent)
            env_l, env_r = env.split(n)
            vl, vr = _eval(left, env_l), _eval(right, env_r)
            pair = SemEnv(((env_l.cxt, vl), (env_r.cxt, vr)))
            return VTensor(typecheck(t).succedent, env.cxt, MEta(pair))
        case EUnit(k, scrutinee, cont) | ETensor(k, scrutinee, cont):
            m = len(typecheck(scrutinee).antecedent)
            env0, rest = env.split(k)
            env_s, env1 = rest.split(m)
            chain = _eval(scrutinee, env_s).chain
            spliced = rmst(lmst(env0, chain), env1)
            target = typecheck(t).succedent
            return run_at(target, tmap(lambda row: _eval(cont, row), spliced))
    raise TypeError(f"not a derivation: {t!r}")


def evaluate_env(sigma: Env, env: SemEnv) -> SemEnv:
    """Interpret a substitution pointwise, splitting env by its source slices."""
    if env.cxt != sigma.source:
        raise EnvMismatch(f"environment home {env.cxt} does not match source {sigma.source}")
    out = []
    remaining = env
    for item, split in zip(sigma.items, sigma.source_splits):
        part, remaining = remaining.split(len(split))
        out.append((part.cxt, _eval(item, part)))
    return SemEnv(tuple(out))


def reflect(formula: Formula, ne: Ne) -> SemValue:
    """Embed a neutral into the model at its own context."""
    from .nf import typecheck_ne

    home = typecheck_ne(ne).antecedent
    match formula:
        case Atom():
            return VAtom(formula, home, NSw(ne))
        case Over(result, arg):

            def over_fn(arg_cxt: Context, v: SemValue) -> SemValue:
                return reflect(result, NEOver(ne, reify(arg, v)))

            return VOver(formula, home, over_fn)
        case Under(arg, result):

            def under_fn(arg_cxt: Context, v: SemValue) -> SemValue:
                return reflect(result, NEUnder(reify(arg, v), ne))

            return VUnder(formula, home, under_fn)
        case Unit():
            return VUnit(formula, home, MEUnit((), ne, MEta(UNIT_WITNESS)))
        case Tensor(left, right):
            pair = SemEnv((
                ((left,), reflect(left, NAx(left))),
                ((right,), reflect(right, NAx(right))),
            ))
            return VTensor(formula, home, METensor((), ne, MEta(pair)))
    raise TypeError(f"not a formula: {formula!r}")


def reify(formula: Formula, v: SemValue) -> Nf:
    """Read a normal form back out of a semantic value."""
    match formula:
        case Atom():
            return v.nf
        case Over(result, arg):
            fresh_arg = reflect(arg, NAx(arg))
            return NIOver(reify(result, v.fn((arg,), fresh_arg)))
        case Under(arg, result):
            fresh_arg = reflect(arg, NAx(arg))
            return NIUnder(reify(result, v.fn((arg,), fresh_arg)))
        case Unit():
            return run_nf(tmap(lambda row: NfSlot(row.cxt, NIUnit()), v.chain))
        case Tensor(left, right):

            def pair_nf(row: SemEnv) -> NfSlot:
                (lc, lv), (rc, rv) = row.entries
                return NfSlot(row.cxt, NITensor(reify(left, lv), reify(right, rv)))

            return run_nf(tmap(pair_nf, v.chain))
    raise TypeError(f"not a formula: {formula!r}")


def fresh_env(g: Context) -> SemEnv:
    """Reflect each hypothesis as its own axiom: the generic environment."""
    return SemEnv(tuple(((f,), reflect(f, NAx(f))) for f in g))


def normalize(t: Derivation) -> Nf:
    """The normalization function: reify the evaluation at the fresh environment."""
    seq = typecheck(t)
    return reify(seq.succedent, _eval(t, fresh_env(seq.antecedent)))
