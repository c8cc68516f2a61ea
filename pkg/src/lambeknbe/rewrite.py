"""The beta-eta equational theory as an executable rewrite system.

Each equation is oriented so LeftToRight is the reducing direction for the
beta and eta rows; the permutative rows keep their catalog orientation, which
pushes unit/tensor eliminations toward the root.  RightToLeft of the eta rows
is eta-expansion and is only enumerated while the expanded subterm stays under
a size cap, keeping the search space finite.

The beta rows for the implications and the tensor have substitution images on
their right-hand sides, which are not syntactic patterns, so those rows are
enumerable LeftToRight only.  The unit beta row is expandable, but a step
carries no splice parameter, so its expansion is enumerated at position 0
only.  `equiv_oracle` is a bounded bidirectional search over the resulting
step graph: Related verdicts are sound (the trace replays), Unknown verdicts
are inconclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .syntax import (
    Atom,
    Ax,
    Context,
    Derivation,
    EnvMismatch,
    EOver,
    ETensor,
    EUnder,
    EUnit,
    IOver,
    ITensor,
    IUnder,
    IUnit,
    IllFormed,
    Over,
    Tensor,
    Under,
    Unit,
    children,
    sub1,
    term_size,
    typecheck,
)


class EquationId(enum.Enum):
    BetaOver = enum.auto()
    BetaUnder = enum.auto()
    BetaUnit = enum.auto()
    BetaTensor = enum.auto()
    EtaOver = enum.auto()
    EtaUnder = enum.auto()
    EtaUnit = enum.auto()
    EtaTensor = enum.auto()
    PermUnitIOver = enum.auto()
    PermUnitIUnder = enum.auto()
    PermEOverEUnitL = enum.auto()
    PermEOverEUnitR = enum.auto()
    PermEUnderEUnitL = enum.auto()
    PermEUnderEUnitR = enum.auto()
    PermEUnitEUnit = enum.auto()
    PermTensorIOver = enum.auto()
    PermTensorIUnder = enum.auto()
    PermEOverETensorL = enum.auto()
    PermEOverETensorR = enum.auto()
    PermEUnderETensorL = enum.auto()
    PermEUnderETensorR = enum.auto()
    PermETensorETensor = enum.auto()


class Direction(enum.Enum):
    LeftToRight = "LR"
    RightToLeft = "RL"


LR = Direction.LeftToRight
RL = Direction.RightToLeft


@dataclass(frozen=True)
class RewriteStep:
    path: tuple[int, ...]
    eq: EquationId
    direction: Direction


@dataclass(frozen=True)
class Related:
    trace: tuple[RewriteStep, ...]


@dataclass(frozen=True)
class Unknown:
    pass


class StepNotApplicable(Exception):
    pass


class SequentMismatch(Exception):
    pass


def _ante(t: Derivation) -> Context:
    return typecheck(t).antecedent


# ---------------------------------------------------------------------------
# Single-equation rewriting at the root of a subterm.
#
# Split positions for the permutative rows are recomputed from the premise
# context lengths; every candidate is validated afterwards by typechecking it
# against the original subterm's sequent, so an arithmetic slip surfaces as
# "not applicable" rather than as an ill-typed result.

def _rewrite_root(t: Derivation, eq: EquationId, d: Direction) -> Derivation | None:
    E = EquationId
    match eq, d:
        # beta rows: reductions only, except the unit row which expands at 0.
        case E.BetaOver, Direction.LeftToRight:
            if isinstance(t, EOver) and isinstance(t.fun, IOver):
                body = t.fun.body
                return sub1(t.arg, len(_ante(body)) - 1, body)
        case E.BetaUnder, Direction.LeftToRight:
            if isinstance(t, EUnder) and isinstance(t.fun, IUnder):
                return sub1(t.arg, 0, t.fun.body)
        case E.BetaUnit, Direction.LeftToRight:
            if isinstance(t, EUnit) and isinstance(t.scrutinee, IUnit):
                return t.cont
        case E.BetaUnit, Direction.RightToLeft:
            return EUnit(0, IUnit(), t)
        case E.BetaTensor, Direction.LeftToRight:
            if isinstance(t, ETensor) and isinstance(t.scrutinee, ITensor):
                k = t.insert_at
                return sub1(t.scrutinee.left, k, sub1(t.scrutinee.right, k + 1, t.cont))

        # eta rows: LeftToRight contracts, RightToLeft expands.
        case E.EtaOver, Direction.LeftToRight:
            if isinstance(t, IOver) and isinstance(t.body, EOver) and isinstance(t.body.arg, Ax):
                return t.body.fun
        case E.EtaOver, Direction.RightToLeft:
            f = typecheck(t).succedent
            if isinstance(f, Over):
                return IOver(EOver(t, Ax(f.arg)))
        case E.EtaUnder, Direction.LeftToRight:
            if isinstance(t, IUnder) and isinstance(t.body, EUnder) and isinstance(t.body.arg, Ax):
                return t.body.fun
        case E.EtaUnder, Direction.RightToLeft:
            f = typecheck(t).succedent
            if isinstance(f, Under):
                return IUnder(EUnder(Ax(f.arg), t))
        case E.EtaUnit, Direction.LeftToRight:
            if isinstance(t, EUnit) and isinstance(t.cont, IUnit):
                return t.scrutinee
        case E.EtaUnit, Direction.RightToLeft:
            if typecheck(t).succedent == Unit():
                return EUnit(0, t, IUnit())
        case E.EtaTensor, Direction.LeftToRight:
            if (
                isinstance(t, ETensor)
                and isinstance(t.cont, ITensor)
                and isinstance(t.cont.left, Ax)
                and isinstance(t.cont.right, Ax)
            ):
                return t.scrutinee
        case E.EtaTensor, Direction.RightToLeft:
            f = typecheck(t).succedent
            if isinstance(f, Tensor):
                return ETensor(0, t, ITensor(Ax(f.left), Ax(f.right)))

        # unit elimination commuting with introductions of the implications
        case E.PermUnitIOver, Direction.LeftToRight:
            if isinstance(t, EUnit) and isinstance(t.cont, IOver):
                return IOver(EUnit(t.insert_at, t.scrutinee, t.cont.body))
        case E.PermUnitIOver, Direction.RightToLeft:
            if isinstance(t, IOver) and isinstance(t.body, EUnit):
                e = t.body
                if e.insert_at <= len(_ante(e.cont)) - 1:
                    return EUnit(e.insert_at, e.scrutinee, IOver(e.cont))
        case E.PermUnitIUnder, Direction.LeftToRight:
            if isinstance(t, EUnit) and isinstance(t.cont, IUnder):
                return IUnder(EUnit(t.insert_at + 1, t.scrutinee, t.cont.body))
        case E.PermUnitIUnder, Direction.RightToLeft:
            if isinstance(t, IUnder) and isinstance(t.body, EUnit) and t.body.insert_at >= 1:
                e = t.body
                return EUnit(e.insert_at - 1, e.scrutinee, IUnder(e.cont))

        # unit elimination commuting with the application rules
        case E.PermEOverEUnitL, Direction.LeftToRight:
            if isinstance(t, EOver) and isinstance(t.fun, EUnit):
                e = t.fun
                return EUnit(e.insert_at, e.scrutinee, EOver(e.cont, t.arg))
        case E.PermEOverEUnitL, Direction.RightToLeft:
            if isinstance(t, EUnit) and isinstance(t.cont, EOver):
                e, a = t, t.cont
                if e.insert_at <= len(_ante(a.fun)):
                    return EOver(EUnit(e.insert_at, e.scrutinee, a.fun), a.arg)
        case E.PermEOverEUnitR, Direction.LeftToRight:
            if isinstance(t, EOver) and isinstance(t.arg, EUnit):
                e = t.arg
                return EUnit(len(_ante(t.fun)) + e.insert_at, e.scrutinee, EOver(t.fun, e.cont))
        case E.PermEOverEUnitR, Direction.RightToLeft:
            if isinstance(t, EUnit) and isinstance(t.cont, EOver):
                e, a = t, t.cont
                n = len(_ante(a.fun))
                if e.insert_at >= n:
                    return EOver(a.fun, EUnit(e.insert_at - n, e.scrutinee, a.arg))
        case E.PermEUnderEUnitL, Direction.LeftToRight:
            if isinstance(t, EUnder) and isinstance(t.arg, EUnit):
                e = t.arg
                return EUnit(e.insert_at, e.scrutinee, EUnder(e.cont, t.fun))
        case E.PermEUnderEUnitL, Direction.RightToLeft:
            if isinstance(t, EUnit) and isinstance(t.cont, EUnder):
                e, a = t, t.cont
                if e.insert_at <= len(_ante(a.arg)):
                    return EUnder(EUnit(e.insert_at, e.scrutinee, a.arg), a.fun)
        case E.PermEUnderEUnitR, Direction.LeftToRight:
            if isinstance(t, EUnder) and isinstance(t.fun, EUnit):
                e = t.fun
                return EUnit(len(_ante(t.arg)) + e.insert_at, e.scrutinee, EUnder(t.arg, e.cont))
        case E.PermEUnderEUnitR, Direction.RightToLeft:
            if isinstance(t, EUnit) and isinstance(t.cont, EUnder):
                e, a = t, t.cont
                n = len(_ante(a.arg))
                if e.insert_at >= n:
                    return EUnder(a.arg, EUnit(e.insert_at - n, e.scrutinee, a.fun))

        # two nested unit eliminations
        case E.PermEUnitEUnit, Direction.LeftToRight:
            if isinstance(t, EUnit) and isinstance(t.scrutinee, EUnit):
                outer, inner = t, t.scrutinee
                return EUnit(
                    outer.insert_at + inner.insert_at,
                    inner.scrutinee,
                    EUnit(outer.insert_at, inner.cont, outer.cont),
                )
        case E.PermEUnitEUnit, Direction.RightToLeft:
            if isinstance(t, EUnit) and isinstance(t.cont, EUnit):
                a, b = t, t.cont
                k = a.insert_at - b.insert_at
                if 0 <= k <= len(_ante(b.cont)):
                    return EUnit(b.insert_at, EUnit(k, a.scrutinee, b.scrutinee), b.cont)

        # tensor elimination commuting with introductions of the implications
        case E.PermTensorIOver, Direction.LeftToRight:
            if isinstance(t, ETensor) and isinstance(t.cont, IOver):
                return IOver(ETensor(t.insert_at, t.scrutinee, t.cont.body))
        case E.PermTensorIOver, Direction.RightToLeft:
            if isinstance(t, IOver) and isinstance(t.body, ETensor):
                e = t.body
                if e.insert_at + 2 <= len(_ante(e.cont)) - 1:
                    return ETensor(e.insert_at, e.scrutinee, IOver(e.cont))
        case E.PermTensorIUnder, Direction.LeftToRight:
            if isinstance(t, ETensor) and isinstance(t.cont, IUnder):
                return IUnder(ETensor(t.insert_at + 1, t.scrutinee, t.cont.body))
        case E.PermTensorIUnder, Direction.RightToLeft:
            if isinstance(t, IUnder) and isinstance(t.body, ETensor) and t.body.insert_at >= 1:
                e = t.body
                return ETensor(e.insert_at - 1, e.scrutinee, IUnder(e.cont))

        # tensor elimination commuting with the application rules
        case E.PermEOverETensorL, Direction.LeftToRight:
            if isinstance(t, EOver) and isinstance(t.fun, ETensor):
                e = t.fun
                return ETensor(e.insert_at, e.scrutinee, EOver(e.cont, t.arg))
        case E.PermEOverETensorL, Direction.RightToLeft:
            if isinstance(t, ETensor) and isinstance(t.cont, EOver):
                e, a = t, t.cont
                if e.insert_at + 2 <= len(_ante(a.fun)):
                    return EOver(ETensor(e.insert_at, e.scrutinee, a.fun), a.arg)
        case E.PermEOverETensorR, Direction.LeftToRight:
            if isinstance(t, EOver) and isinstance(t.arg, ETensor):
                e = t.arg
                return ETensor(len(_ante(t.fun)) + e.insert_at, e.scrutinee, EOver(t.fun, e.cont))
        case E.PermEOverETensorR, Direction.RightToLeft:
            if isinstance(t, ETensor) and isinstance(t.cont, EOver):
                e, a = t, t.cont
                n = len(_ante(a.fun))
                if e.insert_at >= n:
                    return EOver(a.fun, ETensor(e.insert_at - n, e.scrutinee, a.arg))
        case E.PermEUnderETensorL, Direction.LeftToRight:
            if isinstance(t, EUnder) and isinstance(t.arg, ETensor):
                e = t.arg
                return ETensor(e.insert_at, e.scrutinee, EUnder(e.cont, t.fun))
        case E.PermEUnderETensorL, Direction.RightToLeft:
            if isinstance(t, ETensor) and isinstance(t.cont, EUnder):
                e, a = t, t.cont
                if e.insert_at + 2 <= len(_ante(a.arg)):
                    return EUnder(ETensor(e.insert_at, e.scrutinee, a.arg), a.fun)
        case E.PermEUnderETensorR, Direction.LeftToRight:
            if isinstance(t, EUnder) and isinstance(t.fun, ETensor):
                e = t.fun
                return ETensor(len(_ante(t.arg)) + e.insert_at, e.scrutinee, EUnder(t.arg, e.cont))
        case E.PermEUnderETensorR, Direction.RightToLeft:
            if isinstance(t, ETensor) and isinstance(t.cont, EUnder):
                e, a = t, t.cont
                n = len(_ante(a.arg))
                if e.insert_at >= n:
                    return EUnder(a.arg, ETensor(e.insert_at - n, e.scrutinee, a.fun))

        # two nested tensor eliminations
        case E.PermETensorETensor, Direction.LeftToRight:
            if isinstance(t, ETensor) and isinstance(t.scrutinee, ETensor):
                outer, inner = t, t.scrutinee
                return ETensor(
                    outer.insert_at + inner.insert_at,
                    inner.scrutinee,
                    ETensor(outer.insert_at, inner.cont, outer.cont),
                )
        case E.PermETensorETensor, Direction.RightToLeft:
            if isinstance(t, ETensor) and isinstance(t.cont, ETensor):
                a, b = t, t.cont
                k = a.insert_at - b.insert_at
                if 0 <= k <= len(_ante(b.cont)) - 2:
                    return ETensor(b.insert_at, ETensor(k, a.scrutinee, b.scrutinee), b.cont)
    return None


def _try_rewrite(t: Derivation, eq: EquationId, d: Direction) -> Derivation | None:
    """Candidate rewrite at the root, validated to preserve the sequent."""
    try:
        before = typecheck(t)
    except IllFormed:
        return None
    try:
        out = _rewrite_root(t, eq, d)
    except (IllFormed, EnvMismatch):
        return None
    if out is None:
        return None
    try:
        after = typecheck(out)
    except IllFormed:
        return None
    if after != before:
        return None
    return out


# ---------------------------------------------------------------------------
# Enumeration and application

def _subterm(t: Derivation, path: tuple[int, ...]) -> Derivation:
    for i in path:
        cs = children(t)
        if i >= len(cs):
            raise StepNotApplicable(f"path {list(path)} does not address a subterm")
        t = cs[i]
    return t


def _replace(t: Derivation, path: tuple[int, ...], new: Derivation) -> Derivation:
    if not path:
        return new
    i, rest = path[0], path[1:]
    cs = children(t)
    if i >= len(cs):
        raise StepNotApplicable(f"path {list(path)} does not address a subterm")
    rebuilt = _replace(cs[i], rest, new)
    match t:
        case IOver():
            return IOver(rebuilt)
        case IUnder():
            return IUnder(rebuilt)
        case EOver(fun, arg):
            return EOver(rebuilt, arg) if i == 0 else EOver(fun, rebuilt)
        case EUnder(arg, fun):
            return EUnder(rebuilt, fun) if i == 0 else EUnder(arg, rebuilt)
        case EUnit(k, s, c):
            return EUnit(k, rebuilt, c) if i == 0 else EUnit(k, s, rebuilt)
        case ITensor(left, right):
            return ITensor(rebuilt, right) if i == 0 else ITensor(left, rebuilt)
        case ETensor(k, s, c):
            return ETensor(k, rebuilt, c) if i == 0 else ETensor(k, s, rebuilt)
    raise StepNotApplicable(f"cannot rebuild through {type(t).__name__}")


# Which (equation, direction) pairs can possibly fire at a node, by its head
# constructor.  The expansions fire anywhere (filtered by succedent inside the
# pattern), the rest need a specific head.  Enumeration order stays (equation,
# then direction) within each position.
_E = EquationId
_ANY_HEAD = [
    (_E.BetaUnit, RL),
    (_E.EtaOver, RL),
    (_E.EtaUnder, RL),
    (_E.EtaUnit, RL),
    (_E.EtaTensor, RL),
]
_BY_HEAD = {
    Ax: [],
    IUnit: [],
    ITensor: [],
    EOver: [
        (_E.BetaOver, LR),
        (_E.PermEOverEUnitL, LR),
        (_E.PermEOverEUnitR, LR),
        (_E.PermEOverETensorL, LR),
        (_E.PermEOverETensorR, LR),
    ],
    EUnder: [
        (_E.BetaUnder, LR),
        (_E.PermEUnderEUnitL, LR),
        (_E.PermEUnderEUnitR, LR),
        (_E.PermEUnderETensorL, LR),
        (_E.PermEUnderETensorR, LR),
    ],
    EUnit: [
        (_E.BetaUnit, LR),
        (_E.EtaUnit, LR),
        (_E.PermUnitIOver, LR),
        (_E.PermUnitIUnder, LR),
        (_E.PermEOverEUnitL, RL),
        (_E.PermEOverEUnitR, RL),
        (_E.PermEUnderEUnitL, RL),
        (_E.PermEUnderEUnitR, RL),
        (_E.PermEUnitEUnit, LR),
        (_E.PermEUnitEUnit, RL),
    ],
    ETensor: [
        (_E.BetaTensor, LR),
        (_E.EtaTensor, LR),
        (_E.PermTensorIOver, LR),
        (_E.PermTensorIUnder, LR),
        (_E.PermEOverETensorL, RL),
        (_E.PermEOverETensorR, RL),
        (_E.PermEUnderETensorL, RL),
        (_E.PermEUnderETensorR, RL),
        (_E.PermETensorETensor, LR),
        (_E.PermETensorETensor, RL),
    ],
    IOver: [(_E.EtaOver, LR), (_E.PermUnitIOver, RL), (_E.PermTensorIOver, RL)],
    IUnder: [(_E.EtaUnder, LR), (_E.PermUnitIUnder, RL), (_E.PermTensorIUnder, RL)],
}
_CANDIDATES = {
    head: sorted(pairs + _ANY_HEAD, key=lambda p: (p[0].value, p[1] is RL))
    for head, pairs in _BY_HEAD.items()
}


def local_rewrites(t: Derivation, eta_cap: int) -> list[tuple[RewriteStep, Derivation]]:
    """All (step, rewritten-subterm) pairs, in deterministic order.

    Size-increasing steps (eta-expansions, vacuous unit-elim insertion) are
    kept only while the rewritten subterm stays within `eta_cap` nodes.
    """
    out = []

    def walk(sub: Derivation, path: tuple[int, ...]):
        for eq, d in _CANDIDATES[type(sub)]:
            cand = _try_rewrite(sub, eq, d)
            if cand is None:
                continue
            if term_size(cand) > term_size(sub) and term_size(cand) > eta_cap:
                continue
            out.append((RewriteStep(path, eq, d), cand))
        for i, c in enumerate(children(sub)):
            walk(c, path + (i,))

    walk(t, ())
    return out


def successors(t: Derivation, eta_cap: int) -> list[tuple[RewriteStep, Derivation]]:
    """All (step, whole rewritten term) pairs, in deterministic order."""
    return [(step, _replace(t, step.path, cand)) for step, cand in local_rewrites(t, eta_cap)]


def applicable_steps(t: Derivation, eta_cap: int = 0) -> list[RewriteStep]:
    return [s for s, _ in local_rewrites(t, eta_cap)]


def apply_step(t: Derivation, step: RewriteStep) -> Derivation:
    sub = _subterm(t, step.path)
    cand = _try_rewrite(sub, step.eq, step.direction)
    if cand is None:
        raise StepNotApplicable(f"{step.eq.name} {step.direction.value} does not match at {list(step.path)}")
    return _replace(t, step.path, cand)


def _flip(step: RewriteStep) -> RewriteStep:
    return RewriteStep(step.path, step.eq, LR if step.direction is RL else RL)


# ---------------------------------------------------------------------------
# Bounded equivalence oracle

DEFAULT_MAX_VISITED = 1500
DEFAULT_FRONTIER_WIDTH = 400


def equiv_oracle(
    t: Derivation,
    u: Derivation,
    node_bound: int,
    step_bound: int,
    max_visited: int = DEFAULT_MAX_VISITED,
    frontier_width: int = DEFAULT_FRONTIER_WIDTH,
) -> Related | Unknown:
    """Bidirectional breadth-first search for a conversion path from t to u.

    Intermediate terms larger than `node_bound` are pruned and paths longer
    than `step_bound` are not considered.  Two work budgets keep the search
    practical: it gives up (`Unknown`) after expanding `max_visited` terms,
    and each level's frontier is truncated to its `frontier_width` smallest
    terms (conversion paths typically meet at a small contractum, so small
    terms are expanded first).  All truncation is sound: it can only turn
    Related into Unknown, never the reverse.

    A `Related` verdict carries a trace whose replay from t via `apply_step`
    reaches u exactly; edges explored from the u side are kept only when their
    flipped step verifiably inverts them, so the trace never needs an
    inexpressible reverse step.
    """
    if typecheck(t) != typecheck(u):
        raise SequentMismatch("the two derivations conclude different sequents")
    if t == u:
        return Related(())

    # parents[v] = (previous term, step applied to previous term to reach v)
    seen_t: dict[Derivation, tuple] = {t: None}
    seen_u: dict[Derivation, tuple] = {u: None}
    frontier_t, frontier_u = [t], [u]
    depth_t = depth_u = 0
    visited = 0

    def build_trace(meet: Derivation) -> Related:
        fwd = []
        cur = meet
        while seen_t[cur] is not None:
            prev, step = seen_t[cur]
            fwd.append(step)
            cur = prev
        fwd.reverse()
        back = []
        cur = meet
        while seen_u[cur] is not None:
            prev, step = seen_u[cur]
            back.append(_flip(step))
            cur = prev
        return Related(tuple(fwd + back))

    while frontier_t and frontier_u and depth_t + depth_u < step_bound:
        from_t = len(frontier_t) <= len(frontier_u)
        frontier = frontier_t if from_t else frontier_u
        seen, other = (seen_t, seen_u) if from_t else (seen_u, seen_t)
        new_frontier = []
        for v in sorted(frontier, key=term_size)[:frontier_width]:
            visited += 1
            if visited > max_visited:
                return Unknown()
            for step, w in successors(v, eta_cap=node_bound):
                if term_size(w) > node_bound or w in seen:
                    continue
                if not from_t:
                    # only keep edges whose inverse replays exactly
                    try:
                        if apply_step(w, _flip(step)) != v:
                            continue
                    except StepNotApplicable:
                        continue
                seen[w] = (v, step)
                if w in other:
                    return build_trace(w)
                new_frontier.append(w)
        if from_t:
            frontier_t = new_frontier
            depth_t += 1
        else:
            frontier_u = new_frontier
            depth_u += 1
    return Unknown()


# ---------------------------------------------------------------------------
# The conversions the theory deliberately lacks

def non_equation_witnesses() -> list[tuple[Derivation, Derivation]]:
    """Three same-sequent pairs that are not convertible.

    Tensor introduction does not commute with tensor elimination, and two
    independent tensor eliminations do not commute; normalization must keep
    each pair apart.
    """
    a, b, c, d = Atom("a"), Atom("b"), Atom("c"), Atom("d")
    ab = Tensor(a, b)
    cd = Tensor(c, d)
    pair_ab = ITensor(Ax(a), Ax(b))
    pair_cd = ITensor(Ax(c), Ax(d))

    # introduction on the left of an elimination vs. elimination outside
    w1 = (
        ITensor(ETensor(0, Ax(ab), pair_ab), Ax(c)),
        ETensor(0, Ax(ab), ITensor(pair_ab, Ax(c))),
    )
    # introduction on the right of an elimination vs. elimination outside
    w2 = (
        ITensor(Ax(c), ETensor(0, Ax(ab), pair_ab)),
        ETensor(1, Ax(ab), ITensor(Ax(c), pair_ab)),
    )
    # two independent eliminations, swapped
    t = ITensor(pair_ab, pair_cd)
    w3 = (
        ETensor(0, Ax(ab), ETensor(2, Ax(cd), t)),
        ETensor(1, Ax(cd), ETensor(0, Ax(ab), t)),
    )
    return [w1, w2, w3]
