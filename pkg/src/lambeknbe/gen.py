"""Seeded random generation of well-typed derivations, normal forms, and traces.

The PRNG is splitmix64, fixed so that logs are reproducible across runs and
platforms.  Derivations are generated goal-first: propose a sequent (randomly,
filtered by atom balance, or read off a scaffold normal form), then search for
a derivation of it top-down with backtracking, weighting introductions over
eliminations 60/40.  Normal forms are built bottom-up, choosing contexts
freely, which keeps every grammar side condition satisfiable by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import dill as dl
from . import mill as ml
from . import nf as nfm
from .rewrite import RewriteStep, applicable_steps, apply_step
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
    Over,
    Sequent,
    Tensor,
    Under,
    Unit,
    term_size,
    typecheck,
)

_MASK = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 generator; the sequence is part of the artifact contract."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next_u64() % n

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def chance(self, percent: int) -> bool:
        return self.below(100) < percent


@dataclass(frozen=True)
class GenConfig:
    seed: int
    max_nodes: int = 30
    atoms: tuple[str, ...] = ("p", "q", "r")
    calculus: str = "lambek"  # lambek | mill | dill
    eta_cap: int = 40

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if not self.atoms:
            raise ValueError("atom alphabet must be nonempty")
        if self.calculus not in ("lambek", "mill", "dill"):
            raise ValueError(f"unknown calculus {self.calculus!r}")


class GenerationExhausted(Exception):
    pass


# ---------------------------------------------------------------------------
# Random formulas and goal proposals

def _rand_formula(rng: SplitMix64, atoms, depth: int) -> Formula:
    if depth <= 0 or rng.chance(55):
        if rng.chance(12):
            return Unit()
        return Atom(rng.choice(atoms))
    match rng.below(3):
        case 0:
            return Tensor(_rand_formula(rng, atoms, depth - 1), _rand_formula(rng, atoms, depth - 1))
        case 1:
            return Over(_rand_formula(rng, atoms, depth - 1), _rand_formula(rng, atoms, depth - 1))
        case _:
            return Under(_rand_formula(rng, atoms, depth - 1), _rand_formula(rng, atoms, depth - 1))


def _atom_balance(seq: Sequent) -> bool:
    """Necessary provability condition: signed atom occurrences cancel."""
    counts: dict[str, int] = {}

    def walk(f: Formula, sign: int):
        match f:
            case Atom(name):
                counts[name] = counts.get(name, 0) + sign
            case Unit():
                pass
            case Tensor(l, r):
                walk(l, sign)
                walk(r, sign)
            case Over(result, arg):
                walk(result, sign)
                walk(arg, -sign)
            case Under(arg, result):
                walk(arg, -sign)
                walk(result, sign)

    for f in seq.antecedent:
        walk(f, -1)
    walk(seq.succedent, 1)
    return all(v == 0 for v in counts.values())


def _propose_goal(rng: SplitMix64, atoms, size_hint: int) -> Sequent:
    if rng.chance(50):
        # read a derivable sequent off a scaffold normal form
        scaffold = _gen_nf(rng, max(2, size_hint), atoms)
        return nfm.typecheck_nf(scaffold)
    for _ in range(64):
        n = rng.below(4)
        ante = tuple(_rand_formula(rng, atoms, 2) for _ in range(n))
        succ = _rand_formula(rng, atoms, 2)
        seq = Sequent(ante, succ)
        if _atom_balance(seq):
            return seq
    return Sequent((Atom(atoms[0]),), Atom(atoms[0]))


# ---------------------------------------------------------------------------
# Goal-directed derivation search

def _subformulas(f: Formula, out: list):
    out.append(f)
    match f:
        case Tensor(l, r):
            _subformulas(l, out)
            _subformulas(r, out)
        case Over(a, b) | Under(a, b):
            _subformulas(a, out)
            _subformulas(b, out)


def _cut_pool(goal: Sequent, atoms) -> list[Formula]:
    pool: list[Formula] = []
    for f in goal.antecedent:
        _subformulas(f, pool)
    _subformulas(goal.succedent, pool)
    pool.extend(Atom(a) for a in atoms)
    seen, out = set(), []
    for f in pool:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def _search(goal: Sequent, budget: int, rng: SplitMix64, fuel: list[int], atoms, pool=None) -> Derivation | None:
    if budget < max(1, len(goal.antecedent)):
        return None
    fuel[0] -= 1
    if fuel[0] < 0:
        return None
    if not _atom_balance(goal):
        return None
    g, a = goal.antecedent, goal.succedent

    # closing rules dominate once the budget runs out; with budget to spare,
    # prefer building structure (introductions over eliminations 60/40)
    closing_w = 95 if budget <= 2 else max(6, 60 - 3 * budget)
    moves: list[tuple[int, str]] = []
    if len(g) == 1 and g[0] == a:
        moves.append((closing_w, "ax"))
    if a == Unit() and not g:
        moves.append((closing_w, "iunit"))
    if budget >= 2:
        if isinstance(a, Over):
            moves.append((60, "iover"))
        if isinstance(a, Under):
            moves.append((60, "iunder"))
    if budget >= 3 and isinstance(a, Tensor):
        moves.append((60, "itensor"))
    if budget >= 3:
        moves.extend([(10, "eover"), (10, "eunder"), (10, "eunit"), (10, "etensor")])
    if not moves:
        return None

    # weighted order without replacement
    order = []
    remaining = list(moves)
    while remaining:
        total = sum(w for w, _ in remaining)
        pick = rng.below(total)
        acc = 0
        for i, (w, m) in enumerate(remaining):
            acc += w
            if pick < acc:
                order.append(m)
                remaining.pop(i)
                break

    if pool is None:
        pool = _cut_pool(goal, atoms)
    for move in order:
        d = _attempt(move, goal, budget, rng, fuel, atoms, pool)
        if d is not None:
            return d
    return None


def _attempt(move, goal, budget, rng, fuel, atoms, pool):
    g, a = goal.antecedent, goal.succedent
    if move == "ax":
        return Ax(a)
    if move == "iunit":
        return IUnit()
    if move == "iover":
        body = _search(Sequent(g + (a.arg,), a.result), budget - 1, rng, fuel, atoms, pool)
        return IOver(body) if body is not None else None
    if move == "iunder":
        body = _search(Sequent((a.arg,) + g, a.result), budget - 1, rng, fuel, atoms, pool)
        return IUnder(body) if body is not None else None
    if move == "itensor":
        for _ in range(2):
            s = rng.below(len(g) + 1)
            b1 = 1 + rng.below(max(1, budget - 2))
            left = _search(Sequent(g[:s], a.left), min(b1, budget - 2), rng, fuel, atoms, pool)
            if left is None:
                continue
            right = _search(Sequent(g[s:], a.right), budget - 1 - term_size(left), rng, fuel, atoms, pool)
            if right is not None:
                return ITensor(left, right)
        return None
    if move == "eover":
        for _ in range(2):
            s = rng.below(len(g) + 1)
            c = rng.choice(pool)
            fun = _search(Sequent(g[:s], Over(a, c)), budget - 1 - 1, rng, fuel, atoms, pool)
            if fun is None:
                continue
            arg = _search(Sequent(g[s:], c), budget - 1 - term_size(fun), rng, fuel, atoms, pool)
            if arg is not None:
                return EOver(fun, arg)
        return None
    if move == "eunder":
        for _ in range(2):
            s = rng.below(len(g) + 1)
            c = rng.choice(pool)
            arg = _search(Sequent(g[:s], c), budget - 2, rng, fuel, atoms, pool)
            if arg is None:
                continue
            fun = _search(Sequent(g[s:], Under(c, a)), budget - 1 - term_size(arg), rng, fuel, atoms, pool)
            if fun is not None:
                return EUnder(arg, fun)
        return None
    if move == "eunit":
        i = rng.below(len(g) + 1)
        j = i + rng.below(len(g) - i + 1)
        scrutinee = _search(Sequent(g[i:j], Unit()), budget - 2, rng, fuel, atoms, pool)
        if scrutinee is None:
            return None
        cont = _search(Sequent(g[:i] + g[j:], a), budget - 1 - term_size(scrutinee), rng, fuel, atoms, pool)
        return EUnit(i, scrutinee, cont) if cont is not None else None
    if move == "etensor":
        i = rng.below(len(g) + 1)
        j = i + rng.below(len(g) - i + 1)
        x, y = rng.choice(pool), rng.choice(pool)
        scrutinee = _search(Sequent(g[i:j], Tensor(x, y)), budget - 2, rng, fuel, atoms, pool)
        if scrutinee is None:
            return None
        cont = _search(
            Sequent(g[:i] + (x, y) + g[j:], a), budget - 1 - term_size(scrutinee), rng, fuel, atoms
        )
        return ETensor(i, scrutinee, cont) if cont is not None else None
    raise AssertionError(move)


def _inflate(d: Derivation, rng: SplitMix64, max_nodes: int) -> Derivation:
    """Grow a derivation with conversion steps, staying within the size bound.

    This keeps the conclusion sequent fixed while adding redexes and shuffling
    eliminations, so generated terms exercise the whole equation catalog.
    """
    from .rewrite import _replace, local_rewrites

    for _ in range(rng.below(9)):
        size = term_size(d)
        options = []
        for step, cand in local_rewrites(d, eta_cap=max_nodes):
            old = _subterm_size_at(d, step.path)
            delta = term_size(cand) - old
            if size + delta <= max_nodes:
                options.append((step, cand, delta))
        if not options:
            break
        growing = [o for o in options if o[2] > 0]
        pool = growing if growing and rng.chance(75) else options
        step, cand, _ = pool[rng.below(len(pool))]
        d = _replace(d, step.path, cand)
    return d


def _subterm_size_at(d: Derivation, path) -> int:
    from .syntax import children

    for i in path:
        d = children(d)[i]
    return term_size(d)


def _gen_lambek(cfg: GenConfig) -> Derivation:
    rng = SplitMix64(cfg.seed)
    for attempt in range(64):
        shrink = max(3, cfg.max_nodes >> (attempt // 16))
        goal = _propose_goal(rng, cfg.atoms, min(shrink, 14))
        target = 1 + rng.below(shrink)
        fuel = [1200]
        d = _search(goal, target, rng, fuel, cfg.atoms)
        if d is not None:
            return _inflate(d, rng, cfg.max_nodes)
    raise GenerationExhausted(f"no well-typed derivation found for seed {cfg.seed}")


# ---------------------------------------------------------------------------
# Bottom-up normal forms

def _gen_ne(rng: SplitMix64, target: Formula, budget: int, atoms) -> nfm.Ne:
    layers = []
    head = target
    remaining = budget - 1
    while remaining >= 2 and rng.chance(40) and len(layers) < 3:
        arg = _gen_nf(rng, 1 + rng.below(max(1, remaining // 2)), atoms)
        argf = nfm.typecheck_nf(arg).succedent
        if rng.chance(50):
            head = Over(head, argf)
            layers.append(("over", arg))
        else:
            head = Under(argf, head)
            layers.append(("under", arg))
        remaining -= nfm.nf_size(arg) + 1
    ne: nfm.Ne = nfm.NAx(head)
    for kind, arg in reversed(layers):
        ne = nfm.NEOver(ne, arg) if kind == "over" else nfm.NEUnder(arg, ne)
    return ne


def _gen_nf(rng: SplitMix64, budget: int, atoms) -> nfm.Nf:
    for _ in range(6):
        roll = rng.below(100)
        if budget < 3 or roll < 30:
            if rng.chance(15):
                return nfm.NIUnit()
            return nfm.NSw(_gen_ne(rng, Atom(rng.choice(atoms)), budget, atoms))
        if roll < 45:  # implication introduction
            body = _gen_nf(rng, budget - 1, atoms)
            if nfm.typecheck_nf(body).antecedent:
                return nfm.NIOver(body) if rng.chance(50) else nfm.NIUnder(body)
            continue
        if roll < 65:  # tensor introduction
            b1 = 1 + rng.below(max(1, budget - 2))
            left = _gen_nf(rng, min(b1, budget - 2), atoms)
            right = _gen_nf(rng, budget - 1 - nfm.nf_size(left), atoms)
            return nfm.NITensor(left, right)
        if roll < 80:  # unit elimination
            cont = _gen_nf(rng, max(1, budget // 2), atoms)
            cseq = nfm.typecheck_nf(cont)
            if isinstance(cseq.succedent, (Over, Under)):
                continue
            ne = _gen_ne(rng, Unit(), max(1, budget - nfm.nf_size(cont) - 1), atoms)
            k = rng.below(len(cseq.antecedent) + 1)
            return nfm.NEUnit(k, ne, cont)
        # tensor elimination: pick an adjacent pair of the continuation's context
        cont = _gen_nf(rng, max(1, budget // 2), atoms)
        cseq = nfm.typecheck_nf(cont)
        if len(cseq.antecedent) < 2 or isinstance(cseq.succedent, (Over, Under)):
            continue
        i = rng.below(len(cseq.antecedent) - 1)
        pair = Tensor(cseq.antecedent[i], cseq.antecedent[i + 1])
        ne = _gen_ne(rng, pair, max(1, budget - nfm.nf_size(cont) - 1), atoms)
        return nfm.NETensor(i, ne, cont)
    return nfm.NSw(nfm.NAx(Atom(rng.choice(atoms))))


def gen_nf(cfg: GenConfig) -> nfm.Nf:
    """A well-formed normal form with at most max_nodes nodes."""
    rng = SplitMix64(cfg.seed)
    for _ in range(32):
        n = _gen_nf(rng, cfg.max_nodes, cfg.atoms)
        if nfm.nf_size(n) <= cfg.max_nodes:
            nfm.typecheck_nf(n)
            return n
    return nfm.NSw(nfm.NAx(Atom(cfg.atoms[0])))


# ---------------------------------------------------------------------------
# Public entry points

def gen_derivation(cfg: GenConfig):
    """A well-typed derivation of the configured calculus, at most max_nodes."""
    if cfg.calculus == "lambek":
        return _gen_lambek(cfg)
    base = _gen_lambek(cfg)
    m = ml.from_lambek(base)
    if cfg.calculus == "mill":
        return m
    return _bangify(dl.from_mill(m), SplitMix64(cfg.seed ^ 0x9E3779B97F4A7C15))


def _bangify(t, rng: SplitMix64):
    """Promote a few linear hypotheses to banged ones through the exponential."""
    for _ in range(rng.below(3)):
        seq = dl.typecheck(t)
        if not seq.linear:
            break
        name, formula = seq.linear[rng.below(len(seq.linear))]
        supply = dl.NameSupply(dl.all_names(t), prefix="i")
        intn, linn = supply.fresh(), supply.fresh()
        replaced = dl.substitute_lin(name, dl.DAxInt(intn, formula), t)
        t = dl.DEBang(intn, dl.DAxLin(linn, dl.Bang(formula)), replaced)
    return t


def gen_trace(cfg: GenConfig, t) -> list:
    """Up to five applicable steps, sampled uniformly, applied in sequence."""
    enumerate_steps, apply_one = {
        "lambek": (applicable_steps, apply_step),
        "mill": (ml.applicable_steps, ml.apply_step),
        "dill": (dl.applicable_steps, dl.apply_step),
    }[cfg.calculus]
    rng = SplitMix64(cfg.seed)
    steps = []
    cur = t
    for _ in range(1 + rng.below(5)):
        options = enumerate_steps(cur, eta_cap=cfg.eta_cap)
        if not options:
            break
        s = options[rng.below(len(options))]
        steps.append(s)
        cur = apply_one(cur, s)
    return steps


# ---------------------------------------------------------------------------
# Named-calculus normal forms, built bottom-up.  Multiset contexts make every
# side condition satisfiable by choosing from what the subterm offers: binders
# pick hypotheses of the body by name rather than by position.

def _gen_named_ne(rng: SplitMix64, target, budget: int, atoms, bang_ok: bool, supply):
    layers = []
    head = target
    remaining = budget - 1
    while remaining >= 2 and rng.chance(40) and len(layers) < 3:
        arg = _gen_named_nf(rng, 1 + rng.below(max(1, remaining // 2)), atoms, bang_ok, supply)
        argf = dl.typecheck_nf(arg).succedent
        head = ml.Lolli(argf, head)
        layers.append(arg)
        remaining -= dl_nf_size(arg) + 1
    if bang_ok and rng.chance(20):
        ne = dl.DNAxInt(supply.fresh(), head)
    else:
        ne = dl.DNAxLin(supply.fresh(), head)
    for arg in reversed(layers):
        ne = dl.DNELolli(ne, arg)
    return ne


def dl_nf_size(n) -> int:
    match n:
        case dl.DNAxLin() | dl.DNAxInt() | dl.DNIUnit():
            return 1
        case dl.DNSw(ne):
            return 1 + dl_nf_size(ne)
        case dl.DNILolli(_, b) | dl.DNIBang(b):
            return 1 + dl_nf_size(b)
        case dl.DNELolli(x, y) | dl.DNITensor(x, y):
            return 1 + dl_nf_size(x) + dl_nf_size(y)
        case dl.DNEUnit(s, c) | dl.DNETensor(_, _, s, c) | dl.DNEBang(_, s, c):
            return 1 + dl_nf_size(s) + dl_nf_size(c)
    raise TypeError(f"not a DILL normal form: {n!r}")


def _gen_named_nf(rng: SplitMix64, budget: int, atoms, bang_ok: bool, supply):
    from .syntax import Unit as UnitF

    def leaf():
        if rng.chance(12):
            return dl.DNIUnit()
        at = Atom(rng.choice(atoms))
        if bang_ok and rng.chance(22):
            return dl.DNSw(dl.DNAxInt(supply.fresh(), at))
        return dl.DNSw(dl.DNAxLin(supply.fresh(), at))

    for _ in range(6):
        roll = rng.below(100)
        if budget < 3 or roll < 26:
            if rng.chance(35):
                at = Atom(rng.choice(atoms))
                return dl.DNSw(_gen_named_ne(rng, at, budget, atoms, bang_ok, supply))
            return leaf()
        if roll < 42:  # implication introduction binds one linear hypothesis
            body = _gen_named_nf(rng, budget - 1, atoms, bang_ok, supply)
            lin = dl.typecheck_nf(body).linear
            if not lin:
                continue
            x, _ = lin[rng.below(len(lin))]
            return dl.DNILolli(x, body)
        if roll < 58:  # tensor introduction
            left = _gen_named_nf(rng, max(1, budget // 2), atoms, bang_ok, supply)
            right = _gen_named_nf(rng, max(1, budget - 1 - dl_nf_size(left)), atoms, bang_ok, supply)
            return dl.DNITensor(left, right)
        if roll < 70:  # unit elimination
            cont = _gen_named_nf(rng, max(1, budget // 2), atoms, bang_ok, supply)
            if isinstance(dl.typecheck_nf(cont).succedent, ml.Lolli):
                continue
            ne = _gen_named_ne(rng, UnitF(), max(1, budget - dl_nf_size(cont) - 1), atoms, bang_ok, supply)
            return dl.DNEUnit(ne, cont)
        if roll < 82:  # tensor elimination binds two linear hypotheses
            cont = _gen_named_nf(rng, max(1, budget // 2), atoms, bang_ok, supply)
            seq = dl.typecheck_nf(cont)
            lin = seq.linear
            if len(lin) < 2 or isinstance(seq.succedent, ml.Lolli):
                continue
            i = rng.below(len(lin))
            j = rng.below(len(lin) - 1)
            j = j if j < i else j + 1
            (x, fx), (y, fy) = lin[i], lin[j]
            ne = _gen_named_ne(
                rng, Tensor(fx, fy), max(1, budget - dl_nf_size(cont) - 1), atoms, bang_ok, supply
            )
            return dl.DNETensor(x, y, ne, cont)
        if bang_ok and roll < 90:  # bang introduction over an empty linear zone
            body = _gen_named_nf(rng, max(1, budget // 3), atoms, bang_ok, supply)
            if dl.typecheck_nf(body).linear:
                continue
            return dl.DNIBang(body)
        if bang_ok:  # bang elimination binds an intuitionistic hypothesis
            cont = _gen_named_nf(rng, max(1, budget // 2), atoms, bang_ok, supply)
            cseq = dl.typecheck_nf(cont)
            if isinstance(cseq.succedent, ml.Lolli):
                # normalization pulls binders out of eliminations, so a bang
                # elimination concluding an implication is outside its image
                continue
            ints = cseq.intuitionistic
            if ints and rng.chance(70):
                x, fx = ints[rng.below(len(ints))]
            else:
                x, fx = supply.fresh(), Atom(rng.choice(atoms))
            ne = _gen_named_ne(
                rng, dl.Bang(fx), max(1, budget - dl_nf_size(cont) - 1), atoms, bang_ok, supply
            )
            return dl.DNEBang(x, ne, cont)
    return leaf()


def _mill_nf_of_dill(n):
    """Map a bang-free DILL normal form onto its MILL counterpart."""
    match n:
        case dl.DNSw(ne):
            return ml.MNSw(_mill_ne_of_dill(ne))
        case dl.DNILolli(x, b):
            return ml.MNILolli(x, _mill_nf_of_dill(b))
        case dl.DNIUnit():
            return ml.MNIUnit()
        case dl.DNEUnit(s, c):
            return ml.MNEUnit(_mill_ne_of_dill(s), _mill_nf_of_dill(c))
        case dl.DNITensor(l, r):
            return ml.MNITensor(_mill_nf_of_dill(l), _mill_nf_of_dill(r))
        case dl.DNETensor(x, y, s, c):
            return ml.MNETensor(x, y, _mill_ne_of_dill(s), _mill_nf_of_dill(c))
    raise TypeError(f"not a bang-free DILL normal form: {n!r}")


def _mill_ne_of_dill(n):
    match n:
        case dl.DNAxLin(x, f):
            return ml.MNAx(x, f)
        case dl.DNELolli(fun, arg):
            return ml.MNELolli(_mill_ne_of_dill(fun), _mill_nf_of_dill(arg))
    raise TypeError(f"not a bang-free DILL neutral: {n!r}")


def gen_named_nf(cfg: GenConfig):
    """A well-formed MILL or DILL normal form with at most max_nodes nodes."""
    if cfg.calculus not in ("mill", "dill"):
        raise ValueError("gen_named_nf covers the named calculi")
    bang_ok = cfg.calculus == "dill"
    rng = SplitMix64(cfg.seed)
    supply = ml.NameSupply(prefix="h")
    for _ in range(32):
        n = _gen_named_nf(rng, cfg.max_nodes, cfg.atoms, bang_ok, supply)
        if dl_nf_size(n) <= cfg.max_nodes:
            dl.typecheck_nf(n)
            return _mill_nf_of_dill(n) if cfg.calculus == "mill" else n
    fallback = dl.DNSw(dl.DNAxLin(supply.fresh(), Atom(cfg.atoms[0])))
    return _mill_nf_of_dill(fallback) if cfg.calculus == "mill" else fallback
