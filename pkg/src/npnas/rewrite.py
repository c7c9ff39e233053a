"""The constraint transformation rules.

A constraint is either in normal form (one of four solved shapes or four
clash shapes) or exactly one rule applies to it, possibly with several
branches.  `expand` computes the branch problems for one constraint;
`successors` assembles a successor set for a whole problem under the
focused (first reducible constraint) or full (every reducible constraint)
strategy.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidSelection, NarrowOnVariable
from .kernel import AbsT, NameSortT, Signature, TupleT, Type, UnitT
from .schematic import (
    Constraint,
    Env,
    Eq,
    Fresh,
    Problem,
    SAbs,
    SApp,
    STuple,
    SUNIT,
    SUnit,
    Term,
    Var,
    abs_prefix,
    constraint_vars,
    subst_constraint,
    term_vars,
    wrap_abs,
)

# Normal-form labels.
SOLVED_FRESH = "solved-fresh"            # fresh(x, y), never reducible
SOLVED_ASSIGN = "solved-assign"          # eq(x, t), x isolated
SOLVED_ABS_PAIR = "solved-abs-pair"      # eq(<xs>x, <ys>y), distinct bodies
SOLVED_ABS_SAME = "solved-abs-same"      # eq(<xs>x, <ys>x)
CLASH_SELF_FRESH = "clash-self-fresh"    # fresh(x, x)
CLASH_CON = "clash-con"                  # distinct constructors
CLASH_OCCURS = "clash-occurs"            # eq(x, t), x inside t
CLASH_ABS_OCCURS = "clash-abs-occurs"    # occurs failure under binders

SOLVED_FORMS = frozenset(
    {SOLVED_FRESH, SOLVED_ASSIGN, SOLVED_ABS_PAIR, SOLVED_ABS_SAME})
CLASH_FORMS = frozenset(
    {CLASH_SELF_FRESH, CLASH_CON, CLASH_OCCURS, CLASH_ABS_OCCURS})


def _rest_vars(rest: tuple[Constraint, ...]) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for c in rest:
        out |= constraint_vars(c)
    return out


from .schematic import memo_by_identity


@memo_by_identity
def _split_eq(c: Eq):
    """Cut both abstraction prefixes at the shorter length; the surplus
    binders of the longer side fold back into its body."""
    xs, cl = abs_prefix(c.lhs)
    ys, cr = abs_prefix(c.rhs)
    k = min(len(xs), len(ys))
    bl = wrap_abs(xs[k:], cl)
    br = wrap_abs(ys[k:], cr)
    return xs[:k], bl, ys[:k], br


@memo_by_identity
def is_clash(c: Constraint) -> bool:
    """Whether c is one of the four clash shapes.  Clashes do not depend on
    the environment or the other constraints, so this is a cheap pre-check:
    a problem containing a clash constraint can never reach a solved form."""
    if isinstance(c, Fresh):
        ys, core = abs_prefix(c.target)
        return not ys and isinstance(core, Var) and core.name == c.var
    xs, bl, ys, br = _split_eq(c)
    if isinstance(bl, Var) != isinstance(br, Var):
        x = bl if isinstance(bl, Var) else br
        t = br if isinstance(bl, Var) else bl
        return x.name in term_vars(t)
    return isinstance(bl, SApp) and isinstance(br, SApp) and bl.con != br.con


def has_clash(p: Problem) -> bool:
    # Called once per search state; read the memo table directly so repeat
    # constraints cost a dictionary probe rather than a function call.
    table = is_clash.table
    for c in p.constraints:
        hit = table.get(id(c))
        if is_clash(c) if hit is None else hit[1]:
            return True
    return False


def _classify(sig: Signature, env: Env, c: Constraint, in_rest) -> str | None:
    """Normal-form label of c, or None when some rule still applies to it;
    in_rest tells whether a variable occurs in the other constraints."""
    if isinstance(c, Fresh):
        ys, core = abs_prefix(c.target)
        if not isinstance(core, Var) or ys:
            return None
        if core.name == c.var:
            return CLASH_SELF_FRESH
        ty = env[core.name]
        if isinstance(ty, NameSortT) and ty != env[c.var]:
            return None  # different name sorts: the constraint is vacuous
        return SOLVED_FRESH

    xs, bl, ys, br = _split_eq(c)
    k = len(xs)
    if isinstance(bl, Var) and isinstance(br, Var):
        if k == 0:
            if bl == br:
                return None  # trivial equation, dropped by a rule
            if in_rest(bl.name) and in_rest(br.name):
                return None  # substitution applies
            return SOLVED_ASSIGN
        if isinstance(env[bl.name], NameSortT):
            return None  # binder-comparison branching applies
        return SOLVED_ABS_SAME if bl == br else SOLVED_ABS_PAIR
    if isinstance(bl, Var) or isinstance(br, Var):
        x = bl if isinstance(bl, Var) else br
        t = br if isinstance(bl, Var) else bl
        if x.name in term_vars(t):
            return CLASH_ABS_OCCURS if k > 0 else CLASH_OCCURS
        if k > 0:
            return None  # narrowing applies
        if in_rest(x.name):
            return None  # substitution applies
        return SOLVED_ASSIGN
    if isinstance(bl, SApp) and isinstance(br, SApp) and bl.con != br.con:
        return CLASH_CON
    return None


def classify(sig: Signature, env: Env, c: Constraint,
             rest: tuple[Constraint, ...] = ()) -> str | None:
    """Normal-form label of c relative to the other constraints, or None
    when some rule still applies to it."""
    used = _rest_vars(rest)
    return _classify(sig, env, c, used.__contains__)


from functools import cache


@cache
def _v(name: str) -> Var:
    return Var(name)


@cache
def _f(x: str, y: str) -> Fresh:
    return Fresh(x, _v(y))


@cache
def _e(x: str, y: str) -> Eq:
    return Eq(_v(x), _v(y))


def fresh_vars(taken: frozenset[str], count: int) -> tuple[str, ...]:
    """Deterministic fresh variable names: the lowest-numbered _vK names
    not already taken."""
    out: list[str] = []
    k = 0
    while len(out) < count:
        cand = f"_v{k}"
        if cand not in taken:
            out.append(cand)
        k += 1
    return tuple(out)


def narrow(sig: Signature, ty: Type, shape: Term,
           taken: frozenset[str]) -> tuple[dict[str, Type], Term]:
    """A one-layer pattern of type ty matching the head shape of `shape`,
    with fresh variables underneath."""
    if isinstance(shape, Var):
        raise NarrowOnVariable("narrowing against a bare variable")
    if isinstance(shape, SUnit):
        return {}, SUNIT
    if isinstance(shape, SApp):
        (v,) = fresh_vars(taken, 1)
        return {v: sig.arg_type(shape.con)}, SApp(shape.con, Var(v))
    if isinstance(shape, STuple):
        assert isinstance(ty, TupleT)
        vs = fresh_vars(taken, len(shape.items))
        return dict(zip(vs, ty.items)), STuple(tuple(Var(v) for v in vs))
    assert isinstance(ty, AbsT)
    binder, body = fresh_vars(taken, 2)
    return {binder: NameSortT(ty.binder), body: ty.body}, SAbs(binder, Var(body))


def _replace(p: Problem, i: int, new: list[Constraint],
             env: Env | None = None) -> Problem:
    cs = p.constraints[:i] + tuple(new) + p.constraints[i + 1:]
    return Problem(env if env is not None else p.env, cs)


def _subst1(c: Constraint, x: str, t: Term) -> Constraint:
    # Untouched constraints keep their identity (and cached attributes);
    # probe the variable-set memo directly on the hot path.
    hit = constraint_vars.table.get(id(c))
    vs = constraint_vars(c) if hit is None else hit[1]
    return subst_constraint(c, x, t) if x in vs else c


def _subst_rest(p: Problem, i: int, keep: list[Constraint],
                x: str, t: Term, env: Env | None = None) -> Problem:
    before = tuple(_subst1(c, x, t) for c in p.constraints[:i])
    after = tuple(_subst1(c, x, t) for c in p.constraints[i + 1:])
    return Problem(env if env is not None else p.env,
                   before + tuple(keep) + after)


def _expand_fresh(sig: Signature, p: Problem, i: int,
                  c: Fresh) -> tuple[Problem, ...]:
    env = p.env
    ys, core = abs_prefix(c.target)
    x = c.var
    if isinstance(core, SUnit):
        return (_replace(p, i, []),)
    if isinstance(core, SApp):
        return (_replace(p, i, [Fresh(x, wrap_abs(ys, core.arg))]),)
    if isinstance(core, STuple):
        return (_replace(
            p, i, [Fresh(x, wrap_abs(ys, item)) for item in core.items]),)
    assert isinstance(core, Var)
    if not ys:
        # Distinct name sorts: the freshness holds vacuously.
        assert env[core.name] != env[x]
        return (_replace(p, i, []),)
    # Branch on which binder (if any) the name x coincides with.
    branches: list[Problem] = []
    for j, yj in enumerate(ys):
        if env[yj] != env[x]:
            continue
        new: list[Constraint] = [_f(x, y) for y in ys[:j]]
        new.append(_e(x, yj))
        branches.append(_replace(p, i, new))
    final: list[Constraint] = [_f(x, y) for y in ys]
    final.append(Fresh(x, core))
    branches.append(_replace(p, i, final))
    return tuple(branches)


def _expand_eq(sig: Signature, p: Problem, i: int, c: Eq) -> tuple[Problem, ...]:
    env = p.env
    rest = p.constraints[:i] + p.constraints[i + 1:]
    xs, bl, ys, br = _split_eq(c)
    k = len(xs)

    if isinstance(bl, Var) and isinstance(br, Var):
        if k == 0:
            if bl == br:
                return (_replace(p, i, []),)
            # Either variable may be eliminated; enumerate both orientations.
            return (_subst_rest(p, i, [c], bl.name, br),
                    _subst_rest(p, i, [c], br.name, bl))
        xv, yv = bl.name, br.name
        assert isinstance(env[xv], NameSortT)
        # Branch on the innermost binder equal to the body name, if any.
        branches: list[Problem] = []
        for j in range(k - 1, -1, -1):
            if env[xs[j]] != env[xv]:
                continue
            new: list[Constraint] = [_f(xv, xs[m])
                                     for m in range(k - 1, j, -1)]
            new.append(_e(xv, xs[j]))
            new.extend(_f(yv, ys[m]) for m in range(k - 1, j, -1))
            new.append(_e(yv, ys[j]))
            branches.append(_replace(p, i, new))
        final: list[Constraint] = [_f(xv, xs[m])
                                   for m in range(k - 1, -1, -1)]
        final.extend(_f(yv, ys[m]) for m in range(k - 1, -1, -1))
        final.append(_e(xv, yv))
        branches.append(_replace(p, i, final))
        return tuple(branches)

    if isinstance(bl, Var) or isinstance(br, Var):
        x = bl if isinstance(bl, Var) else br
        t = br if isinstance(bl, Var) else bl
        if k == 0:
            return (_subst_rest(p, i, [c], x.name, t),)
        # Narrow x to the head shape of t, then revisit the equation.
        taken = frozenset(env) | constraint_vars(c) | _rest_vars(rest)
        delta, pattern = narrow(sig, env[x.name], t, taken)
        new_env = dict(env)
        new_env.update(delta)
        keep = [Eq(Var(x.name), pattern),
                subst_constraint(c, x.name, pattern)]
        return (_subst_rest(p, i, keep, x.name, pattern, env=new_env),)

    if isinstance(bl, SUnit):
        assert isinstance(br, SUnit)
        return (_replace(p, i, []),)
    if isinstance(bl, SApp):
        assert isinstance(br, SApp) and bl.con == br.con
        return (_replace(
            p, i, [Eq(wrap_abs(xs, bl.arg), wrap_abs(ys, br.arg))]),)
    assert isinstance(bl, STuple) and isinstance(br, STuple)
    assert len(bl.items) == len(br.items)
    return (_replace(p, i, [Eq(wrap_abs(xs, a), wrap_abs(ys, b))
                            for a, b in zip(bl.items, br.items)]),)


def expand(sig: Signature, p: Problem, i: int,
           verify: bool = True) -> tuple[Problem, ...]:
    """Branch problems obtained by applying the one applicable rule to
    constraint i.  Raises InvalidSelection if that constraint is normal."""
    c = p.constraints[i]
    if verify:
        rest = p.constraints[:i] + p.constraints[i + 1:]
        if classify(sig, p.env, c, rest) is not None:
            raise InvalidSelection(f"constraint {i} is in normal form: {c}")
    if isinstance(c, Fresh):
        return _expand_fresh(sig, p, i, c)
    return _expand_eq(sig, p, i, c)


def statuses(sig: Signature, p: Problem) -> tuple[str | None, ...]:
    """Normal-form labels of all constraints, computed in one pass.

    _classify only asks about variables of the constraint under scrutiny,
    so "occurs in the rest" is "occurs in at least two constraints".
    """
    presence: dict[str, int] = {}
    for c in p.constraints:
        for x in constraint_vars(c):
            presence[x] = presence.get(x, 0) + 1
    multi = frozenset(x for x, n in presence.items() if n >= 2)
    return tuple(_classify(sig, p.env, c, multi.__contains__)
                 for c in p.constraints)


def reducible_indices(sig: Signature, p: Problem) -> tuple[int, ...]:
    return tuple(i for i, s in enumerate(statuses(sig, p)) if s is None)


def successors(sig: Signature, p: Problem,
               strategy: str = "focused") -> tuple[Problem, ...]:
    """Successor set of p: empty iff p is terminal.

    focused: branches of the first reducible constraint only (complete,
    since every rule's branch set preserves satisfiability).
    full: branches of every reducible constraint.
    """
    idx = reducible_indices(sig, p)
    if not idx:
        return ()
    if strategy == "focused":
        return expand(sig, p, idx[0], verify=False)
    out: list[Problem] = []
    for i in idx:
        out.extend(expand(sig, p, i, verify=False))
    return tuple(out)


def is_terminal(sig: Signature, p: Problem) -> bool:
    return all(s is not None for s in statuses(sig, p))


def is_solved(sig: Signature, p: Problem) -> bool:
    return all(s in SOLVED_FORMS for s in statuses(sig, p))
