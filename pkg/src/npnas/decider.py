"""The satisfiability decision procedure.

A problem is first collapsed to first-order unification; failure there is
already unsatisfiability.  Success guarantees the rewrite relation is
strongly normalising, so exhaustive search over successor sets terminates:
the problem is satisfiable iff some reachable terminal problem consists of
solved constraints only, and a solved problem yields a concrete witness.
"""
from __future__ import annotations

import gc
import re
from dataclasses import dataclass

from .errors import BudgetExhausted, NotSolved
from .foreduce import fo_sat
from .kernel import AlphaTree, Name, NameSortT, Signature, canonicalize, inhabitant
from .rewrite import (
    SOLVED_ABS_PAIR,
    SOLVED_ABS_SAME,
    SOLVED_ASSIGN,
    SOLVED_FORMS,
    expand,
    has_clash,
    statuses,
)
from .schematic import (
    Eq,
    clear_identity_memos,
    memo_by_identity,
    Problem,
    Valuation,
    Var,
    check_problem,
    instantiate,
    satisfies_all,
)
from .foreduce import occurrences


@dataclass(frozen=True)
class SolveOptions:
    strategy: str = "focused"     # "focused" or "full"
    budget: int | None = None     # max problems expanded
    memoize: bool = True


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    reason: str | None = None     # "fo-reduction" | "exhausted-normal-forms"
    witness: Valuation | None = None
    nodes: int = 0                # problems whose successors were computed
    normal_forms: int = 0         # terminal problems encountered
    solved: Problem | None = None


_FRESH = re.compile(r"_v\d+")


@memo_by_identity
def _cstr(c) -> tuple[str, bool]:
    s = str(c)
    return s, "_v" in s


def _canonical_key(p: Problem) -> str:
    """Key problems modulo constraint order and fresh-variable numbering so
    that converging branches are explored once.

    Within one solve run the constraints pin down every type that matters
    (variables introduced by narrowing appear in their pattern equation),
    so the environment needs no separate fingerprint.
    """
    table = _cstr.table
    strs = []
    fresh = False
    for c in p.constraints:
        hit = table.get(id(c))
        s, f = hit[1] if hit is not None else _cstr(c)
        strs.append(s)
        fresh |= f
    strs.sort()
    if not fresh:
        return tuple(strs)
    blob = "\n".join(strs)
    rename: dict[str, str] = {}

    def sub(m: re.Match) -> str:
        v = m.group(0)
        if v not in rename:
            rename[v] = f"_c{len(rename)}"
        return rename[v]

    return _FRESH.sub(sub, blob)


def decide(sig: Signature, p: Problem,
           options: SolveOptions = SolveOptions()) -> SolveResult:
    check_problem(sig, p)
    if not fo_sat(sig, p):
        return SolveResult(sat=False, reason="fo-reduction")

    clear_identity_memos()
    seen: set = set()
    stack = [p]
    # The search allocates many small immutable objects and never builds
    # reference cycles; collector passes over the live set dominate the
    # runtime on large searches.
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        return _search(sig, p, options, seen, stack)
    finally:
        if gc_was_enabled:
            gc.enable()


def _search(sig: Signature, p: Problem, options: SolveOptions,
            seen: set, stack: list) -> SolveResult:
    nodes = 0
    dead_ends = 0
    while stack:
        q = stack.pop()
        if has_clash(q):
            # A clash constraint never goes away, so no descendant of q is
            # solved; count each encounter with such a branch as a dead end.
            dead_ends += 1
            continue
        if options.memoize:
            k = _canonical_key(q)
            if k in seen:
                continue
            seen.add(k)
        st = statuses(sig, q)
        idx = [i for i, s in enumerate(st) if s is None]
        if not idx:
            V = extract_witness(sig, q)
            V = {x: V[x] for x in p.env}
            assert satisfies_all(V, p)
            return SolveResult(sat=True, witness=V, nodes=nodes,
                               normal_forms=dead_ends + 1, solved=q)
        nodes += 1
        if options.budget is not None and nodes > options.budget:
            raise BudgetExhausted(f"expanded more than {options.budget} problems")
        if options.strategy == "focused":
            kids = expand(sig, q, idx[0], verify=False)
        else:
            kids = tuple(r for i in idx
                         for r in expand(sig, q, i, verify=False))
        stack.extend(reversed(kids))
    return SolveResult(sat=False, reason="exhausted-normal-forms",
                       nodes=nodes, normal_forms=dead_ends)


# ---------------------------------------------------------------------------
# Witness extraction from a solved problem

def extract_witness(sig: Signature, p: Problem) -> Valuation:
    """A valuation over dom(env) satisfying a solved problem.

    Plan: variables isolated on one side of an equation are computed last
    from the other side; every remaining name variable gets its own name
    from a small pool; variables equated under binder prefixes share a
    value whose free names lie above the pool, which also settles every
    freshness constraint.
    """
    labels = statuses(sig, p)
    if not all(s in SOLVED_FORMS for s in labels):
        raise NotSolved(f"not a solved problem: {p}")
    env = p.env
    occ = occurrences(p)

    # Isolated equation sides, to be back-filled at the end.
    eliminated: list[tuple[str, object]] = []
    elim_set: set[str] = set()
    for c, s in zip(p.constraints, labels):
        if s != SOLVED_ASSIGN:
            continue
        assert isinstance(c, Eq)
        if isinstance(c.lhs, Var) and occ[c.lhs.name] == 1:
            eliminated.append((c.lhs.name, c.rhs))
            elim_set.add(c.lhs.name)
        else:
            assert isinstance(c.rhs, Var) and occ[c.rhs.name] == 1
            eliminated.append((c.rhs.name, c.lhs))
            elim_set.add(c.rhs.name)

    # Group the body variables of prefixed variable-variable equations.
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, s in zip(p.constraints, labels):
        if s in (SOLVED_ABS_PAIR, SOLVED_ABS_SAME):
            assert isinstance(c, Eq)
            t = c.lhs
            while not isinstance(t, Var):
                t = t.body
            u = c.rhs
            while not isinstance(u, Var):
                u = u.body
            parent[find(t.name)] = find(u.name)

    V: dict[str, AlphaTree] = {}
    pool: dict[str, int] = {}
    start = len(env)  # free names of shared values stay above the pool
    class_value: dict[str, AlphaTree] = {}
    for x in sorted(env):
        if x in elim_set:
            continue
        ty = env[x]
        if isinstance(ty, NameSortT):
            i = pool.get(ty.sort, 0)
            pool[ty.sort] = i + 1
            V[x] = AlphaTree(Name(ty.sort, i))
        else:
            root = find(x)
            if root not in class_value:
                class_value[root] = canonicalize(inhabitant(sig, ty, start))
            V[x] = class_value[root]

    for x, t in eliminated:
        V[x] = instantiate(V, t)

    if not satisfies_all(V, p):
        raise NotSolved("extracted valuation fails the solved problem")
    return V
