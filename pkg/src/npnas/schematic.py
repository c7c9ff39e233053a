"""Schematic terms, equality/freshness constraints and problems.

A problem is a typing environment for its variables together with an
ordered sequence of constraints.  Variables range over alpha-trees, and a
valuation assigns one to each variable; instantiation of an abstraction
whose binder variable maps to a name is possibly capturing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import (
    IllegalBinderSubstitution,
    IllFormedProblem,
    MissingVariable,
    NonNameBinder,
    TypeMismatch,
    UnboundVariable,
)
from .kernel import (
    ABound,
    AbsT,
    AlphaTree,
    AApp,
    ATuple,
    AUnit,
    DataSortT,
    GAbs,
    GApp,
    GTuple,
    GUNIT,
    GroundTree,
    Name,
    NameSortT,
    Signature,
    TupleT,
    Type,
    UNIT_T,
    UnitT,
    atree_fresh,
    canonicalize,
    realize,
)

# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class SUnit:
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class STuple:
    items: tuple["Term", ...]

    def __str__(self):
        return "(tuple " + " ".join(str(t) for t in self.items) + ")"


@dataclass(frozen=True)
class SApp:
    con: str
    arg: "Term"

    def __str__(self):
        return f"(con {self.con} {self.arg})"


@dataclass(frozen=True)
class SAbs:
    """Abstraction; the binder position only ever holds a variable."""
    binder: str
    body: "Term"

    def __str__(self):
        return f"(abs {self.binder} {self.body})"


Term = Union[Var, SUnit, STuple, SApp, SAbs]

SUNIT = SUnit()


_IDENTITY_MEMOS: list = []


def memo_by_identity(fn):
    """Memoize a one-argument function on immutable values by object
    identity; the table pins its keys so ids stay valid.  Tables grow with
    the objects seen, so long-running searches reset them via
    clear_identity_memos."""
    table: dict[int, tuple] = {}

    def wrapped(t):
        # Pinning t keeps its id unique among live objects, so a key hit
        # can only come from t itself.
        hit = table.get(id(t))
        if hit is not None:
            return hit[1]
        v = fn(t)
        table[id(t)] = (t, v)
        return v

    wrapped.__name__ = fn.__name__
    wrapped.clear = table.clear
    wrapped.table = table
    _IDENTITY_MEMOS.append(table)
    return wrapped


def clear_identity_memos() -> None:
    for table in _IDENTITY_MEMOS:
        table.clear()


@memo_by_identity
def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, SUnit):
        return frozenset()
    if isinstance(t, STuple):
        out: frozenset[str] = frozenset()
        for item in t.items:
            out |= term_vars(item)
        return out
    if isinstance(t, SApp):
        return term_vars(t.arg)
    return term_vars(t.body) | {t.binder}


def abs_prefix(t: Term) -> tuple[tuple[str, ...], Term]:
    """Split off the maximal abstraction prefix: ⟨x1..xk⟩core."""
    prefix: list[str] = []
    while isinstance(t, SAbs):
        prefix.append(t.binder)
        t = t.body
    return tuple(prefix), t


def wrap_abs(binders: tuple[str, ...], core: Term) -> Term:
    for x in reversed(binders):
        core = SAbs(x, core)
    return core


# ---------------------------------------------------------------------------
# Constraints and problems

@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"(eq {self.lhs} {self.rhs})"


@dataclass(frozen=True)
class Fresh:
    """The value of var (a name) must not occur free in the target's value."""
    var: str
    target: Term

    def __str__(self):
        return f"(fresh {self.var} {self.target})"


Constraint = Union[Eq, Fresh]


@memo_by_identity
def constraint_vars(c: Constraint) -> frozenset[str]:
    if isinstance(c, Eq):
        return term_vars(c.lhs) | term_vars(c.rhs)
    return term_vars(c.target) | {c.var}


Env = Mapping[str, Type]


@dataclass(frozen=True)
class Problem:
    env: Mapping[str, Type]
    constraints: tuple[Constraint, ...]

    def __str__(self):
        return "; ".join(str(c) for c in self.constraints) or "(empty)"


def problem_vars(p: Problem) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for c in p.constraints:
        out |= constraint_vars(c)
    return out


# ---------------------------------------------------------------------------
# Typechecking

def infer_type(sig: Signature, env: Env, t: Term) -> Type:
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariable(f"variable {t.name} not declared")
        return env[t.name]
    if isinstance(t, SUnit):
        return UNIT_T
    if isinstance(t, STuple):
        return TupleT(tuple(infer_type(sig, env, item) for item in t.items))
    if isinstance(t, SApp):
        if t.con not in sig.constructors:
            raise TypeMismatch(f"unknown constructor {t.con}")
        arg_ty, res = sig.constructors[t.con]
        got = infer_type(sig, env, t.arg)
        if got != arg_ty:
            raise TypeMismatch(f"{t.con} expects {arg_ty}, got {got}")
        return DataSortT(res)
    binder_ty = env.get(t.binder)
    if binder_ty is None:
        raise UnboundVariable(f"binder variable {t.binder} not declared")
    if not isinstance(binder_ty, NameSortT):
        raise NonNameBinder(f"binder variable {t.binder} has type {binder_ty}")
    return AbsT(binder_ty.sort, infer_type(sig, env, t.body))


def check_constraint(sig: Signature, env: Env, c: Constraint) -> None:
    if isinstance(c, Eq):
        lt = infer_type(sig, env, c.lhs)
        rt = infer_type(sig, env, c.rhs)
        if lt != rt:
            raise TypeMismatch(f"equation sides have types {lt} and {rt}")
    else:
        vt = env.get(c.var)
        if vt is None:
            raise UnboundVariable(f"variable {c.var} not declared")
        if not isinstance(vt, NameSortT):
            raise TypeMismatch(f"freshness subject {c.var} has non-name type {vt}")
        infer_type(sig, env, c.target)


def check_problem(sig: Signature, p: Problem) -> None:
    for x, ty in p.env.items():
        if isinstance(ty, NameSortT) and ty.sort not in sig.name_sorts:
            raise IllFormedProblem(f"{x} uses undeclared name sort {ty.sort}")
    try:
        for c in p.constraints:
            check_constraint(sig, p.env, c)
    except (TypeMismatch, UnboundVariable, NonNameBinder) as exc:
        raise IllFormedProblem(str(exc)) from exc


# ---------------------------------------------------------------------------
# Substitution (capturing)

def subst_term(t: Term, x: str, r: Term) -> Term:
    """Replace every occurrence of x in t by r, without renaming binders.

    Binder positions only accept variables, so substituting a compound term
    for a variable that occurs as a binder is rejected.
    """
    if isinstance(t, Var):
        return r if t.name == x else t
    if isinstance(t, SUnit):
        return t
    if isinstance(t, STuple):
        return STuple(tuple(subst_term(item, x, r) for item in t.items))
    if isinstance(t, SApp):
        return SApp(t.con, subst_term(t.arg, x, r))
    binder = t.binder
    if binder == x:
        if not isinstance(r, Var):
            raise IllegalBinderSubstitution(
                f"cannot place {r} in the binder position held by {x}")
        binder = r.name
    return SAbs(binder, subst_term(t.body, x, r))


def subst_constraint(c: Constraint, x: str, r: Term) -> Constraint:
    if isinstance(c, Eq):
        return Eq(subst_term(c.lhs, x, r), subst_term(c.rhs, x, r))
    var = c.var
    if var == x:
        if not isinstance(r, Var):
            raise IllegalBinderSubstitution(
                f"cannot place {r} in the name position held by {x}")
        var = r.name
    return Fresh(var, subst_term(c.target, x, r))


# ---------------------------------------------------------------------------
# Instantiation and satisfaction

Valuation = Mapping[str, AlphaTree]


def _ground(V: Valuation, t: Term) -> GroundTree:
    if isinstance(t, Var):
        if t.name not in V:
            raise MissingVariable(f"valuation lacks {t.name}")
        return realize(V[t.name])
    if isinstance(t, SUnit):
        return GUNIT
    if isinstance(t, STuple):
        return GTuple(tuple(_ground(V, item) for item in t.items))
    if isinstance(t, SApp):
        return GApp(t.con, _ground(V, t.arg))
    if t.binder not in V:
        raise MissingVariable(f"valuation lacks {t.binder}")
    binder = V[t.binder].name()  # raises TypeMismatch on non-name values
    return GAbs(binder, _ground(V, t.body))


def instantiate(V: Valuation, t: Term) -> AlphaTree:
    """The alpha-tree denoted by t under V (capture is intended: the binder
    of an abstraction is whatever name V assigns the binder variable)."""
    return canonicalize(_ground(V, t))


def satisfies(V: Valuation, c: Constraint) -> bool:
    if isinstance(c, Eq):
        return instantiate(V, c.lhs) == instantiate(V, c.rhs)
    if c.var not in V:
        raise MissingVariable(f"valuation lacks {c.var}")
    return atree_fresh(V[c.var].name(), instantiate(V, c.target))


def satisfies_all(V: Valuation, p: Problem) -> bool:
    return all(satisfies(V, c) for c in p.constraints)


# ---------------------------------------------------------------------------
# Sizes

def tree_size(g: GroundTree) -> int:
    if isinstance(g, (Name, type(GUNIT))):
        return 1
    if isinstance(g, GTuple):
        return 1 + sum(tree_size(item) for item in g.items)
    if isinstance(g, GApp):
        return 1 + tree_size(g.arg)
    return 2 + tree_size(g.body)


def atree_size(a: AlphaTree) -> int:
    def go(node) -> int:
        if isinstance(node, (Name, ABound, AUnit)):
            return 1
        if isinstance(node, ATuple):
            return 1 + sum(go(item) for item in node.items)
        if isinstance(node, AApp):
            return 1 + go(node.arg)
        return 2 + go(node.body)

    return go(a.node)


def term_size(env: Env, W: Valuation, t: Term) -> int:
    """Term size relative to a valuation: variables of name sort count 1,
    any other variable counts the size of its value under W."""
    if isinstance(t, Var):
        ty = env.get(t.name)
        if isinstance(ty, NameSortT):
            return 1
        if t.name not in W:
            raise MissingVariable(f"valuation lacks {t.name}")
        return atree_size(W[t.name])
    if isinstance(t, SUnit):
        return 1
    if isinstance(t, STuple):
        return 1 + sum(term_size(env, W, item) for item in t.items)
    if isinstance(t, SApp):
        return 1 + term_size(env, W, t.arg)
    return 2 + term_size(env, W, t.body)


def constraint_size(env: Env, W: Valuation, c: Constraint) -> int:
    if isinstance(c, Eq):
        return term_size(env, W, c.lhs) + term_size(env, W, c.rhs)
    return term_size(env, W, c.target)
