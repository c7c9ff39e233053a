"""Equivariant unification over names, and its reduction to constraint
problems.

A name-term is a vertex (a name constant or a name variable) under a
suspended permutation: the identity, a permutation variable, or a swap of
two name-terms.  Constraints equate name-terms or demand they differ
(freshness between names is exactly inequality).

The reduction introduces one solver variable per vertex and one per
(permutation variable, vertex) application, plus temporaries for swap
results.  Two gadget equations do the semantic work:

* swap gadget   <x><y>w = <y><x>u    forces  u = (x y)(w)
* bijection gadget  <x><y>(x,y) = <x'><y'>(x',y')  forces  x=y iff x'=y'

The bijection gadgets make each permutation variable's images follow the
equality pattern of its arguments, which is exactly what is needed for the
finite image map to extend to a permutation of all names.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Union

from .errors import PhaseTwoViolation, PoolTooLarge, UndeclaredSymbol, ValidationError
from .kernel import NameSortT, Signature, make_signature
from .schematic import Eq, Fresh, Problem, SAbs, STuple, Var

ATOM_SORT = "atom"

EU_SIGNATURE = make_signature([ATOM_SORT], [], {})


# ---------------------------------------------------------------------------
# Syntax

@dataclass(frozen=True)
class Vertex:
    sym: str

    def __str__(self):
        return self.sym


@dataclass(frozen=True)
class PIdent:
    def __str__(self):
        return "id"


@dataclass(frozen=True)
class PVar:
    sym: str

    def __str__(self):
        return self.sym


@dataclass(frozen=True)
class PSwap:
    a: "NameTerm"
    b: "NameTerm"

    def __str__(self):
        return f"(swap {self.a} {self.b})"


Perm = Union[PIdent, PVar, PSwap]


@dataclass(frozen=True)
class Susp:
    perm: Perm
    target: "NameTerm"

    def __str__(self):
        return f"(app {self.perm} {self.target})"


NameTerm = Union[Vertex, Susp]


@dataclass(frozen=True)
class EUEq:
    lhs: NameTerm
    rhs: NameTerm

    def __str__(self):
        return f"(eq {self.lhs} {self.rhs})"


@dataclass(frozen=True)
class EUFresh:
    lhs: NameTerm
    rhs: NameTerm

    def __str__(self):
        return f"(fresh {self.lhs} {self.rhs})"


EUConstraint = Union[EUEq, EUFresh]


@dataclass(frozen=True)
class EUProblem:
    names: tuple[str, ...]       # constants, denoting pairwise distinct names
    name_vars: tuple[str, ...]
    perm_vars: tuple[str, ...]
    constraints: tuple[EUConstraint, ...]


def validate_eu(p: EUProblem) -> None:
    decl = list(p.names) + list(p.name_vars) + list(p.perm_vars)
    if len(set(decl)) != len(decl):
        raise ValidationError("duplicate symbol declarations")
    verts = set(p.names) | set(p.name_vars)

    def check_nt(nt: NameTerm) -> None:
        if isinstance(nt, Vertex):
            if nt.sym not in verts:
                raise UndeclaredSymbol(f"undeclared vertex {nt.sym}")
            return
        perm = nt.perm
        if isinstance(perm, PVar) and perm.sym not in p.perm_vars:
            raise UndeclaredSymbol(f"undeclared permutation variable {perm.sym}")
        if isinstance(perm, PSwap):
            check_nt(perm.a)
            check_nt(perm.b)
            check_nt(nt.target)
            return
        # Identity and permutation-variable suspensions act on vertices only.
        if not isinstance(nt.target, Vertex):
            raise PhaseTwoViolation(
                f"suspension target must be a vertex: {nt}")
        check_nt(nt.target)

    for c in p.constraints:
        check_nt(c.lhs)
        check_nt(c.rhs)


# ---------------------------------------------------------------------------
# Translation

def vvar(v: str) -> str:
    return v


def pvvar(q: str, v: str) -> str:
    return f"{q}.{v}"


def swap_gadget(x: str, y: str, u: str, w: str) -> Eq:
    """Satisfied exactly when the value of u is the value of w with the
    values of x and y swapped."""
    return Eq(SAbs(x, SAbs(y, Var(w))), SAbs(y, SAbs(x, Var(u))))


def bij_gadget(x: str, y: str, x2: str, y2: str) -> Eq:
    """Satisfied exactly when (x = y) iff (x2 = y2)."""
    return Eq(SAbs(x, SAbs(y, STuple((Var(x), Var(y))))),
              SAbs(x2, SAbs(y2, STuple((Var(x2), Var(y2))))))


@dataclass
class _Translator:
    env: dict[str, NameSortT] = field(default_factory=dict)
    out: list = field(default_factory=list)
    applications: dict[str, list[str]] = field(default_factory=dict)
    temps: int = 0

    def declare(self, x: str) -> str:
        self.env.setdefault(x, NameSortT(ATOM_SORT))
        return x

    def fresh_temp(self) -> str:
        x = f"_w{self.temps}"
        self.temps += 1
        return self.declare(x)

    def trans(self, nt: NameTerm) -> str:
        if isinstance(nt, Vertex):
            return self.declare(vvar(nt.sym))
        perm = nt.perm
        if isinstance(perm, PIdent):
            return self.declare(vvar(nt.target.sym))
        if isinstance(perm, PVar):
            v = nt.target.sym
            sites = self.applications.setdefault(perm.sym, [])
            if v not in sites:
                sites.append(v)
            self.declare(vvar(v))
            return self.declare(pvvar(perm.sym, v))
        x = self.trans(perm.a)
        y = self.trans(perm.b)
        w = self.trans(nt.target)
        u = self.fresh_temp()
        self.out.append(swap_gadget(x, y, u, w))
        return u


def translate_eu(p: EUProblem) -> Problem:
    """The constraint problem equisatisfiable with the equivariant
    unification problem p; its witnesses restrict to solutions of p."""
    validate_eu(p)
    tr = _Translator()
    for v in p.names + p.name_vars:
        tr.declare(vvar(v))
    for c in p.constraints:
        lhs = tr.trans(c.lhs)
        rhs = tr.trans(c.rhs)
        if isinstance(c, EUEq):
            tr.out.append(Eq(Var(lhs), Var(rhs)))
        else:
            tr.out.append(Fresh(lhs, Var(rhs)))
    # Declared name constants denote pairwise distinct names.
    for a, b in itertools.combinations(p.names, 2):
        tr.out.append(Fresh(vvar(a), Var(vvar(b))))
    # Each permutation variable must act injectively and be well defined,
    # i.e. its images must mirror the equality pattern of its arguments.
    for q in p.perm_vars:
        sites = tr.applications.get(q, [])
        for v, v2 in itertools.combinations(sites, 2):
            tr.out.append(bij_gadget(vvar(v), vvar(v2), pvvar(q, v), pvvar(q, v2)))
    return Problem(dict(tr.env), tuple(tr.out))


# ---------------------------------------------------------------------------
# Brute-force reference semantics

POOL_GUARD = 24


def _application_count(p: EUProblem) -> int:
    def count_nt(nt: NameTerm) -> int:
        if isinstance(nt, Vertex):
            return 0
        perm = nt.perm
        inner = count_nt(nt.target)
        if isinstance(perm, PSwap):
            return 1 + inner + count_nt(perm.a) + count_nt(perm.b)
        return 1 + inner

    return sum(count_nt(c.lhs) + count_nt(c.rhs) for c in p.constraints)


def eu_brute_sat(p: EUProblem, pool: int | None = None) -> bool:
    """Decide the equivariant unification problem by exhaustive search.

    Constants take fixed distinct atoms; name variables range over the
    first (constants + name variables) atoms, which is enough by
    equivariance; permutation variables are built lazily as injective
    partial maps over a pool wide enough to hold every intermediate image.
    """
    validate_eu(p)
    small = len(p.names) + len(p.name_vars)
    if pool is None:
        pool = small + _application_count(p) + 1
    if pool > POOL_GUARD:
        raise PoolTooLarge(f"pool of {pool} atoms exceeds the guard {POOL_GUARD}")
    atoms = range(max(pool, small))

    def eval_nt(nt, val, perms):
        """Yield (atom, perms') for every way to evaluate nt; perms maps a
        permutation variable to an injective dict atom -> atom."""
        if isinstance(nt, Vertex):
            yield val[nt.sym], perms
            return
        perm = nt.perm
        if isinstance(perm, PIdent):
            yield val[nt.target.sym], perms
            return
        if isinstance(perm, PVar):
            arg = val[nt.target.sym]
            table = perms.get(perm.sym, {})
            if arg in table:
                yield table[arg], perms
                return
            used = set(table.values())
            for img in atoms:
                if img in used:
                    continue
                table2 = dict(table)
                table2[arg] = img
                perms2 = dict(perms)
                perms2[perm.sym] = table2
                yield img, perms2
            return
        for a, perms1 in eval_nt(perm.a, val, perms):
            for b, perms2 in eval_nt(perm.b, val, perms1):
                for c, perms3 in eval_nt(nt.target, val, perms2):
                    if c == a:
                        yield b, perms3
                    elif c == b:
                        yield a, perms3
                    else:
                        yield c, perms3

    def check(i, val, perms) -> bool:
        if i == len(p.constraints):
            return True
        c = p.constraints[i]
        for lv, perms1 in eval_nt(c.lhs, val, perms):
            for rv, perms2 in eval_nt(c.rhs, val, perms1):
                ok = (lv == rv) if isinstance(c, EUEq) else (lv != rv)
                if ok and check(i + 1, val, perms2):
                    return True
        return False

    base = {a: i for i, a in enumerate(p.names)}
    for choice in itertools.product(range(small), repeat=len(p.name_vars)):
        val = dict(base)
        val.update(zip(p.name_vars, choice))
        if check(0, val, {}):
            return True
    return False
