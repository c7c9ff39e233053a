"""Nominal signatures, ground trees, permutations, alpha-equivalence and
canonical (nameless-binder) representatives.

All values here are immutable and all operations are pure functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import SortMismatch, TypeMismatch, Uninhabited, ValidationError

# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class NameSortT:
    """Type of bindable names of a given sort."""
    sort: str

    def __str__(self):
        return f"(name {self.sort})"


@dataclass(frozen=True)
class DataSortT:
    sort: str

    def __str__(self):
        return f"(data {self.sort})"


@dataclass(frozen=True)
class UnitT:
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class AbsT:
    """Abstraction type: binder is always a name sort."""
    binder: str
    body: "Type"

    def __str__(self):
        return f"(abs (name {self.binder}) {self.body})"


@dataclass(frozen=True)
class TupleT:
    items: tuple["Type", ...]  # length >= 2

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("tuple types need at least two components")

    def __str__(self):
        return "(pair " + " ".join(str(t) for t in self.items) + ")"


Type = Union[NameSortT, DataSortT, UnitT, AbsT, TupleT]

UNIT_T = UnitT()


def is_name_sort(ty: Type) -> bool:
    return isinstance(ty, NameSortT)


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class Signature:
    """Name sorts, data sorts and constructors of the object language."""
    name_sorts: frozenset[str]
    data_sorts: frozenset[str]
    constructors: Mapping[str, tuple[Type, str]]  # K -> (arg type, result sort)

    def arg_type(self, con: str) -> Type:
        return self.constructors[con][0]

    def result_sort(self, con: str) -> str:
        return self.constructors[con][1]


def make_signature(name_sorts, data_sorts, constructors) -> Signature:
    """Build and validate a signature; every type must be inhabited."""
    sig = Signature(frozenset(name_sorts), frozenset(data_sorts), dict(constructors))
    validate_signature(sig)
    return sig


def _sorts_of(ty: Type, names: set[str], datas: set[str]) -> None:
    if isinstance(ty, NameSortT):
        names.add(ty.sort)
    elif isinstance(ty, DataSortT):
        datas.add(ty.sort)
    elif isinstance(ty, AbsT):
        names.add(ty.binder)
        _sorts_of(ty.body, names, datas)
    elif isinstance(ty, TupleT):
        for t in ty.items:
            _sorts_of(t, names, datas)


def validate_signature(sig: Signature) -> None:
    overlap = sig.name_sorts & sig.data_sorts
    if overlap:
        raise ValidationError(f"sorts declared as both name and data: {sorted(overlap)}")
    for con, (arg, res) in sig.constructors.items():
        if res not in sig.data_sorts:
            raise ValidationError(f"constructor {con} targets undeclared data sort {res}")
        names: set[str] = set()
        datas: set[str] = set()
        _sorts_of(arg, names, datas)
        if not names <= sig.name_sorts:
            raise ValidationError(f"constructor {con} uses undeclared name sorts {sorted(names - sig.name_sorts)}")
        if not datas <= sig.data_sorts:
            raise ValidationError(f"constructor {con} uses undeclared data sorts {sorted(datas - sig.data_sorts)}")
    # Standing assumption: every type over the signature has a ground tree,
    # which holds iff every data sort does.
    ranks = _data_sort_ranks(sig)
    for d in sorted(sig.data_sorts):
        if d not in ranks:
            raise Uninhabited(DataSortT(d))


# ---------------------------------------------------------------------------
# Names and ground trees

@dataclass(frozen=True)
class Name:
    """A permutative name: (sort, index) out of a countable per-sort pool."""
    sort: str
    index: int

    def __str__(self):
        return f"n{self.index}@{self.sort}"


@dataclass(frozen=True)
class GUnit:
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class GTuple:
    items: tuple["GroundTree", ...]

    def __str__(self):
        return "(tuple " + " ".join(str(g) for g in self.items) + ")"


@dataclass(frozen=True)
class GApp:
    con: str
    arg: "GroundTree"

    def __str__(self):
        return f"(con {self.con} {self.arg})"


@dataclass(frozen=True)
class GAbs:
    binder: Name
    body: "GroundTree"

    def __str__(self):
        return f"(abs {self.binder} {self.body})"


GroundTree = Union[Name, GUnit, GTuple, GApp, GAbs]

GUNIT = GUnit()


def free_names(g: GroundTree) -> frozenset[Name]:
    if isinstance(g, Name):
        return frozenset([g])
    if isinstance(g, GUnit):
        return frozenset()
    if isinstance(g, GTuple):
        out: frozenset[Name] = frozenset()
        for item in g.items:
            out |= free_names(item)
        return out
    if isinstance(g, GApp):
        return free_names(g.arg)
    return free_names(g.body) - {g.binder}


def check_tree(sig: Signature, g: GroundTree, ty: Type) -> None:
    """Raise TypeMismatch unless g is a tree of type ty over sig."""
    if isinstance(g, Name):
        if not (isinstance(ty, NameSortT) and ty.sort == g.sort):
            raise TypeMismatch(f"name {g} does not have type {ty}")
    elif isinstance(g, GUnit):
        if not isinstance(ty, UnitT):
            raise TypeMismatch(f"unit does not have type {ty}")
    elif isinstance(g, GTuple):
        if not (isinstance(ty, TupleT) and len(ty.items) == len(g.items)):
            raise TypeMismatch(f"tuple arity mismatch at type {ty}")
        for item, t in zip(g.items, ty.items):
            check_tree(sig, item, t)
    elif isinstance(g, GApp):
        if g.con not in sig.constructors:
            raise TypeMismatch(f"unknown constructor {g.con}")
        arg_ty, res = sig.constructors[g.con]
        if not (isinstance(ty, DataSortT) and ty.sort == res):
            raise TypeMismatch(f"{g.con} builds {res}, not {ty}")
        check_tree(sig, g.arg, arg_ty)
    else:
        if not (isinstance(ty, AbsT) and ty.binder == g.binder.sort):
            raise TypeMismatch(f"abstraction binder sort {g.binder.sort} does not fit {ty}")
        check_tree(sig, g.body, ty.body)


# ---------------------------------------------------------------------------
# Permutations

@dataclass(frozen=True)
class Permutation:
    """A finite list of name swaps, applied right-to-left."""
    swaps: tuple[tuple[Name, Name], ...] = ()

    def __post_init__(self):
        for a, b in self.swaps:
            if a.sort != b.sort:
                raise SortMismatch(f"swap ({a} {b}) pairs different sorts")

    def __call__(self, n: Name) -> Name:
        for a, b in reversed(self.swaps):
            if n == a:
                n = b
            elif n == b:
                n = a
        return n

    def inverse(self) -> "Permutation":
        return Permutation(tuple(reversed(self.swaps)))

    def then(self, other: "Permutation") -> "Permutation":
        """Composition: self applied first, then other."""
        return Permutation(other.swaps + self.swaps)


IDENTITY = Permutation()


def swap(a: Name, b: Name) -> Permutation:
    return Permutation(((a, b),))


def perm_apply(pi: Permutation, g: GroundTree) -> GroundTree:
    """Rename every name occurrence in g, binders included."""
    if isinstance(g, Name):
        return pi(g)
    if isinstance(g, GUnit):
        return g
    if isinstance(g, GTuple):
        return GTuple(tuple(perm_apply(pi, item) for item in g.items))
    if isinstance(g, GApp):
        return GApp(g.con, perm_apply(pi, g.arg))
    return GAbs(pi(g.binder), perm_apply(pi, g.body))


# ---------------------------------------------------------------------------
# Alpha-equivalence and freshness (the ground-tree rules)

def fresh_name(n: Name, g: GroundTree) -> bool:
    """True iff n is not free in g."""
    if isinstance(g, Name):
        return n != g
    if isinstance(g, GUnit):
        return True
    if isinstance(g, GTuple):
        return all(fresh_name(n, item) for item in g.items)
    if isinstance(g, GApp):
        return fresh_name(n, g.arg)
    if g.binder == n:
        return True
    return fresh_name(n, g.body)


def alpha_eq(g1: GroundTree, g2: GroundTree, ty: Type | None = None,
             sig: Signature | None = None) -> bool:
    """Structural alpha-equivalence; distinct binders go through a swap with
    the usual freshness side-condition."""
    if ty is not None and sig is not None:
        check_tree(sig, g1, ty)
        check_tree(sig, g2, ty)
    return _aeq(g1, g2)


def _aeq(g1: GroundTree, g2: GroundTree) -> bool:
    if isinstance(g1, Name) and isinstance(g2, Name):
        return g1 == g2
    if isinstance(g1, GUnit) and isinstance(g2, GUnit):
        return True
    if isinstance(g1, GTuple) and isinstance(g2, GTuple):
        return len(g1.items) == len(g2.items) and all(
            _aeq(a, b) for a, b in zip(g1.items, g2.items))
    if isinstance(g1, GApp) and isinstance(g2, GApp):
        return g1.con == g2.con and _aeq(g1.arg, g2.arg)
    if isinstance(g1, GAbs) and isinstance(g2, GAbs):
        if g1.binder.sort != g2.binder.sort:
            return False
        if g1.binder == g2.binder:
            return _aeq(g1.body, g2.body)
        if not fresh_name(g1.binder, g2.body):
            return False
        return _aeq(g1.body, perm_apply(swap(g1.binder, g2.binder), g2.body))
    return False


# ---------------------------------------------------------------------------
# Canonical alpha-tree representatives

@dataclass(frozen=True)
class ABound:
    """Bound occurrence: number of binders between it and its binder."""
    depth: int


@dataclass(frozen=True)
class AUnit:
    pass


@dataclass(frozen=True)
class ATuple:
    items: tuple["ANode", ...]


@dataclass(frozen=True)
class AApp:
    con: str
    arg: "ANode"


@dataclass(frozen=True)
class AAbs:
    sort: str
    body: "ANode"


ANode = Union[Name, ABound, AUnit, ATuple, AApp, AAbs]

AUNIT = AUnit()


@dataclass(frozen=True)
class AlphaTree:
    """Canonical representative of an alpha-equivalence class: bound names
    replaced by binder distances, free names kept explicit."""
    node: ANode

    def free_names(self) -> frozenset[Name]:
        return _anode_free_names(self.node)

    def is_name(self) -> bool:
        return isinstance(self.node, Name)

    def name(self) -> Name:
        if not isinstance(self.node, Name):
            raise TypeMismatch("alpha-tree is not a bare name")
        return self.node


def _anode_free_names(a: ANode) -> frozenset[Name]:
    if isinstance(a, Name):
        return frozenset([a])
    if isinstance(a, (ABound, AUnit)):
        return frozenset()
    if isinstance(a, ATuple):
        out: frozenset[Name] = frozenset()
        for item in a.items:
            out |= _anode_free_names(item)
        return out
    if isinstance(a, AApp):
        return _anode_free_names(a.arg)
    return _anode_free_names(a.body)


def canonicalize(g: GroundTree) -> AlphaTree:
    """Canonical nameless-binder form; structural equality of results
    coincides with alpha_eq of the inputs."""
    return AlphaTree(_canon(g, []))


def _canon(g: GroundTree, binders: list[Name]) -> ANode:
    if isinstance(g, Name):
        for depth, binder in enumerate(reversed(binders)):
            if binder == g:
                return ABound(depth)
        return g
    if isinstance(g, GUnit):
        return AUNIT
    if isinstance(g, GTuple):
        return ATuple(tuple(_canon(item, binders) for item in g.items))
    if isinstance(g, GApp):
        return AApp(g.con, _canon(g.arg, binders))
    binders.append(g.binder)
    body = _canon(g.body, binders)
    binders.pop()
    return AAbs(g.binder.sort, body)


def atree(g: GroundTree) -> AlphaTree:
    """Shorthand used all over the tests."""
    return canonicalize(g)


def realize(a: AlphaTree, avoid: frozenset[Name] = frozenset()) -> GroundTree:
    """Pick a ground representative; binder names are drawn above every
    free-name index (and every index in avoid) at the relevant sort."""
    base: dict[str, int] = {}
    for n in a.free_names() | avoid:
        base[n.sort] = max(base.get(n.sort, 0), n.index + 1)
    counter = dict(base)

    def go(node: ANode, binders: list[Name]) -> GroundTree:
        if isinstance(node, Name):
            return node
        if isinstance(node, ABound):
            return binders[-1 - node.depth]
        if isinstance(node, AUnit):
            return GUNIT
        if isinstance(node, ATuple):
            return GTuple(tuple(go(item, binders) for item in node.items))
        if isinstance(node, AApp):
            return GApp(node.con, go(node.arg, binders))
        idx = counter.get(node.sort, 0)
        counter[node.sort] = idx + 1
        binder = Name(node.sort, idx)
        binders.append(binder)
        body = go(node.body, binders)
        binders.pop()
        return GAbs(binder, body)

    return go(a.node, [])


def atree_perm(pi: Permutation, a: AlphaTree) -> AlphaTree:
    """Transport an alpha-tree along a permutation."""
    return canonicalize(perm_apply(pi, realize(a)))


def atree_fresh(n: Name, a: AlphaTree) -> bool:
    return n not in a.free_names()


# ---------------------------------------------------------------------------
# Inhabitants

def _type_rank(ty: Type, ranks: dict[str, int]) -> int | None:
    """Max data-sort rank occurring in ty, or None if some sort has none."""
    if isinstance(ty, (NameSortT, UnitT)):
        return 0
    if isinstance(ty, DataSortT):
        return ranks.get(ty.sort)
    if isinstance(ty, AbsT):
        return _type_rank(ty.body, ranks)
    worst = 0
    for item in ty.items:
        r = _type_rank(item, ranks)
        if r is None:
            return None
        worst = max(worst, r)
    return worst


def _data_sort_ranks(sig: Signature) -> dict[str, int]:
    """Least fixpoint: rank = iteration at which a sort becomes inhabited."""
    ranks: dict[str, int] = {}
    rank = 1
    changed = True
    while changed:
        changed = False
        for con, (arg, res) in sig.constructors.items():
            if res in ranks:
                continue
            if _type_rank(arg, ranks) is not None:
                ranks[res] = rank
                changed = True
        rank += 1
    return ranks


def inhabitant(sig: Signature, ty: Type, start_index: int = 0) -> GroundTree:
    """Some ground tree of type ty; free names use indices >= start_index.

    Raises Uninhabited when the signature violates the standing assumption
    (make_signature already rejects such signatures up front).
    """
    ranks = _data_sort_ranks(sig)

    def go(t: Type) -> GroundTree:
        if isinstance(t, NameSortT):
            return Name(t.sort, start_index)
        if isinstance(t, UnitT):
            return GUNIT
        if isinstance(t, AbsT):
            return GAbs(Name(t.binder, start_index), go(t.body))
        if isinstance(t, TupleT):
            return GTuple(tuple(go(item) for item in t.items))
        if t.sort not in ranks:
            raise Uninhabited(t)
        # Pick the constructor whose argument is buildable earliest so the
        # recursion bottoms out.
        best = None
        for con in sorted(sig.constructors):
            arg, res = sig.constructors[con]
            if res != t.sort:
                continue
            r = _type_rank(arg, ranks)
            if r is None:
                continue
            if best is None or r < best[0]:
                best = (r, con, arg)
        assert best is not None
        return GApp(best[1], go(best[2]))

    return go(ty)
