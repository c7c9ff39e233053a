"""Command-line interface.

Problems are written as s-expressions; `;` starts a line comment.

  (signature (name-sort SYM)* (data-sort SYM)* (con SYM TYPE SYM)*)
  (vars (SYM TYPE)*)
  (constraints ((eq TERM TERM) | (fresh SYM TERM))*)

with TYPE ::= (name SYM) | (data SYM) | unit | (abs (name SYM) TYPE)
            | (pair TYPE TYPE+)
and  TERM ::= SYM | unit | (abs SYM TERM) | (con SYM TERM)
            | (tuple TERM TERM+)

Equivariant unification inputs use

  (eu (names SYM*) (name-vars SYM*) (perm-vars SYM*)
      (constraints ((eq NT NT) | (fresh NT NT))*))

with NT ::= SYM | (app id SYM) | (app PERM NT) and PERM ::= SYM
          | (swap NT NT).

Exit codes: 0 satisfiable (or plain success), 1 unsatisfiable, 2 usage or
validation errors, 3 exhausted budgets and guards.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import eubridge
from .decider import SolveOptions, decide
from .errors import (
    BudgetExhausted,
    NpnasError,
    PoolTooLarge,
    SearchSpaceTooLarge,
    SourceSyntaxError,
)
from .foreduce import fl_problem, fo_sat
from .kernel import (
    AbsT,
    DataSortT,
    NameSortT,
    Signature,
    TupleT,
    Type,
    UNIT_T,
    make_signature,
    realize,
)
from .oracle import brute_sat
from .schematic import (
    Eq,
    Fresh,
    Problem,
    SAbs,
    SApp,
    STuple,
    SUNIT,
    Term,
    Var,
    check_problem,
)

# ---------------------------------------------------------------------------
# Reading s-expressions

@dataclass(frozen=True)
class Atom:
    value: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


def tokenize(text: str):
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < len(text) and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            yield text[start:i], line, start_col


def parse_sexprs(text: str) -> list:
    stack: list[list] = []
    marks: list[tuple[int, int]] = []
    top: list = []
    last = (1, 1)
    for tok, line, col in tokenize(text):
        last = (line, col)
        if tok == "(":
            stack.append(top)
            marks.append((line, col))
            top = []
        elif tok == ")":
            if not stack:
                raise SourceSyntaxError("unmatched ')'", line, col)
            done = SList(tuple(top), *marks.pop())
            top = stack.pop()
            top.append(done)
        else:
            top.append(Atom(tok, line, col))
    if stack:
        raise SourceSyntaxError("unclosed '('", *marks[-1])
    return top


def _want_atom(sx, what: str) -> str:
    if not isinstance(sx, Atom):
        raise SourceSyntaxError(f"expected {what}", sx.line, sx.col)
    return sx.value


def _want_list(sx, what: str) -> SList:
    if not isinstance(sx, SList):
        raise SourceSyntaxError(f"expected {what}", sx.line, sx.col)
    return sx


def _head(sx: SList) -> str:
    if not sx.items or not isinstance(sx.items[0], Atom):
        raise SourceSyntaxError("expected a keyword after '('", sx.line, sx.col)
    return sx.items[0].value


# ---------------------------------------------------------------------------
# Problem files

def parse_type(sx) -> Type:
    if isinstance(sx, Atom):
        if sx.value == "unit":
            return UNIT_T
        raise SourceSyntaxError(f"unknown type {sx.value}", sx.line, sx.col)
    match _head(sx), len(sx.items):
        case "name", 2:
            return NameSortT(_want_atom(sx.items[1], "a sort name"))
        case "data", 2:
            return DataSortT(_want_atom(sx.items[1], "a sort name"))
        case "abs", 3:
            binder = _want_list(sx.items[1], "(name SYM)")
            if _head(binder) != "name" or len(binder.items) != 2:
                raise SourceSyntaxError("binder type must be (name SYM)",
                                        binder.line, binder.col)
            return AbsT(_want_atom(binder.items[1], "a sort name"),
                        parse_type(sx.items[2]))
        case "pair", n if n >= 3:
            return TupleT(tuple(parse_type(t) for t in sx.items[1:]))
    raise SourceSyntaxError("malformed type", sx.line, sx.col)


def parse_term(sx) -> Term:
    if isinstance(sx, Atom):
        return SUNIT if sx.value == "unit" else Var(sx.value)
    match _head(sx), len(sx.items):
        case "abs", 3:
            return SAbs(_want_atom(sx.items[1], "a binder variable"),
                        parse_term(sx.items[2]))
        case "con", 3:
            return SApp(_want_atom(sx.items[1], "a constructor name"),
                        parse_term(sx.items[2]))
        case "tuple", n if n >= 3:
            return STuple(tuple(parse_term(t) for t in sx.items[1:]))
    raise SourceSyntaxError("malformed term", sx.line, sx.col)


def parse_constraint(sx):
    sx = _want_list(sx, "a constraint")
    match _head(sx), len(sx.items):
        case "eq", 3:
            return Eq(parse_term(sx.items[1]), parse_term(sx.items[2]))
        case "fresh", 3:
            return Fresh(_want_atom(sx.items[1], "a variable"),
                         parse_term(sx.items[2]))
    raise SourceSyntaxError("malformed constraint", sx.line, sx.col)


def parse_problem(text: str) -> tuple[Signature, Problem]:
    name_sorts: list[str] = []
    data_sorts: list[str] = []
    cons: dict[str, tuple[Type, str]] = {}
    env: dict[str, Type] = {}
    constraints: list = []
    saw_sig = saw_vars = saw_cs = False
    for form in parse_sexprs(text):
        form = _want_list(form, "a top-level form")
        match _head(form):
            case "signature":
                saw_sig = True
                for item in form.items[1:]:
                    item = _want_list(item, "a signature entry")
                    match _head(item), len(item.items):
                        case "name-sort", 2:
                            name_sorts.append(
                                _want_atom(item.items[1], "a sort name"))
                        case "data-sort", 2:
                            data_sorts.append(
                                _want_atom(item.items[1], "a sort name"))
                        case "con", 4:
                            k = _want_atom(item.items[1], "a constructor name")
                            cons[k] = (parse_type(item.items[2]),
                                       _want_atom(item.items[3], "a sort name"))
                        case _:
                            raise SourceSyntaxError("malformed signature entry",
                                                    item.line, item.col)
            case "vars":
                saw_vars = True
                for item in form.items[1:]:
                    item = _want_list(item, "a variable declaration")
                    if len(item.items) != 2:
                        raise SourceSyntaxError("expected (SYM TYPE)",
                                                item.line, item.col)
                    env[_want_atom(item.items[0], "a variable")] = \
                        parse_type(item.items[1])
            case "constraints":
                saw_cs = True
                constraints.extend(parse_constraint(c) for c in form.items[1:])
            case other:
                raise SourceSyntaxError(f"unknown form {other}",
                                        form.line, form.col)
    if not (saw_sig and saw_vars and saw_cs):
        raise SourceSyntaxError(
            "a problem needs signature, vars and constraints forms", 1, 1)
    sig = make_signature(name_sorts, data_sorts, cons)
    return sig, Problem(env, tuple(constraints))


def format_problem(sig: Signature, p: Problem) -> str:
    lines = ["(signature"]
    for s in sorted(sig.name_sorts):
        lines.append(f"  (name-sort {s})")
    for s in sorted(sig.data_sorts):
        lines.append(f"  (data-sort {s})")
    for k in sorted(sig.constructors):
        arg, res = sig.constructors[k]
        lines.append(f"  (con {k} {arg} {res})")
    lines[-1] += ")"
    lines.append("(vars")
    if p.env:
        for x, ty in p.env.items():
            lines.append(f"  ({x} {ty})")
        lines[-1] += ")"
    else:
        lines[-1] += ")"
    lines.append("(constraints")
    if p.constraints:
        for c in p.constraints:
            lines.append(f"  {c}")
        lines[-1] += ")"
    else:
        lines[-1] += ")"
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Equivariant unification files

def parse_nt(sx) -> eubridge.NameTerm:
    if isinstance(sx, Atom):
        return eubridge.Vertex(sx.value)
    if _head(sx) == "app" and len(sx.items) == 3:
        return eubridge.Susp(parse_perm(sx.items[1]), parse_nt(sx.items[2]))
    raise SourceSyntaxError("malformed name-term", sx.line, sx.col)


def parse_perm(sx) -> eubridge.Perm:
    if isinstance(sx, Atom):
        return eubridge.PIdent() if sx.value == "id" else eubridge.PVar(sx.value)
    if _head(sx) == "swap" and len(sx.items) == 3:
        return eubridge.PSwap(parse_nt(sx.items[1]), parse_nt(sx.items[2]))
    raise SourceSyntaxError("malformed permutation", sx.line, sx.col)


def parse_eu(text: str) -> eubridge.EUProblem:
    forms = parse_sexprs(text)
    if len(forms) != 1:
        raise SourceSyntaxError("expected a single (eu ...) form", 1, 1)
    form = _want_list(forms[0], "(eu ...)")
    if _head(form) != "eu":
        raise SourceSyntaxError("expected (eu ...)", form.line, form.col)
    names: tuple[str, ...] = ()
    name_vars: tuple[str, ...] = ()
    perm_vars: tuple[str, ...] = ()
    constraints: list = []
    for part in form.items[1:]:
        part = _want_list(part, "an eu section")
        match _head(part):
            case "names":
                names = tuple(_want_atom(a, "a name") for a in part.items[1:])
            case "name-vars":
                name_vars = tuple(_want_atom(a, "a variable")
                                  for a in part.items[1:])
            case "perm-vars":
                perm_vars = tuple(_want_atom(a, "a variable")
                                  for a in part.items[1:])
            case "constraints":
                for c in part.items[1:]:
                    c = _want_list(c, "a constraint")
                    match _head(c), len(c.items):
                        case "eq", 3:
                            constraints.append(
                                eubridge.EUEq(parse_nt(c.items[1]),
                                              parse_nt(c.items[2])))
                        case "fresh", 3:
                            constraints.append(
                                eubridge.EUFresh(parse_nt(c.items[1]),
                                                 parse_nt(c.items[2])))
                        case _:
                            raise SourceSyntaxError("malformed constraint",
                                                    c.line, c.col)
            case other:
                raise SourceSyntaxError(f"unknown eu section {other}",
                                        part.line, part.col)
    p = eubridge.EUProblem(names, name_vars, perm_vars, tuple(constraints))
    eubridge.validate_eu(p)
    return p


# ---------------------------------------------------------------------------
# Commands

def _load(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_check(args) -> int:
    text = _load(args.file)
    if args.file.endswith(".eu"):
        parse_eu(text)
    else:
        sig, p = parse_problem(text)
        check_problem(sig, p)
    print("ok")
    return 0


def cmd_solve(args) -> int:
    sig, p = parse_problem(_load(args.file))
    options = SolveOptions(strategy=args.strategy, budget=args.budget)
    result = decide(sig, p, options)
    print(f"result: {'sat' if result.sat else 'unsat'}")
    if result.reason:
        print(f"reason: {result.reason}")
    if result.sat and not args.no_witness:
        for x in p.env:
            print(f"{x} = {realize(result.witness[x])}")
    print(f"stats: nodes={result.nodes} normal-forms={result.normal_forms}")
    return 0 if result.sat else 1


def cmd_fo(args) -> int:
    sig, p = parse_problem(_load(args.file))
    check_problem(sig, p)
    flsig, flp = fl_problem(sig, p)
    sys.stdout.write(format_problem(flsig, flp))
    sat = fo_sat(sig, p)
    print(f"result: {'sat' if sat else 'unsat'}")
    return 0 if sat else 1


def cmd_oracle(args) -> int:
    sig, p = parse_problem(_load(args.file))
    check_problem(sig, p)
    result = brute_sat(sig, p, max_size=args.size, pool=args.pool)
    print(f"result: {'sat' if result.sat else 'unsat'}")
    print(f"exact: {'true' if result.exact else 'false'}")
    if result.sat and args.witness:
        for x in p.env:
            print(f"{x} = {realize(result.witness[x])}")
    return 0 if result.sat else 1


def cmd_translate_eu(args) -> int:
    p = parse_eu(_load(args.file))
    problem = eubridge.translate_eu(p)
    text = format_problem(eubridge.EU_SIGNATURE, problem)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_eu_oracle(args) -> int:
    p = parse_eu(_load(args.file))
    sat = eubridge.eu_brute_sat(p)
    print(f"result: {'sat' if sat else 'unsat'}")
    return 0 if sat else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="npnas",
        description="satisfiability of equality and freshness constraints "
                    "over non-permutative nominal abstract syntax")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and typecheck a problem file")
    c.add_argument("file")
    c.set_defaults(run=cmd_check)

    s = sub.add_parser("solve", help="decide satisfiability")
    s.add_argument("file")
    s.add_argument("--no-witness", action="store_true",
                   help="suppress the satisfying valuation")
    s.add_argument("--strategy", choices=["focused", "full"],
                   default="focused")
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(run=cmd_solve)

    f = sub.add_parser("fo", help="decide the first-order collapse only")
    f.add_argument("file")
    f.set_defaults(run=cmd_fo)

    o = sub.add_parser("oracle", help="brute-force enumeration up to bounds")
    o.add_argument("file")
    o.add_argument("--size", type=int, default=5)
    o.add_argument("--pool", type=int, default=3)
    o.add_argument("--witness", action="store_true")
    o.set_defaults(run=cmd_oracle)

    t = sub.add_parser("translate-eu",
                       help="reduce an equivariant unification file")
    t.add_argument("file")
    t.add_argument("-o", "--output", default=None)
    t.set_defaults(run=cmd_translate_eu)

    e = sub.add_parser("eu-oracle",
                       help="brute-force an equivariant unification file")
    e.add_argument("file")
    e.set_defaults(run=cmd_eu_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (BudgetExhausted, PoolTooLarge, SearchSpaceTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NpnasError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
