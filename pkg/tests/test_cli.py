import pathlib

import pytest

from npnas.cli import (
    format_problem,
    main,
    parse_eu,
    parse_problem,
    parse_sexprs,
    parse_term,
    parse_type,
)
from npnas.errors import SourceSyntaxError
from npnas.kernel import AbsT, NameSortT, TupleT, UNIT_T
from npnas.schematic import SAbs, SApp, STuple, SUNIT, Var

ROOT = pathlib.Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"


# ---------------------------------------------------------------------------
# Parsing

def test_sexpr_positions_in_errors():
    with pytest.raises(SourceSyntaxError) as e:
        parse_sexprs("(a\n  (b)")
    assert e.value.line == 1 and e.value.column == 1
    with pytest.raises(SourceSyntaxError) as e2:
        parse_sexprs("(a))")
    assert e2.value.line == 1 and e2.value.column == 4


def test_sexpr_comments_ignored():
    forms = parse_sexprs("; comment\n(a b) ; trailing\n")
    assert len(forms) == 1


def test_parse_type_round_trip():
    for text, ty in [
        ("unit", UNIT_T),
        ("(name A)", NameSortT("A")),
        ("(abs (name A) unit)", AbsT("A", UNIT_T)),
        ("(pair unit (name A))", TupleT((UNIT_T, NameSortT("A")))),
    ]:
        (sx,) = parse_sexprs(text)
        assert parse_type(sx) == ty
        (sx2,) = parse_sexprs(str(ty))
        assert parse_type(sx2) == ty


def test_parse_term_round_trip():
    for text, t in [
        ("x", Var("x")),
        ("unit", SUNIT),
        ("(abs a x)", SAbs("a", Var("x"))),
        ("(con K unit)", SApp("K", SUNIT)),
        ("(tuple x unit)", STuple((Var("x"), SUNIT))),
    ]:
        (sx,) = parse_sexprs(text)
        assert parse_term(sx) == t
        (sx2,) = parse_sexprs(str(t))
        assert parse_term(sx2) == t


def test_problem_files_round_trip():
    for path in PROBLEMS.glob("*.np"):
        sig, p = parse_problem(path.read_text())
        sig2, p2 = parse_problem(format_problem(sig, p))
        assert sig2 == sig
        assert p2 == p


def test_parse_problem_requires_all_sections():
    with pytest.raises(SourceSyntaxError):
        parse_problem("(signature (name-sort A)) (vars)")


def test_parse_eu_file():
    p = parse_eu((PROBLEMS / "ex67.eu").read_text())
    assert p.name_vars == ("A", "B")
    assert p.perm_vars == ("Q", "Qp")
    assert len(p.constraints) == 2


# ---------------------------------------------------------------------------
# Commands and exit codes

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", str(PROBLEMS / "swap-pair.np"))
    assert code == 0 and out.strip() == "ok"
    code, _, _ = run(capsys, "check", str(PROBLEMS / "ex67.eu"))
    assert code == 0


def test_solve_sat(capsys):
    code, out, _ = run(capsys, "solve", str(PROBLEMS / "swap-pair.np"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "result: sat"
    assert any(line.startswith("x = ") for line in lines)
    assert any(line.startswith("stats: nodes=") for line in lines)


def test_solve_unsat(capsys):
    code, out, _ = run(capsys, "solve", str(PROBLEMS / "swap-pair-fresh.np"))
    assert code == 1
    assert "result: unsat" in out
    assert "reason: exhausted-normal-forms" in out


def test_solve_fo_unsat(capsys):
    code, out, _ = run(capsys, "solve", str(PROBLEMS / "nat-divergence.np"))
    assert code == 1
    assert "reason: fo-reduction" in out
    assert "nodes=0" in out


def test_fo_command_prints_reduced_problem(capsys):
    code, out, _ = run(capsys, "fo", str(PROBLEMS / "nat-divergence.np"))
    assert code == 1
    assert "(signature" in out
    assert "(tuple unit" in out       # collapsed abstraction
    assert "result: unsat" in out


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", str(PROBLEMS / "swap-pair.np"))
    assert code == 0
    assert "result: sat" in out
    assert "exact: true" in out


def test_translate_and_solve(tmp_path, capsys):
    out_file = tmp_path / "out.np"
    code, _, _ = run(capsys, "translate-eu", str(PROBLEMS / "ex67.eu"),
                     "-o", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "solve", str(out_file))
    assert code == 1
    assert "result: unsat" in out


def test_eu_oracle_command(capsys):
    code, out, _ = run(capsys, "eu-oracle", str(PROBLEMS / "ex67.eu"))
    assert code == 1
    assert "result: unsat" in out


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "solve", "no-such-file.np")
    assert code == 2
    assert "error:" in err


def test_syntax_error_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.np"
    bad.write_text("(signature (name-sort A)")
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 2


def test_budget_exhaustion_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "solve", str(PROBLEMS / "swap-pair-fresh.np"),
                       "--budget", "0")
    assert code == 3
