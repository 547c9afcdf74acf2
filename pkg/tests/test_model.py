from fractions import Fraction

import pytest

from gdlog.errors import ArityError, SafetyError
from gdlog.model import (Atom, Const, Database, DeltaTerm, GProgram, GroundRule, GRule, TGD, Var, atom,
                         attach_database, desugar_bot, heads)

X, Y = Var("X"), Var("Y")


def test_numeric_constants_are_exact_and_interned():
    assert Const(Fraction(1, 10)) is Const(Fraction(2, 20))
    assert Const(1) == Const(Fraction(1))
    assert Const(1) != Const("1")
    assert str(Const(Fraction(1, 2))) == "1/2"


def test_numbers_sort_before_symbols():
    assert sorted([Const("b"), Const(2), Const("a"), Const(Fraction(1, 2))]) == [
        Const(Fraction(1, 2)), Const(2), Const("a"), Const("b")]


def test_odd_symbols_print_quoted():
    assert str(Const("alice")) == "alice"
    assert str(Const("Alice")) == '"Alice"'
    assert str(Const("not")) == '"not"'


@pytest.mark.parametrize("bad", [True, 1.5, None, ""])
def test_bad_constants(bad):
    with pytest.raises((TypeError, ValueError)):
        Const(bad)


def test_atom_basics():
    a = atom("p", 1, "x")
    assert a.arity == 2 and a.is_ground
    assert a is atom("p", 1, "x")
    assert not Atom("p", (X,)).is_ground
    assert Atom("p", (X, DeltaTerm("flip", (Const(Fraction(1, 2)),), (Y,)))).variables() == {X, Y}


def test_unsafe_rules_are_rejected():
    with pytest.raises(SafetyError):
        GRule((), (), Atom("p", (X,)))
    with pytest.raises(SafetyError):
        GRule((Atom("q", (X,)),), (Atom("r", (Y,)),), Atom("p", (X,)))
    with pytest.raises(SafetyError):
        GRule((Atom("q", (X,)),), (), Atom("p", (DeltaTerm("flip", (Const(1),), (Y,)),)))


def test_delta_terms_only_in_heads():
    d = DeltaTerm("flip", (Const(Fraction(1, 2)),), ())
    with pytest.raises(SafetyError):
        GRule((Atom("q", (d,)),), (), Atom("p"))


def test_arity_clash():
    with pytest.raises(ArityError):
        GProgram((GRule((Atom("q", (X,)),), (), Atom("p", (X,))), GRule((Atom("q", (X, X)),), (), Atom("r"))))


def test_program_schema_split():
    prog = GProgram((GRule((Atom("e", (X,)),), (Atom("f"),), Atom("p", (X,))),))
    assert prog.edb() == {"e", "f"} and prog.idb() == {"p"}
    assert not prog.is_positive()


def test_attach_database_puts_facts_first():
    prog = GProgram((GRule((Atom("e", (X,)),), (), Atom("p", (X,))),))
    out = attach_database(prog, Database(frozenset({atom("e", 2), atom("e", 1)})))
    assert [str(r) for r in out.rules[:2]] == ["-> e(1).", "-> e(2)."]
    with pytest.raises(ArityError):
        attach_database(prog, Database(frozenset({atom("e", 1, 2)})))
    with pytest.raises(ArityError):
        attach_database(prog, Database(frozenset({atom("p", 1)})), strict=True)
    assert len(attach_database(prog, Database(frozenset({atom("p", 1)}))).rules) == 2


def test_desugar_bot_uses_fresh_names():
    prog = GProgram((GRule((Atom("Fail"),), (), None), GRule((), (), Atom("Aux"))))
    out = desugar_bot(prog)
    assert all(r.head is not None for r in out.rules)
    assert len(out.bookkeeping) == 2 and not out.bookkeeping & prog.schema()
    fail, aux = out.rules[0].head, out.rules[-1].head
    assert {fail.pred, aux.pred} == out.bookkeeping
    assert out.rules[-1] == GRule((fail,), (aux,), aux)
    assert desugar_bot(out) is out


def test_tgd_existential_safety():
    act = Atom("A", (X,))
    TGD((act,), (), Atom("R", (X, Y)), (Y,))
    with pytest.raises(SafetyError):
        TGD((act,), (), Atom("R", (X, Y)))
    with pytest.raises(SafetyError):
        TGD((act,), (), Atom("R", (X,)), (X,))


def test_ground_rules_compare_as_sets():
    a, b, c = atom("a"), atom("b"), atom("c")
    assert GroundRule([a, b], [], c) == GroundRule([b, a, a], [], c)
    assert hash(GroundRule([a], [b], c)) == hash(GroundRule((a,), (b,), c))
    assert heads([GroundRule([], [], a), GroundRule([a], [], b)]) == {a, b}
    with pytest.raises(ValueError):
        GroundRule([Atom("p", (X,))], [], c)
