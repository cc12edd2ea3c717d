import pytest
from hypothesis import given, settings, strategies as st

from pcfv.syntax import (
    App, Arrow, CaseNat, Inl, Lam, Let, NAT, ONE, ParseError, Prod, Rec, Ret, Sum,
    Suc, Unit, Var, ZeroLit, numeral, numeral_value, parse_comp, parse_program,
    parse_type, parse_value, pretty, pretty_program, pretty_type, term_size,
)
from conftest import program_text


@pytest.mark.parametrize("text, expected", [
    ("nat", NAT),
    ("unit", ONE),
    ("nat -> nat -> nat", Arrow(NAT, Arrow(NAT, NAT))),
    ("(nat -> nat) -> nat", Arrow(Arrow(NAT, NAT), NAT)),
    ("unit + unit * nat", Sum(ONE, Prod(ONE, NAT))),
])
def test_parse_type(text, expected):
    assert parse_type(text) == expected
    assert parse_type(pretty_type(expected)) == expected


def test_de_bruijn_indices():
    t = parse_comp("ret fun x. ret fun y. ret x")
    inner = t.value.body.value.body
    assert inner == Ret(Var(1))
    assert t.free == 0


def test_alpha_equivalence_ignores_names():
    assert parse_comp("ret fun (x : nat). ret x") == parse_comp("ret fun (y : nat). ret y")
    assert parse_comp("ret fun (x : nat). ret x") != parse_comp("ret fun (x : unit). ret x")


def test_shadowing():
    t = parse_comp("ret fun x. ret fun x. ret x")
    assert t.value.body.value.body == Ret(Var(0))


@pytest.mark.parametrize("n", [0, 1, 5, 12])
def test_numerals(n):
    assert numeral_value(numeral(n)) == n
    assert parse_value(str(n)) == numeral(n)


def test_term_size_counts_nodes():
    assert term_size(Ret(ZeroLit())) == 2
    assert term_size(App(Lam(Ret(Var(0))), Suc(ZeroLit()))) == 6


@pytest.mark.parametrize("text, where", [
    ("ret", "1:4"),
    ("ret fun x. y", "1:12"),
    ("let x = ret zero ret x", "1:18"),
    ("ret (zero : nat)", "1:11"),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(ParseError) as e:
        parse_comp(text)
    assert str(e.value).startswith(where)


@pytest.mark.parametrize("text", [
    "ret fun (e : empty). absurd e",
    "ret fun (e : empty). absurd e : nat -> unit",
    "let y = (fun (e : empty). absurd e : unit) () in ret y",
    "case inl () of { inl u -> ret u | inr e -> absurd e : unit }",
])
def test_absurd_annotation_roundtrip(text):
    t = parse_comp(text)
    assert pretty(t) == text
    assert parse_comp(pretty(t)) == t


def test_program_roundtrip():
    prog = parse_program(program_text("kpoint.pcfv"))
    again = parse_program(pretty_program(prog))
    assert [d.body for d in again.defs] == [d.body for d in prog.defs]
    assert again.signature.term_consts == prog.signature.term_consts


def test_duplicate_definition_rejected():
    with pytest.raises(ParseError, match="duplicate"):
        parse_program("def a = ret zero\ndef a = ret zero")


def test_printer_avoids_capture():
    # a binder named like a free variable in scope must be renamed
    t = Lam(Ret(Var(1, "x")), "x", NAT)
    text = pretty(t, scope=("x",))
    assert parse_value(text, scope=("x",)) == t


# random well-scoped terms
def _values(depth):
    leaves = [st.just(Unit()), st.just(ZeroLit())]
    if depth:
        leaves.append(st.integers(0, depth - 1).map(Var))
    return st.one_of(*leaves)


def _comps(depth, budget):
    if budget <= 0:
        return _values(depth).map(Ret)
    sub = lambda d: _comps(d, budget - 1)
    return st.one_of(
        _values(depth).map(Ret),
        st.builds(lambda b: Ret(Lam(b, "x", NAT)), sub(depth + 1)),
        st.builds(lambda b: Ret(Rec(b, "f", "x", Arrow(NAT, NAT))), sub(depth + 2)),
        st.builds(lambda a, b: Let(a, b, "x"), sub(depth), sub(depth + 1)),
        st.builds(lambda v, z, s: CaseNat(v, z, s, "p"), _values(depth), sub(depth), sub(depth + 1)),
        st.builds(lambda v: Ret(Inl(v, Sum(NAT, ONE))), _values(depth)),
    )


@settings(max_examples=200, deadline=None)
@given(_comps(0, 4))
def test_parse_pretty_roundtrip(t):
    assert parse_comp(pretty(t)) == t
