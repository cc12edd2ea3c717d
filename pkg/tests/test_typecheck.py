import pytest

from pcfv.syntax import Arrow, NAT, ONE, Prod, Signature, Sum, TyConst, parse_comp, parse_program, parse_type
from pcfv.typecheck import PcfTypeError, check_signature, elaborate_comp, typecheck_comp
from conftest import program_text


@pytest.mark.parametrize("src, ty", [
    ("ret zero", "nat"),
    ("ret ()", "unit"),
    ("ret (zero, ())", "nat * unit"),
    ("ret fun (x : nat). ret x", "nat -> nat"),
    ("ret rec f (x : nat) : nat. f x", "nat -> nat"),
    ("let x = ret 1 in ret (inl x : nat + unit)", "nat + unit"),
    ("(fun x. ret suc x) 2", "nat"),
    ("case 1 of { zero -> ret () | suc p -> ret () }", "unit"),
    ("ret fun (e : empty). absurd e", "empty -> unit"),
    ("ret fun (e : empty). absurd e : nat + unit", "empty -> nat + unit"),
])
def test_types(src, ty):
    expected = parse_type(ty)
    assert typecheck_comp([], Signature(), parse_comp(src), expected if src.endswith("absurd e") else None) == expected


@pytest.mark.parametrize("src, message", [
    ("ret fun x. ret x", "missing annotation"),
    ("ret inl zero", "injection type"),
    ("fst zero", "non-product"),
    ("zero zero", "non-function"),
    ("case 1 of { zero -> ret () | suc p -> ret p }", "expected unit, found nat"),
    ("case () of { inl a -> ret a | inr b -> ret b }", "non-sum"),
])
def test_errors(src, message):
    with pytest.raises(PcfTypeError, match=message):
        typecheck_comp([], Signature(), parse_comp(src))


def test_elaboration_fills_annotations():
    ty, t = elaborate_comp([], Signature(), parse_comp("ret fun x. ret (inl x : nat + unit)"),
                           parse_type("nat -> nat + unit"))
    assert t.value.ann == NAT
    # the elaborated term checks without an expected type
    assert typecheck_comp([], Signature(), t) == ty


def test_weakening_on_corpus():
    from pcfv.enumerate import enumerate_terms
    pool = [NAT, ONE, Arrow(NAT, NAT)]
    for t in enumerate_terms(Signature(), 6, NAT, pool):
        ty = typecheck_comp([], Signature(), t)
        assert typecheck_comp([("junk", ONE)], Signature(), t) == ty


def test_shipped_programs_typecheck():
    for name in ("add.pcfv", "kpoint.pcfv", "demo.pcfv"):
        prog = parse_program(program_text(name))
        assert check_signature(prog.signature).ok
        for d in prog.defs:
            typecheck_comp([], prog.signature, d.body, d.type)


def test_signature_rejects_bad_literals():
    prog = parse_program("typeconst c { a, b }\nconst f : c -> c { a -> b }\ndef x = ret a")
    assert check_signature(prog.signature).ok
    from pcfv.syntax import TermConstDecl
    prog.signature.term_consts["g"] = TermConstDecl("g", TyConst("c"), NAT, (("z", 1),))
    rep = check_signature(prog.signature)
    assert not rep.ok and "unknown literal" in rep.failures()[0].detail


def test_model_rejects_nonmonotone_constant(data):
    from pcfv.denot import load_model
    m = load_model(data / "bad" / "model_flip.json")
    rep = check_signature(m.signature(), model=m)
    assert [c.name for c in rep.failures()] == ["const flip is a partial morphism"]
