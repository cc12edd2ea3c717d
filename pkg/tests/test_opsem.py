import sys

import pytest

from pcfv.enumerate import Enumerator
from pcfv.opsem import ConstUndefined, Converged, FuelExhausted, Stuck, eval_comp, instantiate, substitute
from pcfv.syntax import (
    App, Arrow, CaseEmpty, CaseNat, CaseSum, Const, Fst, Inl, Inr, Lam, Let, NAT, ONE, Pair,
    Rec, Ret, Signature, Snd, Sum, TermConstDecl, Unit, Var, ZeroLit, Zero, numeral, parse_comp,
    parse_type,
)
from pcfv.typecheck import typecheck_comp, typecheck_value

Z = ZeroLit()
COUNTDOWN = Rec(CaseNat(Var(0), Ret(Z), App(Var(2), Var(0))), "f", "x", Arrow(NAT, NAT))


def derivation(t, sig, depth=0):
    """Naive recursive big-step evaluator; returns (value, number of rule instances)."""
    if isinstance(t, Ret):
        return t.value, 1
    if isinstance(t, Let):
        v, a = derivation(t.bound, sig)
        w, b = derivation(substitute(t.body, v), sig)
        return w, a + b + 1
    if isinstance(t, App):
        f = t.fun
        if isinstance(f, Const):
            d = sig.term_consts[f.name]
            return sig.ground_value(d.tgt, d.lookup(sig.ground_key(t.arg))), 1
        if isinstance(f, Lam):
            w, a = derivation(substitute(f.body, t.arg), sig)
        else:
            w, a = derivation(instantiate(f.body, [t.arg, f]), sig)
        return w, a + 1
    if isinstance(t, CaseNat):
        if isinstance(t.scrut, ZeroLit):
            w, a = derivation(t.if_zero, sig)
        else:
            w, a = derivation(substitute(t.if_suc, t.scrut.pred), sig)
        return w, a + 1
    if isinstance(t, CaseSum):
        branch = t.if_inl if isinstance(t.scrut, Inl) else t.if_inr
        w, a = derivation(substitute(branch, t.scrut.value), sig)
        return w, a + 1
    if isinstance(t, Fst):
        return t.value.left, 1
    if isinstance(t, Snd):
        return t.value.right, 1
    raise AssertionError(t)


def test_ret_takes_one_rule():
    assert eval_comp(Ret(Z), fuel=1) == Converged(Z, 1)


def test_countdown_converges():
    out = eval_comp(App(COUNTDOWN, numeral(2)), fuel=100)
    assert isinstance(out, Converged) and out.value == Z
    # app, case, app, case, app, case, ret
    assert out.steps == derivation(App(COUNTDOWN, numeral(2)), Signature())[1] == 7


def test_fuel_is_exact():
    t = App(COUNTDOWN, numeral(2))
    assert isinstance(eval_comp(t, fuel=7), Converged)
    assert isinstance(eval_comp(t, fuel=6), FuelExhausted)


@pytest.mark.parametrize("detect", [True, False])
def test_omega_exhausts_fuel(detect):
    omega = App(Rec(App(Var(1), Var(0)), "f", "x", Arrow(NAT, NAT)), Z)
    out = eval_comp(omega, fuel=1000, detect_loops=detect)
    assert isinstance(out, FuelExhausted)
    assert out.looping == detect


def test_constants():
    sig = Signature(term_consts={"h": TermConstDecl("h", NAT, NAT, ((0, 0), (2, 1)))})
    assert eval_comp(App(Const("h"), numeral(2)), sig) == Converged(numeral(1), 1)
    out = eval_comp(App(Const("h"), numeral(1)), sig)
    assert isinstance(out, ConstUndefined) and out.name == "h"


def test_deep_recursion_uses_no_host_stack():
    t = App(COUNTDOWN, numeral(sys.getrecursionlimit() * 3))
    out = eval_comp(t, fuel=10**6)
    assert isinstance(out, Converged)


def test_stuck_on_ill_typed_input():
    assert isinstance(eval_comp(App(Unit(), Z)), Stuck)
    assert isinstance(eval_comp(CaseEmpty(Unit(), NAT)), Stuck)


# substitution
def test_substitute_into_ret():
    assert substitute(Ret(Var(0)), Z) == Ret(Z)


def test_two_variable_substitution():
    body = App(Var(1), Var(0))
    R = Rec(body, "f", "x", Arrow(NAT, NAT))
    assert instantiate(body, [Z, R]) == App(R, Z)


def test_substitution_respects_shadowing():
    t = Ret(Lam(Ret(Var(0)), "x", NAT))
    assert substitute(t, Unit()) == t


def test_substitution_lowers_outer_indices():
    assert substitute(Ret(Pair(Var(0), Var(1))), Z) == Ret(Pair(Z, Var(0)))


# properties over an enumerated corpus
SIG = Signature()
POOL = [NAT, ONE, Sum(ONE, ONE), Arrow(NAT, NAT), parse_type("unit * nat")]
CORPUS = [t for ty in (NAT, Sum(ONE, ONE)) for n in range(1, 8)
          for t in Enumerator(SIG, POOL).comps((), n).get(ty, [])]


def test_corpus_is_nontrivial():
    assert len(CORPUS) > 200


def test_subject_reduction_and_determinism():
    for t in CORPUS:
        ty = typecheck_comp([], SIG, t)
        out = eval_comp(t, SIG, 500)
        assert not isinstance(out, Stuck), t
        if isinstance(out, Converged):
            assert typecheck_value([], SIG, out.value) == ty
            assert eval_comp(t, SIG, 500) == out


def test_fuel_monotonicity_and_derivation_size():
    for t in CORPUS:
        out = eval_comp(t, SIG, 200)
        if isinstance(out, Converged):
            assert eval_comp(t, SIG, out.steps) == out
            assert isinstance(eval_comp(t, SIG, out.steps - 1) if out.steps > 1 else FuelExhausted(0), FuelExhausted)
            assert derivation(t, SIG) == (out.value, out.steps)


@pytest.mark.parametrize("src, value", [
    ("let x = ret 1 in ret suc x", 2),
    ("fst (3, ())", 3),
    ("snd ((), 4)", 4),
    ("case (inr 2 : unit + nat) of { inl u -> ret zero | inr n -> ret suc n }", 3),
    ("(fun (x : nat). ret suc suc x) 1", 3),
])
def test_small_programs(src, value):
    out = eval_comp(parse_comp(src))
    assert out.value == numeral(value)
