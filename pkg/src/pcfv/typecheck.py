"""Syntax-directed typechecking for values (``|-v``) and computations (``|-c``).

Checking is bidirectional only as far as annotations require: an expected
type flows into ``ret``, ``let`` bodies, case branches, pair components and
function arguments, which lets unannotated ``fun``/``rec``/``inl``/``inr``
appear where their type is already known.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .report import Report
from .syntax import (
    App, Arrow, CaseEmpty, CaseNat, CaseSum, Comp, Const, Fst, Inl, Inr, Lam,
    Let, Lit, NAT, Nat, ONE, Pair, Prod, Rec, Ret, Signature, Snd, Suc, Sum,
    Term, TyConst, Type, Unit, Value, Var, ZeroLit, Zero, pretty, pretty_type,
)

TypingContext = Sequence[tuple[str, Type]]


class PcfTypeError(Exception):
    def __init__(self, message: str, term: Optional[Term] = None):
        self.term = term
        super().__init__(message)


def _lookup(ctx: TypingContext, v: Var) -> Type:
    if v.index >= len(ctx):
        raise PcfTypeError(f"unbound variable {v.name!r}", v)
    return ctx[len(ctx) - 1 - v.index][1]


def _agree(found: Type, expected: Optional[Type], term: Term) -> Type:
    if expected is not None and found != expected:
        raise PcfTypeError(
            f"type mismatch: expected {pretty_type(expected)}, found {pretty_type(found)}", term)
    return found


def _ground_ok(sig: Signature, ty: Type) -> bool:
    return isinstance(ty, Nat) or (isinstance(ty, TyConst) and ty.name in sig.type_consts)


def typecheck_value(ctx: TypingContext, sig: Signature, v: Value,
                    expected: Optional[Type] = None) -> Type:
    return elaborate_value(ctx, sig, v, expected)[0]


def typecheck_comp(ctx: TypingContext, sig: Signature, t: Comp,
                   expected: Optional[Type] = None) -> Type:
    return elaborate_comp(ctx, sig, t, expected)[0]


def elaborate_value(ctx: TypingContext, sig: Signature, v: Value,
                    expected: Optional[Type] = None) -> tuple[Type, Value]:
    """Type ``v`` and return a copy with every binder and injection annotated."""
    ctx = list(ctx)
    if isinstance(v, Suc):
        depth, base = 0, v
        while isinstance(base, Suc):
            base, depth = base.pred, depth + 1
        _, out = elaborate_value(ctx, sig, base, NAT)
        for _ in range(depth):
            out = Suc(out)
        return _agree(NAT, expected, v), out
    if isinstance(v, Var):
        return _agree(_lookup(ctx, v), expected, v), v
    if isinstance(v, Unit):
        return _agree(ONE, expected, v), v
    if isinstance(v, ZeroLit):
        return _agree(NAT, expected, v), v
    if isinstance(v, Lit):
        decl = sig.type_consts.get(v.tyconst)
        if decl is None or v.name not in decl.values:
            raise PcfTypeError(f"unknown literal {v.name!r}", v)
        return _agree(TyConst(v.tyconst), expected, v), v
    if isinstance(v, Const):
        decl = sig.term_consts.get(v.name)
        if decl is None:
            raise PcfTypeError(f"unknown constant {v.name!r}", v)
        return _agree(Arrow(decl.src, decl.tgt), expected, v), v
    if isinstance(v, Pair):
        el = er = None
        if expected is not None:
            if not isinstance(expected, Prod):
                raise PcfTypeError(f"pair cannot have type {pretty_type(expected)}", v)
            el, er = expected.left, expected.right
        lt, lv = elaborate_value(ctx, sig, v.left, el)
        rt, rv = elaborate_value(ctx, sig, v.right, er)
        return Prod(lt, rt), Pair(lv, rv)
    if isinstance(v, (Inl, Inr)):
        ty = v.ann
        if ty is not None and expected is not None:
            _agree(ty, expected, v)
        ty = ty or expected
        if ty is None:
            raise PcfTypeError("missing annotation: injection type is not inferable", v)
        if not isinstance(ty, Sum):
            raise PcfTypeError(f"injection cannot have type {pretty_type(ty)}", v)
        left = isinstance(v, Inl)
        _, inner = elaborate_value(ctx, sig, v.value, ty.left if left else ty.right)
        return ty, (Inl if left else Inr)(inner, ty)
    if isinstance(v, Lam):
        dom, cod = v.ann, None
        if expected is not None:
            if not isinstance(expected, Arrow):
                raise PcfTypeError(f"function cannot have type {pretty_type(expected)}", v)
            if dom is not None:
                _agree(dom, expected.dom, v)
            dom, cod = expected.dom, expected.cod
        if dom is None:
            raise PcfTypeError("missing annotation on function argument", v)
        cod, body = elaborate_comp(ctx + [(v.name, dom)], sig, v.body, cod)
        return Arrow(dom, cod), Lam(body, v.name, dom)
    if isinstance(v, Rec):
        ty = v.ann
        if ty is not None and expected is not None:
            _agree(ty, expected, v)
        ty = ty or expected
        if ty is None:
            raise PcfTypeError("missing annotation on recursive function", v)
        if not isinstance(ty, Arrow):
            raise PcfTypeError(f"recursive function cannot have type {pretty_type(ty)}", v)
        _, body = elaborate_comp(ctx + [(v.fname, ty), (v.name, ty.dom)], sig, v.body, ty.cod)
        return ty, Rec(body, v.fname, v.name, ty)
    raise PcfTypeError(f"not a value: {v!r}", v)


def elaborate_comp(ctx: TypingContext, sig: Signature, t: Comp,
                   expected: Optional[Type] = None) -> tuple[Type, Comp]:
    ctx = list(ctx)
    if isinstance(t, Ret):
        ty, v = elaborate_value(ctx, sig, t.value, expected)
        return ty, Ret(v)
    if isinstance(t, App):
        f = t.fun
        if isinstance(f, (Lam, Rec)) and f.ann is None:
            # the argument fixes the domain of an unannotated function
            arg_ty, arg = elaborate_value(ctx, sig, t.arg)
            if isinstance(f, Rec):
                if expected is None:
                    raise PcfTypeError("missing annotation on recursive function", f)
                fty, fun = elaborate_value(ctx, sig, f, Arrow(arg_ty, expected))
            else:
                fty, fun = elaborate_value(ctx, sig, Lam(f.body, f.name, arg_ty), None)
                if expected is not None:
                    _agree(fty.cod, expected, t)
            return fty.cod, App(fun, arg)
        fty, fun = elaborate_value(ctx, sig, f)
        if not isinstance(fty, Arrow):
            raise PcfTypeError(f"applying a non-function of type {pretty_type(fty)}", t)
        _, arg = elaborate_value(ctx, sig, t.arg, fty.dom)
        return _agree(fty.cod, expected, t), App(fun, arg)
    if isinstance(t, Let):
        bty, bound = elaborate_comp(ctx, sig, t.bound)
        ty, body = elaborate_comp(ctx + [(t.name, bty)], sig, t.body, expected)
        return ty, Let(bound, body, t.name)
    if isinstance(t, CaseNat):
        _, scrut = elaborate_value(ctx, sig, t.scrut, NAT)
        z, zt = elaborate_comp(ctx, sig, t.if_zero, expected)
        s, st = elaborate_comp(ctx + [(t.name, NAT)], sig, t.if_suc, expected or z)
        return _branches(z, s, t), CaseNat(scrut, zt, st, t.name)
    if isinstance(t, CaseSum):
        sty, scrut = elaborate_value(ctx, sig, t.scrut)
        if not isinstance(sty, Sum):
            raise PcfTypeError(f"case on a non-sum of type {pretty_type(sty)}", t)
        left, lt = elaborate_comp(ctx + [(t.lname, sty.left)], sig, t.if_inl, expected)
        right, rt = elaborate_comp(ctx + [(t.rname, sty.right)], sig, t.if_inr, expected or left)
        return _branches(left, right, t), CaseSum(scrut, lt, rt, t.lname, t.rname)
    if isinstance(t, CaseEmpty):
        _, scrut = elaborate_value(ctx, sig, t.scrut, Zero())
        ty = t.ann or expected
        if ty is None:
            raise PcfTypeError("missing annotation: result of absurd is not inferable", t)
        return _agree(ty, expected, t), CaseEmpty(scrut, ty)
    if isinstance(t, (Fst, Snd)):
        pty, p = elaborate_value(ctx, sig, t.value)
        if not isinstance(pty, Prod):
            raise PcfTypeError(f"projection from a non-product of type {pretty_type(pty)}", t)
        first = isinstance(t, Fst)
        return _agree(pty.left if first else pty.right, expected, t), (Fst if first else Snd)(p)
    raise PcfTypeError(f"not a computation: {t!r}", t)


def _branches(a: Type, b: Type, t: Comp) -> Type:
    if a != b:
        raise PcfTypeError(
            f"case branches disagree: {pretty_type(a)} vs {pretty_type(b)}", t)
    return a


def check_signature(sig: Signature, model=None) -> Report:
    """Structural validation of a signature.

    With a finite model binding (see `pcfv.denot.ModelBinding`), each term
    constant is additionally checked to be a Kleisli morphism between the
    interpretations of its source and target.
    """
    rep = Report("signature")
    for tc in sig.type_consts.values():
        dup = {v for v in tc.values if tc.values.count(v) > 1}
        rep.add(f"typeconst {tc.name}", not dup, f"duplicate values {sorted(dup)}" if dup else "")
    for c in sig.term_consts.values():
        problems = []
        for side, ty in (("source", c.src), ("target", c.tgt)):
            if not _ground_ok(sig, ty):
                problems.append(f"{side} {pretty_type(ty)} is not a declared ground type")
        keys = [k for k, _ in c.graph]
        dups = sorted({str(k) for k in keys if keys.count(k) > 1})
        if dups:
            problems.append(f"duplicate input rows {dups}")
        for k, w in c.graph:
            for ty, x in ((c.src, k), (c.tgt, w)):
                if isinstance(ty, Nat) and not (isinstance(x, int) and x >= 0):
                    problems.append(f"{x!r} is not a natural number")
                if isinstance(ty, TyConst) and ty.name in sig.type_consts \
                        and x not in sig.type_consts[ty.name].values:
                    problems.append(f"unknown literal {x!r} of type {ty.name}")
        rep.add(f"const {c.name}", not problems, "; ".join(problems))
    if model is not None and rep.ok:
        for c in sig.term_consts.values():
            ok, detail = model.const_is_morphism(c)
            rep.add(f"const {c.name} is a partial morphism", ok, detail)
    return rep


def typecheck_definition(sig: Signature, d) -> Type:
    return typecheck_comp([], sig, d.body, d.type)


def elaborate_definition(sig: Signature, d) -> tuple[Type, Comp]:
    return elaborate_comp([], sig, d.body, d.type)


__all__ = [
    "PcfTypeError", "TypingContext", "typecheck_value", "typecheck_comp",
    "check_signature", "typecheck_definition", "elaborate_value", "elaborate_comp",
    "elaborate_definition",
]
