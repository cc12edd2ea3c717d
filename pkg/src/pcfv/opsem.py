"""Substitution and fuel-bounded big-step evaluation of closed computations.

Fuel counts rule applications, i.e. the size of the derivation being built.
The evaluator never recurses on the host stack: pending ``let`` bodies live
on an explicit persistent continuation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .syntax import (
    App, CaseEmpty, CaseNat, CaseSum, Comp, Const, Fst, Inl, Inr, Lam, Let,
    Lit, Pair, Rec, Ret, Signature, Snd, Suc, Term, Unit, Value, Var, ZeroLit,
    pretty,
)


@dataclass(frozen=True)
class Converged:
    value: Value
    steps: int

    def __str__(self):
        return f"Converged {pretty(self.value, numerals=False)} ({self.steps} steps)"


@dataclass(frozen=True)
class FuelExhausted:
    fuel: int
    looping: bool = False   # an exact repeated state was seen

    def __str__(self):
        return "FuelExhausted"


@dataclass(frozen=True)
class ConstUndefined:
    name: str
    arg: Value
    steps: int = 0

    def __str__(self):
        return f"ConstUndefined {self.name}({pretty(self.arg)})"


@dataclass(frozen=True)
class Stuck:
    desc: str

    def __str__(self):
        return f"Stuck: {self.desc}"


Outcome = Union[Converged, FuelExhausted, ConstUndefined, Stuck]


# ---------------------------------------------------------------------------
# Substitution

def substitute(t: Term, v: Value, index: int = 0) -> Term:
    """Replace the free variable ``index`` by the closed value ``v``.

    Free variables above ``index`` move down by one, since their binder
    disappears.
    """
    return instantiate(t, [v], index)


def instantiate(t: Term, vals: Sequence[Value], base: int = 0) -> Term:
    """Simultaneous substitution of closed values for indices base..base+n-1.

    ``vals[0]`` replaces index ``base`` (the innermost binder).  This is the
    two-variable form used by the rec rule with ``vals = [arg, rec_value]``.
    """
    n = len(vals)

    def go(x: Term, k: int) -> Term:
        if x.free <= k + base:
            return x
        if isinstance(x, Var):
            i = x.index - k - base
            if i < n:
                return vals[i]
            return Var(x.index - n, x.name)
        if isinstance(x, Suc):
            depth = 0
            while isinstance(x, Suc):
                x, depth = x.pred, depth + 1
            out = go(x, k)
            for _ in range(depth):
                out = Suc(out)
            return out
        if isinstance(x, Lam):
            return Lam(go(x.body, k + 1), x.name, x.ann)
        if isinstance(x, Rec):
            return Rec(go(x.body, k + 2), x.fname, x.name, x.ann)
        if isinstance(x, Inl):
            return Inl(go(x.value, k), x.ann)
        if isinstance(x, Inr):
            return Inr(go(x.value, k), x.ann)
        if isinstance(x, Pair):
            return Pair(go(x.left, k), go(x.right, k))
        if isinstance(x, Ret):
            return Ret(go(x.value, k))
        if isinstance(x, App):
            return App(go(x.fun, k), go(x.arg, k))
        if isinstance(x, Let):
            return Let(go(x.bound, k), go(x.body, k + 1), x.name)
        if isinstance(x, CaseNat):
            return CaseNat(go(x.scrut, k), go(x.if_zero, k), go(x.if_suc, k + 1), x.name)
        if isinstance(x, CaseSum):
            return CaseSum(go(x.scrut, k), go(x.if_inl, k + 1), go(x.if_inr, k + 1),
                           x.lname, x.rname)
        if isinstance(x, CaseEmpty):
            return CaseEmpty(go(x.scrut, k), x.ann)
        if isinstance(x, Fst):
            return Fst(go(x.value, k))
        if isinstance(x, Snd):
            return Snd(go(x.value, k))
        raise TypeError(f"cannot substitute into {x!r}")

    return go(t, 0)


# ---------------------------------------------------------------------------
# Evaluation

def eval_comp(t: Comp, sig: Optional[Signature] = None, fuel: int = 10_000,
              detect_loops: bool = True) -> Outcome:
    """Evaluate a closed computation.

    With ``detect_loops`` an exactly repeated machine state (same computation,
    same continuation object) is reported as FuelExhausted straight away:
    the machine is deterministic, so such a run cannot converge at any fuel.
    """
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    sig = sig or Signature()
    stack = None            # persistent list of pending let bodies: (body, rest)
    steps = 0
    seen: dict = {}
    keep = []               # keeps continuation objects alive so their ids stay unique
    while True:
        if steps >= fuel:
            return FuelExhausted(fuel)
        if detect_loops and isinstance(t, App):
            key = (t, id(stack))
            if key in seen:
                return FuelExhausted(fuel, looping=True)
            seen[key] = steps
            keep.append(stack)
        steps += 1
        result = None       # set when the rule just applied is a leaf producing a value
        if isinstance(t, Ret):
            result = t.value
        elif isinstance(t, Let):
            stack = (t.body, stack)
            t = t.bound
        elif isinstance(t, App):
            f, a = t.fun, t.arg
            if isinstance(f, Lam):
                t = substitute(f.body, a)
            elif isinstance(f, Rec):
                t = instantiate(f.body, [a, f])
            elif isinstance(f, Const):
                decl = sig.term_consts.get(f.name)
                if decl is None:
                    return Stuck(f"unknown constant {f.name}")
                key = sig.ground_key(a)
                if key is None:
                    return Stuck(f"constant {f.name} applied to a non-ground value")
                w = decl.lookup(key)
                if w is None:
                    return ConstUndefined(f.name, a, steps)
                result = sig.ground_value(decl.tgt, w)
            else:
                return Stuck(f"application of a non-function {pretty(f)}")
        elif isinstance(t, CaseNat):
            s = t.scrut
            if isinstance(s, ZeroLit):
                t = t.if_zero
            elif isinstance(s, Suc):
                t = substitute(t.if_suc, s.pred)
            else:
                return Stuck("case on a non-numeral")
        elif isinstance(t, CaseSum):
            s = t.scrut
            if isinstance(s, Inl):
                t = substitute(t.if_inl, s.value)
            elif isinstance(s, Inr):
                t = substitute(t.if_inr, s.value)
            else:
                return Stuck("case on a non-injection")
        elif isinstance(t, (Fst, Snd)):
            p = t.value
            if not isinstance(p, Pair):
                return Stuck("projection from a non-pair")
            result = p.left if isinstance(t, Fst) else p.right
        elif isinstance(t, CaseEmpty):
            return Stuck("absurd reached: no closed value has type empty")
        else:
            return Stuck(f"not a computation: {t!r}")
        if result is not None:
            if stack is None:
                return Converged(result, steps)
            # the let rule itself was counted when its frame was pushed
            body, stack = stack
            t = substitute(body, result)


# keep the operation's short name available without shadowing the builtin at import sites
eval = eval_comp  # noqa: A001
