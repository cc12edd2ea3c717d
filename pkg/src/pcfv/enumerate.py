"""Exhaustive enumeration of well-typed terms.

Terms are built bottom-up by exact size; every binder and injection carries
an annotation drawn from a fixed pool of types, so the output is complete
relative to that pool and needs no further elaboration.
"""
from __future__ import annotations

import hashlib
import itertools
from typing import Iterable, Iterator, Optional

from .syntax import (
    App, Arrow, CaseEmpty, CaseNat, CaseSum, Comp, Const, Fst, Inl, Inr, Lam,
    Let, Lit, Nat, One, Pair, Prod, Rec, Ret, Signature, Snd, Suc, Sum, Type,
    TyConst, Unit, Var, Zero, ZeroLit, pretty, pretty_type, term_size,
)

NAT, ONE, EMPTY = Nat(), One(), Zero()


def _add(table: dict, ty: Type, t) -> None:
    table.setdefault(ty, []).append(t)


class Enumerator:
    """Memoized typed generator keyed by (context, exact size)."""

    def __init__(self, sig: Signature, pool: Iterable[Type], nat: bool = True):
        self.sig = sig
        self.pool = tuple(dict.fromkeys(pool))
        self.sums = [t for t in self.pool if isinstance(t, Sum)]
        self.arrows = [t for t in self.pool if isinstance(t, Arrow)]
        self.nat = nat
        self._v: dict = {}
        self._c: dict = {}

    def values(self, ctx: tuple, n: int) -> dict[Type, list]:
        key = (ctx, n)
        hit = self._v.get(key)
        if hit is None:
            hit = self._values(ctx, n)
            self._v[key] = hit
        return hit

    def comps(self, ctx: tuple, n: int) -> dict[Type, list]:
        key = (ctx, n)
        hit = self._c.get(key)
        if hit is None:
            hit = self._comps(ctx, n)
            self._c[key] = hit
        return hit

    def _values(self, ctx: tuple, n: int) -> dict:
        out: dict = {}
        if n < 1:
            return out
        if n == 1:
            for i in range(len(ctx)):
                _add(out, ctx[len(ctx) - 1 - i], Var(i, f"x{len(ctx) - 1 - i}"))
            _add(out, ONE, Unit())
            if self.nat:
                _add(out, NAT, ZeroLit())
            for tc in self.sig.type_consts.values():
                for lit in tc.values:
                    _add(out, TyConst(tc.name), Lit(lit, tc.name))
            for d in self.sig.term_consts.values():
                _add(out, Arrow(d.src, d.tgt), Const(d.name))
            return out
        for v in self.values(ctx, n - 1).get(NAT, ()):
            _add(out, NAT, Suc(v))
        for s in self.sums:
            for v in self.values(ctx, n - 1).get(s.left, ()):
                _add(out, s, Inl(v, s))
            for v in self.values(ctx, n - 1).get(s.right, ()):
                _add(out, s, Inr(v, s))
        for k in range(1, n - 1):
            left, right = self.values(ctx, k), self.values(ctx, n - 1 - k)
            for lt, ls in left.items():
                for rt, rs in right.items():
                    ty = Prod(lt, rt)
                    for a in ls:
                        for b in rs:
                            _add(out, ty, Pair(a, b))
        for dom in self.pool:
            x = f"x{len(ctx)}"
            for cod, bodies in self.comps(ctx + (dom,), n - 1).items():
                ty = Arrow(dom, cod)
                for b in bodies:
                    _add(out, ty, Lam(b, x, dom))
        for arr in self.arrows:
            f, x = f"f{len(ctx)}", f"x{len(ctx) + 1}"
            for b in self.comps(ctx + (arr, arr.dom), n - 1).get(arr.cod, ()):
                _add(out, arr, Rec(b, f, x, arr))
        return out

    def _comps(self, ctx: tuple, n: int) -> dict:
        out: dict = {}
        if n < 2:
            return out
        for ty, vs in self.values(ctx, n - 1).items():
            for v in vs:
                _add(out, ty, Ret(v))
        for k in range(1, n - 1):
            funs, args = self.values(ctx, k), self.values(ctx, n - 1 - k)
            for fty, fs in funs.items():
                if not isinstance(fty, Arrow):
                    continue
                for f in fs:
                    for a in args.get(fty.dom, ()):
                        _add(out, fty.cod, App(f, a))
        for k in range(2, n - 2 + 1):
            x = f"x{len(ctx)}"
            for bty, bs in self.comps(ctx, k).items():
                for ty, rest in self.comps(ctx + (bty,), n - 1 - k).items():
                    for b in bs:
                        for r in rest:
                            _add(out, ty, Let(b, r, x))
        if self.nat:
            for a in range(1, n - 4 + 1):
                for scrut in self.values(ctx, a).get(NAT, ()):
                    for b in range(2, n - 1 - a - 2 + 1):
                        c = n - 1 - a - b
                        zs = self.comps(ctx, b)
                        ss = self.comps(ctx + (NAT,), c)
                        for ty, zl in zs.items():
                            for z in zl:
                                for s in ss.get(ty, ()):
                                    _add(out, ty, CaseNat(scrut, z, s, f"x{len(ctx)}"))
        for a in range(1, n - 4 + 1):
            scruts = self.values(ctx, a)
            for sty, sl in scruts.items():
                if not isinstance(sty, Sum):
                    continue
                for b in range(2, n - 1 - a - 2 + 1):
                    c = n - 1 - a - b
                    ls = self.comps(ctx + (sty.left,), b)
                    rs = self.comps(ctx + (sty.right,), c)
                    for ty, ll in ls.items():
                        rl = rs.get(ty, ())
                        for scrut in sl:
                            for lt in ll:
                                for rt in rl:
                                    _add(out, ty, CaseSum(scrut, lt, rt, f"x{len(ctx)}", f"x{len(ctx)}"))
        for scrut in self.values(ctx, n - 1).get(EMPTY, ()):
            for ty in self.pool:
                _add(out, ty, CaseEmpty(scrut, ty))
        for pty, ps in self.values(ctx, n - 1).items():
            if isinstance(pty, Prod):
                for p in ps:
                    _add(out, pty.left, Fst(p))
                for p in ps:
                    _add(out, pty.right, Snd(p))
        return out


def _uses_nat(t) -> bool:
    from .syntax import subterms
    return any(isinstance(x, (ZeroLit, CaseNat)) for x, _ in subterms(t))


def _mentions(ty: Type, cls) -> bool:
    if isinstance(ty, cls):
        return True
    for f in ("left", "right", "dom", "cod"):
        sub = getattr(ty, f, None)
        if sub is not None and _mentions(sub, cls):
            return True
    return False


def enumerate_terms(sig: Signature, max_size: int, target: Type, pool: Iterable[Type],
                    nat: bool = True, enumerator: Optional[Enumerator] = None) -> Iterator[Comp]:
    """Closed computations of type ``target``, by increasing size."""
    if max_size < 1:
        raise ValueError("size bound must be at least 1")
    E = enumerator or Enumerator(sig, pool, nat)
    for n in range(1, max_size + 1):
        yield from E.comps((), n).get(target, ())


def corpus_hash(terms: Iterable, sig: Optional[Signature] = None) -> str:
    h = hashlib.sha256()
    for t in terms:
        h.update(pretty(t, sig).encode())
        h.update(b"\n")
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# a deliberately naive oracle: untyped scoped syntax, then filter by the checker

def naive_terms(sig: Signature, max_size: int, target: Type, pool: Iterable[Type],
                nat: bool = True) -> list[Comp]:
    from .typecheck import PcfTypeError, typecheck_comp
    pool = tuple(dict.fromkeys(pool))
    out = []
    for n in range(1, max_size + 1):
        for t in _raw_comps(sig, pool, 0, n):
            if not nat and _uses_nat(t):
                continue
            try:
                if typecheck_comp([], sig, t) == target:
                    out.append(t)
            except PcfTypeError:
                pass
    return out


def _raw_values(sig, pool, depth, n):
    if n == 1:
        for i in range(depth):
            yield Var(i)
        yield Unit()
        yield ZeroLit()
        for tc in sig.type_consts.values():
            for lit in tc.values:
                yield Lit(lit, tc.name)
        for d in sig.term_consts:
            yield Const(d)
        return
    for v in _raw_values(sig, pool, depth, n - 1):
        yield Suc(v)
        for s in pool:
            if isinstance(s, Sum):
                yield Inl(v, s)
                yield Inr(v, s)
    for k in range(1, n - 1):
        for a in _raw_values(sig, pool, depth, k):
            for b in _raw_values(sig, pool, depth, n - 1 - k):
                yield Pair(a, b)
    for s in pool:
        for b in _raw_comps(sig, pool, depth + 1, n - 1):
            yield Lam(b, "x", s)
        if isinstance(s, Arrow):
            for b in _raw_comps(sig, pool, depth + 2, n - 1):
                yield Rec(b, "f", "x", s)


def _raw_comps(sig, pool, depth, n):
    if n < 2:
        return
    for v in _raw_values(sig, pool, depth, n - 1):
        yield Ret(v)
        yield Fst(v)
        yield Snd(v)
        for s in pool:
            yield CaseEmpty(v, s)
    for k in range(1, n - 1):
        for f in _raw_values(sig, pool, depth, k):
            for a in _raw_values(sig, pool, depth, n - 1 - k):
                yield App(f, a)
    for k in range(1, n - 1):
        for b in _raw_comps(sig, pool, depth, k):
            for r in _raw_comps(sig, pool, depth + 1, n - 1 - k):
                yield Let(b, r)
    for a, b in itertools.product(range(1, n), repeat=2):
        c = n - 1 - a - b
        if c < 1:
            continue
        for v in _raw_values(sig, pool, depth, a):
            for t0 in _raw_comps(sig, pool, depth, b):
                for t1 in _raw_comps(sig, pool, depth + 1, c):
                    yield CaseNat(v, t0, t1)
    for a, b in itertools.product(range(1, n), repeat=2):
        c = n - 1 - a - b
        if c < 1:
            continue
        for v in _raw_values(sig, pool, depth, a):
            for t0 in _raw_comps(sig, pool, depth + 1, b):
                for t1 in _raw_comps(sig, pool, depth + 1, c):
                    yield CaseSum(v, t0, t1)


def describe_pool(pool: Iterable[Type]) -> str:
    return ", ".join(pretty_type(t) for t in pool)


def size_histogram(terms: Iterable) -> dict[int, int]:
    h: dict[int, int] = {}
    for t in terms:
        s = term_size(t)
        h[s] = h.get(s, 0) + 1
    return dict(sorted(h.items()))
