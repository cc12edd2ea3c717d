"""Denotational semantics: an exact finite sheaf-model backend and an
environment-machine backend for the standard model.

Finite backend elements:
  unit -> ()            pair -> (x, y)             inl/inr -> Left / Right
  type constant -> its literal name                nat -> int
  function -> Fn(table over the domain carrier, entries in the lifted codomain)

A computation denotes BOTTOM or Up(element).  Environments are tuples of
elements with the innermost binder last; a parallel tuple carries the
types so that applications of variables know their domain.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct
from pathlib import Path
from typing import Optional

from . import sheaf as sh
from .sheaf import BOTTOM, Fn, FiniteSheaf, Left, Right, Up
from .site import FiniteSite, MonoClass, SiteFormatError
from .syntax import (
    App, Arrow, CaseEmpty, CaseNat, CaseSum, Comp, Const, Fst, Inl, Inr, Lam,
    Let, Lit, Nat, One, Pair, Prod, Rec, Ret, Signature, Snd, Suc, Sum,
    TermConstDecl, TyConst, Type, TypeConstDecl, Unit, Value, Var, Zero,
    ZeroLit,
)


class NatRestriction(ValueError):
    """nat would need a finite carrier (under an arrow, product or sum)."""


def nat_admissible(ty: Type, guarded: bool = False) -> bool:
    """True when nat never sits under a type former in ``ty``."""
    if isinstance(ty, Nat):
        return not guarded
    if isinstance(ty, (Sum, Prod)):
        return nat_admissible(ty.left, True) and nat_admissible(ty.right, True)
    if isinstance(ty, Arrow):
        return nat_admissible(ty.dom, True) and nat_admissible(ty.cod, True)
    return True


def is_nat_plot(S: FiniteSite, c: str, f) -> bool:
    """Is f : |c| -> naturals locally constant along some cover of c?"""
    f = tuple(f)
    if len(set(f)) <= 1:
        return True
    for fam in S.families(c):
        if all(len({f[i] for i in S.by_name[g].fn}) <= 1 for g in fam):
            return True
    return False


# ---------------------------------------------------------------------------
# model bindings

@dataclass
class ModelBinding:
    """A site with monos, sheaves for the type constants and graphs for the
    term constants."""
    site: FiniteSite
    monos: MonoClass
    typeconsts: dict[str, FiniteSheaf] = field(default_factory=dict)
    consts: dict[str, TermConstDecl] = field(default_factory=dict)
    name: str = "model"

    def signature(self) -> Signature:
        tcs = {n: TypeConstDecl(n, tuple(str(x) for x in X.elements))
               for n, X in self.typeconsts.items()}
        return Signature(tcs, dict(self.consts))

    def compatibility(self, sig: Signature) -> list[str]:
        problems = []
        for n, tc in sig.type_consts.items():
            X = self.typeconsts.get(n)
            if X is None:
                problems.append(f"type constant {n} is not bound by the model")
            elif set(tc.values) != {str(x) for x in X.elements}:
                problems.append(f"literals of {n} differ from the carrier of its sheaf")
        return problems

    def ground_sheaf(self, ty: Type, keys=()) -> FiniteSheaf:
        if isinstance(ty, TyConst):
            return self.typeconsts[ty.name]
        # nat: the discrete slice spanned by the keys, plots locally constant
        vals = sorted(set(keys) | {0})
        seeds = {c: [g for g in iproduct(range(len(vals)), repeat=self.site.npoints(c))
                     if is_nat_plot(self.site, c, g)] for c in self.site.objects}
        return sh.close_plots(self.site, vals, [], seeds, name="nat")

    def const_is_morphism(self, decl: TermConstDecl) -> tuple[bool, str]:
        """Is the graph a morphism from the source into the lifted target?"""
        try:
            X = self.ground_sheaf(decl.src, [k for k, _ in decl.graph])
            Y = self.ground_sheaf(decl.tgt, [w for _, w in decl.graph])
        except KeyError as e:
            return False, f"unbound type constant {e}"
        f = dict(decl.graph)
        LY = sh.lift(Y, self.monos)
        table = [LY.index[Up(f[x])] if x in f else 0 for x in X.elements]
        reason = sh.is_morphism(X, LY, table)
        # raises TheoremViolation if the two characterizations disagree
        sh.check_partial_map_char(X, Y, f, self.monos, LY)
        return reason is None, reason or ""


def _ground(name: str, tcs) -> Type:
    if name == "nat":
        return Nat()
    if name not in tcs:
        raise SiteFormatError(f"unknown ground type {name!r}")
    return TyConst(name)


def model_from_json(data: dict, base: Path = Path("."), name: str = "model") -> ModelBinding:
    S = sh._resolve_site(data.get("site", "builtin:trivial"), base)
    if "monos" in data:
        M = MonoClass({c: frozenset(ms) for c, ms in data["monos"].items()})
    else:
        M = MonoClass.of(S)
    tcs = {}
    for n, ref in data.get("typeconsts", {}).items():
        X = sh.sheaf_from_json(ref, base, S, n) if isinstance(ref, dict) else sh.load_sheaf(base / ref, S)
        X.name = n
        tcs[n] = X
    consts = {}
    for n, c in data.get("consts", {}).items():
        src, tgt = _ground(c["src"], tcs), _ground(c["tgt"], tcs)
        ks = int if isinstance(src, Nat) else str
        ws = int if isinstance(tgt, Nat) else str
        consts[n] = TermConstDecl(n, src, tgt, tuple((ks(k), ws(w)) for k, w in c["graph"]))
    return ModelBinding(S, M, tcs, consts, data.get("name", name))


BUILTIN_MODELS = ("reflexive", "kpoint", "standard")


def load_model(ref) -> ModelBinding:
    """Load a model from a JSON file or ``builtin:NAME``."""
    ref = str(ref)
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in BUILTIN_MODELS:
            raise SiteFormatError(f"unknown builtin model {name!r}")
        from importlib import resources
        with resources.as_file(resources.files("pcfv") / "data" / "models" / f"{name}.json") as p:
            return load_model(p)
    path = Path(ref)
    with open(path) as fh:
        data = json.load(fh)
    return model_from_json(data, path.parent, path.stem)


# ---------------------------------------------------------------------------
# finite backend

class FiniteBackend:
    """Exact interpretation in a finite sheaf model.  Terms must be elaborated."""

    def __init__(self, binding: ModelBinding, sig: Optional[Signature] = None):
        self.binding = binding
        self.sig = sig if sig is not None else binding.signature()
        self.monos = binding.monos
        self._types: dict = {}
        self._lifts: dict = {}
        self._cache: dict = {}
        self.fix_iterations: list[int] = []

    # types
    def interp_type(self, ty: Type) -> FiniteSheaf:
        X = self._types.get(ty)
        if X is not None:
            return X
        S = self.binding.site
        if isinstance(ty, Nat):
            raise NatRestriction("nat has an infinite carrier and cannot be tabulated")
        if isinstance(ty, One):
            X = sh.terminal_sheaf(S)
        elif isinstance(ty, Zero):
            X = sh.initial_sheaf(S)
        elif isinstance(ty, TyConst):
            if ty.name not in self.binding.typeconsts:
                raise KeyError(f"type constant {ty.name} is not bound by the model")
            X = self.binding.typeconsts[ty.name]
        elif isinstance(ty, Prod):
            X = sh.product(self.interp_type(ty.left), self.interp_type(ty.right))
        elif isinstance(ty, Sum):
            X = sh.coproduct(self.interp_type(ty.left), self.interp_type(ty.right))
        elif isinstance(ty, Arrow):
            X = sh.exponential(self.interp_type(ty.dom), self.lifted(ty.cod))
        else:
            raise TypeError(f"unknown type {ty!r}")
        self._types[ty] = X
        return X

    def lifted(self, ty: Type) -> FiniteSheaf:
        L = self._lifts.get(ty)
        if L is None:
            L = sh.lift(self.interp_type(ty), self.monos)
            self._lifts[ty] = L
        return L

    def context_sheaf(self, types) -> FiniteSheaf:
        """Interpretation of a context; labels are environment tuples."""
        return context_product(self.binding.site, [self.interp_type(t) for t in types])

    # values
    def interp_value(self, v: Value, env: tuple = (), tys: tuple = ()):
        if isinstance(v, Var):
            return env[len(env) - 1 - v.index]
        if isinstance(v, Unit):
            return ()
        if isinstance(v, ZeroLit):
            return 0
        if isinstance(v, Suc):
            n = 0
            while isinstance(v, Suc):
                v, n = v.pred, n + 1
            return self.interp_value(v, env, tys) + n
        if isinstance(v, Lit):
            return v.name
        if isinstance(v, Const):
            decl = self.sig.term_consts[v.name]
            X = self.interp_type(decl.src)
            return Fn(tuple(_lookup_lifted(decl, x) for x in X.elements))
        if isinstance(v, Pair):
            return (self.interp_value(v.left, env, tys), self.interp_value(v.right, env, tys))
        if isinstance(v, Inl):
            return Left(self.interp_value(v.value, env, tys))
        if isinstance(v, Inr):
            return Right(self.interp_value(v.value, env, tys))
        if isinstance(v, Lam):
            if v.ann is None:
                raise ValueError("the finite backend needs elaborated terms")
            dom = self.interp_type(v.ann)
            tys2 = tys + (v.ann,)
            return Fn(tuple(self.interp_comp(v.body, env + (a,), tys2) for a in dom.elements))
        if isinstance(v, Rec):
            if v.ann is None:
                raise ValueError("the finite backend needs elaborated terms")
            E = self.interp_type(v.ann)
            dom = self.interp_type(v.ann.dom)
            tys2 = tys + (v.ann, v.ann.dom)

            def step(g):
                return Fn(tuple(self.interp_comp(v.body, env + (g, a), tys2) for a in dom.elements))

            fix, count = sh.fixpoint(E, step)
            self.fix_iterations.append(count)
            return fix
        raise TypeError(f"not a value: {v!r}")

    def _domain(self, f: Value, tys: tuple) -> Type:
        if isinstance(f, Var):
            return tys[len(tys) - 1 - f.index].dom
        if isinstance(f, Lam):
            return f.ann
        if isinstance(f, Rec):
            return f.ann.dom
        raise TypeError(f"cannot apply {f!r}")

    # computations
    def interp_comp(self, t: Comp, env: tuple = (), tys: tuple = ()):
        k = t.free
        key = (t, env[len(env) - k:], tys[len(tys) - k:]) if k else t
        hit = self._cache.get(key)
        if hit is None:
            hit = self._comp(t, env, tys)
            self._cache[key] = hit
        return hit

    def _comp(self, t: Comp, env: tuple, tys: tuple):
        if isinstance(t, Ret):
            return sh._eta(self.interp_value(t.value, env, tys))
        if isinstance(t, App):
            a = self.interp_value(t.arg, env, tys)
            if isinstance(t.fun, Const):
                # the constant's own graph is its Kleisli witness
                return _lookup_lifted(self.sig.term_consts[t.fun.name], a)
            f = self.interp_value(t.fun, env, tys)
            dom = self.interp_type(self._domain(t.fun, tys))
            return f.table[dom.index[a]]
        if isinstance(t, Let):
            tys2 = tys + (self.comp_type(t.bound, tys),)
            u = self.interp_comp(t.bound, env, tys)
            return sh._mu(sh.lmap(lambda p: self.interp_comp(t.body, p[0] + (p[1],), tys2),
                                  sh._strength((env, u))))
        if isinstance(t, CaseNat):
            n = self.interp_value(t.scrut, env, tys)
            if n == 0:
                return self.interp_comp(t.if_zero, env, tys)
            return self.interp_comp(t.if_suc, env + (n - 1,), tys + (Nat(),))
        if isinstance(t, CaseSum):
            sty = self.value_type(t.scrut, tys)
            s = self.interp_value(t.scrut, env, tys)
            if isinstance(s, Left):
                return self.interp_comp(t.if_inl, env + (s.value,), tys + (sty.left,))
            return self.interp_comp(t.if_inr, env + (s.value,), tys + (sty.right,))
        if isinstance(t, CaseEmpty):
            raise sh.TheoremViolation("an element of the empty type was reached")
        if isinstance(t, Fst):
            return sh._eta(self.interp_value(t.value, env, tys)[0])
        if isinstance(t, Snd):
            return sh._eta(self.interp_value(t.value, env, tys)[1])
        raise TypeError(f"not a computation: {t!r}")

    def value_type(self, v: Value, tys: tuple) -> Type:
        from .typecheck import typecheck_value
        return typecheck_value([("_", ty) for ty in tys], self.sig, v)

    def comp_type(self, t: Comp, tys: tuple) -> Type:
        from .typecheck import typecheck_comp
        return typecheck_comp([("_", ty) for ty in tys], self.sig, t)

    def morphism_table(self, t: Comp, tys: tuple, cod: Type):
        """Tabulate ``env -> interp_comp(t, env)`` over the context sheaf.

        Returns (context sheaf, lifted codomain, index table)."""
        G = self.context_sheaf(tys)
        L = self.lifted(cod)
        table = [L.index[self.interp_comp(t, env, tys)] for env in G.elements]
        return G, L, table


def _lookup_lifted(decl: TermConstDecl, x):
    w = decl.lookup(x)
    return BOTTOM if w is None else Up(w)


def context_product(S: FiniteSite, sheaves) -> FiniteSheaf:
    """n-ary product whose labels are flat tuples (environments)."""
    sheaves = list(sheaves)
    sizes = [len(X) for X in sheaves]
    n = 1
    for s in sizes:
        n *= s
    sh._check_carrier(n, "context")
    elements = tuple(iproduct(*[X.elements for X in sheaves]))
    positions = list(iproduct(*[range(s) for s in sizes]))

    def flat(ix):
        k = 0
        for i, s in zip(ix, sizes):
            k = k * s + i
        return k

    def leq(a, b):
        return all(X.leq(i, j) for X, i, j in zip(sheaves, positions[a], positions[b]))

    def plot_fn(c):
        npts = S.npoints(c)
        out = []
        for combo in iproduct(*[X.plots(c) for X in sheaves]):
            out.append(tuple(flat(tuple(g[p] for g in combo)) for p in range(npts)))
        return out

    G = FiniteSheaf(S, elements, leq=leq, plot_fn=plot_fn, name="context")
    G.parts = tuple(sheaves)
    G.kind = "context"
    return G


# ---------------------------------------------------------------------------
# standard model: an environment machine with closures, no substitution

@dataclass(frozen=True, eq=False)
class Closure:
    body: Comp
    env: tuple
    recursive: bool

    def __repr__(self):
        return "<closure>"


@dataclass(frozen=True)
class StdResult:
    value: object           # BOTTOM or Up(semantic value)
    reason: str = ""        # "fuel", "undefined" or "" on convergence
    steps: int = 0


_NONE = object()


def _std_value(v: Value, env: tuple):
    if isinstance(v, Var):
        return env[len(env) - 1 - v.index]
    if isinstance(v, ZeroLit):
        return 0
    if isinstance(v, Suc):
        n = 0
        while isinstance(v, Suc):
            v, n = v.pred, n + 1
        return _std_value(v, env) + n
    if isinstance(v, Unit):
        return ()
    if isinstance(v, Lit):
        return v.name
    if isinstance(v, Const):
        return ("const", v.name)
    if isinstance(v, Pair):
        return (_std_value(v.left, env), _std_value(v.right, env))
    if isinstance(v, Inl):
        return Left(_std_value(v.value, env))
    if isinstance(v, Inr):
        return Right(_std_value(v.value, env))
    if isinstance(v, Lam):
        return Closure(v.body, env, False)
    if isinstance(v, Rec):
        return Closure(v.body, env, True)
    raise TypeError(f"not a value: {v!r}")


def denot_eval_standard(t: Comp, sig: Optional[Signature] = None, fuel: int = 10_000) -> StdResult:
    """Evaluate in the standard model.  BOTTOM when fuel runs out or a
    constant is undefined; the reason says which."""
    sig = sig or Signature()
    env: tuple = ()
    stack = []
    steps = 0
    while True:
        if steps >= fuel:
            return StdResult(BOTTOM, "fuel", steps)
        steps += 1
        result = _NONE
        if isinstance(t, Ret):
            result = _std_value(t.value, env)
        elif isinstance(t, Let):
            stack.append((t.body, env))
            t = t.bound
        elif isinstance(t, App):
            f, a = _std_value(t.fun, env), _std_value(t.arg, env)
            if isinstance(f, Closure):
                env = f.env + ((f, a) if f.recursive else (a,))
                t = f.body
            else:
                w = sig.term_consts[f[1]].lookup(a)
                if w is None:
                    return StdResult(BOTTOM, "undefined", steps)
                result = w
        elif isinstance(t, CaseNat):
            n = _std_value(t.scrut, env)
            if n == 0:
                t = t.if_zero
            else:
                env, t = env + (n - 1,), t.if_suc
        elif isinstance(t, CaseSum):
            s = _std_value(t.scrut, env)
            env = env + (s.value,)
            t = t.if_inl if isinstance(s, Left) else t.if_inr
        elif isinstance(t, (Fst, Snd)):
            p = _std_value(t.value, env)
            result = p[0] if isinstance(t, Fst) else p[1]
        else:
            raise TypeError(f"cannot evaluate {t!r}")
        if result is not _NONE:
            if not stack:
                return StdResult(Up(result), "", steps)
            body, benv = stack.pop()
            env, t = benv + (result,), body


def ground_semantics(v: Value):
    """Semantic element of a closed first-order value; both backends agree on it."""
    return _std_value(v, ())
