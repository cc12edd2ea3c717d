"""Executable theorem suites over an exhaustively enumerated corpus.

soundness      evaluation to v implies the denotation is that of ret v
adequacy       a denotation Up(d) implies evaluation converges to a v denoting d
fundamental    every typed subterm denotes a sheaf morphism out of its context
conservativity site homs and partial homs match sheaf homs and Kleisli homs
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import sheaf as sh
from .denot import (
    FiniteBackend, ModelBinding, NatRestriction, denot_eval_standard, ground_semantics,
    load_model,
)
from .enumerate import Enumerator, corpus_hash, describe_pool
from .opsem import Converged, FuelExhausted, eval_comp
from .sheaf import BOTTOM, Up
from .site import FiniteSite, MonoClass, partial_hom_set
from .syntax import (
    Arrow, CaseNat, CaseSum, Comp, Inl, Inr, Lam, Let, Nat, Rec, Ret, Signature,
    Sum, Term, Type, Value, parse_type, pretty, pretty_type,
)
from .typecheck import typecheck_comp, typecheck_value

MAX_EXAMPLES = 20


@dataclass
class TheoremReport:
    theorem: str
    corpus: str = ""
    corpus_hash: str = ""
    total: int = 0
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    skipped: int = 0
    counterexamples: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and not self.inconclusive

    def fail(self, term, expected, got, **extra):
        self.failed += 1
        if len(self.counterexamples) < MAX_EXAMPLES:
            self.counterexamples.append({"term": term, "expected": str(expected), "got": str(got), **extra})

    def merge(self, other: "TheoremReport") -> "TheoremReport":
        out = TheoremReport(self.theorem, self.corpus or other.corpus, self.corpus_hash or other.corpus_hash)
        for f in ("total", "passed", "failed", "vacuous", "skipped"):
            setattr(out, f, getattr(self, f) + getattr(other, f))
        out.counterexamples = (self.counterexamples + other.counterexamples)[:MAX_EXAMPLES]
        out.inconclusive = self.inconclusive + other.inconclusive
        out.notes = list(dict.fromkeys(self.notes + other.notes))
        out.elapsed = self.elapsed + other.elapsed
        return out

    def to_dict(self) -> dict:
        return {"schema": 1, "theorem": self.theorem, "corpus": self.corpus,
                "corpus_hash": self.corpus_hash, "ok": self.ok, "total": self.total,
                "passed": self.passed, "failed": self.failed, "vacuous": self.vacuous,
                "skipped": self.skipped, "inconclusive": self.inconclusive,
                "counterexamples": self.counterexamples, "notes": self.notes,
                "elapsed_s": round(self.elapsed, 3)}

    def format(self) -> str:
        head = (f"{self.theorem}: {'PASS' if self.ok else 'FAIL'}  total={self.total} "
                f"passed={self.passed} failed={self.failed} vacuous={self.vacuous} "
                f"skipped={self.skipped} inconclusive={len(self.inconclusive)}")
        tag = f" [{self.corpus_hash}]" if self.corpus_hash else ""
        lines = [head, f"  corpus: {self.corpus}{tag}"]
        for n in self.notes:
            lines.append(f"  note: {n}")
        for c in self.counterexamples:
            lines.append(f"  counterexample: {c['term']}  expected {c['expected']}  got {c['got']}")
        for c in self.inconclusive[:MAX_EXAMPLES]:
            lines.append(f"  inconclusive (fuel {c['fuel']}): {c['term']}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# corpora

@dataclass
class Corpus:
    model_ref: str
    terms: list                      # (Comp, Type) pairs, closed
    description: str = ""
    hash: str = ""
    sig: Optional[Signature] = None

    def __len__(self):
        return len(self.terms)


REFLEXIVE_POOL = ("alpha", "unit", "empty", "unit + unit", "alpha + unit",
                  "alpha -> alpha", "unit -> alpha", "(alpha -> alpha) -> alpha")
STANDARD_POOL = ("nat", "unit", "empty", "unit + unit", "nat -> nat")
DEFAULT_POOLS = {"reflexive": REFLEXIVE_POOL, "standard": STANDARD_POOL,
                 "kpoint": ("num", "unit", "unit + unit", "num -> num")}


def build_corpus(model_ref: str, max_size: int, targets: Optional[Iterable[str]] = None,
                 pool: Optional[Iterable[str]] = None, nat: bool = True) -> Corpus:
    """All closed terms up to ``max_size`` at the target types, size-major."""
    binding = load_model(model_ref)
    sig = binding.signature()
    key = binding.name if binding.name in DEFAULT_POOLS else "standard"
    pool_t = [parse_type(p, sig) for p in (pool or DEFAULT_POOLS[key])]
    if targets is None:
        targets = [n for n in sig.type_consts] + ["nat"]
    tys = [parse_type(t, sig) for t in targets]
    E = Enumerator(sig, pool_t, nat)
    terms = []
    for n in range(1, max_size + 1):
        for ty in tys:
            terms.extend((t, ty) for t in E.comps((), n).get(ty, ()))
    desc = (f"closed terms of size <= {max_size} at {', '.join(pretty_type(t) for t in tys)} "
            f"over {binding.name}; annotations from {{{describe_pool(pool_t)}}}")
    return Corpus(model_ref, terms, desc, corpus_hash((t for t, _ in terms), sig), sig)


def _new_report(name: str, corpus: Corpus) -> TheoremReport:
    return TheoremReport(name, corpus.description, corpus.hash)


def _partitioned(worker, corpus: Corpus, jobs: int, *args) -> TheoremReport:
    """Run ``worker(corpus, *args)`` on slices in parallel and merge."""
    t0 = time.perf_counter()
    if jobs <= 1 or len(corpus) < 2 * jobs:
        rep = worker(corpus, *args)
    else:
        import multiprocessing
        chunks = [Corpus(corpus.model_ref, corpus.terms[i::jobs], corpus.description, corpus.hash)
                  for i in range(jobs)]
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(jobs, mp_context=ctx) as ex:
            parts = list(ex.map(worker, chunks, *[[a] * jobs for a in args]))
        rep = parts[0]
        for p in parts[1:]:
            rep = rep.merge(p)
    rep.elapsed = time.perf_counter() - t0
    return rep


def _semantic(v: Value):
    return ground_semantics(v)


# ---------------------------------------------------------------------------
# soundness

def check_soundness(corpus: Corpus, fuel: int = 10_000, backend: str = "finite",
                    jobs: int = 1) -> TheoremReport:
    return _partitioned(_soundness, corpus, jobs, fuel, backend)


def _soundness(corpus: Corpus, fuel: int, backend: str) -> TheoremReport:
    binding = load_model(corpus.model_ref)
    sig = binding.signature()
    F = FiniteBackend(binding, sig)
    rep = _new_report("soundness", corpus)
    routed = 0
    for t, ty in corpus.terms:
        rep.total += 1
        out = eval_comp(t, sig, fuel)
        if not isinstance(out, Converged):
            rep.vacuous += 1
            continue
        expected = Up(_semantic(out.value))
        try:
            if backend == "finite":
                try:
                    got = F.interp_comp(t)
                    lhs = F.interp_comp(Ret(out.value))
                    if lhs != expected:
                        rep.fail(pretty(t, sig), expected, lhs, reason="ret v denotes the wrong element")
                        continue
                except NatRestriction:
                    routed += 1
                    got = denot_eval_standard(t, sig, fuel).value
            else:
                got = denot_eval_standard(t, sig, fuel).value
        except Exception as e:    # a crash is a counterexample, not a pass
            rep.fail(pretty(t, sig), expected, f"error: {type(e).__name__}: {e}")
            continue
        if got == expected:
            rep.passed += 1
        else:
            rep.fail(pretty(t, sig), expected, got)
    if routed:
        rep.notes.append(f"{routed} terms need nat under a type former; checked in the standard backend")
    return rep


# ---------------------------------------------------------------------------
# adequacy

def _loops(t, sig, fuel) -> bool:
    """Evaluation provably diverges: a repeated machine state was seen."""
    out = eval_comp(t, sig, fuel)
    return isinstance(out, FuelExhausted) and out.looping


def check_adequacy(corpus: Corpus, fuel: int = 10_000, jobs: int = 1) -> TheoremReport:
    return _partitioned(_adequacy, corpus, jobs, fuel)


def _adequacy(corpus: Corpus, fuel: int) -> TheoremReport:
    binding = load_model(corpus.model_ref)
    sig = binding.signature()
    F = FiniteBackend(binding, sig)
    rep = _new_report("adequacy", corpus)
    routed = fuel_bottoms = 0
    for t, ty in corpus.terms:
        rep.total += 1
        starved = False
        try:
            try:
                d = F.interp_comp(t)
            except NatRestriction:
                routed += 1
                res = denot_eval_standard(t, sig, fuel)
                d, starved = res.value, res.reason == "fuel"
        except Exception as e:
            rep.fail(pretty(t, sig), "a denotation", f"error: {type(e).__name__}: {e}")
            continue
        if starved and not _loops(t, sig, fuel):
            # bottom only up to fuel: counted vacuous, but reported
            fuel_bottoms += 1
        if d is BOTTOM:
            rep.vacuous += 1
            continue
        out = eval_comp(t, sig, fuel)
        if isinstance(out, Converged):
            if Up(_semantic(out.value)) == d:
                rep.passed += 1
            else:
                rep.fail(pretty(t, sig), d, out)
        elif isinstance(out, FuelExhausted) and not out.looping:
            rep.inconclusive.append({"term": pretty(t, sig), "fuel": fuel, "denotation": str(d)})
        else:
            rep.fail(pretty(t, sig), d, out)
    if routed:
        rep.notes.append(f"{routed} terms need nat under a type former; denoted by the standard backend")
    if fuel_bottoms:
        rep.notes.append(f"{fuel_bottoms} of those denote bottom only up to fuel {fuel} "
                         "(divergence not proved by loop detection)")
    return rep


# ---------------------------------------------------------------------------
# fundamental property

def typed_subterms(t: Term, sig: Signature, ctx: tuple = ()):
    """Yield (subterm, context types, type) for every node of a typed term."""
    named = [("_", c) for c in ctx]
    ty = (typecheck_comp if isinstance(t, Comp) else typecheck_value)(named, sig, t)
    yield t, ctx, ty
    if isinstance(t, Lam):
        yield from typed_subterms(t.body, sig, ctx + (t.ann,))
    elif isinstance(t, Rec):
        yield from typed_subterms(t.body, sig, ctx + (t.ann, t.ann.dom))
    elif isinstance(t, Let):
        yield from typed_subterms(t.bound, sig, ctx)
        bty = typecheck_comp(named, sig, t.bound)
        yield from typed_subterms(t.body, sig, ctx + (bty,))
    elif isinstance(t, CaseNat):
        yield from typed_subterms(t.scrut, sig, ctx)
        yield from typed_subterms(t.if_zero, sig, ctx)
        yield from typed_subterms(t.if_suc, sig, ctx + (Nat(),))
    elif isinstance(t, CaseSum):
        sty = typecheck_value(named, sig, t.scrut)
        yield from typed_subterms(t.scrut, sig, ctx)
        yield from typed_subterms(t.if_inl, sig, ctx + (sty.left,))
        yield from typed_subterms(t.if_inr, sig, ctx + (sty.right,))
    else:
        for f in t._fields:
            c = getattr(t, f)
            if isinstance(c, Term):
                yield from typed_subterms(c, sig, ctx)


def _has_nat(ty: Type) -> bool:
    if isinstance(ty, Nat):
        return True
    return any(_has_nat(getattr(ty, f)) for f in ("left", "right", "dom", "cod") if hasattr(ty, f))


def subterm_is_morphism(F: FiniteBackend, s: Term, ctx: tuple, ty: Type) -> Optional[str]:
    """None when the interpretation of ``ctx |- s : ty`` is a sheaf morphism."""
    G = F.context_sheaf(ctx)
    if isinstance(s, Comp):
        L = F.lifted(ty)
        table = [L.index[F.interp_comp(s, env, ctx)] for env in G.elements]
        return sh.is_morphism(G, L, table)
    X = F.interp_type(ty)
    table = []
    for env in G.elements:
        x = F.interp_value(s, env, ctx)
        if x not in X.index:
            return f"value {x!r} is not an element of the carrier of {pretty_type(ty)}"
        table.append(X.index[x])
    return sh.is_morphism(G, X, table)


def check_fundamental(corpus: Corpus, jobs: int = 1) -> TheoremReport:
    return _partitioned(_fundamental, corpus, jobs)


def _fundamental(corpus: Corpus) -> TheoremReport:
    binding = load_model(corpus.model_ref)
    sig = binding.signature()
    F = FiniteBackend(binding, sig)
    rep = _new_report("fundamental", corpus)
    seen: dict = {}
    skipped_sub = checked_sub = 0
    for t, _ in corpus.terms:
        rep.total += 1
        bad = None
        any_checked = False
        for s, ctx, ty in typed_subterms(t, sig):
            if any(_has_nat(c) for c in ctx) or _has_nat(ty):
                skipped_sub += 1
                continue
            key = (s, ctx)
            if key not in seen:
                try:
                    seen[key] = subterm_is_morphism(F, s, ctx, ty)
                except (NatRestriction, sh.ResourceError) as e:
                    seen[key] = ("skip", str(e))
                except Exception as e:
                    seen[key] = f"error: {type(e).__name__}: {e}"
                checked_sub += 1
            r = seen[key]
            if isinstance(r, tuple):
                skipped_sub += 1
                continue
            any_checked = True
            if r is not None:
                bad = (s, ctx, ty, r)
                break
        if bad is not None:
            s, ctx, ty, r = bad
            names = tuple(f"x{i}" for i in range(len(ctx)))
            rep.fail(pretty(t, sig), "a sheaf morphism", r,
                     subterm=pretty(s, sig, scope=names),
                     context=[pretty_type(c) for c in ctx], type=pretty_type(ty))
        elif any_checked:
            rep.passed += 1
        else:
            rep.skipped += 1
    rep.notes.append(f"{checked_sub} distinct typed subterms tabulated; "
                     f"{skipped_sub} subterm occurrences skipped (nat in context or type)")
    return rep


# ---------------------------------------------------------------------------
# conservativity

def check_conservativity(S: FiniteSite, M: Optional[MonoClass] = None) -> TheoremReport:
    t0 = time.perf_counter()
    M = M or MonoClass.of(S)
    rep = TheoremReport("conservativity", f"object pairs of site {S.name}")
    try:
        ys = {c: sh.yoneda_sheaf(S, c) for c in S.objects}
    except sh.NotSubcanonical as e:
        rep.notes.append(f"not subcanonical: {e}")
        rep.skipped += 1
        rep.elapsed = time.perf_counter() - t0
        return rep
    lifts = {d: sh.lift(ys[d], M) for d in S.objects}
    for c in S.objects:
        for d in S.objects:
            rep.total += 1
            Yc, Yd, LYd = ys[c], ys[d], lifts[d]
            pair = f"{c} -> {d}"
            homs = S.homs(c, d)
            H = set(sh.hom_set(Yc, Yd))
            images = [m.fn for m in homs]
            if len(set(images)) != len(images) or not set(images) <= H or len(H) != len(homs):
                rep.fail(pair, f"{len(homs)} site maps, injectively", f"{len(H)} sheaf maps")
                continue
            P = partial_hom_set(S, c, d, M)
            K = set(sh.hom_set(Yc, LYd))
            tables = set()
            for graph in P:
                gd = dict(graph)
                tables.add(tuple(LYd.index[Up(Yd.elements[gd[p]])] if p in gd else LYd.index[BOTTOM]
                                 for p in range(S.npoints(c))))
            if len(tables) != len(P) or not tables <= K or len(K) != len(P):
                rep.fail(pair, f"{len(P)} partial maps, injectively", f"{len(K)} Kleisli maps")
                continue
            rep.passed += 1
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# release configuration

RELEASE_SIZE = 7
RELEASE_FUEL = 10_000


def release_corpora(max_size: int = RELEASE_SIZE) -> dict[str, Corpus]:
    return {"reflexive": build_corpus("builtin:reflexive", max_size, ["alpha", "nat"]),
            "standard": build_corpus("builtin:standard", max_size, ["nat"])}


# ---------------------------------------------------------------------------
# hand-written programs: denotation against evaluation at every input

def reify(ty: Type, d) -> Value:
    """The closed value denoting element ``d`` of a first-order type."""
    from .syntax import Lit, One, Pair, Prod, TyConst, Unit, numeral
    from .sheaf import Left, Right
    if isinstance(ty, One):
        return Unit()
    if isinstance(ty, TyConst):
        return Lit(str(d), ty.name)
    if isinstance(ty, Nat):
        return numeral(d)
    if isinstance(ty, Prod):
        return Pair(reify(ty.left, d[0]), reify(ty.right, d[1]))
    if isinstance(ty, Sum):
        if isinstance(d, Left):
            return Inl(reify(ty.left, d.value), ty)
        if isinstance(d, Right):
            return Inr(reify(ty.right, d.value), ty)
    raise TypeError(f"cannot reify {d!r} at {pretty_type(ty)}")


def curried_args(ty: Type) -> tuple[list[Type], Type]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.dom)
        ty = ty.cod
    return args, ty


def applied(body: Comp, args: list[Value]) -> Comp:
    """``body`` applied to closed arguments one at a time through lets."""
    from .syntax import App, Var
    t = body
    for a in args:
        t = Let(t, App(Var(0, "g"), a), "g")
    return t


def check_program(binding: ModelBinding, program, fuel: int = 10_000,
                  names: Optional[Iterable[str]] = None) -> TheoremReport:
    """Every definition, at every tuple of inputs drawn from the carriers of
    its argument types, denotes exactly what evaluation produces."""
    import itertools
    from .opsem import ConstUndefined
    from .typecheck import elaborate_definition
    t0 = time.perf_counter()
    sig = program.signature
    rep = TheoremReport("programs", f"{len(program.defs)} definitions over {binding.name}")
    problems = binding.compatibility(sig)
    if problems:
        rep.notes.extend(problems)
        rep.failed += len(problems)
        return rep
    F = FiniteBackend(binding, sig)
    wanted = set(names) if names is not None else None
    for d in program.defs:
        if wanted is not None and d.name not in wanted:
            continue
        ty, body = elaborate_definition(sig, d)
        arg_tys, res_ty = curried_args(ty)
        carriers = [F.interp_type(a).elements for a in arg_tys]
        for point in itertools.product(*carriers):
            rep.total += 1
            t = applied(body, [reify(a, x) for a, x in zip(arg_tys, point)])
            label = f"{d.name} {' '.join(map(str, point))}".strip()
            try:
                den = F.interp_comp(t)
            except Exception as e:
                rep.fail(label, "a denotation", f"error: {type(e).__name__}: {e}")
                continue
            out = eval_comp(t, sig, fuel)
            if isinstance(out, Converged):
                expected = Up(F.interp_value(out.value))
            elif isinstance(out, ConstUndefined) or (isinstance(out, FuelExhausted) and out.looping):
                expected = BOTTOM
            elif isinstance(out, FuelExhausted) and den is BOTTOM:
                rep.vacuous += 1
                continue
            else:
                rep.fail(label, den, out)
                continue
            if den == expected:
                rep.passed += 1
            else:
                rep.fail(label, expected, den)
    rep.elapsed = time.perf_counter() - t0
    return rep
