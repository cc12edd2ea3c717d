"""Categorical laws checked exhaustively over a pool of small sheaves.

Monad laws for the lifting, strength laws, the exponential universal property
(currying is a bijection of hom sets) and leastness of Kleene fixpoints.
"""
from __future__ import annotations

import itertools
import time
from importlib import resources
from typing import Optional

from . import kernels
from . import sheaf as sh
from .config import ResourceError
from .report import Report
from .sheaf import BOTTOM, Fn, FiniteSheaf, SheafMorphism, Up
from .site import FiniteSite, MonoClass, builtin_sites

MAX_CARRIER = 4


def _shipped(site_name: str, S: FiniteSite) -> list[FiniteSheaf]:
    out = []
    folder = resources.files("pcfv") / "data" / "sheaves"
    for entry in sorted(folder.iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".json"):
            continue
        import json
        data = json.loads(entry.read_text())
        ref = data.get("site", "")
        if ref in (f"builtin:{site_name}", f"builtin:{site_name}3"):
            out.append(sh.sheaf_from_json(data, site=S, name=entry.name[:-5]))
    return out


def sheaf_pool(site_name: str, S: Optional[FiniteSite] = None,
               M: Optional[MonoClass] = None, limit: int = MAX_CARRIER) -> list[FiniteSheaf]:
    """Sheaves with at most ``limit`` elements: structural ones, representables,
    the shipped examples on this site and small constructions from them."""
    S = S or builtin_sites()[site_name]
    M = M or MonoClass.of(S)
    one, zero = sh.terminal_sheaf(S), sh.initial_sheaf(S)
    one.name, zero.name = "1", "0"
    base = [zero, one]
    for c in S.objects:
        if S.npoints(c) > 1:
            base.append(sh.yoneda_sheaf(S, c))
    base += _shipped(site_name, S)
    pool = list(base)
    candidates = [sh.lift(one, M), sh.coproduct(one, one)]
    for X in base[1:]:
        if len(X) + 1 <= limit:
            candidates.append(sh.lift(X, M))
    L1 = candidates[0]
    candidates += [sh.lift(L1, M), sh.product(L1, L1), sh.coproduct(L1, one)]
    names = {X.name for X in pool}
    for X in candidates:
        if len(X) <= limit and X.name not in names:
            names.add(X.name)
            pool.append(X)
    return pool


def _mor(X, Y, fn) -> SheafMorphism:
    return SheafMorphism.from_function(X, Y, fn)


def _record(rep: Report, name: str, failures: list, count: int):
    rep.add(name, not failures, f"{count} instances" if not failures else failures[0][1],
            counterexample=failures[0][0] if failures else None)


# ---------------------------------------------------------------------------
# monad laws

def monad_law_failures(X: FiniteSheaf, M: MonoClass) -> list:
    LX = sh.lift(X, M)
    LLX = sh.lift(LX, M)
    LLLX = sh.lift(LLX, M)
    fails = []
    for A, B, f in [(X, LX, sh._eta), (LX, LLX, sh._eta), (LLX, LX, sh._mu)]:
        try:
            m = _mor(A, B, f)
        except KeyError as e:
            fails.append((X.name, f"structure map leaves the carrier at {e}"))
            continue
        reason = sh.is_morphism(A, B, m.table)
        if reason:
            fails.append((X.name, f"structure map {A.name} -> {B.name} is not a morphism: {reason}"))
    for u in LX.elements:
        try:
            if sh._mu(sh._eta(u)) != u:
                fails.append(((X.name, repr(u)), "mu . eta_L != id"))
            if sh._mu(sh.lmap(sh._eta, u)) != u:
                fails.append(((X.name, repr(u)), "mu . L eta != id"))
        except Exception as e:
            fails.append(((X.name, repr(u)), f"error {e}"))
    for w in LLLX.elements:
        try:
            if sh._mu(sh._mu(w)) != sh._mu(sh.lmap(sh._mu, w)):
                fails.append(((X.name, repr(w)), "mu . mu_L != mu . L mu"))
        except Exception as e:
            fails.append(((X.name, repr(w)), f"error {e}"))
    return fails


# ---------------------------------------------------------------------------
# strength

def strength_failures(X: FiniteSheaf, Y: FiniteSheaf, M: MonoClass, Z: Optional[FiniteSheaf] = None) -> list:
    fails = []
    LY = sh.lift(Y, M)
    XLY = sh.product(X, LY)
    LXY = sh.lift(sh.product(X, Y), M)
    try:
        st = _mor(XLY, LXY, sh._strength)
        reason = sh.is_morphism(XLY, LXY, st.table)
        if reason:
            fails.append(((X.name, Y.name), f"strength is not a morphism: {reason}"))
    except KeyError as e:
        fails.append(((X.name, Y.name), f"strength leaves the carrier at {e}"))
    for x in X.elements:
        for y in Y.elements:
            try:
                if sh._strength((x, sh._eta(y))) != sh._eta((x, y)):
                    fails.append(((x, y), "st . (id x eta) != eta"))
            except Exception as e:
                fails.append(((x, y), f"error {e}"))
        for u in sh.lift(LY, M).elements:
            try:
                lhs = sh._strength((x, sh._mu(u)))
                rhs = sh._mu(sh.lmap(sh._strength, sh._strength((x, u))))
                if lhs != rhs:
                    fails.append(((x, repr(u)), "st . (id x mu) != mu . L st . st"))
            except Exception as e:
                fails.append(((x, repr(u)), f"error {e}"))
    for u in LY.elements:
        try:
            if sh.lmap(lambda p: p[1], sh._strength(((), u))) != u:
                fails.append((repr(u), "L snd . st != snd on 1 x LY"))
        except Exception as e:
            fails.append((repr(u), f"error {e}"))
    if Z is not None:
        for x in X.elements:
            for y in Y.elements:
                for w in sh.lift(Z, M).elements:
                    try:
                        lhs = sh.lmap(lambda p: (p[0][0], (p[0][1], p[1])), sh._strength(((x, y), w)))
                        rhs = sh._strength((x, sh._strength((y, w))))
                        if lhs != rhs:
                            fails.append(((x, y, repr(w)), "strength is not associative"))
                    except Exception as e:
                        fails.append(((x, y, repr(w)), f"error {e}"))
    return fails


# ---------------------------------------------------------------------------
# exponentials

EXPLICIT_LIMIT = 1 << 12


def curry_counts(X: FiniteSheaf, Y: FiniteSheaf, Z: FiniteSheaf, E: FiniteSheaf) -> tuple[int, int, int]:
    """(|hom(X*Y, Z)|, |hom(X, E)|, |both|) where "both" counts maps X -> E that
    are morphisms and whose uncurried form is a morphism X*Y -> Z.

    Currying is injective on all functions, so it restricts to a bijection
    exactly when the three numbers agree.  Nothing is materialized.
    """
    n_left = sh.hom_count(sh.product(X, Y), Z)
    n_right = sh.hom_count(X, E)
    ny, nE = len(Y), len(E)
    # each exponential element carries its Z-table followed by its own index
    tables = [tuple(t) + (e,) for e, t in enumerate(E.tables)]
    sets, cons = [], []
    S = X.site
    for c in S.objects:
        sid = None
        for g in X.plots(c):
            if len(set(g)) > 1:
                if sid is None:
                    sets.append(E.plots(c))
                    sid = len(sets) - 1
                cons.append((g, (ny,) * len(g), sid))
        zid = None
        for g in X.plots(c):
            for h in Y.plots(c):
                if len(set(g)) <= 1 and len(set(h)) <= 1:
                    continue
                if zid is None:
                    sets.append(Z.plots(c))
                    zid = len(sets) - 1
                cons.append((g, h, zid))
    le_id = len(sets)
    sets.append({(a, b) for a in range(len(Z)) for b in range(len(Z)) if Z.leq(a, b)})
    for x in range(len(X)):
        for x2 in X.up(x):
            for y in range(ny):
                for y2 in Y.up(y):
                    if (x, y) != (x2, y2):
                        cons.append(((x, x2), (y, y2), le_id))
    n_both = kernels.count(len(X), nE, tables, X.strict_pairs(), E.le_flat(), cons, sets,
                           n_val=max(len(Z), nE, 1))
    return n_left, n_right, n_both


def ump_failures(X: FiniteSheaf, Y: FiniteSheaf, Z: FiniteSheaf) -> list:
    """Currying hom(X*Y, Z) -> hom(X, Y => Z) must be a bijection."""
    E = sh.exponential(Y, Z)
    names = (X.name, Y.name, Z.name)
    n_left, n_right, n_both = curry_counts(X, Y, Z, E)
    if not n_left == n_right == n_both:
        return [(names, f"|hom(X*Y,Z)|={n_left}, |hom(X,Y=>Z)|={n_right}, "
                        f"maps in both={n_both}")]
    if n_left <= EXPLICIT_LIMIT:
        # small instances: also curry every map explicitly
        ny = len(Y)
        right = set(sh.hom_set(X, E, EXPLICIT_LIMIT))
        images = set()
        for t in sh.hom_set(sh.product(X, Y), Z, EXPLICIT_LIMIT):
            f = [Fn(tuple(Z.elements[t[i * ny + j]] for j in range(ny))) for i in range(len(X))]
            if any(g not in E.index for g in f):
                return [(names, "a curried map leaves the exponential carrier")]
            images.add(tuple(E.index[g] for g in f))
        if images != right:
            return [(names, f"currying hits {len(images & right)} of {len(right)} maps")]
    # evaluation is a morphism (Y => Z) * Y -> Z
    EY = sh.product(E, Y)
    ev = [Z.index[f.table[Y.index[y]]] for f, y in EY.elements]
    reason = sh.is_morphism(EY, Z, ev)
    if reason:
        return [((Y.name, Z.name), f"evaluation is not a morphism: {reason}")]
    return []


# ---------------------------------------------------------------------------
# least fixpoints

SMALL_EXPONENTIAL = 8
CANDIDATE_BUDGET = 600


def _functionals(E: FiniteSheaf, X: FiniteSheaf, cap: int = 512):
    """Endomorphisms of E = X => LY: all of them when E is small and they are
    few, else a family of recursion-shaped ones
    phi(f)(x) = b(x) if b(x) is defined else f(k(x))."""
    if len(E) <= SMALL_EXPONENTIAL:
        try:
            tables = sh.hom_set(E, E, cap)
            for t in tables:
                yield "endomorphism", (lambda f, t=t: E.elements[t[E.index[f]]])
            return
        except ResourceError:
            pass
    ks = sh.hom_set(X, X, cap)
    # evenly spaced base maps keep the family within a fixed budget
    stride = max(1, len(E) * len(ks) // CANDIDATE_BUDGET)
    for b in E.elements[::stride]:
        for k in ks:
            def phi(f, b=b, k=k):
                return Fn(tuple(b.table[i] if b.table[i] is not BOTTOM else f.table[k[i]]
                                for i in range(len(X))))
            yield "recursion-shaped", phi


FUNCTIONALS_PER_PAIR = 256


def fixpoint_failures(X: FiniteSheaf, Y: FiniteSheaf, M: MonoClass) -> tuple[list, int]:
    E = sh.exponential(X, sh.lift(Y, M))
    fails, seen = [], set()
    for kind, phi in _functionals(E, X):
        images = [phi(f) for f in E.elements]
        if any(g not in E.index for g in images):
            continue
        table = tuple(E.index[g] for g in images)
        if table in seen:
            continue
        if kind != "endomorphism" and sh.is_morphism(E, E, table) is not None:
            continue
        seen.add(table)
        try:
            fix, _ = sh.fixpoint(E, lambda f: E.elements[table[E.index[f]]])
        except Exception as e:
            fails.append(((X.name, Y.name), f"iteration failed: {e}"))
            continue
        i = E.index[fix]
        fixed = [j for j in range(len(E)) if table[j] == j]
        if i not in fixed:
            fails.append(((X.name, Y.name, repr(fix)), "Kleene result is not a fixed point"))
        elif not all(E.leq(i, j) for j in fixed):
            fails.append(((X.name, Y.name, repr(fix)), "Kleene result is not the least fixed point"))
        if len(seen) >= FUNCTIONALS_PER_PAIR:
            break
    return fails, len(seen)


# ---------------------------------------------------------------------------

def check_laws(site_name: str, triples: bool = True) -> Report:
    t0 = time.perf_counter()
    S = builtin_sites()[site_name]
    M = MonoClass.of(S)
    pool = sheaf_pool(site_name, S, M)
    rep = Report(f"categorical laws on {site_name} ({len(pool)} sheaves: "
                 f"{', '.join(X.name for X in pool)})")
    fails = [f for X in pool for f in monad_law_failures(X, M)]
    _record(rep, "monad laws", fails, len(pool))
    fails, n = [], 0
    for X, Y in itertools.product(pool, repeat=2):
        n += 1
        fails += strength_failures(X, Y, M)
    if triples:
        for X, Y, Z in itertools.product(pool, repeat=3):
            n += 1
            fails += strength_failures(X, Y, M, Z) if not fails else []
    _record(rep, "strength laws", fails, n)
    fails, n = [], 0
    for X, Y, Z in itertools.product(pool, repeat=3) if triples else ((X, Y, Y) for X, Y in itertools.product(pool, repeat=2)):
        n += 1
        fails += ump_failures(X, Y, Z)
    _record(rep, "exponential universal property", fails, n)
    fails, n = [], 0
    for X, Y in itertools.product(pool, repeat=2):
        f, k = fixpoint_failures(X, Y, M)
        fails += f
        n += k
    _record(rep, "fixpoints are least", fails, n)
    rep.elapsed = time.perf_counter() - t0  # type: ignore[attr-defined]
    return rep
