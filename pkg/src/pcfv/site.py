"""Finite concrete sites, classes of admissible monos, Sub_M posets and partial maps.

A site is stored concretely: every morphism carries its point function as a
tuple ``fn`` with ``fn[i]`` the index of the image of source point ``i``.
Composition is therefore forced to be composition of point functions, and
the validators check that the morphism set is closed under it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .report import Report


class SiteFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    name: str
    src: str
    tgt: str
    fn: tuple[int, ...]

    def __repr__(self):
        return f"{self.name}:{self.src}->{self.tgt}{list(self.fn)}"


Family = frozenset  # of morphism names


class FiniteSite:
    def __init__(self, objects: dict[str, tuple[str, ...]], morphisms: Iterable[Morphism],
                 coverage: dict[str, list[Family]], monos: Optional[dict[str, Iterable[str]]] = None,
                 zero: str = "0", star: str = "star", name: str = "site"):
        self.name = name
        self.objects = {c: tuple(p) for c, p in objects.items()}
        self.zero = zero
        self.star = star
        self.morphisms: list[Morphism] = list(morphisms)
        self.by_name: dict[str, Morphism] = {}
        self.duplicate_names: list[str] = []
        for m in self.morphisms:
            if m.name in self.by_name:
                self.duplicate_names.append(m.name)
            self.by_name[m.name] = m
        self.hom: dict[tuple[str, str], list[Morphism]] = {}
        self.by_key: dict[tuple, Morphism] = {}
        for m in self.morphisms:
            self.hom.setdefault((m.src, m.tgt), []).append(m)
            self.by_key.setdefault((m.src, m.tgt, m.fn), m)
        self.coverage = {c: [frozenset(F) for F in fams] for c, fams in coverage.items()}
        self.monos = None if monos is None else {c: frozenset(ms) for c, ms in monos.items()}
        self.notes: list[str] = []

    # basic queries
    def npoints(self, c: str) -> int:
        return len(self.objects[c])

    def homs(self, src: str, tgt: str) -> list[Morphism]:
        return self.hom.get((src, tgt), [])

    def into(self, c: str) -> list[Morphism]:
        return [m for m in self.morphisms if m.tgt == c]

    def compose(self, g: Morphism, f: Morphism) -> Optional[Morphism]:
        """g after f, looked up by point function; None if absent."""
        fn = tuple(g.fn[i] for i in f.fn)
        return self.by_key.get((f.src, g.tgt, fn))

    def identity(self, c: str) -> Optional[Morphism]:
        return self.by_key.get((c, c, tuple(range(self.npoints(c)))))

    def zero_map(self, c: str) -> Optional[Morphism]:
        return self.by_key.get((self.zero, c, ()))

    def families(self, c: str) -> list[Family]:
        return self.coverage.get(c, [])

    def mono_set(self, c: str) -> frozenset:
        return (self.monos or {}).get(c, frozenset())

    def image(self, m: Morphism) -> frozenset:
        return frozenset(m.fn)

    def point_maps(self, c: str) -> list[Morphism]:
        return self.homs(self.star, c)

    # serialization
    @classmethod
    def from_json(cls, data: dict, name: str = "site") -> "FiniteSite":
        try:
            objects = {o["name"]: tuple(str(p) for p in o["points"]) for o in data["objects"]}
            morphs = []
            for m in data["morphisms"]:
                src, tgt = m["src"], m["tgt"]
                if src not in objects or tgt not in objects:
                    raise SiteFormatError(f"morphism {m['name']!r} has unknown endpoint")
                sp, tp = objects[src], objects[tgt]
                mp = {str(k): str(v) for k, v in m.get("map", {}).items()}
                if set(mp) != set(sp):
                    raise SiteFormatError(f"morphism {m['name']!r}: map is not total on |{src}|")
                if not set(mp.values()) <= set(tp):
                    raise SiteFormatError(f"morphism {m['name']!r}: map leaves |{tgt}|")
                morphs.append(Morphism(m["name"], src, tgt, tuple(tp.index(mp[p]) for p in sp)))
            coverage = {c: [frozenset(F) for F in fams]
                        for c, fams in data.get("coverage", {}).items()}
            monos = data.get("monos")
        except (KeyError, TypeError) as e:
            raise SiteFormatError(f"malformed site file: missing {e}") from None
        return cls(objects, morphs, coverage, monos, data.get("zero", "0"),
                   data.get("star", "star"), data.get("name", name))

    @classmethod
    def load(cls, path) -> "FiniteSite":
        path = Path(path)
        with open(path) as fh:
            return cls.from_json(json.load(fh), path.stem)

    def to_json(self) -> dict:
        out = {
            "name": self.name, "zero": self.zero, "star": self.star,
            "objects": [{"name": c, "points": list(p)} for c, p in self.objects.items()],
            "morphisms": [
                {"name": m.name, "src": m.src, "tgt": m.tgt,
                 "map": {self.objects[m.src][i]: self.objects[m.tgt][j] for i, j in enumerate(m.fn)}}
                for m in self.morphisms],
            "coverage": {c: [sorted(F) for F in fams] for c, fams in self.coverage.items()},
        }
        if self.monos is not None:
            out["monos"] = {c: sorted(ms) for c, ms in self.monos.items()}
        return out


# ---------------------------------------------------------------------------
# helpers on families

def _factors_through(S: FiniteSite, g: Morphism, f: Morphism) -> Optional[Morphism]:
    """Some k with f∘k = g, if one exists."""
    for k in S.homs(g.src, f.src):
        if tuple(f.fn[i] for i in k.fn) == g.fn:
            return k
    return None


def _refines(S: FiniteSite, fam: Iterable[Morphism], onto: Iterable[Morphism]) -> bool:
    onto = list(onto)
    return all(any(_factors_through(S, g, f) for f in onto) for g in fam)


def _family(S: FiniteSite, F: Family) -> list[Morphism]:
    return [S.by_name[n] for n in sorted(F)]


def is_iso(S: FiniteSite, f: Morphism) -> bool:
    for g in S.homs(f.tgt, f.src):
        if S.compose(g, f) == S.identity(f.src) and S.compose(f, g) == S.identity(f.tgt):
            return True
    return False


# ---------------------------------------------------------------------------
# site validation

def _structure(S: FiniteSite) -> list[str]:
    problems = []
    if S.zero not in S.objects:
        problems.append(f"initial object {S.zero!r} missing")
    elif S.npoints(S.zero) != 0:
        problems.append(f"|{S.zero}| must be empty")
    if S.star not in S.objects:
        problems.append(f"terminal object {S.star!r} missing")
    elif S.npoints(S.star) != 1:
        problems.append(f"|{S.star}| must be a singleton")
    if S.duplicate_names:
        problems.append(f"duplicate morphism names {sorted(set(S.duplicate_names))}")
    for m in S.morphisms:
        if m.src not in S.objects or m.tgt not in S.objects:
            problems.append(f"morphism {m.name} has unknown endpoint")
        elif len(m.fn) != S.npoints(m.src) or any(not 0 <= j < S.npoints(m.tgt) for j in m.fn):
            problems.append(f"morphism {m.name} point function is not |{m.src}| -> |{m.tgt}|")
    for c, fams in S.coverage.items():
        if c not in S.objects:
            problems.append(f"coverage on unknown object {c}")
            continue
        for F in fams:
            for n in F:
                if n not in S.by_name:
                    problems.append(f"covering family on {c} names unknown morphism {n}")
                elif S.by_name[n].tgt != c:
                    problems.append(f"covering family on {c} contains {n} with codomain {S.by_name[n].tgt}")
    if S.monos is not None:
        for c, ms in S.monos.items():
            for n in ms:
                if n not in S.by_name or S.by_name[n].tgt != c:
                    problems.append(f"mono class on {c} names {n}, not a morphism into {c}")
    return problems


def validate_site(S: FiniteSite) -> Report:
    rep = Report(f"site {S.name}")
    problems = _structure(S)
    rep.add("structure", not problems, "; ".join(problems))
    if problems:
        return rep

    missing = [c for c in S.objects if S.identity(c) is None]
    rep.add("identities", not missing, f"no identity on {missing}" if missing else "",
            counterexample=missing or None)
    if missing:
        return rep   # the remaining checks presuppose identities

    witnesses, bad = {}, None
    for f in S.morphisms:
        for g in S.morphisms:
            if f.tgt != g.src:
                continue
            h = S.compose(g, f)
            if h is None:
                bad = bad or (g.name, f.name)
            else:
                witnesses[(g.name, f.name)] = h.name
    rep.add("composition", bad is None,
            f"{len(witnesses)} composites recorded" if bad is None
            else f"{bad[0]} after {bad[1]} is not a morphism", counterexample=bad)

    dup = None
    for (a, b), ms in S.hom.items():
        fns = [m.fn for m in ms]
        if len(set(fns)) != len(fns):
            dup = (a, b)
    rep.add("concreteness: faithful", dup is None,
            "" if dup is None else f"parallel morphisms {dup[0]} -> {dup[1]} share a point function",
            counterexample=dup)
    bad_pts = []
    for c in S.objects:
        fns = sorted(m.fn[0] for m in S.point_maps(c))
        if fns != list(range(S.npoints(c))):
            bad_pts.append(c)
    rep.add("concreteness: points", not bad_pts,
            "" if not bad_pts else f"points of {bad_pts} do not match maps from {S.star}",
            counterexample=bad_pts or None)

    not_term = [c for c in S.objects if len(S.homs(c, S.star)) != 1]
    rep.add("terminal star", not not_term, f"objects without a unique map to {S.star}: {not_term}"
            if not_term else "", counterexample=not_term or None)
    not_init = [c for c in S.objects if len(S.homs(S.zero, c)) != 1]
    rep.add("initial zero", not not_init, f"objects without a unique map from {S.zero}: {not_init}"
            if not_init else "", counterexample=not_init or None)

    _axiom_C(S, rep)
    _axiom_star(S, rep)
    zero_ok = frozenset() in S.families(S.zero)
    rep.add("axiom (0)", zero_ok, "" if zero_ok else f"empty family does not cover {S.zero}",
            counterexample=None if zero_ok else {"object": S.zero})
    no_id = [c for c in S.objects if frozenset({S.identity(c).name}) not in S.families(c)]
    rep.add("axiom (M)", not no_id, f"identity does not cover {no_id}" if no_id else "",
            counterexample={"objects": no_id} if no_id else None)
    _axiom_L(S, rep)
    return rep


def _axiom_C(S: FiniteSite, rep: Report):
    for c in S.objects:
        for F in S.families(c):
            fam = _family(S, F)
            for h in S.into(c):
                d = h.src
                if not any(all(any(_factors_through(S, S.compose(h, g), f) for f in fam)
                               for g in _family(S, G))
                           for G in S.families(d)):
                    rep.add("axiom (C)", False,
                            f"pulling {sorted(F)} back along {h.name}: no family on {d} refines it",
                            counterexample={"object": c, "family": sorted(F), "morphism": h.name})
                    return
    rep.add("axiom (C)", True)


def _axiom_star(S: FiniteSite, rep: Report):
    for c in S.objects:
        for F in S.families(c):
            covered = set()
            for n in F:
                covered |= set(S.by_name[n].fn)
            missing = set(range(S.npoints(c))) - covered
            if missing:
                pts = [S.objects[c][i] for i in sorted(missing)]
                rep.add("axiom (⋆)", False, f"family {sorted(F)} on {c} misses points {pts}",
                        counterexample={"object": c, "family": sorted(F), "points": pts})
                return
    rep.add("axiom (⋆)", True)


def _axiom_L(S: FiniteSite, rep: Report):
    warnings = []
    for c in S.objects:
        for F in S.families(c):
            fam = _family(S, F)
            choices = [S.families(f.src) for f in fam]
            for pick in itertools.product(*choices):
                composed = []
                for f, G in zip(fam, pick):
                    composed.extend(S.compose(f, g) for g in _family(S, G))
                names = frozenset(m.name for m in composed)
                if names in S.families(c):
                    continue
                equiv = any(_refines(S, composed, _family(S, H)) and _refines(S, _family(S, H), composed)
                            for H in S.families(c))
                if not equiv:
                    rep.add("axiom (L)", False,
                            f"composite family {sorted(names)} on {c} is not in J({c}) up to refinement",
                            counterexample={"object": c, "family": sorted(F),
                                            "inner": [sorted(G) for G in pick],
                                            "composite": sorted(names)})
                    return
                warnings.append((c, sorted(names)))
    rep.add("axiom (L)", True,
            f"{len(warnings)} composite families present only up to refinement" if warnings else "",
            warning=bool(warnings))


# ---------------------------------------------------------------------------
# admissible monos

@dataclass
class MonoClass:
    members: dict[str, frozenset]

    @classmethod
    def of(cls, S: FiniteSite) -> "MonoClass":
        return cls(dict(S.monos or {}))

    def at(self, c: str) -> frozenset:
        return self.members.get(c, frozenset())


def is_mono(S: FiniteSite, m: Morphism) -> Optional[tuple]:
    """None if m is left-cancellable, else a witnessing parallel pair."""
    for x in S.objects:
        hs = S.homs(x, m.src)
        for a, b in itertools.combinations(hs, 2):
            if S.compose(m, a).fn == S.compose(m, b).fn:
                return (a.name, b.name)
    return None


def pullback(S: FiniteSite, m: Morphism, h: Morphism):
    """A limiting cone (P, p1: P -> dom h, p2: P -> dom m) over m and h, or None."""
    d, a = h.src, m.src
    # the points functor preserves limits, so |P| must be the set-theoretic pullback
    size = sum(1 for x in range(S.npoints(d)) for y in range(S.npoints(a)) if h.fn[x] == m.fn[y])
    cones = []
    for Q in S.objects:
        for q1 in S.homs(Q, d):
            hq = tuple(h.fn[i] for i in q1.fn)
            for q2 in S.homs(Q, a):
                if tuple(m.fn[i] for i in q2.fn) == hq:
                    cones.append((Q, q1, q2))
    for P, p1, p2 in cones:
        if S.npoints(P) != size:
            continue
        ok = True
        for Q, q1, q2 in cones:
            n = sum(1 for u in S.homs(Q, P)
                    if tuple(p1.fn[i] for i in u.fn) == q1.fn and tuple(p2.fn[i] for i in u.fn) == q2.fn)
            if n != 1:
                ok = False
                break
        if ok:
            return P, p1, p2
    return None


def validate_mono_class(S: FiniteSite, M: Optional[MonoClass] = None) -> Report:
    M = M or MonoClass.of(S)
    rep = Report(f"mono class on {S.name}")
    unknown = [(c, n) for c in M.members for n in M.at(c)
               if n not in S.by_name or S.by_name[n].tgt != c]
    if unknown:
        rep.add("members are morphisms", False, f"{unknown}", counterexample=unknown)
        return rep
    for c in S.objects:
        for n in sorted(M.at(c)):
            w = is_mono(S, S.by_name[n])
            if w is not None:
                rep.add("members are monos", False,
                        f"{n} is not left-cancellable: {w[0]} and {w[1]} are identified",
                        counterexample={"morphism": n, "pair": list(w)})
                return rep
    rep.add("members are monos", True)

    missing = [c for c in S.objects if S.zero_map(c) is None or S.zero_map(c).name not in M.at(c)]
    rep.add("monos: zero maps", not missing,
            f"map from {S.zero} into {missing} is not in M" if missing else "",
            counterexample={"objects": missing} if missing else None)

    isos = [f for f in S.morphisms if is_iso(S, f) and f.name not in M.at(f.tgt)]
    rep.add("monos: isos", not isos, f"isos outside M: {[f.name for f in isos]}" if isos else "",
            counterexample=[f.name for f in isos] or None)

    bad = None
    for c in S.objects:
        for n in M.at(c):
            m = S.by_name[n]
            for k in M.at(m.src):
                mk = S.compose(m, S.by_name[k])
                if mk is None or mk.name not in M.at(c):
                    bad = bad or (n, k)
    rep.add("monos: composition", bad is None,
            "" if bad is None else f"{bad[0]} after {bad[1]} is not in M", counterexample=bad)

    squares, bad = [], None
    for c in S.objects:
        for n in sorted(M.at(c)):
            m = S.by_name[n]
            for h in S.into(c):
                pb = pullback(S, m, h)
                if pb is None:
                    bad = bad or {"mono": n, "along": h.name, "reason": "no pullback"}
                    continue
                P, p1, p2 = pb
                squares.append({"mono": n, "along": h.name, "apex": P, "p1": p1.name, "p2": p2.name})
                if p1.name not in M.at(h.src):
                    bad = bad or {"mono": n, "along": h.name, "reason": f"pullback {p1.name} not in M"}
    rep.add("monos: pullbacks", bad is None,
            f"{len(squares)} pullback squares found" if bad is None
            else f"{bad['mono']} along {bad['along']}: {bad['reason']}", counterexample=bad)
    rep.pullback_squares = squares  # type: ignore[attr-defined]

    bad = None
    for c in S.objects:
        ms = [S.by_name[n] for n in sorted(M.at(c))]
        for m in ms:
            for n in ms:
                if S.image(m) <= S.image(n) and _factors_through(S, m, n) is None:
                    bad = bad or (m.name, n.name)
    rep.add("monos: point images", bad is None,
            "injective and order-reflecting; chain suprema vacuous (finite)" if bad is None
            else f"image of {bad[0]} lies in image of {bad[1]} without factoring", counterexample=bad)

    heights = {c: _height(sub_m_poset(S, c, M).elements) for c in S.objects}
    rep.add("monos: chains", True,
            "satisfied by stabilization; chains constant from index " +
            ", ".join(f"{c}:{h - 1}" for c, h in heights.items()))
    return rep


def _height(elements: list[frozenset]) -> int:
    """Number of elements in a longest chain under inclusion."""
    order = sorted(elements, key=len)
    best = {}
    for i, s in enumerate(order):
        best[i] = 1 + max((best[j] for j in range(i) if order[j] < s), default=0)
    return max(best.values(), default=0)


# ---------------------------------------------------------------------------
# Sub_M and partial maps

@dataclass
class SubMPoset:
    obj: str
    npoints: int
    elements: list[frozenset]
    representative: dict[frozenset, str]

    def leq(self, s: frozenset, t: frozenset) -> bool:
        return s <= t

    def characteristic(self, s: frozenset) -> tuple[int, ...]:
        return tuple(int(i in s) for i in range(self.npoints))

    def order_pairs(self) -> list[tuple[frozenset, frozenset]]:
        return [(s, t) for s in self.elements for t in self.elements if s <= t]


def sub_m_poset(S: FiniteSite, c: str, M: Optional[MonoClass] = None) -> SubMPoset:
    M = M or MonoClass.of(S)
    reps: dict[frozenset, str] = {}
    for n in sorted(M.at(c)):
        reps.setdefault(S.image(S.by_name[n]), n)
    elements = sorted(reps, key=lambda s: (len(s), sorted(s)))
    return SubMPoset(c, S.npoints(c), elements, reps)


PartialMap = frozenset  # of (source point, target point)


def partial_hom_set(S: FiniteSite, c: str, d: str, M: Optional[MonoClass] = None) -> set:
    """Partial maps |c| ⇀ |d| presented by a span (m in M(c), h: dom m -> d)."""
    M = M or MonoClass.of(S)
    out = set()
    for n in M.at(c):
        m = S.by_name[n]
        for h in S.homs(m.src, d):
            out.add(frozenset(zip(m.fn, h.fn)))
    return out


def partial_spans(S: FiniteSite, c: str, d: str, M: Optional[MonoClass] = None) -> list:
    M = M or MonoClass.of(S)
    return [(S.by_name[n], h) for n in sorted(M.at(c)) for h in S.homs(S.by_name[n].src, d)]


def compose_spans(S: FiniteSite, first, second):
    """Compose spans (m, h) then (n, g) by pulling n back along h."""
    m, h = first
    n, g = second
    pb = pullback(S, n, h)
    if pb is None:
        raise ValueError(f"no pullback of {n.name} along {h.name}")
    _, p1, p2 = pb
    return S.compose(m, p1), S.compose(g, p2)


def span_graph(span) -> PartialMap:
    m, h = span
    return frozenset(zip(m.fn, h.fn))


def compose_relations(f: PartialMap, g: PartialMap) -> PartialMap:
    gd = dict(g)
    return frozenset((x, gd[y]) for x, y in f if y in gd)


# ---------------------------------------------------------------------------
# combination and builtins

def combine_sites(S1: FiniteSite, S2: FiniteSite, name: Optional[str] = None) -> FiniteSite:
    """Glue two sites along their initial and terminal objects and add all constants."""
    notes = []
    objects = dict(S1.objects)
    rename_obj = {S2.zero: S1.zero, S2.star: S1.star}
    for c, pts in S2.objects.items():
        if c in rename_obj:
            continue
        new = c
        while new in objects:
            new += "'"
        if new != c:
            notes.append(f"object {c} of {S2.name} renamed to {new}")
        rename_obj[c] = new
        objects[new] = pts

    morphs: dict[tuple, Morphism] = {}
    names: set[str] = set()
    rename_m: dict[str, str] = {}

    def add(m: Morphism, origin: str = "") -> str:
        key = (m.src, m.tgt, m.fn)
        if key in morphs:
            return morphs[key].name
        nm = m.name
        while nm in names:
            nm += "'"
        if nm != m.name and origin:
            notes.append(f"morphism {m.name} of {origin} renamed to {nm}")
        names.add(nm)
        morphs[key] = Morphism(nm, m.src, m.tgt, m.fn)
        return nm

    for m in S1.morphisms:
        rename_m[("1", m.name)] = add(m)
    for m in S2.morphisms:
        mm = Morphism(m.name, rename_obj[m.src], rename_obj[m.tgt], m.fn)
        rename_m[("2", m.name)] = add(mm, S2.name)
    for c in objects:
        for d in objects:
            for q in range(len(objects[d])):
                add(Morphism(f"const_{c}_{d}_{objects[d][q]}", c, d, (q,) * len(objects[c])))
    changed = True
    while changed:
        changed = False
        for f in list(morphs.values()):
            for g in list(morphs.values()):
                if f.tgt == g.src:
                    fn = tuple(g.fn[i] for i in f.fn)
                    if (f.src, g.tgt, fn) not in morphs:
                        add(Morphism(f"{g.name}.{f.name}", f.src, g.tgt, fn))
                        changed = True

    coverage: dict[str, list] = {}
    for tag, S in (("1", S1), ("2", S2)):
        ren = (lambda c: c) if tag == "1" else (lambda c: rename_obj[c])
        for c, fams in S.coverage.items():
            lst = coverage.setdefault(ren(c), [])
            for F in fams:
                G = frozenset(rename_m[(tag, n)] for n in F)
                if G not in lst:
                    lst.append(G)
    monos: dict[str, set] = {c: set() for c in objects}
    for tag, S in (("1", S1), ("2", S2)):
        ren = (lambda c: c) if tag == "1" else (lambda c: rename_obj[c])
        for c, ms in (S.monos or {}).items():
            monos[ren(c)] |= {rename_m[(tag, n)] for n in ms}
    out = FiniteSite(objects, list(morphs.values()), coverage, {}, S1.zero, S1.star,
                     name or f"{S1.name}+{S2.name}")
    for m in out.morphisms:
        if is_iso(out, m):
            monos[m.tgt].add(m.name)
    out.monos = {c: frozenset(ms) for c, ms in monos.items()}
    out.notes = notes
    return out


def is_subcanonical(S: FiniteSite) -> Report:
    from .sheaf import validate_sheaf, yoneda_sheaf  # local: sheaf builds on site
    rep = Report(f"subcanonicity of {S.name}")
    for c in S.objects:
        sub = validate_sheaf(yoneda_sheaf(S, c, check=False))
        bad = sub.failures()
        rep.add(f"representable {c}", not bad,
                "" if not bad else f"{bad[0].name}: {bad[0].detail}",
                counterexample=bad[0].counterexample if bad else None)
    return rep


def _make_site(name: str, objects: dict, extra: list[tuple[str, str, str, tuple]],
               coverage_extra: Optional[dict] = None, monos: str = "isos+zero") -> FiniteSite:
    """Build a site from objects and non-structural morphisms.

    Identities, maps from 0 and maps to star are added automatically.
    """
    ms = []
    for c, pts in objects.items():
        ms.append(Morphism(f"id_{c}", c, c, tuple(range(len(pts)))))
    for c in objects:
        if c != "0":
            ms.append(Morphism(f"z_{c}", "0", c, ()))
    for c, pts in objects.items():
        if c not in ("0", "star"):
            ms.append(Morphism(f"t_{c}", c, "star", (0,) * len(pts)))
    ms += [Morphism(n, s, t, fn) for n, s, t, fn in extra]
    coverage = {c: [frozenset({f"id_{c}"})] for c in objects}
    coverage["0"].insert(0, frozenset())
    for c, fams in (coverage_extra or {}).items():
        coverage[c] = coverage.get(c, []) + [frozenset(F) for F in fams]
    S = FiniteSite(objects, ms, coverage, None, "0", "star", name)
    mon = {c: {f"id_{c}"} for c in objects}
    for c in objects:
        if c != "0":
            mon[c].add(f"z_{c}")
    for m in S.morphisms:
        if is_iso(S, m):
            mon[m.tgt].add(m.name)
    S.monos = {c: frozenset(v) for c, v in mon.items()}
    return S


def trivial_site() -> FiniteSite:
    return _make_site("trivial", {"0": (), "star": ("*",)}, [])


def reflexive_site() -> FiniteSite:
    objs = {"0": (), "star": ("*",), "2": ("p0", "p1")}
    extra = [("pt0", "star", "2", (0,)), ("pt1", "star", "2", (1,)),
             ("c0", "2", "2", (0, 0)), ("c1", "2", "2", (1, 1))]
    return _make_site("reflexive", objs, extra)


def kpoint_site(k: int = 3) -> FiniteSite:
    if k < 1:
        raise ValueError("k must be positive")
    pts = tuple(f"a{i}" for i in range(k))
    extra = [(f"pt{i}", "star", "A", (i,)) for i in range(k)]
    extra += [(f"c{i}", "A", "A", (i,) * k) for i in range(k)]
    return _make_site(f"kpoint{k}", {"0": (), "star": ("*",), "A": pts}, extra)


def cover2_site() -> FiniteSite:
    """The reflexive site with its two points declared a cover of 2."""
    S = reflexive_site()
    S.coverage["2"].append(frozenset({"pt0", "pt1"}))
    S.name = "cover2"
    return S


def builtin_sites() -> dict[str, FiniteSite]:
    return {"trivial": trivial_site(), "reflexive": reflexive_site(), "kpoint": kpoint_site(3)}
