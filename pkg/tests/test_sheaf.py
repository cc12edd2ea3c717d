import itertools
import json

import pytest

from pcfv import sheaf as sh
from pcfv.calibration import BAD_SHEAVES, shipped_sheaves
from pcfv.laws import sheaf_pool
from pcfv.site import MonoClass, builtin_sites


def brute_homs(X, Y):
    """Every monotone, plot-preserving function, by exhaustive enumeration."""
    out = []
    for f in itertools.product(range(len(Y)), repeat=len(X)):
        if any(not Y.leq(f[i], f[j]) for i, j in X.strict_pairs()):
            continue
        if all(tuple(f[e] for e in g) in Y.plots(c) for c in X.site.objects for g in X.plots(c)):
            out.append(f)
    return out


@pytest.fixture(scope="module")
def reflexive_pool():
    return [X for X in sheaf_pool("reflexive") if len(X) <= 4]


@pytest.mark.parametrize("path", shipped_sheaves(), ids=lambda p: p.stem)
def test_shipped_sheaves_validate(path):
    rep = sh.validate_sheaf(sh.load_sheaf(path))
    assert rep.ok, rep.format()


@pytest.mark.parametrize("fname, check", sorted(BAD_SHEAVES.items()))
def test_bad_sheaves(data, fname, check):
    rep = sh.validate_sheaf(sh.load_sheaf(data / "bad" / fname))
    assert check in [c.name for c in rep.failures()]


def test_hom_sets_match_brute_force(reflexive_pool):
    for X, Y in itertools.product(reflexive_pool, repeat=2):
        expected = sorted(brute_homs(X, Y))
        assert sorted(sh.hom_set(X, Y)) == expected, (X.name, Y.name)
        assert sh.hom_count(X, Y) == len(expected)


def test_constructions_validate(reflexive_pool):
    M = MonoClass.of(reflexive_pool[0].site)
    for X, Y in itertools.product(reflexive_pool[:6], repeat=2):
        for Z in (sh.product(X, Y), sh.coproduct(X, Y), sh.exponential(X, Y), sh.lift(X, M)):
            assert sh.validate_sheaf(Z).ok, (Z.kind, X.name, Y.name)


def test_product_universal_property_by_counting(reflexive_pool):
    for W, X, Y in itertools.product(reflexive_pool[:5], repeat=3):
        assert sh.hom_count(W, sh.product(X, Y)) == sh.hom_count(W, X) * sh.hom_count(W, Y)


def test_coproduct_universal_property_by_counting(reflexive_pool):
    for X, Y, W in itertools.product(reflexive_pool[:5], repeat=3):
        assert sh.hom_count(sh.coproduct(X, Y), W) == sh.hom_count(X, W) * sh.hom_count(Y, W)


def test_exponential_carrier_is_hom_set(reflexive_pool):
    for X, Y in itertools.product(reflexive_pool[:6], repeat=2):
        E = sh.exponential(X, Y)
        assert len(E) == len(brute_homs(X, Y))


def test_lift_adds_one_bottom(reflexive_pool):
    M = MonoClass.of(reflexive_pool[0].site)
    for X in reflexive_pool:
        L = sh.lift(X, M)
        assert len(L) == len(X) + 1
        assert L.elements[0] is sh.BOTTOM
        assert all(L.leq(0, j) for j in range(len(L)))


def test_terminal_and_initial(sites):
    for S in sites.values():
        one, zero = sh.terminal_sheaf(S), sh.initial_sheaf(S)
        X = sh.yoneda_sheaf(S, S.star)
        assert sh.hom_count(X, one) == 1
        assert sh.hom_count(zero, X) == 1


def test_yoneda_points(sites):
    # morphisms from the terminal sheaf to a representable are the points of the object
    for S in sites.values():
        for c in S.objects:
            assert sh.hom_count(sh.terminal_sheaf(S), sh.yoneda_sheaf(S, c)) == S.npoints(c)


def test_json_roundtrip(data):
    X = sh.load_sheaf(data / "sheaves" / "sierpinski.json")
    Y = sh.sheaf_from_json(json.loads(json.dumps(sh.sheaf_to_json(X))))
    assert [str(e) for e in Y.elements] == [str(e) for e in X.elements]
    assert Y.all_plots() == X.all_plots()


def test_kleene_fixpoint_of_identity_is_bottom(reflexive_pool):
    X, Y = reflexive_pool[2], reflexive_pool[3]
    E = sh.exponential(X, sh.lift(Y))
    fix, n = sh.fixpoint(E, lambda f: f)
    assert all(v is sh.BOTTOM for v in fix.table) and n == 1


def test_kleene_fixpoint_of_constant(reflexive_pool):
    X, Y = reflexive_pool[2], reflexive_pool[3]
    E = sh.exponential(X, sh.lift(Y))
    target = E.elements[-1]
    fix, _ = sh.fixpoint(E, lambda f: target)
    assert fix == target


def test_partial_map_characterization_agrees():
    S = builtin_sites()["reflexive"]
    M = MonoClass.of(S)
    pool = [X for X in sheaf_pool("reflexive", S, M) if len(X) <= 3]
    for X, Y in itertools.product(pool, repeat=2):
        for keys in itertools.product([None, *range(len(Y))], repeat=len(X)):
            f = {X.label(i): Y.label(k) for i, k in enumerate(keys) if k is not None}
            sh.check_partial_map_char(X, Y, f, M)   # raises on disagreement


def test_is_morphism_reports_reason(data):
    X = sh.load_sheaf(data / "sheaves" / "sierpinski.json")
    swap = [1, 0]
    assert sh.is_morphism(X, X, swap) is not None
    assert sh.is_morphism(X, X, [0, 1]) is None
