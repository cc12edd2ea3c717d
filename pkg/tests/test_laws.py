import itertools

import pytest

from pcfv import sheaf as sh
from pcfv.laws import (
    curry_counts, fixpoint_failures, monad_law_failures, sheaf_pool, strength_failures, ump_failures,
)
from pcfv.site import MonoClass, builtin_sites


@pytest.fixture(scope="module")
def setup():
    S = builtin_sites()["reflexive"]
    M = MonoClass.of(S)
    return M, sheaf_pool("reflexive", S, M)


def test_pool_has_small_carriers(setup):
    _, pool = setup
    assert len(pool) >= 10
    assert all(len(X) <= 4 for X in pool)


def test_monad_laws(setup):
    M, pool = setup
    assert [f for X in pool for f in monad_law_failures(X, M)] == []


def test_strength(setup):
    M, pool = setup
    for X, Y in itertools.product(pool[:8], repeat=2):
        assert strength_failures(X, Y, M) == []


def test_curry_counts_agree_with_explicit_enumeration(setup):
    _, pool = setup
    for X, Y, Z in itertools.product(pool[:7], repeat=3):
        E = sh.exponential(Y, Z)
        n_left, n_right, n_both = curry_counts(X, Y, Z, E)
        assert n_left == len(sh.hom_set(sh.product(X, Y), Z))
        assert n_right == len(sh.hom_set(X, E))
        assert n_both == n_left


def test_ump(setup):
    _, pool = setup
    for X, Y, Z in itertools.product(pool[:6], repeat=3):
        assert ump_failures(X, Y, Z) == []


def test_fixpoints(setup):
    M, pool = setup
    for X, Y in itertools.product(pool[:6], repeat=2):
        fails, n = fixpoint_failures(X, Y, M)
        assert fails == []


def test_broken_mu_is_caught(setup, monkeypatch):
    M, pool = setup
    monkeypatch.setattr(sh, "_mu", lambda u: u)
    assert any(monad_law_failures(X, M) for X in pool)
