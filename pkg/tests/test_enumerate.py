import pytest

from pcfv.denot import load_model
from pcfv.enumerate import Enumerator, corpus_hash, enumerate_terms, naive_terms, size_histogram
from pcfv.syntax import Signature, parse_type, term_size
from pcfv.typecheck import typecheck_comp

SMALL_POOLS = {
    "standard": ["nat", "unit", "unit + unit", "nat -> nat"],
    "reflexive": ["alpha", "unit", "empty", "alpha + unit", "alpha -> alpha"],
}


@pytest.mark.parametrize("model, target", [("standard", "nat"), ("reflexive", "alpha"), ("reflexive", "unit + unit")])
@pytest.mark.parametrize("size", [4, 5])
def test_matches_naive_oracle(model, target, size):
    sig = load_model(f"builtin:{model}").signature()
    pool = [parse_type(p, sig) for p in SMALL_POOLS[model]]
    ty = parse_type(target, sig)
    fast = list(enumerate_terms(sig, size, ty, pool))
    slow = naive_terms(sig, size, ty, pool)
    assert len(fast) == len(slow) and set(fast) == set(slow)
    assert len(set(fast)) == len(fast)


def test_terms_are_typed_and_sized():
    sig = Signature()
    pool = [parse_type(p) for p in SMALL_POOLS["standard"]]
    E = Enumerator(sig, pool)
    for n in range(1, 7):
        for ty, ts in E.comps((), n).items():
            for t in ts:
                assert term_size(t) == n
                assert typecheck_comp([], sig, t) == ty


def test_order_is_deterministic():
    sig = Signature()
    pool = [parse_type(p) for p in SMALL_POOLS["standard"]]
    a = list(enumerate_terms(sig, 6, parse_type("nat"), pool))
    b = list(enumerate_terms(sig, 6, parse_type("nat"), list(reversed(pool))[::-1]))
    assert corpus_hash(a) == corpus_hash(b)
    hist = size_histogram(a)
    assert list(hist) == sorted(hist)


def test_no_nat_mode():
    sig = Signature()
    pool = [parse_type("unit"), parse_type("unit + unit")]
    terms = list(enumerate_terms(sig, 6, parse_type("unit + unit"), pool, nat=False))
    assert terms and all("zero" not in repr(t) for t in terms)


def test_size_bound_must_be_positive():
    with pytest.raises(ValueError):
        list(enumerate_terms(Signature(), 0, parse_type("nat"), []))
