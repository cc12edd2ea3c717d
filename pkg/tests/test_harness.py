import itertools

import pytest

from pcfv import harness
from pcfv.denot import load_model
from pcfv.harness import (
    Corpus, TheoremReport, build_corpus, check_adequacy, check_conservativity, check_fundamental,
    check_program, check_soundness,
)
from pcfv.site import builtin_sites
from pcfv.syntax import parse_comp, parse_program
from conftest import program_text


@pytest.fixture(scope="module")
def small_reflexive():
    return build_corpus("builtin:reflexive", 5, ["alpha", "nat"])


@pytest.fixture(scope="module")
def small_standard():
    return build_corpus("builtin:standard", 6, ["nat"])


@pytest.mark.parametrize("check", [check_soundness, check_adequacy, check_fundamental])
def test_suites_pass_on_small_corpus(small_reflexive, check):
    rep = check(small_reflexive)
    assert rep.ok, rep.format()
    assert rep.total == len(small_reflexive)
    assert rep.passed + rep.vacuous + rep.skipped == rep.total


def test_standard_corpus(small_standard):
    assert check_soundness(small_standard, backend="standard").ok
    assert check_adequacy(small_standard).ok


def test_parallel_matches_serial(small_reflexive):
    a = check_soundness(small_reflexive, jobs=1)
    b = check_soundness(small_reflexive, jobs=2)
    assert (a.total, a.passed, a.vacuous) == (b.total, b.passed, b.vacuous)


def test_omega_is_vacuous():
    sig = load_model("builtin:standard").signature()
    omega = parse_comp("let f = ret (rec f (x : nat) : nat. f x) in f zero")
    corpus = Corpus("builtin:standard", [(omega, None)], "omega", "", sig)
    rep = check_adequacy(corpus)
    assert rep.ok and rep.vacuous == 1
    rep = check_soundness(corpus)
    assert rep.ok and rep.vacuous == 1


def test_low_fuel_is_inconclusive():
    sig = load_model("builtin:reflexive").signature()
    t = parse_comp("let x = ret a in let y = ret x in ret y", sig)
    corpus = Corpus("builtin:reflexive", [(t, None)], "chain of lets", "")
    rep = check_adequacy(corpus, fuel=3)
    assert not rep.ok and rep.failed == 0
    assert rep.inconclusive[0]["fuel"] == 3
    assert check_adequacy(corpus, fuel=5).ok


def test_fuel_bottom_in_standard_backend_is_flagged():
    t = parse_comp("(rec f (x : nat) : nat. f suc x) zero")
    rep = check_adequacy(Corpus("builtin:standard", [(t, None)], "growing loop", ""), fuel=500)
    assert rep.ok and rep.vacuous == 1
    assert any("only up to fuel" in n for n in rep.notes)


def test_report_merge_is_associative():
    def r(n):
        rep = TheoremReport("soundness", "c", "h", total=n, passed=n - 1, failed=1)
        rep.counterexamples = [{"term": str(n), "expected": "", "got": ""}]
        return rep
    a, b, c = r(1), r(2), r(3)
    assert a.merge(b).merge(c).to_dict() == a.merge(b.merge(c)).to_dict()


def test_report_json_has_schema():
    d = TheoremReport("adequacy").to_dict()
    assert d["schema"] == 1 and d["ok"] is True


@pytest.mark.parametrize("name", ["trivial", "reflexive", "kpoint"])
def test_conservativity(name):
    rep = check_conservativity(builtin_sites()[name])
    assert rep.ok, rep.format()


# reference implementations of the hand-written programs over {0, 1, 2}
def _num(d):
    from pcfv.sheaf import Left, Right
    if isinstance(d, Left):
        return 0
    return 1 if isinstance(d.value, Left) else 2


REFERENCE = {
    "parity": lambda x: x % 2,
    "sub": lambda x, y: max(x - y, 0),
    "add": lambda x, y: min(x + y, 2),
    "min": min,
    "half": lambda x: x // 2,
    "parity_sum": lambda x, y: (x + y) % 2,
    "to_num": lambda x: f"n{x}",
    "add_num": lambda m, k: f"n{int(m[1]) + k}" if int(m[1]) + k <= 2 else None,
    "sub_num": lambda m, k: f"n{int(m[1]) - k}" if int(m[1]) - k >= 0 else None,
    "spin": lambda x: None,
}


def test_programs_agree_with_reference(kpoint_model):
    from pcfv.denot import FiniteBackend
    from pcfv.sheaf import BOTTOM, Left
    from pcfv.typecheck import elaborate_definition
    prog = parse_program(program_text("kpoint.pcfv"))
    F = FiniteBackend(kpoint_model, prog.signature)
    for d in prog.defs:
        ty, body = elaborate_definition(prog.signature, d)
        args, res = harness.curried_args(ty)
        for point in itertools.product(*[F.interp_type(a).elements for a in args]):
            plain = [p if isinstance(p, str) else _num(p) for p in point]
            want = REFERENCE[d.name](*plain)
            got = F.interp_comp(harness.applied(body, [harness.reify(a, p) for a, p in zip(args, point)]))
            if want is None:
                assert got is BOTTOM
            elif d.name.startswith("parity"):
                assert isinstance(got.value, Left) == (want == 0)
            elif isinstance(want, str):
                assert got.value == want
            else:
                assert _num(got.value) == want, (d.name, plain)


def test_check_program(kpoint_model):
    rep = check_program(kpoint_model, parse_program(program_text("kpoint.pcfv")))
    assert rep.ok and rep.total == 66


def test_check_program_rejects_incompatible_model(reflexive_model):
    rep = check_program(reflexive_model, parse_program(program_text("kpoint.pcfv")))
    assert not rep.ok and rep.notes
