"""Release acceptance criteria.

Each test records one line ``[PASS|FAIL] Cn name (elapsed / limit) detail``;
the lines are printed in the pytest terminal summary and also when this file
is run directly with ``python tests/test_acceptance.py``.  A criterion passes
only if its check holds *and* it finishes inside its time limit.
"""
import sys
import time

import pytest

from pcfv.calibration import calibrate, check_sub_m_star, data_dir
from pcfv.denot import load_model
from pcfv.harness import (
    RELEASE_FUEL, check_adequacy, check_conservativity, check_fundamental, check_program,
    check_soundness, release_corpora,
)
from pcfv.laws import check_laws
from pcfv.mutations import run_all
from pcfv.site import builtin_sites
from pcfv.syntax import parse_comp, parse_program, pretty

RESULTS: list[str] = []


@pytest.fixture(scope="module")
def corpora():
    return release_corpora()


def record(tag: str, name: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
    ok = ok and elapsed <= limit
    line = f"[{'PASS' if ok else 'FAIL'}] {tag} {name} ({elapsed:.2f}s / {limit:g}s)"
    if detail:
        line += f"  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _theorem_summary(reports) -> tuple[bool, str]:
    ok = all(r.ok for r in reports.values())
    parts = [f"{m}: {r.passed} passed, {r.failed} failed, {r.vacuous} vacuous, "
             f"{len(r.inconclusive)} inconclusive" for m, r in reports.items()]
    return ok, "; ".join(parts)


def test_c01_calibration():
    rep, dt = timed(calibrate)
    good = [c for c in rep.checks if c.name.startswith("sheaf ")]
    bad = [c for c in rep.checks if " fails " in c.name]
    ok = rep.ok and len(good) >= 6 and len(bad) >= 6
    bad_names = [c.name for c in rep.failures()]
    record("C1", "validator calibration", ok, dt, 1,
           f"{len(good)} good sheaves, {len(bad)} bad fixtures" + (f"; failing: {bad_names}" if bad_names else ""))


def test_c02_sub_m_of_terminal():
    rep, dt = timed(check_sub_m_star)
    record("C2", "|Sub_M(star)| = 2 on every builtin site", rep.ok, dt, 1,
           "; ".join(f"{c.name}: {c.detail}" for c in rep.failures()))


def test_c03_categorical_laws():
    reps, dt = timed(lambda: {s: check_laws(s) for s in ("reflexive", "kpoint")})
    ok = all(r.ok for r in reps.values())
    detail = "; ".join(f"{s}: {len(r.checks)} checks, {len(r.failures())} failed" for s, r in reps.items())
    record("C3", "monad, strength, exponential and fixpoint laws", ok, dt, 60, detail)


def test_c04_conservativity():
    reps, dt = timed(lambda: {n: check_conservativity(S) for n, S in builtin_sites().items()})
    ok, detail = _theorem_summary(reps)
    record("C4", "conservativity bijections", ok, dt, 30, detail)


def test_c05_soundness(corpora):
    reps, dt = timed(lambda: {m: check_soundness(c, RELEASE_FUEL) for m, c in corpora.items()})
    ok, detail = _theorem_summary(reps)
    record("C5", "soundness on the size <= 7 corpus", ok, dt, 600, detail)


def test_c06_adequacy(corpora):
    reps, dt = timed(lambda: {m: check_adequacy(c, RELEASE_FUEL) for m, c in corpora.items()})
    ok, detail = _theorem_summary(reps)
    ok = ok and all(r.failed == 0 and not r.inconclusive for r in reps.values())
    record("C6", "adequacy on the size <= 7 corpus", ok, dt, 600, detail)


def test_c07_fundamental(corpora):
    reps, dt = timed(lambda: {m: check_fundamental(c) for m, c in corpora.items()})
    ok, detail = _theorem_summary(reps)
    record("C7", "fundamental property", ok, dt, 600, detail)


def test_c08_kpoint_programs():
    def go():
        prog = parse_program((data_dir() / "programs" / "kpoint.pcfv").read_text())
        return prog, check_program(load_model("builtin:kpoint"), prog, RELEASE_FUEL)
    (prog, rep), dt = timed(go)
    ok = rep.ok and len(prog.defs) >= 10
    record("C8", "kpoint programs: denotation equals evaluation", ok, dt, 10,
           f"{len(prog.defs)} programs, {rep.passed} inputs agree, {rep.failed} disagree")


def test_c09_mutations():
    results, dt = timed(lambda: run_all(stop_early=True))
    ok = len(results) >= 5 and all(r.detected for r in results)
    detail = ", ".join(f"{r.name} -> {r.failing_suites[0] if r.detected else 'UNDETECTED'}" for r in results)
    record("C9", "mutations are detected", ok, dt, 900, detail)


def test_c10_parser_roundtrip(corpora):
    def go():
        bad, n = [], 0
        for c in corpora.values():
            for t, _ in c.terms:
                n += 1
                text = pretty(t, c.sig)
                again = parse_comp(text, c.sig)
                if again != t or pretty(again, c.sig) != text:
                    bad.append(text)
        return bad, n
    (bad, n), dt = timed(go)
    record("C10", "parse . pretty is the identity", not bad, dt, 60,
           f"{n} terms" + (f"; first mismatch: {bad[0]}" if bad else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
