"""Deliberately broken variants of the semantic core, for sensitivity testing.

Each mutation swaps one function in `pcfv.sheaf` for a plausible but wrong
version.  A suite is sensitive to a mutation when at least one of its checks
fails while the mutation is active.
"""
from __future__ import annotations

import contextlib
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import sheaf as sh
from .sheaf import BOTTOM, Fn, Up


def _eta_diverges(x):
    return BOTTOM


def _mu_keeps_layer(u):
    return u


def _strength_drops_unwrap(pair):
    x, u = pair
    return BOTTOM if u is BOTTOM else Up((x, u))


def _seed_at_top(E):
    X, Z = E.parts
    return Fn((Z.elements[-1],) * len(X))


def _no_gluing(X):
    return []


MUTATIONS: dict[str, tuple[str, Callable, str]] = {
    "broken-eta": ("_eta", _eta_diverges, "unit sends every value to bottom"),
    "broken-mu": ("_mu", _mu_keeps_layer, "multiplication forgets to remove a lifting layer"),
    "broken-strength": ("_strength", _strength_drops_unwrap, "strength pairs with the lifted value"),
    "non-least-fixpoint": ("_kleene_seed", _seed_at_top, "iteration starts from a maximal function"),
    "dropped-gluing": ("_gluing_violations", _no_gluing, "sheaf validation skips the gluing check"),
}


@contextlib.contextmanager
def mutated(name: str) -> Iterator[None]:
    attr, fn, _ = MUTATIONS[name]
    saved = getattr(sh, attr)
    setattr(sh, attr, fn)
    try:
        yield
    finally:
        setattr(sh, attr, saved)


def _suites() -> dict[str, Callable[[], bool]]:
    """Suite name -> thunk returning True when the suite passes."""
    from .calibration import calibrate
    from .denot import load_model
    from .harness import (
        build_corpus, check_adequacy, check_fundamental, check_program, check_soundness,
    )
    from .laws import check_laws
    from .syntax import parse_program
    from .calibration import data_dir

    def corpus():
        return build_corpus("builtin:reflexive", 6, ["alpha", "nat"])

    def programs():
        text = (data_dir() / "programs" / "kpoint.pcfv").read_text()
        return check_program(load_model("builtin:kpoint"), parse_program(text)).ok

    return {
        "calibration": lambda: calibrate().ok,
        "laws": lambda: check_laws("reflexive", triples=False).ok,
        "soundness": lambda: check_soundness(corpus(), 10_000).ok,
        "adequacy": lambda: check_adequacy(corpus(), 10_000).ok,
        "fundamental": lambda: check_fundamental(corpus()).ok,
        "programs": programs,
    }


@dataclass
class MutationResult:
    name: str
    description: str
    failing_suites: list = field(default_factory=list)
    crashed: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def detected(self) -> bool:
        return bool(self.failing_suites)


def run_mutation(name: str, stop_early: bool = True) -> MutationResult:
    t0 = time.perf_counter()
    res = MutationResult(name, MUTATIONS[name][2])
    with mutated(name):
        for suite, run in _suites().items():
            try:
                ok = run()
            except Exception as e:   # a crash under mutation also counts as detection
                ok = False
                res.crashed[suite] = f"{type(e).__name__}: {e}"
            if not ok:
                res.failing_suites.append(suite)
                if stop_early:
                    break
    res.elapsed = time.perf_counter() - t0
    return res


def run_all(stop_early: bool = True) -> list[MutationResult]:
    return [run_mutation(n, stop_early) for n in MUTATIONS]
