"""Validator calibration against the shipped good and bad fixtures.

Every good fixture must pass all checks; every bad fixture must fail, and
the failing check must be the one it was built to violate.
"""
from __future__ import annotations

import time
from importlib import resources
from pathlib import Path

from . import sheaf as sh
from .report import Report
from .site import FiniteSite, MonoClass, builtin_sites, sub_m_poset, validate_mono_class, validate_site

# bad fixture -> name of the check it must fail
BAD_SITES = {
    "bad_C.json": "axiom (C)",
    "bad_star.json": "axiom (⋆)",
    "bad_zero.json": "axiom (0)",
    "bad_M.json": "axiom (M)",
    "bad_L.json": "axiom (L)",
    "bad_mono_zero.json": "monos: zero maps",
}
BAD_SHEAVES = {
    "sheaf_no_gluing.json": "gluing",
    "sheaf_no_constants.json": "constants",
    "sheaf_no_precomposition.json": "precomposition",
}


def data_dir() -> Path:
    return Path(str(resources.files("pcfv") / "data"))


def site_report(S: FiniteSite, M: MonoClass | None = None) -> Report:
    """Site axioms followed by the admissible-mono conditions."""
    rep = validate_site(S)
    if rep.ok:
        rep.extend(validate_mono_class(S, M))
    return rep


def shipped_sheaves() -> list[Path]:
    return sorted((data_dir() / "sheaves").glob("*.json"))


def calibrate() -> Report:
    t0 = time.perf_counter()
    rep = Report("validator calibration")
    for name, S in builtin_sites().items():
        r = site_report(S)
        bad = r.failures()
        rep.add(f"builtin site {name} passes", r.ok, f"{bad[0].name}: {bad[0].detail}" if bad else "")
    for p in shipped_sheaves():
        r = sh.validate_sheaf(sh.load_sheaf(p))
        bad = r.failures()
        rep.add(f"sheaf {p.stem} passes", r.ok, f"{bad[0].name}: {bad[0].detail}" if bad else "")
    bad_dir = data_dir() / "bad"
    for fname, check in BAD_SITES.items():
        r = site_report(FiniteSite.load(bad_dir / fname))
        names = [c.name for c in r.failures()]
        rep.add(f"{fname} fails {check}", check in names,
                f"failed checks: {names}" if names else "unexpectedly valid")
    for fname, check in BAD_SHEAVES.items():
        r = sh.validate_sheaf(sh.load_sheaf(bad_dir / fname))
        names = [c.name for c in r.failures()]
        rep.add(f"{fname} fails {check}", check in names,
                f"failed checks: {names}" if names else "unexpectedly valid")
    rep.elapsed = time.perf_counter() - t0  # type: ignore[attr-defined]
    return rep


def check_sub_m_star() -> Report:
    """The M-subobjects of the terminal object are exactly the empty and full point sets."""
    rep = Report("M-subobjects of the terminal object")
    for name, S in builtin_sites().items():
        P = sub_m_poset(S, S.star)
        rep.add(f"{name}: |Sub_M(star)| = 2", len(P.elements) == 2,
                f"found {[sorted(s) for s in P.elements]}")
    return rep
