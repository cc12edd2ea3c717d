"""Command-line front end: ``pcfv check|run|denot|site|sheaf|verify``.

Exit status is 0 on success, 1 on a semantic failure (type error, failed
validation, theorem counterexample) and 2 on usage or resource errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from . import config
from . import sheaf as sh
from .config import ResourceError
from .site import FiniteSite, MonoClass, SiteFormatError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers

def show(d) -> str:
    """Human-readable element label."""
    if d is sh.BOTTOM:
        return "bot"
    if isinstance(d, sh.Fn):
        return "fn[" + ", ".join(show(x) for x in d.table) + "]"
    if isinstance(d, (sh.Up, sh.Left, sh.Right)):
        return f"{d.tag}({show(d.value)})"
    if isinstance(d, tuple):
        return "(" + ", ".join(show(x) for x in d) + ")"
    from .denot import Closure
    if isinstance(d, Closure):
        return "<closure>"
    return str(d)


def emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps({"schema": 1, **payload}, indent=2, sort_keys=False))
    elif text:
        print(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _load_site(ref: str) -> FiniteSite:
    if ref.startswith("builtin:"):
        return sh._resolve_site(ref, Path("."))
    try:
        return FiniteSite.load(ref)
    except OSError as e:
        raise UsageError(f"cannot read {ref}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{ref} is not valid JSON: {e}") from None


def _load_sheaf(ref: str):
    try:
        return sh.load_sheaf(ref)
    except OSError as e:
        raise UsageError(f"cannot read {ref}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{ref} is not valid JSON: {e}") from None


def _load_program(path: str):
    from .syntax import ParseError, parse_program
    text = _read(path)
    try:
        return parse_program(text), None
    except ParseError as e:
        return None, f"{path}:{e}"


def _select(prog, name: Optional[str]):
    if name is None:
        return list(prog.defs)
    try:
        return [prog.get(name)]
    except KeyError:
        raise UsageError(f"no definition named {name!r}") from None


# ---------------------------------------------------------------------------
# check / run

def cmd_check(args) -> int:
    from .syntax import pretty_type
    from .typecheck import PcfTypeError, check_signature, elaborate_definition
    prog, err = _load_program(args.file)
    if err:
        emit(args, f"error: {err}", {"command": "check", "ok": False, "error": err})
        return EXIT_FAIL
    rep = check_signature(prog.signature)
    if not rep.ok:
        bad = rep.failures()[0]
        msg = f"{bad.name}: {bad.detail}"
        emit(args, f"error: {msg}", {"command": "check", "ok": False, "error": msg})
        return EXIT_FAIL
    out, lines = [], []
    for d in prog.defs:
        try:
            ty, _ = elaborate_definition(prog.signature, d)
        except PcfTypeError as e:
            msg = f"{d.name}: {e}"
            lines.append(f"error: {msg}")
            emit(args, "\n".join(lines), {"command": "check", "ok": False, "definitions": out, "error": msg})
            return EXIT_FAIL
        out.append({"name": d.name, "type": pretty_type(ty)})
        lines.append(f"{d.name} : {pretty_type(ty)}")
    emit(args, "\n".join(lines), {"command": "check", "ok": True, "definitions": out})
    return EXIT_OK


def _typed_defs(args, prog):
    from .typecheck import PcfTypeError, elaborate_definition
    chosen = _select(prog, getattr(args, "def_name", None))
    out = []
    for d in chosen:
        try:
            out.append((d, *elaborate_definition(prog.signature, d)))
        except PcfTypeError as e:
            return None, f"{d.name}: {e}"
    return out, None


def cmd_run(args) -> int:
    from .opsem import Converged, ConstUndefined, FuelExhausted, Stuck, eval_comp
    from .syntax import pretty
    prog, err = _load_program(args.file)
    defs, terr = (None, err) if err else _typed_defs(args, prog)
    if terr:
        emit(args, f"error: {terr}", {"command": "run", "ok": False, "error": terr})
        return EXIT_FAIL
    fuel = config.current().fuel
    results, lines, code = [], [], EXIT_OK
    for d, ty, body in defs:
        out = eval_comp(body, prog.signature, fuel)
        entry = {"name": d.name, "outcome": type(out).__name__}
        if isinstance(out, Converged):
            entry.update(value=pretty(out.value, prog.signature), steps=out.steps)
        elif isinstance(out, ConstUndefined):
            entry.update(constant=out.name, argument=pretty(out.arg, prog.signature))
        elif isinstance(out, FuelExhausted):
            entry.update(fuel=out.fuel, looping=out.looping)
        elif isinstance(out, Stuck):
            entry.update(reason=out.desc)
            code = EXIT_FAIL
        results.append(entry)
        lines.append(str(out) if len(defs) == 1 else f"{d.name}: {out}")
    emit(args, "\n".join(lines), {"command": "run", "ok": code == EXIT_OK, "fuel": fuel, "results": results})
    return code


# ---------------------------------------------------------------------------
# denot

def cmd_denot(args) -> int:
    from .denot import FiniteBackend, NatRestriction, denot_eval_standard, load_model
    from .syntax import is_ground, pretty_type
    from .typecheck import check_signature
    prog, err = _load_program(args.file)
    defs, terr = (None, err) if err else _typed_defs(args, prog)
    if terr:
        emit(args, f"error: {terr}", {"command": "denot", "ok": False, "error": terr})
        return EXIT_FAIL
    binding = _load_model(args.model)
    sig = prog.signature
    problems = binding.compatibility(sig)
    if not problems:
        rep = check_signature(sig, model=binding)
        problems = [f"{c.name}: {c.detail}" for c in rep.failures()]
    if problems:
        emit(args, "\n".join(f"error: {p}" for p in problems),
             {"command": "denot", "ok": False, "errors": problems})
        return EXIT_FAIL
    fuel = config.current().fuel
    F = FiniteBackend(binding, sig)
    results, lines = [], []
    for d, ty, body in defs:
        entry = {"name": d.name, "type": pretty_type(ty), "backend": args.backend}
        backend = args.backend
        den = None
        if backend == "finite":
            try:
                den = F.interp_comp(body)
            except NatRestriction:
                if not is_ground(ty):
                    raise UsageError(f"{d.name}: nat occurs under a type former, so the finite "
                                     f"backend cannot tabulate it; use --backend standard") from None
                backend = "standard"
                entry["note"] = "routed to the standard backend: nat under a type former"
        if backend == "standard":
            res = denot_eval_standard(body, sig, fuel)
            den = res.value
            if res.reason:
                entry["bottom_reason"] = res.reason
            entry["backend"] = "standard"
        entry["denotation"] = show(den)
        text = f"{d.name} = {show(den)}"
        if backend == "finite" and isinstance(den, sh.Up) and isinstance(den.value, sh.Fn):
            dom = F.interp_type(ty.dom)
            graph = [[show(x), show(y)] for x, y in zip(dom.elements, den.value.table)]
            entry["graph"] = graph
            text += "".join(f"\n  {x} |-> {y}" for x, y in graph)
        if "note" in entry:
            text += f"\n  note: {entry['note']}"
        results.append(entry)
        lines.append(text)
    emit(args, "\n".join(lines), {"command": "denot", "ok": True, "model": binding.name, "results": results})
    return EXIT_OK


def _load_model(ref: str):
    from .denot import load_model
    try:
        return load_model(ref)
    except OSError as e:
        raise UsageError(f"cannot read model {ref}: {e.strerror or e}") from None
    except (json.JSONDecodeError, KeyError) as e:
        raise UsageError(f"malformed model {ref}: {e}") from None


# ---------------------------------------------------------------------------
# site

def cmd_site_validate(args) -> int:
    from .calibration import site_report
    rep = site_report(_load_site(args.file))
    emit(args, rep.format(), {"command": "site validate", **rep.to_dict()})
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_site_subm(args) -> int:
    from .site import sub_m_poset
    S = _load_site(args.file)
    if args.object not in S.objects:
        raise UsageError(f"unknown object {args.object!r}; objects are {list(S.objects)}")
    P = sub_m_poset(S, args.object)
    pts = S.objects[args.object]
    subs = [{"points": [pts[i] for i in sorted(s)], "mono": P.representative[s]} for s in P.elements]
    order = [[[pts[i] for i in sorted(a)], [pts[i] for i in sorted(b)]]
             for a, b in P.order_pairs() if a != b]
    lines = [f"Sub_M({args.object}) on {S.name}: {len(subs)} subobjects"]
    for s in subs:
        lines.append(f"  {{{', '.join(s['points'])}}} via {s['mono']}")
    emit(args, "\n".join(lines), {"command": "site subm", "site": S.name, "object": args.object,
                                  "subobjects": subs, "order": order})
    return EXIT_OK


def cmd_site_combine(args) -> int:
    from .calibration import site_report
    from .site import combine_sites
    S = combine_sites(_load_site(args.first), _load_site(args.second))
    rep = site_report(S)
    try:
        Path(args.output).write_text(json.dumps(S.to_json(), indent=1) + "\n")
    except OSError as e:
        raise UsageError(f"cannot write {args.output}: {e.strerror or e}") from None
    lines = [f"wrote {args.output}: {len(S.objects)} objects, {len(S.morphisms)} morphisms"]
    lines += [f"  note: {n}" for n in getattr(S, "notes", [])]
    lines.append(rep.format())
    emit(args, "\n".join(lines), {"command": "site combine", "output": args.output,
                                  "objects": len(S.objects), "morphisms": len(S.morphisms),
                                  "notes": list(getattr(S, "notes", [])), "validation": rep.to_dict()})
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# sheaf

def cmd_sheaf_validate(args) -> int:
    rep = sh.validate_sheaf(_load_sheaf(args.file))
    emit(args, rep.format(), {"command": "sheaf validate", **rep.to_dict()})
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_sheaf_hom(args) -> int:
    X, Y = _load_sheaf(args.source), _load_sheaf(args.target)
    if X.site.to_json()["objects"] != Y.site.to_json()["objects"]:
        raise UsageError("the two sheaves live on different sites")
    Y = sh.FiniteSheaf(X.site, Y.elements, le_pairs=Y.strict_pairs(), plots=Y.all_plots(), name=Y.name)
    n = sh.hom_count(X, Y)
    payload = {"command": "sheaf hom", "source": X.name, "target": Y.name, "count": n}
    lines = [f"{n} morphisms {X.name} -> {Y.name}"]
    if args.list:
        tables = sh.hom_set(X, Y)
        maps = [{str(X.label(i)): str(Y.label(j)) for i, j in enumerate(t)} for t in tables]
        payload["morphisms"] = maps
        for m in maps:
            lines.append("  " + ", ".join(f"{k} |-> {v}" for k, v in m.items()))
    emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_sheaf_lift(args) -> int:
    X = _load_sheaf(args.file)
    L = sh.lift(X, MonoClass.of(X.site))
    data = sh.sheaf_to_json(L, site_ref="")
    plots = {c: len(L.plots(c)) for c in X.site.objects}
    lines = [f"lift of {X.name}: {len(L)} elements, height {L.height()}",
             "  carrier: " + ", ".join(show(e) for e in L.elements),
             "  plots: " + ", ".join(f"{c}={k}" for c, k in plots.items())]
    if args.output:
        try:
            Path(args.output).write_text(json.dumps(data, indent=1) + "\n")
        except OSError as e:
            raise UsageError(f"cannot write {args.output}: {e.strerror or e}") from None
        lines.append(f"wrote {args.output}")
    emit(args, "\n".join(lines), {"command": "sheaf lift", "sheaf": X.name, "size": len(L),
                                  "carrier": [show(e) for e in L.elements],
                                  "order": [[show(L.label(i)), show(L.label(j))] for i, j in L.strict_pairs()],
                                  "plot_counts": plots})
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    from . import harness
    cfg = config.current()
    if args.theorem == "conservativity":
        binding = _load_model(args.model)
        rep = harness.check_conservativity(binding.site, binding.monos)
    else:
        binding = _load_model(args.model)
        corpus = harness.build_corpus(args.model, args.max_size, args.target or None)
        if args.theorem == "soundness":
            rep = harness.check_soundness(corpus, cfg.fuel, jobs=cfg.jobs)
        elif args.theorem == "adequacy":
            rep = harness.check_adequacy(corpus, cfg.fuel, jobs=cfg.jobs)
        else:
            rep = harness.check_fundamental(corpus, jobs=cfg.jobs)
    payload = rep.to_dict()
    payload.pop("schema")
    emit(args, rep.format(), {"command": f"verify {args.theorem}", "model": binding.name, **payload})
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing

def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap-carrier", type=_positive, help="largest carrier to construct (PCFV_CAP_CARRIER)")
    common.add_argument("--jobs", type=_positive, help="worker processes (PCFV_JOBS)")
    fuel = argparse.ArgumentParser(add_help=False)
    fuel.add_argument("--fuel", type=_positive, help="rule applications allowed (PCFV_FUEL)")

    p = argparse.ArgumentParser(prog="pcfv", description="Call-by-value PCF: typing, evaluation, "
                                "finite sheaf models and executable theorem checks.")
    p.add_argument("--version", action="version", version=f"pcfv {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)

    c = sub.add_parser("check", parents=[common], help="typecheck a program")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("run", parents=[common, fuel], help="evaluate definitions")
    c.add_argument("file")
    c.add_argument("--def", dest="def_name", metavar="NAME")
    c.set_defaults(func=cmd_run)

    c = sub.add_parser("denot", parents=[common, fuel], help="denotation in a model")
    c.add_argument("file")
    c.add_argument("--model", required=True, help="model JSON file or builtin:NAME")
    c.add_argument("--def", dest="def_name", metavar="NAME")
    c.add_argument("--backend", choices=("finite", "standard"), default="finite")
    c.set_defaults(func=cmd_denot)

    site = sub.add_parser("site", help="finite sites").add_subparsers(dest="action", metavar="ACTION", required=True)
    c = site.add_parser("validate", parents=[common], help="check the site axioms and mono class")
    c.add_argument("file", help="site JSON file or builtin:NAME")
    c.set_defaults(func=cmd_site_validate)
    c = site.add_parser("subm", parents=[common], help="list the M-subobjects of an object")
    c.add_argument("file")
    c.add_argument("--object", required=True)
    c.set_defaults(func=cmd_site_subm)
    c = site.add_parser("combine", parents=[common], help="glue two sites")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("-o", "--output", required=True)
    c.set_defaults(func=cmd_site_combine)

    shf = sub.add_parser("sheaf", help="finite sheaves").add_subparsers(dest="action", metavar="ACTION", required=True)
    c = shf.add_parser("validate", parents=[common], help="check the sheaf conditions")
    c.add_argument("file")
    c.set_defaults(func=cmd_sheaf_validate)
    c = shf.add_parser("hom", parents=[common], help="count morphisms X -> Y")
    c.add_argument("source")
    c.add_argument("target")
    c.add_argument("--list", action="store_true", help="also print every morphism")
    c.set_defaults(func=cmd_sheaf_hom)
    c = shf.add_parser("lift", parents=[common], help="the lifting of a sheaf")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_sheaf_lift)

    c = sub.add_parser("verify", parents=[common, fuel], help="run a theorem suite")
    c.add_argument("theorem", choices=("soundness", "adequacy", "fundamental", "conservativity"))
    c.add_argument("--model", required=True)
    c.add_argument("--max-size", type=_positive, default=5)
    c.add_argument("--target", action="append", help="result type of corpus terms (repeatable)")
    c.set_defaults(func=cmd_verify)
    return p


def _configure(args) -> None:
    cfg = config.from_env(fuel=getattr(args, "fuel", None),
                          cap_carrier=getattr(args, "cap_carrier", None),
                          jobs=getattr(args, "jobs", None),
                          fmt="json" if getattr(args, "json", False) else "text")
    config.set_current(cfg)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    saved = config.current()
    try:
        _configure(args)
        return args.func(args)
    except (UsageError, ValueError, SiteFormatError) as e:
        print(f"pcfv: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as e:
        print(f"pcfv: resource limit: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        config.set_current(saved)


if __name__ == "__main__":
    sys.exit(main())
