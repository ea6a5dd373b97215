"""Command-line front end: analyze, construct, verify, search, export.

Exit codes: 0 success / all assertions pass, 1 an assertion failed, 2 usage,
parse or field error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from .boolfn import TruthTable, walsh_spectrum
from .constructions import (ConstructionError, ConstructionSpec, ReducedPolynomial, mm_params, orthogonal_set,
                            search_binomials, search_niho_k2)
from .expr import ExprError, compile_source, field_ambient, product_ambient, tower_ambient
from .field import REGISTRY_ENV, FieldError, default_registry, make_field, make_tower
from .vecfn import VectorialFunction, analyze, component_spectrum, differential_spectrum
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m: Optional[int]
    n: Optional[int]
    modulus: Optional[str]
    registry: Optional[str]
    func: Optional[str]
    jobs: int
    seed: int
    output: Optional[str]
    fmt: str


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(args.command, getattr(args, "m", None), getattr(args, "n", None),
                     getattr(args, "modulus", None), getattr(args, "registry", None),
                     getattr(args, "func", None), getattr(args, "jobs", 1), getattr(args, "seed", 0),
                     getattr(args, "output", None), getattr(args, "format", "json"))


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _registry(cfg: RunConfig) -> Optional[Dict[int, int]]:
    path = cfg.registry or os.environ.get(REGISTRY_ENV)
    return default_registry(path) if path else None


def _ambient(cfg: RunConfig, product: bool = False):
    reg = _registry(cfg)
    mod = cfg.modulus or "default"
    if product:
        if cfg.m is None:
            raise UsageError("--product needs --m")
        return product_ambient(make_field(cfg.m, mod, reg))
    if cfg.m is not None:
        if cfg.n is not None and cfg.n != 2 * cfg.m:
            raise UsageError("--n must equal 2*m when both are given")
        return tower_ambient(make_tower(cfg.m, mod, "default", reg))
    if cfg.n is None:
        raise UsageError("give --m (field GF(2^(2m))) or --n (field GF(2^n))")
    return field_ambient(make_field(cfg.n, mod, reg))


def _load_function(cfg: RunConfig, product: bool = False):
    """Expression text, or a construction spec as JSON (inline or @file)."""
    if not cfg.func:
        raise UsageError("--func is required")
    text = cfg.func
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    if text.lstrip().startswith("{"):
        return ConstructionSpec.from_json(text).build()
    return compile_source(text, _ambient(cfg, product))


def _as_vectorial(obj) -> VectorialFunction:
    if isinstance(obj, TruthTable):
        raise UsageError("this command needs a vectorial function, not a Boolean one")
    return obj


# -- commands ----------------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    cfg = _config(args)
    F = _as_vectorial(_load_function(cfg, args.product))
    rep = analyze(F, jobs=cfg.jobs)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["component", "class"])
        for k, v in rep.plateau_summary.items():
            w.writerow([k, v])
        _emit(buf.getvalue(), cfg.output)
    else:
        _emit(rep.to_json(), cfg.output)
    return EXIT_OK


def _default_params(kind: str, m: int, rng: np.random.Generator) -> Dict[str, Any]:
    T = make_tower(m)
    if kind == "TracePerm":
        return {"e": 1 % m, "h": rng.permutation(T.small.order).tolist()}
    if kind == "NihoGeneral":
        if m < 3:
            raise UsageError("NihoGeneral needs m >= 3")
        u1, us = orthogonal_set(T, 3, rng)
        return {"u1": u1, "us": us, "R": ReducedPolynomial.random(3, rng).to_list()}
    if kind == "NihoK2":
        pairs = search_niho_k2(T, outside_only=True) or search_niho_k2(T)
        u1, u2 = pairs[int(rng.integers(len(pairs)))]
        return {"u1": u1, "u2": u2}
    if kind == "MM":
        u11, us = mm_params(T.small, 1 % m, 2, rng)
        return {"j": 1 % m, "u11": u11, "us": [list(p) for p in us], "R": [0, 1]}
    return {"i": 0}


def cmd_construct(args) -> int:
    cfg = _config(args)
    if args.spec:
        text = args.spec
        if text.startswith("@"):
            with open(text[1:]) as fh:
                text = fh.read()
        spec = ConstructionSpec.from_json(text)
    else:
        if cfg.m is None:
            raise UsageError("construct needs --m (or --spec)")
        params = json.loads(args.params) if args.params else _default_params(args.kind, cfg.m,
                                                                              np.random.default_rng(cfg.seed))
        spec = ConstructionSpec(args.kind, cfg.m, params)
    F = spec.build()
    rep = analyze(F, jobs=cfg.jobs)
    out = {"spec": spec.to_dict(), "n": F.n, "bent_count": rep.bent_count, "is_maximal": rep.is_maximal,
           "nonlinearity": rep.nonlinearity}
    if args.table:
        out["table"] = F.table.tolist()
    _emit(json.dumps(out, indent=2) + "\n", cfg.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    m = args.m_max if args.m_max is not None else cfg.m
    try:
        reports = run_suite(args.suite, m=m, trials=args.trials, seed=args.seed, row=args.row, e=args.e)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.suite}: {len(r.assertions) - len(r.failures())}/{len(r.assertions)} assertions",
              file=sys.stderr)
    payload = [r.to_dict() for r in reports]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "assertion", "passed"])
        for r in reports:
            for a in r.assertions:
                w.writerow([r.suite, a.name, int(a.passed)])
        _emit(buf.getvalue(), cfg.output)
    else:
        _emit(json.dumps(payload if len(payload) > 1 else payload[0], indent=2) + "\n", cfg.output)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_search(args) -> int:
    cfg = _config(args)
    if args.target == "binomials":
        if cfg.n is None:
            raise UsageError("search binomials needs --n")
        res = search_binomials(cfg.n, budget=args.budget, checkpoint=args.checkpoint, jobs=cfg.jobs)
        if cfg.fmt == "json":
            text = json.dumps({"n": res.n, "complete": res.complete,
                               "last_completed_outer_index": res.last_completed_outer_index,
                               "hits": [h.__dict__ for h in res.hits]}, indent=2) + "\n"
        else:
            text = res.to_csv()
        _emit(text, cfg.output)
        state = "complete" if res.complete else f"stopped after outer index {res.last_completed_outer_index}"
        print(f"{len(res.hits)} hits, {res.evaluated} pairs examined, {state}", file=sys.stderr)
        return EXIT_OK
    if cfg.m is None:
        raise UsageError("search niho-k2 needs --m")
    pairs = search_niho_k2(make_tower(cfg.m, cfg.modulus or "default", "default", _registry(cfg)),
                           outside_only=args.outside)
    if cfg.fmt == "json":
        text = json.dumps({"m": cfg.m, "pairs": [{"u1": f"0x{a:x}", "u2": f"0x{b:x}"} for a, b in pairs]},
                          indent=2) + "\n"
    else:
        text = "m,u1,u2\n" + "".join(f"{cfg.m},0x{a:x},0x{b:x}\n" for a, b in pairs)
    _emit(text, cfg.output)
    print(f"{len(pairs)} witness pairs", file=sys.stderr)
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = _config(args)
    obj = _load_function(cfg, args.product)
    if args.what == "spectrum":
        if isinstance(obj, TruthTable):
            text = walsh_spectrum(obj).to_csv()
        else:
            if args.component is None:
                raise UsageError("export spectrum of a vectorial function needs --component")
            a = int(args.component, 0)
            if not 0 < a < obj.domain.size:
                raise UsageError(f"--component must be a nonzero element below {obj.domain.size}")
            text = component_spectrum(obj, a).to_csv()
    else:
        text = differential_spectrum(_as_vectorial(obj), jobs=cfg.jobs).to_csv()
    _emit(text, cfg.output)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------------

def _field_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, help="half degree; work in GF(2^(2m)) with its subfield GF(2^m)")
    p.add_argument("--n", type=int, help="field degree when no tower is needed")
    p.add_argument("--modulus", help="defining polynomial of the field, hex (e.g. 0x13)")
    p.add_argument("--registry", help=f"modulus registry file (default: ${REGISTRY_ENV} or built-in)")


def _common(p: argparse.ArgumentParser, fmt=("json", "csv"), default="json") -> None:
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", help="write the primary output here instead of stdout")
    p.add_argument("--format", choices=fmt, default=default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxbent",
                                 description="Vectorial functions with many bent components over GF(2^n).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="exhaustive component report for one function")
    _field_opts(p)
    p.add_argument("--func", required=True, help="expression, JSON construction spec, or @file")
    p.add_argument("--product", action="store_true", help="domain GF(2^m) x GF(2^m) with variables y, z")
    _common(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("construct", help="build a family member and report its bent count")
    _field_opts(p)
    p.add_argument("--kind", choices=["TracePerm", "NihoGeneral", "NihoK2", "MM", "Binomial"], default="NihoK2")
    p.add_argument("--params", help="kind-specific parameters as JSON (default: seeded valid choice)")
    p.add_argument("--spec", help="full construction spec JSON (or @file)")
    p.add_argument("--table", action="store_true", help="include the value table")
    _common(p, ("json",))
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help="suite id or 'all'")
    p.add_argument("--m", type=int)
    p.add_argument("--m-max", type=int, dest="m_max")
    p.add_argument("--trials", type=int)
    p.add_argument("--row", help="exponent row: gold, kasami, row3, row4, row5, row6")
    p.add_argument("--e", type=int)
    _common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("search", help="witness searches")
    p.add_argument("target", choices=["binomials", "niho-k2"])
    _field_opts(p)
    p.add_argument("--budget", type=int, help="max exponent pairs to examine in this run")
    p.add_argument("--checkpoint", help="JSON checkpoint file; resumes if it exists")
    p.add_argument("--outside", action="store_true", help="niho-k2: only pairs with u1, u2 outside GF(2^m)")
    _common(p, ("csv", "json"), "csv")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("export", help="CSV tables: Walsh spectrum or differential histogram")
    p.add_argument("what", choices=["spectrum", "delta"])
    _field_opts(p)
    p.add_argument("--func", required=True)
    p.add_argument("--component", help="component index for vectorial functions (int or hex)")
    p.add_argument("--product", action="store_true")
    _common(p, ("csv",), "csv")
    p.set_defaults(handler=cmd_export)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except ExprError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, FieldError, ConstructionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
