"""Command-line surface.

Every command prints a single JSON document (the run manifest) on stdout:
command line, input digests, library version, budgets, results, and elapsed
time. Re-running an invocation reproduces the `results` object byte for byte;
only the timing field varies. Diagnostics go to stderr.

Exit codes: 0 ok, 1 usage or parse error, 2 violated math precondition,
3 enumeration budget exceeded, 4 cross-check disagreement.

The point-enumeration budget defaults to 2*10^7 and can be overridden with
--budget or the FAITHDIM_BUDGET environment variable; the oracle's character
budget (default 10^6) with FAITHDIM_ORACLE_BUDGET.
"""

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .commutator import build_commutator_data, symbolic_entries_json
from .dedekind import MonicIntPoly, factor_degrees, frobenius_sample, sp_generators
from .engine import DEFAULT_BUDGET, check_bounds, fdim_field, fdim_ring, fit_mu
from .errors import (
    BudgetError,
    CrossCheckError,
    FaithdimError,
    ParameterError,
    ValidationError,
)
from .liecore import load_algebra, structural_data, to_json_dict, validate
from .metabelian import metabelian_algebra, metabelian_fdim
from .oracle import DEFAULT_CHARACTER_BUDGET, PGroup, coadjoint_orbits, fdim_bruteforce
from .pattern import load_poset, pattern_algebra, pattern_fdim
from .rings import ChainRing, FiniteField

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_CROSSCHECK = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


class _Manifest:
    def __init__(self, argv):
        self.started = time.monotonic()
        self.doc = {
            "command": ["faithdim"] + list(argv),
            "inputs": {},
            "version": __version__,
            "budgets": {},
            "results": {},
        }

    def digest(self, path: str):
        with open(path, "rb") as fh:
            self.doc["inputs"][path] = hashlib.sha256(fh.read()).hexdigest()

    def emit(self, code: int) -> int:
        self.doc["elapsed_ms"] = int((time.monotonic() - self.started) * 1000)
        json.dump(self.doc, sys.stdout, indent=1, ensure_ascii=False)
        sys.stdout.write("\n")
        return code


def _point_budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("FAITHDIM_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _oracle_budget() -> int:
    env = os.environ.get("FAITHDIM_ORACLE_BUDGET")
    return int(env) if env else DEFAULT_CHARACTER_BUDGET


def _load_input_algebra(args, manifest: _Manifest):
    """The algebra plus its closed-form evaluator, when a preset is used."""
    closed = None
    if getattr(args, "metabelian", None):
        n, c = args.metabelian
        g = metabelian_algebra(n, c)

        def closed(d, p, e, f):
            return metabelian_fdim(n, c, d, p, e, f), "closed-form-metabelian"

    elif getattr(args, "pattern", None):
        manifest.digest(args.pattern)
        poset = load_poset(args.pattern)
        g = pattern_algebra(poset)

        def closed(d, p, e, f):
            return pattern_fdim(poset, d, p, e, f), "closed-form-pattern"

    else:
        if not args.algebra:
            raise ParameterError(
                "provide an algebra file, --pattern, or --metabelian"
            )
        manifest.digest(args.algebra)
        g = load_algebra(args.algebra)
    return g, closed


def _oracle_ring(p: int, f: int, e: int, d: int):
    if e == 1 and d == 1:
        return FiniteField(p, f)
    if e == 1 and f == 1:
        return ChainRing(p, 1, 1, d)
    return None


def cmd_info(args, manifest: _Manifest) -> int:
    manifest.digest(args.algebra)
    g = load_algebra(args.algebra)
    cls = validate(g)
    sd = structural_data(g)
    data, F = build_commutator_data(g)
    manifest.doc["results"] = {
        "name": g.name,
        "rank": g.rank,
        "class": cls,
        "center_rank": len(sd.center_semibasis),
        "derived_rank": len(sd.derived_semibasis),
        "l1": data.l1,
        "l2": data.l2,
        "l3": data.l3,
        "m": data.m,
        "n": data.n,
        "K": data.K,
        "commutator_matrix": symbolic_entries_json(F),
    }
    return manifest.emit(EXIT_OK)


def cmd_validate(args, manifest: _Manifest) -> int:
    manifest.digest(args.algebra)
    g = load_algebra(args.algebra)
    cls = validate(g)
    manifest.doc["results"] = {"name": g.name, "valid": True, "class": cls}
    return manifest.emit(EXIT_OK)


def cmd_fdim(args, manifest: _Manifest) -> int:
    g, closed = _load_input_algebra(args, manifest)
    p, f, e, d = args.p, args.f, args.e, args.d
    budget = _point_budget(args)
    manifest.doc["budgets"] = {
        "points": budget, "characters": _oracle_budget(),
    }
    results = []
    if closed is not None and (args.all_methods or not args.oracle):
        value, tag = closed(d, p, e, f)
        results.append({
            "algebra": g.name, "ring": {"p": p, "f": f, "e": e, "d": d},
            "value": value, "method": tag, "witness": [], "flags": [],
        })
    run_engine = args.all_methods or closed is None or args.engine
    if run_engine:
        if e == 1 and d == 1:
            res = fdim_field(g, p, f, budget=budget)
        else:
            res = fdim_ring(g, ChainRing(p, f, e, d), budget=budget)
        results.append(res.to_json_dict())
    if args.oracle or args.all_methods:
        ring = _oracle_ring(p, f, e, d)
        if ring is None:
            if args.oracle:
                raise ParameterError(
                    "oracle supports only F_{p^f} (e=d=1) and Z/p^d (e=f=1)"
                )
        else:
            group = PGroup(g, ring)
            if group.size <= _oracle_budget():
                res, _ = fdim_bruteforce(group, budget=_oracle_budget())
                results.append(res.to_json_dict())
            elif args.oracle:
                raise BudgetError(group.size, _oracle_budget())
    values = {r["value"] for r in results}
    manifest.doc["results"] = {
        "results": results,
        "agreement": len(values) == 1,
    }
    if len(values) != 1:
        sys.stderr.write(f"cross-check disagreement: {sorted(values)}\n")
        return manifest.emit(EXIT_CROSSCHECK)
    return manifest.emit(EXIT_OK)


def cmd_explore(args, manifest: _Manifest) -> int:
    g, _ = _load_input_algebra(args, manifest)
    primes = [int(t) for t in args.primes.split(",")]
    fs = [int(t) for t in args.fs.split(",")]
    budget = _point_budget(args)
    manifest.doc["budgets"] = {"points": budget}
    cells = []
    values = {}
    budget_hit = False
    for p in sorted(set(primes)):
        for f in sorted(set(fs)):
            cell = {"p": p, "f": f}
            try:
                res = fdim_field(g, p, f, budget=budget)
                values[(p, f)] = res
                cell["value"] = res.value
                cell["flags"] = list(res.flags)
            except BudgetError as exc:
                cell["error"] = "budget"
                cell["required"] = exc.required
                budget_hit = True
            cells.append(cell)
    report = fit_mu(g, values) if values else None
    if report is not None:
        for cell in cells:
            key = (cell["p"], cell["f"])
            if key in report.mu_by_point:
                mu = report.mu_by_point[key]
                cell["mu"] = list(mu.exponents)
                cell["g"] = _poly_string(mu.exponents, report.l2)
    ring_checks = []
    bound_violation = False
    if args.ds and args.es and report is not None:
        ds = [int(t) for t in args.ds.split(",")]
        es = [int(t) for t in args.es.split(",")]
        for (p, f), mu in sorted(report.mu_by_point.items()):
            for d in ds:
                for e in es:
                    if e > d or (e == 1 and d == 1):
                        continue
                    try:
                        br = check_bounds(
                            g, mu, ChainRing(p, f, e, d), budget=budget
                        )
                    except BudgetError as exc:
                        ring_checks.append({
                            "p": p, "f": f, "e": e, "d": d,
                            "error": "budget", "required": exc.required,
                        })
                        budget_hit = True
                        continue
                    ring_checks.append({
                        "p": p, "f": f, "e": e, "d": d,
                        "value": br.value, "lower": br.lower, "upper": br.upper,
                        "bounds_ok": br.ok,
                        "conjecture_attained": br.conjecture_attained,
                    })
                    if not br.ok:
                        bound_violation = True
    partition = []
    if report is not None:
        for mu, pts in sorted(
            report.partition.items(), key=lambda kv: kv[0].exponents
        ):
            partition.append({
                "mu": list(mu.exponents),
                "g": _poly_string(mu.exponents, report.l2),
                "points": [list(t) for t in pts],
            })
    manifest.doc["results"] = {
        "algebra": g.name,
        "cells": cells,
        "partition": partition,
        "no_fit": [list(t) for t in report.no_fit] if report else [],
        "ring_checks": ring_checks,
    }
    if report is not None and report.no_fit or bound_violation:
        return manifest.emit(EXIT_CROSSCHECK)
    if budget_hit:
        return manifest.emit(EXIT_BUDGET)
    return manifest.emit(EXIT_OK)


def _poly_string(exponents, l2: int) -> str:
    terms = {}
    for a in exponents:
        terms[a] = terms.get(a, 0) + 1
    parts = []
    for a in sorted(terms, reverse=True):
        c = terms[a]
        coef = "" if c == 1 else str(c)
        if a == 0:
            parts.append(str(c))
        elif a == 1:
            parts.append(f"{coef}T")
        else:
            parts.append(f"{coef}T^{a}")
    if l2:
        parts.append(str(l2))
    return " + ".join(parts) if parts else "0"


def cmd_splitting(args, manifest: _Manifest) -> int:
    h = MonicIntPoly.parse(args.poly)
    if args.p is not None:
        fd = factor_degrees(h, args.p)
        out = {
            "poly": list(h.coefficients),
            "p": args.p,
            "degrees": list(fd.degrees),
            "ramified": fd.ramified,
        }
        if not fd.ramified:
            out["sp_generators"] = list(sp_generators(h, args.p))
        manifest.doc["results"] = out
    else:
        sample = frobenius_sample(h, args.pmax)
        manifest.doc["results"] = {
            "poly": list(h.coefficients),
            "p_max": args.pmax,
            **sample.to_json_dict(),
        }
    return manifest.emit(EXIT_OK)


def cmd_metabelian_gen(args, manifest: _Manifest) -> int:
    g = metabelian_algebra(args.n, args.c)
    doc = to_json_dict(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        manifest.doc["results"] = {"written": args.output, "rank": g.rank}
    else:
        manifest.doc["results"] = doc
    return manifest.emit(EXIT_OK)


def cmd_pattern_gen(args, manifest: _Manifest) -> int:
    manifest.digest(args.poset)
    poset = load_poset(args.poset)
    g = pattern_algebra(poset)
    doc = to_json_dict(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        manifest.doc["results"] = {"written": args.output, "rank": g.rank}
    else:
        manifest.doc["results"] = doc
    return manifest.emit(EXIT_OK)


def _build_parser() -> _Parser:
    parser = _Parser(prog="faithdim")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_info = sub.add_parser("info", help="structural report for an algebra file")
    p_info.add_argument("algebra")

    p_val = sub.add_parser("validate", help="Jacobi and nilpotency check")
    p_val.add_argument("algebra")

    p_fdim = sub.add_parser("fdim", help="faithful dimension computations")
    p_fdim.add_argument("algebra", nargs="?")
    p_fdim.add_argument("--pattern", help="poset file defining a pattern algebra")
    p_fdim.add_argument("--metabelian", nargs=2, type=int, metavar=("N", "C"))
    p_fdim.add_argument("--p", type=int, required=True)
    p_fdim.add_argument("--f", type=int, required=True)
    p_fdim.add_argument("--e", type=int, default=1)
    p_fdim.add_argument("--d", type=int, default=1)
    p_fdim.add_argument("--oracle", action="store_true")
    p_fdim.add_argument("--engine", action="store_true",
                        help="force the engine even when a closed form applies")
    p_fdim.add_argument("--all-methods", action="store_true")
    p_fdim.add_argument("--budget", type=int)

    p_exp = sub.add_parser("explore", help="polynomiality explorer over (p, f)")
    p_exp.add_argument("algebra", nargs="?")
    p_exp.add_argument("--pattern")
    p_exp.add_argument("--metabelian", nargs=2, type=int, metavar=("N", "C"))
    p_exp.add_argument("--primes", required=True)
    p_exp.add_argument("--fs", required=True)
    p_exp.add_argument("--ds", help="ring truncation lengths for bound checks")
    p_exp.add_argument("--es", help="ring ramification indices for bound checks")
    p_exp.add_argument("--budget", type=int)

    p_split = sub.add_parser("splitting", help="factorization degrees mod p")
    p_split.add_argument("poly", help="integer coefficients, constant first")
    grp = p_split.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=int)
    grp.add_argument("--pmax", type=int)

    p_mg = sub.add_parser("metabelian-gen", help="emit m_{n,c} as an algebra file")
    p_mg.add_argument("n", type=int)
    p_mg.add_argument("c", type=int)
    p_mg.add_argument("-o", "--output")

    p_pg = sub.add_parser("pattern-gen", help="emit a pattern algebra file")
    p_pg.add_argument("poset")
    p_pg.add_argument("-o", "--output")
    return parser


_HANDLERS = {
    "info": cmd_info,
    "validate": cmd_validate,
    "fdim": cmd_fdim,
    "explore": cmd_explore,
    "splitting": cmd_splitting,
    "metabelian-gen": cmd_metabelian_gen,
    "pattern-gen": cmd_pattern_gen,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    manifest = _Manifest(argv)
    try:
        return _HANDLERS[args.cmd](args, manifest)
    except BudgetError as exc:
        sys.stderr.write(f"budget error: {exc}\n")
        manifest.doc["results"] = {
            "error": {"type": "budget", "message": str(exc), "required": exc.required}
        }
        return manifest.emit(EXIT_BUDGET)
    except CrossCheckError as exc:
        sys.stderr.write(f"cross-check error: {exc}\n")
        manifest.doc["results"] = {
            "error": {"type": "cross-check", "message": str(exc)}
        }
        return manifest.emit(EXIT_CROSSCHECK)
    except ValidationError as exc:
        sys.stderr.write(f"validation error: {exc} (witness {exc.witness})\n")
        manifest.doc["results"] = {
            "error": {
                "type": exc.kind,
                "message": str(exc),
                "witness": list(exc.witness),
            }
        }
        return manifest.emit(EXIT_PRECONDITION)
    except FaithdimError as exc:
        sys.stderr.write(f"error: {exc}\n")
        manifest.doc["results"] = {
            "error": {"type": type(exc).__name__, "message": str(exc)}
        }
        return manifest.emit(EXIT_PRECONDITION)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        manifest.doc["results"] = {
            "error": {"type": "input", "message": str(exc)}
        }
        return manifest.emit(EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
