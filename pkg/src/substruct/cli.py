"""Command-line interface.

Every command prints a JSON report on stdout (keys sorted, so identical
inputs give byte-identical output) and diagnostics on stderr.

Exit codes: 0 ok, 1 usage or parse error, 2 counterexample found,
3 budget or ceiling exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import algebra, deduction, hierarchy
from .enumeration import CeilingError, enumerate_pcrls
from .formula import BASIC, FULL, imp, substitute
from .syntax import parse, to_text
from .translate import Mode, Sharing, translate

EXIT_OK, EXIT_USAGE, EXIT_COUNTEREXAMPLE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_formula_text(args) -> str:
    if getattr(args, "file", None):
        return Path(args.file).read_text().strip()
    if args.formula == "-":
        return sys.stdin.read().strip()
    if args.formula is None:
        raise UsageError("no formula given")
    return args.formula


def _profile(args):
    return BASIC if getattr(args, "no_bounds", False) else FULL


def _catalog(args):
    if getattr(args, "catalog", None):
        models = algebra.load_catalog(Path(args.catalog).read_text())
        return models, {"source": args.catalog, "models": len(models)}
    cat = enumerate_pcrls(args.max_size, _profile(args))
    return list(cat), {"max_size": args.max_size, "models": len(cat), "iso_pruned": cat.iso_pruned}


def _level(phi):
    lv = hierarchy.classify(phi)
    return {"p": lv.p, "n": lv.n}


def cmd_classify(args) -> tuple[dict, int]:
    text = _read_formula_text(args)
    phi = parse(text, _profile(args))
    return {"inputs": {"formula": text}, "results": {"formula": to_text(phi), "level": _level(phi)}}, EXIT_OK


def _battery(items, models, args):
    rep = algebra.battery_check(items, models, budget=args.budget, samples=args.samples, seed=args.seed)
    out = rep.to_dict()
    out["policy_by_model"] = [e["policy"] for e in rep.entries]
    return rep, out


def cmd_translate(args) -> tuple[dict, int]:
    text = _read_formula_text(args)
    phi = parse(text, _profile(args))
    mode = Mode(args.mode)
    res = translate(phi, mode, args.n, Sharing(args.share))
    results = {
        "mode": mode.value,
        "sharing": args.share,
        "source": to_text(phi),
        "source_level": _level(phi),
        "output": to_text(res.output),
        "output_level": _level(res.output),
        "factors": len(res.factors),
        "aliases": dict(res.allocation.aliases),
        "sigma": {k: to_text(v) for k, v in res.sigma.items()},
    }
    if mode is Mode.EQUIV:
        results["n"] = res.n
    report = {"inputs": {"formula": text}, "results": results}
    code = EXIT_OK
    if args.verify:
        models, info = _catalog(args)
        back = imp(substitute(res.sigma, res.output), phi)
        forth = imp(phi, res.output)
        rep16, out16 = _battery([back], models, args)
        rep18, out18 = _battery([forth], models, args)
        results["verify"] = {"sigma_output_implies_source": out16,
                             "source_implies_output": out18,
                             "valid": rep16.ok and rep18.ok}
        report["catalog"] = info
        report["seeds"] = {"seed": args.seed}
        if not (rep16.ok and rep18.ok):
            code = EXIT_COUNTEREXAMPLE
            for e in rep16.counterexamples + rep18.counterexamples:
                print(f"counterexample in model {e['model']}: {e['counterexample']}\n{e['algebra']}",
                      file=sys.stderr)
    return report, code


def cmd_models(args) -> tuple[dict, int]:
    if args.models_cmd == "enumerate":
        cat = enumerate_pcrls(args.max_size, _profile(args), iso_pruned=not args.labelled)
        text = algebra.dump_catalog(cat)
        if args.out:
            Path(args.out).write_text(text)
        sizes: dict[str, int] = {}
        for A in cat:
            sizes[str(A.size)] = sizes.get(str(A.size), 0) + 1
        results = {"models": len(cat), "by_size": sizes, "iso_pruned": cat.iso_pruned}
        if args.out:
            results["written"] = args.out
        return {"inputs": {"max_size": args.max_size}, "results": results}, EXIT_OK
    # check
    prof = _profile(args)
    if args.rule:
        items = [algebra.parse_rule(args.rule, prof)]
        inputs = {"rule": args.rule}
    else:
        text = _read_formula_text(args)
        items = [parse(text, prof)]
        inputs = {"formula": text}
    models, info = _catalog(args)
    rep, out = _battery(items, models, args)
    code = EXIT_OK if rep.ok else EXIT_COUNTEREXAMPLE
    if not rep.ok:
        first = rep.counterexamples[0]
        out["first_counterexample"] = {"model": first["model"], "size": first["size"],
                                       "valuation": first["counterexample"]}
    return {"inputs": inputs, "results": out, "catalog": info, "seeds": {"seed": args.seed}}, code


def cmd_deduce(args) -> tuple[dict, int]:
    prof = _profile(args)
    d = deduction.parse_derivation(Path(args.derivation).read_text(), prof)
    phi = parse(args.premise, prof)
    gamma = [f for f in deduction.premises_of(d) if f != phi]
    gamma += [parse(g, prof) for g in args.gamma]
    base = deduction.default_base(prof)
    res = deduction.deduction_transform(d, gamma, phi, base)
    results = {
        "premise": to_text(phi),
        "gamma": [to_text(g) for g in gamma],
        "conclusion": to_text(res.conclusion),
        "n": res.n,
        "result": to_text(res.formula),
        "steps": [{"node": w, "n": k, "formula": to_text(f)} for w, k, f in res.steps],
    }
    report = {"inputs": {"derivation": args.derivation, "premise": args.premise}, "results": results}
    code = EXIT_OK
    if args.verify:
        models, info = _catalog(args)
        rep, out = _battery([algebra.Rule(tuple(gamma), res.formula)], models, args)
        results["verify"] = out
        report["catalog"] = info
        report["seeds"] = {"seed": args.seed}
        if not rep.ok:
            code = EXIT_COUNTEREXAMPLE
    return report, code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="substruct", description=__doc__.splitlines()[0])
    p.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    p.add_argument("--no-bounds", action="store_true", help="exclude bot/top from the language")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def formula_args(sp):
        sp.add_argument("formula", nargs="?", help="formula text, or - for stdin")
        sp.add_argument("--file", help="read the formula from a file")

    def check_args(sp):
        sp.add_argument("--max-size", type=int, default=4)
        sp.add_argument("--catalog", help="catalog file instead of enumerating")
        sp.add_argument("--samples", type=int, default=algebra.DEFAULT_SAMPLES)
        sp.add_argument("--budget", type=int, default=algebra.DEFAULT_BUDGET,
                        help="largest valuation count checked exhaustively per model")
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=algebra.DEFAULT_SEED)

    sp = sub.add_parser("classify", help="substructural hierarchy levels")
    formula_args(sp)

    sp = sub.add_parser("translate", help="compile into an N3 axiom")
    formula_args(sp)
    sp.add_argument("--mode", choices=["mono", "equiv"], default="mono")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--share", choices=["occurrence", "formula"], default="occurrence")
    sp.add_argument("--verify", action="store_true")
    check_args(sp)

    sp = sub.add_parser("models", help="enumerate or check finite models")
    msub = sp.add_subparsers(dest="models_cmd", required=True, parser_class=_Parser)
    en = msub.add_parser("enumerate")
    en.add_argument("--max-size", type=int, default=4)
    en.add_argument("--out")
    en.add_argument("--labelled", action="store_true", help="keep isomorphic copies")
    ch = msub.add_parser("check")
    formula_args(ch)
    ch.add_argument("--rule", help="rule 'p1, p2 / c'")
    check_args(ch)

    sp = sub.add_parser("deduce", help="discharge a premise by the local deduction theorem")
    sp.add_argument("derivation")
    sp.add_argument("--premise", required=True)
    sp.add_argument("--gamma", action="append", default=[])
    sp.add_argument("--verify", action="store_true")
    check_args(sp)
    return p


COMMANDS = {"classify": cmd_classify, "translate": cmd_translate,
            "models": cmd_models, "deduce": cmd_deduce}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = COMMANDS[args.command](args)
    except (CeilingError, hierarchy.BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except deduction.Rejected as exc:
        print(f"error: derivation rejected at node {exc.where}: {exc.reason}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"command": args.command, "argv": argv, **report}
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 3)
    json.dump(report, sys.stdout, indent=2, sort_keys=True, ensure_ascii=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
