"""``gdlog`` command line.

Exit codes: 0 success, 1 usage error, 2 input error, 3 capacity exceeded or
an inconclusive (truncated) result.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bckov import check_isomorphism
from .chase import Budget, explore, random_selector
from .dist import BUILTINS
from .errors import CapacityError, GdlogError, InputError, NotStratifiedError, TruncationError
from .ground import ChoiceSet, PerfectGrounder, is_compatible, make_grounder, stratify
from .model import Database, attach_database, format_rules
from .parser import parse_rational, parse_atom, parse_database, parse_distributions, parse_ground_rules, parse_program
from .prob import as_good_as, build_distribution, distribution_json, query, rational, rational_json
from .stable import DEFAULT_BRUTE_FORCE_CAP, all_stable_models
from .translate import translate_program

FORMAT_VERSION = 1


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    program: Path | None = None
    database: Path | None = None
    distributions: Path | None = None
    grounder: str = "simple"
    max_steps: int | None = None
    min_path_prob: Fraction = Fraction(0)
    output: str = "json"
    project: bool = False
    brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP
    seed: int | None = None

    def __post_init__(self):
        if self.max_steps is not None and self.max_steps <= 0:
            raise UsageError("--max-steps must be positive")
        if not 0 <= self.min_path_prob <= 1:
            raise UsageError("--min-path-prob must lie in [0, 1]")
        if self.brute_force_cap <= 0:
            raise UsageError("--brute-force-cap must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            program=getattr(args, "program", None),
            database=getattr(args, "database", None),
            distributions=getattr(args, "distributions", None),
            grounder=getattr(args, "grounder", "simple"),
            max_steps=getattr(args, "max_steps", None),
            min_path_prob=getattr(args, "min_path_prob", Fraction(0)),
            output=getattr(args, "format", "json"),
            project=getattr(args, "project_user_predicates", False),
            brute_force_cap=getattr(args, "brute_force_cap", DEFAULT_BRUTE_FORCE_CAP),
            seed=getattr(args, "seed", None),
        )

    def budget(self) -> Budget:
        return Budget.make(self.max_steps, self.min_path_prob)

    def selector(self):
        return None if self.seed is None else random_selector(random.Random(self.seed))


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(cfg: RunConfig):
    registry = BUILTINS
    if cfg.distributions:
        registry = parse_distributions(_read(cfg.distributions), BUILTINS)
    program = parse_program(_read(cfg.program), registry, file=str(cfg.program))
    db = parse_database(_read(cfg.database), file=str(cfg.database)) if cfg.database else Database()
    return program, db, registry


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(doc: dict, out):
    out.write(json.dumps({"format": FORMAT_VERSION, **doc}, indent=2, ensure_ascii=False) + "\n")


# -- subcommands -----------------------------------------------------------------

def cmd_check(cfg: RunConfig, args, out) -> int:
    program, db, _ = _load(cfg)
    full = attach_database(program, db)
    strata = stratify(full)
    _emit({
        "rules": len(program),
        "facts": len(db),
        "edb": sorted(program.edb()),
        "idb": sorted(program.idb()),
        "stratified": strata.stratified,
        "strata": [sorted(c) for c in strata.components],
        "negative_cycle_edge": list(strata.negative_cycle) or None,
    }, out)
    return 0


def cmd_translate(cfg: RunConfig, args, out) -> int:
    program, _, _ = _load(cfg)
    tr = translate_program(program)
    # TGD equality ignores the origin, so this drops the per-stratum copies
    exists, noexists = list(dict.fromkeys(tr.sigma_exists)), list(dict.fromkeys(tr.sigma_noexists))
    if cfg.output == "table":
        out.write("% existential (AtR) TGDs\n")
        out.writelines(f"{t}\n" for t in exists)
        out.write("% existential-free TGDs\n")
        out.writelines(f"{t}\n" for t in noexists)
        return 0
    _emit({"sigma_exists": [str(t) for t in exists], "sigma_noexists": [str(t) for t in noexists]}, out)
    return 0


def _grounder(cfg: RunConfig, program, db, registry):
    return make_grounder(attach_database(program, db), cfg.grounder, registry)


def cmd_ground(cfg: RunConfig, args, out) -> int:
    program, db, registry = _load(cfg)
    g = _grounder(cfg, program, db, registry)
    choices = ChoiceSet(parse_ground_rules(_read(args.choices), str(args.choices)) if args.choices else ())
    rules = g(choices)
    if args.trace and isinstance(g, PerfectGrounder):
        for comp, step in zip(g.order, g.trace(choices)):
            out.write(f"% up to stratum {{{', '.join(sorted(comp))}}}\n{format_rules(step)}\n")
        return 0
    if cfg.output == "table":
        out.write(format_rules(rules) + ("\n" if rules else ""))
        return 0
    _emit({"grounder": g.name, "rules": [str(r) for r in sorted(rules)],
           "compatible": is_compatible(choices, rules)}, out)
    return 0


def cmd_chase(cfg: RunConfig, args, out) -> int:
    program, db, registry = _load(cfg)
    g = _grounder(cfg, program, db, registry)
    res = explore(g, cfg.budget(), cfg.selector(), record_tree=bool(args.dump_tree))
    if args.dump_tree:
        tree = [{**n, "prob_edge": None if n["prob_edge"] is None else rational(n["prob_edge"])}
                for n in res.nodes]
        Path(args.dump_tree).write_text(json.dumps({"format": FORMAT_VERSION, "nodes": tree}, indent=2) + "\n")
    paths = sorted(res.complete, key=lambda p: sorted(r.sort_key for r in p.choices.rules))
    if cfg.output == "table":
        for p in paths:
            out.write(f"{rational(p.prob)}\t{'; '.join(map(str, p.choices))}\n")
        out.write(f"complete={len(res.complete)} truncated={len(res.truncated)} "
                  f"truncated_mass={rational(res.truncated_mass)}\n")
        return 0
    _emit({
        "grounder": g.name,
        "complete_paths": len(res.complete),
        "truncated_paths": len(res.truncated),
        "complete_mass": rational(res.complete_mass),
        "truncated_mass": rational(res.truncated_mass),
        "paths": [{"choices": [str(r) for r in p.choices], "prob": rational(p.prob), "length": p.length}
                  for p in paths],
    }, out)
    return 0


def _parse_query(text: str):
    name, _, arg = text.partition(":")
    name = name.strip()
    if name == "has-stable-model":
        if arg:
            raise UsageError("has-stable-model takes no argument")
        return name, None
    if name in ("atom-brave", "atom-cautious"):
        return name, parse_atom(arg)
    if name == "sms-class":
        try:
            models = json.loads(arg)
            return name, tuple(sorted((tuple(sorted(parse_atom(a) for a in m)) for m in models),
                                      key=lambda m: [a.sort_key for a in m]))
        except (json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"sms-class expects a JSON list of models: {exc}") from None
    raise UsageError(f"unknown query {name!r}")


def _distribution(cfg: RunConfig, program, db, registry, grounder_kind: str):
    full = attach_database(program, db)
    g = make_grounder(full, grounder_kind, registry)
    res = explore(g, cfg.budget(), cfg.selector())
    return build_distribution(res, full, cap=cfg.brute_force_cap, project=cfg.project)


def cmd_prob(cfg: RunConfig, args, out) -> int:
    program, db, registry = _load(cfg)
    queries = [_parse_query(q) for q in args.query or ()]
    dist = _distribution(cfg, program, db, registry, cfg.grounder)
    doc = distribution_json(dist)
    results = []
    top = {}
    for text, (name, arg) in zip(args.query or (), queries):
        value = rational_json(query(dist, name, arg))
        results.append({"query": text, "result": value})
        key = name.replace("-", "_") + ("" if arg is None else f"({text.partition(':')[2]})")
        top[key] = value
    if cfg.output == "table":
        for c in dist.sorted_classes():
            models = " | ".join("{" + ", ".join(map(str, m)) + "}" for m in c.sms) or "(no stable model)"
            out.write(f"{rational(c.mass)}\t{models}\n")
        for r in results:
            out.write(f"{r['query']}\t{r['result']}\n")
        return 0
    _emit({**top, "grounder": cfg.grounder, **doc, "query_results": results}, out)
    return 0


def cmd_compare(cfg: RunConfig, args, out) -> int:
    program, db, registry = _load(cfg)
    a = _distribution(cfg, program, db, registry, args.a)
    b = _distribution(cfg, program, db, registry, args.b)
    v = as_good_as(a, b)
    doc = {"a": args.a, "b": args.b, "as_good_as": v.as_good_as}
    if not v.as_good_as:
        doc["witness"] = {"models": [[str(x) for x in m] for m in v.witness],
                          "mass_a": rational(v.mass_a), "mass_b": rational(v.mass_b)}
    _emit(doc, out)
    return 0


def cmd_bckov(cfg: RunConfig, args, out) -> int:
    program, db, registry = _load(cfg)
    rep = check_isomorphism(program, db, registry, cfg.budget())
    _emit({
        "verdict": rep.verdict,
        "reason": rep.reason or None,
        "matches": [{"model": [str(a) for a in sorted(m)], "prob_simple": rational(ps), "prob_bckov": rational(pb)}
                    for m, ps, pb in rep.pairs],
        "unmatched_simple": [[str(a) for a in sorted(m)] for m in rep.unmatched_simple],
        "unmatched_bckov": [[str(a) for a in sorted(m)] for m in rep.unmatched_bckov],
    }, out)
    return 3 if rep.verdict == "inconclusive" else 0


def cmd_sms(cfg: RunConfig, args, out) -> int:
    rules = parse_ground_rules(_read(args.ground), str(args.ground))
    for m in all_stable_models(rules, args.method, cfg.brute_force_cap):
        out.write(" ".join(map(str, m)) + "\n")
    return 0


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="gdlog", description="Inference for generative Datalog with stable negation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def common(sp, grounder=True, budget=True):
        sp.add_argument("-p", "--program", type=Path, required=True, help=".gdl program")
        sp.add_argument("-d", "--database", type=Path, help=".facts database")
        sp.add_argument("--distributions", type=Path, help=".dist.json with extra distributions")
        sp.add_argument("--format", choices=["json", "table"], default="json")
        if grounder:
            sp.add_argument("--grounder", choices=["simple", "perfect"], default="simple")
        if budget:
            sp.add_argument("--max-steps", type=int, default=None,
                            help="longest chase path (default: $GDLOG_MAX_STEPS or 10000)")
            sp.add_argument("--min-path-prob", type=_rational_arg, default=Fraction(0))
            sp.add_argument("--seed", type=int, default=None, help="randomise the trigger order")
            sp.add_argument("--brute-force-cap", type=int, default=DEFAULT_BRUTE_FORCE_CAP)
            sp.add_argument("--project-user-predicates", action="store_true",
                            help="drop Active/Result/bookkeeping atoms from reported models")

    common(sub.add_parser("check", help="parse, check safety and report stratification"), False, False)
    common(sub.add_parser("translate", help="print the TGD translation"), False, False)
    sp = sub.add_parser("ground", help="print the grounding of a choice set")
    common(sp, True, False)
    sp.add_argument("--choices", type=Path, help="file of ground AtR rules")
    sp.add_argument("--trace", action="store_true", help="perfect grounder: print each stratum")
    sp = sub.add_parser("chase", help="explore the chase tree")
    common(sp)
    sp.add_argument("--dump-tree", type=Path, help="write the chase tree as JSON")
    sp = sub.add_parser("prob", help="outcome distribution and queries")
    common(sp)
    sp.add_argument("--query", action="append",
                    help="has-stable-model | atom-brave:ATOM | atom-cautious:ATOM | sms-class:JSON")
    sp = sub.add_parser("compare", help="is the semantics of grounder A as good as that of B")
    common(sp, False)
    sp.add_argument("--a", choices=["simple", "perfect"], required=True)
    sp.add_argument("--b", choices=["simple", "perfect"], required=True)
    common(sub.add_parser("bckov-check", help="compare with the BCKOV semantics (positive programs)"), False)
    sp = sub.add_parser("sms", help="stable models of a ground program")
    sp.add_argument("--ground", type=Path, required=True)
    sp.add_argument("--method", choices=["auto", "brute", "stratified", "split"], default="auto")
    sp.add_argument("--brute-force-cap", type=int, default=DEFAULT_BRUTE_FORCE_CAP)
    return p


COMMANDS = {
    "check": cmd_check, "translate": cmd_translate, "ground": cmd_ground, "chase": cmd_chase,
    "prob": cmd_prob, "compare": cmd_compare, "bckov-check": cmd_bckov, "sms": cmd_sms,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](cfg, args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 1
    except (CapacityError, TruncationError) as exc:
        err.write(f"error: {exc}\n")
        return 3
    except (InputError, NotStratifiedError, GdlogError) as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
