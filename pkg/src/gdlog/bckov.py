"""Reference semantics for positive programs: possible outcomes are minimal
models of the tilde translation (no Active layer), found by branching on every
Result atom that a matched body asks for.

The matcher here is a deliberately naive nested loop, independent from the
grounders, so that the isomorphism check compares two separate code paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .chase import Budget, explore
from .dist import BUILTINS, support
from .errors import InputError
from .ground import SimpleGrounder
from .model import Atom, Const, Database, GProgram, TGD, Var, attach_database
from .stable import all_stable_models
from .translate import is_active_pred, split_fresh, translate_bckov


@dataclass(frozen=True)
class BckovOutcome:
    model: frozenset
    prob: Fraction


def _matches(body: tuple, facts: set, binding: dict):
    if not body:
        yield binding
        return
    first, rest = body[0], body[1:]
    for f in facts:
        if f.pred != first.pred or len(f.args) != len(first.args):
            continue
        b = dict(binding)
        ok = True
        for t, c in zip(first.args, f.args):
            if isinstance(t, Var):
                if b.setdefault(t, c) != c:
                    ok = False
                    break
            elif t != c:
                ok = False
                break
        if ok:
            yield from _matches(rest, facts, b)


def _inst(a: Atom, b: dict) -> Atom:
    return Atom(a.pred, tuple(b.get(t, t) if isinstance(t, Var) else t for t in a.args))


def _close(plain: list, facts: set) -> set:
    facts = set(facts)
    while True:
        new = {_inst(t.head, b) for t in plain for b in _matches(t.pos, facts, {})} - facts
        if not new:
            return facts
        facts |= new


def _pending(exist: list, facts: set) -> list:
    """Result atoms (minus outcome) demanded by a matched body but not yet present."""
    have = {(f.pred, f.args[:-1]) for f in facts}
    out = set()
    for t in exist:
        for b in _matches(t.pos, facts, {}):
            key = (t.head.pred, tuple(b.get(x, x) if isinstance(x, Var) else x for x in t.head.args[:-1]))
            if key not in have:
                out.add(key)
    return sorted(out, key=lambda k: Atom(k[0], k[1]).sort_key)


def bckov_outcomes(program: GProgram, db: Database | None = None, registry: Mapping = BUILTINS,
                   budget: Budget = Budget()) -> tuple:
    """``(outcomes, truncated_mass)`` for a positive program."""
    if not program.is_positive():
        raise InputError("BCKOV outcomes are only defined for positive programs")
    tgds = translate_bckov(program)
    plain = [t for t in tgds if not t.exists]
    exist = [t for t in tgds if t.exists]
    start = set(db.facts) if db is not None else set()
    out, truncated = [], Fraction(0)
    stack = [(start, Fraction(1), 0)]
    while stack:
        facts, prob, depth = stack.pop()
        facts = _close(plain, facts)
        pend = _pending(exist, facts)
        if not pend:
            out.append(BckovOutcome(frozenset(facts), prob))
            continue
        if depth >= budget.max_steps or prob < budget.min_path_prob:
            truncated += prob
            continue
        pred, args = pend[0]
        dist, n = split_fresh(pred)
        params = args[:len(args) - n]
        for o, p in reversed(support(registry, dist, params)):
            stack.append((facts | {Atom(pred, args + (o,))}, prob * p, depth + 1))
    return out, truncated


@dataclass(frozen=True)
class IsomorphismReport:
    verdict: str  # "isomorphic", "not-isomorphic" or "inconclusive"
    pairs: tuple  # ((model, prob_simple, prob_bckov), ...)
    unmatched_simple: tuple = ()
    unmatched_bckov: tuple = ()
    reason: str = ""

    @property
    def isomorphic(self) -> bool:
        return self.verdict == "isomorphic"


def check_isomorphism(program: GProgram, db: Database | None = None, registry: Mapping = BUILTINS,
                      budget: Budget = Budget()) -> IsomorphismReport:
    """Match simple-grounder outcomes (stable model minus Active atoms) with BCKOV outcomes."""
    prog = attach_database(program, db) if db is not None else program
    res = explore(SimpleGrounder(prog, registry), budget)
    bck, bck_trunc = bckov_outcomes(program, db, registry, budget)
    if res.truncated_mass or bck_trunc:
        return IsomorphismReport("inconclusive", (), reason="exploration was truncated")
    simple: dict = {}
    for path in res.complete:
        sms = all_stable_models(path.outcome)
        if len(sms) != 1:
            return IsomorphismReport("not-isomorphic", (), reason=f"outcome with {len(sms)} stable models")
        model = frozenset(a for a in sms[0] if not is_active_pred(a.pred))
        if model in simple:
            return IsomorphismReport("not-isomorphic", (), reason="two outcomes share a model modulo Active")
        simple[model] = path.prob
    bmap = {o.model: o.prob for o in bck}
    pairs, ok = [], len(bmap) == len(bck)
    for model in sorted(set(simple) & set(bmap), key=lambda m: sorted(a.sort_key for a in m)):
        pairs.append((model, simple[model], bmap[model]))
        ok &= simple[model] == bmap[model]
    only_s = tuple(m for m in simple if m not in bmap)
    only_b = tuple(m for m in bmap if m not in simple)
    ok &= not only_s and not only_b
    return IsomorphismReport("isomorphic" if ok else "not-isomorphic", tuple(pairs), only_s, only_b)
