"""Translation of generative rules into TGDs with negation.

Every delta term ``d<p>[q]`` in a head yields a rule deriving
``__active__d__n(p, q)`` from the original body, an active-to-result (AtR) TGD
``__active__d__n(p, q) -> exists Y: __result__d__n(p, q, Y)`` and, per rule, one
final TGD joining all Result atoms with the original body.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .model import Atom, Const, DeltaTerm, GProgram, GRule, TGD, Var

ACTIVE_PREFIX = "__active__"
RESULT_PREFIX = "__result__"


def active_pred(dist: str, n: int) -> str:
    return f"{ACTIVE_PREFIX}{dist}__{n}"


def result_pred(dist: str, n: int) -> str:
    return f"{RESULT_PREFIX}{dist}__{n}"


def is_active_pred(pred: str) -> bool:
    return pred.startswith(ACTIVE_PREFIX)


def is_result_pred(pred: str) -> bool:
    return pred.startswith(RESULT_PREFIX)


def is_fresh_pred(pred: str) -> bool:
    return is_active_pred(pred) or is_result_pred(pred)


def split_fresh(pred: str) -> tuple:
    """``__active__flip__2`` -> ``("flip", 2)``."""
    for prefix in (ACTIVE_PREFIX, RESULT_PREFIX):
        if pred.startswith(prefix):
            dist, n = pred[len(prefix):].rsplit("__", 1)
            return dist, int(n)
    raise ValueError(f"{pred} is not an active/result predicate")


def result_of(active: Atom, outcome) -> Atom:
    dist, n = split_fresh(active.pred)
    outcome = outcome if isinstance(outcome, Const) else Const(outcome)
    return Atom(result_pred(dist, n), active.args + (outcome,))


def active_params(active: Atom) -> tuple:
    """Split a ground Active atom into (dist, params, signature)."""
    dist, n = split_fresh(active.pred)
    cut = len(active.args) - n
    return dist, active.args[:cut], active.args[cut:]


@dataclass(frozen=True)
class TranslationResult:
    sigma_exists: tuple
    sigma_noexists: tuple
    fresh_preds: dict = field(default_factory=dict)  # name -> (kind, dist, |q|)
    bookkeeping: frozenset = frozenset()

    @property
    def tgds(self) -> tuple:
        return self.sigma_noexists + self.sigma_exists


def _fresh_vars(rule: GRule, count: int) -> list:
    used = {v.name for a in rule.pos + rule.neg + (rule.head,) for v in a.variables()}
    out, i = [], 1
    while len(out) < count:
        name = f"Y{i}"
        if name not in used:
            out.append(Var(name))
        i += 1
    return out


def translate_rule(rule: GRule) -> list:
    if rule.head is None:
        raise InputError(f"rule {rule} has a false head; desugar the program first")
    origin = rule.head.pred
    deltas = [(i, t) for i, t in enumerate(rule.head.args) if isinstance(t, DeltaTerm)]
    if not deltas:
        return [TGD(rule.pos, rule.neg, rule.head, (), origin)]
    ys = _fresh_vars(rule, len(deltas))
    out, results = [], []
    new_args = list(rule.head.args)
    for (pos, d), y in zip(deltas, ys):
        n = len(d.signature)
        act = Atom(active_pred(d.dist, n), d.params + d.signature)
        res = Atom(result_pred(d.dist, n), d.params + d.signature + (y,))
        out.append(TGD(rule.pos, rule.neg, act, (), origin))
        out.append(TGD((act,), (), res, (y,), origin))
        results.append(res)
        new_args[pos] = y
    out.append(TGD(tuple(results) + rule.pos, rule.neg, Atom(rule.head.pred, tuple(new_args)), (), origin))
    return out


def _check_fresh(program: GProgram):
    for p in program.schema():
        if is_fresh_pred(p):
            raise InputError(f"predicate name {p} is reserved for translation")


def translate_program(program: GProgram) -> TranslationResult:
    _check_fresh(program)
    exists, noexists, fresh = {}, {}, {}
    for rule in program.rules:
        for tgd in translate_rule(rule):
            # identical TGDs from rules with different heads are kept apart: the
            # perfect grounder needs each copy in the stratum of its own rule
            target = exists if tgd.is_existential else noexists
            target.setdefault((tgd, tgd.origin), tgd)
        if rule.is_generative:
            for d in rule.head.delta_terms():
                n = len(d.signature)
                fresh[active_pred(d.dist, n)] = ("active", d.dist, n)
                fresh[result_pred(d.dist, n)] = ("result", d.dist, n)
    return TranslationResult(tuple(exists.values()), tuple(noexists.values()), fresh, program.bookkeeping)


def translate_bckov(program: GProgram) -> list:
    """Tilde translation of a positive program: body -> exists Y Result directly."""
    _check_fresh(program)
    out = {}
    for rule in program.rules:
        if rule.neg or rule.head is None:
            raise InputError(f"the tilde translation needs a positive program; offending rule: {rule}")
        deltas = [(i, t) for i, t in enumerate(rule.head.args) if isinstance(t, DeltaTerm)]
        if not deltas:
            out.setdefault(TGD(rule.pos, (), rule.head, (), rule.head.pred), None)
            continue
        ys = _fresh_vars(rule, len(deltas))
        results, new_args = [], list(rule.head.args)
        for (pos, d), y in zip(deltas, ys):
            res = Atom(result_pred(d.dist, len(d.signature)), d.params + d.signature + (y,))
            out.setdefault(TGD(rule.pos, (), res, (y,), rule.head.pred), None)
            results.append(res)
            new_args[pos] = y
        out.setdefault(TGD(tuple(results) + rule.pos, (), Atom(rule.head.pred, tuple(new_args)), (),
                           rule.head.pred), None)
    return list(out)
