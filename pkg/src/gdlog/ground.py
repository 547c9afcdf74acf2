"""Grounders: choice sets, the simple grounder, the perfect grounder and
stratification of the dependency graph.

Both grounders share one matching engine that derives ground instances of
existential-free TGDs by matching positive bodies against the heads derived
so far (semi-naive: every new head is joined against the current index).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .dist import BUILTINS, support
from .errors import InconsistentChoices, NotStratifiedError
from .model import Atom, Const, GProgram, GroundRule, TGD, Var, heads
from .translate import (TranslationResult, active_params, is_active_pred, is_result_pred, result_of,
                        translate_program)


# -- choice sets ---------------------------------------------------------------

def atr_rule(active: Atom, outcome) -> GroundRule:
    """The ground AtR TGD ``active -> Result(..., outcome)``."""
    outcome = outcome if isinstance(outcome, Const) else Const(outcome)
    return GroundRule((active,), (), result_of(active, outcome))


def _is_atr(rule: GroundRule) -> bool:
    if rule.neg or len(rule.pos) != 1:
        return False
    (act,) = rule.pos
    return (is_active_pred(act.pred) and is_result_pred(rule.head.pred)
            and rule.head.args[:-1] == act.args and rule.head.pred[len("__result__"):] == act.pred[len("__active__"):])


def is_consistent(rules: Iterable[GroundRule]) -> bool:
    seen: dict = {}
    for r in rules:
        if not _is_atr(r):
            return False
        (act,) = r.pos
        if seen.setdefault(act, r.head) != r.head:
            return False
    return True


class ChoiceSet:
    """A functionally consistent set of ground AtR TGDs."""

    __slots__ = ("rules", "atr", "_hash")

    def __init__(self, rules: Iterable[GroundRule] = ()):
        rules = frozenset(rules)
        atr: dict = {}
        for r in rules:
            if not _is_atr(r):
                raise InconsistentChoices(f"{r} is not a ground AtR TGD")
            (act,) = r.pos
            if atr.setdefault(act, r.head) != r.head:
                raise InconsistentChoices(f"{act} mapped to both {atr[act]} and {r.head}")
        self.rules = rules
        self.atr = atr
        self._hash = hash(rules)

    @classmethod
    def from_outcomes(cls, outcomes: Mapping) -> "ChoiceSet":
        return cls(atr_rule(a, o) for a, o in outcomes.items())

    def outcome(self, active: Atom) -> Const | None:
        res = self.atr.get(active)
        return None if res is None else res.args[-1]

    def extend(self, active: Atom, outcome) -> "ChoiceSet":
        return ChoiceSet(self.rules | {atr_rule(active, outcome)})

    def __contains__(self, item):
        return item in self.rules

    def __iter__(self):
        return iter(sorted(self.rules))

    def __len__(self):
        return len(self.rules)

    def __le__(self, other):
        return self.rules <= other.rules

    def __lt__(self, other):
        return self.rules < other.rules

    def __eq__(self, other):
        return isinstance(other, ChoiceSet) and self.rules == other.rules

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ChoiceSet({{{', '.join(map(str, self))}}})"


def as_choice_set(choices) -> ChoiceSet:
    return choices if isinstance(choices, ChoiceSet) else ChoiceSet(choices)


def active_heads(rules: Iterable[GroundRule]) -> set:
    return {h for h in heads(rules) if is_active_pred(h.pred)}


def is_compatible(choices, rules: Iterable[GroundRule]) -> bool:
    """AtR of ``choices`` is defined on every Active atom among the heads of ``rules``."""
    atr = as_choice_set(choices).atr
    return all(a in atr for a in active_heads(rules))


def unresolved(choices, rules: Iterable[GroundRule]) -> list:
    atr = as_choice_set(choices).atr
    return sorted(a for a in active_heads(rules) if a not in atr)


# -- matching engine -----------------------------------------------------------

def _unify(pattern: Atom, fact: Atom, binding: dict) -> dict | None:
    if pattern.pred != fact.pred or len(pattern.args) != len(fact.args):
        return None
    out = binding
    for t, c in zip(pattern.args, fact.args):
        if isinstance(t, Var):
            bound = out.get(t)
            if bound is None:
                if out is binding:
                    out = dict(binding)
                out[t] = c
            elif bound != c:
                return None
        elif t != c:
            return None
    return out


def _subst(a: Atom, binding: dict) -> Atom:
    if a.is_ground:
        return a
    return Atom(a.pred, tuple(binding[t] if isinstance(t, Var) else t for t in a.args))


class _Engine:
    """Incremental derivation of ground rule instances.

    ``perfect`` additionally blocks an instance whose negative body meets the
    heads derived so far (checked once, when the positive body first matches).
    """

    def __init__(self, perfect: bool):
        self.perfect = perfect
        self.templates: list = []
        self.by_pred: dict = {}  # pred -> [(template index, body position)]
        self.index: dict = {}  # pred -> set of head atoms
        self.heads: set = set()
        self.rules: set = set()
        self.queue: list = []

    def retire(self, keep: int):
        """Stop matching every template added after the first ``keep`` ones."""
        self.by_pred = {}
        for k, t in enumerate(self.templates[:keep]):
            for i, a in enumerate(t.pos):
                self.by_pred.setdefault(a.pred, []).append((k, i))
        del self.templates[keep:]

    def add_templates(self, tgds: Sequence):
        start = len(self.templates)
        for t in tgds:
            k = len(self.templates)
            self.templates.append(t)
            for i, a in enumerate(t.pos):
                self.by_pred.setdefault(a.pred, []).append((k, i))
        for k in range(start, len(self.templates)):
            self._join(k, list(self.templates[k].pos), {})
        self.run()

    def _join(self, k: int, remaining: list, binding: dict):
        if not remaining:
            self._emit(k, binding)
            return
        first, rest = remaining[0], remaining[1:]
        for fact in list(self.index.get(first.pred, ())):
            b = _unify(first, fact, binding)
            if b is not None:
                self._join(k, rest, b)

    def _emit(self, k: int, binding: dict):
        t = self.templates[k]
        neg = [_subst(a, binding) for a in t.neg]
        if self.perfect and any(a in self.heads for a in neg):
            return
        rule = GroundRule([_subst(a, binding) for a in t.pos], neg, _subst(t.head, binding))
        if rule in self.rules:
            return
        self.rules.add(rule)
        if rule.head not in self.heads:
            self.heads.add(rule.head)
            self.index.setdefault(rule.head.pred, set()).add(rule.head)
            self.queue.append(rule.head)

    def run(self):
        while self.queue:
            fact = self.queue.pop()
            for k, i in self.by_pred.get(fact.pred, ()):
                t = self.templates[k]
                b = _unify(t.pos[i], fact, {})
                if b is not None:
                    self._join(k, list(t.pos[:i] + t.pos[i + 1:]), b)


def _ground_template(rule: GroundRule) -> TGD:
    return TGD(tuple(sorted(rule.pos)), tuple(sorted(rule.neg)), rule.head)


# -- stratification ------------------------------------------------------------

@dataclass(frozen=True)
class Strata:
    graph: nx.MultiDiGraph
    components: tuple  # topological order of frozensets of predicates
    stratified: bool
    negative_cycle: tuple = ()  # an offending negative edge when not stratified

    def stratum_of(self) -> dict:
        return {p: i for i, c in enumerate(self.components) for p in c}


def dependency_graph(program: GProgram) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    g.add_nodes_from(program.schema())
    for r in program.rules:
        if r.head is None:
            continue
        for a in r.pos:
            g.add_edge(a.pred, r.head.pred, sign="+")
        for a in r.neg:
            g.add_edge(a.pred, r.head.pred, sign="-")
    return g


def stratify(program: GProgram) -> Strata:
    """SCCs of the dependency graph in a deterministic topological order.

    Ties between incomparable components are broken by their least predicate.
    """
    g = dependency_graph(program)
    cond = nx.condensation(g)
    members: dict = {c: frozenset(cond.nodes[c]["members"]) for c in cond.nodes}
    order = nx.lexicographical_topological_sort(cond, key=lambda c: min(members[c]))
    comps = tuple(members[c] for c in order)
    where = cond.graph["mapping"]
    bad = ()
    for u, v, data in g.edges(data=True):
        if data["sign"] == "-" and where[u] == where[v]:
            bad = (u, v)
            break
    return Strata(g, comps, not bad, bad)


def is_topological_order(strata: Strata, order: Sequence) -> bool:
    order = [frozenset(c) for c in order]
    if sorted(map(sorted, order)) != sorted(map(sorted, strata.components)):
        return False
    pos = {p: i for i, c in enumerate(order) for p in c}
    return all(pos[u] <= pos[v] for u, v in strata.graph.edges())


# -- grounders -----------------------------------------------------------------

class Grounder:
    """Base class: a monotone map from choice sets to ground existential-free programs."""

    name = "abstract"

    def __init__(self, program: GProgram, registry: Mapping = BUILTINS):
        self.program = program
        self.registry = registry
        self.translation: TranslationResult = translate_program(program)

    def __call__(self, choices) -> frozenset:
        raise NotImplementedError

    def support(self, active: Atom) -> list:
        dist, params, _ = active_params(active)
        return support(self.registry, dist, params)


class SimpleGrounder(Grounder):
    name = "simple"

    def __call__(self, choices) -> frozenset:
        choices = as_choice_set(choices)
        eng = _Engine(perfect=False)
        eng.add_templates(list(self.translation.sigma_noexists) +
                          [_ground_template(r) for r in choices.rules])
        return frozenset(eng.rules - choices.rules)


class PerfectGrounder(Grounder):
    """Stratum-by-stratum grounding.

    Each stratum continues from the rules and heads of the previous strata
    rather than restarting from the empty program, so that negative literals
    are only tested once the strata they refer to are complete.
    """

    name = "perfect"

    def __init__(self, program: GProgram, registry: Mapping = BUILTINS, order: Sequence | None = None):
        super().__init__(program, registry)
        self.strata = stratify(program)
        if not self.strata.stratified:
            u, v = self.strata.negative_cycle
            raise NotStratifiedError(f"negative edge {u} -> {v} lies on a cycle")
        if order is None:
            order = self.strata.components
        elif not is_topological_order(self.strata, order):
            raise ValueError("order is not a topological ordering of the strongly connected components")
        self.order = tuple(frozenset(c) for c in order)
        where = {p: i for i, c in enumerate(self.order) for p in c}
        self.by_stratum = [[] for _ in self.order]
        for t in self.translation.sigma_noexists:
            self.by_stratum[where[t.origin]].append(t)

    def trace(self, choices) -> list:
        """``[Sigma^C_1, ..., Sigma^C_n]`` as frozensets of ground rules."""
        choices = as_choice_set(choices)
        eng = _Engine(perfect=True)
        eng.add_templates([_ground_template(r) for r in choices.rules])
        keep = len(choices.rules)
        out, frozen = [], False
        current = frozenset()
        for templates in self.by_stratum:
            if not frozen and not is_compatible(choices, current):
                frozen = True
            if not frozen:
                # rules of earlier strata only contribute their ground instances
                eng.retire(keep)
                eng.add_templates(templates)
                current = frozenset(eng.rules - choices.rules)
            out.append(current)
        return out

    def __call__(self, choices) -> frozenset:
        tr = self.trace(choices)
        return tr[-1] if tr else frozenset()


GROUNDERS = {"simple": SimpleGrounder, "perfect": PerfectGrounder}


def make_grounder(program: GProgram, kind: str = "simple", registry: Mapping = BUILTINS, **kw) -> Grounder:
    try:
        cls = GROUNDERS[kind]
    except KeyError:
        raise ValueError(f"unknown grounder {kind!r}; expected one of {sorted(GROUNDERS)}") from None
    return cls(program, registry, **kw)


def terminals_enumerate(grounder: Grounder, max_steps: int | None = None, min_path_prob=0) -> tuple:
    """Minimal terminals via the chase: ``(list of ChoiceSet, truncated_mass)``."""
    from .chase import Budget, explore

    res = explore(grounder, Budget.make(max_steps, min_path_prob))
    return [p.choices for p in res.complete], res.truncated_mass
