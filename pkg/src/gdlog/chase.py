"""Chase-tree exploration over choice sets.

A node is labelled by a choice set; its trigger is an unresolved Active atom
among the heads of the grounding, and applying the trigger creates one child
per positive-probability outcome.  Finite maximal paths are the possible
outcomes.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .dist import support
from .ground import ChoiceSet, Grounder, atr_rule, unresolved
from .model import Atom
from .translate import active_params, is_result_pred, split_fresh

DEFAULT_MAX_STEPS = 10_000


@dataclass(frozen=True)
class Budget:
    max_steps: int = DEFAULT_MAX_STEPS
    min_path_prob: Fraction = Fraction(0)

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if not 0 <= self.min_path_prob <= 1:
            raise ValueError("min_path_prob must lie in [0, 1]")

    @classmethod
    def make(cls, max_steps: int | None = None, min_path_prob=0) -> "Budget":
        """``max_steps=None`` falls back to ``GDLOG_MAX_STEPS`` and then the default."""
        if max_steps is None:
            max_steps = int(os.environ.get("GDLOG_MAX_STEPS", DEFAULT_MAX_STEPS))
        return cls(max_steps, Fraction(min_path_prob))


@dataclass(frozen=True)
class Trigger:
    active: Atom
    dist: str
    params: tuple
    signature: tuple

    @classmethod
    def of(cls, active: Atom) -> "Trigger":
        dist, params, sig = active_params(active)
        return cls(active, dist, params, sig)


def find_trigger(choices: ChoiceSet, grounding, select: Callable | None = None) -> Trigger | None:
    """The least unresolved Active atom, or ``select(candidates)`` when given."""
    cands = unresolved(choices, grounding)
    if not cands:
        return None
    return Trigger.of(cands[0] if select is None else select(cands))


def apply_trigger(grounder: Grounder, choices: ChoiceSet, trigger: Trigger) -> list:
    """``[(child choice set, outcome, probability)]`` in ascending outcome order."""
    return [(choices.extend(trigger.active, o), o, p) for o, p in grounder.support(trigger.active)]


@dataclass
class ChasePath:
    choices: ChoiceSet
    grounding: frozenset
    prob: Fraction
    length: int
    status: str  # "complete" or "truncated"
    steps: tuple = ()  # ((active, outcome, prob), ...) in application order

    @property
    def outcome(self) -> frozenset:
        """The possible outcome: choices together with their grounding."""
        return self.choices.rules | self.grounding


@dataclass
class ChaseResult:
    complete: list
    truncated: list
    truncated_mass: Fraction
    nodes: list = field(default_factory=list)  # filled when record_tree=True

    @property
    def complete_mass(self) -> Fraction:
        return sum((p.prob for p in self.complete), Fraction(0))

    def outcome_set(self) -> frozenset:
        return frozenset(p.choices for p in self.complete)


def random_selector(rng: random.Random) -> Callable:
    return lambda cands: rng.choice(cands)


def iter_paths(grounder: Grounder, budget: Budget = Budget(), select: Callable | None = None,
               on_node: Callable | None = None) -> Iterator[ChasePath]:
    """Depth-first, children in ascending outcome order; yields complete and truncated paths."""
    stack = [(ChoiceSet(), Fraction(1), (), None, None)]
    next_id = 0
    while stack:
        choices, prob, steps, parent, edge = stack.pop()
        node_id = next_id
        next_id += 1
        grounding = grounder(choices)
        trig = find_trigger(choices, grounding, select)
        if trig is None:
            status = "complete"
        elif len(steps) >= budget.max_steps or prob < budget.min_path_prob:
            status = "truncated"
        else:
            status = "internal"
        if on_node is not None:
            on_node(node_id, parent, edge, status, choices)
        if status != "internal":
            yield ChasePath(choices, grounding, prob, len(steps), status, steps)
            continue
        children = apply_trigger(grounder, choices, trig)
        for child, o, p in reversed(children):
            stack.append((child, prob * p, steps + ((trig.active, o, p),), node_id, (trig.active, o, p)))


def explore(grounder: Grounder, budget: Budget = Budget(), select: Callable | None = None,
            record_tree: bool = False) -> ChaseResult:
    nodes: list = []

    def record(node_id, parent, edge, status, choices):
        nodes.append({
            "id": node_id,
            "parent": parent,
            "added_atr_tgd": None if edge is None else str(atr_rule(edge[0], edge[1])),
            "prob_edge": None if edge is None else edge[2],
            "status": status if status != "internal" else None,
        })

    complete, truncated = [], []
    for path in iter_paths(grounder, budget, select, record if record_tree else None):
        (complete if path.status == "complete" else truncated).append(path)
    mass = sum((p.prob for p in truncated), Fraction(0))
    return ChaseResult(complete, truncated, mass, nodes)


def path_probability(registry, rules) -> Fraction:
    """Product of outcome probabilities over the Result atoms among the heads of ``rules``."""
    prob = Fraction(1)
    for h in {r.head for r in rules}:
        if is_result_pred(h.pred):
            dist, n = split_fresh(h.pred)
            params = h.args[:len(h.args) - n - 1]
            prob *= dict(support(registry, dist, params)).get(h.args[-1], Fraction(0))
    return prob
