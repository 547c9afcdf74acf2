"""Stable models of finite, ground, existential-free programs.

Three routes are provided and cross-checked by the test-suite:

* ``brute``: enumerate every candidate interpretation over the head atoms
  (numpy bitmasks) and keep the fixpoints of the reduct.
* ``stratified``: component-by-component positive fixpoints over the atom
  dependency graph; only valid when no component has internal negation.
* ``split``: the same component walk, guessing inside components that do
  have internal negation (splitting sets).  ``auto`` uses this one.
"""

from __future__ import annotations

from typing import Iterable

import networkx as nx
import numpy as np

from .errors import CapacityError, NotStratifiedError
from .model import Atom, GroundRule

DEFAULT_BRUTE_FORCE_CAP = 18


def canonical_model(atoms: Iterable[Atom]) -> tuple:
    return tuple(sorted(atoms))


def canonical_sms(models: Iterable) -> tuple:
    """Sorted tuple of sorted models: hashable and order independent."""
    return tuple(sorted({canonical_model(m) for m in models}, key=lambda m: [a.sort_key for a in m]))


def reduct(rules: Iterable[GroundRule], interp: Iterable[Atom]) -> list:
    interp = set(interp)
    return [GroundRule(r.pos, (), r.head) for r in rules if not (r.neg & interp)]


def least_model(rules: Iterable[GroundRule]) -> frozenset:
    """Least model of a positive ground program (negative bodies must be empty)."""
    rules = list(rules)
    waiting: dict = {}
    missing = []
    model: set = set()
    queue = []
    for i, r in enumerate(rules):
        if r.neg:
            raise ValueError(f"least_model needs a positive program, got {r}")
        missing.append(len(r.pos))
        for a in r.pos:
            waiting.setdefault(a, []).append(i)
        if not r.pos:
            queue.append(r.head)
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for i in waiting.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i].head)
    return frozenset(model)


def is_model(rules: Iterable[GroundRule], interp: Iterable[Atom]) -> bool:
    interp = set(interp)
    return all(r.head in interp or not r.pos <= interp or (r.neg & interp) for r in rules)


def is_stable_model(rules: Iterable[GroundRule], interp: Iterable[Atom]) -> bool:
    interp = frozenset(interp)
    return least_model(reduct(rules, interp)) == interp


def _simplify(rules: Iterable[GroundRule]) -> tuple:
    """Drop rules that can never fire and negative literals that are always true."""
    rules = list(rules)
    universe = {r.head for r in rules}
    out = []
    for r in rules:
        if not r.pos <= universe:
            continue
        neg = r.neg & universe
        out.append(r if neg == r.neg else GroundRule(r.pos, neg, r.head))
    return out, universe


# -- brute force -------------------------------------------------------------

def brute_force_models(rules: Iterable[GroundRule], cap: int = DEFAULT_BRUTE_FORCE_CAP) -> list:
    rules, universe = _simplify(rules)
    atoms = sorted(universe)
    if len(atoms) > min(cap, 62):
        raise CapacityError(f"brute force over {len(atoms)} atoms exceeds brute_force_cap={cap}")
    index = {a: i for i, a in enumerate(atoms)}

    def mask(atoms_):
        m = 0
        for a in atoms_:
            m |= 1 << index[a]
        return m

    pos = np.array([mask(r.pos) for r in rules], dtype=np.uint64)
    neg = np.array([mask(r.neg) for r in rules], dtype=np.uint64)
    head = np.array([mask((r.head,)) for r in rules], dtype=np.uint64)
    facts = 0
    for r in rules:
        if not r.pos and not r.neg:
            facts |= 1 << index[r.head]
    free = [i for i in range(len(atoms)) if not facts >> i & 1]
    # every candidate contains the facts; enumerate subsets of the other atoms
    sub = np.arange(1 << len(free), dtype=np.uint64)
    cand = np.full(sub.shape, facts, dtype=np.uint64)
    for bit, i in enumerate(free):
        cand |= ((sub >> np.uint64(bit)) & np.uint64(1)) << np.uint64(i)

    zero = np.uint64(0)
    ok = np.ones(cand.shape, dtype=bool)
    for p, n, h in zip(pos, neg, head):
        violated = ((cand & p) == p) & ((cand & n) == zero) & ((cand & h) == zero)
        ok &= ~violated
    cand = cand[ok]

    least = np.full(cand.shape, facts, dtype=np.uint64)
    while True:
        before = least.copy()
        for p, n, h in zip(pos, neg, head):
            fire = ((cand & n) == zero) & ((least & p) == p)
            least[fire] |= h
        if np.array_equal(before, least):
            break
    stable = cand[least == cand]
    return [frozenset(a for a, i in index.items() if int(m) >> i & 1) for m in stable]


# -- component walk ----------------------------------------------------------

def _components(rules: list, universe: set) -> tuple:
    g = nx.DiGraph()
    g.add_nodes_from(universe)
    for r in rules:
        for a in r.pos | r.neg:
            g.add_edge(a, r.head)
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    comps = {c: set() for c in cond.nodes}
    for a, c in members.items():
        comps[c].add(a)
    order = list(nx.lexicographical_topological_sort(cond, key=lambda c: min(comps[c]).sort_key))
    by_comp = {c: [] for c in cond.nodes}
    for r in rules:
        by_comp[members[r.head]].append(r)
    return [(comps[c], by_comp[c]) for c in order]


def _fixpoint(rules: list, base: frozenset, interp_neg: frozenset) -> frozenset:
    """Least set of heads derivable from ``base`` with negation read in ``interp_neg``."""
    derived = set(base)
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.head not in derived and not (r.neg & interp_neg) and r.pos <= derived:
                derived.add(r.head)
                changed = True
    return frozenset(derived)


def component_models(rules: Iterable[GroundRule], cap: int = DEFAULT_BRUTE_FORCE_CAP,
                     allow_guessing: bool = True) -> list:
    rules, universe = _simplify(rules)
    partial = [frozenset()]
    for comp, comp_rules in _components(rules, universe):
        needs_guess = any(r.neg & comp for r in comp_rules)
        if needs_guess and not allow_guessing:
            raise NotStratifiedError(f"negation inside the component {sorted(map(str, comp))}")
        if needs_guess and len(comp) > cap:
            raise CapacityError(f"component of {len(comp)} atoms exceeds brute_force_cap={cap}")
        nxt = []
        for m in partial:
            if not needs_guess:
                nxt.append(_fixpoint(comp_rules, m, m))
                continue
            comp_atoms = sorted(comp)
            for bits in range(1 << len(comp_atoms)):
                guess = frozenset(a for i, a in enumerate(comp_atoms) if bits >> i & 1)
                full = m | guess
                if _fixpoint(comp_rules, m, full) == full:
                    nxt.append(full)
        partial = nxt
        if not partial:
            break
    return partial


def is_stratified_ground(rules: Iterable[GroundRule]) -> bool:
    rules, universe = _simplify(rules)
    return all(not (r.neg & comp) for comp, comp_rules in _components(rules, universe) for r in comp_rules)


def all_stable_models(rules: Iterable[GroundRule], method: str = "auto",
                      cap: int = DEFAULT_BRUTE_FORCE_CAP) -> tuple:
    """Canonical set of stable models (see ``canonical_sms``)."""
    rules = list(rules)
    if method == "brute":
        models = brute_force_models(rules, cap)
    elif method == "stratified":
        models = component_models(rules, cap, allow_guessing=False)
    elif method in ("split", "auto"):
        models = component_models(rules, cap)
    else:
        raise ValueError(f"unknown stable-model method {method!r}")
    return canonical_sms(models)
