"""Random small programs for the property and acceptance suites.

Everything is driven by a ``random.Random`` so a seed reproduces a program;
``hypothesis`` strategies wrap the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from gdlog.model import Atom, Const, Database, DeltaTerm, GProgram, GroundRule, GRule, Var, desugar_bot

X = Var("X")

EDB = {"e": 1, "f": 0}
IDB_POOL = [("p", 1), ("q", 1), ("r", 0), ("s", 1)]
DOMAIN = (Const(0), Const(1))


def _flip(rng: random.Random, with_sig: bool):
    p = Const(rng.choice([Fraction(1, 2), Fraction(1, 3)]))
    return DeltaTerm("flip", (p,), (X,) if with_sig else ())


def _atom(pred: str, arity: int, rng: random.Random, var_ok: bool) -> Atom:
    if arity == 0:
        return Atom(pred)
    if var_ok and rng.random() < 0.7:
        return Atom(pred, (X,))
    return Atom(pred, (rng.choice(DOMAIN),))


def random_program(rng: random.Random, kind: str = "stratified", max_rules: int = 4, max_delta: int = 2,
                   allow_false: bool = False) -> GProgram:
    """``kind``: "positive", "stratified" or "any" (negation unrestricted)."""
    idb = rng.sample(IDB_POOL, rng.randint(2, 3))
    level = {p: i for i, (p, _) in enumerate(idb)}
    arity = dict(idb) | EDB
    rules, deltas = [], 0
    unary = [p for p, a in idb if a == 1]
    for i in range(rng.randint(2, max_rules)):
        head_pred, head_ar = rng.choice(idb)
        # the first rule always samples, so most programs branch at least once
        force_delta = i == 0 and max_delta > 0
        if force_delta:
            head_pred, head_ar = rng.choice(unary), 1
        if kind == "positive":
            pos_pool = list(EDB) + [p for p, _ in idb]
        elif kind == "stratified":
            pos_pool = list(EDB) + [p for p, _ in idb if level[p] <= level[head_pred]]
        else:
            pos_pool = list(EDB) + [p for p, _ in idb]
        pos = []
        for j in range(rng.randint(1, 2)):
            pr = "e" if force_delta and j == 0 else rng.choice(pos_pool)
            pos.append(_atom(pr, arity[pr], rng, True))
        bound = any(X in a.args for a in pos)
        neg = []
        if kind != "positive" and rng.random() < 0.5:
            if kind == "stratified":
                neg_pool = list(EDB) + [p for p, _ in idb if level[p] < level[head_pred]]
            else:
                neg_pool = list(EDB) + [p for p, _ in idb]
            pr = rng.choice(neg_pool)
            neg.append(_atom(pr, arity[pr], rng, bound))
        if allow_false and not force_delta and rng.random() < 0.15:
            rules.append(GRule(tuple(pos), tuple(neg), None))
            continue
        if head_ar == 0:
            head = Atom(head_pred)
        elif force_delta or (deltas < max_delta and rng.random() < 0.45):
            deltas += 1
            head = Atom(head_pred, (_flip(rng, bound and rng.random() < 0.6),))
        else:
            head = _atom(head_pred, 1, rng, bound)
        rules.append(GRule(tuple(pos), tuple(neg), head))
    return desugar_bot(GProgram(tuple(rules)))


def random_database(rng: random.Random) -> Database:
    facts = [Atom("e", (c,)) for c in DOMAIN if rng.random() < 0.8]
    if rng.random() < 0.5:
        facts.append(Atom("f"))
    return Database(frozenset(facts))


def program_strategy(kind: str = "stratified", **kw):
    return st.integers(0, 2**32 - 1).map(
        lambda seed: (seed, random_program(random.Random(seed), kind, **kw), random_database(random.Random(~seed))))


# -- ground programs -------------------------------------------------------------

def random_ground_program(rng: random.Random, n_atoms: int, stratified: bool = True,
                          positive: bool = False) -> list:
    """Random ground rules over atoms ``a0..a{n-1}``.

    Stratified programs give each atom a level; positive bodies look at levels
    up to the head's and negative bodies strictly below it.
    """
    atoms = [Atom(f"a{i}") for i in range(n_atoms)]
    level = {a: rng.randint(0, 3) for a in atoms}
    rules = []
    for _ in range(rng.randint(1, 2 * n_atoms)):
        head = rng.choice(atoms)
        if rng.random() < 0.2:
            rules.append(GroundRule((), (), head))
            continue
        pos_pool = [a for a in atoms if not stratified or level[a] <= level[head]]
        neg_pool = [a for a in atoms if not stratified or level[a] < level[head]]
        pos = rng.sample(pos_pool, min(len(pos_pool), rng.randint(0, 2)))
        neg = [] if positive or not neg_pool else rng.sample(neg_pool, min(len(neg_pool), rng.randint(0, 2)))
        rules.append(GroundRule(pos, neg, head))
    return rules
