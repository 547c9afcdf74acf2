"""Symbolic domain: constants, variables, atoms, rules, programs and databases.

Constants and atoms are interned, so equal values are usually the same object
and hashing is cached.  Everything here is immutable once built.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import ArityError, SafetyError

_SYMBOL_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_RESERVED_SYMBOLS = {"not", "false", "exists"}


class Const:
    """A constant: an exact rational or a symbolic name.

    Numeric constants sort before symbolic ones; symbols sort lexicographically.
    """

    __slots__ = ("value", "_key", "_hash", "__weakref__")
    _interned: dict = {}

    def __new__(cls, value):
        if isinstance(value, bool):
            raise TypeError("booleans are not constants")
        if isinstance(value, (int, Fraction)):
            value = Fraction(value)
            key = (0, value)
        elif isinstance(value, str):
            if not value:
                raise ValueError("empty symbolic constant")
            key = (1, value)
        else:
            raise TypeError(f"cannot build a constant from {value!r}")
        obj = cls._interned.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.value = value
            obj._key = key
            obj._hash = hash(key)
            cls._interned[key] = obj
        return obj

    @property
    def is_numeric(self) -> bool:
        return self._key[0] == 0

    @property
    def sort_key(self):
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Const) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, Const):
            return NotImplemented
        return self._key < other._key

    def __le__(self, other):
        if not isinstance(other, Const):
            return NotImplemented
        return self._key <= other._key

    def __gt__(self, other):
        if not isinstance(other, Const):
            return NotImplemented
        return self._key > other._key

    def __ge__(self, other):
        if not isinstance(other, Const):
            return NotImplemented
        return self._key >= other._key

    def __reduce__(self):
        return (Const, (self.value,))

    def __repr__(self):
        return f"Const({self})"

    def __str__(self):
        if self.is_numeric:
            v = self.value
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if _SYMBOL_RE.match(self.value) and self.value not in _RESERVED_SYMBOLS:
            return self.value
        return json.dumps(self.value, ensure_ascii=False)


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names must be nonempty")

    def __str__(self):
        return self.name


Term = Union[Const, Var]


@dataclass(frozen=True)
class DeltaTerm:
    """A sample ``dist<params>[signature]`` appearing in a rule head."""

    dist: str
    params: tuple
    signature: tuple = ()

    def __post_init__(self):
        if not self.params:
            raise ValueError("a delta term needs at least one parameter")

    def variables(self) -> set:
        return {t for t in self.params + self.signature if isinstance(t, Var)}

    def __str__(self):
        s = f"{self.dist}<{', '.join(map(str, self.params))}>"
        if self.signature:
            s += f"[{', '.join(map(str, self.signature))}]"
        return s


class Atom:
    """``pred(args...)``; args are Terms (or DeltaTerms in generative heads)."""

    __slots__ = ("pred", "args", "_hash", "_ground", "__weakref__")
    _interned: dict = {}

    def __new__(cls, pred: str, args: Iterable = ()):
        args = tuple(args)
        key = (pred, args)
        obj = cls._interned.get(key)
        if obj is None:
            for a in args:
                if not isinstance(a, (Const, Var, DeltaTerm)):
                    raise TypeError(f"atom argument {a!r} is not a term; use atom() for plain values")
            obj = object.__new__(cls)
            obj.pred = pred
            obj.args = args
            obj._hash = hash(key)
            obj._ground = all(isinstance(a, Const) for a in args)
            cls._interned[key] = obj
        return obj

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return self._ground

    @property
    def sort_key(self):
        return (self.pred, tuple(a.sort_key if isinstance(a, Const) else (2, str(a)) for a in self.args))

    def variables(self) -> set:
        out = set()
        for a in self.args:
            if isinstance(a, Var):
                out.add(a)
            elif isinstance(a, DeltaTerm):
                out |= a.variables()
        return out

    def delta_terms(self) -> list:
        return [a for a in self.args if isinstance(a, DeltaTerm)]

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Atom) and self.pred == other.pred and self.args == other.args

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __reduce__(self):
        return (Atom, (self.pred, self.args))

    def __repr__(self):
        return f"Atom({self})"

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(map(str, self.args))})"


def atom(pred: str, *args) -> Atom:
    """Convenience constructor: plain Python numbers/strings become constants."""
    return Atom(pred, tuple(a if isinstance(a, (Const, Var, DeltaTerm)) else Const(a) for a in args))


def _body_str(pos, neg) -> str:
    return ", ".join([str(a) for a in pos] + [f"not {a}" for a in neg])


@dataclass(frozen=True)
class GRule:
    """A generative Datalog rule.  ``head is None`` encodes the ``false`` head."""

    pos: tuple
    neg: tuple
    head: Atom | None

    def __post_init__(self):
        bound = set()
        for a in self.pos:
            if a.delta_terms():
                raise SafetyError(f"delta term in body of rule {self}")
            bound |= a.variables()
        for a in self.neg:
            if a.delta_terms():
                raise SafetyError(f"delta term in body of rule {self}")
            free = a.variables() - bound
            if free:
                raise SafetyError(f"unsafe variables {_names(free)} in negative literal of rule {self}")
        if self.head is not None:
            free = self.head.variables() - bound
            if free:
                raise SafetyError(f"unsafe variables {_names(free)} in head of rule {self}")

    @property
    def is_generative(self) -> bool:
        return self.head is not None and bool(self.head.delta_terms())

    def __str__(self):
        head = "false" if self.head is None else str(self.head)
        body = _body_str(self.pos, self.neg)
        return f"{body} -> {head}." if body else f"-> {head}."


def _names(vs) -> str:
    return ", ".join(sorted(v.name for v in vs))


@dataclass(frozen=True)
class GProgram:
    rules: tuple = ()
    # predicates introduced by desugaring, hidden from user-facing output
    bookkeeping: frozenset = frozenset()

    def __post_init__(self):
        arities: dict = {}
        for r in self.rules:
            for a in r.pos + r.neg + ((r.head,) if r.head is not None else ()):
                prev = arities.setdefault(a.pred, a.arity)
                if prev != a.arity:
                    raise ArityError(f"predicate {a.pred} used with arities {prev} and {a.arity}")
        object.__setattr__(self, "_arities", arities)

    @property
    def arities(self) -> dict:
        return dict(self._arities)

    def schema(self) -> set:
        return set(self._arities)

    def idb(self) -> set:
        return {r.head.pred for r in self.rules if r.head is not None}

    def edb(self) -> set:
        return self.schema() - self.idb()

    def is_positive(self) -> bool:
        return all(not r.neg and r.head is not None for r in self.rules)

    def __iter__(self) -> Iterator[GRule]:
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __str__(self):
        return "\n".join(map(str, self.rules))


@dataclass(frozen=True)
class Database:
    facts: frozenset = frozenset()

    def __post_init__(self):
        facts = frozenset(self.facts)
        for f in facts:
            if not f.is_ground:
                raise ValueError(f"database fact {f} is not ground")
        object.__setattr__(self, "facts", facts)

    def __iter__(self):
        return iter(sorted(self.facts))

    def __len__(self):
        return len(self.facts)

    def __str__(self):
        return "\n".join(f"{f}." for f in self)


def edb_idb_split(program: GProgram) -> tuple:
    return program.edb(), program.idb()


def attach_database(program: GProgram, db: Database, strict: bool = False) -> GProgram:
    """Return Pi[D]: one body-free rule per fact, placed before the program rules.

    Facts over intensional predicates are accepted unless ``strict`` is set;
    the network example keeps ``Infected(1,1)`` in its database.
    """
    arities = program.arities
    idb = program.idb()
    for f in db.facts:
        if f.pred in arities and arities[f.pred] != f.arity:
            raise ArityError(f"fact {f} has arity {f.arity}, program uses {f.pred}/{arities[f.pred]}")
        if strict and f.pred in idb:
            raise ArityError(f"fact {f} is over the intensional predicate {f.pred}")
    facts = tuple(GRule((), (), f) for f in sorted(db.facts))
    return GProgram(facts + program.rules, program.bookkeeping)


def desugar_bot(program: GProgram) -> GProgram:
    """Replace ``false`` heads by a fresh nullary Fail plus ``Fail, not Aux -> Aux``."""
    if all(r.head is not None for r in program.rules):
        return program
    schema = program.schema()
    fail = _fresh("Fail", schema)
    aux = _fresh("Aux", schema | {fail})
    fail_atom, aux_atom = Atom(fail), Atom(aux)
    rules = [r if r.head is not None else GRule(r.pos, r.neg, fail_atom) for r in program.rules]
    rules.append(GRule((fail_atom,), (aux_atom,), aux_atom))
    return GProgram(tuple(rules), program.bookkeeping | {fail, aux})


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


@dataclass(frozen=True)
class TGD:
    """Single-head TGD with negation.  ``exists`` lists head-only variables.

    ``origin`` records the head predicate of the source rule, which decides the
    stratum of the TGD for the perfect grounder.
    """

    pos: tuple
    neg: tuple
    head: Atom
    exists: tuple = ()
    origin: str | None = field(default=None, compare=False)

    def __post_init__(self):
        bound = set()
        for a in self.pos:
            bound |= a.variables()
        for a in self.neg:
            if a.variables() - bound:
                raise SafetyError(f"unsafe negative literal in {self}")
        free = self.head.variables() - bound - set(self.exists)
        if free:
            raise SafetyError(f"unsafe head variables {_names(free)} in {self}")
        for v in self.exists:
            if v in bound:
                raise SafetyError(f"existential variable {v} also occurs in the body of {self}")

    @property
    def is_existential(self) -> bool:
        return bool(self.exists)

    def __str__(self):
        body = _body_str(self.pos, self.neg)
        head = str(self.head)
        if self.exists:
            head = f"exists {', '.join(map(str, self.exists))}: {head}"
        return f"{body} -> {head}." if body else f"-> {head}."


class GroundRule:
    """Variable-free, existential-free rule; bodies are sets."""

    __slots__ = ("pos", "neg", "head", "_hash")

    def __init__(self, pos: Iterable[Atom], neg: Iterable[Atom], head: Atom):
        self.pos = frozenset(pos)
        self.neg = frozenset(neg)
        self.head = head
        for a in self.pos | self.neg | {head}:
            if not a.is_ground:
                raise ValueError(f"ground rule contains non-ground atom {a}")
        self._hash = hash((self.pos, self.neg, head))

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GroundRule) and self._hash == other._hash and self.head == other.head
                and self.pos == other.pos and self.neg == other.neg)

    def __hash__(self):
        return self._hash

    @property
    def sort_key(self):
        return (self.head.sort_key, sorted(a.sort_key for a in self.pos), sorted(a.sort_key for a in self.neg))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return f"GroundRule({self})"

    def __str__(self):
        body = _body_str(sorted(self.pos), sorted(self.neg))
        return f"{body} -> {self.head}." if body else f"-> {self.head}."


def heads(rules: Iterable[GroundRule]) -> frozenset:
    return frozenset(r.head for r in rules)


def format_rules(rules: Iterable) -> str:
    return "\n".join(str(r) for r in sorted(rules))
