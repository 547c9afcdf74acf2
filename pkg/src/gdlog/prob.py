"""Outcome distributions: grouping possible outcomes by their stable models,
event queries and the per-class comparison of two semantics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .chase import Budget, ChaseResult, explore
from .dist import BUILTINS
from .errors import CapacityError, GdlogError, TruncationError
from .ground import Grounder, make_grounder
from .model import Atom, Database, GProgram, attach_database
from .stable import DEFAULT_BRUTE_FORCE_CAP, all_stable_models
from .translate import is_fresh_pred

ZERO = Fraction(0)


@dataclass(frozen=True)
class OutcomeRecord:
    choices: object  # ChoiceSet
    rules: frozenset  # choices together with their grounding
    prob: Fraction
    sms: tuple  # canonical, see stable.canonical_sms


@dataclass
class SmsClass:
    sms: tuple
    mass: Fraction = ZERO
    outcomes: list = field(default_factory=list)


@dataclass
class OutcomeDistribution:
    classes: dict  # canonical sms -> SmsClass
    truncated_mass: Fraction = ZERO
    schema: frozenset = frozenset()  # predicates that queries may mention
    projected: bool = False

    @property
    def finite_mass(self) -> Fraction:
        return sum((c.mass for c in self.classes.values()), ZERO)

    @property
    def infinity_mass(self) -> tuple:
        """``(lo, hi)`` bounds on the infinity event; exact when nothing was truncated."""
        hi = 1 - self.finite_mass
        return hi - self.truncated_mass, hi

    def mass(self, sms) -> Fraction:
        c = self.classes.get(tuple(sms))
        return c.mass if c else ZERO

    def sorted_classes(self) -> list:
        return sorted(self.classes.values(), key=lambda c: [[a.sort_key for a in m] for m in c.sms])

    def class_masses(self) -> dict:
        return {k: c.mass for k, c in self.classes.items()}


def project_model(model: Iterable[Atom], hidden: frozenset = frozenset()) -> tuple:
    return tuple(sorted(a for a in model if not is_fresh_pred(a.pred) and a.pred not in hidden))


def build_distribution(result: ChaseResult, program: GProgram | None = None, method: str = "auto",
                       cap: int = DEFAULT_BRUTE_FORCE_CAP, project: bool = False) -> OutcomeDistribution:
    """Group the complete chase paths of ``result`` by their (optionally projected) stable models."""
    hidden = program.bookkeeping if program is not None else frozenset()
    classes: dict = {}
    for path in result.complete:
        rules = path.outcome
        try:
            sms = all_stable_models(rules, method, cap)
        except CapacityError as exc:
            raise CapacityError(f"{exc} (outcome {path.choices!r})") from None
        if project:
            sms = tuple(sorted({project_model(m, hidden) for m in sms}, key=lambda m: [a.sort_key for a in m]))
        cls = classes.setdefault(sms, SmsClass(sms))
        cls.mass += path.prob
        cls.outcomes.append(OutcomeRecord(path.choices, rules, path.prob, sms))
    schema = frozenset(program.schema()) if program is not None else frozenset()
    return OutcomeDistribution(classes, result.truncated_mass, schema, project)


# -- queries ---------------------------------------------------------------------

def _widen(dist: OutcomeDistribution, value: Fraction):
    if dist.truncated_mass:
        return value, value + dist.truncated_mass
    return value


def _check_atom(dist: OutcomeDistribution, a: Atom):
    if dist.schema and a.pred not in dist.schema and not is_fresh_pred(a.pred):
        raise GdlogError(f"unknown predicate {a.pred} in query")


def has_stable_model(dist: OutcomeDistribution):
    return _widen(dist, sum((c.mass for c in dist.classes.values() if c.sms), ZERO))


def sms_class(dist: OutcomeDistribution, sms):
    return _widen(dist, dist.mass(sms))


def atom_brave(dist: OutcomeDistribution, a: Atom):
    _check_atom(dist, a)
    return _widen(dist, sum((c.mass for c in dist.classes.values() if any(a in m for m in c.sms)), ZERO))


def atom_cautious(dist: OutcomeDistribution, a: Atom):
    _check_atom(dist, a)
    return _widen(dist, sum((c.mass for c in dist.classes.values() if c.sms and all(a in m for m in c.sms)),
                            ZERO))


QUERIES: Mapping[str, Callable] = {
    "has-stable-model": has_stable_model,
    "sms-class": sms_class,
    "atom-brave": atom_brave,
    "atom-cautious": atom_cautious,
}


def query(dist: OutcomeDistribution, name: str, arg=None):
    """Evaluate a named query; a pair ``(lo, hi)`` is returned when mass was truncated."""
    try:
        fn = QUERIES[name]
    except KeyError:
        raise GdlogError(f"unknown query {name!r}; expected one of {sorted(QUERIES)}") from None
    return fn(dist) if name == "has-stable-model" else fn(dist, arg)


# -- comparison --------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    as_good_as: bool
    witness: tuple | None = None  # the first class where A has less mass than B
    mass_a: Fraction | None = None
    mass_b: Fraction | None = None


def as_good_as(a: OutcomeDistribution, b: OutcomeDistribution) -> Verdict:
    if a.truncated_mass or b.truncated_mass:
        raise TruncationError("cannot compare distributions with truncated mass")
    keys = sorted(set(a.classes) | set(b.classes), key=lambda s: [[x.sort_key for x in m] for m in s])
    for k in keys:
        ma, mb = a.mass(k), b.mass(k)
        if ma < mb:
            return Verdict(False, k, ma, mb)
    return Verdict(True)


# -- one-call pipeline ---------------------------------------------------------------

@dataclass(frozen=True)
class InferenceConfig:
    grounder: str = "simple"
    max_steps: int | None = None
    min_path_prob: Fraction = Fraction(0)
    brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP
    method: str = "auto"
    project: bool = False


def infer(program: GProgram, db: Database | None = None, config: InferenceConfig = InferenceConfig(),
          registry=BUILTINS, select=None) -> OutcomeDistribution:
    prog = attach_database(program, db) if db is not None else program
    grounder: Grounder = make_grounder(prog, config.grounder, registry)
    res = explore(grounder, Budget.make(config.max_steps, config.min_path_prob), select)
    return build_distribution(res, prog, config.method, config.brute_force_cap, config.project)


# -- serialisation -----------------------------------------------------------------

def rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_json(x) -> dict | str:
    if isinstance(x, tuple):
        return {"lo": rational(x[0]), "hi": rational(x[1]),
                "lo_decimal": float(x[0]), "hi_decimal": float(x[1])}
    return rational(x)


def distribution_json(dist: OutcomeDistribution) -> dict:
    lo, hi = dist.infinity_mass
    return {
        "classes": [
            {
                "models": [[str(a) for a in m] for m in c.sms],
                "mass": rational(c.mass),
                "mass_decimal": float(c.mass),
                "outcomes": len(c.outcomes),
            }
            for c in dist.sorted_classes()
        ],
        "finite_mass": rational(dist.finite_mass),
        "infinity_mass": {"lo": rational(lo), "hi": rational(hi)},
        "truncated_mass": rational(dist.truncated_mass),
        "projected": dist.projected,
    }
