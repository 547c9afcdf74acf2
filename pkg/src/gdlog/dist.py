"""Parameterised discrete distributions with finite support."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from .errors import DistributionError
from .model import Const

Support = list  # list[tuple[Const, Fraction]], ascending by outcome


@dataclass(frozen=True)
class ParamDistribution:
    name: str
    dimension: int
    support_fn: Callable[[tuple], Sequence]

    def support(self, params: Sequence) -> Support:
        if len(params) != self.dimension:
            raise DistributionError(f"{self.name} expects {self.dimension} parameters, got {len(params)}")
        raw = self.support_fn(tuple(_to_rational(self.name, p) for p in params))
        out = {}
        for value, prob in raw:
            value = value if isinstance(value, Const) else Const(value)
            prob = Fraction(prob)
            if prob < 0:
                raise DistributionError(f"{self.name}: negative probability {prob} for {value}")
            if value in out:
                raise DistributionError(f"{self.name}: duplicate outcome {value}")
            out[value] = prob
        if sum(out.values()) != 1:
            raise DistributionError(f"{self.name}{list(params)}: probabilities sum to {sum(out.values())}, not 1")
        return sorted(((v, p) for v, p in out.items() if p > 0), key=lambda vp: vp[0].sort_key)


def _to_rational(name: str, p) -> Fraction:
    if isinstance(p, Const):
        if not p.is_numeric:
            raise DistributionError(f"{name}: parameter {p} is not numeric")
        return p.value
    return Fraction(p)


def _flip(params):
    (p,) = params
    if not 0 <= p <= 1:
        raise DistributionError(f"flip parameter {p} outside [0, 1]")
    return [(1, p), (0, 1 - p)]


def _die(params):
    # invalid parameter vectors are mapped onto outcome 0
    if any(p < 0 for p in params) or sum(params) != 1:
        return [(0, 1)]
    return [(i, p) for i, p in enumerate(params, start=1)]


FLIP = ParamDistribution("flip", 1, _flip)
DIE = ParamDistribution("die", 6, _die)


class DistributionRegistry(Mapping):
    """Immutable name -> ParamDistribution map."""

    def __init__(self, dists: Sequence[ParamDistribution] = ()):
        self._dists: dict = {}
        for d in dists:
            if d.name in self._dists:
                raise DistributionError(f"distribution {d.name} registered twice")
            self._dists[d.name] = d

    def __getitem__(self, name) -> ParamDistribution:
        return self._dists[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._dists)

    def __len__(self):
        return len(self._dists)

    def extend(self, other: "DistributionRegistry | Sequence[ParamDistribution]") -> "DistributionRegistry":
        extra = other.values() if isinstance(other, DistributionRegistry) else other
        return DistributionRegistry(list(self._dists.values()) + list(extra))

    def __repr__(self):
        return f"DistributionRegistry({sorted(self._dists)})"


BUILTINS = DistributionRegistry([FLIP, DIE])


def support(registry: Mapping, dist_name: str, params: Sequence) -> Support:
    try:
        dist = registry[dist_name]
    except KeyError:
        raise DistributionError(f"unknown distribution {dist_name!r}") from None
    return dist.support(params)


def table_distribution(name: str, dimension: int, rows: Mapping[tuple, Sequence]) -> ParamDistribution:
    """A distribution given by an explicit table ``params -> [(value, prob), ...]``.

    Rows are validated eagerly so bad tables fail at load time.
    """
    table = {}
    for params, entries in rows.items():
        params = tuple(Fraction(p) for p in params)
        if len(params) != dimension:
            raise DistributionError(f"{name}: row {params} has {len(params)} parameters, expected {dimension}")
        if params in table:
            raise DistributionError(f"{name}: duplicate row for parameters {params}")
        table[params] = list(entries)

    def lookup(params):
        try:
            return table[params]
        except KeyError:
            raise DistributionError(f"{name}: no table row for parameters {list(params)}") from None

    dist = ParamDistribution(name, dimension, lookup)
    for params in table:
        dist.support(params)
    return dist
