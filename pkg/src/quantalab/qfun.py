"""Q-valued functions on finite sets and the graded-inclusion enrichment.

``sub(lam, mu)`` measures pointwise graded inclusion as the meet over the
domain of ``lam(x) -> mu(x)``; it makes the function space a Q-category.
``image`` pushes a function forward along a map (joins over fibers) and
``precompose`` pulls one back; together they satisfy the adjunction
``sub(image(f, lam), mu) == sub(lam, precompose(f, mu))`` exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .errors import UsageError
from .quantale import Carrier, as_fraction


@dataclass(frozen=True)
class FiniteSet:
    """An ordered finite set of distinct hashable labels; may be empty."""

    elements: tuple = ()

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise UsageError("labels must be distinct")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def index(self, x) -> int:
        try:
            return self.elements.index(x)
        except ValueError:
            raise UsageError(f"{x!r} is not an element of {self}") from None

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.elements)) + "}"


def finite_set(*labels) -> FiniteSet:
    return FiniteSet(tuple(labels))


@dataclass(frozen=True)
class QFunction:
    """A total map from a finite set into a carrier, stored densely.

    Values are exact rationals aligned with the domain order; equality is
    pointwise exact equality over the same domain and carrier.
    """

    domain: FiniteSet
    values: tuple[Fraction, ...]
    carrier: Carrier

    def __post_init__(self):
        if len(self.values) != len(self.domain):
            raise UsageError("values must cover the domain exactly")
        for v in self.values:
            if not self.carrier.contains(v):
                raise UsageError(f"value {v} outside the carrier")

    def __call__(self, x) -> Fraction:
        return self.values[self.domain.index(x)]

    def with_values(self, values: Iterable) -> "QFunction":
        return QFunction(self.domain, tuple(values), self.carrier)

    # pointwise order and lattice structure ------------------------------

    def leq(self, other: "QFunction") -> bool:
        _same_space(self, other)
        return all(self.carrier.leq(a, b) for a, b in zip(self.values, other.values))

    def meet(self, other: "QFunction") -> "QFunction":
        _same_space(self, other)
        return self.with_values(self.carrier.meet(a, b)
                                for a, b in zip(self.values, other.values))

    def join(self, other: "QFunction") -> "QFunction":
        _same_space(self, other)
        return self.with_values(self.carrier.join(a, b)
                                for a, b in zip(self.values, other.values))

    def min_value(self) -> Fraction:
        """Pointwise minimum; the carrier top on the empty domain."""
        out = self.carrier.top
        for v in self.values:
            out = self.carrier.meet(out, v)
        return out

    def max_value(self) -> Fraction:
        """Pointwise join; the carrier bottom on the empty domain."""
        out = self.carrier.bottom
        for v in self.values:
            out = self.carrier.join(out, v)
        return out

    def __repr__(self):
        pairs = ", ".join(f"{x!r}: {v}" for x, v in zip(self.domain, self.values))
        return "QFunction({" + pairs + "})"


def _same_space(a: QFunction, b: QFunction):
    if a.domain != b.domain or a.carrier != b.carrier:
        raise UsageError("QFunctions live on different domains or carriers")


def constant(domain: FiniteSet, carrier: Carrier, c) -> QFunction:
    c = as_fraction(c)
    return QFunction(domain, (c,) * len(domain), carrier)


def unit_constant(domain: FiniteSet, carrier: Carrier) -> QFunction:
    """The constant function at the monoid unit."""
    return constant(domain, carrier, carrier.unit)


def indicator(domain: FiniteSet, carrier: Carrier, subset) -> QFunction:
    members = set(subset)
    return QFunction(domain,
                     tuple(carrier.top if x in members else carrier.bottom
                           for x in domain),
                     carrier)


def all_qfunctions(domain: FiniteSet, carrier) -> Iterator[QFunction]:
    """All |Q|^|X| functions in canonical lexicographic order.

    The order is lexicographic in the carrier's element order with the last
    domain position varying fastest; serialization relies on it.
    """
    if not carrier.is_finite:
        raise UsageError("cannot enumerate functions into an infinite carrier")
    for values in itertools.product(carrier.elements, repeat=len(domain)):
        yield QFunction(domain, values, carrier)


@dataclass(frozen=True)
class SetMap:
    """A total map between finite sets, validated at construction."""

    source: FiniteSet
    target: FiniteSet
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != len(self.source):
            raise UsageError("map must be total on its source")
        for y in self.mapping:
            if y not in self.target:
                raise UsageError(f"map value {y!r} lies outside the target")

    def __call__(self, x):
        return self.mapping[self.source.index(x)]

    @staticmethod
    def from_dict(source: FiniteSet, target: FiniteSet, d: Mapping) -> "SetMap":
        try:
            values = tuple(d[x] for x in source)
        except KeyError as e:
            raise UsageError(f"map is missing {e.args[0]!r}") from None
        return SetMap(source, target, values)

    @staticmethod
    def from_callable(source: FiniteSet, target: FiniteSet, f: Callable) -> "SetMap":
        return SetMap(source, target, tuple(f(x) for x in source))

    def compose(self, other: "SetMap") -> "SetMap":
        """self after other."""
        if other.target != self.source:
            raise UsageError("maps do not compose")
        return SetMap(other.source, self.target,
                      tuple(self(other(x)) for x in other.source))

    @staticmethod
    def identity(s: FiniteSet) -> "SetMap":
        return SetMap(s, s, s.elements)


def sub(lam: QFunction, mu: QFunction) -> Fraction:
    """Graded inclusion: the meet over the domain of lam(x) -> mu(x).

    Over the empty domain the empty meet is the carrier top.
    """
    _same_space(lam, mu)
    c = lam.carrier
    out = c.top
    for a, b in zip(lam.values, mu.values):
        out = c.meet(out, c.residuum(a, b))
    return out


def image(f: SetMap, lam: QFunction) -> QFunction:
    """Pushforward: joins over fibers, bottom on empty fibers."""
    if f.source != lam.domain:
        raise UsageError("map source does not match the function domain")
    c = lam.carrier
    acc = {y: c.bottom for y in f.target}
    for x, v in zip(lam.domain, lam.values):
        y = f(x)
        acc[y] = c.join(acc[y], v)
    return QFunction(f.target, tuple(acc[y] for y in f.target), c)


def precompose(f: SetMap, mu: QFunction) -> QFunction:
    """Pullback: x maps to mu(f(x))."""
    if f.target != mu.domain:
        raise UsageError("map target does not match the function domain")
    return QFunction(f.source, tuple(mu(f(x)) for x in f.source), mu.carrier)
