"""Semifilters as explicit total tables over a finite quantale.

A semifilter on X assigns a degree to every Q-valued function on X, subject
to three laws: the constant unit gets at least the unit degree (F1), meets
are not undervalued (F2), and the assignment respects graded inclusion (F3).
A filter additionally caps constants (F4).

Tables are dense dictionaries keyed by value tuples; everything here is
exact and exhaustively checkable at desk scale.  Second-level objects
(semifilters over a space of semifilters) are never full tables over the
true double level; they are tables over an explicitly declared finite family
of inner semifilters, which is all the constructions evaluate anyway.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import BudgetError, StructuralError, UsageError
from .prefilter import PrefilterBasis, eval_degree, is_bounded_function
from .qfun import (FiniteSet, QFunction, SetMap, all_qfunctions, constant,
                   precompose, sub, unit_constant)
from .quantale import FiniteQuantale

TABLE_CAP = 3 ** 9
ENUM_BUDGET = 3 ** 9


class SemifilterTable:
    """A total map from all |Q|^|X| functions to carrier values."""

    def __init__(self, domain: FiniteSet, carrier: FiniteQuantale, entries):
        if not isinstance(carrier, FiniteQuantale):
            raise UsageError("semifilter tables need a finite carrier")
        size = len(carrier.elements) ** len(domain)
        if size > TABLE_CAP:
            raise BudgetError(f"table would need {size} entries (cap {TABLE_CAP})",
                              count=size)
        self.domain = domain
        self.carrier = carrier
        table: dict[tuple, Fraction] = {}
        for key, v in dict(entries).items():
            if isinstance(key, QFunction):
                key = key.values
            table[tuple(key)] = v
        for values in itertools.product(carrier.elements, repeat=len(domain)):
            if values not in table:
                raise StructuralError(f"table is missing the entry at {values}")
            if not carrier.contains(table[values]):
                raise StructuralError(f"table value {table[values]} outside carrier")
        if len(table) != size:
            raise StructuralError("table has entries outside the function space")
        self.entries = table

    @classmethod
    def from_function(cls, domain: FiniteSet, carrier: FiniteQuantale,
                      fn: Callable[[QFunction], Fraction]) -> "SemifilterTable":
        return cls(domain, carrier,
                   {f.values: fn(f) for f in all_qfunctions(domain, carrier)})

    def __call__(self, lam: QFunction) -> Fraction:
        if lam.domain != self.domain or lam.carrier != self.carrier:
            raise UsageError("function does not match the table's space")
        return self.entries[lam.values]

    def value_at(self, values: tuple) -> Fraction:
        return self.entries[values]

    def functions(self):
        return all_qfunctions(self.domain, self.carrier)

    def canonical_values(self) -> tuple[Fraction, ...]:
        return tuple(self.entries[f.values] for f in self.functions())

    def leq(self, other: "SemifilterTable") -> bool:
        self._same_space(other)
        return all(self.carrier.leq(v, other.entries[k])
                   for k, v in self.entries.items())

    def meet(self, other: "SemifilterTable") -> "SemifilterTable":
        self._same_space(other)
        return SemifilterTable(self.domain, self.carrier,
                               {k: self.carrier.meet(v, other.entries[k])
                                for k, v in self.entries.items()})

    def _same_space(self, other: "SemifilterTable"):
        if self.domain != other.domain or self.carrier != other.carrier:
            raise UsageError("tables live on different spaces")

    def __eq__(self, other):
        return (isinstance(other, SemifilterTable)
                and self.domain == other.domain
                and self.carrier == other.carrier
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.domain, self.canonical_values()))

    def __repr__(self):
        return f"SemifilterTable({len(self.domain)} points, {len(self.entries)} entries)"


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple


def check_axioms(table: SemifilterTable, require_filter: bool = False) -> list[AxiomViolation]:
    """Report all violations of F1-F3 (and F4 on request) with witnesses."""
    q = table.carrier
    out: list[AxiomViolation] = []
    k_x = unit_constant(table.domain, q)
    if not q.leq(q.unit, table(k_x)):
        out.append(AxiomViolation("F1", (table(k_x),)))
    funcs = list(table.functions())
    for lam in funcs:
        for mu in funcs:
            both = q.meet(table(lam), table(mu))
            if not q.leq(both, table(lam.meet(mu))):
                out.append(AxiomViolation("F2", (lam.values, mu.values)))
            if not q.leq(sub(lam, mu), q.residuum(table(lam), table(mu))):
                out.append(AxiomViolation("F3", (lam.values, mu.values)))
    if require_filter:
        for p in q.elements:
            if not q.leq(table(constant(table.domain, q, p)), p):
                out.append(AxiomViolation("F4", (p,)))
    return out


def is_semifilter(table: SemifilterTable) -> bool:
    return not check_axioms(table)


def evaluation_unit(domain: FiniteSet, carrier: FiniteQuantale, x) -> SemifilterTable:
    """The unit at x: every function is sent to its value at x.

    Satisfies F1-F4 and is conical.
    """
    idx = domain.index(x)
    return SemifilterTable(domain, carrier,
                           {f.values: f.values[idx]
                            for f in all_qfunctions(domain, carrier)})


def level_prefilter(table: SemifilterTable) -> tuple[QFunction, ...]:
    """The functions held with degree at least the unit, as an explicit set.

    This is the saturated prefilter attached to the table; it is finite here
    because the whole function space is.
    """
    q = table.carrier
    return tuple(f for f in table.functions() if q.leq(q.unit, table(f)))


def semifilter_of(source) -> SemifilterTable:
    """The table induced by a prefilter: the join of graded inclusions.

    Accepts a PrefilterBasis (the join over the generated prefilter is then
    attained on the basis) or any explicit iterable of functions (the join is
    computed over the set exactly as given).  Tables produced this way are
    conical by construction.
    """
    if isinstance(source, PrefilterBasis):
        domain, carrier = source.domain, source.carrier
        if not isinstance(carrier, FiniteQuantale):
            raise UsageError("tables need a finite carrier")
        return SemifilterTable.from_function(
            domain, carrier, lambda lam: eval_degree(source, lam))
    members = list(source)
    if not members:
        raise UsageError("an explicit generating set must be nonempty")
    domain, carrier = members[0].domain, members[0].carrier
    if not isinstance(carrier, FiniteQuantale):
        raise UsageError("tables need a finite carrier")

    def degree(lam: QFunction) -> Fraction:
        out = carrier.bottom
        for mu in members:
            out = carrier.join(out, sub(mu, lam))
        return out

    return SemifilterTable.from_function(domain, carrier, degree)


def conical_coreflection(table: SemifilterTable) -> SemifilterTable:
    """The largest conical table below the given one.

    Deflationary, monotone, idempotent; fixes exactly the conical tables and
    preserves the level set of functions held at degree >= unit.
    """
    members = level_prefilter(table)
    if not members:
        return SemifilterTable.from_function(
            table.domain, table.carrier, lambda lam: table.carrier.bottom)
    return semifilter_of(members)


class ConicalTest(Enum):
    DEFINITION = "definition"          # fixed point of the coreflection
    SUP_FORMULA = "sup-formula"        # value recovered from residuated level tests
    RESIDUATION = "residuation"        # table commutes with residuation by constants


def residuate_function(p: Fraction, lam: QFunction) -> QFunction:
    c = lam.carrier
    return lam.with_values(c.residuum(p, v) for v in lam.values)


def is_conical(table: SemifilterTable, mode: ConicalTest = ConicalTest.DEFINITION) -> bool:
    """Three equivalent characterizations of conicality on finite carriers.

    RESIDUATION additionally assumes residuation by constants preserves
    directed joins, which holds on every finite lattice because directed
    subsets attain their join.
    """
    q = table.carrier
    if mode is ConicalTest.DEFINITION:
        return conical_coreflection(table) == table
    if mode is ConicalTest.SUP_FORMULA:
        for lam in table.functions():
            best = q.bottom
            for p in q.elements:
                if q.leq(q.unit, table(residuate_function(p, lam))):
                    best = q.join(best, p)
            if best != table(lam):
                return False
        return True
    if mode is ConicalTest.RESIDUATION:
        if not q.is_finite:
            raise UsageError(
                "the residuation test needs residuation by constants to "
                "preserve directed joins; that is only guaranteed here for "
                "finite carriers")
        for lam in table.functions():
            for p in q.elements:
                if table(residuate_function(p, lam)) != q.residuum(p, table(lam)):
                    return False
        return True
    raise UsageError(f"unknown mode {mode!r}")


def satisfies_way_below_criterion(table: SemifilterTable) -> bool:
    """Whether p way below the degree of lam forces the residuated function
    to be held at full degree.  On a continuous carrier this characterizes
    conical tables; every finite lattice is continuous."""
    q = table.carrier
    for lam in table.functions():
        for p in q.elements:
            if q.way_below(p, table(lam)):
                if not q.leq(q.unit, table(residuate_function(p, lam))):
                    return False
    return True


def meet(tables: Sequence[SemifilterTable]) -> SemifilterTable:
    """Pointwise meet of semifilter tables; preserves F1-F3."""
    if not tables:
        raise UsageError("meet of an empty family is undefined here")
    out = tables[0]
    for t in tables[1:]:
        out = out.meet(t)
    return out


def residuate(p: Fraction, table: SemifilterTable) -> SemifilterTable:
    """Residuate every table value by the constant p; preserves F1-F3."""
    q = table.carrier
    return SemifilterTable(table.domain, q,
                           {k: q.residuum(p, v) for k, v in table.entries.items()})


# -- second level ------------------------------------------------------------

@dataclass(frozen=True)
class SemifilterFamily:
    """A declared finite family of semifilters on a common space.

    Plays the role of the (astronomically large) set of all semifilters in
    second-level constructions; outer tables are indexed by its labels, and
    the evaluation functional of a function restricts to the family.
    """

    labels: FiniteSet
    members: tuple[SemifilterTable, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.members):
            raise UsageError("labels and members must align")
        for m in self.members[1:]:
            m._same_space(self.members[0])

    @classmethod
    def of(cls, members: Iterable[SemifilterTable], prefix: str = "g") -> "SemifilterFamily":
        ms = tuple(members)
        if not ms:
            raise UsageError("a family needs at least one member")
        labels = FiniteSet(tuple(f"{prefix}{i}" for i in range(len(ms))))
        return cls(labels, ms)

    @property
    def x_domain(self) -> FiniteSet:
        return self.members[0].domain

    @property
    def carrier(self) -> FiniteQuantale:
        return self.members[0].carrier

    def hat(self, lam: QFunction) -> QFunction:
        """The evaluation functional of lam restricted to the family."""
        return QFunction(self.labels, tuple(m(lam) for m in self.members),
                         self.carrier)

    def __len__(self):
        return len(self.members)


def kowalsky_sum(outer: SemifilterTable, family: SemifilterFamily) -> SemifilterTable:
    """The diagonal of an outer table over a declared family.

    Each function on the base set is sent to the outer degree of its
    evaluation functional; the result satisfies F1-F3 whenever the outer
    table does.
    """
    if outer.domain != family.labels or outer.carrier != family.carrier:
        raise UsageError("outer table is not indexed by the family")
    return SemifilterTable.from_function(
        family.x_domain, family.carrier, lambda lam: outer(family.hat(lam)))


def image_outer(table: SemifilterTable, h: SetMap,
                family: SemifilterFamily) -> SemifilterTable:
    """Push a table on X forward along a map into the family's labels.

    The result is the outer table xi |-> table(xi . h); this is the functor
    action on a map into a semifilter space, materialized over the family.
    """
    if h.source != table.domain or h.target != family.labels:
        raise UsageError("map does not go from the table's space into the family")
    return SemifilterTable.from_function(
        family.labels, family.carrier, lambda xi: table(precompose(h, xi)))


# -- enumeration -------------------------------------------------------------

def enumerate_semifilters(domain: FiniteSet, carrier: FiniteQuantale,
                          require: str = "all",
                          budget: int = ENUM_BUDGET) -> list[SemifilterTable]:
    """Brute-force all tables and keep those satisfying the requested axioms.

    ``require`` is one of "all" (F1-F3), "filter" (adds F4) or "conical".
    Refuses to scan more than ``budget`` candidate tables, naming the count.
    """
    if require not in ("all", "filter", "conical"):
        raise UsageError(f"unknown requirement {require!r}")
    q = carrier
    funcs = list(all_qfunctions(domain, q))
    count = len(q.elements) ** len(funcs)
    if count > budget:
        raise BudgetError(
            f"enumeration would scan {count} tables (budget {budget})",
            count=count)

    index = {f.values: i for i, f in enumerate(funcs)}
    k_idx = index[unit_constant(domain, q).values]
    pairs = [(i, j, sub(funcs[i], funcs[j]), index[funcs[i].meet(funcs[j]).values])
             for i in range(len(funcs)) for j in range(len(funcs))]
    const_idx = [(index[constant(domain, q, p).values], p) for p in q.elements]
    unit = q.unit
    leq = q.leq
    res = q.residuum
    mt = q.meet

    out: list[SemifilterTable] = []
    for vals in itertools.product(q.elements, repeat=len(funcs)):
        if not leq(unit, vals[k_idx]):
            continue
        ok = True
        for i, j, s, mij in pairs:
            vi, vj = vals[i], vals[j]
            if not leq(mt(vi, vj), vals[mij]) or not leq(s, res(vi, vj)):
                ok = False
                break
        if not ok:
            continue
        if require == "filter":
            if not all(leq(vals[ci], p) for ci, p in const_idx):
                continue
        table = SemifilterTable(domain, q,
                                {funcs[i].values: vals[i] for i in range(len(funcs))})
        if require == "conical" and not is_conical(table):
            continue
        out.append(table)
    return out


# -- boundedness -------------------------------------------------------------

def is_bounded(table: SemifilterTable) -> bool:
    """No function touching bottom somewhere is held at full degree.

    Needs an integral carrier; on an empty base set every function counts as
    bounded and the test is vacuous.
    """
    q = table.carrier
    if not q.is_integral:
        raise UsageError("boundedness needs an integral carrier")
    for lam in table.functions():
        if not is_bounded_function(lam) and table(lam) == q.top:
            return False
    return True


def conical_bounded_coreflection(table: SemifilterTable) -> SemifilterTable:
    """The largest conical bounded table below the given one.

    Computed by restricting the level prefilter to its bounded members and
    inducing a table from that set.
    """
    q = table.carrier
    if not q.is_integral:
        raise UsageError("boundedness needs an integral carrier")
    bounded = [f for f in level_prefilter(table) if is_bounded_function(f)]
    if not bounded:
        return SemifilterTable.from_function(table.domain, q, lambda lam: q.bottom)
    return semifilter_of(bounded)


def image_semifilter(f: SetMap, table: SemifilterTable,
                     bounded: bool = False) -> SemifilterTable:
    """Functor action on a map: precompose, then optionally take the conical
    bounded coreflection (the bounded functor action)."""
    if f.source != table.domain:
        raise UsageError("map source does not match the table's space")
    plain = SemifilterTable.from_function(
        f.target, table.carrier, lambda mu: table(precompose(f, mu)))
    return conical_bounded_coreflection(plain) if bounded else plain
