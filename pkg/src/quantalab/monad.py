"""Monad assembly over finite carriers: units, multiplication, Kleisli
extension, seeded law suites, naturality spot checks and the classical
filter correspondence.

The unit at a point is the evaluation table (already conical); the
multiplication is the conical coreflection of a Kowalsky sum over a declared
family.  The Kleisli extension of ``h`` never materializes second-level
tables: the raw sum at ``lam`` is just ``T`` applied to ``x |-> h(x)(lam)``,
which is exact and family-independent, so the law suite over a finite
carrier is a finite exact computation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

from .errors import UsageError
from .classical import (all_proper_filters, filter_image, filter_multiplication,
                        filter_unit, principal)
from .prefilter import (PrefilterBasis, bounded_coreflection, eval_degree,
                        image_prefilter, member, normalize_basis,
                        saturation_member)
from .qfun import (FiniteSet, QFunction, SetMap, all_qfunctions, constant,
                   indicator)
from .quantale import FiniteQuantale, two_chain
from .semifilter import (SemifilterFamily, SemifilterTable,
                         conical_bounded_coreflection, conical_coreflection,
                         enumerate_semifilters, evaluation_unit, image_outer,
                         image_semifilter, is_bounded, is_conical,
                         kowalsky_sum, level_prefilter, semifilter_of)


class Variant(Enum):
    PLAIN = "plain"
    FILTER = "filter"
    BOUNDED = "bounded"


def _is_filter_table(table: SemifilterTable) -> bool:
    q = table.carrier
    return all(q.leq(table(constant(table.domain, q, p)), p) for p in q.elements)


def table_satisfies(table: SemifilterTable, variant: Variant) -> bool:
    """Whether a table belongs to the variant's subcategory of semifilters."""
    if not is_conical(table):
        return False
    if variant is Variant.FILTER:
        return _is_filter_table(table)
    if variant is Variant.BOUNDED:
        return is_bounded(table)
    return True


def monad_units(domain: FiniteSet, carrier: FiniteQuantale,
                variant: Variant = Variant.PLAIN) -> dict:
    """The unit at every point: evaluation tables, coreflected for BOUNDED."""
    out = {}
    for x in domain:
        e = evaluation_unit(domain, carrier, x)
        out[x] = conical_bounded_coreflection(e) if variant is Variant.BOUNDED else e
    return out


def monad_multiplication(outer: SemifilterTable, family: SemifilterFamily,
                         variant: Variant = Variant.PLAIN) -> SemifilterTable:
    """Variant coreflection of the Kowalsky sum over the declared family.

    Every family member must lie in the variant's subcategory; otherwise the
    input is rejected with the offending member.
    """
    for label, m in zip(family.labels, family.members):
        if not table_satisfies(m, variant):
            raise UsageError(f"family member {label!r} is not a "
                             f"{variant.value} semifilter")
    raw = kowalsky_sum(outer, family)
    if variant is Variant.BOUNDED:
        return conical_bounded_coreflection(raw)
    return conical_coreflection(raw)


@dataclass(frozen=True)
class KleisliScenario:
    """One sampled instance of the associativity data: maps into table spaces.

    ``f`` maps each point of x_set to a table on y_set, ``g`` likewise from
    y_set into tables on z_set; every value must pass the variant test.
    """

    x_set: FiniteSet
    y_set: FiniteSet
    z_set: FiniteSet
    f: dict
    g: dict
    carrier: FiniteQuantale
    variant: Variant = Variant.PLAIN
    seed: object = None

    def __post_init__(self):
        for name, m, src in (("f", self.f, self.x_set), ("g", self.g, self.y_set)):
            for x in src:
                if x not in m:
                    raise UsageError(f"{name} is not total: missing {x!r}")
                if not table_satisfies(m[x], self.variant):
                    raise UsageError(
                        f"{name}({x!r}) is not a {self.variant.value} semifilter")


def kleisli_extend(h: Mapping, domain: FiniteSet, variant: Variant = Variant.PLAIN,
                   check: bool = True) -> Callable[[SemifilterTable], SemifilterTable]:
    """Lift a map into tables to a map between table spaces.

    The raw sum sends lam to T(x |-> h(x)(lam)); the variant coreflection of
    that is the extension.  Equivalent to coreflecting the Kowalsky sum of
    the pushed-forward outer table over any family containing h's values and
    the units (checked in the tests), but computed directly.
    """
    values = [h[x] for x in domain]
    if not values:
        raise UsageError("cannot extend over an empty domain")
    target = values[0].domain
    carrier = values[0].carrier
    if check:
        for x in domain:
            if not table_satisfies(h[x], variant):
                raise UsageError(f"h({x!r}) is not a {variant.value} semifilter")

    def extend(table: SemifilterTable) -> SemifilterTable:
        if table.domain != domain or table.carrier != carrier:
            raise UsageError("table does not match the extension's source")
        raw = SemifilterTable.from_function(
            target, carrier,
            lambda lam: table(QFunction(domain, tuple(m(lam) for m in values),
                                        carrier)))
        if variant is Variant.BOUNDED:
            return conical_bounded_coreflection(raw)
        return conical_coreflection(raw)

    return extend


# -- sampling ----------------------------------------------------------------

def _labels(prefix: str, n: int) -> FiniteSet:
    return FiniteSet(tuple(f"{prefix}{i}" for i in range(n)))

def random_qfunction(rng: random.Random, domain: FiniteSet,
                     carrier: FiniteQuantale, positive: bool = False) -> QFunction:
    pool = [e for e in carrier.elements if not positive or e != carrier.bottom]
    return QFunction(domain, tuple(rng.choice(pool) for _ in domain), carrier)


def random_variant_table(rng: random.Random, domain: FiniteSet,
                         carrier: FiniteQuantale,
                         variant: Variant = Variant.PLAIN) -> SemifilterTable:
    """A seeded conical table of the requested kind, built from a random basis.

    FILTER bases share a pivot point held at the top so meets stay at the
    top there (a top-filter basis); BOUNDED bases avoid the bottom value so
    every basis element stays positive.
    """
    size = rng.choice((1, 2))
    fns = []
    pivot = rng.randrange(len(domain)) if len(domain) else 0
    for _ in range(size):
        fn = random_qfunction(rng, domain, carrier,
                              positive=variant is Variant.BOUNDED)
        if variant is Variant.FILTER and len(domain):
            vals = list(fn.values)
            vals[pivot] = carrier.top
            fn = fn.with_values(vals)
        fns.append(fn)
    return semifilter_of(normalize_basis(fns, domain, carrier))


def random_scenario(rng: random.Random, carrier: FiniteQuantale,
                    sizes: tuple[int, int, int],
                    variant: Variant = Variant.PLAIN) -> KleisliScenario:
    nx, ny, nz = sizes
    xs, ys, zs = _labels("x", nx), _labels("y", ny), _labels("z", nz)
    f = {x: random_variant_table(rng, ys, carrier, variant) for x in xs}
    g = {y: random_variant_table(rng, zs, carrier, variant) for y in ys}
    return KleisliScenario(xs, ys, zs, f, g, carrier, variant)


# -- law suite ---------------------------------------------------------------

@dataclass
class LawFailure:
    law: str
    scenario: int
    detail: str


@dataclass
class LawReport:
    variant: Variant
    sizes: tuple[int, int, int]
    seed: int
    scenarios_run: int
    checks: int = 0
    failures: list[LawFailure] = field(default_factory=list)
    incomplete: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures and not self.incomplete


def check_monad_laws(carrier: FiniteQuantale, sizes: tuple[int, int, int] = (2, 2, 2),
                     scenarios: int = 200, seed: int = 0,
                     variant: Variant = Variant.PLAIN,
                     budget: int | None = None) -> LawReport:
    """Seeded verification of the unit laws and Kleisli associativity.

    Per scenario: the extension of the units is the identity, extending a
    map then applying it to a unit returns the map's value, and the two ways
    of composing extensions agree.  All equalities are exact table
    comparisons; failures carry the scenario index for replay.
    """
    to_run = scenarios
    report = LawReport(variant, sizes, seed, 0)
    if budget is not None and scenarios > budget:
        to_run = budget
        report.incomplete = True
    for i in range(to_run):
        rng = random.Random(seed * 1_000_003 + i)
        sc = random_scenario(rng, carrier, sizes, variant)
        units_x = monad_units(sc.x_set, carrier, variant)
        t = random_variant_table(rng, sc.x_set, carrier, variant)

        d_sharp = kleisli_extend(units_x, sc.x_set, variant, check=False)
        if d_sharp(t) != t:
            report.failures.append(LawFailure("unit-extension-identity", i,
                                              f"table {t.canonical_values()}"))
        f_sharp = kleisli_extend(sc.f, sc.x_set, variant, check=False)
        for x in sc.x_set:
            if f_sharp(units_x[x]) != sc.f[x]:
                report.failures.append(LawFailure("extension-after-unit", i,
                                                  f"at point {x!r}"))
        g_sharp = kleisli_extend(sc.g, sc.y_set, variant, check=False)
        gf = {x: g_sharp(sc.f[x]) for x in sc.x_set}
        gf_sharp = kleisli_extend(gf, sc.x_set, variant, check=False)
        if g_sharp(f_sharp(t)) != gf_sharp(t):
            report.failures.append(LawFailure("associativity", i,
                                              f"table {t.canonical_values()}"))
        report.checks += 2 + len(sc.x_set)
        report.scenarios_run += 1
    return report


# -- prefilter-side formulas -------------------------------------------------

def unit_prefilter(domain: FiniteSet, carrier, x) -> PrefilterBasis:
    """The saturated prefilter of functions whose value at x reaches the unit."""
    values = tuple(carrier.unit if y == x else carrier.bottom for y in domain)
    return normalize_basis([QFunction(domain, values, carrier)])


def functional_of(lam: QFunction, universe: Sequence[PrefilterBasis],
                  labels: FiniteSet) -> QFunction:
    """lam-tilde: each prefilter of the universe gets its degree of lam."""
    return QFunction(labels, tuple(eval_degree(f, lam) for f in universe),
                     lam.carrier)


def multiplication_prefilter_members(universe: Sequence[PrefilterBasis],
                                     labels: FiniteSet,
                                     outer: PrefilterBasis) -> tuple[QFunction, ...]:
    """The flattened prefilter by the membership formula: lam belongs iff its
    functional over the universe lies in the saturation of the outer
    prefilter.  Exhaustive over the finite function space."""
    domain = universe[0].domain
    carrier = universe[0].carrier
    return tuple(lam for lam in all_qfunctions(domain, carrier)
                 if saturation_member(outer, functional_of(lam, universe, labels)))


# -- naturality --------------------------------------------------------------

@dataclass
class NaturalityReport:
    failures: list[str] = field(default_factory=list)
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        self.checks += 1
        if not ok:
            self.failures.append(label)


def _saturated_prefilter_universe(domain: FiniteSet, carrier: FiniteQuantale,
                                  budget: int) -> tuple[list[PrefilterBasis], FiniteSet]:
    """All saturated prefilters on the domain, via the conical tables."""
    conicals = enumerate_semifilters(domain, carrier, "conical", budget=budget)
    bases = [normalize_basis(level_prefilter(t), domain, carrier) for t in conicals]
    return bases, _labels("F", len(bases))


def check_naturality(carrier: FiniteQuantale, samples: int = 12, seed: int = 0,
                     enum_budget: int = 3 ** 9) -> NaturalityReport:
    """Spot checks tying the prefilter formulas to the table constructions.

    Covers: the unit formula, the flattening formula against the coreflected
    Kowalsky sum, retraction of the coreflection on conical tables, the
    bounded multiplication naturality square, and naturality of the two
    bounded coreflections.
    """
    rep = NaturalityReport()
    rng = random.Random(seed)
    X = _labels("x", 2)
    Y = _labels("y", 2)

    # unit formula: the level set of the evaluation unit
    for x in X:
        expected = {lam.values for lam in all_qfunctions(X, carrier)
                    if carrier.leq(carrier.unit, lam(x))}
        got = {lam.values for lam in level_prefilter(evaluation_unit(X, carrier, x))}
        rep.record(got == expected, f"unit-formula at {x!r}")

    # flattening formula against the coreflected Kowalsky sum
    S = _labels("s", 1)
    universe, labels = _saturated_prefilter_universe(S, carrier, enum_budget)
    family = SemifilterFamily(labels, tuple(semifilter_of(f) for f in universe))
    for i in range(samples):
        outer_basis = normalize_basis(
            [random_qfunction(rng, labels, carrier) for _ in range(rng.choice((1, 2)))],
            labels, carrier)
        outer = semifilter_of(outer_basis)
        flattened = monad_multiplication(outer, family)
        via_tables = {lam.values for lam in level_prefilter(flattened)}
        via_formula = {lam.values for lam in
                       multiplication_prefilter_members(universe, labels, outer_basis)}
        rep.record(via_tables == via_formula, f"flattening-formula #{i}")

    # the coreflection retracts the inclusion of conical tables
    conicals = enumerate_semifilters(S, carrier, "conical", budget=enum_budget)
    rep.record(all(conical_coreflection(t) == t for t in conicals),
               "coreflection-retraction")

    # naturality of both bounded coreflections along sampled maps
    for i in range(samples):
        f = SetMap(X, Y, tuple(rng.choice(Y.elements) for _ in X))
        table = random_variant_table(rng, X, carrier)
        lhs = conical_bounded_coreflection(image_semifilter(f, table))
        rhs = conical_bounded_coreflection(
            image_semifilter(f, conical_bounded_coreflection(table)))
        rep.record(lhs == rhs, f"bounded-table-coreflection-naturality #{i}")

        basis = normalize_basis(
            [random_qfunction(rng, X, carrier) for _ in range(rng.choice((1, 2)))],
            X, carrier)
        plhs = bounded_coreflection(image_prefilter(f, basis))
        prhs = image_prefilter(f, bounded_coreflection(basis))
        rep.record(plhs == bounded_coreflection(prhs),
                   f"bounded-prefilter-coreflection-naturality #{i}")

    # bounded multiplication naturality square
    for i in range(samples):
        f = SetMap(X, Y, tuple(rng.choice(Y.elements) for _ in X))
        inner = [random_variant_table(rng, X, carrier, Variant.BOUNDED)
                 for _ in range(rng.choice((1, 2)))]
        inner = list(dict.fromkeys(inner))
        fam_x = SemifilterFamily.of(inner)
        outer = conical_bounded_coreflection(semifilter_of(normalize_basis(
            [random_qfunction(rng, fam_x.labels, carrier)
             for _ in range(rng.choice((1, 2)))], fam_x.labels, carrier)))
        lhs = image_semifilter(
            f, monad_multiplication(outer, fam_x, Variant.BOUNDED), bounded=True)

        pushed = [image_semifilter(f, t, bounded=True) for t in inner]
        units_y = list(monad_units(Y, carrier, Variant.BOUNDED).values())
        members_y = list(dict.fromkeys(pushed + units_y))
        fam_y = SemifilterFamily.of(members_y, prefix="h")
        h = SetMap(fam_x.labels, fam_y.labels,
                   tuple(fam_y.labels.elements[members_y.index(t)] for t in pushed))
        outer_y = conical_bounded_coreflection(image_outer(outer, h, fam_y))
        rhs = monad_multiplication(outer_y, fam_y, Variant.BOUNDED)
        rep.record(lhs == rhs, f"bounded-multiplication-square #{i}")
    return rep


# -- classical correspondence ------------------------------------------------

@dataclass
class CorrespondenceReport:
    sizes: list[int]
    failures: list[str] = field(default_factory=list)
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        self.checks += 1
        if not ok:
            self.failures.append(label)


def _filter_of_table(table: SemifilterTable) -> frozenset:
    """The family of crisp sets the table holds at full degree."""
    q = table.carrier
    domain = table.domain
    out = []
    for lam in table.functions():
        if all(v in (q.bottom, q.top) for v in lam.values) and table(lam) == q.top:
            out.append(frozenset(x for x, v in zip(domain, lam.values) if v == q.top))
    return frozenset(out)


def classical_correspondence_report(max_size: int = 3) -> CorrespondenceReport:
    """Match the two-chain filter tables against the classical filter monad.

    Checks, for every base set up to the given size: the bijection between
    filter tables and proper set filters, the units, images along all maps,
    and Kowalsky sums over the full filter family against the classical
    multiplication.
    """
    q = two_chain()
    rep = CorrespondenceReport(list(range(1, max_size + 1)))
    for n in range(1, max_size + 1):
        X = _labels("x", n)
        tables = enumerate_semifilters(X, q, "filter", budget=2 ** (2 ** n) + 1)
        classical = all_proper_filters(X.elements)
        rep.record(len(tables) == len(classical) == 2 ** n - 1,
                   f"count mismatch at size {n}")
        sets_of = {t: _filter_of_table(t) for t in tables}
        classical_sets = {frozenset(f.sets()) for f in classical}
        rep.record(set(sets_of.values()) == classical_sets,
                   f"bijection mismatch at size {n}")

        for x in X:
            rep.record(sets_of[evaluation_unit(X, q, x)]
                       == frozenset(filter_unit(X.elements, x).sets()),
                       f"unit mismatch at {x!r} size {n}")

        Y = _labels("y", max(1, n - 1))
        for values in _all_maps(X, Y):
            f = SetMap(X, Y, values)
            fd = {x: f(x) for x in X}
            for t in tables:
                lhs = _filter_of_table(image_semifilter(f, t))
                ct = principal(X.elements, _principal_base(sets_of[t]))
                rhs = frozenset(filter_image(fd, Y.elements, ct).sets())
                rep.record(lhs == rhs, f"image mismatch size {n}")

        family = SemifilterFamily.of(tables)
        for combo_size in (1, 2):
            for base in _combos(tables, combo_size):
                wanted = indicator(family.labels, q,
                                   [family.labels.elements[tables.index(t)]
                                    for t in base])
                outer = semifilter_of(normalize_basis([wanted]))
                got = kowalsky_sum(outer, family)
                expect = filter_multiplication(
                    X.elements,
                    [principal(X.elements, _principal_base(sets_of[t])) for t in base])
                rep.record(_filter_of_table(got) == frozenset(expect.sets()),
                           f"multiplication mismatch size {n}")
    return rep


def _principal_base(sets: frozenset) -> frozenset:
    out = None
    for s in sets:
        out = s if out is None else out & s
    return out


def _all_maps(src: FiniteSet, dst: FiniteSet):
    import itertools
    return itertools.product(dst.elements, repeat=len(src))


def _combos(items, r):
    import itertools
    return itertools.combinations(items, r)
