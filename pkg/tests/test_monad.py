import random
from fractions import Fraction as F

import pytest

from quantalab.classical import (all_proper_filters, filter_image,
                                 filter_multiplication, filter_unit,
                                 principal)
from quantalab.errors import UsageError
from quantalab.monad import (KleisliScenario, Variant, check_monad_laws,
                             check_naturality,
                             classical_correspondence_report, kleisli_extend,
                             monad_multiplication, monad_units,
                             multiplication_prefilter_members,
                             random_variant_table, table_satisfies,
                             unit_prefilter)
from quantalab.prefilter import member, normalize_basis
from quantalab.qfun import QFunction, SetMap, all_qfunctions, finite_set
from quantalab.quantale import five_chain, godel3, mv3, two_chain
from quantalab.semifilter import (SemifilterFamily, SemifilterTable,
                                  conical_bounded_coreflection,
                                  evaluation_unit, image_outer,
                                  level_prefilter, semifilter_of)

G3 = godel3()
X = finite_set("x0", "x1")
Y = finite_set("y0", "y1")


def qf(values, domain=X, carrier=G3):
    return QFunction(domain, tuple(F(v) for v in values), carrier)


# -- units and multiplication ---------------------------------------------------

def test_plain_units_are_evaluations():
    units = monad_units(X, G3)
    for x in X:
        assert units[x] == evaluation_unit(X, G3, x)


def test_bounded_unit_single_point_is_plain():
    s = finite_set("s")
    assert monad_units(s, G3, Variant.BOUNDED)["s"] == evaluation_unit(s, G3, "s")


def test_bounded_unit_example():
    units = monad_units(X, G3, Variant.BOUNDED)
    expected = semifilter_of(normalize_basis([qf([1, F(1, 2)])]))
    assert units["x0"] == expected


def test_multiplication_unit_law():
    target = semifilter_of(normalize_basis([qf([F(1, 2), 1])]))
    fam = SemifilterFamily.of([target, evaluation_unit(X, G3, "x0")])
    outer = SemifilterTable.from_function(fam.labels, G3, lambda xi: xi("g0"))
    assert monad_multiplication(outer, fam) == target


def test_multiplication_meet_example():
    members = [evaluation_unit(X, G3, "x0"), evaluation_unit(X, G3, "x1")]
    fam = SemifilterFamily.of(members)
    from quantalab.qfun import indicator
    outer = semifilter_of(normalize_basis(
        [indicator(fam.labels, G3, fam.labels.elements)]))
    got = monad_multiplication(outer, fam)
    from quantalab.semifilter import meet
    assert got == meet(members)   # coreflection is the identity on finite chains


def test_multiplication_rejects_nonconical_member():
    bad = SemifilterTable(finite_set("s"), G3,
                          {(F(0),): F(1, 2), (F(1, 2),): F(1, 2), (F(1),): F(1)})
    fam = SemifilterFamily.of([bad])
    outer = SemifilterTable.from_function(fam.labels, G3, lambda xi: xi("g0"))
    with pytest.raises(UsageError):
        monad_multiplication(outer, fam)


def test_variant_membership():
    e = evaluation_unit(X, G3, "x0")
    assert table_satisfies(e, Variant.PLAIN)
    assert table_satisfies(e, Variant.FILTER)
    assert not table_satisfies(e, Variant.BOUNDED)
    bounded = semifilter_of(normalize_basis([qf([F(1, 2), F(1, 2)])]))
    assert table_satisfies(bounded, Variant.BOUNDED)
    assert not table_satisfies(bounded, Variant.FILTER)


# -- kleisli extension ------------------------------------------------------------

def test_kleisli_unit_laws():
    rng = random.Random(0)
    units = monad_units(X, G3)
    d_sharp = kleisli_extend(units, X)
    for _ in range(6):
        t = random_variant_table(rng, X, G3)
        assert d_sharp(t) == t
    h = {x: random_variant_table(rng, Y, G3) for x in X}
    h_sharp = kleisli_extend(h, X)
    for x in X:
        assert h_sharp(units[x]) == h[x]


def test_kleisli_of_lifted_plain_map_is_image():
    from quantalab.semifilter import image_semifilter
    rng = random.Random(1)
    f = SetMap(X, Y, ("y1", "y0"))
    units_y = monad_units(Y, G3)
    h = {x: units_y[f(x)] for x in X}
    h_sharp = kleisli_extend(h, X)
    for _ in range(6):
        t = random_variant_table(rng, X, G3)
        assert h_sharp(t) == image_semifilter(f, t)


def test_kleisli_rejects_wrong_variant_values():
    h = {x: evaluation_unit(Y, G3, "y0") for x in X}
    with pytest.raises(UsageError):
        kleisli_extend(h, X, Variant.BOUNDED)


def test_kleisli_matches_materialized_outer_route():
    rng = random.Random(2)
    for variant in (Variant.PLAIN, Variant.FILTER, Variant.BOUNDED):
        h = {x: random_variant_table(rng, Y, G3, variant) for x in X}
        direct = kleisli_extend(h, X, variant)
        members = list(dict.fromkeys(
            list(h.values()) + list(monad_units(Y, G3, variant).values())))
        fam = SemifilterFamily.of(members)
        hmap = SetMap(X, fam.labels,
                      tuple(fam.labels.elements[members.index(h[x])] for x in X))
        for _ in range(4):
            t = random_variant_table(rng, X, G3, variant)
            outer = image_outer(t, hmap, fam)
            if variant is Variant.BOUNDED:
                outer = conical_bounded_coreflection(outer)
                via_family = monad_multiplication(outer, fam, variant)
            else:
                via_family = monad_multiplication(outer, fam, variant)
            assert direct(t) == via_family


# -- the law suite -----------------------------------------------------------------

@pytest.mark.parametrize("carrier", [godel3(), mv3()])
@pytest.mark.parametrize("variant", list(Variant))
def test_law_suite_small(carrier, variant):
    rep = check_monad_laws(carrier, sizes=(2, 2, 2), scenarios=25, seed=9,
                           variant=variant)
    assert rep.passed, rep.failures


def test_law_suite_five_chain():
    rep = check_monad_laws(five_chain(), sizes=(2, 2, 2), scenarios=10, seed=4)
    assert rep.passed, rep.failures


def test_law_suite_two_chain():
    rep = check_monad_laws(two_chain(), sizes=(2, 2, 2), scenarios=40, seed=6)
    assert rep.passed, rep.failures


def test_law_suite_budget_marks_incomplete():
    rep = check_monad_laws(G3, scenarios=10, seed=0, budget=3)
    assert rep.incomplete and rep.scenarios_run == 3
    assert not rep.passed


def test_law_suite_deterministic():
    a = check_monad_laws(G3, scenarios=5, seed=123)
    b = check_monad_laws(G3, scenarios=5, seed=123)
    assert a.checks == b.checks and a.failures == b.failures


def test_scenario_validation():
    with pytest.raises(UsageError):
        KleisliScenario(X, Y, Y, {"x0": evaluation_unit(Y, G3, "y0")},
                        {}, G3)   # f not total
    bad = SemifilterTable(Y, G3, {k.values: F(1) for k in all_qfunctions(Y, G3)})
    with pytest.raises(UsageError):
        KleisliScenario(X, Y, Y,
                        {"x0": bad, "x1": bad},
                        {"y0": bad, "y1": bad}, G3, Variant.FILTER)


# -- prefilter-side formulas ---------------------------------------------------------

def test_unit_prefilter_formula():
    pf = unit_prefilter(X, G3, "x0")
    for lam in all_qfunctions(X, G3):
        assert member(pf, lam) == (lam("x0") == 1)


def test_flattening_formula_agreement_is_checked():
    rep = check_naturality(G3, samples=6, seed=2)
    assert rep.passed, rep.failures


@pytest.mark.parametrize("carrier", [godel3(), mv3()])
def test_flattening_formula_agreement_exhaustive(carrier):
    # every outer prefilter generated by at most two functions over the full
    # universe of saturated prefilters on a singleton
    import itertools
    from quantalab.monad import _saturated_prefilter_universe
    s = finite_set("s")
    universe, labels = _saturated_prefilter_universe(s, carrier, 3 ** 9)
    fam = SemifilterFamily(labels, tuple(semifilter_of(f) for f in universe))
    fns = list(all_qfunctions(labels, carrier))
    bases = [[f] for f in fns] + [list(p) for p in itertools.combinations(fns, 2)]
    for raw in bases:
        outer_basis = normalize_basis(raw, labels, carrier)
        outer = semifilter_of(outer_basis)
        flattened = monad_multiplication(outer, fam)
        via_tables = {lam.values for lam in level_prefilter(flattened)}
        via_formula = {lam.values for lam in multiplication_prefilter_members(
            universe, labels, outer_basis)}
        assert via_tables == via_formula


@pytest.mark.parametrize("carrier", [mv3(), five_chain()])
def test_naturality_other_chains(carrier):
    rep = check_naturality(carrier, samples=5, seed=7)
    assert rep.passed, rep.failures


# -- classical correspondence ----------------------------------------------------------

def test_proper_filters_are_principal_upper_sets():
    fs = all_proper_filters(("a", "b", "c"))
    assert len(fs) == 7
    top = principal(("a", "b", "c"), ("a",))
    assert top.member(("a", "b"))
    assert not top.member(("b",))


def test_filter_monad_pieces():
    u = ("a", "b", "c")
    assert filter_unit(u, "b").base == frozenset(["b"])
    f = {"a": "u", "b": "u", "c": "v"}
    img = filter_image(f, ("u", "v"), principal(u, ("a", "c")))
    assert img.base == frozenset(["u", "v"])
    m = filter_multiplication(u, [principal(u, ("a",)), principal(u, ("b",))])
    assert m.base == frozenset(["a", "b"])


def test_classical_correspondence_full():
    rep = classical_correspondence_report(max_size=3)
    assert rep.passed, rep.failures
    assert rep.checks > 50
