import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, Poly, symbols

from ringunits.analyzer import unit_group, units_for_each_polynomial
from ringunits.builders import (
    BuildRecipe,
    build_example_2,
    build_example_p,
    build_from_recipe,
    build_odd_family,
    build_two_family,
    build_zn,
    find_irreducible,
    galois_ring,
    irreducible_polynomials,
    is_irreducible_mod_p,
    parse_recipe,
    predicted_unit_group,
    recipe_order,
)
from ringunits.errors import (
    A0TooSmall,
    BuilderError,
    ExponentTooLarge,
    PartitionPrimeMismatch,
    PIsTwo,
    PTooLargeForDeskScale,
    TooLarge,
)
from ringunits.groups import parse_group
from ringunits.ring import is_local, residue_field_params, units_mask

t = symbols("t")


@pytest.mark.parametrize("p, lam, expected", [(2, 1, [0, 1]), (2, 2, [1, 1, 1]), (3, 2, [1, 0, 1])])
def test_find_irreducible(p, lam, expected):
    assert find_irreducible(p, lam) == expected


@pytest.mark.parametrize("p, lam", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_irreducibility_agrees_with_sympy(p, lam):
    ours = irreducible_polynomials(p, lam)
    for f in ours:
        assert Poly(list(reversed(f)), t, domain=GF(p)).is_irreducible
    # count of monic irreducibles of degree lam over F_p (Gauss)
    from sympy import divisors, mobius
    expected = sum(mobius(d) * p ** (lam // d) for d in divisors(lam)) // lam
    assert len(ours) == expected


def test_is_irreducible_rejects_reducible():
    assert not is_irreducible_mod_p([1, 0, 1], 2)  # t^2 + 1 = (t+1)^2
    assert not is_irreducible_mod_p([2, 0, 1], 3)  # t^2 - 1 over F_3
    assert is_irreducible_mod_p([1, 0, 1], 3)


@pytest.mark.parametrize("p, m, lam", [(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 2, 3), (5, 2, 2)])
def test_unit_group_independent_of_polynomial(p, m, lam):
    types = set(units_for_each_polynomial(p, m, lam).values())
    assert len(types) == 1


def test_galois_examples():
    assert build_zn(2) == galois_ring(2, 1, 1)
    r = galois_ring(3, 2, 2)
    assert r.order == 81 and units_mask(r).sum() == 72
    _, u = unit_group(galois_ring(2, 3, 1))
    assert u == parse_group("C2 x C2")


def test_galois_rejects_bad_polynomial():
    with pytest.raises(BuilderError):
        galois_ring(2, 2, 2, f=[1, 0, 1])


@pytest.mark.parametrize("p, m, lam", [(2, 1, 3), (2, 3, 2), (3, 2, 2), (3, 3, 1), (5, 2, 1), (2, 4, 1)])
def test_galois_local_structure(p, m, lam):
    r = galois_ring(p, m, lam)
    local, mideal = is_local(r)
    assert local and mideal.order == p ** (lam * (m - 1))
    assert residue_field_params(r) == (p, lam)


@pytest.mark.parametrize("p, lam, part, expected", [
    (3, 1, [1], "C2 x C3"),
    (3, 2, [1, 1], "C8 x C3^4"),
    (5, 1, [2], "C4 x C25"),
])
def test_odd_family_examples(p, lam, part, expected):
    _, u = unit_group(build_odd_family(p, lam, part))
    assert u == parse_group(expected)
    assert u == predicted_unit_group(BuildRecipe.odd(p, lam, part))


def test_odd_family_base_case_is_zn():
    r = build_odd_family(3, 1, [1])
    assert r.order == 9 and r.characteristic == 9


def test_odd_family_errors():
    with pytest.raises(PIsTwo):
        build_odd_family(2, 1, [1])
    from ringunits.builders import PGroupPartition
    with pytest.raises(PartitionPrimeMismatch):
        build_odd_family(3, 1, PGroupPartition(5, (1,)))


@pytest.mark.parametrize("lam, a0, part, expected", [
    (1, 2, [], "C2 x C2"),
    (1, 2, [1], "C2^3"),
    (2, 1, [], "C3 x C2 x C2"),
])
def test_two_family_examples(lam, a0, part, expected):
    _, u = unit_group(build_two_family(lam, a0, part))
    assert u == parse_group(expected)


def test_two_family_constraint():
    with pytest.raises(ExponentTooLarge):
        build_two_family(1, 1, [3])


def test_example_p():
    r = build_example_p(3)
    assert r.order == 6561
    _, u = unit_group(r)
    assert u == parse_group("C8 x C9 x C3^4")
    with pytest.raises(PTooLargeForDeskScale):
        build_example_p(7)


def test_example_2_errors():
    with pytest.raises(A0TooSmall):
        build_example_2(2)


def test_recipes():
    assert build_from_recipe(BuildRecipe.zn(4)) == build_zn(4)
    prod = BuildRecipe.product([BuildRecipe.galois(2, 1, 2), BuildRecipe.zn(9)])
    assert units_mask(build_from_recipe(prod)).sum() == 18
    assert build_from_recipe(BuildRecipe.odd(3, 1, [1])).order == 9
    assert recipe_order(prod) == 36


def test_recipe_text_and_dict_round_trip():
    recipes = [
        BuildRecipe.galois(3, 2, 2), BuildRecipe.odd(3, 2, [1, 1]), BuildRecipe.two(2, 3, []),
        BuildRecipe.example_p(3), BuildRecipe.example_2(3), BuildRecipe.truncated(2, 1, 3),
        BuildRecipe.product([BuildRecipe.zn(4), BuildRecipe.field(9)]),
    ]
    for rec in recipes:
        assert parse_recipe(str(rec)) == rec
        assert BuildRecipe.from_dict(rec.to_dict()) == rec


def test_cap():
    with pytest.raises(TooLarge):
        galois_ring(2, 10, 3)
    with pytest.raises(TooLarge):
        build_from_recipe(BuildRecipe.zn(100), cap=50)


def test_unknown_family():
    with pytest.raises(BuilderError):
        BuildRecipe("nope")
    with pytest.raises(BuilderError):
        BuildRecipe("galois", p=2)


FAMILY_SWEEP = [
    BuildRecipe.galois(2, 3, 2), BuildRecipe.galois(5, 2, 1), BuildRecipe.galois(3, 1, 3),
    BuildRecipe.odd(3, 1, [2, 1]), BuildRecipe.odd(5, 1, [1, 1]), BuildRecipe.odd(3, 2, [1]),
    BuildRecipe.two(1, 1, [1, 1]), BuildRecipe.two(2, 2, [1]), BuildRecipe.two(1, 3, [2, 1]),
    BuildRecipe.two(3, 1, []), BuildRecipe.example_2(3), BuildRecipe.zn(360),
    BuildRecipe.truncated(2, 1, 5), BuildRecipe.truncated(3, 1, 4), BuildRecipe.truncated(2, 2, 3),
    BuildRecipe.product([BuildRecipe.two(1, 2, [1]), BuildRecipe.field(7), BuildRecipe.truncated(3, 1, 2)]),
]


@pytest.mark.parametrize("recipe", FAMILY_SWEEP, ids=str)
def test_prediction_matches_brute_force(recipe):
    _, u = unit_group(build_from_recipe(recipe))
    assert u == predicted_unit_group(recipe)


@pytest.mark.parametrize("recipe", [r for r in FAMILY_SWEEP if r.family in ("odd", "two")], ids=str)
def test_family_outputs_local_with_right_residue(recipe):
    r = build_from_recipe(recipe)
    local, m = is_local(r)
    assert local
    assert residue_field_params(r, m) == (recipe.p, recipe.lam)
    one_plus_m = m.order
    units = units_mask(r).sum()
    assert units == (recipe.p**recipe.lam - 1) * one_plus_m


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 2), st.lists(st.integers(1, 2), min_size=1, max_size=2))
def test_odd_family_random(p, lam, part):
    part = sorted(part, reverse=True)
    recipe = BuildRecipe.odd(p, lam, part)
    if recipe_order(recipe) > 1 << 14:
        return
    _, u = unit_group(build_from_recipe(recipe))
    assert u == predicted_unit_group(recipe)
