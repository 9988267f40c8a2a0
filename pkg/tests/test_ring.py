import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringunits.analyzer import exact_sequence_check
from ringunits.builders import build_truncated, build_zn, galois_ring, build_example_2
from ringunits.errors import AxiomViolation, DimensionMismatch, NotLocal, TooLarge
from ringunits.ring import (
    FiniteRing,
    add,
    direct_product,
    dumps,
    factor_ring,
    ideal_power_chain,
    idempotents,
    is_local,
    is_nilpotent,
    is_unit,
    is_zero_divisor,
    loads,
    make_ring,
    mul,
    nilradical,
    primitive_idempotents,
    residue_field_params,
    ring_from_dict,
    ring_to_dict,
    units_mask,
)


def dual_numbers():
    return make_ring([2, 2], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]])


def f4():
    return make_ring([2, 2], [[[1, 0], [0, 1]], [[0, 1], [1, 1]]])


def indices(sub):
    return sorted(int(i) for i in sub.indices)


# -- construction -----------------------------------------------------------


def test_z4_construction():
    r = make_ring([4], [[[1]]])
    assert r.order == 4 and r.characteristic == 4


def test_dual_numbers_square():
    r = dual_numbers()
    x = r.element([1, 1])
    assert mul(r, x, x) == r.one


def test_f4_is_a_field():
    r = f4()
    t = r.element([0, 1])
    assert (t * t).coeffs == (1, 1)
    assert all(is_unit(r, r.element_at(i)) for i in range(1, 4))


def test_z4_addition():
    r = make_ring([4], [[[1]]])
    assert add(r, r.element([3]), r.element([3])).coeffs == (2,)


@pytest.mark.parametrize("consts, kind", [
    ([[[1, 0], [0, 1]], [[0, 1], [1, 0]]], None),  # valid: F2[x]/(x^2-1)
    ([[[0, 1], [0, 1]], [[0, 1], [0, 0]]], "unity"),
    ([[[1, 0], [0, 1]], [[1, 0], [0, 0]]], "commutativity"),
])
def test_axiom_checks(consts, kind):
    if kind is None:
        make_ring([2, 2], consts)
        return
    with pytest.raises(AxiomViolation) as info:
        make_ring([2, 2], consts)
    assert info.value.kind == kind


def test_commutativity_violation_names_the_pair():
    consts = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
              [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
              [[0, 0, 1], [0, 1, 0], [0, 0, 0]]]
    with pytest.raises(AxiomViolation) as info:
        make_ring([2, 2, 2], consts)
    assert info.value.kind == "commutativity"
    assert info.value.where is not None


def test_associativity_violation():
    # e1^2 = e2, e1 e2 = 0, e2^2 = e2: (e1 e1) e2 = e2 but e1 (e1 e2) = 0
    consts = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
              [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
              [[0, 0, 1], [0, 0, 0], [0, 0, 1]]]
    with pytest.raises(AxiomViolation) as info:
        make_ring([2, 2, 2], consts)
    assert info.value.kind == "associativity"


def test_order_compatibility_violation():
    # Z/4 e0 + Z/2 e1 with e1^2 = e0: 2 * e1^2 = 2 != 0
    with pytest.raises(AxiomViolation) as info:
        make_ring([4, 2], [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    assert info.value.kind == "order-compatibility"


def test_shape_errors():
    with pytest.raises(AxiomViolation):
        make_ring([4, 3], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]])
    with pytest.raises(AxiomViolation):
        make_ring([4], [[[1, 0]]])


def test_dimension_mismatch():
    r = make_ring([4], [[[1]]])
    with pytest.raises(DimensionMismatch):
        r.element([1, 2])
    with pytest.raises(DimensionMismatch):
        add(r, r.one, f4().one)


def test_constants_are_reduced():
    r = make_ring([4], [[[5]]])
    assert r.structure_constants[0, 0, 0] == 1


# -- element predicates ----------------------------------------------------------


@pytest.mark.parametrize("n, x, unit, nil", [
    (4, 3, True, False),
    (4, 2, False, True),
    (6, 3, False, False),
    (12, 6, False, True),
])
def test_unit_and_nilpotent_in_zn(n, x, unit, nil):
    r = build_zn(n)
    assert is_unit(r, r.element([x])) is unit
    assert is_nilpotent(r, r.element([x])) is nil


def test_field_element_not_nilpotent():
    r = f4()
    assert not is_nilpotent(r, r.element([0, 1]))


@pytest.mark.parametrize("n, expected", [(4, [0, 2]), (12, [0, 6])])
def test_nilradical_zn(n, expected):
    assert indices(nilradical(build_zn(n))) == expected


def test_nilradical_of_field():
    assert indices(nilradical(f4())) == [0]


# -- locality, chains, idempotents -------------------------------------------------


def test_z4_local():
    local, m = is_local(build_zn(4))
    assert local and indices(m) == [0, 2]


def test_z6_not_local():
    local, m = is_local(build_zn(6))
    assert not local and m is None


def test_truncated_local_ideal():
    r = build_truncated(2, 1, 3)
    local, m = is_local(r)
    x, x2 = r.element([0, 1, 0]), r.element([0, 0, 1])
    assert local
    assert sorted(m.elements(), key=lambda e: e.index) == sorted(
        [r.zero, x, x2, x + x2], key=lambda e: e.index)


def test_z8_chain():
    chain = ideal_power_chain(build_zn(8))
    assert [indices(c) for c in chain] == [[0, 2, 4, 6], [0, 4], [0]]


def test_truncated_chain_orders():
    assert [c.order for c in ideal_power_chain(build_truncated(2, 1, 3))] == [4, 2, 1]


def test_galois_chain_orders():
    assert [c.order for c in ideal_power_chain(galois_ring(3, 2, 2))] == [9, 1]


def test_chain_needs_local_ring():
    with pytest.raises(NotLocal):
        ideal_power_chain(build_zn(6))


@pytest.mark.parametrize("ring, expected", [
    (lambda: build_zn(4), (2, 1)),
    (lambda: galois_ring(3, 2, 2), (3, 2)),
    (lambda: build_example_2(3), (2, 2)),
])
def test_residue_field(ring, expected):
    assert residue_field_params(ring()) == expected


def test_idempotents():
    assert sorted(e.index for e in idempotents(build_zn(6))) == [0, 1, 3, 4]
    assert sorted(e.index for e in idempotents(build_zn(4))) == [0, 1]


def test_primitive_idempotents_sum_to_one():
    r = build_zn(60)
    prims = primitive_idempotents(r)
    assert len(prims) == 3
    total = r.zero
    for e in prims:
        total = total + e
    assert total == r.one


def test_direct_product_unit_counts():
    assert units_mask(direct_product(build_zn(4), f4())).sum() == 6
    assert units_mask(direct_product(build_zn(4), build_zn(9))).sum() == 12


def test_factor_ring_recovers_factors():
    r = build_zn(12)
    orders = sorted(factor_ring(r, e).order for e in primitive_idempotents(r))
    assert orders == [3, 4]


# -- invariants over a corpus ---------------------------------------------------------


def corpus():
    return [
        build_zn(4), build_zn(6), build_zn(12), build_zn(36), dual_numbers(), f4(),
        build_truncated(2, 1, 3), build_truncated(3, 1, 3), galois_ring(2, 3, 2),
        galois_ring(3, 2, 2), direct_product(build_zn(4), f4()),
        direct_product(build_truncated(2, 1, 2), build_zn(9)),
    ]


@pytest.mark.parametrize("r", corpus(), ids=repr)
def test_unit_zero_divisor_dichotomy(r):
    for i in range(r.order):
        x = r.element_at(i)
        assert is_unit(r, x) != is_zero_divisor(r, x)


@pytest.mark.parametrize("r", corpus(), ids=repr)
def test_bulk_units_agree_with_power_orbits(r):
    mask = units_mask(r)
    assert [bool(mask[i]) for i in range(r.order)] == [is_unit(r, r.element_at(i)) for i in range(r.order)]


@pytest.mark.parametrize("r", corpus(), ids=repr)
def test_one_plus_nilradical_are_units(r):
    N = nilradical(r)
    ones = r.index_of(r.add_many(N.coords(), r.one.array()))
    assert units_mask(r)[ones].all()


@pytest.mark.parametrize("r", [x for x in corpus() if is_local(x)[0]], ids=repr)
def test_local_ring_units_and_nilradical(r):
    _, m = is_local(r)
    assert units_mask(r).sum() == r.order - m.order
    assert m == nilradical(r)
    chain = ideal_power_chain(r, m)
    assert all(a.order > b.order for a, b in zip(chain, chain[1:]))
    assert chain[-1].order == 1


@pytest.mark.parametrize("r", [build_zn(72), build_example_2(3), galois_ring(2, 4, 2),
                               direct_product(build_zn(8), build_zn(27))], ids=repr)
def test_exact_sequence_counts(r):
    N = nilradical(r)
    ideals = [N] + (ideal_power_chain(r)[1:] if is_local(r)[0] else [])
    for ideal in ideals:
        assert exact_sequence_check(r, ideal)


@pytest.mark.parametrize("r", corpus(), ids=repr)
def test_json_round_trip(r):
    assert loads(dumps(r)) == r
    assert ring_from_dict(ring_to_dict(r)) == r


def test_too_large_enumeration():
    r = FiniteRing([1 << 12, 1 << 12], np.array([[[1, 0], [0, 1]], [[0, 1], [0, 0]]]))
    with pytest.raises(TooLarge):
        r.elements()


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 200), st.data())
def test_zn_arithmetic_matches_integers(n, data):
    r = build_zn(n)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    assert mul(r, r.element([a]), r.element([b])).coeffs == ((a * b) % n,)
    assert add(r, r.element([a]), r.element([b])).coeffs == ((a + b) % n,)
    from math import gcd
    assert is_unit(r, r.element([a])) == (gcd(a, n) == 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_galois_ring_axioms_on_random_triples(i, j, k):
    r = galois_ring(3, 2, 2)
    x, y, z = (r.element_at(v) for v in (i, j, k))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
