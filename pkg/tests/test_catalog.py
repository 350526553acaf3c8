import random
from fractions import Fraction

import pytest

from coxsaito.catalog import (
    UnsupportedTypeError,
    build_datum,
    canonical_name,
    datum_to_json,
    is_invariant,
    parse_type,
    reynolds_average,
    stabilizer_components,
)
from coxsaito.polymatrix import jacobian


def test_parse_and_canonical_names():
    assert canonical_name(parse_type("A3")) == "A3"
    assert canonical_name(parse_type("I2(5)")) == "I2(5)"
    assert canonical_name(parse_type("G2")) == "I2(6)"
    assert canonical_name(parse_type("C3")) == "B3"
    assert canonical_name(parse_type("A1xA1")) == "A1xA1"


def test_unsupported_types():
    with pytest.raises(UnsupportedTypeError):
        build_datum("E6")
    with pytest.raises(UnsupportedTypeError):
        build_datum("E7")
    with pytest.raises(UnsupportedTypeError):
        build_datum("E8")
    # character field of the rank-2 group of order 14 is cubic
    with pytest.raises(UnsupportedTypeError):
        build_datum("I2(7)")
    with pytest.raises(UnsupportedTypeError):
        build_datum("nonsense")


def test_a1_minimal():
    d = build_datum("A1")
    assert d.rank == 1
    assert d.group_order == 2
    assert d.mirror_count == 1
    assert d.degrees == [2]
    assert len(d.delta.t) == 1 and d.delta.deg() == 1


@pytest.mark.parametrize(
    "name,order,mirrors,degrees,h",
    [
        ("A2", 6, 3, [2, 3], 3),
        ("A3", 24, 6, [2, 3, 4], 4),
        ("B2", 8, 4, [2, 4], 4),
        ("B3", 48, 9, [2, 4, 6], 6),
        ("D4", 192, 12, [2, 4, 4, 6], 6),
        ("I2(5)", 10, 5, [2, 5], 5),
        ("I2(6)", 12, 6, [2, 6], 6),
        ("I2(8)", 16, 8, [2, 8], 8),
        ("H3", 120, 15, [2, 6, 10], 10),
    ],
)
def test_catalog_data(name, order, mirrors, degrees, h):
    d = build_datum(name)
    assert d.group_order == order
    assert d.mirror_count == mirrors
    assert d.degrees == degrees
    assert d.coxeter_number == h
    assert sum(d.exponents) == mirrors
    # exponent symmetry for irreducible types
    exps = d.exponents
    for i in range(d.rank):
        assert exps[i] + exps[d.rank - 1 - i] == h
    # jacobian certificate
    assert d.jac_const
    J = jacobian(d.invariants, d.ring)
    assert J.det() == d.delta.scale(d.jac_const)


def test_h3_field():
    d = build_datum("H3")
    assert d.ring.d == 5


def test_i2_5_delta_has_five_linear_factors():
    d = build_datum("I2(5)")
    assert d.delta.deg() == 5
    assert len(d.mirror_forms) == 5
    from coxsaito.poly import product

    assert product(d.mirror_forms, d.ring) == d.delta


def test_invariance_under_all_generators():
    for name in ("A3", "B3", "I2(5)"):
        d = build_datum(name)
        for p in d.invariants:
            assert is_invariant(d, p)


def test_reynolds_projection_properties():
    d = build_datum("B2")
    ring = d.ring
    x1 = ring.gen(0)
    avg = reynolds_average(d, x1 * x1)
    assert avg == (x1 * x1 + ring.gen(1) * ring.gen(1)).scale(Fraction(1, 2))
    # idempotent on invariants: averaging twice changes nothing
    assert reynolds_average(d, avg) == avg
    # no degree-one invariants
    a2 = build_datum("A2")
    assert not reynolds_average(a2, a2.ring.gen(0))
    rng = random.Random(3)
    for _ in range(5):
        f = ring.from_dict(
            {
                (rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-3, 3))
                for _ in range(3)
            }
        )
        assert is_invariant(d, reynolds_average(d, f))


def test_delta_squarefree_by_construction():
    for name in ("A3", "B3", "I2(6)"):
        d = build_datum(name)
        dirs = set()
        for f in d.mirror_forms:
            key = tuple(sorted(f.t.items()))
            assert key not in dirs
            dirs.add(key)


def test_stabilizer_components():
    a3 = build_datum("A3")
    # off the arrangement
    assert stabilizer_components(a3, [1, 2, 5]) == []
    # two commuting reflections at the two-plane stratum
    comps = stabilizer_components(a3, [1, 1, -1])
    assert len(comps) == 2 and all(len(c) == 1 for c in comps)
    # a rank-2 wall: three mirrors in one component
    comps = stabilizer_components(a3, [1, 1, 1])
    assert len(comps) == 1 and len(comps[0]) == 3
    # the origin of an irreducible group is a single component
    assert len(stexpected := stabilizer_components(a3, [0, 0, 0])) == 1
    assert len(stexpected[0]) == a3.mirror_count


def test_product_datum():
    d = build_datum("A1xA1xA1")
    assert d.group_order == 8
    assert d.mirror_count == 3
    assert d.degrees == [2, 2, 2]
    assert len(d.factors) == 3
    # delta multiplies and the origin splits into three components
    assert d.delta.deg() == 3
    assert len(stabilizer_components(d, [0, 0, 0])) == 3

    mixed = build_datum("B2xA1")
    assert mixed.group_order == 16
    assert mixed.mirror_count == 5
    J = jacobian(mixed.invariants, mixed.ring)
    assert J.det() == mixed.delta.scale(mixed.jac_const)


def test_product_mixing_fields_rejected():
    with pytest.raises(UnsupportedTypeError):
        build_datum("I2(5)xI2(8)")


def test_fixture_json_shape():
    d = build_datum("A2")
    doc = datum_to_json(d)
    assert doc["type"] == "A2"
    assert doc["degrees"] == [2, 3]
    assert len(doc["roots"]) == 3
    assert "jac_const" in doc
