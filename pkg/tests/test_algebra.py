import pytest

from coxsaito.algebra import (
    build_mul_table,
    check_boolean_split,
    check_fibers,
    check_generator_match,
    check_mul_table,
    check_normalization_gap,
    check_quotient_rule,
    fiber_point_count,
    fraction_representatives,
    sample_points,
    verify_generators,
)
from coxsaito.catalog import build_datum, stabilizer_components
from coxsaito.rankcond import ARRANGEMENT, DISCRIMINANT, build_minor_table
from coxsaito.saito import PullbackCache, build_saito


_WS = {}


def setup(name):
    if name not in _WS:
        d = build_datum(name)
        sd = build_saito(d)
        tA = build_minor_table(sd, ARRANGEMENT)
        tD = build_minor_table(sd, DISCRIMINANT)
        _WS[name] = (d, sd, tA, tD)
    return _WS[name]


def mul_tables(name):
    d, sd, tA, tD = setup(name)
    key = name + ":mul"
    if key not in _WS:
        _WS[key] = (build_mul_table(tA), build_mul_table(tD))
    return _WS[key]


def test_cross_identities_all_columns():
    for name in ("A2", "B2", "A3"):
        d, sd, tA, tD = setup(name)
        for t in (tA, tD):
            cert = verify_generators(t)
            assert cert.passed, cert.detail


def test_unit_generator():
    d, sd, tA, tD = setup("A2")
    mA, mD = mul_tables("A2")
    l = d.rank
    # h_l is the unit: its numerator equals the denominator
    assert mA.numerator(l - 1) == mA.denominator()
    for j in range(l):
        row = mA.constants[l - 1][j]
        for k in range(l):
            expect = d.ring.one() if k == j else d.ring.zero()
            assert row[k] == expect


def test_denominator_avoids_mirrors():
    for name in ("A2", "A3", "B3"):
        d, sd, tA, tD = setup(name)
        nums = fraction_representatives(tA)
        den = nums[-1]
        assert not any(den.divisible_by(f) for f in d.mirror_forms)


def test_mul_tables_commutative_associative_unital():
    for name in ("A2", "B2", "I2(5)", "A3", "B3"):
        mA, mD = mul_tables(name)
        for mt in (mA, mD):
            cert = check_mul_table(mt)
            assert cert.passed, (name, mt.side, cert.detail)
            l = mt.rank
            for i in range(l):
                for j in range(l):
                    for k in range(l):
                        assert mt.constants[i][j][k] == mt.constants[j][i][k]


def test_dihedral_discriminant_square_entry():
    # for the odd dihedral type the square of the nontrivial generator is a
    # power of the quadratic invariant modulo the discriminant
    d, sd, tA, tD = setup("I2(5)")
    mD = build_mul_table(tD)
    c = mD.constants[0][0]
    # g1*g1 = c[0] h_1 + c[1] * 1; the unit component carries p1^(h-2)
    assert c[1].whomog_degree() == 2 * (5 - 2)
    assert c[1].coeff_of((3, 0))


def test_quotient_rule_and_generator_match():
    for name in ("A2", "B2", "A3", "B3", "I2(5)"):
        d, sd, tA, tD = setup(name)
        cache = PullbackCache(d)
        assert check_quotient_rule(sd, tA, cache).passed
        assert check_generator_match(sd, tA, tD, cache).passed


def test_fiber_counts_reference_points():
    d, sd, tA, tD = setup("A3")
    mA, _ = mul_tables("A3")
    # generic mirror point: a fold, one point
    assert fiber_point_count(mA, [9, 9, 8]) == 1
    # the two-plane stratum carries two points
    assert fiber_point_count(mA, [1, 1, -1]) == 2
    assert len(stabilizer_components(d, [1, 1, -1])) == 2
    # the rank-2 wall and the origin are single points
    assert fiber_point_count(mA, [1, 1, 1]) == 1
    assert fiber_point_count(mA, [0, 0, 0]) == 1
    # off the arrangement the fiber is empty
    assert fiber_point_count(mA, [1, 2, 5]) == 0


def test_fiber_certificates():
    for name in ("A2", "B2", "A3", "B3", "I2(5)", "I2(6)"):
        mA, _ = mul_tables(name)
        cert = check_fibers(mA)
        assert cert.passed, (name, cert.detail)
        recs = cert.constants["points"]
        assert len(recs) >= 10 or mul_tables(name)[0].rank == 2
        assert any(r["label"] == "origin" for r in recs)


def test_sample_points_have_enough_variety():
    d, sd, tA, tD = setup("A3")
    pts = sample_points(d)
    labels = [lab for lab, _ in pts]
    assert labels.count("mirror") >= 3
    assert labels.count("codim2") >= 2
    assert "origin" in labels and "off" in labels
    assert len(pts) >= 10


def test_normalization_gap_for_odd_dihedral():
    d, sd, tA, tD = setup("I2(5)")
    cert = check_normalization_gap(sd, tD)
    assert cert.passed, cert.detail
    assert cert.constants["gaps"][0] == 1
    assert cert.constants["dims"]["1"] == 0
    assert cert.constants["dims"]["2"] == 1
    assert cert.constants["dims"]["3"] == 1  # t^(h-2) appears


def test_normalization_gap_rejects_even_types():
    d, sd, tA, tD = setup("I2(6)")
    cert = check_normalization_gap(sd, tD)
    assert cert.verdict == "fail"


def test_boolean_split():
    d = build_datum("A1xA1xA1")
    cert = check_boolean_split(d, None)
    assert cert.passed, cert.detail
    assert cert.constants["factors"] == 3


def test_fiber_count_at_origin_counts_factors():
    # reducible groups: as many points over the origin as factors
    d = build_datum("A1xA1")
    assert len(stabilizer_components(d, [0, 0])) == 2
    d3 = build_datum("B2xA1")
    assert len(stabilizer_components(d3, [0, 0, 0])) == 2
