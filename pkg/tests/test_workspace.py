import json

import pytest

import coxsaito.catalog as cat
from coxsaito.engine import IdealBasis, krull_dimension
from coxsaito.workspace import (
    Workspace,
    check_datum,
    check_discriminant_monic,
    check_saito_shape,
)


@pytest.fixture(scope="module")
def ws():
    return Workspace()


def test_check_datum(ws):
    for name in ("A2", "B3", "I2(8)"):
        cert = check_datum(ws.datum(name))
        assert cert.passed, cert.detail
        assert cert.constants["order"] == ws.datum(name).group_order
        from coxsaito.certs import verify_payload_item

        assert all(verify_payload_item(item) for item in cert.payload)


def test_check_datum_product(ws):
    cert = check_datum(ws.datum("B2xA1"))
    assert cert.passed, cert.detail
    assert cert.constants["order"] == 16


def test_saito_shape_and_monic(ws):
    for name in ("A3", "B3", "I2(6)"):
        shape = check_saito_shape(ws.saito(name))
        monic = check_discriminant_monic(ws.saito(name))
        assert shape.passed, shape.detail
        assert monic.passed, monic.detail
    d4 = check_saito_shape(ws.saito("D4"))
    assert d4.passed
    assert "shape_obstruction" in d4.constants


def test_product_suites_run_per_factor(ws):
    certs = ws.run_suite("A1xA1", "saito")
    assert len(certs) == 4  # two factors, two certificates each
    assert all(c.passed for c in certs)
    assert {c.ctype for c in certs} == {"A1"}


def test_discriminant_minor_ideal_dimension(ws):
    # codimension two inside three invariant coordinates
    t = ws.minor_table("B3", "discriminant")
    dim = krull_dimension(IdealBasis(t.all_minors(), homogeneous=True))
    assert dim == 1


def test_datum_disk_cache(tmp_path, ws):
    w1 = Workspace(cache_dir=str(tmp_path))
    d1 = w1.datum("B2")
    assert (tmp_path / "B2.datum.json").exists()
    cat._DATUM_CACHE.pop("B2", None)
    w2 = Workspace(cache_dir=str(tmp_path))
    d2 = w2.datum("B2")
    assert d2.delta == d1.delta
    assert d2.invariants == d1.invariants
    assert len(d2.group_elements()) == 8
    cat._DATUM_CACHE.pop("B2", None)


def test_report_round_trip(tmp_path, ws):
    from coxsaito.certs import verify_report_file, write_report

    certs = ws.run_suite("A2", "grc-A") + ws.run_suite("A2", "hrc")
    path = tmp_path / "report.json"
    write_report(str(path), "A2", certs, {"seed": 1})
    ok, failures = verify_report_file(str(path))
    assert ok, failures
    doc = json.loads(path.read_text())
    assert doc["type"] == "A2"
    assert len(doc["checks"]) == len(certs)
