"""Smoke tests for the extorb python module."""

import extorb


def test_classify_form():
    out = extorb.classify_form("x^2 + yz", 3)
    assert out["dim"] == 3
    assert out["bilrad_dim"] == 1
    assert out["arf"] == 0
    assert "Φ₃" in out["label"]


def test_reduce_and_equiv():
    out = extorb.reduce_form("xy + y^2", 2)
    assert out["standard"] == "xy"
    assert extorb.equivalent_forms("xy + y^2", "xy", 2)
    assert not extorb.equivalent_forms("xy", "x^2", 2)


def test_analyze_class():
    out = extorb.analyze_class("xy; yz", 2, 3, 2)
    assert out["breakdown"]["order"] == "6"
    assert out["joint"]["order"] == "6"
    assert out["joint"]["label"] == "S3"


def test_aut_order():
    out = extorb.aut_order("x1*x2; x2*x3; x3*x4", 2, 4, 3)
    assert out["aut_order"] == "32768"
    assert out["aut_order_factored"] == "2^15"


def test_catalog():
    names = extorb.catalog_names()
    assert "u4" in names
    assert "u5" in names
    entry = extorb.catalog_entry("u4")
    assert entry["expected"]["im_rho_order"] == "6"


def test_reproduce_targets():
    targets = extorb.reproduce_targets()
    assert "table-5.2.2" in targets
    assert "examples" in targets


def test_cap_error():
    import pytest

    with pytest.raises(extorb.CapExceededError):
        extorb.analyze_class("xy; yz", 2, 3, 2, cap=10)
