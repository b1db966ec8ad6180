import math

import pytest

import gibbsnorm


def test_defocusing_quartic_is_normalizable():
    v = gibbsnorm.classify("-x^4", d=1, n=1, alpha="1/2")
    assert v["status"] == "NORMALIZABLE"
    assert v["claim"] == "normalizability"


def test_focusing_quartic_has_a_witness_ray():
    v = gibbsnorm.classify("x^4", d=1, n=1, alpha="1/2")
    assert v["status"] == "NON_NORMALIZABLE"
    assert v["witness"] is not None


def test_taming_rescues_the_cubic():
    assert gibbsnorm.check_taming("x^3", d=1, n=1, alpha="1/2")["status"] == "NORMALIZABLE"


def test_hermite_low_orders():
    assert gibbsnorm.hermite(0, 0.3, 2.0) == 1.0
    assert gibbsnorm.hermite(2, 0.3, 2.0) == pytest.approx(0.09 - 2.0)
    assert gibbsnorm.hermite(3, 0.3, 2.0) == pytest.approx(0.027 - 3 * 2.0 * 0.3)


def test_sigma_grows_logarithmically_at_half():
    a = gibbsnorm.sigma_alpha_N(1, 0.5, 1024)
    b = gibbsnorm.sigma_alpha_N(1, 0.5, 2048)
    assert b - a == pytest.approx(2 * math.log(2), rel=1e-2)


def test_wick_value_is_deterministic():
    a = gibbsnorm.wick_value("x^4", d=1, n=1, alpha="1/2", N=16, seed=3)
    b = gibbsnorm.wick_value("x^4", d=1, n=1, alpha="1/2", N=16, seed=3)
    assert a == b
    assert a["sigma"] == pytest.approx(gibbsnorm.sigma_alpha_N(1, 0.5, 16))


def test_estimate_rows():
    rows = gibbsnorm.estimate_z("-1/10*x^4", d=1, n=1, alpha="1/2", cutoffs=[8, 16], samples=100, seed=2)
    assert [r["N"] for r in rows] == [8, 16]
    assert all(r["mean"] > 0 and r["se"] >= 0 for r in rows)


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        gibbsnorm.classify("x^4", d=1, n=1, alpha="3/4")
    with pytest.raises(gibbsnorm.ConfigError):
        gibbsnorm.classify("x^^4", d=1, n=1, alpha="1/2")
