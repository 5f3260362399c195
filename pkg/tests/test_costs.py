"""Builtin cost functions: values, partials, parsing, domain checks."""

import math

import numpy as np
import pytest

from depbound.costs import builtin, parse_cost

ALL_NAMES = ["sinr", "mac_rate1", "sum_rate", "secret_key", "prop_fair", "product", "additive"]


def _make(name):
    return builtin(name, s=1.0) if name == "mac_rate1" else builtin(name)


def test_point_values():
    assert _make("sinr")(1.0, 1.0) == pytest.approx(0.5)
    assert _make("sinr")(3.0, 0.0) == pytest.approx(3.0)
    assert _make("mac_rate1")(1.0, 0.0) == pytest.approx(1.0)
    assert _make("mac_rate1")(3.0, 0.0) == pytest.approx(2.0)
    assert _make("sum_rate")(1.0, 2.0) == pytest.approx(2.0)
    assert _make("prop_fair")(math.e - 1.0, math.e - 1.0) == pytest.approx(1.0)
    assert _make("product")(3.0, 4.0) == 12.0
    assert _make("additive")(3.0, 4.0) == 7.0


def test_secret_key_equals_unit_noise_mac_rate():
    sk = _make("secret_key")
    mac = builtin("mac_rate1", s=1.0)
    rng = np.random.default_rng(11)
    x = rng.uniform(0, 20, 200)
    y = rng.uniform(0, 20, 200)
    np.testing.assert_allclose(sk(x, y), mac(x, y), rtol=1e-12)


def test_mac_rate1_snr_db_parameterization():
    assert builtin("mac_rate1", snr_db=0.0).params["s"] == pytest.approx(1.0)
    assert builtin("mac_rate1", snr_db=10.0).params["s"] == pytest.approx(0.1)
    assert builtin("mac_rate1", snr_db=-10.0).params["s"] == pytest.approx(10.0)
    with pytest.raises(ValueError):
        builtin("mac_rate1")
    with pytest.raises(ValueError):
        builtin("mac_rate1", s=1.0, snr_db=0.0)
    with pytest.raises(ValueError):
        builtin("mac_rate1", s=0.0)
    with pytest.raises(ValueError):
        builtin("mac_rate1", s=-2.0)


@pytest.mark.parametrize("name", ALL_NAMES)
def test_analytic_mixed_partial_matches_finite_difference(name):
    cost = _make(name)
    rng = np.random.default_rng(5)
    x = rng.uniform(0.5, 9.0, 50)
    y = rng.uniform(0.5, 9.0, 50)
    h = 1e-4
    fd = (cost(x + h, y + h) - cost(x + h, y - h) - cost(x - h, y + h) + cost(x - h, y - h)) / (
        4.0 * h * h
    )
    analytic = cost.cross_partial(x, y)
    np.testing.assert_allclose(analytic, fd, atol=1e-6, rtol=1e-4)


@pytest.mark.parametrize("name", ALL_NAMES)
def test_vectorized_matches_scalar(name):
    cost = _make(name)
    xs = np.array([0.0, 0.3, 2.0, 11.0])
    ys = np.array([0.5, 0.0, 7.0, 0.1])
    vec = cost(xs, ys)
    for i in range(xs.size):
        assert vec[i] == pytest.approx(cost(float(xs[i]), float(ys[i])), rel=1e-15)


@pytest.mark.parametrize("name", ALL_NAMES)
def test_domain_validation(name):
    cost = _make(name)
    for bad_pair in [(-1.0, 1.0), (1.0, -1.0), (np.nan, 1.0), (1.0, np.inf)]:
        with pytest.raises(ValueError):
            cost(*bad_pair)
    with pytest.raises(ValueError):
        cost(np.array([1.0, -0.5]), np.array([1.0, 1.0]))


def test_parse_cost():
    assert parse_cost("sinr").name == "sinr"
    assert parse_cost("mac_rate1:s=0.5").params["s"] == 0.5
    assert parse_cost("mac_rate1:snr_db=3").params["s"] == pytest.approx(10 ** (-0.3))
    assert parse_cost("SINR").name == "sinr"


@pytest.mark.parametrize("text", ["nope", "mac_rate1:s", "mac_rate1:s=x", "sinr:k=1", "mac_rate1:q=1"])
def test_parse_cost_rejects(text):
    with pytest.raises(ValueError):
        parse_cost(text)


def test_repr_mentions_parameters():
    assert "s=0.5" in repr(builtin("mac_rate1", s=0.5))
    assert "sinr" in repr(builtin("sinr"))
