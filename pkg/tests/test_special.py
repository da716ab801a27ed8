import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from deev.special import (alp_coeffs, alp_eval, binom_real, gamma_half_integer,
                          hermite_eval, rodrigues_check)


def quadratic_alp(alpha, z):
    # independent closed form: L_2^a(z) = (a+1)(a+2)/2 - (a+2) z + z^2/2
    return (alpha + 1) * (alpha + 2) / 2 - (alpha + 2) * z + z * z / 2


def test_order_zero_is_one():
    for z in (-3.0, 0.0, 0.5, 17.0, 100.0):
        assert alp_eval(0, -0.5, z) == 1.0


def test_order_one_closed_form():
    for z in (-1.0, 0.0, 0.25, 2.0, 50.0):
        assert alp_eval(1, -0.5, z) == pytest.approx(0.5 - z, abs=1e-14)


def test_order_two_value():
    assert alp_eval(2, -0.5, 2.0) == pytest.approx(-0.625, abs=1e-14)
    assert quadratic_alp(-0.5, 2.0) == pytest.approx(-0.625, abs=1e-15)


def test_vectorized_matches_scalar():
    z = np.linspace(0, 30, 7)
    vals = alp_eval(4, -0.5, z)
    assert vals.shape == z.shape
    for zi, vi in zip(z, vals):
        assert alp_eval(4, -0.5, float(zi)) == vi


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        alp_eval(-1, 0.0, 1.0)


def test_coeffs_examples():
    assert alp_coeffs(0, -0.5).coeffs == (1.0,)
    c1 = alp_coeffs(1, -0.5)
    assert c1.coeffs == pytest.approx((0.5, -1.0))
    c3 = alp_coeffs(3, -0.5)
    assert len(c3.coeffs) == 4
    assert c3.coeffs[0] == pytest.approx(5.0 / 16.0, abs=1e-15)


def test_coeffs_match_recurrence_at_sample_points():
    c3 = alp_coeffs(3, -0.5)
    for z in np.linspace(0.0, 40.0, 20):
        rec = alp_eval(3, -0.5, float(z))
        assert c3.eval(float(z)) == pytest.approx(rec, rel=1e-10, abs=1e-12)


def test_recurrence_vs_series_property():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        m = int(rng.integers(0, 13))
        alpha = float(rng.uniform(-0.9, 3.0))
        z = float(rng.uniform(0.0, 100.0))
        a = alp_eval(m, alpha, z)
        b = alp_coeffs(m, alpha).eval(z)
        assert b == pytest.approx(a, rel=1e-10, abs=1e-10)


def test_value_at_zero_is_binomial():
    for m in range(13):
        for alpha in (-0.5, 0.0, 0.7, 2.0):
            expect = binom_real(m + alpha, m)
            assert alp_eval(m, alpha, 0.0) == pytest.approx(expect, rel=1e-14, abs=1e-14)


def test_against_scipy():
    rng = np.random.default_rng(5)
    for _ in range(200):
        m = int(rng.integers(0, 10))
        alpha = float(rng.choice([-0.5, 0.0, 1.0]))
        z = float(rng.uniform(0.0, 60.0))
        assert alp_eval(m, alpha, z) == pytest.approx(
            float(eval_genlaguerre(m, alpha, z)), rel=1e-9, abs=1e-9)


def test_rodrigues_examples():
    assert rodrigues_check(0, 1.0) == 1.0
    assert rodrigues_check(1, 1.0) == pytest.approx(-0.5, abs=1e-14)
    assert rodrigues_check(3, 0.7) == pytest.approx(alp_eval(3, -0.5, 0.49), abs=1e-10)


def test_rodrigues_hermite_connection_property():
    rng = np.random.default_rng(3)
    for _ in range(300):
        m = int(rng.integers(0, 9))
        x = float(rng.uniform(-5.0, 5.0))
        lhs = rodrigues_check(m, x)
        rhs = alp_eval(m, -0.5, x * x)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


def test_rodrigues_order_limit():
    with pytest.raises(ValueError):
        rodrigues_check(9, 1.0)


def test_hermite_recurrence_first_orders():
    x = 1.3
    assert hermite_eval(0, x) == 1.0
    assert hermite_eval(1, x) == pytest.approx(2 * x)
    assert hermite_eval(2, x) == pytest.approx(4 * x * x - 2)
    assert hermite_eval(3, x) == pytest.approx(8 * x ** 3 - 12 * x)


def test_gamma_half_integer_values():
    assert gamma_half_integer(0) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma_half_integer(1) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)
    assert gamma_half_integer(3) == pytest.approx(math.gamma(3.5), rel=1e-14)
