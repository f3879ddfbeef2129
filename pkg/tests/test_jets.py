"""Jet arithmetic against hand values and the finite-difference oracle."""

import math

import numpy as np
import pytest

from liftgeom.errors import DomainError
from liftgeom.findiff import fd_derivative
from liftgeom.jets import (
    Jet, jet_apply, jet_combine, jet_compose, jet_space, jet_var, seed_point,
)


def test_variable_seed():
    x = jet_var(0, 3.0, 1, 4)
    assert x.value == 3.0
    assert x.coeff((1,)) == 1.0
    assert x.coeff((2,)) == 0.0
    assert x.is_variable_seed(0)


def test_variable_seed_index_out_of_range():
    with pytest.raises(IndexError):
        jet_var(2, 1.0, 2, 4)


def test_square_partials():
    x = jet_var(0, 3.0, 1, 4)
    sq = x * x
    assert sq.partial((1,)) == pytest.approx(6.0)
    assert sq.partial((2,)) == pytest.approx(2.0)
    assert sq.partial((3,)) == 0.0


def test_exp_at_zero_all_partials_one():
    x = jet_var(0, 0.0, 1, 4)
    e = jet_apply("exp", x)
    for k in range(5):
        assert e.partial((k,)) == pytest.approx(1.0)


def test_product_coefficients_order_two():
    x = jet_var(0, 3.0, 1, 2)
    sq = jet_combine("mul", x, x)
    assert sq.coeff((0,)) == pytest.approx(9.0)
    assert sq.coeff((1,)) == pytest.approx(6.0)
    assert sq.coeff((2,)) == pytest.approx(1.0)


def test_reciprocal_first_partial():
    x = jet_var(0, 2.0, 1, 4)
    inv = jet_combine("div", Jet.constant(1.0, 1, 4), x)
    assert inv.partial((1,)) == pytest.approx(-0.25)


def test_division_by_zero_valued_jet():
    x = jet_var(0, 0.0, 1, 4)
    with pytest.raises(DomainError):
        1.0 / x


def test_mismatched_variable_counts_rejected():
    a = jet_var(0, 1.0, 1, 4)
    b = jet_var(0, 1.0, 2, 4)
    with pytest.raises(ValueError):
        a + b


def test_ln_series_at_one():
    x = jet_var(0, 1.0, 1, 4)
    lnx = jet_apply("ln", x)
    expected = [0.0, 1.0, -1.0, 2.0, -6.0]
    for k, val in enumerate(expected):
        assert lnx.partial((k,)) == pytest.approx(val)


def test_sqrt_at_four():
    x = jet_var(0, 4.0, 1, 4)
    s = jet_apply("sqrt", x)
    assert s.value == pytest.approx(2.0)
    assert s.partial((1,)) == pytest.approx(0.25)


def test_ln_of_fourth_power_second_partial():
    # d^2/dt^2 ln(t^4) = -4/t^2, equal to -1 at t = 2
    t = jet_var(0, 2.0, 1, 4)
    j = jet_apply("ln", t ** 4)
    assert j.partial((2,)) == pytest.approx(-1.0)


def test_domain_errors():
    x = jet_var(0, -1.0, 1, 4)
    with pytest.raises(DomainError):
        jet_apply("ln", x)
    with pytest.raises(DomainError):
        jet_apply("sqrt", x)
    with pytest.raises(DomainError):
        x ** 0.5


def test_integer_power_matches_repeated_multiplication():
    x = jet_var(0, -1.5, 1, 4)
    assert np.allclose((x ** 3).coeffs, (x * x * x).coeffs)
    y = jet_var(0, 2.0, 1, 4)
    np.testing.assert_allclose((y ** -2).coeffs, (1.0 / (y * y)).coeffs,
                               atol=1e-14)


def test_fractional_power():
    x = jet_var(0, 4.0, 1, 4)
    p = x ** 2.5
    assert p.value == pytest.approx(32.0)
    assert p.partial((1,)) == pytest.approx(2.5 * 4.0 ** 1.5)


def test_ring_distributivity_exact():
    rng = np.random.default_rng(7)
    sp = jet_space(2, 4)
    for _ in range(10):
        a = Jet(sp, rng.standard_normal(sp.size))
        b = Jet(sp, rng.standard_normal(sp.size))
        c = Jet(sp, rng.standard_normal(sp.size))
        lhs = (a + b) * c
        rhs = a * c + b * c
        np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, rtol=0, atol=1e-12)


def test_product_rule_against_fd_oracle():
    # first derivative of sin(x)*exp(x) at 0.7
    x0 = 0.7
    x = jet_var(0, x0, 1, 4)
    prod = jet_apply("sin", x) * jet_apply("exp", x)
    fd = fd_derivative(lambda p: math.sin(p[0]) * math.exp(p[0]), [x0], (1,))
    assert abs(prod.partial((1,)) - fd) <= 1e-8


def test_division_roundtrip():
    rng = np.random.default_rng(3)
    sp = jet_space(3, 4)
    a = Jet(sp, rng.standard_normal(sp.size))
    b = Jet(sp, rng.standard_normal(sp.size))
    b.coeffs[0] = 1.7  # keep the divisor away from zero
    np.testing.assert_allclose(((a * b) / b).coeffs, a.coeffs, atol=1e-12)


def test_truncate_and_mixed_order_arithmetic():
    x = jet_var(0, 2.0, 1, 4)
    y = jet_var(0, 2.0, 1, 2)
    z = (x * x) + y          # coerces to order 2
    assert z.space.order == 2
    assert z.value == pytest.approx(6.0)
    assert z.partial((1,)) == pytest.approx(5.0)


def test_diff_shifts_coefficients():
    x = jet_var(0, 2.0, 1, 4)
    f = x ** 4                       # f' = 4x^3, f'' = 12x^2
    d = f.diff(0)
    assert d.value == pytest.approx(32.0)
    assert d.partial((1,)) == pytest.approx(48.0)


def test_compose_matches_direct_evaluation():
    # F(u) = u^2 + 3u composed with u = sin(x) at x = 0.7
    x0 = 0.7
    u0 = math.sin(x0)
    uvar = jet_var(0, u0, 1, 4)
    F = uvar * uvar + 3.0 * uvar
    x = jet_var(0, x0, 1, 4)
    inner = jet_apply("sin", x)
    composed = jet_compose(F, [inner])
    direct = inner * inner + 3.0 * inner
    np.testing.assert_allclose(composed.coeffs, direct.coeffs, atol=1e-12)


def test_multivariate_partials_against_fd():
    # mixed partials of exp(x*y) at (0.5, 0.25)
    p = np.array([0.5, 0.25])
    xs = seed_point(p, order=4)
    j = jet_apply("exp", xs[0] * xs[1])

    def f(q):
        return math.exp(q[0] * q[1])

    for mu in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (1, 2), (3, 0)]:
        fd = fd_derivative(f, p, mu)
        assert abs(j.partial(mu) - fd) <= 1e-5 * (1.0 + abs(fd))


def test_jet_exponent_power():
    # x^x at x = 2 has derivative x^x (ln x + 1)
    x = jet_var(0, 2.0, 1, 4)
    p = x ** x
    assert p.value == pytest.approx(4.0)
    assert p.partial((1,)) == pytest.approx(4.0 * (math.log(2.0) + 1.0))
