"""Finite-difference oracle sanity checks against hand derivatives."""

import math

import numpy as np
import pytest

from liftgeom.findiff import fd_derivative


def test_first_derivative_of_square():
    assert fd_derivative(lambda p: p[0] ** 2, [3.0], (1,)) == pytest.approx(6.0, abs=1e-8)


def test_second_derivative_of_log_fourth_power():
    # (ln t^4)'' = -4/t^2 = -1 at t = 2
    d = fd_derivative(lambda p: math.log(p[0] ** 4), [2.0], (2,))
    assert d == pytest.approx(-1.0, abs=1e-5)


def test_third_derivative_of_exp():
    d = fd_derivative(lambda p: math.exp(p[0]), [0.0], (3,))
    assert d == pytest.approx(1.0, abs=1e-3)


def test_mixed_partial():
    # d^2/(dx dy) x^2 y^3 = 6 x y^2
    d = fd_derivative(lambda p: p[0] ** 2 * p[1] ** 3, [1.5, 0.5], (1, 1))
    assert d == pytest.approx(6 * 1.5 * 0.25, abs=1e-6)


def test_order_zero_returns_value():
    assert fd_derivative(lambda p: p[0] + 1.0, np.array([2.0]), (0,)) == 3.0


def test_order_limit():
    with pytest.raises(ValueError):
        fd_derivative(lambda p: p[0], [0.0], (4,))
