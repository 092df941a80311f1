import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclicsigma.errors import NonPositiveTau
from cyclicsigma.theta import (LatticeSum, ThetaCharacteristic, all_characteristics,
                               theta_deriv, theta_eval, theta_gradient)


def random_tau(rng, g):
    A = rng.normal(size=(g, g))
    Y = A @ A.T + 0.6 * np.eye(g)
    X = rng.normal(size=(g, g))
    return 0.5 * (X + X.T) + 1j * Y


def brute_theta(char, z, tau, N=12):
    """Plain box sum over |n_i| <= N."""
    g = len(z)
    total = 0j
    for n in itertools.product(range(-N, N + 1), repeat=g):
        p = np.array(n) + char.delta1
        total += np.exp(1j * np.pi * p @ tau @ p + 2j * np.pi * p @ (z + char.delta2))
    return total


chars2 = list(all_characteristics(2))


@given(st.integers(0, 10 ** 6), st.sampled_from(chars2))
@settings(max_examples=25, deadline=None)
def test_matches_box_sum(seed, char):
    rng = np.random.default_rng(seed)
    tau = random_tau(rng, 2)
    z = 0.4 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    ref = brute_theta(char, z, tau)
    assert abs(theta_eval(char, z, tau) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_box_sum_genus3():
    rng = np.random.default_rng(3)
    tau = random_tau(rng, 3)
    char = ThetaCharacteristic((1, 0, 1), (0, 1, 1))
    z = np.array([0.1 + 0.2j, -0.3, 0.05j])
    ref = brute_theta(char, z, tau, N=8)
    assert abs(theta_eval(char, z, tau) - ref) < 1e-12 * abs(ref)


@given(st.integers(0, 10 ** 6), st.sampled_from(chars2))
@settings(max_examples=20, deadline=None)
def test_parity(seed, char):
    rng = np.random.default_rng(seed)
    tau = random_tau(rng, 2)
    z = 0.5 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    sign = -1 if char.is_odd else 1
    a, b = theta_eval(char, -z, tau), theta_eval(char, z, tau)
    assert abs(a - sign * b) < 1e-12 * LatticeSum(tau, char).magnitude(z)[0]


@given(st.integers(0, 10 ** 6), st.sampled_from(chars2),
       st.lists(st.integers(-2, 2), min_size=4, max_size=4))
@settings(max_examples=25, deadline=None)
def test_quasi_periodicity(seed, char, shift):
    rng = np.random.default_rng(seed)
    tau = random_tau(rng, 2)
    z = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    n, m = np.array(shift[:2]), np.array(shift[2:])
    lhs = theta_eval(char, z + n + tau @ m, tau)
    factor = np.exp(-1j * np.pi * m @ tau @ m - 2j * np.pi * m @ z
                    + 2j * np.pi * (n @ char.delta1 - m @ char.delta2))
    rhs = factor * theta_eval(char, z, tau)
    assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), abs(rhs), 1e-300) + 1e-13 * abs(factor) * \
        LatticeSum(tau, char).magnitude(z)[0]


@pytest.mark.parametrize("order", [(0,), (1,), (0, 1), (1, 1), (0, 0, 1), (1, 1, 1)])
def test_derivatives_against_finite_differences(order):
    rng = np.random.default_rng(11)
    tau = random_tau(rng, 2)
    char = ThetaCharacteristic((1, 0), (1, 1))
    z = np.array([0.2 - 0.1j, 0.1 + 0.3j])
    h = 1e-3

    def fd(idx, point):
        if not idx:
            return theta_eval(char, point, tau)
        e = np.zeros(2)
        e[idx[0]] = h
        rest = idx[1:]
        # fourth-order central stencil
        return (-fd(rest, point + 2 * e) + 8 * fd(rest, point + e)
                - 8 * fd(rest, point - e) + fd(rest, point - 2 * e)) / (12 * h)
    ref = fd(order, z)
    assert abs(theta_deriv(char, z, tau, order) - ref) < 1e-6 * max(1.0, abs(ref))


def test_gradient_of_odd_theta_at_zero_nonzero():
    rng = np.random.default_rng(5)
    tau = random_tau(rng, 2)
    odd = [c for c in chars2 if c.is_odd]
    assert len(odd) == 6
    for c in odd:
        assert abs(theta_eval(c, np.zeros(2), tau)) < 1e-14
        assert np.linalg.norm(theta_gradient(c, np.zeros(2), tau)) > 1e-6


def test_characteristic_counts():
    for g in (1, 2, 3):
        chars = list(all_characteristics(g))
        assert len(chars) == 4 ** g
        assert sum(c.is_odd for c in chars) == 2 ** (g - 1) * (2 ** g - 1)


def test_rejects_bad_tau():
    with pytest.raises(NonPositiveTau):
        LatticeSum(np.array([[1j, 0], [0, -1j]]), ThetaCharacteristic((0, 0), (0, 0)))
