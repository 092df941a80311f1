import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclicsigma.abel import abel, lattice_vector
from cyclicsigma.curve import build_curve, galois_exponents, random_points, young_data
from cyclicsigma.errors import OnThetaDivisor
from cyclicsigma.periods import period_data, riemann_characteristic, with_basis_change
from cyclicsigma.sigma import (build_sigma, loglog_slope, sigma_for, taylor_coefficients,
                               vanishing_order_probe)

from oracles import central_difference, weierstrass_sigma


def rand_u(rng, g, scale=0.4):
    return scale * (rng.normal(size=g) + 1j * rng.normal(size=g))


@pytest.mark.parametrize("name", ["g2", "g3", "c34"])
def test_taylor_expansion_starts_with_schur_term(sigmas, name):
    ev = sigmas[name]
    g = ev.genus
    weights = young_data(ev.curve).hooks
    size = young_data(ev.curve).size
    C = taylor_coefficients(ev, [0.3] * g, points=12)
    checked = 0
    for exps in itertools.product(range(12), repeat=g):
        w = sum(e * h for e, h in zip(exps, weights))
        if w > size:
            continue
        want = float(ev.leading.terms.get(exps, 0))
        assert abs(C[exps] - want) < 1e-6 * max(1.0, abs(want)), exps
        checked += 1
    assert checked > len(ev.leading.terms)


@pytest.mark.parametrize("name", ["g2", "g3", "c34"])
def test_quasi_periodicity_all_generators(sigmas, rng, name):
    ev = sigmas[name]
    g = ev.genus
    for k in range(2 * g):
        l = np.zeros(2 * g, int)
        l[k] = 1
        ell = lattice_vector(ev.periods, l[:g], l[g:])
        for _ in range(3):
            u = rand_u(rng, g, 0.3)
            lhs = ev.value(u + ell)
            rhs = ev.value(u) * ev.quasi_periodicity_factor(u, l[:g], l[g:])
            assert abs(lhs - rhs) < 1e-8 * ev.magnitude(u + ell)[0]


def test_quasi_periodicity_composite_shift(sigmas, rng):
    ev = sigmas["g2"]
    l1, l2 = np.array([1, -2]), np.array([2, 1])
    ell = lattice_vector(ev.periods, l1, l2)
    u = rand_u(rng, 2, 0.2)
    lhs = ev.value(u + ell)
    rhs = ev.value(u) * ev.quasi_periodicity_factor(u, l1, l2)
    assert abs(lhs - rhs) < 1e-7 * ev.magnitude(u + ell)[0]


@pytest.mark.parametrize("name", ["g2", "g3", "c34"])
def test_parity_and_galois(sigmas, rng, name):
    ev = sigmas[name]
    g = ev.genus
    exps, e = galois_exponents(ev.curve)
    z = ev.curve.zeta
    rot = z ** np.array(exps)
    odd = {sum(k) % 2 for k in ev.leading.terms}
    assert len(odd) == 1
    sign = -1 if odd.pop() else 1
    for _ in range(5):
        u = rand_u(rng, g)
        scale = ev.magnitude(u)[0]
        assert abs(ev.value(-u) - sign * ev.value(u)) < 1e-8 * scale
        assert abs(ev.value(rot * u) - z ** e * ev.value(u)) < 1e-8 * scale


def test_34_is_odd_and_rotates_by_zeta(sigmas, rng):
    ev = sigmas["c34"]
    z = ev.curve.zeta
    u = rand_u(rng, 3)
    assert np.isclose(ev.value(-u), -ev.value(u), rtol=1e-10)
    assert np.isclose(ev.value(np.array([z, z, z * z]) * u), z * ev.value(u), rtol=1e-10)


@pytest.mark.parametrize("index", [(1,), (2,), (1, 2), (2, 2), (1, 1, 2), (2, 2, 2)])
def test_partials_against_finite_differences(sigmas, index):
    ev = sigmas["g2"]
    u = np.array([0.2 - 0.1j, 0.3 + 0.2j])

    def nested(idx):
        if not idx:
            return ev.value
        inner = nested(idx[1:])
        return lambda x: central_difference(inner, x, idx[0] - 1, 1e-3)
    ref = nested(index)(u)
    assert abs(ev.partial(index, u) - ref) < 1e-6 * max(1.0, abs(ref))


def test_wp_symmetric_and_periodic(sigmas, rng):
    ev = sigmas["g2"]
    u = rand_u(rng, 2)
    W = ev.wp(u)
    assert np.allclose(W, W.T)
    ell = lattice_vector(ev.periods, [0, 1], [1, 0])
    assert np.allclose(ev.wp(u + ell), W, rtol=1e-7, atol=1e-9)
    with pytest.raises(OnThetaDivisor):
        ev.wp(np.zeros(2))


def test_sigma2_equals_plus_sigma33_on_w1(sigmas, curves, rng):
    """On the Abel image of the (3,4) curve sigma_2 = +sigma_33 with our nu_2."""
    ev = sigmas["c34"]
    for p in random_points(curves["c34"], 10, rng, radius=1.2):
        u = abel(curves["c34"], p).abel
        assert np.isclose(ev.partial((2,), u), ev.partial((3, 3), u), rtol=1e-8)


def test_modular_invariance(curves, sigmas, rng):
    """sigma does not depend on the symplectic basis."""
    c = curves["g2"]
    data = period_data(c)
    S = np.array([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    S = S @ np.array([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]])
    other = riemann_characteristic(c, with_basis_change(data, S))
    ev2 = build_sigma(c, other)
    ev = sigmas["g2"]
    for _ in range(20):
        u = rand_u(rng, 2)
        assert abs(ev2.value(u) - ev.value(u)) < 1e-7 * ev.magnitude(u)[0]


# -- genus one -----------------------------------------------------------------------


@pytest.mark.parametrize("lam, g2, g3", [
    ((0, -1, 0), 4.0, 0.0),
    ((0, 0.3 - 0.2j, 0.5 + 0.1j), -4 * (0.3 - 0.2j), -4 * (0.5 + 0.1j)),
])
def test_elliptic_matches_weierstrass_series(lam, g2, g3):
    """y^2 = x^3 + a x + b has wp = x, wp' = 2y, so g2 = -4a and g3 = -4b."""
    ev = sigma_for(build_curve(2, 3, lam))
    scale = min(abs(ev.periods.omega1[0, 0]), abs(ev.periods.omega2[0, 0]))
    for u in 0.5 * scale * np.exp(2j * np.pi * np.arange(8) / 8) * np.linspace(0.3, 1, 8):
        ref = weierstrass_sigma(u, g2, g3)
        assert abs(ev.value(np.array([u])) - ref) < 1e-8 * abs(ref)


def test_elliptic_wp_equation(curves, rng):
    ev = sigma_for(curves["ell"])
    for p in random_points(curves["ell"], 5, rng):
        u = abel(curves["ell"], p).abel
        wp = ev.wp(u)[0, 0]
        assert abs(wp - p.x) < 1e-9 * (1 + abs(p.x))
        dwp = central_difference(lambda v: ev.wp(v)[0, 0], u, 0, 1e-3)
        assert abs(dwp ** 2 - (4 * wp ** 3 - 4 * wp)) < 1e-6 * (1 + abs(wp) ** 3)
        assert abs(dwp - 2 * p.y) < 1e-6 * (1 + abs(p.y))


def test_elliptic_leading_behaviour(curves):
    ev = sigma_for(curves["ell"])
    assert abs(ev.value(np.array([1e-4])) / 1e-4 - 1) < 1e-8


# -- vanishing orders ---------------------------------------------------------------


@pytest.mark.parametrize("name, expected", [("c34", 2), ("g4", 6), ("g2", 1), ("g3", 3)])
def test_vanishing_order_on_w1(sigmas, curves, rng, name, expected):
    ev = sigmas[name]
    assert young_data(ev.curve).n_k(1) == expected
    for p in random_points(curves[name], 2, rng, radius=1.0):
        order, _ = vanishing_order_probe(ev, abel(curves[name], p).abel)
        assert order == expected


def test_vanishing_order_top_stratum(sigmas, curves, rng):
    """On W^(g-1) sigma vanishes to first order."""
    c = curves["g3"]
    u = sum(abel(c, p).abel for p in random_points(c, 2, rng))
    assert vanishing_order_probe(sigmas["g3"], u)[0] == 1


def test_loglog_slope_agrees_for_small_orders(sigmas, curves, rng):
    p = random_points(curves["c34"], 1, rng)[0]
    slope, resid = loglog_slope(sigmas["c34"], abel(curves["c34"], p).abel)
    assert abs(slope - 2) < 0.05


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_sigma_entire_and_finite(seed):
    ev = sigma_for(build_curve(2, 3, (0, -1, 0)))
    rng = np.random.default_rng(seed)
    u = 2.0 * (rng.normal(size=1) + 1j * rng.normal(size=1))
    assert np.isfinite(ev.value(u))
