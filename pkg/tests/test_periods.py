import numpy as np
import pytest
import sympy as sp

from cyclicsigma.curve import CurveSpec, monomial_basis
from cyclicsigma.periods import (compute_periods, homology_basis, legendre_residual,
                                 period_data, second_kind_polynomials, with_basis_change)
from cyclicsigma.quadrature import QuadConfig, integrate
from cyclicsigma.theta import LatticeSum, ThetaCharacteristic


@pytest.mark.parametrize("name", ["g2", "g3", "c34", "ell"])
def test_legendre_and_tau(curves, name):
    data = period_data(curves[name])
    assert data.legendre_residual < 1e-8
    tau = data.tau
    assert np.allclose(tau, tau.T, atol=1e-10)
    assert np.min(np.linalg.eigvalsh(tau.imag)) > 0
    # gamma = eta' omega'^-1 is symmetric when the Legendre relation holds
    assert data.gamma_asymmetry < 1e-8


@pytest.mark.parametrize("name", ["g2", "c34"])
def test_refinement_reduces_residual(curves, name):
    c = curves[name]
    basis = homology_basis(c)
    coarse, fine = (compute_periods(c, QuadConfig(nodes=4, fixed_panels=k), 1e9, basis)
                    for k in (2, 4))
    assert fine.legendre_residual < 0.5 * coarse.legendre_residual


def test_homology_intersections(curves):
    basis = homology_basis(curves["c34"])
    J = basis.symplectic_form
    g = basis.genus
    assert np.array_equal(J, np.block([[np.zeros((g, g)), np.eye(g)],
                                       [-np.eye(g), np.zeros((g, g))]]).astype(int)) or \
        np.array_equal(J, -np.block([[np.zeros((g, g)), np.eye(g)],
                                     [-np.eye(g), np.zeros((g, g))]]).astype(int))


def test_riemann_characteristic_vanishes_at_zero(curves):
    # 0 = w(g-1 copies of infinity) lies on W^(g-1)
    for name in ("g2", "g3", "c34"):
        data = period_data(curves[name])
        ls = LatticeSum(data.tau, ThetaCharacteristic(*data.char))
        z = np.zeros((1, data.genus))
        assert abs(ls.evaluate(z)[0]) < 1e-10 * ls.magnitude(z)[0]


def test_elliptic_periods_closed_form(curves):
    """y^2 = x^3 - x has a square period lattice, so j(tau) = 1728 in any basis."""
    tau = period_data(curves["ell"]).tau[0, 0]
    q = np.exp(2j * np.pi * tau)
    # Eisenstein series give j(tau) independently of the basis
    n = np.arange(1, 60)
    E4 = 1 + 240 * np.sum(n ** 3 * q ** n / (1 - q ** n))
    E6 = 1 - 504 * np.sum(n ** 5 * q ** n / (1 - q ** n))
    assert abs(1728 * E4 ** 3 / (E4 ** 3 - E6 ** 2) - 1728) < 1e-6


def test_symplectic_change_keeps_legendre(curves):
    data = period_data(curves["g2"])
    S = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 1]])
    g = 2
    J = np.block([[np.zeros((g, g)), -np.eye(g)], [np.eye(g), np.zeros((g, g))]])
    assert np.allclose(S @ J @ S.T, J)
    other = with_basis_change(data, S)
    assert legendre_residual(other.omega1, other.omega2, other.eta1, other.eta2) < 1e-8


def test_quadrature_polynomial_exact():
    val = integrate(lambda s: np.atleast_2d(s ** 7 + 1j * s ** 3))
    assert abs(val[0] - (1 / 8 + 0.25j)) < 1e-15


# -- residue oracle for the second-kind basis --------------------------------------


def _series_at_infinity(r, s, lam, order):
    t = sp.Symbol("t")
    inner = 1 + sum(sp.nsimplify(l) * t ** (r * (j + 1)) for j, l in enumerate(lam))
    factor = sp.series(inner ** sp.Rational(1, r), t, 0, order).removeO()
    return t, t ** -r, t ** -s * factor


def _laurent(expr, t, order):
    return sp.expand(sp.series(expr, t, 0, order).removeO())


@pytest.mark.parametrize("rs, lam", [((2, 5), (1, -2, 3, 1, 2)), ((3, 4), (2, -1, 1, 3))])
def test_second_kind_residue_pairing(rs, lam):
    """Res(int nu_i * eta_j) is a common multiple of delta_ij and Res(int eta_i * eta_j) = 0."""
    r, s = rs
    curve = CurveSpec(r, s, tuple(complex(v) for v in lam))
    g = curve.genus
    order = 4 * s + 6
    t, x, y = _series_at_infinity(r, s, lam, order + 2 * s * r)
    dx = sp.diff(x, t)
    base = dx / (r * y ** (r - 1))
    basis = monomial_basis(curve, g)
    nus = [_laurent(basis[i].__call__(x, y) * base, t, order) for i in range(g)]
    etas = []
    for terms in second_kind_polynomials(curve):
        num = sum(sum(sp.nsimplify(complex(cf).real) * x ** k for k, cf in enumerate(poly)) * y ** b
                  for poly, b in terms)
        etas.append(_laurent(num * base, t, order))
    U = [sp.integrate(n, t) for n in nus]
    H = [sp.integrate(e, t) for e in etas]
    res = [[sp.expand(U[i] * etas[j]).coeff(t, -1) for j in range(g)] for i in range(g)]
    kappa = res[0][0]
    assert kappa in (1, -1)
    for i in range(g):
        for j in range(g):
            assert res[i][j] == (kappa if i == j else 0)
    for i in range(g):
        for j in range(i + 1, g):
            assert sp.expand(H[i] * etas[j]).coeff(t, -1) == 0
