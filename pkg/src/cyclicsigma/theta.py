"""Riemann theta functions with half-integer characteristics.

Convention: for a characteristic (a, b) with a, b in {0, 1/2}^g,

    theta[a; b](z) = sum_{p in Z^g + a} exp(pi i p.tau.p + 2 pi i p.(z + b)),

which gives theta(z + m) = exp(2 pi i a.m) theta(z) and
theta(z + tau n) = exp(-2 pi i b.n - pi i n.tau.n - 2 pi i n.z) theta(z).

Evaluation first moves z by a lattice vector so that Im z is reduced, then
sums over a fixed ellipsoid of lattice points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import log, pi, sqrt

import numpy as np

from .errors import NonPositiveTau


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Characteristic stored as 0/1 vectors: delta' = a/2, delta'' = b/2."""

    a: tuple
    b: tuple

    @property
    def delta1(self):
        return 0.5 * np.array(self.a, dtype=float)

    @property
    def delta2(self):
        return 0.5 * np.array(self.b, dtype=float)

    @property
    def parity(self) -> int:
        """0 for even, 1 for odd."""
        return int(np.dot(self.a, self.b)) % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1

    @property
    def genus(self) -> int:
        return len(self.a)

    def __str__(self):
        return "[" + " ".join(str(v) for v in self.a) + " | " + " ".join(str(v) for v in self.b) + "]/2"


def all_characteristics(g: int):
    """All 4^g characteristics in lexicographic order of (a, b)."""
    for bits in itertools.product((0, 1), repeat=2 * g):
        yield ThetaCharacteristic(tuple(bits[:g]), tuple(bits[g:]))


def tail_radius(tol: float, g: int) -> float:
    """Radius R (in the Im tau norm) beyond which the Gaussian tail is below tol.

    Uses the bound sum_{|p| > R} exp(-pi |p|^2) <= C R^g exp(-pi R^2) with a
    generous constant, plus room for polynomial derivative weights.
    """
    target = -log(tol) + 4.0 * g + 12.0
    R = sqrt(target / pi)
    for _ in range(20):
        R = sqrt((target + g * log(max(R, 1.0)) + 3.0 * log(1 + R)) / pi)
    return R


def ellipsoid_points(Y: np.ndarray, shift: np.ndarray, radius: float) -> np.ndarray:
    """Integer n with (n + shift - c)^T Y (n + shift - c) <= radius^2 for some
    c in the cube [-1/2, 1/2]^g; returned as the points p = n + shift."""
    g = Y.shape[0]
    Yi = np.linalg.inv(Y)
    half = 0.5 * sqrt(float(np.sum(np.abs(Y))))
    R = radius + half
    bounds = [int(np.ceil(R * sqrt(Yi[i, i]))) + 1 for i in range(g)]
    grids = np.meshgrid(*[np.arange(-b, b + 1) for b in bounds], indexing="ij")
    pts = np.stack([gr.ravel() for gr in grids], axis=1).astype(float) + shift
    norm = np.einsum("ni,ij,nj->n", pts, Y, pts)
    return pts[np.sqrt(np.maximum(norm, 0.0)) <= R]


class LatticeSum:
    """Precomputed summation data for one tau and one characteristic."""

    def __init__(self, tau, char: ThetaCharacteristic, tol: float = 1e-15, radius_scale: float = 1.0):
        tau = np.asarray(tau, dtype=complex)
        Y = 0.5 * (tau.imag + tau.imag.T)
        try:
            np.linalg.cholesky(Y)
        except np.linalg.LinAlgError as exc:
            raise NonPositiveTau("Im tau is not positive definite") from exc
        self.tau = tau
        self.Y = Y
        self.Yinv = np.linalg.inv(Y)
        self.char = char
        self.g = tau.shape[0]
        self.radius = radius_scale * tail_radius(tol, self.g)
        self.points = ellipsoid_points(Y, char.delta1, self.radius)
        self.quad = np.einsum("ni,ij,nj->n", self.points, tau, self.points)

    def terms(self, z):
        """Reduction data for a batch z of shape (N, g).

        Returns (log_prefactor, weights, shift) with
        theta(z) = exp(log_prefactor) * sum_p weights[:, p] and derivative
        factors 2 pi i (p - shift) for d/dz.
        """
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        m = np.rint(z.imag @ self.Yinv.T)
        z0 = z - m @ self.tau.T
        b = self.char.delta2
        zb = z0 + b
        expo = 1j * pi * self.quad[None, :] + 2j * pi * (zb @ self.points.T)
        weights = np.exp(expo)
        logpre = -1j * pi * np.einsum("ni,ij,nj->n", m, self.tau, m) - 2j * pi * np.sum(m * zb, axis=1)
        return logpre, weights, m

    def evaluate(self, z, deriv=()):
        """theta or a partial derivative; ``deriv`` lists coordinate indices."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        logpre, weights, m = self.terms(z)
        acc = weights
        for i in deriv:
            acc = acc * (2j * pi * (self.points[None, :, i] - m[:, None, i]))
        return np.exp(logpre) * acc.sum(axis=1)

    def magnitude(self, z):
        """Sum of absolute values of the terms: a scale for relative residuals."""
        logpre, weights, _ = self.terms(z)
        return np.exp(logpre.real) * np.abs(weights).sum(axis=1)


_CACHE = {}


def _lattice(tau, char, tol):
    key = (np.asarray(tau).tobytes(), char, tol)
    obj = _CACHE.get(key)
    if obj is None:
        if len(_CACHE) > 256:
            _CACHE.clear()
        obj = _CACHE[key] = LatticeSum(tau, char, tol)
    return obj


def theta_eval(char: ThetaCharacteristic, z, tau, tol: float = 1e-15):
    """theta[char](z; tau); z is a g-vector or a batch of shape (N, g)."""
    z = np.asarray(z, dtype=complex)
    out = _lattice(tau, char, tol).evaluate(z)
    return out[0] if z.ndim == 1 else out


def theta_deriv(char: ThetaCharacteristic, z, tau, order, tol: float = 1e-15):
    """Partial derivative; ``order`` is a sequence of coordinate indices."""
    z = np.asarray(z, dtype=complex)
    out = _lattice(tau, char, tol).evaluate(z, tuple(order))
    return out[0] if z.ndim == 1 else out


def theta_gradient(char, z, tau, tol=1e-15):
    g = np.asarray(tau).shape[0]
    return np.array([theta_deriv(char, z, tau, (i,), tol) for i in range(g)])
