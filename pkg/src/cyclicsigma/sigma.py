"""The sigma function: c exp(-u.gamma.u/2) theta[delta_R]((2 omega')^-1 u).

Derivatives are analytic: each lattice term is exp(q(u)) with q quadratic, so
a mixed partial of order k is a sum over matchings of the index list in which
matched pairs contribute -gamma_ij and unmatched indices the first derivative
of q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .abel import abel_near_infinity, chi, lattice_vector, quasi_L
from .curve import CurveSpec, young_data
from .errors import InconclusiveSlope, NormalizationUnstable, OnThetaDivisor
from .periods import PeriodData, period_data
from .schur import WeightedPolynomial, sigma_leading_term
from .theta import LatticeSum, ThetaCharacteristic


def _matchings(indices):
    """Yield (pairs, singles) over all partial matchings of a list."""
    if not indices:
        yield (), ()
        return
    first, rest = indices[0], indices[1:]
    for pairs, singles in _matchings(rest):
        yield pairs, (first,) + singles
    for k in range(len(rest)):
        others = rest[:k] + rest[k + 1:]
        for pairs, singles in _matchings(others):
            yield ((first, rest[k]),) + pairs, singles


@lru_cache(maxsize=None)
def _matching_table(indices):
    """Map sorted singles -> list of pair tuples, for a sorted index tuple."""
    table = {}
    for pairs, singles in _matchings(list(indices)):
        table.setdefault(tuple(sorted(singles)), []).append(pairs)
    return table


def _normalize_index(I):
    """Accept 1-based indices (as in sigma_{2} = d sigma / d u_2)."""
    return tuple(sorted(int(i) - 1 for i in I))


@dataclass(frozen=True, eq=False)
class SigmaEvaluator:
    curve: CurveSpec
    periods: PeriodData
    c: complex
    leading: WeightedPolynomial
    lattice: LatticeSum
    chunk: int = 256

    @property
    def genus(self):
        return self.curve.genus

    @property
    def gamma(self):
        return self.periods.gamma

    def _raw(self, U, index):
        """Un-normalized derivative for 0-based sorted ``index`` at rows of U."""
        U = np.atleast_2d(np.asarray(U, dtype=complex))
        A = self.periods.normalizer
        gam = self.gamma
        out = np.empty(U.shape[0], dtype=complex)
        table = _matching_table(index)
        for start in range(0, U.shape[0], self.chunk):
            u = U[start:start + self.chunk]
            z = u @ A.T
            logpre, W, m = self.lattice.terms(z)
            gu = u @ gam.T
            gauss = -0.5 * np.sum(u * gu, axis=1)
            if index:
                K = 2j * np.pi * (self.lattice.points[None, :, :] - m[:, None, :])
                q = K @ A - gu[:, None, :]
                acc = np.zeros(W.shape, dtype=complex)
                for singles, pair_lists in table.items():
                    coef = sum(np.prod([-gam[i, j] for i, j in pairs]) if pairs else 1.0
                               for pairs in pair_lists)
                    if coef == 0:
                        continue
                    term = np.full(W.shape, coef, dtype=complex)
                    for i in singles:
                        term = term * q[:, :, i]
                    acc += term
                S = np.sum(W * acc, axis=1)
            else:
                S = W.sum(axis=1)
            out[start:start + self.chunk] = np.exp(gauss + logpre) * S
        return out

    def __call__(self, u):
        return self.value(u)

    def value(self, u):
        u = np.asarray(u, dtype=complex)
        out = self.c * self._raw(u, ())
        return out[0] if u.ndim == 1 else out

    def partial(self, I, u):
        """sigma_I(u) for a 1-based multi-index I, e.g. (1, 3)."""
        u = np.asarray(u, dtype=complex)
        out = self.c * self._raw(u, _normalize_index(I))
        return out[0] if u.ndim == 1 else out

    def natural(self, k, u):
        """sigma with the derivative multi-index natural_k."""
        return self.partial(young_data(self.curve).natural_k(k), u)

    def natural_i(self, k, i, u):
        return self.partial(young_data(self.curve).natural_ki(k, i), u)

    def gradient(self, u):
        return np.array([self.partial((i + 1,), u) for i in range(self.genus)])

    def wp(self, u, tol=1e-12):
        """Matrix wp_ij = -d_i d_j log sigma."""
        u = np.asarray(u, dtype=complex)
        s = self.value(u)
        scale = np.max(np.abs(self.gradient(u))) + abs(s)
        if abs(s) < tol * scale:
            raise OnThetaDivisor("sigma vanishes at u")
        g = self.genus
        grad = self.gradient(u)
        out = np.empty((g, g), dtype=complex)
        for i in range(g):
            for j in range(i, g):
                sij = self.partial((i + 1, j + 1), u)
                out[i, j] = out[j, i] = -(s * sij - grad[i] * grad[j]) / s ** 2
        return out

    def quasi_periodicity_factor(self, u, l1, l2):
        """exp(L(u + l/2, l)) chi(l) for the lattice vector with integer parts l1, l2."""
        ell = lattice_vector(self.periods, l1, l2)
        return np.exp(quasi_L(self.periods, np.asarray(u) + 0.5 * ell, ell)) * chi(self.periods, l1, l2)

    def magnitude(self, u):
        """Scale for relative residuals: |c| times the summed term magnitudes."""
        u = np.atleast_2d(np.asarray(u, dtype=complex))
        z = u @ self.periods.normalizer.T
        gauss = -0.5 * np.sum(u * (u @ self.gamma.T), axis=1)
        return abs(self.c) * np.exp(gauss.real) * self.lattice.magnitude(z)


def raw_taylor_coefficient(ev: SigmaEvaluator, exps) -> complex:
    """Coefficient of u^exps in the un-normalized expansion at 0."""
    index = tuple(i for i, e in enumerate(exps) for _ in range(e))
    denom = np.prod([factorial(e) for e in exps])
    return complex(ev._raw(np.zeros((1, ev.genus)), index)[0] / denom)


def build_sigma(curve: CurveSpec, periods: PeriodData = None, tol: float = 1e-15,
                sign: int = 1) -> SigmaEvaluator:
    """Sigma normalized so its lowest Taylor term is the Schur leading term.

    ``sign`` = -1 selects the opposite overall sign.
    """
    periods = period_data(curve) if periods is None else periods
    if periods.char is None:
        raise ValueError("period data lacks the Riemann characteristic")
    ch = ThetaCharacteristic(*periods.char)
    lattice = LatticeSum(periods.tau, ch, tol)
    leading = sigma_leading_term(curve)
    probe = SigmaEvaluator(curve, periods, 1.0, leading, lattice)
    exps, coeff = leading.lowest_degree_term()
    raw = raw_taylor_coefficient(probe, exps)
    # Taylor coefficients of the raw function are bounded by its size on the
    # unit polydisc; a leading coefficient this far below it is rounding noise
    scale = float(np.max(probe.magnitude(np.eye(curve.genus))))
    if abs(raw) < 1e-12 * scale:
        raise NormalizationUnstable("measured leading coefficient below the noise floor")
    c = sign * float(coeff) / raw
    return SigmaEvaluator(curve, periods, c, leading, lattice)


@lru_cache(maxsize=16)
def sigma_for(curve: CurveSpec, sign: int = 1) -> SigmaEvaluator:
    return build_sigma(curve, sign=sign)


def taylor_coefficients(ev: SigmaEvaluator, radii, points: int = 16):
    """Multivariate Taylor coefficients by the discrete Cauchy integral on a torus.

    Returns an array C with C[a1, ..., ag] the coefficient of prod u_i^a_i
    (for a_i < points), aliasing errors decaying like radius^points.
    """
    g = ev.genus
    radii = np.asarray(radii, dtype=float)
    grid = np.exp(2j * np.pi * np.arange(points) / points)
    mesh = np.meshgrid(*[radii[i] * grid for i in range(g)], indexing="ij")
    U = np.stack([m.ravel() for m in mesh], axis=1)
    vals = ev.value(U).reshape((points,) * g)
    coeffs = np.fft.fftn(vals) / points ** g
    for i in range(g):
        shape = [1] * g
        shape[i] = points
        coeffs = coeffs / (radii[i] ** np.arange(points)).reshape(shape)
    return coeffs


def vanishing_order_probe(ev: SigmaEvaluator, base, direction: str = "axis",
                          radius: float = 0.05, points: int = 32, gap: float = 1e-6):
    """Order of vanishing at s=0 of s -> sigma(base + s e_g) (``axis``) or of
    t -> sigma(base - w(P(t))) with P(t) the point of parameter t near
    infinity (``curve``).

    Computes Taylor coefficients on a circle; the order is the first index
    whose scaled coefficient exceeds ``gap`` times the largest one.  Returns
    (order, scaled coefficients).
    """
    base = np.asarray(base, dtype=complex)
    g = ev.genus
    ts = radius * np.exp(2j * np.pi * np.arange(points) / points)
    if direction == "axis":
        U = base[None, :] + ts[:, None] * np.eye(g)[g - 1][None, :]
    elif direction == "curve":
        U = np.array([base - abel_near_infinity(ev.curve, t) for t in ts])
    else:
        raise ValueError(direction)
    vals = ev.value(U)
    scaled = np.abs(np.fft.fft(vals) / points)
    top = scaled.max()
    if top == 0:
        raise InconclusiveSlope("function vanishes identically on the probe circle")
    order = int(np.argmax(scaled > gap * top))
    below = scaled[:order]
    if order and below.max() > 1e-3 * scaled[order]:
        raise InconclusiveSlope("no clear separation between zero and nonzero coefficients")
    return order, scaled


def loglog_slope(ev: SigmaEvaluator, base, t_range=(1e-4, 1e-2), samples: int = 9,
                 direction: str = "axis"):
    """Least-squares slope of log|f(t)| against log t on a log-spaced grid."""
    base = np.asarray(base, dtype=complex)
    g = ev.genus
    ts = np.logspace(np.log10(t_range[0]), np.log10(t_range[1]), samples)
    if direction == "axis":
        U = base[None, :] + ts[:, None] * np.eye(g)[g - 1][None, :]
    else:
        U = np.array([base - abel_near_infinity(ev.curve, t) for t in ts])
    vals = np.abs(ev.value(U))
    X = np.vstack([np.log(ts), np.ones_like(ts)]).T
    coef, res, *_ = np.linalg.lstsq(X, np.log(vals), rcond=None)
    return float(coef[0]), float(np.sqrt(res[0] / samples)) if len(res) else 0.0
