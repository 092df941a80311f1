"""Frobenius-Stickelberger determinants, the functions mu_n and the residual map alpha_n."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .curve import AffinePoint, CurveSpec, lift_points, monomial_basis
from .errors import DegenerateConfiguration, RootMultiplicityUnresolved


def fs_matrix(curve: CurveSpec, pts, ell: int | None = None) -> np.ndarray:
    """Rows phi_0(P_i) ... phi_n(P_i) with column ell removed (default ell = n)."""
    n = len(pts)
    ell = n if ell is None else ell
    if not 0 <= ell <= n:
        raise ValueError(f"deleted column {ell} outside 0..{n}")
    basis = monomial_basis(curve, n)
    cols = [k for k in range(n + 1) if k != ell]
    return np.array([[basis[k](p.x, p.y) for k in cols] for p in pts], dtype=complex)


def fs_det(curve: CurveSpec, pts, ell: int | None = None) -> complex:
    return complex(np.linalg.det(fs_matrix(curve, pts, ell))) if pts else 1.0 + 0j


def vandermonde_matrix(pts) -> np.ndarray:
    n = len(pts)
    return np.array([[p.x ** k for k in range(n)] for p in pts], dtype=complex)


def varphi_det(pts) -> complex:
    return complex(np.linalg.det(vandermonde_matrix(pts))) if pts else 1.0 + 0j


# -- confluent rows --------------------------------------------------------


def _y_series(curve: CurveSpec, p: AffinePoint, order: int) -> np.ndarray:
    """Taylor coefficients in h of y(x_p + h) on the branch through p."""
    shifted = np.array([npoly.polyval(p.x, npoly.polyder(curve.coeffs[::-1], m)) / _fact(m)
                        for m in range(curve.s + 1)])
    q = shifted / shifted[0]
    q[0] = 0.0
    # (1 + q)^(1/r) by the binomial series, truncated at h^order
    out = np.zeros(order + 1, dtype=complex)
    out[0] = 1.0
    term = np.zeros(order + 1, dtype=complex)
    term[0] = 1.0
    binom = 1.0
    for j in range(1, order + 1):
        binom *= (1.0 / curve.r - (j - 1)) / j
        term = npoly.polymul(term, q)[: order + 1]
        out[: len(term)] += binom * term
    return p.y * out


def _fact(m: int) -> float:
    return float(np.prod(np.arange(1, m + 1))) if m > 0 else 1.0


def _monomial_series(basis, count: int, p: AffinePoint, yser: np.ndarray, order: int):
    """Taylor coefficients (in h = x - x_p) of phi_0 ... phi_{count-1} up to h^order."""
    xser = np.array([p.x, 1.0] + [0.0] * max(order - 1, 0), dtype=complex)[: order + 1]
    rows = []
    for k in range(count):
        m = basis[k]
        acc = np.zeros(order + 1, dtype=complex)
        acc[0] = 1.0
        for _ in range(m.sx):
            acc = npoly.polymul(acc, xser)[: order + 1]
        for _ in range(m.ry):
            acc = npoly.polymul(acc, yser)[: order + 1]
        rows.append(np.pad(acc, (0, order + 1 - len(acc))))
    return np.array(rows).T


def _group(pts, tol: float):
    groups = []
    for p in pts:
        for grp in groups:
            q = grp[0]
            if abs(p.x - q.x) <= tol * (1 + abs(q.x)) and abs(p.y - q.y) <= tol * (1 + abs(q.y)):
                grp.append(p)
                break
        else:
            groups.append([p])
    return groups


def confluent_matrix(curve: CurveSpec, pts, count: int, tol: float = 1e-12) -> np.ndarray:
    """Rows phi_k(P_i), a repeated point contributing its successive Taylor rows in x."""
    basis = monomial_basis(curve, count)
    rows = []
    for grp in _group(pts, tol):
        m = len(grp)
        p = grp[0]
        if m == 1:
            rows.append([basis[k](p.x, p.y) for k in range(count)])
            continue
        if abs(curve.f(p.x)) < 1e-10:
            raise DegenerateConfiguration("repeated branch point needs a different local parameter")
        ser = _monomial_series(basis, count, p, _y_series(curve, p, m - 1), m - 1)
        rows.extend(ser[:m])
    return np.array(rows, dtype=complex)


# -- mu_n -----------------------------------------------------------------


@dataclass(frozen=True)
class MuFunction:
    """mu_n = sum_k a_k phi_k with a_n = 1, vanishing at the source points."""

    curve: CurveSpec
    coefficients: tuple
    points: tuple

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x, y):
        basis = monomial_basis(self.curve, self.n)
        return sum(a * basis[k](x, y) for k, a in enumerate(self.coefficients))

    def mu_nk(self, k: int) -> complex:
        """Coefficient in mu_n = phi_n + sum_k (-1)^(n-k) mu_{n,k} phi_k."""
        return (-1) ** (self.n - k) * self.coefficients[k]

    def components(self) -> list:
        """Polynomials P_b(x) (ascending coefficients) with mu = sum_b P_b(x) y^b."""
        basis = monomial_basis(self.curve, self.n)
        comps = [np.zeros(1, dtype=complex) for _ in range(self.curve.r)]
        for k, a in enumerate(self.coefficients):
            m = basis[k]
            c = comps[m.ry]
            if len(c) <= m.sx:
                c = np.pad(c, (0, m.sx + 1 - len(c)))
            c[m.sx] += a
            comps[m.ry] = c
        return comps


def mu(curve: CurveSpec, pts, tol: float = 1e-12, cond_limit: float = 1e12) -> MuFunction:
    n = len(pts)
    if n == 0:
        return MuFunction(curve, (1.0 + 0j,), ())
    basis = monomial_basis(curve, n)
    full = confluent_matrix(curve, pts, n + 1, tol)
    A, b = full[:, :n], -full[:, n]
    if np.linalg.cond(A) > cond_limit:
        raise DegenerateConfiguration("points impose dependent conditions on phi_0..phi_{n-1}")
    a = np.linalg.solve(A, b)
    del basis
    return MuFunction(curve, tuple(complex(v) for v in a) + (1.0 + 0j,), tuple(pts))


# -- alpha_n --------------------------------------------------------------


def _ring_mul(a, b, fpoly, r):
    """Product in C[x][y]/(y^r - f), elements as lists of r ascending x-polynomials."""
    out = [np.zeros(1, dtype=complex) for _ in range(r)]
    for i, pa in enumerate(a):
        for j, pb in enumerate(b):
            prod = npoly.polymul(pa, pb)
            k = i + j
            if k >= r:
                prod = npoly.polymul(prod, fpoly)
                k -= r
            out[k] = npoly.polyadd(out[k], prod)
    return out


def norm_polynomial(m: MuFunction) -> np.ndarray:
    """prod_j mu(x, zeta^j y) reduced by y^r = f: a polynomial in x (ascending)."""
    curve = m.curve
    r, z = curve.r, curve.zeta
    fpoly = curve.coeffs[::-1]
    comps = m.components()
    acc = [np.array([1.0 + 0j])] + [np.zeros(1, dtype=complex) for _ in range(r - 1)]
    for j in range(r):
        conj = [c * z ** (j * b) for b, c in enumerate(comps)]
        acc = _ring_mul(acc, conj, fpoly, r)
    scale = max(np.max(np.abs(acc[0])), 1.0)
    for k in range(1, r):
        if np.max(np.abs(acc[k])) > 1e-8 * scale:
            raise RootMultiplicityUnresolved("norm did not reduce to a polynomial in x")
    return np.trim_zeros(acc[0], "b")


def alpha_map(curve: CurveSpec, pts, cluster: float = 1e-5, tol: float = 1e-7) -> list:
    """The N(n) - n further zeros of mu_n on the affine curve."""
    m = mu(curve, pts)
    poly = norm_polynomial(m)
    roots = npoly.polyroots(poly)
    clusters = []
    for x in sorted(roots, key=lambda v: (v.real, v.imag)):
        for c in clusters:
            if abs(x - np.mean(c)) < cluster * (1 + abs(x)):
                c.append(x)
                break
        else:
            clusters.append([x])
    zeros = []
    for c in clusters:
        x = complex(np.mean(c))
        lifts = lift_points(curve, x, tol=1e-14)
        vals = np.array([abs(m(p.x, p.y)) for p in lifts])
        scale = 1.0 + np.max(np.abs([sum(abs(a) for a in m.coefficients)])) * (1 + abs(x)) ** curve.s
        hits = [p for p, v in zip(lifts, vals) if v < tol * scale]
        if len(hits) != len(c):
            order = np.argsort(vals)
            if len(c) > len(lifts) or vals[order[len(c) - 1]] > 1e-3 * scale:
                raise RootMultiplicityUnresolved(f"cannot match {len(c)} roots at x={x}")
            hits = [lifts[i] for i in order[: len(c)]]
        zeros.extend(hits)
    residual = list(zeros)
    for p in pts:
        d = [abs(q.x - p.x) + abs(q.y - p.y) for q in residual]
        j = int(np.argmin(d))
        if d[j] > 1e-5 * (1 + abs(p.x) + abs(p.y)):
            raise RootMultiplicityUnresolved("a source point is not among the zeros of mu_n")
        residual.pop(j)
    return residual
