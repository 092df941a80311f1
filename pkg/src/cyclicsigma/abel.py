"""Abel map with base point infinity on the universal cover.

Each point is reached by a canonical path: a leg from infinity in the local
parameter t (x = t^-r, y = t^-s prod_k (1 - e_k t^r)^(1/r)) out to the anchor
x0, then a routed polyline in the x-plane.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import paths
from .curve import AffinePoint, CurveSpec, locate, monomial_basis
from .errors import PathThroughBranchPoint
from .periods import PeriodData, first_kind
from .quadrature import QuadConfig, integrate


def infinity_factor(curve: CurveSpec, t):
    """prod_k (1 - e_k t^r)^(1/r) with principal powers (|e_k t^r| < 1)."""
    t = np.asarray(t, dtype=complex)
    out = np.ones_like(t)
    tr = t ** curve.r
    for e in curve.roots:
        out = out * (1.0 - e * tr) ** (1.0 / curve.r)
    return out


def point_at_infinity_parameter(curve: CurveSpec, t):
    """(x, y) of the point with local parameter t near infinity."""
    t = np.asarray(t, dtype=complex)
    return t ** (-curve.r), t ** (-curve.s) * infinity_factor(curve, t)


def nu_in_t(curve: CurveSpec, t):
    """Coefficients of dt in nu_1..nu_g at parameter t: array (g, n)."""
    basis = monomial_basis(curve, curve.genus)
    t = np.asarray(t, dtype=complex)
    gfac = infinity_factor(curve, t)
    g, r = curve.genus, curve.r
    rows = []
    for i in range(g):
        mono = basis[i]
        power = 2 * g - 2 - mono.order
        rows.append(-(t ** power) * gfac ** (mono.ry - r + 1))
    return np.stack(rows)


@dataclass(frozen=True)
class AbelPath:
    """Canonical path: t-leg from 0 to ``t_end`` then the x-polyline ``vertices``
    starting at the anchor with y = ``y_start``."""

    t_end: complex
    vertices: tuple
    y_start: complex

    @property
    def token(self):
        return (round(self.t_end.real, 12), round(self.t_end.imag, 12),
                tuple((round(v.real, 10), round(v.imag, 10)) for v in self.vertices))

    def samples(self, curve: CurveSpec, per_leg: int = 400):
        """Dense samples along the path.

        Returns (t, x, y) for the t-leg (t from near 0 to t_end) and (x, y) for
        the polyline.
        """
        ts = self.t_end * np.linspace(0.0, 1.0, per_leg + 1)[1:]
        xt, yt = point_at_infinity_parameter(curve, ts)
        xs, ys = [], []
        y0 = self.y_start
        for a, b in zip(self.vertices[:-1], self.vertices[1:]):
            seg = a + (b - a) * np.linspace(0.0, 1.0, per_leg + 1)[1:]
            yseg = paths.continue_y(curve.roots, curve.r, a, y0, seg)
            xs.append(seg)
            ys.append(yseg)
            y0 = yseg[-1]
        if xs:
            xs, ys = np.concatenate(xs), np.concatenate(ys)
        else:
            xs, ys = np.zeros(0, complex), np.zeros(0, complex)
        return (ts, xt, yt), (xs, ys)


@dataclass(frozen=True)
class LiftedPoint:
    """A point of the universal cover: affine point, path and Abel image.

    ``shift`` holds integer vectors (l', l'') of a deck transformation applied
    after the canonical path; the Abel image already includes it.
    """

    point: AffinePoint
    abel: np.ndarray
    path: AbelPath = None
    shift: tuple = None

    @property
    def x(self):
        return self.point.x

    @property
    def y(self):
        return self.point.y

    @property
    def path_id(self):
        base = self.path.token if self.path is not None else ("infinity",)
        if self.shift is None:
            return base
        return base + (tuple(self.shift[0]), tuple(self.shift[1]))

    @property
    def is_infinity(self):
        return self.path is None


def infinity_point(curve: CurveSpec) -> LiftedPoint:
    return LiftedPoint(AffinePoint(complex("inf"), complex("inf"), 0), np.zeros(curve.genus, complex))


def _start_parameter(curve: CurveSpec, y_anchor):
    base = curve.anchor ** (-1.0 / curve.r)
    best = None
    for m in range(curve.r):
        t = base * np.exp(2j * np.pi * m / curve.r)
        _, y = point_at_infinity_parameter(curve, t)
        d = abs(y - y_anchor)
        if best is None or d < best[0]:
            best = (d, t)
    if best[0] > 1e-8 * abs(y_anchor):
        raise PathThroughBranchPoint("t-leg does not meet the anchor fibre")
    return complex(best[1])


def infinity_leg(curve: CurveSpec, t_end, config: QuadConfig = QuadConfig()):
    """Integral of nu from infinity to the point with parameter t_end."""
    return integrate(lambda s: nu_in_t(curve, s * t_end) * t_end, config)


def polyline_integral(curve: CurveSpec, vertices, y_start, differential,
                      config: QuadConfig = QuadConfig()):
    """Integral of a differential along a polyline, y continued from y_start.

    Returns (integral, y at the final vertex).
    """
    total = 0
    y0 = complex(y_start)
    for a, b in zip(vertices[:-1], vertices[1:]):
        def integrand(s, a=a, b=b, y0=y0):
            x = a + (b - a) * s
            y = paths.continue_y(curve.roots, curve.r, a, y0, x)
            return differential(x, y) * (b - a)
        total = total + integrate(integrand, config)
        y0 = complex(paths.continue_y(curve.roots, curve.r, a, y0, b))
    return total, y0


def canonical_path(curve: CurveSpec, pt: AffinePoint) -> AbelPath:
    verts = tuple(paths.route(curve.anchor, pt.x, curve.roots, curve.clearance))
    y_start = curve.anchor_y * curve.zeta ** pt.sheet
    return AbelPath(_start_parameter(curve, y_start), verts, y_start)


def abel(curve: CurveSpec, pt: AffinePoint, config: QuadConfig = QuadConfig()) -> LiftedPoint:
    """Abel image of a finite point along its canonical path."""
    if not np.isfinite(pt.x):
        return infinity_point(curve)
    path = canonical_path(curve, pt)
    w = infinity_leg(curve, path.t_end, config)
    poly, y_end = polyline_integral(curve, path.vertices, path.y_start, first_kind(curve), config)
    if abs(y_end - pt.y) > 1e-7 * (1 + abs(pt.y)):
        raise PathThroughBranchPoint("continued y does not match the point's sheet")
    return LiftedPoint(pt, np.asarray(w + poly), path)


def extend(curve: CurveSpec, lp: LiftedPoint, x_new, config: QuadConfig = QuadConfig()) -> LiftedPoint:
    """Continue lp's path by the straight segment to x_new.

    The result differs from lp by the integral along that segment only, so
    no lattice vector is picked up on the way.
    """
    x_new = complex(x_new)
    d = np.min(np.abs(curve.roots - lp.x - (x_new - lp.x) * np.linspace(0, 1, 65)[:, None]))
    if d < 0.5 * curve.clearance:
        raise PathThroughBranchPoint("segment passes too close to a branch point")
    step, y_new = polyline_integral(curve, [lp.x, x_new], lp.y, first_kind(curve), config)
    pt = locate(curve, x_new, y_new)
    path = replace(lp.path, vertices=lp.path.vertices + (x_new,))
    return LiftedPoint(pt, np.asarray(lp.abel + step), path, lp.shift)


def abel_xy(curve: CurveSpec, x, y, config: QuadConfig = QuadConfig()) -> LiftedPoint:
    return abel(curve, locate(curve, x, y), config)


def abel_near_infinity(curve: CurveSpec, t, config: QuadConfig = QuadConfig()):
    """Abel image of the point with local parameter t (small)."""
    return infinity_leg(curve, complex(t), config)


def abel_divisor(curve: CurveSpec, pts, config: QuadConfig = QuadConfig()):
    """Sum of Abel images; accepts AffinePoints or LiftedPoints."""
    total = np.zeros(curve.genus, complex)
    for p in pts:
        total = total + (p.abel if isinstance(p, LiftedPoint) else abel(curve, p, config).abel)
    return total


# -- lattice arithmetic ---------------------------------------------------


def real_coordinates(periods: PeriodData, u):
    """(u', u'') real with u = 2 omega' u' + 2 omega'' u''."""
    u = np.asarray(u, dtype=complex)
    lat = periods.lattice
    A = np.vstack([lat.real, lat.imag])
    sol = np.linalg.solve(A, np.concatenate([u.real, u.imag]))
    g = periods.genus
    return sol[:g], sol[g:]


def reduce_mod_lattice(periods: PeriodData, u):
    """Split u = remainder + 2 omega' l' + 2 omega'' l'' with integer l', l''."""
    u1, u2 = real_coordinates(periods, u)
    l1, l2 = np.rint(u1).astype(int), np.rint(u2).astype(int)
    return np.asarray(u) - lattice_vector(periods, l1, l2), l1, l2


def lattice_vector(periods: PeriodData, l1, l2):
    return 2.0 * periods.omega1 @ np.asarray(l1, float) + 2.0 * periods.omega2 @ np.asarray(l2, float)


def lattice_residual(periods: PeriodData, u) -> float:
    """Distance of the real coordinates of u from the integers."""
    u1, u2 = real_coordinates(periods, u)
    return float(max(np.max(np.abs(u1 - np.rint(u1))), np.max(np.abs(u2 - np.rint(u2)))))


def quasi_L(periods: PeriodData, u, v):
    """L(u, v) = -2 u^T (eta' v' + eta'' v'').

    The minus sign pairs with the Legendre relation M J M^T = 2 pi i J and
    the Gaussian exp(-u gamma u / 2) used for sigma.
    """
    v1, v2 = real_coordinates(periods, v)
    return -2.0 * np.asarray(u) @ (periods.eta1 @ v1 + periods.eta2 @ v2)


def chi(periods: PeriodData, l1, l2) -> complex:
    d1, d2 = periods.riemann_char
    l1, l2 = np.asarray(l1), np.asarray(l2)
    return complex(np.exp(1j * np.pi * (2 * (l1 @ d1 - l2 @ d2) + l1 @ l2)))
