"""Branch data, a symplectic homology basis and the period matrices.

Cycles are built on a minimal spanning tree of the finite branch points: for a
tree edge [a, b] and 0 <= k < r-1 the cycle runs from a to b on sheet k and
back on sheet k+1, sheets counted relative to the edge's reference branch.
Intersection numbers come from explicit transversal representatives; an
integer congruence then reduces them to the standard symplectic form.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import paths
from .curve import CurveSpec, monomial_basis
from .errors import (LegendreViolation, NonPositiveTau, ReductionFailure,
                     RootFindingFailure, UnsupportedCurve)
from .quadrature import QuadConfig, integrate


# -- differentials -------------------------------------------------------


def first_kind(curve: CurveSpec):
    """Callable (x, y) -> array (g, n) of the coefficients of dx in nu_1..nu_g."""
    basis = monomial_basis(curve, curve.genus)
    g, r = curve.genus, curve.r

    def nu(x, y):
        den = r * y ** (r - 1)
        return np.stack([basis[i](x, y) / den for i in range(g)])
    return nu


def second_kind_polynomials(curve: CurveSpec):
    """Numerators of the second-kind basis as (poly in x, power of y) lists.

    eta_j = sum_terms c(x) y^b dx / (r y^(r-1)).
    """
    g = curve.genus
    if curve.is_hyperelliptic:
        a = curve.coeffs[::-1]
        out = []
        for j in range(1, g + 1):
            poly = np.zeros(2 * g + 2, dtype=complex)
            for k in range(j, 2 * g + 2 - j):
                if k + 1 + j < len(a):
                    poly[k] = (k + 1 - j) * a[k + 1 + j]
            out.append([(poly, 0)])
        return out
    if curve.is_trigonal_34:
        l1, l2 = curve.lam[0], curve.lam[1]
        return [[(np.array([l2, 3 * l1, 5], dtype=complex), 1)],
                [(np.array([0, 2], dtype=complex), 1)],
                [(np.array([0, 0, 1], dtype=complex), 0)]]
    raise UnsupportedCurve("second-kind basis only for (2, 2g+1) and (3, 4)")


def second_kind(curve: CurveSpec):
    polys = second_kind_polynomials(curve)
    r = curve.r

    def eta(x, y):
        den = r * y ** (r - 1)
        rows = []
        for terms in polys:
            acc = 0
            for coeffs, b in terms:
                acc = acc + np.polynomial.polynomial.polyval(x, coeffs) * y ** b
            rows.append(acc / den)
        return np.stack(rows)
    return eta


# -- branch points and monodromy ----------------------------------------


@dataclass(frozen=True)
class BranchData:
    roots: np.ndarray
    base: float
    permutations: tuple
    infinity: tuple


def _perm_from(initial, final, tol=1e-8):
    perm = []
    for y in final:
        dist = np.abs(np.asarray(initial) - y)
        j = int(np.argmin(dist))
        if dist[j] > tol * (1 + abs(y)):
            raise RootFindingFailure("continuation did not return to the fibre")
        perm.append(j)
    return tuple(perm)


def _circle(center, start, turns=1.0, points=256):
    r0 = abs(start - center)
    th0 = np.angle(start - center)
    th = th0 + 2 * np.pi * turns * np.linspace(0.0, 1.0, points + 1)
    pts = center + r0 * np.exp(1j * th)
    pts[0] = start
    pts[-1] = start
    return list(pts)


def branch_and_monodromy(curve: CurveSpec) -> BranchData:
    """Sheet permutations of counter-clockwise lassos from the anchor around each
    root, and of the clockwise loop around infinity.  ``perm[j]`` is the sheet
    reached from sheet j."""
    roots, r, x0 = curve.roots, curve.r, curve.anchor
    fibre = [curve.anchor_y * curve.zeta ** j for j in range(r)]
    rad = 0.5 * curve.clearance
    perms = []
    for b in roots:
        near = b + rad * (x0 - b) / abs(x0 - b)
        out = paths.route(x0, near, roots, curve.clearance)
        loop = out + _circle(b, near)[1:] + out[::-1][1:]
        finals = [paths.continue_along(roots, r, loop, y)[-1] for y in fibre]
        perms.append(_perm_from(fibre, finals))
    big = _circle(0.0, complex(x0), turns=-1.0, points=1024)
    finals = [paths.continue_along(roots, r, big, y)[-1] for y in fibre]
    return BranchData(roots, x0, tuple(perms), _perm_from(fibre, finals))


def compose(p, q):
    """Apply p then q."""
    return tuple(q[p[j]] for j in range(len(p)))


# -- homology -------------------------------------------------------------


def spanning_tree(roots):
    """Edges (i, j) of the Euclidean minimal spanning tree (Prim)."""
    n = len(roots)
    inside = {0}
    edges = []
    while len(inside) < n:
        best = None
        for i in inside:
            for j in range(n):
                if j in inside:
                    continue
                d = abs(roots[i] - roots[j])
                if best is None or d < best[0]:
                    best = (d, i, j)
        edges.append((best[1], best[2]))
        inside.add(best[2])
    return edges


def edge_branch(curve: CurveSpec, i: int, j: int):
    """Reference branch on the open segment (e_i, e_j): a function of x."""
    roots, r = curve.roots, curve.r
    m = 0.5 * (roots[i] + roots[j])
    rho = complex(curve.f(m)) ** (1.0 / r)

    def y(x):
        return paths.continue_y(roots, r, m, rho, x)
    return y, m, rho


@dataclass(frozen=True)
class EdgeCycle:
    start: int
    end: int
    sheet: int


@dataclass(frozen=True)
class HomologyBasis:
    """Edge cycles, their intersection matrix and the integer change of basis.

    Row p of ``transform`` expresses alpha_p (p < g) or beta_{p-g} as an
    integer combination of ``cycles``.
    """

    cycles: tuple
    intersections: np.ndarray
    transform: np.ndarray

    @property
    def genus(self) -> int:
        return len(self.cycles) // 2

    @property
    def symplectic_form(self) -> np.ndarray:
        return self.transform @ self.intersections @ self.transform.T

    def alpha(self, p):
        return self.transform[p]

    def beta(self, p):
        return self.transform[self.genus + p]


def cycle_polyline(curve: CurveSpec, cycle: EdgeCycle, radius: float, angle: float,
                   leg_points: int = 48, circle_points: int = 192):
    """Closed transversal representative of an edge cycle.

    Returns vertices and the values of y along them.  Legs run parallel to the
    edge at signed distance radius*sin(angle); full circles of the given radius
    around the endpoints switch sheets.
    """
    roots = curve.roots
    a, b = roots[cycle.start], roots[cycle.end]
    d = (b - a) / abs(b - a)
    eps, off = radius * np.cos(angle), radius * np.sin(angle)
    a0 = a + eps * d + 1j * off * d
    b0 = b - eps * d + 1j * off * d
    leg = list(np.linspace(a0, b0, leg_points))
    verts = (leg + _circle(b, b0, 1.0, circle_points)[1:] + leg[::-1][1:]
             + _circle(a, a0, -1.0, circle_points)[1:])
    ybranch, _, _ = edge_branch(curve, cycle.start, cycle.end)
    on_edge = a + eps * d
    y_on = complex(ybranch(on_edge)) * curve.zeta ** cycle.sheet
    y0 = complex(paths.continue_y(roots, curve.r, on_edge, y_on, a0))
    ys = paths.continue_along(roots, curve.r, verts, y0)
    if abs(ys[-1] - ys[0]) > 1e-8 * (1 + abs(ys[0])):
        raise ReductionFailure("cycle representative does not close")
    return np.array(verts), ys


def _cross(u, v):
    return (np.conj(u) * v).imag


def intersection_number(curve, c1, c2) -> int:
    """Signed count of transversal crossings at equal points of the curve."""
    x1, y1 = c1
    x2, y2 = c2
    d1 = np.diff(x1)
    d2 = np.diff(x2)
    w = x2[None, :-1] - x1[:-1, None]
    den = _cross(d1[:, None], d2[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        s = _cross(w, d2[None, :]) / den
        t = _cross(w, d1[:, None]) / den
    hit = (den != 0) & (s >= 0) & (s < 1) & (t >= 0) & (t < 1)
    total = 0
    for i, j in zip(*np.nonzero(hit)):
        p = x1[i] + s[i, j] * d1[i]
        ya = paths.continue_y(curve.roots, curve.r, x1[i], y1[i], p)
        yb = paths.continue_y(curve.roots, curve.r, x2[j], y2[j], p)
        if abs(ya - yb) < 1e-6 * (abs(ya) + 1e-300):
            total += 1 if den[i, j] > 0 else -1
    return total


def cycle_shapes(count, clearance):
    """Distinct radius/angle per cycle so representatives are transversal."""
    out = []
    for c in range(count):
        radius = clearance * (0.25 + 0.55 * (c + 1) / (count + 1))
        angle = (-1) ** c * (0.3 + 0.9 * (c + 0.5) / count)
        out.append((radius, angle))
    return out


def symplectic_reduction(k_matrix) -> np.ndarray:
    """Integer A with A K A^T = [[0, I], [-I, 0]] for unimodular antisymmetric K."""
    K = np.array(k_matrix, dtype=np.int64)
    n = K.shape[0]
    B = np.eye(n, dtype=np.int64)

    def current():
        return B @ K @ B.T

    remaining = list(range(n))
    alphas, betas = [], []
    while remaining:
        i, others = remaining[0], remaining[1:]
        while True:
            M = current()
            nz = [j for j in others if M[i, j] != 0]
            if not nz:
                raise ReductionFailure("degenerate intersection form")
            if len(nz) == 1:
                break
            j0 = min(nz, key=lambda j: abs(M[i, j]))
            for j in nz:
                if j != j0:
                    B[j] -= (M[i, j] // M[i, j0]) * B[j0]
        j = nz[0]
        if abs(M[i, j]) != 1:
            raise ReductionFailure("intersection form is not unimodular")
        if M[i, j] == -1:
            B[j] = -B[j]
        M = current()
        for l in others:
            if l != j:
                B[l] = B[l] - M[l, j] * B[i] + M[l, i] * B[j]
        alphas.append(i)
        betas.append(j)
        remaining = [l for l in remaining if l not in (i, j)]
    A = np.array([B[a] for a in alphas] + [B[b] for b in betas], dtype=np.int64)
    g = n // 2
    J = np.block([[np.zeros((g, g), int), np.eye(g, dtype=int)],
                  [-np.eye(g, dtype=int), np.zeros((g, g), int)]])
    if not np.array_equal(A @ K @ A.T, J):
        raise ReductionFailure("reduction did not reach the standard form")
    return A


def homology_basis(curve: CurveSpec) -> HomologyBasis:
    roots = curve.roots
    cycles = [EdgeCycle(i, j, k) for i, j in spanning_tree(roots) for k in range(curve.r - 1)]
    n = len(cycles)
    if n != 2 * curve.genus:
        raise ReductionFailure("wrong number of edge cycles")
    shapes = cycle_shapes(n, curve.clearance)
    reps = [cycle_polyline(curve, c, *shape) for c, shape in zip(cycles, shapes)]
    K = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            K[a, b] = intersection_number(curve, reps[a], reps[b])
            K[b, a] = -K[a, b]
    return HomologyBasis(tuple(cycles), K, symplectic_reduction(K))


# -- integrals ------------------------------------------------------------


def edge_sheet_integrals(curve: CurveSpec, i: int, j: int, differential,
                         config: QuadConfig = QuadConfig()):
    """Integrals from e_i to e_j of a differential on every sheet.

    Returns an array (r, k): row m uses y = zeta^m times the edge branch.  Each
    half of the edge is mapped by x = e + (mid - e) s^r, which removes the
    algebraic endpoint singularity.
    """
    roots, r = curve.roots, curve.r
    _, m, rho = edge_branch(curve, i, j)
    zetas = curve.zeta ** np.arange(r)
    others = [e for idx, e in enumerate(roots)]
    results = []
    for sign, idx in ((1.0, i), (-1.0, j)):
        e = roots[idx]
        rest = [v for n_, v in enumerate(others) if n_ != idx]

        def integrand(s, e=e, rest=rest):
            x = e + (m - e) * s ** r
            ratio = np.ones_like(x)
            for v in rest:
                ratio = ratio * ((x - v) / (m - v)) ** (1.0 / r)
            y = rho * s * ratio
            jac = r * (m - e) * s ** (r - 1)
            vals = [differential(x, z * y) * jac for z in zetas]
            return np.concatenate(vals, axis=0)
        results.append(sign * integrate(integrand, config))
    total = results[0] + results[1]
    return total.reshape(r, -1)


def cycle_periods(curve: CurveSpec, basis: HomologyBasis, differential,
                  config: QuadConfig = QuadConfig()):
    """Periods of a differential over the edge cycles: array (k, 2g)."""
    cache = {}
    cols = []
    for c in basis.cycles:
        key = (c.start, c.end)
        if key not in cache:
            cache[key] = edge_sheet_integrals(curve, c.start, c.end, differential, config)
        sheets = cache[key]
        cols.append(sheets[c.sheet] - sheets[(c.sheet + 1) % curve.r])
    return np.array(cols).T


# -- period data ----------------------------------------------------------


@dataclass(frozen=True)
class PeriodData:
    """Half-period matrices with rows indexed by differentials.

    ``omega1[j, k]`` is half the integral of nu_j over alpha_k; likewise for
    the other three blocks.  ``char`` is the Riemann characteristic as a pair
    of 0/1 vectors (twice the half-integers), filled in by
    :func:`riemann_characteristic`.
    """

    omega1: np.ndarray
    omega2: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    homology: HomologyBasis
    legendre_residual: float
    char: tuple = None

    @property
    def genus(self):
        return self.omega1.shape[0]

    @property
    def tau(self):
        return np.linalg.solve(self.omega1, self.omega2)

    @property
    def gamma(self):
        gam = self.eta1 @ np.linalg.inv(self.omega1)
        return 0.5 * (gam + gam.T)

    @property
    def gamma_asymmetry(self):
        gam = self.eta1 @ np.linalg.inv(self.omega1)
        return float(np.max(np.abs(gam - gam.T)))

    @property
    def normalizer(self):
        """The matrix (2 omega')^{-1} taking u to theta coordinates."""
        return np.linalg.inv(2.0 * self.omega1)

    @property
    def lattice(self):
        """Columns 2 omega' and 2 omega'' generating the period lattice."""
        return np.hstack([2.0 * self.omega1, 2.0 * self.omega2])

    @property
    def riemann_char(self):
        if self.char is None:
            return None
        return 0.5 * np.array(self.char[0]), 0.5 * np.array(self.char[1])

    def period_matrix(self):
        return np.block([[self.omega1, self.omega2], [self.eta1, self.eta2]])


def legendre_residual(omega1, omega2, eta1, eta2) -> float:
    g = omega1.shape[0]
    M = 2.0 * np.block([[omega1, omega2], [eta1, eta2]])
    J = np.block([[np.zeros((g, g)), -np.eye(g)], [np.eye(g), np.zeros((g, g))]])
    return float(np.max(np.abs(M @ J @ M.T - 2j * np.pi * J)))


def periods_first_kind(curve, basis, config=QuadConfig()):
    P = cycle_periods(curve, basis, first_kind(curve), config)
    A = basis.transform.astype(float)
    full = P @ A.T
    g = curve.genus
    omega1, omega2 = 0.5 * full[:, :g], 0.5 * full[:, g:]
    tau = np.linalg.solve(omega1, omega2)
    if np.min(np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))) <= 0:
        raise NonPositiveTau("Im tau is not positive definite")
    return omega1, omega2


def periods_second_kind(curve, basis, config=QuadConfig()):
    P = cycle_periods(curve, basis, second_kind(curve), config)
    full = P @ basis.transform.astype(float).T
    g = curve.genus
    return 0.5 * full[:, :g], 0.5 * full[:, g:]


def compute_periods(curve: CurveSpec, config: QuadConfig = QuadConfig(),
                    legendre_tol: float = 1e-8, basis: HomologyBasis = None) -> PeriodData:
    """Period matrices without the Riemann characteristic."""
    basis = homology_basis(curve) if basis is None else basis
    omega1, omega2 = periods_first_kind(curve, basis, config)
    eta1, eta2 = periods_second_kind(curve, basis, config)
    res = legendre_residual(omega1, omega2, eta1, eta2)
    if not res < legendre_tol:
        raise LegendreViolation(f"Legendre residual {res:.3e}")
    return PeriodData(omega1, omega2, eta1, eta2, basis, res)


def validate_periods(data: PeriodData, legendre_tol: float = 1e-8) -> PeriodData:
    """Recompute the Legendre residual of (possibly edited) period data."""
    res = legendre_residual(data.omega1, data.omega2, data.eta1, data.eta2)
    if not res < legendre_tol:
        raise LegendreViolation(f"Legendre residual {res:.3e}")
    return replace(data, legendre_residual=res)


def with_basis_change(data: PeriodData, S: np.ndarray) -> PeriodData:
    """Apply an integer symplectic matrix S to the (alpha, beta) basis."""
    g = data.genus
    A = S.astype(float)
    full = np.hstack([data.omega1, data.omega2]) @ A.T
    etas = np.hstack([data.eta1, data.eta2]) @ A.T
    basis = replace(data.homology, transform=S @ data.homology.transform)
    return replace(data, omega1=full[:, :g], omega2=full[:, g:], eta1=etas[:, :g],
                   eta2=etas[:, g:], homology=basis, char=None)


# -- Riemann characteristic -------------------------------------------------


def riemann_characteristic(curve: CurveSpec, data: PeriodData, samples: int = 6,
                           seed: int = 12345, tol: float = 1e-9) -> PeriodData:
    """Find the characteristic whose theta vanishes on the Abel image of
    effective divisors of degree g-1, and return the completed PeriodData."""
    from .abel import abel
    from .curve import random_points
    from .theta import LatticeSum, all_characteristics
    from .errors import AmbiguousCharacteristic, NoneFound

    g = curve.genus
    rng = np.random.default_rng(seed)
    zs = []
    for _ in range(samples):
        pts = random_points(curve, g - 1, rng)
        u = sum((abel(curve, p).abel for p in pts), np.zeros(g, complex))
        zs.append(data.normalizer @ u)
    zs = np.array(zs)
    survivors = []
    for ch in all_characteristics(g):
        ls = LatticeSum(data.tau, ch)
        rel = np.abs(ls.evaluate(zs)) / ls.magnitude(zs)
        if np.max(rel) < tol:
            survivors.append(ch)
    if not survivors:
        raise NoneFound("no characteristic vanishes on W^(g-1)")
    if len(survivors) > 1:
        raise AmbiguousCharacteristic(f"{len(survivors)} characteristics survive")
    ch = survivors[0]
    return replace(data, char=(ch.a, ch.b))


@lru_cache(maxsize=32)
def period_data(curve: CurveSpec, tol: float = 1e-13) -> PeriodData:
    """Complete period data (cached per curve)."""
    data = compute_periods(curve, QuadConfig(tol=tol))
    return riemann_characteristic(curve, data)
