"""Prime forms from theta functions, their sigma closed forms, and the
third-kind differential identity.

Every form-valued quantity is returned as a scalar in the trivialization by
du_1 = nu_1 at both arguments.  With an odd characteristic delta the
half-differential sqrt(zeta), zeta = sum_i d_i theta[delta](0) nu_hat_i, is
sqrt(h) sqrt(du_1) for the function h = zeta / nu_1, so

    E(P, Q) sqrt(du_1(P)) sqrt(du_1(Q)) = theta[delta](z_hat) / (sqrt(h(P)) sqrt(h(Q))).

sqrt(h) is continued along the same path that defines the Abel image, starting
from infinity where t^(2g-2) h is regular.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import paths
from .abel import LiftedPoint, infinity_factor, point_at_infinity_parameter, polyline_integral
from .curve import AffinePoint, CurveSpec, galois_exponents, monomial_basis, young_data
from .errors import (NoneFound, NormalizationSolveFailure, OnZeroDivisor,
                     TrivializationZero, UnsupportedFamily)
from .periods import PeriodData, cycle_periods, cycle_polyline, cycle_shapes
from .quadrature import QuadConfig, integrate
from .sigma import SigmaEvaluator
from .theta import LatticeSum, ThetaCharacteristic, all_characteristics


@dataclass(frozen=True)
class PrimeFormValue:
    """A prime-form value as a scalar in the du_1 trivialization."""

    scalar: complex
    trivialization: str = "nu_1 at P and Q"
    factors: dict = field(default_factory=dict)

    def __complex__(self):
        return complex(self.scalar)


def odd_characteristic(periods: PeriodData, tol: float = 1e-8) -> ThetaCharacteristic:
    """Lexicographically first odd characteristic with nonzero gradient at 0."""
    g = periods.genus
    for ch in all_characteristics(g):
        if not ch.is_odd:
            continue
        ls = LatticeSum(periods.tau, ch)
        z0 = np.zeros((1, g))
        grad = np.array([ls.evaluate(z0, (i,))[0] for i in range(g)])
        if np.linalg.norm(grad) > tol * ls.magnitude(z0)[0]:
            return ch
    raise NoneFound("every odd characteristic is singular")


class PrimeForm:
    """Theta-based prime forms E and cal-E for one curve and odd characteristic."""

    def __init__(self, ev: SigmaEvaluator, char: ThetaCharacteristic | None = None,
                 config: QuadConfig = QuadConfig()):
        self.ev = ev
        self.curve = ev.curve
        self.periods = ev.periods
        self.char = odd_characteristic(self.periods) if char is None else char
        self.lattice = LatticeSum(self.periods.tau, self.char)
        self.config = config
        g = self.curve.genus
        z0 = np.zeros((1, g))
        grad = np.array([self.lattice.evaluate(z0, (i,))[0] for i in range(g)])
        # zeta / nu_1 = sum_j coeff_j phi_{j-1}
        self.h_coeffs = grad @ self.periods.normalizer
        self.basis = monomial_basis(self.curve, g)
        self._monodromy = None
        if abs(self.h_coeffs[-1]) < 1e-10 * np.max(np.abs(self.h_coeffs)):
            raise TrivializationZero("zeta vanishes at infinity for this characteristic")

    # -- the function h and its square root ------------------------------

    def h(self, x, y):
        vals = self.basis.evaluate(x, y, self.curve.genus)
        return np.tensordot(self.h_coeffs, vals, axes=1)

    def _h_scaled(self, t):
        """t^(2g-2) h at the point with parameter t near infinity."""
        g = self.curve.genus
        gfac = infinity_factor(self.curve, t)
        out = 0
        for k in range(g):
            m = self.basis[k]
            out = out + self.h_coeffs[k] * t ** (2 * g - 2 - m.order) * gfac ** m.ry
        return out

    def sqrt_h(self, lp: LiftedPoint) -> complex:
        """sqrt(h) continued along the point's path from infinity."""
        if lp.path is None:
            raise TrivializationZero("h has a pole at infinity")
        g = self.curve.genus
        path = lp.path
        root = np.sqrt(complex(self.h_coeffs[-1]))
        root = continue_sqrt(lambda s: self._h_scaled(s * path.t_end), root)
        root = root * path.t_end ** (-(g - 1))
        y0 = path.y_start
        for a, b in zip(path.vertices[:-1], path.vertices[1:]):
            def hseg(s, a=a, b=b, y0=y0):
                x = a + (b - a) * s
                return self.h(x, paths.continue_y(self.curve.roots, self.curve.r, a, y0, x))
            root = continue_sqrt(hseg, root)
            y0 = complex(paths.continue_y(self.curve.roots, self.curve.r, a, y0, b))
        if abs(root ** 2 - self.h(lp.x, lp.y)) > 1e-8 * (1 + abs(root) ** 2):
            raise TrivializationZero("sqrt(h) continuation lost track")
        if lp.shift is not None:
            root = root * self.shift_sign(*lp.shift)
        return complex(root)

    # -- monodromy of sqrt(h) --------------------------------------------

    def cycle_signs(self):
        """Sign picked up by sqrt(h) around each edge cycle of the homology basis."""
        if self._monodromy is None:
            basis = self.periods.homology
            shapes = cycle_shapes(len(basis.cycles), self.curve.clearance)
            signs = []
            for c, shape in zip(basis.cycles, shapes):
                verts, ys = cycle_polyline(self.curve, c, *shape)
                start = np.sqrt(complex(self.h(verts[0], ys[0])))
                root = start
                for k in range(len(verts) - 1):
                    a, b, ya = verts[k], verts[k + 1], ys[k]

                    def hseg(s, a=a, b=b, ya=ya):
                        x = a + (b - a) * s
                        return self.h(x, paths.continue_y(self.curve.roots, self.curve.r, a, ya, x))
                    root = continue_sqrt(hseg, root)
                signs.append(int(np.rint((root / start).real)))
            self._monodromy = np.array(signs)
        return self._monodromy

    def shift_sign(self, l1, l2) -> int:
        """Monodromy sign of sqrt(h) along the cycle with lattice vector 2w'l1 + 2w''l2."""
        T = self.periods.homology.transform
        g = self.curve.genus
        counts = np.asarray(l1, int) @ T[:g] + np.asarray(l2, int) @ T[g:]
        odd = int(np.sum(counts[self.cycle_signs() < 0])) % 2
        return -1 if odd else 1

    # -- prime forms -----------------------------------------------------

    def z_hat(self, P: LiftedPoint, Q: LiftedPoint):
        return self.periods.normalizer @ (P.abel - Q.abel)

    def E(self, P: LiftedPoint, Q: LiftedPoint) -> PrimeFormValue:
        hp, hq = self.sqrt_h(P), self.sqrt_h(Q)
        if abs(hp) < 1e-12 or abs(hq) < 1e-12:
            raise TrivializationZero("zeta vanishes at an argument")
        th = self.lattice.evaluate(self.z_hat(P, Q))[0]
        return PrimeFormValue(th / (hp * hq), factors={"sqrt_h_P": hp, "sqrt_h_Q": hq})

    def cal_E(self, P: LiftedPoint, Q: LiftedPoint) -> PrimeFormValue:
        d = P.abel - Q.abel
        e = self.E(P, Q)
        gauss = np.exp(-0.5 * d @ self.periods.gamma @ d)
        return PrimeFormValue(gauss * e.scalar, factors=dict(e.factors, gauss=gauss))


def continue_sqrt(func, root, pieces: int = 32, depth: int = 40) -> complex:
    """Continue a square root of func(s) from s=0 (value ``root``) to s=1.

    The step is halved wherever consecutive values of func differ by more than
    a quarter of their size, which keeps the sign choice unambiguous.
    """
    s_prev, v_prev = 0.0, complex(func(np.array([0.0]))[0])
    root = complex(root)
    grid = list(np.linspace(0.0, 1.0, pieces + 1)[1:])
    while grid:
        s = grid.pop(0)
        v = complex(func(np.array([s]))[0])
        if abs(v - v_prev) > 0.25 * max(abs(v_prev), abs(v)) and s - s_prev > 2.0 ** -depth:
            grid.insert(0, s)
            grid.insert(0, 0.5 * (s_prev + s))
            continue
        cand = np.sqrt(v)
        root = cand if abs(cand - root) <= abs(cand + root) else -cand
        s_prev, v_prev = s, v
    return root


# -- closed forms in sigma ------------------------------------------------


def family(curve: CurveSpec) -> str:
    if curve.is_hyperelliptic:
        return "hyperelliptic"
    if curve.is_trigonal_34:
        return "trigonal"
    raise UnsupportedFamily(f"no sigma closed form for ({curve.r},{curve.s})")


def prime_form_sigma(ev: SigmaEvaluator, P: LiftedPoint, Q: LiftedPoint) -> PrimeFormValue:
    """sigma_natural2(u - v) for (2, 2g+1); sigma(u - v) for (3, 4)."""
    d = P.abel - Q.abel
    if family(ev.curve) == "hyperelliptic":
        return PrimeFormValue(complex(ev.natural(2, d)))
    return PrimeFormValue(complex(ev.value(d)))


def prime_form_sigma_variant(ev: SigmaEvaluator, P: LiftedPoint, Q: LiftedPoint) -> PrimeFormValue:
    """sigma(u + zeta v + zeta^2 v) / sqrt(-3) on the (3, 4) curve."""
    if family(ev.curve) != "trigonal":
        raise UnsupportedFamily("the variant closed form exists for (3, 4) only")
    z = ev.curve.zeta
    arg = P.abel + z * Q.abel + z * z * Q.abel
    return PrimeFormValue(complex(ev.value(arg)) / np.sqrt(-3 + 0j))


# -- third kind -----------------------------------------------------------


def omega_third(curve: CurveSpec, q: AffinePoint):
    """Coefficient of dx in Omega_q, residue +1 at q and -1 at infinity."""
    r = curve.r

    def w(x, y):
        num = sum(y ** k * q.y ** (r - 1 - k) for k in range(r))
        return num / (r * y ** (r - 1) * (x - q.x))
    return w


def _third_in_t(curve: CurveSpec, q: AffinePoint, q2: AffinePoint, t):
    """Omega_q - Omega_q2 as a coefficient of dt near infinity."""
    x, y = point_at_infinity_parameter(curve, t)
    r = curve.r
    dxdt = -r * t ** (-r - 1)
    total = 0
    for k in range(r):
        total = total + y ** k * (q.y ** (r - 1 - k) / (x - q.x) - q2.y ** (r - 1 - k) / (x - q2.x))
    return total / (r * y ** (r - 1)) * dxdt


def third_kind_differential(ev: SigmaEvaluator, q: AffinePoint, q2: AffinePoint,
                            config: QuadConfig = QuadConfig()):
    """Coefficients c with tau = Omega_q - Omega_q2 - sum_j c_j nu_j having zero alpha periods."""
    curve, periods = ev.curve, ev.periods
    w1, w2 = omega_third(curve, q), omega_third(curve, q2)

    def diff(x, y):
        return np.atleast_2d(w1(x, y) - w2(x, y))
    basis = periods.homology
    edge = cycle_periods(curve, basis, diff, config)[0]
    alpha = basis.transform[: curve.genus] @ edge
    A = (2.0 * periods.omega1).T
    try:
        c = np.linalg.solve(A, alpha)
    except np.linalg.LinAlgError as exc:
        raise NormalizationSolveFailure("alpha-period matrix is singular") from exc
    if np.linalg.norm(A @ c - alpha) > 1e-8 * (1 + np.linalg.norm(alpha)):
        raise NormalizationSolveFailure("normalization residual too large")
    return c


def third_kind_integral(ev: SigmaEvaluator, q: AffinePoint, q2: AffinePoint, P: LiftedPoint,
                        c=None, config: QuadConfig = QuadConfig()) -> complex:
    """Integral of the normalized third-kind differential from infinity to P along P's path."""
    curve = ev.curve
    c = third_kind_differential(ev, q, q2, config) if c is None else c
    path = P.path
    t_end = path.t_end
    leg = integrate(lambda s: np.atleast_2d(_third_in_t(curve, q, q2, s * t_end) * t_end), config)[0]
    w1, w2 = omega_third(curve, q), omega_third(curve, q2)
    poly, _ = polyline_integral(curve, path.vertices, path.y_start,
                                lambda x, y: np.atleast_2d(w1(x, y) - w2(x, y)), config)
    holo = c @ P.abel
    return complex(leg + poly[0] - holo)


def third_kind_ratio(pf: PrimeForm, P: LiftedPoint, Q: LiftedPoint, Q2: LiftedPoint,
                     config: QuadConfig = QuadConfig()) -> float:
    """Relative discrepancy of E(P,Q)/E(P,Q') against exp of the third-kind integral.

    Both sides are normalized by their values at infinity, which removes the
    P-independent factors sqrt(h(Q)), sqrt(h(Q')).
    """
    if np.allclose([Q.x, Q.y], [Q2.x, Q2.y]):
        raise ValueError("Q and Q' coincide")
    lat = pf.lattice
    A = pf.periods.normalizer

    def ratio(u):
        a = lat.evaluate(A @ (u - Q.abel))[0]
        b = lat.evaluate(A @ (u - Q2.abel))[0]
        return a / b
    left = ratio(P.abel) / ratio(np.zeros_like(P.abel))
    right = np.exp(third_kind_integral(pf.ev, Q.point, Q2.point, P, config=config))
    return float(abs(left / right - 1.0))


# -- Benney demo ----------------------------------------------------------


def benney_core_term(ev: SigmaEvaluator, u, v) -> complex:
    """sum_i zeta^i d/dv_1 log sigma_main(u - zeta_hat^(-i) v), k = 1.

    sigma_main is sigma_natural2 on (2, 2g+1) and sigma on (3, 4).
    """
    curve = ev.curve
    fam = family(curve)
    exps, _ = galois_exponents(curve)
    z = curve.zeta
    index = tuple(young_data(curve).natural_k(2)) if fam == "hyperelliptic" else ()
    total = 0j
    for i in range(curve.r):
        rot = np.array([z ** (-i * e) for e in exps])
        w = np.asarray(u) - rot * np.asarray(v)
        s = ev.partial(index, w) if index else ev.value(w)
        if abs(s) < 1e-14 * (1 + ev.magnitude(w)[0]):
            raise OnZeroDivisor("sigma factor vanishes")
        ds = ev.partial(index + (1,), w)
        total += z ** i * (-rot[0]) * ds / s
    return complex(total)
