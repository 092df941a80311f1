"""Seeded numerical certification of the sigma-function identities.

Each identity is evaluated on random points of the curve by two independent
code paths (sigma quotients on one side, algebraic functions of the points on
the other) and summarized by its largest relative residual.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .abel import LiftedPoint, abel, extend, lattice_vector
from .curve import CurveSpec, galois_exponents, random_points, young_data
from .errors import DegenerateSample, PathThroughBranchPoint, UnsupportedFamily
from .fs import fs_det, mu, varphi_det
from .primeform import (PrimeForm, family, prime_form_sigma, prime_form_sigma_variant,
                        third_kind_ratio)
from .sigma import SigmaEvaluator, sigma_for, vanishing_order_probe

DEFAULT_TOLERANCES = {
    "quasi_periodicity": 1e-8,
    "parity": 1e-8,
    "sigma_galois": 1e-8,
    "jacobi_inversion": 1e-7,
    "jacobi_inversion_k2": 1e-6,
    "fs_hyperelliptic_n2": 1e-6,
    "fs_hyperelliptic_n3": 1e-6,
    "fs_hyperelliptic_n4": 1e-6,
    "fs_trigonal_n2": 1e-6,
    "fs_trigonal_n3": 1e-6,
    "trigonal_limit_triple": 1e-6,
    "trigonal_limit_pair": 1e-6,
    "trigonal_limit_double": 1e-6,
    "addition_hyperelliptic": 1e-6,
    "addition_trigonal": 1e-6,
    "vanishing_order": 0.5,
    "prime_form_antisymmetry": 1e-9,
    "prime_form_hyperelliptic": 1e-6,
    "prime_form_trigonal": 1e-6,
    "prime_form_trigonal_variant": 1e-6,
    "fay_wp": 1e-5,
    "third_kind": 1e-6,
}

REFERENCES = {
    "quasi_periodicity": "sigma(u+l) = sigma(u) exp(L(u+l/2, l)) chi(l) on all lattice generators",
    "parity": "sigma(-u) = +-sigma(u), sign from the Schur leading term",
    "sigma_galois": "sigma(zeta_hat u) = zeta^(|Lambda|(r_(g-1)+1)) sigma(u)",
    "jacobi_inversion": "-sigma_natural1^(1)(u)/sigma_natural1(u) = x for u = w(P)",
    "jacobi_inversion_k2": "sigma_natural2^(i)/sigma_natural2 = (-1)^(3-i) mu_(2,i-1)",
    "fs_hyperelliptic_n2": "Frobenius-Stickelberger relation, n=2, sign eps_n",
    "fs_hyperelliptic_n3": "Frobenius-Stickelberger relation, n=3, sign eps_n",
    "fs_hyperelliptic_n4": "Frobenius-Stickelberger relation, n=4, sign eps_n",
    "fs_trigonal_n2": "trigonal Frobenius-Stickelberger relation = psi_2 varphi_2",
    "fs_trigonal_n3": "trigonal Frobenius-Stickelberger relation = psi_3 varphi_3",
    "trigonal_limit_triple": "three-point (3,4) limit, right side -(x-x1)(x-x2)(x1-x2)(...)",
    "trigonal_limit_pair": "two-point (3,4) limit, right side (x2-x1)^2",
    "trigonal_limit_double": "sigma_natural2(2u)/sigma_natural1(u)^4 = 3y^2",
    "addition_hyperelliptic": "sigma_natural2(u+v)sigma_natural2(u-v)/(sigma_natural1(u)sigma_natural1(v))^2 = x - x'",
    "addition_trigonal": "sigma(u-v)sigma_natural2(u+v)/(sigma_natural1(u)sigma_natural1(v))^2 = x - x'",
    "vanishing_order": "order of s -> sigma(w(P) + s e_g) at 0 equals N_1",
    "prime_form_antisymmetry": "E(P,Q) = -E(Q,P)",
    "prime_form_hyperelliptic": "cal-E(P,Q) = sigma_natural2(u-v)/sqrt(du_1)sqrt(dv_1)",
    "prime_form_trigonal": "cal-E(P,Q) = sigma(u-v)/sqrt(du_1)sqrt(dv_1)",
    "prime_form_trigonal_variant": "sigma(u+zeta v+zeta^2 v)/sqrt(-3) agrees with the direct form up to a unimodular constant",
    "fay_wp": "sigma(u+v)sigma(u-v)/(sigma(u)^2 sigma_natural2(v)^2) = (F - 2y1'y2')/(x1'-x2')^2 - sum wp_ij x1'^(i-1) x2'^(j-1)",
    "third_kind": "E(P,Q)/E(P,Q') = exp of the normalized third-kind integral",
}


@dataclass(frozen=True)
class IdentityEntry:
    identity_id: str
    reference: str
    samples: int
    max_rel_residual: float
    tolerance: float
    passed: bool
    seconds: float = 0.0
    note: str = ""


@dataclass
class IdentityReport:
    curve: dict
    seed: int
    tolerances: dict
    entries: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    def entry(self, identity_id: str) -> IdentityEntry:
        for e in self.entries:
            if e.identity_id == identity_id:
                return e
        raise KeyError(identity_id)

    def to_dict(self) -> dict:
        return {"curve": self.curve, "seed": self.seed, "tolerances": self.tolerances,
                "all_pass": self.all_pass, "entries": [asdict(e) for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def rel(a, b) -> float:
    return float(abs(a - b) / max(abs(b), 1e-300))


# -- sampling -----------------------------------------------------------------


class Context:
    """Shared evaluator, prime form and sampling helpers for one curve."""

    def __init__(self, ev: SigmaEvaluator):
        self.ev = ev
        self.curve = ev.curve
        self._pf = None
        self.exps = np.array(galois_exponents(self.curve)[0])
        self.zhat = self.curve.zeta ** self.exps

    @property
    def pf(self) -> PrimeForm:
        if self._pf is None:
            self._pf = PrimeForm(self.ev)
        return self._pf

    def points(self, rng, count, radius=1.2):
        """Lifted random points whose sigma_natural1 stays off the noise floor."""
        out = []
        ev = self.ev
        while len(out) < count:
            p = abel(self.curve, random_points(self.curve, 1, rng, radius=radius)[0])
            s1 = ev.natural(1, p.abel)
            if abs(s1) < 1e-8 * ev.magnitude(p.abel)[0]:
                continue
            out.append(p)
        return out

    def n1(self, u):
        return self.ev.natural(1, u)

    def n2(self, u):
        return self.ev.natural(2, u)


# -- Frobenius-Stickelberger ----------------------------------------------------


def fsh_sign(g: int, n: int) -> int:
    """The sign eps_n of the hyperelliptic Frobenius-Stickelberger relation in closed form."""
    if n <= g:
        return (-1) ** (g + n * (n + 1) // 2)
    return (-1) ** ((2 * n - g) * (g - 1) // 2)


def fs_sides(ev: SigmaEvaluator, lifted) -> tuple:
    """(sigma side, determinant side without sign) of the FS relation."""
    curve = ev.curve
    n = len(lifted)
    if n < 2:
        raise ValueError("need at least two points")
    us = [p.abel for p in lifted]
    pts = [p.point for p in lifted]
    lhs = ev.natural(n, sum(us))
    if family(curve) == "hyperelliptic":
        for i in range(n):
            for j in range(i + 1, n):
                lhs *= ev.natural(2, us[i] - us[j])
        for u in us:
            lhs /= ev.natural(1, u) ** n
        return lhs, fs_det(curve, pts)
    z = curve.zeta ** np.array(galois_exponents(curve)[0])
    for i in range(n):
        for j in range(i + 1, n):
            lhs *= ev.natural(2, us[i] + z * us[j]) * ev.natural(2, us[i] + z * z * us[j])
    for u in us:
        lhs /= ev.natural(1, u) ** (2 * n - 1)
    return lhs, fs_det(curve, pts) * varphi_det(pts)


def fs_relation_check(ev: SigmaEvaluator, lifted, floor: float = 1e-12) -> float:
    """Relative residual of the Frobenius-Stickelberger relation at the given points.

    Hyperelliptic curves carry the closed-form sign eps_n.  When the determinant
    side vanishes (coincident points) the absolute residual is returned.
    """
    lhs, det = fs_sides(ev, lifted)
    if family(ev.curve) == "hyperelliptic":
        det = fsh_sign(ev.curve.genus, len(lifted)) * det
    if abs(det) < floor:
        if abs(lhs) > 1e-6:
            raise DegenerateSample("determinant side vanishes but the sigma side does not")
        return float(abs(lhs - det))
    return rel(lhs, det)


# -- identities ---------------------------------------------------------------------


def _quasi(ctx, rng, n):
    ev, g = ctx.ev, ctx.curve.genus
    out = []
    for _ in range(n):
        u = 0.3 * (rng.normal(size=g) + 1j * rng.normal(size=g))
        for k in range(2 * g):
            l = np.zeros(2 * g, int)
            l[k] = 1
            ell = lattice_vector(ev.periods, l[:g], l[g:])
            lhs = ev.value(u + ell)
            rhs = ev.value(u) * ev.quasi_periodicity_factor(u, l[:g], l[g:])
            out.append(abs(lhs - rhs) / ev.magnitude(u + ell)[0])
    return out


def leading_parity(ev: SigmaEvaluator) -> int:
    degrees = {sum(e) % 2 for e in ev.leading.terms}
    if len(degrees) != 1:
        raise ValueError("leading term has mixed parity")
    return -1 if degrees.pop() else 1


def _parity(ctx, rng, n):
    ev, g = ctx.ev, ctx.curve.genus
    sign = leading_parity(ev)
    out = []
    for _ in range(n):
        u = 0.5 * (rng.normal(size=g) + 1j * rng.normal(size=g))
        out.append(abs(ev.value(-u) - sign * ev.value(u)) / ev.magnitude(u)[0])
    return out


def _galois(ctx, rng, n):
    ev, g = ctx.ev, ctx.curve.genus
    e = galois_exponents(ctx.curve)[1]
    factor = ctx.curve.zeta ** e
    out = []
    for _ in range(n):
        u = 0.5 * (rng.normal(size=g) + 1j * rng.normal(size=g))
        out.append(abs(ev.value(ctx.zhat * u) - factor * ev.value(u)) / ev.magnitude(u)[0])
    return out


def _jacobi(ctx, rng, n):
    ev = ctx.ev
    return [rel(-ev.natural_i(1, 1, p.abel) / ev.natural(1, p.abel), p.x)
            for p in ctx.points(rng, n)]


def _jacobi_k2(ctx, rng, n):
    ev = ctx.ev
    out = []
    for _ in range(n):
        P = ctx.points(rng, 2)
        u = P[0].abel + P[1].abel
        m = mu(ctx.curve, [p.point for p in P])
        base = ev.natural(2, u)
        for i in (1, 2):
            out.append(rel(ev.natural_i(2, i, u) / base, (-1) ** (3 - i) * m.mu_nk(i - 1)))
    return out


def _fs(npts):
    def run(ctx, rng, n):
        return [fs_relation_check(ctx.ev, ctx.points(rng, npts, radius=0.9)) for _ in range(n)]
    return run


def _lim_triple(ctx, rng, n):
    out = []
    for _ in range(n):
        P = ctx.points(rng, 3, radius=1.0)
        (u, v1, v2), Z = [p.abel for p in P], ctx.zhat
        (x, y), (x1, y1), (x2, y2) = [(p.x, p.y) for p in P]
        num = ctx.ev.natural(3, u + v1 + v2)
        for a in (1, 2):
            num *= ctx.n2(u + Z ** a * v1) * ctx.n2(u + Z ** a * v2) * ctx.n2(v1 + Z ** a * v2)
        lhs = num / (ctx.n1(u) * ctx.n1(v1) * ctx.n1(v2)) ** 5
        rhs = -(x - x1) * (x - x2) * (x1 - x2) * (y * (x1 - x2) - y1 * (x - x2) + y2 * (x - x1))
        out.append(rel(lhs, rhs))
    return out


def _lim_pair(ctx, rng, n):
    out = []
    Z = ctx.zhat
    for _ in range(n):
        P = ctx.points(rng, 2, radius=1.0)
        v1, v2 = P[0].abel, P[1].abel
        lhs = (ctx.n2(v1 + v2) * ctx.n2(v1 + Z * v2) * ctx.n2(v1 + Z * Z * v2)
               / (ctx.n1(v1) * ctx.n1(v2)) ** 3)
        out.append(rel(lhs, (P[1].x - P[0].x) ** 2))
    return out


def _lim_double(ctx, rng, n):
    out = []
    for p in ctx.points(rng, n, radius=1.0):
        out.append(rel(ctx.n2(2 * p.abel) / ctx.n1(p.abel) ** 4, 3 * p.y ** 2))
    return out


def _add_h(ctx, rng, n):
    out = []
    for _ in range(n):
        P, Q = ctx.points(rng, 2)
        u, v = P.abel, Q.abel
        lhs = ctx.n2(u + v) * ctx.n2(u - v) / (ctx.n1(u) * ctx.n1(v)) ** 2
        out.append(rel(lhs, P.x - Q.x))
    return out


def _add_t(ctx, rng, n):
    out = []
    for _ in range(n):
        P, Q = ctx.points(rng, 2)
        u, v = P.abel, Q.abel
        lhs = ctx.ev.value(u - v) * ctx.n2(u + v) / (ctx.n1(u) * ctx.n1(v)) ** 2
        out.append(rel(lhs, P.x - Q.x))
    return out


def _vanishing(ctx, rng, n):
    want = young_data(ctx.curve).n_k(1)
    return [float(abs(vanishing_order_probe(ctx.ev, p.abel)[0] - want))
            for p in ctx.points(rng, n)]


def _antisym(ctx, rng, n):
    out = []
    for _ in range(n):
        P, Q = ctx.points(rng, 2)
        a, b = ctx.pf.cal_E(P, Q).scalar, ctx.pf.cal_E(Q, P).scalar
        out.append(float(abs(a + b) / abs(a)))
    return out


def sigma_prime_form_ratios(ctx, rng, n):
    """Values of prime_form_sigma / prime_form_cE on n random pairs."""
    out = []
    for _ in range(n):
        P, Q = ctx.points(rng, 2)
        out.append(prime_form_sigma(ctx.ev, P, Q).scalar / ctx.pf.cal_E(P, Q).scalar)
    return np.array(out)


def _main(ctx, rng, n):
    return list(np.abs(sigma_prime_form_ratios(ctx, rng, n) - 1.0))


def variant_ratios(ctx, rng, n):
    out = []
    for _ in range(n):
        P, Q = ctx.points(rng, 2)
        out.append(prime_form_sigma_variant(ctx.ev, P, Q).scalar
                   / prime_form_sigma(ctx.ev, P, Q).scalar)
    return np.array(out)


def _variant(ctx, rng, n):
    """Spread of the ratio around its mean, plus the distance of |mean| from 1."""
    r = variant_ratios(ctx, rng, n)
    c = np.mean(r)
    return list(np.abs(r - c) / abs(c)) + [abs(abs(c) - 1.0)]


def fay_sides(ev: SigmaEvaluator, u, Pa: LiftedPoint, Pb: LiftedPoint):
    curve = ev.curve
    g = curve.genus
    a = curve.coeffs[::-1]
    v = Pa.abel + Pb.abel
    lhs = ev.value(u + v) * ev.value(u - v) / (ev.value(u) ** 2 * ev.natural(2, v) ** 2)
    x1, x2, y1, y2 = Pa.x, Pb.x, Pa.y, Pb.y
    F = sum((x1 * x2) ** k * (2 * a[2 * k] + a[2 * k + 1] * (x1 + x2)) for k in range(g + 1))
    W = ev.wp(u)
    rhs = (F - 2 * y1 * y2) / (x1 - x2) ** 2 - sum(
        W[i, j] * x1 ** i * x2 ** j for i in range(g) for j in range(g))
    return lhs, rhs


def _fay(ctx, rng, n):
    out = []
    g = ctx.curve.genus
    for _ in range(n):
        P = ctx.points(rng, g + 2)
        u = sum(p.abel for p in P[:g])
        out.append(rel(*fay_sides(ctx.ev, u, P[g], P[g + 1])))
    return out


def edge_distance(ctx, a, b, samples: int = 65) -> float:
    """Smallest distance from the segment [a, b] to the branch-point edges of the homology basis."""
    roots = ctx.curve.roots
    xs = a + (b - a) * np.linspace(0, 1, samples)
    best = np.inf
    for c in ctx.ev.periods.homology.cycles:
        p, q = roots[c.start], roots[c.end]
        d = q - p
        s = np.clip(((xs - p) * np.conj(d)).real / abs(d) ** 2, 0, 1)
        best = min(best, float(np.min(np.abs(xs - p - s * d))))
    return best


def nearby_point(ctx, Q: LiftedPoint, rng, step: float = 0.05, clear: float = 0.03):
    """A point close to Q, reached from Q by a short straight move in x.

    The move avoids the edges carrying the cycle integrals, so the pole pair
    (Q, Q') is not separated by an alpha or beta cycle.
    """
    for _ in range(200):
        x2 = Q.x + step * np.exp(2j * np.pi * rng.uniform())
        if edge_distance(ctx, Q.x, x2) < clear:
            continue
        try:
            return extend(ctx.curve, Q, x2)
        except PathThroughBranchPoint:
            continue
    raise DegenerateSample("no admissible neighbour of Q")


def _third(ctx, rng, n):
    out = []
    while len(out) < n:
        P, Q = ctx.points(rng, 2)
        if edge_distance(ctx, Q.x, Q.x) < 0.1:
            continue
        out.append(third_kind_ratio(ctx.pf, P, Q, nearby_point(ctx, Q, rng)))
    return out


def identity_table(curve: CurveSpec) -> dict:
    """identity id -> (runner, default sample count) for this curve family."""
    fam = family(curve)
    g = curve.genus
    table = {
        "quasi_periodicity": (_quasi, 3),
        "parity": (_parity, 5),
        "sigma_galois": (_galois, 5),
        "jacobi_inversion": (_jacobi, 6),
    }
    if g >= 3:
        table["jacobi_inversion_k2"] = (_jacobi_k2, 4)
    if fam == "hyperelliptic":
        for k in (2, 3, 4):
            table[f"fs_hyperelliptic_n{k}"] = (_fs(k), 3)
        table["addition_hyperelliptic"] = (_add_h, 4)
    else:
        table["fs_trigonal_n2"] = (_fs(2), 3)
        table["fs_trigonal_n3"] = (_fs(3), 3)
        table["trigonal_limit_triple"] = (_lim_triple, 3)
        table["trigonal_limit_pair"] = (_lim_pair, 3)
        table["trigonal_limit_double"] = (_lim_double, 3)
        table["addition_trigonal"] = (_add_t, 4)
    table["vanishing_order"] = (_vanishing, 2)
    table["prime_form_antisymmetry"] = (_antisym, 4)
    if fam == "hyperelliptic":
        table["prime_form_hyperelliptic"] = (_main, 6)
    else:
        table["prime_form_trigonal"] = (_main, 6)
        table["prime_form_trigonal_variant"] = (_variant, 4)
    if fam == "hyperelliptic" and g == 2:
        table["fay_wp"] = (_fay, 4)
    table["third_kind"] = (_third, 3)
    return table


def run_suite(curve: CurveSpec, seed: int = 1, tol: dict | None = None,
              samples: dict | None = None, only=None, ev: SigmaEvaluator | None = None
              ) -> IdentityReport:
    """Evaluate every identity in scope for the curve; failures become entries."""
    family(curve)
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(tol or {})
    ev = sigma_for(curve) if ev is None else ev
    ctx = Context(ev)
    report = IdentityReport(json.loads(curve.to_json()), seed, {})
    for idx, (name, (runner, count)) in enumerate(identity_table(curve).items()):
        if only is not None and name not in only:
            continue
        count = (samples or {}).get(name, count)
        limit = tolerances[name]
        report.tolerances[name] = limit
        rng = np.random.default_rng([seed, idx])
        start = time.perf_counter()
        try:
            res = runner(ctx, rng, count)
            worst = float(np.max(res))
            note = ""
        except (ArithmeticError, ValueError, RuntimeError, UnsupportedFamily) as exc:
            worst, note = float("inf"), f"{type(exc).__name__}: {exc}"
        report.entries.append(IdentityEntry(
            name, REFERENCES[name], count, worst, limit, bool(worst < limit),
            round(time.perf_counter() - start, 3), note))
    return report
