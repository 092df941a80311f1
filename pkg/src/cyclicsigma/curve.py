"""Cyclic (r, s) curves y^r = f(x) and their combinatorial invariants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from . import paths
from .errors import (BadArity, BranchPoint, CurveError, NotCoprime,
                     RootFindingFailure, SingularCurve, UnsupportedR)


@dataclass(frozen=True)
class CurveSpec:
    """The curve y^r = x^s + lam[0] x^(s-1) + ... + lam[s-1].

    Hashable and immutable; root data and the anchor are computed lazily.
    """

    r: int
    s: int
    lam: tuple = field(default_factory=tuple)

    @property
    def genus(self) -> int:
        return (self.r - 1) * (self.s - 1) // 2

    @property
    def coeffs(self) -> np.ndarray:
        """Coefficients of f, highest degree first."""
        return np.array((1.0,) + tuple(self.lam), dtype=complex)

    @property
    def zeta(self) -> complex:
        return np.exp(2j * np.pi / self.r)

    @property
    def is_hyperelliptic(self) -> bool:
        return self.r == 2 and self.s % 2 == 1

    @property
    def is_trigonal_34(self) -> bool:
        return self.r == 3 and self.s == 4

    def f(self, x):
        return np.polyval(self.coeffs, x)

    def df(self, x):
        return np.polyval(np.polyder(self.coeffs), x)

    @cached_property
    def roots(self) -> np.ndarray:
        return _polished_roots(self.coeffs)

    @cached_property
    def anchor(self) -> float:
        return paths.anchor_point(self.roots)

    @cached_property
    def anchor_y(self) -> complex:
        """Principal r-th root of f at the anchor: sheet 0."""
        return complex(self.f(self.anchor)) ** (1.0 / self.r)

    @cached_property
    def clearance(self) -> float:
        return paths.clearance_radius(self.roots)

    def to_json(self) -> str:
        return json.dumps({"r": self.r, "s": self.s,
                           "lambda": [[float(np.real(v)), float(np.imag(v))] for v in self.lam]})


def _polished_roots(coeffs, iterations=4):
    roots = np.roots(coeffs)
    if not np.all(np.isfinite(roots)):
        raise RootFindingFailure("non-finite roots of f")
    der = np.polyder(coeffs)
    for _ in range(iterations):
        step = np.polyval(coeffs, roots) / np.polyval(der, roots)
        roots = roots - step
    return roots


def build_curve(r: int, s: int, lam, tol: float = 1e-10) -> CurveSpec:
    """Validate and build a curve. ``lam`` lists lambda_1 ... lambda_s."""
    r, s = int(r), int(s)
    if r < 2 or s < 2 or r >= s:
        raise CurveError(f"need 2 <= r < s, got ({r}, {s})")
    if gcd(r, s) != 1:
        raise NotCoprime(f"gcd({r}, {s}) = {gcd(r, s)}")
    lam = tuple(complex(v) for v in lam)
    if len(lam) != s:
        raise BadArity(f"expected {s} coefficients, got {len(lam)}")
    curve = CurveSpec(r, s, lam)
    roots = curve.roots
    scale = max(1.0, float(np.max(np.abs(roots))))
    if paths.min_separation(roots) < np.sqrt(tol) * scale:
        raise SingularCurve("f has (numerically) repeated roots")
    if abs(discriminant(curve)) < tol:
        raise SingularCurve("discriminant of f below tolerance")
    return curve


def discriminant(curve: CurveSpec) -> complex:
    e = curve.roots
    d = 1.0 + 0j
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            d *= (e[i] - e[j]) ** 2
    return d


def load_curve(source) -> CurveSpec:
    """Build a curve from a JSON string, a dict or a path to a JSON file."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text) as fh:
                data = json.load(fh)
    lam = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
           for v in data["lambda"]]
    return build_curve(data["r"], data["s"], lam)


def random_curve(r: int, s: int, seed: int, radius: float = 1.0) -> CurveSpec:
    """Seeded smooth curve with |lambda_j| <= radius."""
    rng = np.random.default_rng(seed)
    while True:
        mod = radius * np.sqrt(rng.uniform(0, 1, s))
        lam = mod * np.exp(2j * np.pi * rng.uniform(0, 1, s))
        try:
            curve = build_curve(r, s, lam)
        except SingularCurve:
            continue
        if paths.min_separation(curve.roots) > 0.15:
            return curve


# -- monomial basis and Young diagram ------------------------------------


@dataclass(frozen=True)
class Monomial:
    n: int
    sx: int
    ry: int
    order: int

    def __call__(self, x, y):
        return x ** self.sx * y ** self.ry


@dataclass(frozen=True)
class MonomialBasis:
    entries: tuple

    def __getitem__(self, n):
        return self.entries[n]

    def __len__(self):
        return len(self.entries)

    @property
    def orders(self):
        return [m.order for m in self.entries]

    def evaluate(self, x, y, count=None):
        """Array of phi_0 ... phi_{count-1} at (x, y), stacked on axis 0."""
        count = len(self.entries) if count is None else count
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return np.stack([self.entries[n](x, y) for n in range(count)])


def monomial_basis(curve: CurveSpec, upto: int | None = None) -> MonomialBasis:
    """phi_n = x^a y^b (b < r) sorted by pole order N(n) = a r + b s at infinity."""
    r, s = curve.r, curve.s
    upto = max(curve.genus, 0) if upto is None else upto
    bound = r * s + r * (upto + 1) + s * r
    pairs = []
    for b in range(r):
        a = 0
        while a * r + b * s <= bound:
            pairs.append((a * r + b * s, a, b))
            a += 1
    pairs.sort()
    if len(pairs) < upto + 1:
        raise ValueError("monomial enumeration bound too small")
    return MonomialBasis(tuple(Monomial(n, a, b, order)
                               for n, (order, a, b) in enumerate(pairs[:upto + 1])))


def gap_sequence(curve: CurveSpec) -> list:
    g = curve.genus
    orders = set(monomial_basis(curve, 2 * g).orders)
    return [k for k in range(1, 2 * g) if k not in orders]


def frobenius(partition) -> tuple:
    """Frobenius characteristics (arms; legs) read from the diagonal outwards,
    arms increasing."""
    parts = [p for p in partition if p > 0]
    conj = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    rank = sum(1 for i, p in enumerate(parts) if p > i)
    arms = [parts[i] - i - 1 for i in range(rank)]
    legs = [conj[i] - i - 1 for i in range(rank)]
    return tuple(reversed(arms)), tuple(reversed(legs))


@dataclass(frozen=True)
class YoungDiagramData:
    genus: int
    rows: tuple
    hooks: tuple
    truncations: tuple
    frobenius: tuple
    sizes: tuple
    natural: tuple

    @property
    def size(self) -> int:
        return sum(self.rows)

    def natural_k(self, k: int) -> tuple:
        """The multi-index natural_k (empty for k >= g)."""
        return self.natural[k] if k < self.genus else ()

    def natural_ki(self, k: int, i: int) -> tuple:
        """natural_k with k+1 replaced by i (1 <= i <= k)."""
        base = [j for j in self.natural_k(k) if j != k + 1]
        return tuple(sorted(base + [i]))

    def n_k(self, k: int) -> int:
        return self.sizes[k] if k < self.genus else 0


def young_data(curve: CurveSpec) -> YoungDiagramData:
    g = curve.genus
    orders = monomial_basis(curve, g).orders
    rows = tuple(g - orders[i - 1] + (i - 1) for i in range(1, g + 1))
    hooks = tuple(rows[i - 1] + g - i for i in range(1, g + 1))
    by_hook = {h: i + 1 for i, h in enumerate(hooks)}
    truncs, frobs, sizes, natural = [], [], [], []
    for k in range(g):
        part = rows[k:]
        arms, legs = frobenius(part)
        truncs.append(part)
        frobs.append((arms, legs))
        sizes.append(sum(part))
        natural.append(tuple(sorted(by_hook[a + b + 1] for a, b in zip(arms, legs))))
    return YoungDiagramData(g, rows, hooks, tuple(truncs), tuple(frobs),
                            tuple(sizes), tuple(natural))


def natural_hyperelliptic(g: int, k: int) -> tuple:
    """Closed form of natural_k for y^2 = f(x) of degree 2g+1."""
    if k >= g:
        return ()
    top = g if (g - k) % 2 == 1 else g - 1
    return tuple(sorted(range(top, k, -2)))


def galois_exponents(curve: CurveSpec) -> tuple:
    """Exponents e_n with u_n -> zeta^e_n u_n under (x, y) -> (x, zeta y),
    together with the exponent of sigma."""
    basis = monomial_basis(curve, curve.genus)
    g, r = curve.genus, curve.r
    exps = tuple((basis[n - 1].ry + 1) % r for n in range(1, g + 1))
    size = young_data(curve).size
    return exps, (size * (basis[g - 1].ry + 1)) % r


# -- points --------------------------------------------------------------


@dataclass(frozen=True)
class AffinePoint:
    x: complex
    y: complex
    sheet: int


def base_branch(curve: CurveSpec, x):
    """Value at x of the sheet-0 branch continued from the anchor."""
    verts = paths.route(curve.anchor, complex(x), curve.roots, curve.clearance)
    return paths.continue_along(curve.roots, curve.r, verts, curve.anchor_y)[-1]


def lift_points(curve: CurveSpec, x, tol: float = 1e-12) -> list:
    """The r points over x, sheet j carrying zeta^j times the sheet-0 value."""
    x = complex(x)
    scale = 1.0 + abs(x) ** curve.s
    if abs(curve.f(x)) < tol * scale or np.min(np.abs(curve.roots - x)) < tol:
        raise BranchPoint(f"x={x} is a branch point")
    y0 = base_branch(curve, x)
    return [AffinePoint(x, complex(y0 * curve.zeta ** j), j) for j in range(curve.r)]


def locate(curve: CurveSpec, x, y) -> AffinePoint:
    """Attach the sheet label to a point (x, y) of the curve."""
    lifts = lift_points(curve, x)
    dist = [abs(p.y - y) for p in lifts]
    j = int(np.argmin(dist))
    if dist[j] > 1e-6 * (1.0 + abs(y)):
        raise ValueError(f"({x}, {y}) is not on the curve")
    return lifts[j]


def involution_divisor(curve: CurveSpec, p: AffinePoint) -> list:
    """Divisor whose Abel image is minus that of p."""
    if curve.r == 2:
        if p.y == 0:
            return [p]
        return [AffinePoint(p.x, -p.y, (p.sheet + 1) % 2)]
    if curve.r == 3:
        z = curve.zeta
        return [AffinePoint(p.x, p.y * z, (p.sheet + 1) % 3),
                AffinePoint(p.x, p.y * z * z, (p.sheet + 2) % 3)]
    raise UnsupportedR(f"r={curve.r}")


def random_points(curve: CurveSpec, count: int, rng, radius: float = 1.5,
                  margin: float = 0.1) -> list:
    """Random finite points with x uniform in a disc, kept away from roots."""
    pts = []
    while len(pts) < count:
        x = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if np.min(np.abs(curve.roots - x)) < margin:
            continue
        lifts = lift_points(curve, x)
        pts.append(lifts[int(rng.integers(curve.r))])
    return pts
