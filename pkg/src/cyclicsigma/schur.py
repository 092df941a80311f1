"""Exact Schur polynomials in power-sum variables and the sigma leading term."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .curve import CurveSpec, young_data


@dataclass(frozen=True)
class WeightedPolynomial:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples to Fractions; ``weights`` gives the weight
    of each variable, used for homogeneity checks.
    """

    terms: dict = field(default_factory=dict)
    weights: tuple = ()

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @classmethod
    def constant(cls, value, weights):
        value = Fraction(value)
        return cls({(0,) * len(weights): value} if value else {}, tuple(weights))

    @classmethod
    def variable(cls, index, weights):
        exps = [0] * len(weights)
        exps[index] = 1
        return cls({tuple(exps): Fraction(1)}, tuple(weights))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
            if out[k] == 0:
                del out[k]
        return WeightedPolynomial(out, self.weights)

    def __neg__(self):
        return WeightedPolynomial({k: -v for k, v in self.terms.items()}, self.weights)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, WeightedPolynomial):
            c = Fraction(other)
            if c == 0:
                return WeightedPolynomial({}, self.weights)
            return WeightedPolynomial({k: v * c for k, v in self.terms.items()}, self.weights)
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return WeightedPolynomial({k: v for k, v in out.items() if v}, self.weights)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, WeightedPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def weight_of(self, exps) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def degrees(self) -> set:
        return {self.weight_of(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def evaluate(self, values):
        """Evaluate at numeric (or Fraction) values of the variables."""
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def sorted_terms(self):
        """Terms ordered by total degree, then exponents."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def lowest_degree_term(self):
        return self.sorted_terms()[0]

    def to_json(self) -> str:
        return json.dumps([{"exponents": list(k), "coeff": str(v)}
                           for k, v in self.sorted_terms()])

    @classmethod
    def from_json(cls, text, weights):
        data = json.loads(text)
        return cls({tuple(d["exponents"]): Fraction(d["coeff"]) for d in data}, tuple(weights))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(f"u{i + 1}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(exps) if e)
            parts.append(f"({coeff})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def power_sum_ring(n: int):
    """Weights of T_1 ... T_n (T_k has weight k)."""
    return tuple(range(1, n + 1))


def complete_homogeneous(n: int, power_sums=None, nvars: int | None = None) -> WeightedPolynomial:
    """h_n in the variables T_k.

    Evaluates the lower Hessenberg determinant with sub-diagonal -1 and entries
    k T_k, divided by n!, by expansion along its last column:
    n h_n = sum_k k T_k h_{n-k}.  ``power_sums`` may map k to a polynomial
    replacing T_k (missing keys mean T_k = 0).
    """
    return complete_homogeneous_table(n, power_sums, nvars)[n] if n >= 0 else \
        WeightedPolynomial.constant(0, _weights(power_sums, nvars, 0))


def _weights(power_sums, nvars, n):
    if power_sums is None:
        return power_sum_ring(max(nvars or 0, n, 1))
    any_poly = next(iter(power_sums.values()))
    return any_poly.weights


def complete_homogeneous_table(n: int, power_sums=None, nvars=None) -> list:
    weights = _weights(power_sums, nvars, n)
    if power_sums is None:
        power_sums = {k: WeightedPolynomial.variable(k - 1, weights) for k in range(1, len(weights) + 1)}
    table = [WeightedPolynomial.constant(1, weights)]
    for m in range(1, n + 1):
        acc = WeightedPolynomial.constant(0, weights)
        for k in range(1, m + 1):
            tk = power_sums.get(k)
            if tk is not None and not tk.is_zero():
                acc = acc + tk * table[m - k] * k
        table.append(acc * Fraction(1, m))
    return table


def determinant(matrix) -> WeightedPolynomial:
    """Leibniz expansion; the matrices here are at most 6 x 6."""
    size = len(matrix)
    total = None
    for perm in itertools.permutations(range(size)):
        sign = _perm_sign(perm)
        term = None
        for i, j in enumerate(perm):
            entry = matrix[i][j]
            if entry.is_zero():
                term = None
                break
            term = entry if term is None else term * entry
        else:
            term = term * sign
            total = term if total is None else total + term
    if total is None:
        return WeightedPolynomial.constant(0, matrix[0][0].weights)
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def jacobi_trudi_matrix(partition, g, table, weights):
    parts = list(partition) + [0] * (g - len(partition))
    zero = WeightedPolynomial.constant(0, weights)
    rows = []
    for i in range(g):
        row = []
        for j in range(g):
            idx = parts[i] + j - i
            row.append(table[idx] if 0 <= idx < len(table) else zero)
        rows.append(row)
    return rows


def schur_jacobi_trudi(partition, g: int, power_sums=None) -> WeightedPolynomial:
    """s_partition = det[h_{p_i + j - i}] of size g x g."""
    parts = [p for p in partition if p > 0]
    if len(parts) > g:
        raise ValueError("partition has more than g parts")
    top = (parts[0] if parts else 0) + g
    table = complete_homogeneous_table(top, power_sums, None if power_sums else top)
    return determinant(jacobi_trudi_matrix(parts, g, table, table[0].weights))


def sigma_leading_term(curve: CurveSpec) -> WeightedPolynomial:
    """Schur polynomial of the curve's diagram with T at the hook lengths set
    to u_1 ... u_g and every other T set to zero."""
    yd = young_data(curve)
    g = curve.genus
    weights = yd.hooks
    power_sums = {h: WeightedPolynomial.variable(i, weights) for i, h in enumerate(yd.hooks)}
    return schur_jacobi_trudi(yd.rows, g, power_sums)
