"""Independent reference computations used by several test modules."""

from fractions import Fraction
from math import factorial

import numpy as np


def weierstrass_sigma_coefficients(max_weight: int):
    """a[m, n] of the classical recursion for sigma(u; g2, g3).

    sigma = sum a_{m,n} (g2/2)^m (2 g3)^n u^(4m+6n+1) / (4m+6n+1)!
    """
    a = {(0, 0): Fraction(1)}

    def get(m, n):
        return a.get((m, n), Fraction(0)) if m >= 0 and n >= 0 else Fraction(0)

    # fill by increasing weight 4m + 6n
    for w in range(2, max_weight + 1, 2):
        for n in range(0, w // 6 + 1):
            if (w - 6 * n) % 4:
                continue
            m = (w - 6 * n) // 4
            a[(m, n)] = (3 * (m + 1) * get(m + 1, n - 1)
                         + Fraction(16, 3) * (n + 1) * get(m - 2, n + 1)
                         - Fraction(1, 3) * (2 * m + 3 * n - 1) * (4 * m + 6 * n - 1) * get(m - 1, n))
    return a


def weierstrass_sigma(u, g2, g3, max_weight: int = 80):
    a = weierstrass_sigma_coefficients(max_weight)
    total = 0j
    for (m, n), c in a.items():
        k = 4 * m + 6 * n + 1
        total += float(c) * (g2 / 2) ** m * (2 * g3) ** n * u ** k / factorial(k)
    return total


def central_difference(f, x, i, h=1e-4):
    """Fourth-order central difference of f along coordinate i."""
    e = np.zeros(len(x), dtype=complex)
    e[i] = h
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h)
