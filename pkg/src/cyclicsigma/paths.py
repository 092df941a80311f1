"""Routing in the x-plane and exact continuation of y along straight segments.

For a monic f with roots e_j, along a segment [p, q] that avoids every root the
branch of y = f(x)^(1/r) continued from y(p) is

    y(x) = y(p) * prod_j ((x - e_j) / (p - e_j)) ** (1/r)

with principal powers: seen from e_j the segment subtends an angle below pi,
so each ratio stays off the negative real axis.
"""

from __future__ import annotations

import numpy as np

from .errors import PathThroughBranchPoint


def continue_y(roots, r, x_from, y_from, x_to):
    """Continue the branch with value ``y_from`` at ``x_from`` to ``x_to``.

    ``x_to`` may be an array of points on the straight segment starting at
    ``x_from``.
    """
    x_to = np.asarray(x_to, dtype=complex)
    ratio = np.ones_like(x_to)
    for e in roots:
        ratio = ratio * ((x_to - e) / (x_from - e)) ** (1.0 / r)
    return y_from * ratio


def continue_along(roots, r, vertices, y_start):
    """Values of y at each vertex of a polyline, starting from ``y_start``."""
    ys = [complex(y_start)]
    for a, b in zip(vertices[:-1], vertices[1:]):
        ys.append(complex(continue_y(roots, r, a, ys[-1], b)))
    return np.array(ys)


def min_separation(roots):
    roots = np.asarray(roots)
    if len(roots) < 2:
        return 1.0
    d = np.abs(roots[:, None] - roots[None, :])
    d[np.diag_indices(len(roots))] = np.inf
    return float(d.min())


def anchor_point(roots):
    """Real base point to the right of every root."""
    return float(2.0 * np.max(np.abs(roots)) + 1.0)


def clearance_radius(roots):
    return 0.25 * min(min_separation(roots), 1.0)


def _closest(p, q, b):
    d = q - p
    t = ((b - p) * np.conj(d)).real / abs(d) ** 2
    t = min(max(t, 0.0), 1.0)
    return t, abs(p + t * d - b)


def route(start, end, roots, clearance=None, depth=0):
    """Polyline from ``start`` to ``end`` keeping ``clearance`` from every root.

    Only the final vertex may come closer to a root than the clearance; it is
    then approached radially so the segment never passes the root.
    """
    if clearance is None:
        clearance = clearance_radius(roots)
    start, end = complex(start), complex(end)
    if depth > 16:
        raise PathThroughBranchPoint("router exceeded detour depth")
    if depth == 0:
        near = [b for b in roots if abs(end - b) < clearance]
        if near:
            b = near[0]
            gap = abs(end - b)
            if gap == 0:
                raise PathThroughBranchPoint("endpoint is a branch point")
            w = b + 2.0 * clearance * (end - b) / gap
            return route(start, w, roots, clearance, depth + 1) + [end]
    if start == end:
        return [start]
    for b in roots:
        t, dist = _closest(start, end, b)
        if dist < clearance and 0.0 < t < 1.0:
            d = (end - start) / abs(end - start)
            cross = (np.conj(d) * (b - start)).imag
            side = -1.0 if cross > 0 else 1.0
            w = b + 2.0 * clearance * side * 1j * d
            first = route(start, w, roots, clearance, depth + 1)
            return first + route(w, end, roots, clearance, depth + 1)[1:]
    return [start, end]
