"""Adaptive Gauss quadrature in one and two dimensions.

Each panel is handled by a fixed 15-point Gauss-Legendre rule (225-point
tensor rule in 2D); a panel is accepted when splitting it changes the value
by less than its share of the tolerance, with the budget divided equally
between children.  Smooth integrands (the only kind in scope: arc lengths,
areas, curvature integrals) converge in a handful of panels.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MaxDepthExceeded

__all__ = ["QuadSpec", "quad_adaptive", "quad2d"]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)
_NODES = tuple(float(x) for x in _NODES)
_WEIGHTS = tuple(float(w) for w in _WEIGHTS)


@dataclass(frozen=True)
class QuadSpec:
    tol: float = 1e-10
    max_depth: int = 30

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


def _panel1d(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    acc = 0.0
    for x, w in zip(_NODES, _WEIGHTS):
        acc += w * f(mid + half * x)
    return acc * half


def quad_adaptive(f, interval, spec=QuadSpec()):
    """Integral of ``f`` over ``interval=(a, b)`` within ``spec.tol``."""
    a, b = float(interval[0]), float(interval[1])
    if a == b:
        return 0.0

    def recurse(lo, hi, coarse, tol, depth):
        mid = 0.5 * (lo + hi)
        left = _panel1d(f, lo, mid)
        right = _panel1d(f, mid, hi)
        refined = left + right
        if abs(refined - coarse) <= tol:
            return refined
        if depth >= spec.max_depth:
            raise MaxDepthExceeded(refined)
        return (recurse(lo, mid, left, 0.5 * tol, depth + 1)
                + recurse(mid, hi, right, 0.5 * tol, depth + 1))

    return recurse(a, b, _panel1d(f, a, b), spec.tol, 1)


def _panel2d(f, u0, u1, v0, v1):
    um, uh = 0.5 * (u0 + u1), 0.5 * (u1 - u0)
    vm, vh = 0.5 * (v0 + v1), 0.5 * (v1 - v0)
    acc = 0.0
    for xu, wu in zip(_NODES, _WEIGHTS):
        u = um + uh * xu
        row = 0.0
        for xv, wv in zip(_NODES, _WEIGHTS):
            row += wv * f(u, vm + vh * xv)
        acc += wu * row
    return acc * uh * vh


def quad2d(f, rect, spec=QuadSpec()):
    """Integral of ``f(u, v)`` over ``rect=(u0, u1, v0, v1)``."""
    u0, u1, v0, v1 = (float(x) for x in rect)
    if u0 == u1 or v0 == v1:
        return 0.0

    def recurse(r, coarse, tol, depth):
        a0, a1, b0, b1 = r
        am, bm = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
        quads = ((a0, am, b0, bm), (am, a1, b0, bm),
                 (a0, am, bm, b1), (am, a1, bm, b1))
        vals = [_panel2d(f, *q) for q in quads]
        refined = sum(vals)
        if abs(refined - coarse) <= tol:
            return refined
        if depth >= spec.max_depth:
            raise MaxDepthExceeded(refined)
        return sum(recurse(q, v, 0.25 * tol, depth + 1)
                   for q, v in zip(quads, vals))

    rect = (u0, u1, v0, v1)
    return recurse(rect, _panel2d(f, *rect), spec.tol, 1)
