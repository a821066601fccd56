"""Piecewise quintic Hermite interpolation over jets.

Trajectory samples (value, first and second derivative at each knot) become
a C^2 evaluator whose jets are exact derivatives of the interpolant.  Used
to re-feed integrated geodesics and reconstructed curves through the same
differential pipeline as closed-form shapes: the interpolant is a genuine
curve, so residual checks on it are not satisfied by construction.
"""

from bisect import bisect_right

__all__ = ["HermiteChannel"]


class HermiteChannel:
    """One scalar channel s -> p(s) through knots with (y, y', y'')."""

    def __init__(self, knots, values, deriv1, deriv2):
        if len(knots) < 2:
            raise ValueError("need at least two knots")
        self.knots = [float(s) for s in knots]
        self.coeffs = []
        for i in range(len(knots) - 1):
            h = self.knots[i + 1] - self.knots[i]
            y0, d0, a0 = values[i], deriv1[i], deriv2[i]
            y1, d1, a1 = values[i + 1], deriv1[i + 1], deriv2[i + 1]
            dh, ah = d0 * h, a0 * h * h
            dh1, ah1 = d1 * h, a1 * h * h
            self.coeffs.append((
                y0,
                dh,
                0.5 * ah,
                -10.0 * y0 - 6.0 * dh - 1.5 * ah + 10.0 * y1 - 4.0 * dh1 + 0.5 * ah1,
                15.0 * y0 + 8.0 * dh + 1.5 * ah - 15.0 * y1 + 7.0 * dh1 - ah1,
                -6.0 * y0 - 3.0 * dh - 0.5 * ah + 6.0 * y1 - 3.0 * dh1 + 0.5 * ah1,
            ))

    def __call__(self, s):
        """Evaluate at a float or jet ``s`` (jets flow through the polynomial)."""
        s0 = s.value if hasattr(s, "value") else float(s)
        i = bisect_right(self.knots, s0) - 1
        i = min(max(i, 0), len(self.coeffs) - 1)
        h = self.knots[i + 1] - self.knots[i]
        x = (s - self.knots[i]) * (1.0 / h)
        k = self.coeffs[i]
        out = k[5]
        for c in (k[4], k[3], k[2], k[1], k[0]):
            out = out * x + c
        return out
