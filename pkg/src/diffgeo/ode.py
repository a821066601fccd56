"""Adaptive embedded Runge-Kutta integration.

A single explicit Dormand-Prince 5(4) pair drives every trajectory in the
library (Frenet reconstruction, geodesics, parallel transport).  The Butcher
table is written out as exact rationals so results are reproducible across
platforms.  Requested sample times are honoured by clamping steps onto them,
never by interpolation, so samples carry full integration accuracy.
"""

from dataclasses import dataclass, field

from .errors import MaxStepsExceeded, StepUnderflow

__all__ = ["OdeSpec", "OdeResult", "ode_solve"]

# Dormand-Prince 5(4), FSAL.  c_i, a_ij, 5th-order b, embedded 4th-order b.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_ERR = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


@dataclass(frozen=True)
class OdeSpec:
    """Step-control knobs for :func:`ode_solve`."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    min_step: float = 1e-14
    max_step: float = float("inf")
    max_steps: int = 100_000

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.min_step > self.max_step:
            raise ValueError("min_step exceeds max_step")


@dataclass
class OdeResult:
    """Sampled trajectory: ``ts[i]`` with state ``ys[i]`` (lists of tuples)."""

    ts: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    n_steps: int = 0

    @property
    def t_end(self):
        return self.ts[-1]

    @property
    def y_end(self):
        return self.ys[-1]

    def state_at(self, t):
        """State at a recorded sample time (exact match by index search)."""
        lo, hi = 0, len(self.ts) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.ts[mid] < t:
                lo = mid + 1
            else:
                hi = mid
        return self.ys[lo]


def _weighted_sum(y, ks, h, coeffs):
    n = len(y)
    out = list(y)
    for c, k in zip(coeffs, ks):
        if c == 0.0:
            continue
        ch = c * h
        for i in range(n):
            out[i] += ch * k[i]
    return out


def ode_solve(field_fn, y0, span, spec=OdeSpec(), t_eval=None, post_step=None):
    """Integrate ``y' = field_fn(t, y)`` over ``span=(t0, t1)``.

    Samples every accepted step plus each time in ``t_eval`` (steps are
    clamped to land on them exactly).  ``post_step`` may replace the state
    after each accepted step (used to re-orthonormalize frames); it receives
    ``(t, y)`` and returns the adjusted state.
    """
    t0, t1 = float(span[0]), float(span[1])
    if t1 == t0:
        raise ValueError("degenerate integration span")
    direction = 1.0 if t1 > t0 else -1.0

    checkpoints = [t1]
    if t_eval is not None:
        pts = sorted(set(float(t) for t in t_eval), reverse=(direction < 0))
        checkpoints = [p for p in pts if (p - t0) * direction > 0.0
                       and (t1 - p) * direction >= 0.0]
        if not checkpoints or checkpoints[-1] != t1:
            checkpoints.append(t1)

    y = [float(v) for v in y0]
    t = t0
    res = OdeResult()
    res.ts.append(t)
    res.ys.append(tuple(y))

    span_len = abs(t1 - t0)
    h = min(span_len / 16.0, spec.max_step)
    f_now = field_fn(t, tuple(y))

    ci = 0
    while True:
        target = checkpoints[ci]
        if (target - t) * direction <= 0.0:
            ci += 1
            if ci >= len(checkpoints):
                break
            continue
        if res.n_steps >= spec.max_steps:
            raise MaxStepsExceeded(
                f"ODE integration exceeded {spec.max_steps} steps at t={t!r}")

        h = min(h, spec.max_step)
        remaining = abs(target - t)
        clamped = h >= remaining
        h_step = remaining if clamped else h
        hs = h_step * direction

        ks = [f_now]
        for i in range(1, 7):
            yi = _weighted_sum(y, ks, hs, _A[i])
            ks.append(field_fn(t + _C[i] * hs, tuple(yi)))

        y_new = _weighted_sum(y, ks, hs, _B5)
        # FSAL: ks[6] is the derivative at (t + h, y_new)
        err = 0.0
        for i in range(len(y)):
            e = 0.0
            for c, k in zip(_ERR, ks):
                if c != 0.0:
                    e += c * k[i]
            e *= hs
            sc = spec.abs_tol + spec.rel_tol * max(abs(y[i]), abs(y_new[i]))
            q = e / sc
            err += q * q
        err = (err / len(y)) ** 0.5

        if err <= 1.0:
            t = target if clamped else t + hs
            y = y_new
            if post_step is not None:
                y = list(post_step(t, tuple(y)))
                f_now = field_fn(t, tuple(y))
            else:
                f_now = ks[6]
            res.n_steps += 1
            res.ts.append(t)
            res.ys.append(tuple(y))

        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = h_step * factor
        if h < spec.min_step:
            raise StepUnderflow(
                f"ODE step fell below min_step={spec.min_step!r} at t={t!r}")

    return res
