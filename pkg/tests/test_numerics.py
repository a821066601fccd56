"""ODE integrator, adaptive quadrature and root finding."""

import math
import random

import numpy as np
import pytest

from diffgeo.errors import (MaxDepthExceeded, MaxStepsExceeded, NoConvergence,
                            StepUnderflow)
from diffgeo.ode import OdeSpec, ode_solve
from diffgeo.quadrature import QuadSpec, quad2d, quad_adaptive
from diffgeo.roots import root_find


class TestOde:
    def test_exponential(self):
        res = ode_solve(lambda t, y: (y[0],), (1.0,), (0.0, 1.0))
        assert abs(res.y_end[0] - math.e) <= 1e-9

    def test_constant_field(self):
        res = ode_solve(lambda t, y: (0.0, 0.0), (2.0, -3.0), (0.0, 5.0))
        assert res.y_end == (2.0, -3.0)

    def test_harmonic_oscillator_full_period(self):
        res = ode_solve(lambda t, y: (y[1], -y[0]), (1.0, 0.0),
                        (0.0, 2.0 * math.pi))
        assert abs(res.y_end[0] - 1.0) <= 1e-8
        assert abs(res.y_end[1]) <= 1e-8

    def test_linear_system_matches_matrix_exponential(self):
        def expm(M):
            # Taylor series; fine for the small norms used here
            out = np.eye(M.shape[0])
            term = np.eye(M.shape[0])
            for k in range(1, 40):
                term = term @ M / k
                out = out + term
            return out

        rng = random.Random(42)
        spec = OdeSpec(abs_tol=1e-10, rel_tol=1e-10)
        for _ in range(5):
            A = np.array([[rng.uniform(-1, 1) for _ in range(3)]
                          for _ in range(3)])
            y0 = np.array([rng.uniform(-1, 1) for _ in range(3)])

            def field(t, y, A=A):
                return tuple(A @ np.asarray(y))

            res = ode_solve(field, tuple(y0), (0.0, 1.5), spec)
            want = expm(1.5 * A) @ y0
            err = max(abs(a - b) for a, b in zip(res.y_end, want))
            bound = 10.0 * (spec.abs_tol
                            + spec.rel_tol * float(np.linalg.norm(want)))
            assert err <= bound

    def test_eval_points_hit_exactly(self):
        grid = [0.1, 0.25, 0.777, 1.0]
        res = ode_solve(lambda t, y: (y[0],), (1.0,), (0.0, 1.0), t_eval=grid)
        for g in grid:
            assert g in res.ts
            assert abs(res.state_at(g)[0] - math.exp(g)) <= 1e-9

    def test_backward_integration(self):
        res = ode_solve(lambda t, y: (y[0],), (math.e,), (1.0, 0.0))
        assert abs(res.y_end[0] - 1.0) <= 1e-9

    def test_max_steps_exceeded(self):
        spec = OdeSpec(max_steps=5)
        with pytest.raises(MaxStepsExceeded):
            ode_solve(lambda t, y: (math.cos(40 * t) * 40,), (0.0,),
                      (0.0, 10.0), spec)

    def test_step_underflow(self):
        spec = OdeSpec(min_step=1e-3)
        with pytest.raises(StepUnderflow):
            # steep transition needs steps below the floor
            ode_solve(lambda t, y: (1.0 / (1e-8 + abs(t - 0.5)),), (0.0,),
                      (0.0, 1.0), spec)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            OdeSpec(abs_tol=0.0)
        with pytest.raises(ValueError):
            OdeSpec(min_step=1.0, max_step=0.5)

    def test_post_step_hook_applied(self):
        def renorm(t, y):
            n = math.hypot(y[0], y[1])
            return (y[0] / n, y[1] / n)

        res = ode_solve(lambda t, y: (-y[1], y[0]), (1.0, 0.0),
                        (0.0, 50.0), post_step=renorm)
        assert abs(math.hypot(*res.y_end) - 1.0) <= 1e-15


class TestHermiteInterpolation:
    def test_quintic_reproduced_exactly(self):
        from diffgeo.interpolate import HermiteChannel
        from diffgeo.jets import Jet1

        # p(x) = 1.2 x^5 - 0.7 x^4 + 0.4 x^3 - 2 x + 1 and its derivatives
        def p(x):
            return ((1.2 * x - 0.7) * x + 0.4) * x ** 3 - 2.0 * x + 1.0

        def d1(x):
            return 6.0 * x ** 4 - 2.8 * x ** 3 + 1.2 * x ** 2 - 2.0

        def d2(x):
            return 24.0 * x ** 3 - 8.4 * x ** 2 + 2.4 * x

        knots = [0.0, 0.7, 1.3, 2.0]
        chan = HermiteChannel(knots, [p(x) for x in knots],
                              [d1(x) for x in knots], [d2(x) for x in knots])
        for x in (0.11, 0.69, 0.95, 1.77):
            assert abs(chan(x) - p(x)) <= 1e-12
            jet = chan(Jet1.variable(x))
            assert abs(jet.c[1] - d1(x)) <= 1e-11
            assert abs(jet.c[2] - d2(x)) <= 1e-10


class TestQuadrature:
    def test_sine_hump(self):
        assert abs(quad_adaptive(math.sin, (0.0, math.pi)) - 2.0) <= 1e-10

    def test_unit_square(self):
        assert abs(quad2d(lambda u, v: 1.0, (0, 1, 0, 1)) - 1.0) <= 1e-13

    def test_sphere_area_element(self):
        val = quad2d(lambda u, v: 4.0 * math.cos(v),
                     (0.0, 2 * math.pi, -math.pi / 2, math.pi / 2))
        assert abs(val - 16.0 * math.pi) <= 1e-8

    def test_polynomial_exactness(self):
        # 15-point Gauss integrates degree <= 29 exactly per panel
        rng = random.Random(7)
        for _ in range(5):
            coeffs = [rng.uniform(-1, 1) for _ in range(12)]

            def poly(x):
                acc = 0.0
                for c in reversed(coeffs):
                    acc = acc * x + c
                return acc

            exact = sum(c / (k + 1) for k, c in enumerate(coeffs))
            assert abs(quad_adaptive(poly, (0.0, 1.0)) - exact) <= 1e-13

    def test_oscillatory_needs_subdivision(self):
        val = quad_adaptive(lambda x: math.sin(40.0 * x) ** 2, (0.0, math.pi),
                            QuadSpec(tol=1e-12))
        assert abs(val - math.pi / 2) <= 1e-10

    def test_max_depth_carries_best_estimate(self):
        spec = QuadSpec(tol=1e-300, max_depth=3)
        with pytest.raises(MaxDepthExceeded) as exc:
            quad_adaptive(lambda x: math.exp(x) * math.sin(3 * x), (0.0, 2.0),
                          spec)
        assert exc.value.best is not None

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadSpec(tol=-1.0)
        with pytest.raises(ValueError):
            QuadSpec(max_depth=0)

    def test_empty_intervals(self):
        assert quad_adaptive(math.sin, (1.0, 1.0)) == 0.0
        assert quad2d(lambda u, v: 1.0, (0, 0, 0, 1)) == 0.0


class TestRootFind:
    def test_sqrt_two(self):
        x = root_find(lambda x: x * x - 2.0, (1.0, 2.0), tol=1e-9)
        assert abs(x - math.sqrt(2.0)) <= 1e-9

    def test_identity_root(self):
        assert abs(root_find(lambda x: x, (-1.0, 1.0), tol=1e-14)) <= 1e-13

    def test_seed_only_secant(self):
        x = root_find(lambda x: math.cos(x) - x, 0.5, tol=1e-12)
        assert abs(math.cos(x) - x) <= 1e-12

    def test_bisection_rescues_wild_secant(self):
        # secant steps overshoot on this one; the bracket must save it
        x = root_find(lambda x: math.tanh(50.0 * (x - 0.3)), (0.0, 1.0),
                      tol=1e-10)
        assert abs(x - 0.3) <= 1e-6

    def test_no_convergence(self):
        with pytest.raises(NoConvergence) as exc:
            root_find(lambda x: 1.0 + x * x, 0.0, tol=1e-12, max_iter=20)
        assert exc.value.best is not None
