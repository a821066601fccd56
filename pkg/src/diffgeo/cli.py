"""Command-line front-end.

Subcommands: eval, verify, geodesic, transport, gauss-bonnet, reconstruct.
Shapes come from the catalog (--shape name --param k=v) or definition files
(--file path.pc / .ps).  Reports go to stdout; --json / --csv write
deterministic artifacts (see diffgeo.report).  Exit codes: 2 argument
errors, 3 evaluation errors, 4 verification failure, 5 geodesic solver
errors.
"""

import argparse
import math
import os
import random
import sys
import time

from . import catalog, report
from .curves import (ParametricCurve, classify_curve, frenet,
                     frenet_residuals, reconstruct_from_kappa_tau)
from .errors import DiffGeoError, NonOrthogonalPatch, UmbilicPoint
from .expr import eval_scalar, load_definition, parse_text
from .ode import OdeSpec
from .quadrature import QuadSpec
from .surfaces import (ParametricSurface, curvatures, forms, riemann_R1212,
                       form_identity_residual, gauss_weingarten_residuals,
                       codazzi_compatibility_residuals)
from .surfacecurves import (BoundaryLoop, SurfaceCurve,
                            asymptotic_directions, bonnet_torsion_check,
                            curvature_split, gauss_bonnet_global,
                            gauss_bonnet_local, geodesic_bvp, geodesic_ivp,
                            geodesic_torsion, geodesic_torsion_principal,
                            kappa_n_quotient, liouville_check,
                            parallel_transport, principal_direction_field,
                            _total_curvature_rect)
from .vectors import Vec3

_EXIT_EVAL = 3
_EXIT_SUITE = 4
_EXIT_GEODESIC = 5


def _default_tol():
    env = os.environ.get("DIFFGEO_TOL")
    return float(env) if env else 1e-10


def _parse_params(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise argparse.ArgumentTypeError(
                f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(eval_scalar(parse_text(v.strip()), {}))
        except DiffGeoError:
            out[k.strip()] = v.strip()  # expression-valued (monge f=...)
    return out


def _parse_point(text):
    """'u=0.3,v=0.4' or '0.3,0.4' or 't=1.2' -> tuple of floats."""
    parts = [p.strip() for p in text.split(",")]
    vals = []
    for p in parts:
        if "=" in p:
            p = p.split("=", 1)[1]
        vals.append(float(eval_scalar(parse_text(p), {})))
    return tuple(vals)


def _load_shape(args):
    """Returns (shape, kind, descriptor dict)."""
    if getattr(args, "shape", None):
        params = _parse_params(getattr(args, "param", None))
        ent = catalog.entry(args.shape)
        shape = catalog.make(args.shape, **params)
        desc = {"source": "catalog", "name": args.shape,
                "params": {k: params.get(k, ent.params[k])
                           for k in sorted(ent.params)}}
        return shape, ent.kind, desc
    if getattr(args, "file", None):
        with open(args.file) as fh:
            definition = load_definition(fh.read())
        desc = {"source": "file", "path": os.path.basename(args.file),
                "name": definition.name}
        if definition.kind == "curve":
            (pname,) = definition.params
            return (ParametricCurve(
                lambda t: definition.eval(t, check_domain=False),
                definition.params[pname]), "curve", desc)
        if definition.kind == "surface":
            pnames = list(definition.params)
            dom = definition.params[pnames[0]] + definition.params[pnames[1]]
            return (ParametricSurface(
                lambda u, v: definition.eval(u, v, check_domain=False),
                dom), "surface", desc)
        raise DiffGeoError("definition file must declare a curve or surface")
    raise DiffGeoError("one of --shape or --file is required")


def _sample_rect(args_shape_name, shape):
    if args_shape_name:
        ent = catalog.entry(args_shape_name)
        if ent.sample_domain is not None:
            return ent.sample_domain
    d = shape.domain
    if len(d) == 4:
        su, sv = 0.02 * (d[1] - d[0]), 0.02 * (d[3] - d[2])
        return (d[0] + su, d[1] - su, d[2] + sv, d[3] - sv)
    s = 0.02 * (d[1] - d[0])
    return (d[0] + s, d[1] - s)


# --------------------------------------------------------------------------
# eval
# --------------------------------------------------------------------------

_CURVE_QUANTITIES = ("kappa", "tau", "frenet", "class")
_SURFACE_QUANTITIES = ("K", "H", "kappa1", "kappa2", "curvatures", "forms",
                       "shape-class", "asymptotic", "principal")


def _vec(v):
    return [v.x, v.y, v.z]


def _eval_curve_quantity(shape, t, q):
    if q == "class":
        return classify_curve(shape).kind
    fd = frenet(shape, t)
    if q == "kappa":
        return fd.kappa
    if q == "tau":
        return fd.tau
    if q == "frenet":
        return {"T": _vec(fd.T), "N": _vec(fd.N), "B": _vec(fd.B),
                "kappa": fd.kappa, "tau": fd.tau,
                "darboux": _vec(fd.darboux)}
    raise DiffGeoError(f"unknown curve quantity {q!r}; "
                       f"choose from {_CURVE_QUANTITIES}")


def _eval_surface_quantity(shape, u, v, q):
    if q in ("K", "H", "kappa1", "kappa2", "curvatures", "shape-class"):
        cd = curvatures(shape, u, v)
        if q == "shape-class":
            return cd.shape
        if q == "curvatures":
            out = {"K": cd.K, "H": cd.H, "kappa1": cd.kappa1,
                   "kappa2": cd.kappa2, "shape": cd.shape,
                   "umbilic": cd.is_umbilic}
            if cd.dir1_uv is not None:
                out["dir1"] = list(cd.dir1_uv)
                out["dir2"] = list(cd.dir2_uv)
            return out
        return getattr(cd, {"K": "K", "H": "H", "kappa1": "kappa1",
                            "kappa2": "kappa2"}[q])
    if q == "forms":
        fb = forms(shape, u, v)
        return {"E": fb.E, "F": fb.F, "G": fb.G, "e": fb.e, "f": fb.f,
                "g": fb.g, "c11": fb.c11, "c12": fb.c12, "c22": fb.c22,
                "sqrt_a": fb.sqrt_a, "gamma1": list(fb.gamma1),
                "gamma2": list(fb.gamma2), "n": _vec(fb.n)}
    if q == "asymptotic":
        dirs = asymptotic_directions(shape, u, v)
        if dirs == "all":
            return "all"
        return [list(d) for d in dirs]
    if q == "principal":
        try:
            dirs, res = principal_direction_field(shape, u, v)
        except UmbilicPoint:
            return "umbilic"
        return {"dir1": list(dirs[0]), "dir2": list(dirs[1]),
                "rodrigues_residuals": list(res)}
    raise DiffGeoError(f"unknown surface quantity {q!r}; "
                       f"choose from {_SURFACE_QUANTITIES}")


def cmd_eval(args):
    shape, kind, desc = _load_shape(args)
    rep = report.Report("eval", desc)
    quantities = sorted(set(args.quantity))

    points = []
    if args.at:
        pt = _parse_point(args.at)
        dom = shape.domain
        fixed = []
        for k, x in enumerate(pt):
            lo, hi = dom[2 * k], dom[2 * k + 1]
            if not lo <= x <= hi:
                if not args.clamp:
                    raise DiffGeoError(
                        f"point component {x!r} outside [{lo!r}, {hi!r}] "
                        f"(pass --clamp to pull it inside)")
                x = min(max(x, lo), hi)
            fixed.append(x)
        points.append(tuple(fixed))
    if args.grid:
        nu, _, nv = args.grid.partition("x")
        rect = _sample_rect(getattr(args, "shape", None), shape)

        def axis(lo, hi, n, periodic):
            # inclusive of both endpoints, except the upper end of a
            # periodic (seam) direction to avoid double counting
            if periodic and n > 1:
                return [lo + (hi - lo) * i / n for i in range(n)]
            if n == 1:
                return [0.5 * (lo + hi)]
            return [lo + (hi - lo) * i / (n - 1) for i in range(n)]

        if kind == "surface":
            nu, nv = int(nu), int(nv or nu)
            us = axis(rect[0], rect[1], nu, shape.periodic[0] is not None)
            vs = axis(rect[2], rect[3], nv, shape.periodic[1] is not None)
            for uu in us:
                for vv in vs:
                    points.append((uu, vv))
        else:
            points.extend((t,) for t in axis(rect[0], rect[1], int(nu), False))
    if not points:
        raise DiffGeoError("give --at or --grid")

    failed = None
    for pt in points:
        for q in quantities:
            try:
                if kind == "curve":
                    val = _eval_curve_quantity(shape, pt[0], q)
                else:
                    val = _eval_surface_quantity(shape, pt[0], pt[1], q)
                rep.add_record(list(pt), q, val)
            except DiffGeoError as exc:
                rep.add_record(list(pt), q, None,
                               status=f"{type(exc).__name__}: {exc}")
                if failed is None:
                    failed = (pt, q, exc)
    _finish(rep, args)
    for rec in rep.records:
        print(f"  {rec['point']} {rec['quantity']} = {rec['value']}"
              + ("" if rec["status"] == "ok" else f"  [{rec['status']}]"))
    if failed is not None:
        print(f"error at point {failed[0]} ({failed[1]}): {failed[2]}",
              file=sys.stderr)
        return _EXIT_EVAL
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def _curve_suites(shape, rng, n, spec):
    t0, t1 = shape.domain
    pad = 0.02 * (t1 - t0)
    pts = [rng.uniform(t0 + pad, t1 - pad) for _ in range(n)]

    def suite_frenet():
        worst = 0.0
        for t in pts:
            fd = frenet(shape, t, partial=True)
            if fd.N is None:
                continue
            worst = max(worst, *frenet_residuals(shape, t))
            ortho = max(abs(fd.T.norm() - 1.0), abs(fd.N.norm() - 1.0),
                        abs(fd.B.norm() - 1.0), abs(fd.T.dot(fd.N)),
                        abs(fd.T.dot(fd.B)), abs(fd.N.dot(fd.B)),
                        abs(fd.T.cross(fd.N).dot(fd.B) - 1.0))
            worst = max(worst, ortho)
        return worst

    def suite_lancret():
        from .curves import _CurveJets
        worst = 0.0
        for t in pts:
            cj = _CurveJets(shape, t)
            if cj.kappa is None or cj.kappa.value <= cj.eps_inflect:
                continue
            _, Nj, Bj = cj.frame_jets()
            tau = cj.tau_jet().value
            kap = cj.kappa.value
            np_s = cj.ds_vec(Nj).norm()
            worst = max(worst, abs(np_s ** 2 - (kap ** 2 + tau ** 2)))
            tb = abs(cj.ds_vec(cj.T).dot(cj.ds_vec(Bj)))
            worst = max(worst, abs(abs(kap * tau) - tb))
        return worst

    def suite_reparam():
        worst = 0.0
        for t in pts[: max(4, n // 4)]:
            fd = frenet(shape, t, partial=True)
            if fd.N is None:
                continue
            # smooth monotone substitution t = w + 0.1 sin w
            def sub(w_jet):
                from . import jets as J
                return shape.eval(w_jet + 0.1 * J.sin(w_jet))

            w = _invert_sub(t)
            fd2 = frenet(ParametricCurve(sub, (t0 - 1, t1 + 1)), w)
            worst = max(worst, abs(fd.kappa - fd2.kappa),
                        abs(fd.tau - fd2.tau))
        return worst

    def _invert_sub(t_target):
        from .roots import root_find
        return root_find(lambda w: w + 0.1 * math.sin(w) - t_target,
                         (t_target - 0.2, t_target + 0.2), tol=1e-14)

    return [("frenet-serret", suite_frenet, 1e-9),
            ("lancret", suite_lancret, 1e-9),
            ("reparam-invariance", suite_reparam, 1e-9)]


def _surface_suites(shape, rng, n, rect, spec):
    pts = [(rng.uniform(rect[0], rect[1]), rng.uniform(rect[2], rect[3]))
           for _ in range(n)]

    def suite_gw():
        return max(max(gauss_weingarten_residuals(shape, u, v))
                   for u, v in pts)

    def suite_codazzi():
        return max(max(codazzi_compatibility_residuals(shape, u, v))
                   for u, v in pts)

    def suite_form_identity():
        return max(form_identity_residual(shape, u, v) for u, v in pts)

    def suite_egregium():
        worst = 0.0
        for u, v in pts:
            fb = forms(shape, u, v)
            k_ext = (fb.e * fb.g - fb.f ** 2) / fb.a
            k_int = riemann_R1212(shape, u, v) / fb.a
            worst = max(worst, abs(k_int - k_ext) / max(1.0, abs(k_ext)))
        return worst

    def suite_euler():
        worst = 0.0
        for u, v in pts:
            cd = curvatures(shape, u, v)
            if cd.is_umbilic:
                continue
            for k in range(8):
                th = math.pi * k / 8.0
                d = (math.cos(th) * cd.dir1_uv[0] + math.sin(th) * cd.dir2_uv[0],
                     math.cos(th) * cd.dir1_uv[1] + math.sin(th) * cd.dir2_uv[1])
                sc = SurfaceCurve.straight(shape, (u, v), d, (-0.1, 0.1))
                kn = kappa_n_quotient(sc, 0.0)
                pred = (cd.kappa1 * math.cos(th) ** 2
                        + cd.kappa2 * math.sin(th) ** 2)
                worst = max(worst, abs(kn - pred))
        return worst

    def suite_meusnier():
        worst = 0.0
        for u, v in pts[: max(4, n // 4)]:
            d = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            if math.hypot(*d) < 0.1:
                d = (1.0, 0.4)
            c1 = SurfaceCurve.straight(shape, (u, v), d, (-0.1, 0.1))
            q1, q2 = rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)
            c2 = SurfaceCurve(
                shape,
                lambda t, d=d, u=u, v=v, q1=q1, q2=q2:
                (u + d[0] * t + q1 * t * t, v + d[1] * t + q2 * t * t),
                (-0.1, 0.1))
            worst = max(worst, abs(curvature_split(c1, 0.0).kappa_n
                                   - curvature_split(c2, 0.0).kappa_n))
        return worst

    def suite_liouville():
        worst = 0.0
        used = 0
        for u, v in pts[: max(4, n // 4)]:
            d = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            if math.hypot(*d) < 0.1:
                d = (0.6, 0.8)
            sc = SurfaceCurve.straight(shape, (u, v), d, (-0.05, 0.05))
            try:
                worst = max(worst, abs(liouville_check(sc, 0.0)))
                used += 1
            except NonOrthogonalPatch:
                return None
        return worst if used else None

    def suite_bonnet():
        worst = 0.0
        used = 0
        for u, v in pts[: max(4, n // 4)]:
            d = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            if math.hypot(*d) < 0.1:
                d = (0.6, 0.8)
            sc = SurfaceCurve(
                shape,
                lambda t, d=d, u=u, v=v: (u + d[0] * t + 0.08 * t * t,
                                          v + d[1] * t - 0.06 * t * t),
                (-0.05, 0.05))
            try:
                worst = max(worst, abs(bonnet_torsion_check(sc, 0.0)))
                used += 1
            except DiffGeoError:
                continue
        return worst if used else None

    def suite_tau_g():
        worst = 0.0
        used = 0
        for u, v in pts[: max(4, n // 4)]:
            d = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            if math.hypot(*d) < 0.1:
                d = (0.6, 0.8)
            sc = SurfaceCurve.straight(shape, (u, v), d, (-0.05, 0.05))
            try:
                worst = max(worst, abs(geodesic_torsion(sc, 0.0)
                                       - geodesic_torsion_principal(sc, 0.0)))
                used += 1
            except UmbilicPoint:
                continue
        return worst if used else None

    def suite_beltrami():
        worst = 0.0
        used = 0
        for u, v in pts:
            cd = curvatures(shape, u, v)
            if cd.shape != "Hyperbolic":
                continue
            for d in asymptotic_directions(shape, u, v):
                sc = SurfaceCurve.straight(shape, (u, v), d, (-0.05, 0.05))
                tg = geodesic_torsion(sc, 0.0)
                worst = max(worst, abs(tg * tg + cd.K))
                used += 1
        return worst if used else None

    return [("gauss-weingarten", suite_gw, 1e-7),
            ("codazzi-compatibility", suite_codazzi, 1e-7),
            ("form-identity", suite_form_identity, 1e-9),
            ("egregium", suite_egregium, 1e-7),
            ("euler", suite_euler, 1e-8),
            ("meusnier", suite_meusnier, 1e-8),
            ("liouville", suite_liouville, 1e-7),
            ("bonnet", suite_bonnet, 1e-7),
            ("geodesic-torsion", suite_tau_g, 1e-8),
            ("beltrami-enneper", suite_beltrami, 1e-6)]


def cmd_verify(args):
    shape, kind, desc = _load_shape(args)
    rng = random.Random(args.seed)
    rep = report.Report("verify", desc)
    rep.summary["seed"] = args.seed
    spec = OdeSpec(abs_tol=args.tol, rel_tol=args.tol)
    if kind == "curve":
        suites = _curve_suites(shape, rng, args.samples, spec)
    else:
        rect = _sample_rect(getattr(args, "shape", None), shape)
        suites = _surface_suites(shape, rng, args.samples, rect, spec)
    wanted = set(args.suite) if args.suite else None

    any_fail = False
    for name, fn, tol in suites:
        if wanted is not None and name not in wanted:
            continue
        worst = fn()
        if worst is None:
            rep.add_suite(name, 0.0, tol, True, detail="skipped (not applicable)")
            continue
        passed = worst <= tol
        any_fail = any_fail or not passed
        rep.add_suite(name, worst, tol, passed)
    _finish(rep, args)
    for s in rep.suites:
        mark = "PASS" if s["passed"] else "FAIL"
        extra = f"  ({s['detail']})" if s["detail"] else ""
        print(f"  {mark} {s['suite']:24s} max residual {s['max_residual']:.3e}"
              f" (tol {s['tol']:.1e}){extra}")
    return _EXIT_SUITE if any_fail else 0


# --------------------------------------------------------------------------
# geodesic / transport / gauss-bonnet / reconstruct
# --------------------------------------------------------------------------

def cmd_geodesic(args):
    shape, kind, desc = _load_shape(args)
    if kind != "surface":
        raise DiffGeoError("geodesics need a surface shape")
    spec = OdeSpec(abs_tol=args.tol, rel_tol=args.tol)
    rep = report.Report("geodesic", desc)
    p0 = _parse_point(getattr(args, "from"))
    if args.to:
        p1 = _parse_point(args.to)
        path = geodesic_bvp(shape, p0, p1, spec)
        du, dv = shape.wrap_delta(path.end_uv[0] - p1[0],
                                  path.end_uv[1] - p1[1])
        rep.summary["endpoint_error"] = math.hypot(du, dv)
    else:
        if not args.dir or args.length is None:
            raise DiffGeoError("give --to, or --dir plus --length")
        path = geodesic_ivp(shape, p0[0], p0[1], _parse_point(args.dir),
                            args.length, spec)
        rep.summary["left_domain"] = path.left_domain
    rep.summary["length"] = path.length

    sc = path.as_curve()
    max_kg = 0.0
    probes = [path.length * (k + 0.5) / 16.0 for k in range(16)]
    for s in probes:
        max_kg = max(max_kg, abs(curvature_split(sc, s).kappa_g))
    rep.summary["max_kappa_g"] = max_kg

    rows = []
    for s, st in zip(path.s, path.states):
        p = shape.eval(st[0], st[1]).value()
        rows.append((s, st[0], st[1], p.x, p.y, p.z))
    _finish(rep, args, csv=("s,u,v,x,y,z".split(","), rows))
    print(f"  length {path.length!r}  max|kappa_g| {max_kg:.3e}")
    for k, val in sorted(rep.summary.items()):
        if k not in ("length", "max_kappa_g"):
            print(f"  {k}: {val!r}")
    return 0


def _load_surface_curve(args, shape):
    if args.curve:
        with open(args.curve) as fh:
            definition = load_definition(fh.read())
        if definition.kind != "surfacecurve":
            raise DiffGeoError("transport --curve file must be a "
                               "'surfacecurve' definition (u =, v =)")
        (pname,) = definition.params
        return SurfaceCurve(shape, lambda t: definition.eval(t),
                            definition.params[pname])
    if args.loop:
        which, _, val = args.loop.partition(":")
        value = float(eval_scalar(parse_text(val), {}))
        if which == "const-v":
            return SurfaceCurve.const_v(shape, value)
        if which == "const-u":
            return SurfaceCurve.const_u(shape, value)
        raise DiffGeoError("--loop expects const-v:<value> or const-u:<value>")
    raise DiffGeoError("give --curve file or --loop const-v:<value>")


def cmd_transport(args):
    shape, kind, desc = _load_shape(args)
    if kind != "surface":
        raise DiffGeoError("transport needs a surface shape")
    spec = OdeSpec(abs_tol=args.tol, rel_tol=args.tol)
    rep = report.Report("transport", desc)
    sc = _load_surface_curve(args, shape)
    A0 = _parse_point(args.vector)
    state = parallel_transport(sc, A0, spec)
    rep.summary["holonomy"] = state.holonomy
    rep.summary["norm_drift"] = max(state.norms) - min(state.norms)

    if args.loop and args.loop.startswith("const-v:") and shape.periodic[0]:
        v0 = sc.point(sc.domain[0])[1]
        rect = (shape.domain[0], shape.domain[1], v0, shape.domain[3])
        enclosed = _total_curvature_rect(shape, rect,
                                         QuadSpec(tol=max(args.tol, 1e-9)))
        rep.summary["enclosed_total_curvature"] = enclosed

    rows = []
    for t, (a1, a2), nv, ang in zip(state.ts, state.components, state.norms,
                                    state.angles_to_initial()):
        rows.append((t, a1, a2, nv, ang))
    _finish(rep, args, csv=("t,A1,A2,norm,angle".split(","), rows))
    for k, val in sorted(rep.summary.items()):
        print(f"  {k}: {val!r}")
    return 0


def _load_loop(path, shape):
    arcs, corners, rects = [], [], []
    cur = None

    def flush():
        nonlocal cur
        if cur is None:
            return
        if "u" not in cur or "v" not in cur:
            raise DiffGeoError("loop arc needs u = and v = lines")
        u_ast, v_ast = cur["u"], cur["v"]
        pname, dom = cur["param"], cur["domain"]

        def uv(t, u_ast=u_ast, v_ast=v_ast, pname=pname):
            env = {pname: t}
            uj = eval_scalar(u_ast, env)
            vj = eval_scalar(v_ast, env)
            if isinstance(uj, (int, float)):
                uj = t * 0.0 + uj
            if isinstance(vj, (int, float)):
                vj = t * 0.0 + vj
            return uj, vj

        arcs.append(SurfaceCurve(shape, uv, dom))
        corners.append(cur.get("corner"))
        cur = None

    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head = line.split()[0]
            if head == "loop":
                continue
            if head == "region":
                vals = [float(eval_scalar(parse_text(x), {}))
                        for x in line.split()[1:]]
                if len(vals) != 4:
                    raise DiffGeoError("region line needs u0 u1 v0 v1")
                rects.append(tuple(vals))
            elif head == "arc":
                flush()
                rest = line[len("arc"):].strip()
                pname, _, dom = rest.partition(" in ")
                dom = dom.strip()
                lo, hi = dom[1:-1].split(",")
                cur = {"param": pname.strip(),
                       "domain": (float(eval_scalar(parse_text(lo), {})),
                                  float(eval_scalar(parse_text(hi), {})))}
            elif head == "corner":
                val = line.split(None, 1)[1]
                if cur is None:
                    raise DiffGeoError("corner line must follow an arc")
                cur["corner"] = (None if val.strip() == "auto" else
                                 float(eval_scalar(parse_text(val), {})))
            elif "=" in line and cur is not None:
                name, body = line.split("=", 1)
                cur[name.strip()] = parse_text(body.strip())
            else:
                raise DiffGeoError(f"unrecognized loop line {line!r}")
    flush()
    if not rects:
        raise DiffGeoError("loop file needs at least one region line")
    return BoundaryLoop(arcs=arcs, corner_angles=corners, region_rects=rects)


def cmd_gauss_bonnet(args):
    shape, kind, desc = _load_shape(args)
    if kind != "surface":
        raise DiffGeoError("gauss-bonnet needs a surface shape")
    rep = report.Report("gauss-bonnet", desc)
    qspec = QuadSpec(tol=max(args.tol, 1e-9))
    if args.glob:
        if args.chi is None:
            ent = catalog.entry(args.shape) if args.shape else None
            if ent is None or not ent.is_closed:
                raise DiffGeoError("--global needs --chi (or a closed "
                                   "catalog shape)")
            args.chi = ent.chi
        total, defect = gauss_bonnet_global(shape, shape.domain, args.chi,
                                            qspec)
        rep.summary["total_curvature"] = total
        rep.summary["chi"] = args.chi
        rep.summary["defect"] = defect
    else:
        if not args.loop_file:
            raise DiffGeoError("give --global or --loop-file")
        loop = _load_loop(args.loop_file, shape)
        budget = gauss_bonnet_local(shape, loop, qspec)
        rep.summary["sum_kappa_g"] = budget.sum_kg
        rep.summary["sum_corner_angles"] = budget.sum_angles
        rep.summary["total_curvature"] = budget.total_K
        rep.summary["defect"] = budget.defect
    _finish(rep, args)
    for k, val in sorted(rep.summary.items()):
        print(f"  {k}: {val!r}")
    return 0


def cmd_reconstruct(args):
    rep = report.Report("reconstruct", {"source": "intrinsic",
                                        "kappa": args.kappa, "tau": args.tau})
    kap_ast = parse_text(args.kappa)
    tau_ast = parse_text(args.tau)

    def kap(s):
        return float(eval_scalar(kap_ast, {"s": s}))

    def tau(s):
        return float(eval_scalar(tau_ast, {"s": s}))

    spec = OdeSpec(abs_tol=args.tol, rel_tol=args.tol)
    rec = reconstruct_from_kappa_tau(
        kap, tau, Vec3(0.0, 0.0, 0.0),
        (Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0)),
        args.length, spec, n_samples=args.samples)

    curve = rec.as_curve()
    dev = 0.0
    for k in range(1, 24):
        s = args.length * k / 24.0
        fd = frenet(curve, s)
        dev = max(dev, abs(fd.kappa - kap(s)), abs(fd.tau - tau(s)))
    rep.summary["roundtrip_kappa_tau_dev"] = dev
    rep.summary["length"] = args.length

    rows = [(s, p.x, p.y, p.z) for s, p in zip(rec.s, rec.r)]
    _finish(rep, args, csv=("s,x,y,z".split(","), rows))
    for k, val in sorted(rep.summary.items()):
        print(f"  {k}: {val!r}")
    return 0


# --------------------------------------------------------------------------
# plumbing
# --------------------------------------------------------------------------

def _finish(rep, args, csv=None):
    rep.sort_records()
    if getattr(args, "json", None):
        report.write_json(args.json, rep.to_obj())
    if csv is not None and getattr(args, "csv", None):
        report.write_csv(args.csv, csv[0], csv[1])


def _add_shape_args(p, files=True):
    p.add_argument("--shape", help="catalog shape name")
    p.add_argument("--param", action="append", default=[],
                   help="shape parameter k=v (repeatable)")
    if files:
        p.add_argument("--file", help="definition file (.pc or .ps)")


def _add_common(p):
    p.add_argument("--json", help="write the report as deterministic JSON")
    p.add_argument("--csv", help="write trajectory/record CSV")
    p.add_argument("--tol", type=float, default=None,
                   help="integration/quadrature tolerance "
                        "(default 1e-10 or $DIFFGEO_TOL)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized sampling (default 0)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="diffgeo",
        description="Differential geometry of parametric curves and "
                    "surfaces: evaluation, identity verification, "
                    "geodesics, parallel transport, Gauss-Bonnet.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate quantities at points or grids")
    _add_shape_args(p)
    p.add_argument("--at", help="point, e.g. u=0.3,v=0.4 or t=1.2")
    p.add_argument("--grid", help="grid spec, e.g. 3x3 (surfaces) or 5 (curves)")
    p.add_argument("--quantity", action="append", required=True,
                   help=f"curve: {_CURVE_QUANTITIES}; "
                        f"surface: {_SURFACE_QUANTITIES}")
    p.add_argument("--clamp", action="store_true",
                   help="clamp out-of-domain --at points to the boundary")
    _add_common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("verify", help="run identity/residual suites")
    _add_shape_args(p)
    p.add_argument("--suite", action="append",
                   help="restrict to named suites (repeatable)")
    p.add_argument("--samples", type=int, default=40,
                   help="random sample points per suite (default 40)")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("geodesic", help="solve geodesic IVP/BVP")
    _add_shape_args(p)
    p.add_argument("--from", required=True, help="start point u,v")
    p.add_argument("--to", help="target point u,v (boundary-value problem)")
    p.add_argument("--dir", help="initial direction du,dv (initial-value)")
    p.add_argument("--length", type=float, help="arc length for --dir")
    _add_common(p)
    p.set_defaults(fn=cmd_geodesic)

    p = sub.add_parser("transport", help="parallel transport along a curve")
    _add_shape_args(p)
    p.add_argument("--curve", help="surfacecurve definition file (.sc)")
    p.add_argument("--loop", help="builtin loop: const-v:<v0> or const-u:<u0>")
    p.add_argument("--vector", required=True, help="initial components A1,A2")
    _add_common(p)
    p.set_defaults(fn=cmd_transport)

    p = sub.add_parser("gauss-bonnet", help="local/global Gauss-Bonnet budget")
    _add_shape_args(p)
    p.add_argument("--global", dest="glob", action="store_true",
                   help="closed-surface variant over the full domain")
    p.add_argument("--chi", type=int, help="Euler characteristic")
    p.add_argument("--loop-file", help="boundary description (.loop)")
    _add_common(p)
    p.set_defaults(fn=cmd_gauss_bonnet)

    p = sub.add_parser("reconstruct",
                       help="rebuild a curve from kappa(s), tau(s)")
    p.add_argument("--kappa", required=True, help="expression in s")
    p.add_argument("--tau", required=True, help="expression in s")
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--samples", type=int, default=257)
    _add_common(p)
    p.set_defaults(fn=cmd_reconstruct)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "tol", None) is None:
        args.tol = _default_tol()
    start = time.monotonic()
    try:
        code = args.fn(args)
    except DiffGeoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if args.command == "geodesic":
            return _EXIT_GEODESIC
        return _EXIT_EVAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_EVAL
    print(f"[{args.command}: {time.monotonic() - start:.3f}s]",
          file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
