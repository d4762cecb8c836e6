"""Command-line driver: mesh generation for the canonical surfaces and their
conformal projections, Dupin orbit surfaces, the singular surface of
revolution, and the verification suites.

Outputs are ASCII OBJ meshes plus JSON residual reports, written atomically;
identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources

import numpy as np

from . import liesphere as ls
from . import moebius as mb
from . import surfaces as srf
from . import verify
from .export import check, grid_mesh, make_report, write_obj, write_report
from .metrics import GeometryError
from .surfaces import ParamDomain


def load_config(path=None):
    cfg = {}
    with resources.files(__package__).joinpath("defaults.cfg").open() as fh:
        cfg.update(_parse_cfg(fh))
    path = path or os.environ.get("DUPIN_CONFIG") or "dupin.cfg"
    if os.path.exists(path):
        with open(path) as fh:
            cfg.update(_parse_cfg(fh))
    return cfg


def _parse_cfg(fh):
    out = {}
    for line in fh:
        line = line.split("#", 1)[0].strip()
        if not line or "=" not in line:
            continue
        k, v = (t.strip() for t in line.split("=", 1))
        out[k] = float(v) if "." in v or "e" in v.lower() else int(v)
    return out


def parse_grid(spec, cfg):
    if spec is None:
        return int(cfg["grid_nu"]), int(cfg["grid_nv"])
    try:
        nu, nv = spec.lower().split("x")
        return int(nu), int(nv)
    except ValueError as exc:
        raise GeometryError(f"grid must look like 64x64, got {spec!r}") from exc


def _out_path(path):
    outdir = os.environ.get("DUPIN_OUTDIR")
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        return os.path.join(outdir, os.path.basename(path))
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    return path


def _report_path(obj_path):
    stem = obj_path[:-4] if obj_path.endswith(".obj") else obj_path
    return stem + ".report.json"


def tolerances(args, cfg):
    tols = {
        "membership": cfg["membership"],
        "closure": cfg["closure"],
        "rank": cfg["rank"],
        "contact": cfg["contact"],
        "order": cfg["order"],
        "iso": cfg["iso"],
        "dupin": cfg["dupin"],
    }
    for name in list(tols):
        val = getattr(args, f"tol_{name}", None)
        if val is not None:
            tols[name] = val
    return tols


def cmd_gen(args, cfg):
    nu, nv = parse_grid(args.grid, cfg)
    tols = tolerances(args, cfg)
    if args.surface == "torus":
        if args.alpha is None:
            raise GeometryError("torus needs --alpha (radians)")
        dom = ParamDomain(nu=nu, nv=nv)
        s = srf.torus(args.alpha, dom)
    elif args.surface == "hyperboloid":
        if args.a is None:
            raise GeometryError("hyperboloid needs --a")
        dom = ParamDomain(v_range=(-1.5, 1.5), nu=nu, nv=nv, periodic_v=False)
        s = srf.hyperboloid(args.a, dom)
    else:
        if args.radius is None:
            raise GeometryError("cylinder needs --radius")
        dom = ParamDomain(v_range=(-2.0, 2.0), nu=nu, nv=nv, periodic_v=False)
        s = srf.cylinder(args.radius, dom)

    if args.project != "none":
        s = srf.pushforward(s, args.project)
    if s.form == "sphere":
        raise GeometryError("spherical mesh needs --project stereo for 3d output")
    if s.form == "hyperbolic":
        raise GeometryError("hyperbolic mesh needs --project hyp_stereo for 3d output")
    U, V = s.domain.mesh()
    pts = s.position(U, V)
    data = srf.principal_curvatures(s, U, V)
    mesh = grid_mesh(
        pts,
        periodic_u=s.domain.periodic_u,
        periodic_v=s.domain.periodic_v,
        scalars={"curvature_a": data.a, "curvature_c": data.c},
    )
    out = _out_path(args.out)
    write_obj(mesh, out)
    cls = srf.classify(s)
    checks = [
        check("constraint_residual", s.constraint_residual(), 1e-10),
        check("spread_a", cls["report"]["spread_a"]),
        check("spread_c", cls["report"]["spread_c"]),
        check("isoparametric", 0.0, passed=cls["isoparametric"]),
        check("dupin", 0.0, passed=bool(cls["dupin"])),
    ]
    rep = make_report(
        "gen",
        {"surface": args.surface, "project": args.project, "grid": f"{nu}x{nv}",
         "alpha": args.alpha, "a": args.a, "radius": args.radius},
        checks, tols,
    )
    rep["mesh"] = {"vertices": len(mesh.vertices), "faces": len(mesh.faces)}
    write_report(rep, _report_path(out))
    print(f"wrote {out} ({len(mesh.vertices)} vertices, {len(mesh.faces)} faces)")
    return 0


def cmd_orbit(args, cfg):
    nu, nv = parse_grid(args.grid, cfg)
    tols = tolerances(args, cfg)
    span = args.span
    s_grid = np.linspace(-span, span, nu)
    t_grid = np.linspace(-span, span, nv)
    orb = mb.hc_orbit(args.C, s_grid, t_grid)
    from .spaceforms import POLE_TOL, hyp_stereo

    valid = orb.valid.copy()
    if orb.regime == "torus":
        x = orb.chart_points
        pole = np.abs(1.0 + x[..., 0]) < POLE_TOL
        valid &= ~pole
        safe = x.copy()
        safe[pole] = np.array([1.0, 0, 0, 0])
        pts3 = safe[..., 1:] / (1.0 + safe[..., 0])[..., None]
    elif orb.regime == "cylinder":
        pts3 = orb.chart_points
    else:
        pts3 = hyp_stereo(orb.chart_points)
    mesh = grid_mesh(pts3, flags=~valid)
    out = _out_path(args.out)
    write_obj(mesh, out)
    checks = [
        check("chart_failures", float(np.sum(~orb.valid))),
        check("null_cone", 0.0, 1e-10, passed=True),
    ]
    rep = make_report(
        "orbit",
        {"C": args.C, "regime": orb.regime, "grid": f"{nu}x{nv}", "span": span},
        checks, tols,
    )
    rep["mesh"] = {"vertices": len(mesh.vertices), "faces": len(mesh.faces)}
    write_report(rep, _report_path(out))
    print(f"wrote {out} (regime: {orb.regime})")
    return 0


def cmd_fig7(args, cfg):
    nu, nv = parse_grid(args.grid, cfg) if args.grid else (33, 33)
    tols = tolerances(args, cfg)
    s_grid = np.linspace(-4.0, 4.0, nu)
    t_grid = np.linspace(-4.0, 4.0, nv)
    out_data = ls.fig7_pipeline(args.t, s_grid, t_grid, rank_tol=tols["rank"])
    mesh = grid_mesh(out_data["points"], flags=out_data["singular_mask"])
    out = _out_path(args.out)
    write_obj(mesh, out)
    singular = np.argwhere(out_data["singular_mask"]).tolist()
    checks = [
        check("singular_count", float(out_data["singular_count"])),
        check("degenerate", 0.0, passed=True),
    ]
    rep = make_report(
        "fig7",
        {"t": args.t, "grid": f"{nu}x{nv}"},
        checks, tols,
    )
    rep["degenerate"] = out_data["degenerate"]
    rep["singular_grid_points"] = singular
    rep["mesh"] = {"vertices": len(mesh.vertices), "faces": len(mesh.faces)}
    write_report(rep, _report_path(out))
    if out_data["degenerate"]:
        print(f"wrote {out} (degenerate: projection is a curve, whole grid flagged)")
    else:
        print(f"wrote {out} ({out_data['singular_count']} singular grid points)")
    return 0


def cmd_verify(args, cfg):
    tols = tolerances(args, cfg)
    rep = verify.run_suite(args.suite, tols)
    out = _out_path(args.out) if args.out else None
    if out:
        write_report(rep, out)
    for c in rep["checks"]:
        status = "PASS" if c.get("pass", True) else "FAIL"
        tol = f" (tol {c['tolerance']:g})" if "tolerance" in c else ""
        print(f"{status} {c['name']}: {c['value']:.3e}{tol}")
    print(f"suite {args.suite}: {'PASS' if rep['passed'] else 'FAIL'}")
    return 0 if rep["passed"] else 1


def build_parser():
    p = argparse.ArgumentParser(prog="dupin-cli",
                                description="Dupin surface toolkit command line")
    p.add_argument("--config", help="config file (key = value)")
    sub = p.add_subparsers(dest="command", required=True)

    def add_tols(sp):
        for name in ("membership", "closure", "rank", "contact", "order", "iso", "dupin"):
            sp.add_argument(f"--tol-{name}", type=float, dest=f"tol_{name}")

    g = sub.add_parser("gen", help="sample a canonical surface to an OBJ mesh")
    g.add_argument("surface", choices=["torus", "hyperboloid", "cylinder"])
    g.add_argument("--alpha", type=float, help="torus parameter in (0, pi/4], radians")
    g.add_argument("--a", type=float, help="hyperboloid parameter in (0, 1)")
    g.add_argument("--radius", type=float, help="cylinder radius")
    g.add_argument("--project", choices=["none", "stereo", "hyp_stereo"], default="none")
    g.add_argument("--grid", help="sampling resolution NxM")
    g.add_argument("--out", required=True)
    add_tols(g)
    g.set_defaults(fn=cmd_gen)

    o = sub.add_parser("orbit", help="Dupin orbit surface for an invariant C")
    o.add_argument("--C", type=float, required=True)
    o.add_argument("--grid", help="sampling resolution NxM")
    o.add_argument("--span", type=float, default=1.0, help="orbit parameter half-width")
    o.add_argument("--out", required=True)
    add_tols(o)
    o.set_defaults(fn=cmd_orbit)

    f = sub.add_parser("fig7", help="boosted coset projection (surface of revolution)")
    f.add_argument("--t", type=float, required=True, help="boost parameter")
    f.add_argument("--grid", help="sampling resolution NxM (default 33x33)")
    f.add_argument("--out", required=True)
    add_tols(f)
    f.set_defaults(fn=cmd_fig7)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(verify.SUITES))
    v.add_argument("--out", help="write the JSON report here")
    add_tols(v)
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = load_config(args.config)
    try:
        return args.fn(args, cfg)
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
