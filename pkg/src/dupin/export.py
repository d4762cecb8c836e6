"""Mesh and report emission: OBJ meshes from parameter grids (singular vertices
excluded from faces), JSON residual reports, atomic writes, and a minimal OBJ
reader for round-trip checks."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

REPORT_SCHEMA_VERSION = 1


@dataclass
class Mesh:
    vertices: np.ndarray                 # (n, 3)
    faces: list                          # quads of 0-based vertex indices
    flags: np.ndarray                    # per-vertex singular flags
    scalars: dict = field(default_factory=dict)

    def validate(self):
        n = len(self.vertices)
        for f in self.faces:
            if any(i < 0 or i >= n for i in f):
                raise ValueError("face index out of range")
            if any(self.flags[i] for i in f):
                raise ValueError("flagged vertex used by a face")


def grid_mesh(points, flags=None, periodic_u=False, periodic_v=False, scalars=None):
    """Quad mesh from an (nu, nv, 3) point grid; cells touching a flagged
    vertex are dropped; periodic directions wrap around."""
    points = np.asarray(points, dtype=float)
    nu, nv = points.shape[:2]
    if flags is None:
        flags = np.zeros((nu, nv), dtype=bool)
    verts = points.reshape(-1, 3)
    vflags = np.asarray(flags, dtype=bool).reshape(-1)
    idx = lambda i, j: i * nv + j
    faces = []
    imax = nu if periodic_u else nu - 1
    jmax = nv if periodic_v else nv - 1
    for i in range(imax):
        for j in range(jmax):
            quad = (
                idx(i, j),
                idx((i + 1) % nu, j),
                idx((i + 1) % nu, (j + 1) % nv),
                idx(i, (j + 1) % nv),
            )
            if not any(vflags[k] for k in quad):
                faces.append(quad)
    out_scalars = {}
    for name, arr in (scalars or {}).items():
        out_scalars[name] = np.asarray(arr, dtype=float).reshape(-1)
    return Mesh(verts, faces, vflags, out_scalars)


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_obj(mesh, path):
    """ASCII OBJ with 'v' and 'f' records; deterministic formatting."""
    mesh.validate()
    lines = [f"# vertices: {len(mesh.vertices)} faces: {len(mesh.faces)}"]
    for v in mesh.vertices:
        lines.append("v %.12g %.12g %.12g" % (v[0], v[1], v[2]))
    for f in mesh.faces:
        lines.append("f " + " ".join(str(i + 1) for i in f))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_obj(path):
    """Minimal reference OBJ parser: vertices and faces only."""
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(tok.split("/")[0]) - 1 for tok in parts[1:]])
    return np.array(verts), faces


def make_report(operation, parameters, checks, tolerances):
    """Structured report: every numeric claim carries its tolerance."""
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "operation": operation,
        "parameters": parameters,
        "checks": checks,
        "tolerances": tolerances,
        "passed": all(c.get("pass", True) for c in checks),
    }


def check(name, value, tolerance=None, passed=None, mode="abs_below"):
    c = {"name": name, "value": value}
    if tolerance is not None:
        c["tolerance"] = tolerance
        c["mode"] = mode
        c["pass"] = bool(abs(value) < tolerance) if passed is None else bool(passed)
    elif passed is not None:
        c["pass"] = bool(passed)
    return c


def write_report(report, path):
    _atomic_write(path, json.dumps(report, sort_keys=True, indent=2) + "\n")
