"""Parametric immersed surfaces in the three space forms: fundamental forms,
principal curvatures and directions, isoparametric/Dupin classification, the
canonical surface catalog, Euclidean adapted frames, and the Dupin PDE
residuals.

All evaluation maps are vectorized: position(u, v) broadcasts over arrays and
returns (..., dim).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import metrics as mt
from . import spaceforms as sf
from .metrics import GeometryError

RANK_TOL = 1e-8


class SingularPointError(GeometryError):
    pass


class UmbilicError(GeometryError):
    pass


@dataclass(frozen=True)
class ParamDomain:
    u_range: tuple = (0.0, 2.0 * np.pi)
    v_range: tuple = (0.0, 2.0 * np.pi)
    nu: int = 64
    nv: int = 64
    periodic_u: bool = True
    periodic_v: bool = True

    def __post_init__(self):
        if self.nu < 3 or self.nv < 3:
            raise GeometryError("grid resolutions must be at least 3")
        if self.u_range[1] <= self.u_range[0] or self.v_range[1] <= self.v_range[0]:
            raise GeometryError("degenerate parameter range")

    def grids(self):
        """1d sample grids; periodic directions omit the duplicated endpoint."""
        u = np.linspace(*self.u_range, self.nu, endpoint=not self.periodic_u)
        v = np.linspace(*self.v_range, self.nv, endpoint=not self.periodic_v)
        return u, v

    def mesh(self):
        u, v = self.grids()
        return np.meshgrid(u, v, indexing="ij")

    @property
    def du(self):
        span = self.u_range[1] - self.u_range[0]
        return span / self.nu if self.periodic_u else span / (self.nu - 1)

    @property
    def dv(self):
        span = self.v_range[1] - self.v_range[0]
        return span / self.nv if self.periodic_v else span / (self.nv - 1)

    def shifted(self, su, sv):
        return ParamDomain(
            (self.u_range[0] + su, self.u_range[1] + su),
            (self.v_range[0] + sv, self.v_range[1] + sv),
            self.nu, self.nv, self.periodic_u, self.periodic_v,
        )


_FORM_METRIC = {"euclidean": mt.R3, "sphere": mt.R4, "hyperbolic": mt.R31}
_FORM_DIM = {"euclidean": 3, "sphere": 4, "hyperbolic": 4}


class ParametricSurface:
    """An immersion of a rectangular (possibly periodic) domain into a space form.

    position and the optional partial-derivative callables map (u, v) arrays to
    (..., dim) arrays.  ``frame`` optionally supplies analytic oriented
    principal frames (e1, e2, e3) for the canonical catalog.
    """

    def __init__(self, form, position, domain, name="surface", params=None,
                 du=None, dv=None, duu=None, duv=None, dvv=None,
                 normal=None, frame=None):
        self.form = form
        self.position = position
        self.domain = domain
        self.name = name
        self.params = dict(params or {})
        self.du = du
        self.dv = dv
        self.duu = duu
        self.duv = duv
        self.dvv = dvv
        self.normal = normal
        self.frame = frame
        self._fd_step_u = 1e-5 * (domain.u_range[1] - domain.u_range[0])
        self._fd_step_v = 1e-5 * (domain.v_range[1] - domain.v_range[0])

    @property
    def has_analytic_partials(self):
        return all(f is not None for f in (self.du, self.dv, self.duu, self.duv, self.dvv))

    @property
    def metric(self):
        return _FORM_METRIC[self.form]

    # numerical fallbacks for the jet
    def d1(self, u, v):
        if self.du is not None and self.dv is not None:
            return self.du(u, v), self.dv(u, v)
        hu, hv = self._fd_step_u, self._fd_step_v
        xu = (self.position(u + hu, v) - self.position(u - hu, v)) / (2 * hu)
        xv = (self.position(u, v + hv) - self.position(u, v - hv)) / (2 * hv)
        return xu, xv

    def d2(self, u, v):
        if self.has_analytic_partials:
            return self.duu(u, v), self.duv(u, v), self.dvv(u, v)
        hu = np.sqrt(self._fd_step_u)
        hv = np.sqrt(self._fd_step_v)
        p = self.position
        xuu = (p(u + hu, v) - 2 * p(u, v) + p(u - hu, v)) / hu**2
        xvv = (p(u, v + hv) - 2 * p(u, v) + p(u, v - hv)) / hv**2
        xuv = (
            p(u + hu, v + hv) - p(u + hu, v - hv) - p(u - hu, v + hv) + p(u - hu, v - hv)
        ) / (4 * hu * hv)
        return xuu, xuv, xvv

    def constraint_residual(self):
        """Max deviation of sampled positions from the form's constraint set."""
        U, V = self.domain.mesh()
        x = self.position(U, V)
        if self.form == "sphere":
            return float(np.max(np.abs(np.sum(x * x, axis=-1) - 1.0)))
        if self.form == "hyperbolic":
            return float(np.max(np.abs(mt.inner(x, x, mt.R31) + 1.0)))
        return 0.0


# --- normals ------------------------------------------------------------------

def _euclidean_normal(xu, xv):
    n = np.cross(xu, xv)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def _orthogonal_complement_normal(rows_metric, x, xu, xv):
    """Unit normal in S^3 / H^3: the <,>-orthogonal complement of {x, xu, xv}."""
    g = rows_metric.gram
    A = np.stack([x, xu, xv], axis=-2) @ g  # (..., 3, 4): rows pair against v
    _, _, vh = np.linalg.svd(A)
    n = vh[..., -1, :]
    nn = mt.inner(n, n, rows_metric)
    return n / np.sqrt(np.abs(nn))[..., None]


def surface_normal(s, u, v, xu=None, xv=None):
    """Oriented unit normal; analytic when the surface carries one, else the
    cross-product/complement normal with a single global sign fixed at the
    domain base corner by the mean-curvature >= 0 convention."""
    if s.normal is not None:
        return s.normal(u, v)
    if xu is None or xv is None:
        xu, xv = s.d1(u, v)
    x = s.position(u, v)
    if s.form == "euclidean":
        n = _euclidean_normal(xu, xv)
    else:
        n = _orthogonal_complement_normal(s.metric, x, xu, xv)
        # SVD sign is arbitrary per point; align smoothly against a cross-product
        # style reference built from the triple (x, xu, xv).
        ref = _generalized_cross(s.metric, x, xu, xv)
        sgn = np.sign(np.sum(n * ref, axis=-1))
        sgn = np.where(sgn == 0, 1.0, sgn)
        n = n * sgn[..., None]
    return n * _base_sign(s)


def _generalized_cross(metric, a, b, c):
    """Vector <,>-orthogonal to a, b, c via cofactor expansion (smooth in inputs)."""
    M = np.stack([a, b, c], axis=-2)  # (..., 3, 4)
    out = np.empty(a.shape)
    for i in range(4):
        cols = [j for j in range(4) if j != i]
        out[..., i] = (-1) ** i * np.linalg.det(M[..., :, cols])
    # raise the index so the result is <,>-orthogonal, not just dual
    return np.einsum("ij,...j->...i", np.linalg.inv(metric.gram), out)


def _base_sign(s):
    cached = getattr(s, "_normal_sign", None)
    if cached is not None:
        return cached
    u0 = 0.5 * (s.domain.u_range[0] + s.domain.u_range[1])
    v0 = 0.5 * (s.domain.v_range[0] + s.domain.v_range[1])
    sign = 1.0
    s._normal_sign = 1.0  # avoid recursion while probing
    try:
        data = principal_curvatures(s, np.atleast_1d(u0), np.atleast_1d(v0))
        mean = float(data.a[0] + data.c[0])
        if abs(mean) > 1e-9 and mean < 0:
            sign = -1.0
    except GeometryError:
        sign = 1.0
    s._normal_sign = sign
    return sign


# --- fundamental forms and curvature -------------------------------------------

def fundamental_forms(s, u, v):
    """First and second fundamental forms at (u, v); raises at singular points."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    xu, xv = s.d1(u, v)
    g = s.metric
    I = np.empty(xu.shape[:-1] + (2, 2))
    I[..., 0, 0] = mt.inner(xu, xu, g)
    I[..., 0, 1] = I[..., 1, 0] = mt.inner(xu, xv, g)
    I[..., 1, 1] = mt.inner(xv, xv, g)
    det = I[..., 0, 0] * I[..., 1, 1] - I[..., 0, 1] ** 2
    scale = np.mean(I[..., 0, 0] * I[..., 1, 1])
    if np.min(det) < RANK_TOL * max(scale, 1e-30):
        raise SingularPointError("first fundamental form is rank deficient")
    n = surface_normal(s, u, v, xu, xv)
    xuu, xuv, xvv = s.d2(u, v)
    II = np.empty_like(I)
    II[..., 0, 0] = mt.inner(xuu, n, g)
    II[..., 0, 1] = II[..., 1, 0] = mt.inner(xuv, n, g)
    II[..., 1, 1] = mt.inner(xvv, n, g)
    return I, II


@dataclass
class CurvatureData:
    a: np.ndarray          # smaller principal curvature
    c: np.ndarray          # larger principal curvature
    dir_a: np.ndarray      # parameter-space direction (du, dv), I-unit
    dir_c: np.ndarray
    umbilic: np.ndarray    # boolean mask


def principal_curvatures(s, u, v, umbilic_tol=1e-9):
    """Principal curvatures (ordered a <= c) and I-orthonormal directions."""
    I, II = fundamental_forms(s, u, v)
    detI = I[..., 0, 0] * I[..., 1, 1] - I[..., 0, 1] ** 2
    # shape operator W = I^{-1} II (2x2, closed form)
    Iinv = np.empty_like(I)
    Iinv[..., 0, 0] = I[..., 1, 1] / detI
    Iinv[..., 1, 1] = I[..., 0, 0] / detI
    Iinv[..., 0, 1] = Iinv[..., 1, 0] = -I[..., 0, 1] / detI
    W = Iinv @ II
    tr = W[..., 0, 0] + W[..., 1, 1]
    det = W[..., 0, 0] * W[..., 1, 1] - W[..., 0, 1] * W[..., 1, 0]
    disc = np.maximum(tr * tr - 4 * det, 0.0)
    root = np.sqrt(disc)
    a = 0.5 * (tr - root)
    c = 0.5 * (tr + root)
    umb = root < umbilic_tol * (1.0 + np.abs(tr))

    def eigdir(kappa):
        # nullvector of W - kappa I from the numerically larger row
        r0 = np.stack([W[..., 0, 0] - kappa, W[..., 0, 1]], axis=-1)
        r1 = np.stack([W[..., 1, 0], W[..., 1, 1] - kappa], axis=-1)
        use0 = (np.abs(r0[..., 0]) + np.abs(r0[..., 1])) >= (
            np.abs(r1[..., 0]) + np.abs(r1[..., 1])
        )
        row = np.where(use0[..., None], r0, r1)
        d = np.stack([row[..., 1], -row[..., 0]], axis=-1)
        # umbilic fallback: any direction; pick du
        degenerate = np.abs(d).sum(axis=-1) < 1e-14
        d = np.where(degenerate[..., None], np.array([1.0, 0.0]), d)
        q = np.einsum("...i,...ij,...j->...", d, I, d)
        return d / np.sqrt(q)[..., None]

    dir_a = eigdir(a)
    dir_c = eigdir(c)
    return CurvatureData(a, c, dir_a, dir_c, umb)


def ambient_direction(s, u, v, d):
    """Push a parameter-space direction to the ambient tangent vector."""
    xu, xv = s.d1(u, v)
    return d[..., 0:1] * xu + d[..., 1:2] * xv


# --- canonical catalog ----------------------------------------------------------

def torus(alpha, domain=None):
    """Flat product torus S^1(cos a) x S^1(sin a) in S^3; curvatures
    (-tan a, cot a) with the catalog normal orientation."""
    if not (0.0 < alpha <= np.pi / 4 + 1e-9):
        raise GeometryError("torus parameter must lie in (0, pi/4]")
    alpha = min(alpha, np.pi / 4)
    r, s_ = np.cos(alpha), np.sin(alpha)
    domain = domain or ParamDomain()

    def stack4(a, b, c, d):
        return np.stack(np.broadcast_arrays(a, b, c, d), axis=-1)

    pos = lambda u, v: stack4(r * np.cos(u), r * np.sin(u), s_ * np.cos(v), s_ * np.sin(v))
    du = lambda u, v: stack4(-r * np.sin(u), r * np.cos(u), 0 * u, 0 * v)
    dv = lambda u, v: stack4(0 * u, 0 * u, -s_ * np.sin(v), s_ * np.cos(v))
    duu = lambda u, v: stack4(-r * np.cos(u), -r * np.sin(u), 0 * u, 0 * v)
    duv = lambda u, v: stack4(0 * u, 0 * u, 0 * u, 0 * v)
    dvv = lambda u, v: stack4(0 * u, 0 * u, -s_ * np.cos(v), -s_ * np.sin(v))
    normal = lambda u, v: stack4(
        s_ * np.cos(u), s_ * np.sin(u), -r * np.cos(v), -r * np.sin(v)
    )

    def frame(u, v):
        e1 = stack4(-np.sin(u), np.cos(u), 0 * u, 0 * v)
        e2 = stack4(0 * u, 0 * u, -np.sin(v), np.cos(v))
        return e1, e2, normal(u, v)

    surf = ParametricSurface(
        "sphere", pos, domain, name="torus", params={"alpha": alpha},
        du=du, dv=dv, duu=duu, duv=duv, dvv=dvv, normal=normal, frame=frame,
    )
    surf.constant_curvatures = (-np.tan(alpha), 1.0 / np.tan(alpha))
    return surf


def cylinder(radius, domain=None):
    """Circular cylinder of radius R in R^3 (ruling along eps3); curvatures
    (0, 1/R) with the inward normal."""
    if radius <= 0:
        raise GeometryError("cylinder radius must be positive")
    R = float(radius)
    domain = domain or ParamDomain(
        v_range=(-2.0, 2.0), periodic_v=False
    )

    def stack3(a, b, c):
        return np.stack(np.broadcast_arrays(a, b, c), axis=-1)

    pos = lambda u, v: stack3(R * np.cos(u), R * np.sin(u), v)
    du = lambda u, v: stack3(-R * np.sin(u), R * np.cos(u), 0 * v)
    dv = lambda u, v: stack3(0 * u, 0 * u, np.ones_like(v))
    zero = lambda u, v: stack3(0 * u, 0 * u, 0 * v)
    duu = lambda u, v: stack3(-R * np.cos(u), -R * np.sin(u), 0 * v)
    normal = lambda u, v: stack3(-np.cos(u), -np.sin(u), 0 * v)

    def frame(u, v):
        e1 = stack3(0 * u, 0 * u, np.ones_like(v))       # ruling: curvature 0
        e2 = stack3(-np.sin(u), np.cos(u), 0 * v)        # circle: curvature 1/R
        return e1, e2, normal(u, v)

    surf = ParametricSurface(
        "euclidean", pos, domain, name="cylinder", params={"radius": R},
        du=du, dv=dv, duu=duu, duv=zero, dvv=zero, normal=normal, frame=frame,
    )
    surf.constant_curvatures = (0.0, 1.0 / R)
    return surf


def hyperboloid(a, domain=None):
    """Circular "hyperboloid" S^1(a/b) x H^1(1/b) in H^3, b = sqrt(1-a^2);
    constant curvatures (a, 1/a), product 1.

    The circle factor has radius a/b in span{eps1, eps2}; the hyperbola factor
    z^2 - w^2 = -1/b^2 lives in span{eps3, eps4} (the scale 1/b is forced by
    membership in H^3 together with the circle radius a/b)."""
    if not (0.0 < a < 1.0):
        raise GeometryError("hyperboloid parameter must lie in (0, 1)")
    b = np.sqrt(1.0 - a * a)
    rho, sc = a / b, 1.0 / b
    domain = domain or ParamDomain(v_range=(-1.5, 1.5), periodic_v=False)

    def stack4(p, q, r, w):
        return np.stack(np.broadcast_arrays(p, q, r, w), axis=-1)

    pos = lambda u, v: stack4(
        rho * np.cos(u), rho * np.sin(u), sc * np.sinh(v), sc * np.cosh(v)
    )
    du = lambda u, v: stack4(-rho * np.sin(u), rho * np.cos(u), 0 * v, 0 * v)
    dv = lambda u, v: stack4(0 * u, 0 * u, sc * np.cosh(v), sc * np.sinh(v))
    duu = lambda u, v: stack4(-rho * np.cos(u), -rho * np.sin(u), 0 * v, 0 * v)
    duv = lambda u, v: stack4(0 * u, 0 * u, 0 * v, 0 * v)
    dvv = lambda u, v: stack4(0 * u, 0 * u, sc * np.sinh(v), sc * np.cosh(v))
    # orientation with curvatures (a along the hyperbola, 1/a along the circle)
    normal = lambda u, v: stack4(
        -sc * np.cos(u), -sc * np.sin(u), -rho * np.sinh(v), -rho * np.cosh(v)
    )

    def frame(u, v):
        e1 = stack4(0 * u, 0 * u, np.cosh(v), np.sinh(v))   # curvature a
        e2 = stack4(-np.sin(u), np.cos(u), 0 * v, 0 * v)    # curvature 1/a
        return e1, e2, normal(u, v)

    surf = ParametricSurface(
        "hyperbolic", pos, domain, name="hyperboloid", params={"a": a},
        du=du, dv=dv, duu=duu, duv=duv, dvv=dvv, normal=normal, frame=frame,
    )
    surf.constant_curvatures = (a, 1.0 / a)
    return surf


def sphere_patch(radius=1.0, domain=None):
    """Round sphere patch in R^3 (totally umbilic test case)."""
    R = float(radius)
    domain = domain or ParamDomain(
        u_range=(-1.2, 1.2), v_range=(-1.2, 1.2),
        periodic_u=False, periodic_v=False,
    )

    def stack3(a, b, c):
        return np.stack(np.broadcast_arrays(a, b, c), axis=-1)

    pos = lambda u, v: stack3(
        R * np.cos(u) * np.cos(v), R * np.sin(u) * np.cos(v), R * np.sin(v)
    )
    return ParametricSurface("euclidean", pos, domain, name="sphere_patch",
                             params={"radius": R})


def warped_torus(warp=0.1, R=2.0, r=0.7, domain=None):
    """Torus of revolution with positions scaled radially by 1 + warp*sin(u):
    a non-Dupin negative control for the residual pipelines."""
    domain = domain or ParamDomain()

    def stack3(a, b, c):
        return np.stack(np.broadcast_arrays(a, b, c), axis=-1)

    def pos(u, v):
        base = stack3(
            (R + r * np.cos(v)) * np.cos(u),
            (R + r * np.cos(v)) * np.sin(u),
            r * np.sin(v),
        )
        f = np.asarray(1.0 + warp * np.sin(u))
        return f[..., None] * base

    return ParametricSurface("euclidean", pos, domain, name="warped_torus",
                             params={"warp": warp, "R": R, "r": r})


# --- pushforward through the chart maps -----------------------------------------

def pushforward(s, mapping, domain=None):
    """Compose a surface with stereo / hyp_stereo / identity into R^3.

    Analytic partials are composed by the chain rule when the source surface
    carries them; otherwise finite differences take over downstream.
    """
    domain = domain or s.domain
    if mapping == "identity":
        return s
    if mapping == "stereo":
        if s.form != "sphere":
            raise GeometryError("stereo pushforward needs a spherical surface")
        phi, J, H = sf.stereo, sf.stereo_jac, sf.stereo_hess
    elif mapping == "hyp_stereo":
        if s.form != "hyperbolic":
            raise GeometryError("hyp_stereo pushforward needs a hyperbolic surface")
        phi, J, H = sf.hyp_stereo, sf.hyp_stereo_jac, sf.hyp_stereo_hess
    else:
        raise GeometryError(f"unknown pushforward map {mapping!r}")

    pos = lambda u, v: phi(s.position(u, v))
    kwargs = {}
    if s.has_analytic_partials:
        def d1(u, v, which):
            x = s.position(u, v)
            t = s.du(u, v) if which == "u" else s.dv(u, v)
            return np.einsum("...kj,...j->...k", J(x), t)

        def d2(u, v, which):
            x = s.position(u, v)
            xu, xv = s.d1(u, v)
            Jx, Hx = J(x), H(x)
            if which == "uu":
                t2, ta, tb = s.duu(u, v), xu, xu
            elif which == "uv":
                t2, ta, tb = s.duv(u, v), xu, xv
            else:
                t2, ta, tb = s.dvv(u, v), xv, xv
            return np.einsum("...kj,...j->...k", Jx, t2) + np.einsum(
                "...kij,...i,...j->...k", Hx, ta, tb
            )

        kwargs = dict(
            du=lambda u, v: d1(u, v, "u"),
            dv=lambda u, v: d1(u, v, "v"),
            duu=lambda u, v: d2(u, v, "uu"),
            duv=lambda u, v: d2(u, v, "uv"),
            dvv=lambda u, v: d2(u, v, "vv"),
        )
    return ParametricSurface(
        "euclidean", pos, domain, name=f"{s.name}_{mapping}", params=dict(s.params),
        **kwargs,
    )


# --- classification ---------------------------------------------------------------

def _flow_curvature_derivative(s, U, V, which, arc_step=1e-3):
    """Derivative of a principal curvature along its own curvature line,
    by a central difference between two short RK4 flows of the direction field."""
    shape = U.shape
    pts = np.stack([U.ravel(), V.ravel()], axis=-1)

    def direction(p, ref):
        data = principal_curvatures(s, p[:, 0], p[:, 1])
        d = data.dir_a if which == "a" else data.dir_c
        sgn = np.sign(np.sum(d * ref, axis=-1))
        sgn = np.where(sgn == 0, 1.0, sgn)
        return d * sgn[:, None]

    base = principal_curvatures(s, pts[:, 0], pts[:, 1])
    d0 = base.dir_a if which == "a" else base.dir_c

    def rk4(p, h):
        k1 = direction(p, d0)
        k2 = direction(p + 0.5 * h * k1, d0)
        k3 = direction(p + 0.5 * h * k2, d0)
        k4 = direction(p + h * k3, d0)
        return p + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    plus = rk4(pts, arc_step)
    minus = rk4(pts, -arc_step)
    kp = principal_curvatures(s, plus[:, 0], plus[:, 1])
    km = principal_curvatures(s, minus[:, 0], minus[:, 1])
    fp = kp.a if which == "a" else kp.c
    fm = km.a if which == "a" else km.c
    return ((fp - fm) / (2 * arc_step)).reshape(shape)


def classify(s, iso_tol=None, dupin_tol=None, arc_step=1e-3):
    """Isoparametric / Dupin verdicts over the surface's sample grid.

    isoparametric: each principal curvature has spread < iso_tol over the grid.
    dupin: the derivative of each principal curvature along its own curvature
    line stays below dupin_tol everywhere, with distinct curvatures; umbilic
    points make the Dupin verdict undefined there (excluded, reported).
    """
    analytic = s.has_analytic_partials
    if iso_tol is None:
        iso_tol = 1e-6 if analytic else 1e-3
    if dupin_tol is None:
        dupin_tol = 1e-6 if analytic else 1e-3
    umbilic_tol = 1e-9 if analytic else 1e-5
    U, V = s.domain.mesh()
    data = principal_curvatures(s, U, V, umbilic_tol=umbilic_tol)
    umbilic_idx = np.argwhere(data.umbilic)
    report = {
        "surface": s.name,
        "params": dict(s.params),
        "grid": (s.domain.nu, s.domain.nv),
        "iso_tol": iso_tol,
        "dupin_tol": dupin_tol,
        "spread_a": float(np.ptp(data.a)),
        "spread_c": float(np.ptp(data.c)),
        "umbilic_count": int(len(umbilic_idx)),
    }
    isoparametric = report["spread_a"] < iso_tol and report["spread_c"] < iso_tol
    if data.umbilic.all():
        warnings.warn("surface is umbilic on the whole grid; Dupin undefined")
        report["dupin_derivative_a"] = report["dupin_derivative_c"] = float("nan")
        return {
            "isoparametric": isoparametric, "dupin": None,
            "umbilic_points": umbilic_idx.tolist(), "report": report,
        }
    if data.umbilic.any():
        warnings.warn("umbilic points found; excluded from the Dupin test")
    mask = ~data.umbilic
    da = _flow_curvature_derivative(s, U, V, "a", arc_step)
    dc = _flow_curvature_derivative(s, U, V, "c", arc_step)
    report["dupin_derivative_a"] = float(np.max(np.abs(da[mask])))
    report["dupin_derivative_c"] = float(np.max(np.abs(dc[mask])))
    dupin = (
        report["dupin_derivative_a"] < dupin_tol
        and report["dupin_derivative_c"] < dupin_tol
        and not data.umbilic.any()
    )
    return {
        "isoparametric": isoparametric,
        "dupin": bool(dupin),
        "umbilic_points": umbilic_idx.tolist(),
        "report": report,
    }


# --- Euclidean adapted frames and the Dupin PDE system ---------------------------

def euclidean_best_frame(s):
    """Adapted frame field (x, e) in E(3) with e1, e2 the principal directions
    ordered by curvature and e3 = e1 x e2; signs propagated from the base corner.
    """
    if s.form != "euclidean":
        raise GeometryError("adapted Euclidean frames need a surface in R^3")
    U, V = s.domain.mesh()
    data = principal_curvatures(s, U, V)
    if data.umbilic.any():
        bad = np.argwhere(data.umbilic).tolist()
        raise UmbilicError(f"umbilic grid points: {bad[:8]}{'...' if len(bad) > 8 else ''}")
    e1 = ambient_direction(s, U, V, data.dir_a)
    e2 = ambient_direction(s, U, V, data.dir_c)
    e1 = e1 / np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = e2 / np.linalg.norm(e2, axis=-1, keepdims=True)
    e1 = _propagate_sign(e1)
    e2 = _propagate_sign(e2)
    e3 = np.cross(e1, e2)
    x = s.position(U, V)
    nu, nv = U.shape
    mats = np.zeros((nu, nv, 4, 4))
    mats[..., 0, 0] = 1.0
    mats[..., 1:, 0] = x
    mats[..., 1:, 1] = e1
    mats[..., 1:, 2] = e2
    mats[..., 1:, 3] = e3
    from .frames import FrameField  # local import to avoid a cycle

    return FrameField("e3", mats, s.domain)


def _propagate_sign(field):
    """Flip vector signs along row 0 then down each column for continuity."""
    out = field.copy()
    for i in range(1, out.shape[0]):
        flip = np.sum(out[i, 0] * out[i - 1, 0]) < 0
        if flip:
            out[i, 0] = -out[i, 0]
    for j in range(1, out.shape[1]):
        flip = np.sum(out[:, j] * out[:, j - 1], axis=-1) < 0
        out[:, j][flip] = -out[:, j][flip]
    return out


def coframe_solve(theta1, theta2, psi):
    """Express a 1-form psi = x theta1 + y theta2 given (du, dv) coefficient
    grids of all three; returns (x, y) grids."""
    A = np.stack(
        [np.stack([theta1[0], theta2[0]], axis=-1),
         np.stack([theta1[1], theta2[1]], axis=-1)], axis=-2
    )
    b = np.stack([psi[0], psi[1]], axis=-1)
    sol = np.linalg.solve(A, b[..., None])[..., 0]
    return sol[..., 0], sol[..., 1]


def dupin_pde_residual(ff):
    """Residuals of the Dupin system for an adapted Euclidean frame field:

        da = p(a-c) theta^2,   dc = q(a-c) theta^1,
        p_2 - q_1 = ac + p^2 + q^2,

    with the first two taken as full 1-form residuals (their theta^1 resp.
    theta^2 components are the statements "each curvature is constant along
    its own curvature line"; the remaining components are Codazzi)."""
    from .frames import pullback_mc, grid_gradient

    mc = pullback_mc(ff)
    th1 = (mc.omega_u[..., 1, 0], mc.omega_v[..., 1, 0])
    th2 = (mc.omega_u[..., 2, 0], mc.omega_v[..., 2, 0])
    th3 = (mc.omega_u[..., 3, 0], mc.omega_v[..., 3, 0])
    w31 = (mc.omega_u[..., 3, 1], mc.omega_v[..., 3, 1])
    w32 = (mc.omega_u[..., 3, 2], mc.omega_v[..., 3, 2])
    w21 = (mc.omega_u[..., 2, 1], mc.omega_v[..., 2, 1])
    a, ra = coframe_solve(th1, th2, w31)
    rc, c = coframe_solve(th1, th2, w32)
    p, q = coframe_solve(th1, th2, w21)

    def coframe_derivatives(f):
        fu = grid_gradient(f, mc.du, axis=0, periodic=mc.domain.periodic_u)
        fv = grid_gradient(f, mc.dv, axis=1, periodic=mc.domain.periodic_v)
        return coframe_solve(th1, th2, (fu, fv))

    a1, a2 = coframe_derivatives(a)
    c1, c2 = coframe_derivatives(c)
    p1, p2 = coframe_derivatives(p)
    q1, q2 = coframe_derivatives(q)
    return {
        "eq_a": float(max(np.max(np.abs(a1)), np.max(np.abs(a2 - p * (a - c))))),
        "eq_c": float(max(np.max(np.abs(c2)), np.max(np.abs(c1 - q * (a - c))))),
        "eq_gauss": float(np.max(np.abs(p2 - q1 - (a * c + p * p + q * q)))),
        "theta3": float(np.max(np.abs(th3[0])) + np.max(np.abs(th3[1]))),
        "offdiag_a": float(np.max(np.abs(ra))),
        "offdiag_c": float(np.max(np.abs(rc))),
        "fields": {"a": a, "c": c, "p": p, "q": q},
    }
