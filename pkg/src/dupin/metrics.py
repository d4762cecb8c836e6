"""Indefinite-signature linear algebra on the small quadratic spaces R^4, R^{3,1},
R^{4,1} and R^{4,2}.

Everything here is dense double precision on matrices of size at most 6x6.
Vectors are plain numpy arrays; the metric object supplies the Gram matrix,
the basis bookkeeping (epsilon / delta / lambda bases) and the pairing
structure needed to coordinatize the matrix algebras so(gram).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

SQRT2 = float(np.sqrt(2.0))

MEMBERSHIP_TOL = 1e-10
CLOSURE_TOL = 1e-10


class GeometryError(ValueError):
    """Base class for geometric precondition failures."""


class MembershipError(GeometryError):
    pass


@dataclass(frozen=True)
class Metric:
    """A nondegenerate symmetric bilinear form in a fixed basis.

    ``dual_index[a]`` is the unique index b with gram[a, b] != 0; every gram
    used here pairs each basis vector with exactly one basis vector (itself
    for orthogonal bases, a partner for the null delta/lambda bases).
    ``eta[a]`` is that nonzero pairing value (+1 or -1).
    """

    name: str
    gram: np.ndarray
    basis_tag: str = "epsilon"
    dual_index: tuple = field(init=False)
    eta: tuple = field(init=False)

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise MembershipError("gram must be square")
        if not np.allclose(g, g.T, atol=1e-14):
            raise MembershipError("gram must be symmetric")
        object.__setattr__(self, "gram", g)
        dual = []
        eta = []
        for a in range(g.shape[0]):
            nz = np.nonzero(np.abs(g[a]) > 1e-14)[0]
            if len(nz) != 1:
                raise MembershipError("gram rows must have a single pairing entry")
            dual.append(int(nz[0]))
            eta.append(float(g[a, nz[0]]))
        object.__setattr__(self, "dual_index", tuple(dual))
        object.__setattr__(self, "eta", tuple(eta))

    @property
    def dim(self):
        return self.gram.shape[0]


def _diag(*entries):
    return np.diag(np.asarray(entries, dtype=float))

# The six quadratic spaces of the toolkit. epsilon bases are the standard
# orthonormal ones; signature ++++-- on R^{4,2} with the two minus slots last.
R3 = Metric("R3", np.eye(3))
R4 = Metric("R4", np.eye(4))
R31 = Metric("R31", _diag(1, 1, 1, -1))
R41 = Metric("R41", _diag(1, 1, 1, 1, -1))
R42 = Metric("R42", _diag(1, 1, 1, 1, -1, -1))

# delta basis of R^{4,1}: delta0 = (eps4+eps0)/sqrt2, delta_i = eps_i,
# delta4 = (eps4-eps0)/sqrt2.  Columns of P_DELTA are the delta vectors in
# epsilon coordinates; P is orthogonal.
P_DELTA = np.array(
    [
        [1 / SQRT2, 0, 0, 0, -1 / SQRT2],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [1 / SQRT2, 0, 0, 0, 1 / SQRT2],
    ]
)

# lambda basis of R^{4,2}: lambda0 = (eps5+eps0)/sqrt2, lambda1 = (eps4+eps1)/sqrt2,
# lambda2 = eps2, lambda3 = eps3, lambda4 = (eps4-eps1)/sqrt2, lambda5 = (eps5-eps0)/sqrt2.
P_LAMBDA = np.array(
    [
        [1 / SQRT2, 0, 0, 0, 0, -1 / SQRT2],
        [0, 1 / SQRT2, 0, 0, -1 / SQRT2, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 1 / SQRT2, 0, 0, 1 / SQRT2, 0],
        [1 / SQRT2, 0, 0, 0, 0, 1 / SQRT2],
    ]
)

def _clean(g):
    g = np.where(np.abs(g) < 1e-12, 0.0, g)
    return np.where(np.abs(g - np.round(g)) < 1e-12, np.round(g), g)


R41_DELTA = Metric("R41_delta", _clean(P_DELTA.T @ R41.gram @ P_DELTA), basis_tag="delta")
R42_LAMBDA = Metric("R42_lambda", _clean(P_LAMBDA.T @ R42.gram @ P_LAMBDA), basis_tag="lambda")

MOEB = R41_DELTA   # Moebius group metric (5x5, delta basis)
LIE = R42_LAMBDA   # Lie sphere group metric (6x6, lambda basis)

_BASIS_CHANGE = {
    (5, "epsilon", "delta"): np.linalg.inv(P_DELTA),
    (5, "delta", "epsilon"): P_DELTA,
    (6, "epsilon", "lambda"): np.linalg.inv(P_LAMBDA),
    (6, "lambda", "epsilon"): P_LAMBDA,
}


def inner(u, v, metric):
    """Bilinear form <u, v> = u^T gram v; broadcasts over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != metric.dim or v.shape[-1] != metric.dim:
        raise MembershipError(
            f"dimension mismatch: got {u.shape[-1]}/{v.shape[-1]}, metric {metric.dim}"
        )
    return np.einsum("...i,ij,...j->...", u, metric.gram, v)


def norm2(u, metric):
    return inner(u, u, metric)


def change_basis(x, dim, src, dst, kind="vector"):
    """Convert coordinates between the named bases of R^{4,1} / R^{4,2}.

    kind="vector": arrays of coordinate vectors, coordinate axis last.
    kind="frame":  matrices whose columns are vectors (left-multiplied).
    kind="operator": linear maps (conjugated).
    """
    x = np.asarray(x, dtype=float)
    if src == dst:
        return x.copy()
    key = (dim, src, dst)
    if key not in _BASIS_CHANGE:
        raise MembershipError(f"no basis change {src}->{dst} in dimension {dim}")
    B = _BASIS_CHANGE[key]
    if kind == "vector":
        return np.einsum("ij,...j->...i", B, x)
    if kind == "frame":
        return B @ x
    if kind == "operator":
        return B @ x @ np.linalg.inv(B)
    raise MembershipError(f"unknown kind {kind!r}")


def group_residual(T, metric):
    """Max-abs entry of T^T gram T - gram; zero iff T preserves the form."""
    T = np.asarray(T, dtype=float)
    g = metric.gram
    r = np.swapaxes(T, -1, -2) @ g @ T - g
    return float(np.max(np.abs(r)))


def algebra_residual(X, metric):
    """Max-abs entry of X^T gram + gram X; zero iff X is in so(gram)."""
    X = np.asarray(X, dtype=float)
    g = metric.gram
    r = np.swapaxes(X, -1, -2) @ g + g @ X
    return float(np.max(np.abs(r)))


def algebra_project(X, metric):
    """Projection of a matrix onto so(gram) along its g-symmetric complement."""
    X = np.asarray(X, dtype=float)
    g = metric.gram
    ginv = np.linalg.inv(g)
    return 0.5 * (X - ginv @ np.swapaxes(X, -1, -2) @ g)


def bracket(X, Y):
    return X @ Y - Y @ X


def mat_exp(X):
    """Matrix exponential (scaling-and-squaring Pade via scipy)."""
    return expm(np.asarray(X, dtype=float))


@dataclass
class ProjectivePoint:
    """Equivalence class of a nonzero vector; canonical representative scales
    the largest-magnitude coordinate to +1 (ties broken by lowest index)."""

    rep: np.ndarray

    def __init__(self, rep):
        rep = np.asarray(rep, dtype=float)
        m = np.max(np.abs(rep))
        if m == 0.0 or not np.isfinite(m):
            raise MembershipError("projective point needs a nonzero finite representative")
        idx = int(np.argmax(np.abs(rep)))
        self.rep = rep / rep[idx]

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.rep.shape == other.rep.shape and bool(
            np.allclose(self.rep, other.rep, atol=1e-10)
        )

    def __repr__(self):
        return f"ProjectivePoint({np.array2string(self.rep, precision=6)})"


def projective_normalize(reps):
    """Canonical projective scaling applied along the last axis (vectorized)."""
    reps = np.asarray(reps, dtype=float)
    idx = np.argmax(np.abs(reps), axis=-1)
    scale = np.take_along_axis(reps, idx[..., None], axis=-1)
    return reps / scale


# --- algebra coordinates -----------------------------------------------------

def algebra_entry_basis(metric):
    """Independent-entry basis of so(gram).

    Returns a list of ((a, b), matrix) pairs.  Entry (a, b) determines its
    partner entry (b*, a*) through X[b*, a*] = -(eta_a/eta_b) X[a, b]; entries
    that are their own partner are forced to zero and omitted.  This gives 3
    coordinates for so(3), 10 for the Moebius algebra, 15 for the Lie algebra.
    """
    n = metric.dim
    dual = metric.dual_index
    eta = metric.eta
    basis = []
    for a in range(n):
        for b in range(n):
            partner = (dual[b], dual[a])
            if partner == (a, b):
                continue  # forced zero entry
            if partner < (a, b):
                continue  # already covered by its partner
            M = np.zeros((n, n))
            M[a, b] = 1.0
            M[partner] = -eta[a] / eta[b]
            basis.append(((a, b), M))
    return basis


def algebra_coordinates(X, metric):
    """Coordinates of an algebra element in the independent-entry basis."""
    X = np.asarray(X, dtype=float)
    return np.array([X[e] for e, _ in algebra_entry_basis(metric)])


def algebra_from_coordinates(coords, metric):
    basis = algebra_entry_basis(metric)
    X = np.zeros((metric.dim, metric.dim))
    for c, (_, M) in zip(coords, basis):
        X = X + c * M
    return X


@dataclass
class SubalgebraBasis:
    """Basis of a linear-constraint subalgebra, with bracket-closure residual."""

    metric: Metric
    elements: list
    coords: np.ndarray           # (dim, n_coords) rows are basis coordinates
    constraint_description: list
    closure_residual: float

    @property
    def dim(self):
        return len(self.elements)


def _rref(A, tol=1e-11):
    """Reduced row echelon form with partial pivoting (deterministic)."""
    A = np.array(A, dtype=float)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = r + int(np.argmax(np.abs(A[r:, c])))
        if np.abs(A[pivot, c]) < tol:
            continue
        A[[r, pivot]] = A[[pivot, r]]
        A[r] = A[r] / A[r, c]
        for i in range(rows):
            if i != r:
                A[i] = A[i] - A[i, c] * A[r]
        r += 1
    return A[:r]


def subalgebra_from_constraints(constraints, metric, closure_tol=CLOSURE_TOL):
    """Solve a list of linear functionals on Maurer-Cartan entries inside so(gram).

    Each constraint is a dict {(a, b): coeff} meaning sum coeff * omega^a_b = 0.
    Returns a SubalgebraBasis whose rows are brought to reduced row echelon
    form over the entry coordinates, so the basis is deterministic and its
    elements are duals of the free entries whenever the constraints are
    entry-aligned.  Inconsistent/overfull constraints yield an empty basis.
    """
    basis = algebra_entry_basis(metric)
    ncoord = len(basis)
    M = np.zeros((max(len(constraints), 1), ncoord))
    for k, functional in enumerate(constraints):
        for j, (_, B) in enumerate(basis):
            M[k, j] = sum(coeff * B[entry] for entry, coeff in functional.items())
    # nullspace via SVD
    _, s, vh = np.linalg.svd(M)
    tol = max(M.shape) * np.finfo(float).eps * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > max(tol, 1e-12)))
    null = vh[rank:]
    if null.shape[0] == 0:
        return SubalgebraBasis(metric, [], np.zeros((0, ncoord)), list(constraints), 0.0)
    coords = _rref(null)
    elements = [algebra_from_coordinates(row, metric) for row in coords]
    closure = _closure_residual(coords, elements, metric)
    return SubalgebraBasis(metric, elements, coords, list(constraints), closure)


def _closure_residual(coords, elements, metric):
    """Max distance of pairwise brackets from the span of the basis."""
    if len(elements) < 2:
        return 0.0
    A = coords.T  # n_coords x dim
    worst = 0.0
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            b = algebra_coordinates(bracket(elements[i], elements[j]), metric)
            sol, *_ = np.linalg.lstsq(A, b, rcond=None)
            worst = max(worst, float(np.max(np.abs(A @ sol - b))) if b.size else 0.0)
    return worst


def span_projection_residual(X, sub):
    """Distance of an algebra element from the span of a SubalgebraBasis."""
    b = algebra_coordinates(X, sub.metric)
    if sub.coords.shape[0] == 0:
        return float(np.max(np.abs(b)))
    A = sub.coords.T
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.max(np.abs(A @ sol - b)))


# --- the Euclidean motion group (not metric-defined) -------------------------

def e3_matrix(translation, rotation):
    """E(3) element [[1, 0], [y, A]] acting as x -> y + A x."""
    T = np.eye(4)
    T[1:, 0] = np.asarray(translation, dtype=float)
    T[1:, 1:] = np.asarray(rotation, dtype=float)
    return T


def e3_residual(T):
    T = np.asarray(T, dtype=float)
    A = T[..., 1:, 1:]
    r1 = np.max(np.abs(np.swapaxes(A, -1, -2) @ A - np.eye(3)))
    top = np.zeros(4)
    top[0] = 1.0
    r2 = np.max(np.abs(T[..., 0, :] - top))
    return float(max(r1, r2))


def e3_algebra_residual(X):
    X = np.asarray(X, dtype=float)
    S = X[..., 1:, 1:]
    r1 = np.max(np.abs(S + np.swapaxes(S, -1, -2)))
    r2 = np.max(np.abs(X[..., 0, :]))
    return float(max(r1, r2))


def e3_algebra_project(X):
    X = np.asarray(X, dtype=float)
    Y = X.copy()
    Y[..., 0, :] = 0.0
    S = X[..., 1:, 1:]
    Y[..., 1:, 1:] = 0.5 * (S - np.swapaxes(S, -1, -2))
    return Y


class MatrixGroup:
    """Uniform handle over the matrix groups used by the frame calculus."""

    def __init__(self, name, n, metric=None):
        self.name = name
        self.n = n
        self.metric = metric

    def membership_residual(self, T):
        if self.metric is None:
            return e3_residual(T)
        return group_residual(T, self.metric)

    def algebra_residual(self, X):
        if self.metric is None:
            return e3_algebra_residual(X)
        return algebra_residual(X, self.metric)

    def algebra_project(self, X):
        if self.metric is None:
            return e3_algebra_project(X)
        return algebra_project(X, self.metric)


GROUPS = {
    "so3": MatrixGroup("so3", 3, R3),
    "so4": MatrixGroup("so4", 4, R4),
    "so31": MatrixGroup("so31", 4, R31),
    "moebius": MatrixGroup("moebius", 5, MOEB),
    "lie": MatrixGroup("lie", 6, LIE),
    "e3": MatrixGroup("e3", 4, None),
}
