"""Euclidean primitives on finite point sets.

Distances to finite clouds, open balls, convex hulls and nearest-point
projection onto polytopes. Points are plain 1-d ``numpy`` arrays; clouds wrap
an ``(n, d)`` array.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import InputError, NumericalError

TOL_GEO = 1e-9
"""Tolerance for projection stationarity and for certified inequalities."""

HULL_TOL = 1e-12
"""Relative tolerance of the orientation tests used for minimal hulls."""


def as_point(coords):
    """Return ``coords`` as a finite float vector.

    Raises
    ------
    InputError
        If the coordinates are empty, not one-dimensional or not finite.
    """
    try:
        q = np.asarray(coords, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"point coordinates must be numeric: {exc}") from None
    if q.ndim == 0:
        q = q.reshape(1)
    if q.ndim != 1 or q.size == 0:
        raise InputError(f"a point needs a 1-d coordinate vector, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise InputError("point coordinates must be finite")
    return q


@dataclass(frozen=True)
class PointCloud:
    """Nonempty finite set of points of uniform dimension.

    Parameters
    ----------
    points : array_like, shape (n_points, dim)
        Coordinates. A 1-d input is read as ``n`` points on the line.
    label : str, optional
        Free-form name carried into reports.
    """

    points: np.ndarray
    label: str = None

    def __post_init__(self):
        try:
            pts = np.array(self.points, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cloud points must form a numeric (n, d) array: {exc}") from None
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise InputError(f"a cloud needs a nonempty (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InputError("cloud coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def diameter(self):
        """Largest pairwise distance."""
        if len(self) == 1:
            return 0.0
        hull = convex_hull(self).vertices
        return float(np.sqrt(_sq_dists(hull, hull).max()))

    def min_gap(self):
        """Smallest distance between two distinct points; ``inf`` if none."""
        pts = np.unique(self.points, axis=0)
        if len(pts) < 2:
            return float("inf")
        d2 = _sq_dists(pts, pts)
        np.fill_diagonal(d2, np.inf)
        return float(np.sqrt(d2.min()))

    def to_dict(self):
        out = {"dim": int(self.dim), "points": self.points.tolist()}
        if self.label is not None:
            out["label"] = self.label
        return out

    @classmethod
    def from_dict(cls, data):
        try:
            dim = int(data["dim"])
            points = np.asarray(data["points"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed point cloud: {exc}") from exc
        if points.ndim == 1 and dim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[1] != dim:
            raise InputError(f"cloud points do not match declared dim {dim}")
        return cls(points, label=data.get("label"))


@dataclass(frozen=True)
class Ball:
    """Open ball ``{y : |y - center| < radius}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise InputError(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class ConvexBody:
    """Polytope given by its extreme points.

    ``indices`` records, when known, the rows of the source cloud that became
    vertices.
    """

    vertices: np.ndarray
    indices: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] == 0:
            raise InputError("a convex body needs at least one vertex")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self):
        return self.vertices.shape[1]


def _sq_dists(a, b):
    diff = a[:, None, :] - b[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _check_dim(q, dim):
    if q.shape[-1] != dim:
        raise InputError(f"dimension mismatch: {q.shape[-1]} vs {dim}")


def cloud_distances(queries, P):
    """Distances from each row of ``queries`` to the nearest point of ``P``.

    Vectorised core of :func:`distance_to_cloud`; returns ``(dist, nearest)``
    where ``nearest`` holds row indices into ``P.points``.
    """
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    pts = P.points if isinstance(P, PointCloud) else np.atleast_2d(P)
    _check_dim(Q, pts.shape[1])
    dist = np.empty(len(Q))
    nearest = np.empty(len(Q), dtype=int)
    # chunk to bound the (m, n, d) temporary
    chunk = max(1, 2_000_000 // max(1, pts.size))
    for lo in range(0, len(Q), chunk):
        d2 = _sq_dists(Q[lo:lo + chunk], pts)
        k = d2.argmin(axis=1)
        nearest[lo:lo + chunk] = k
        dist[lo:lo + chunk] = np.sqrt(d2[np.arange(len(k)), k])
    return dist, nearest


def distance_to_cloud(q, P):
    """Euclidean distance from ``q`` to the finite set ``P``.

    >>> distance_to_cloud([3.0, 4.0], PointCloud([[0.0, 0.0]]))
    5.0
    """
    q = as_point(q)
    _check_dim(q, P.dim)
    return float(cloud_distances(q[None, :], P)[0][0])


def ball_mask(P, center, radius):
    """Boolean mask of the points of ``P`` strictly inside the ball."""
    center = as_point(center)
    _check_dim(center, P.dim)
    diff = P.points - center
    return np.sqrt(np.einsum("ij,ij->i", diff, diff)) < radius


def ball_intersect(P, B):
    """Points of ``P`` lying in the open ball ``B``.

    Returns
    -------
    PointCloud or None
        ``None`` signals an empty intersection; the caller decides whether
        that is an error.
    """
    mask = ball_mask(P, B.center, B.radius)
    if not mask.any():
        return None
    return PointCloud(P.points[mask], label=P.label)


def affine_rank(points, tol=HULL_TOL):
    """Dimension of the affine hull and an orthonormal basis of its span.

    Returns ``(rank, origin, basis)`` with ``basis`` of shape ``(rank, dim)``.
    """
    pts = np.atleast_2d(points)
    origin = pts.mean(axis=0)
    centred = pts - origin
    scale = max(np.abs(centred).max(initial=0.0), 1.0)
    if len(pts) == 1:
        return 0, origin, np.zeros((0, pts.shape[1]))
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    rank = int(np.sum(s > tol * scale * np.sqrt(len(pts))))
    return rank, origin, vt[:rank]


def _extreme_indices(pts):
    rank, origin, basis = affine_rank(pts)
    if rank == 0:
        return np.array([0])
    y = (pts - origin) @ basis.T
    if rank == 1:
        return np.unique([int(y[:, 0].argmin()), int(y[:, 0].argmax())])
    try:
        hull = ConvexHull(y)
    except QhullError:
        hull = ConvexHull(y, qhull_options="QJ")
    return np.sort(hull.vertices)


def convex_hull(P):
    """Minimal vertex representation of ``conv(P)``.

    Works for degenerate clouds (coincident, collinear or coplanar points) by
    running the hull in the coordinates of the affine span. Vertices come out
    in ascending order of their row in ``P``.

    Parameters
    ----------
    P : PointCloud

    Returns
    -------
    ConvexBody
    """
    pts = P.points if isinstance(P, PointCloud) else np.atleast_2d(P)
    idx = _extreme_indices(pts)
    if 2 < len(idx) <= 64:
        # drop near-redundant vertices qhull may keep on flat faces
        scale = max(np.abs(pts[idx]).max(), 1.0)
        keep = []
        for pos, i in enumerate(idx):
            others = pts[np.delete(idx, pos)]
            dist, _ = distance_to_hull(pts[i], others)
            if dist > HULL_TOL * scale:
                keep.append(i)
        idx = np.asarray(keep, dtype=int)
    return ConvexBody(pts[idx], indices=idx)


def _affine_minimizer(A):
    """Weights ``mu`` with ``sum(mu) == 1`` minimising ``|mu @ A|``."""
    k = len(A)
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = A @ A.T
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return sol[:k]


def min_norm_point(A, tol=1e-14, max_iter=None):
    """Point of minimum Euclidean norm in ``conv(A)`` (Wolfe's algorithm).

    Parameters
    ----------
    A : array, shape (n_points, dim)
    tol : float
        Relative optimality tolerance on the Frank-Wolfe gap
        ``|x|^2 - min_i <a_i, x>``.
    max_iter : int, optional
        Major-cycle budget, default ``50 * (n_points + dim)``.

    Returns
    -------
    x : array, shape (dim,)
    weights : array, shape (n_points,)
        Convex weights with ``weights @ A == x``.
    gap : float
        Final Frank-Wolfe gap, an upper bound on ``|x|^2 - min |y|^2``.

    Raises
    ------
    NumericalError
        If the budget runs out; the best iterate and its gap are attached.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n, dim = A.shape
    if max_iter is None:
        max_iter = 50 * (n + dim)
    norms = np.einsum("ij,ij->i", A, A)
    scale = max(norms.max(), 1e-300)
    active = [int(norms.argmin())]
    lam = np.array([1.0])
    x = A[active[0]].copy()
    eps = 1e-14
    gap = np.inf
    for _ in range(max_iter):
        dots = A @ x
        j = int(dots.argmin())
        gap = float(x @ x - dots[j])
        if gap <= tol * scale or j in active:
            break
        active.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(len(active) + 1):
            mu = _affine_minimizer(A[active])
            if np.all(mu > eps):
                lam = mu
                break
            neg = mu <= eps
            ratios = lam[neg] / np.maximum(lam[neg] - mu[neg], 1e-300)
            theta = min(1.0, float(ratios.min()))
            lam = theta * mu + (1.0 - theta) * lam
            keep = lam > eps
            if not keep.any():
                keep[int(lam.argmax())] = True
            active = [a for a, k in zip(active, keep) if k]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ A[active]
    else:
        weights = np.zeros(n)
        weights[active] = lam
        raise NumericalError(
            f"minimum-norm-point search did not converge in {max_iter} cycles",
            best=x, gap=gap)
    weights = np.zeros(n)
    weights[active] = lam
    gap = float(x @ x - (A @ x).min())
    return x, weights, max(gap, 0.0)


def _vertex_array(C):
    if isinstance(C, ConvexBody):
        return C.vertices
    if isinstance(C, PointCloud):
        return C.points
    return np.atleast_2d(np.asarray(C, dtype=float))


def distance_to_hull(q, C, tol_geo=TOL_GEO):
    """Distance from ``q`` to ``conv(C)`` and the nearest point.

    ``C`` may be a :class:`ConvexBody`, a :class:`PointCloud` or a raw
    ``(n, d)`` array; non-extreme points are harmless.

    Returns
    -------
    distance : float
    nearest : array, shape (dim,)

    Raises
    ------
    NumericalError
        If the projection does not reach stationarity ``tol_geo``.
    """
    q = as_point(q)
    V = _vertex_array(C)
    _check_dim(q, V.shape[1])
    if len(V) == 1:
        return float(np.linalg.norm(q - V[0])), V[0].copy()
    shifted = V - q
    x, _, gap = min_norm_point(shifted)
    if gap > tol_geo:
        raise NumericalError(f"projection gap {gap:.3g} exceeds tolerance", best=x + q, gap=gap)
    return float(np.linalg.norm(x)), x + q


def hausdorff_semidistance(A, B):
    """Smallest ``eps`` with ``A`` inside the closed ``eps``-neighbourhood of ``B``.

    Asymmetric: ``hausdorff_semidistance(A, B) == 0`` iff ``A`` is a subset
    of ``B``.
    """
    if A.dim != B.dim:
        raise InputError(f"dimension mismatch: {A.dim} vs {B.dim}")
    dist, _ = cloud_distances(A.points, B)
    return float(dist.max())
