"""Estimating how far a sampled set is from being paraconvex.

For a closed set ``P`` and a ball ``B = B(p, r)`` with ``d(p, P) < r`` the
local defect is ``sup { d(q, P) : q in conv(B & P) } / r``; the paraconvexity
defect ``alpha(P)`` is the supremum of that ratio over all admissible balls.
Klee's inequality bounds it by 1 in Euclidean space and it vanishes exactly
on convex sets.

Everything here works on a finite sample of the set. A finite set with two
points or more always has defect 1 (take a ball that just covers the closest
pair), so the estimators accept a ``sampling_radius``: the covering radius of
the underlying set by the sample. Each ratio is then computed as
``max(D - sampling_radius, 0) / r`` where ``D`` is the exact hull distance of
the captured points. This is a valid lower bound for *every* closed set the
sample approximates within ``sampling_radius``.

The hull distance ``D(S) = max { d(q, P) : q in conv S }`` is computed
exactly: ``q -> d(q, P)^2`` is convex on each Voronoi cell, so its maximum
over the polytope is attained at a vertex of the cell decomposition
{Voronoi cell & conv S}. Those vertices are enumerated from the Delaunay
faces of ``P`` and the facets of ``conv S``.
"""
import itertools
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError

from .errors import InputError, ResourceError
from .geometry import TOL_GEO, PointCloud, affine_rank, as_point, cloud_distances

_REL_TOL = 1e-10
# radius inflation used when a ball is shrunk onto a minimal enclosing ball
_SHRINK = 1e-9


# ---------------------------------------------------------------------------
# reports


@dataclass
class ParaconvexityReport:
    """Outcome of :func:`defect`.

    ``alpha_hat`` is a lower estimate of the defect, attained by the witness
    ball ``B(witness_center, witness_radius)`` and the hull point
    ``witness_hull_point``.
    """

    alpha_hat: float
    witness_center: np.ndarray
    witness_radius: float
    witness_hull_point: np.ndarray
    search_resolution: dict = field(default_factory=dict)
    sampling_radius: float = 0.0

    @property
    def witness(self):
        return self.witness_center, self.witness_radius, self.witness_hull_point

    def to_dict(self):
        return {
            "alpha_hat": float(self.alpha_hat),
            "witness": {
                "center": [float(v) for v in self.witness_center],
                "radius": float(self.witness_radius),
                "hull_point": [float(v) for v in self.witness_hull_point],
            },
            "sampling_radius": float(self.sampling_radius),
            "search_resolution": dict(self.search_resolution),
            "lower_estimate": True,
        }


@dataclass
class ParaconvexityProfile:
    """Estimated function ``h(r)``: the largest local defect at radius ``r``."""

    radii: np.ndarray
    values: np.ndarray
    sampling_radius: float = 0.0

    def to_dict(self):
        return {
            "radii": [float(r) for r in self.radii],
            "h": [float(v) for v in self.values],
            "sampling_radius": float(self.sampling_radius),
        }

    def to_csv(self):
        rows = ["r,h_hat"]
        rows += [f"{r:.17g},{v:.17g}" for r, v in zip(self.radii, self.values)]
        return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# exact hull distance


def _delaunay_faces(pts, rank, origin, basis):
    """Vertex sets of the Delaunay faces of ``pts``, keyed by face size."""
    n = len(pts)
    faces = {}
    if rank == 0 or n < 2:
        return faces
    Y = (pts - origin) @ basis.T
    if rank == 1:
        order = np.argsort(Y[:, 0], kind="stable")
        faces[2] = np.column_stack([order[:-1], order[1:]])
        return faces
    try:
        simplices = Delaunay(Y, qhull_options="Qbb Qc Qz Q12").simplices
    except QhullError:
        simplices = Delaunay(Y, qhull_options="QJ").simplices
    simplices = np.sort(simplices, axis=1)
    for size in range(2, rank + 2):
        combos = list(itertools.combinations(range(rank + 1), size))
        sub = np.concatenate([simplices[:, list(c)] for c in combos])
        faces[size] = np.unique(sub, axis=0)
    return faces


class _HullDistance:
    """Exact ``D(S) = max_{q in conv S} d(q, P)`` for subsets of one cloud.

    Results are cached by subset. ``hull_samples`` random convex combinations
    are added to the enumerated candidates as a safeguard for degenerate
    configurations; their generator is seeded from ``seed`` and the subset.
    """

    def __init__(self, P, hull_samples=32, seed=0):
        self.P = P
        self.pts = P.points
        self.scale = max(1.0, float(np.abs(self.pts).max(initial=0.0)))
        self.rank, origin, basis = affine_rank(self.pts)
        self.faces = _delaunay_faces(self.pts, self.rank, origin, basis)
        self.hull_samples = int(hull_samples)
        self.seed = int(seed)
        self._cache = {}

    def __call__(self, idx):
        idx = np.asarray(idx, dtype=int)
        key = idx.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = self._compute(idx)
            self._cache[key] = hit
        return hit

    def _compute(self, idx):
        S = self.pts[idx]
        k, o, B = affine_rank(S)
        if k == 0:
            return 0.0, S[0].copy()
        Y = (S - o) @ B.T
        if k == 1:
            lo, hi = Y[:, 0].min(), Y[:, 0].max()
            normals, offsets = np.array([[-1.0], [1.0]]), np.array([lo, -hi])
        else:
            try:
                eq = ConvexHull(Y).equations
            except QhullError:
                eq = ConvexHull(Y, qhull_options="QJ").equations
            # coplanar facets of sampled polytopes share one hyperplane
            eq = eq[np.unique(np.round(eq / self.scale, 10), axis=0, return_index=True)[1]]
            normals, offsets = eq[:, :-1], eq[:, -1]
        Pp = (self.pts - o) @ B.T
        w = np.einsum("ij,ij->i", self.pts - o, self.pts - o)
        tol = _REL_TOL * self.scale
        cands = [self._vertices(k, Pp, w, normals, offsets, tol)]
        if self.hull_samples:
            rng = np.random.default_rng([self.seed, zlib.crc32(idx.tobytes())])
            lam = rng.dirichlet(np.ones(len(Y)), size=self.hull_samples)
            cands.append(lam @ Y)
        Yc = np.concatenate(cands)
        inside = np.all(Yc @ normals.T + offsets <= tol, axis=1)
        Yc = Yc[inside]
        if len(Yc) == 0:
            return 0.0, S[0].copy()
        Q = o + Yc @ B
        dist, _ = cloud_distances(Q, self.P)
        j = int(np.argmax(dist))
        return float(dist[j]), Q[j]

    def _vertices(self, k, Pp, w, normals, offsets, tol):
        """Points of aff(S) that are equidistant from a Delaunay face of P
        and lie on ``m`` facet hyperplanes, for ``m + |face| - 1 = k``.

        Candidates outside conv S are dropped block by block to bound memory.
        """
        out = [np.zeros((0, k))]
        for m in range(k):
            size = k - m + 1
            faces = self.faces.get(size)
            if faces is None or len(faces) == 0:
                continue
            # equidistance rows relative to the first vertex of each face
            A_eq = 2.0 * (Pp[faces[:, 1:]] - Pp[faces[:, :1]])
            b_eq = w[faces[:, 1:]] - w[faces[:, :1]]
            for combo in itertools.combinations(range(len(normals)), m):
                if m:
                    A_f = np.broadcast_to(normals[list(combo)], (len(faces), m, k))
                    b_f = np.broadcast_to(-offsets[list(combo)], (len(faces), m))
                    A = np.concatenate([A_eq, A_f], axis=1)
                    b = np.concatenate([b_eq, b_f], axis=1)
                else:
                    A, b = A_eq, b_eq
                det = np.linalg.det(A)
                ok = np.abs(det) > 1e-12 * np.abs(A).reshape(len(A), -1).max(axis=1, initial=1.0) ** k
                if ok.any():
                    Z = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
                    out.append(Z[np.all(Z @ normals.T + offsets <= tol, axis=1)])
        return np.concatenate(out)


def hull_distance(P, indices=None):
    """Exact ``max { d(q, P) : q in conv P[indices] }`` and a maximiser.

    ``indices`` defaults to the whole cloud, in which case the value is the
    covering radius of ``conv P`` by ``P``.
    """
    P = P if isinstance(P, PointCloud) else PointCloud(P)
    if indices is None:
        indices = np.arange(len(P))
    return _HullDistance(P)(np.sort(np.asarray(indices, dtype=int)))


# ---------------------------------------------------------------------------
# minimal enclosing ball


def _circumball(R):
    """Smallest ball with all points of ``R`` on its boundary (affinely
    independent ``R``)."""
    a0 = R[0]
    if len(R) == 1:
        return a0.copy(), 0.0
    E = R[1:] - a0
    G = 2.0 * E @ E.T
    rhs = np.einsum("ij,ij->i", E, E)
    mu = np.linalg.lstsq(G, rhs, rcond=None)[0]
    c = a0 + mu @ E
    return c, float(np.sum((c - a0) ** 2))


def min_enclosing_ball(points):
    """Centre and radius of the smallest closed ball containing ``points``.

    Welzl's algorithm with a fixed shuffle, so results are deterministic.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k, o, B = affine_rank(pts)
    if k == 0:
        return pts[0].copy(), 0.0
    Y = (pts - o) @ B.T
    Y = Y[np.random.default_rng(0).permutation(len(Y))]
    eps = 1e-12 * max(1.0, float(np.abs(Y).max()))

    def solve(n, boundary):
        if boundary:
            c, r2 = _circumball(np.array(boundary))
        else:
            c, r2 = Y[0], 0.0
        if len(boundary) == k + 1:
            return c, r2
        for i in range(n):
            if np.sum((Y[i] - c) ** 2) > r2 + eps * (1.0 + np.sqrt(r2)):
                c, r2 = solve(i, boundary + [Y[i]])
        return c, r2

    c, r2 = solve(len(Y), [])
    radius = float(np.sqrt(np.max(np.sum((Y - c) ** 2, axis=1))))
    return o + c @ B, radius


# ---------------------------------------------------------------------------
# grids


def default_radii(P, count=16):
    """Geometric radius grid from half the closest gap to twice the diameter."""
    diam = P.diameter()
    if diam == 0:
        return np.array([1.0])
    gap = P.min_gap()
    lo = gap / 2.0 if gap > 0 else diam * 1e-3
    return np.geomspace(lo, 2.0 * diam, int(count))


def default_centers(P, budget=512, resolution=None):
    """Regular lattice of centres over the bounding box grown by the diameter.

    ``budget`` is the total number of centres (the per-axis count is its
    ``dim``-th root); ``resolution`` overrides it with an explicit spacing.
    """
    pts = P.points
    diam = P.diameter()
    pad = diam if diam > 0 else 1.0
    lo, hi = pts.min(axis=0) - pad, pts.max(axis=0) + pad
    if resolution is not None:
        if resolution <= 0:
            raise InputError("resolution must be positive")
        axes = [lo[j] + resolution * np.arange(int(np.floor((hi[j] - lo[j]) / resolution)) + 1)
                for j in range(P.dim)]
    else:
        per_axis = max(2, int(np.floor(budget ** (1.0 / P.dim) + 1e-9)))
        axes = [np.linspace(lo[j], hi[j], per_axis) for j in range(P.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _critical_cells(pts, delaunay_pairs=None, pair_limit=40, triple_limit=14):
    """Balls that just enclose pairs and triples of points.

    Above ``pair_limit`` points only the Delaunay edges are used as pairs.
    """
    n = len(pts)
    cells = []
    if n <= pair_limit:
        pairs = itertools.combinations(range(n), 2)
    else:
        pairs = () if delaunay_pairs is None else (tuple(e) for e in delaunay_pairs)
    for i, j in pairs:
        c = 0.5 * (pts[i] + pts[j])
        r = 0.5 * float(np.linalg.norm(pts[i] - pts[j]))
        if r > 0:
            cells.append((c, r * (1 + _SHRINK)))
    if 3 <= n <= triple_limit and pts.shape[1] >= 2:
        for tri in itertools.combinations(range(n), 3):
            c, r = min_enclosing_ball(pts[list(tri)])
            if r > 0:
                cells.append((c, r * (1 + _SHRINK)))
    return cells


# ---------------------------------------------------------------------------
# estimators


def _threads():
    try:
        return max(1, int(os.environ.get("PARASELECT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    workers = _threads()
    if workers <= 1 or len(items) < 2 * workers:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _masks(pts, centers, radius_of):
    """Ball membership masks of ``(center, radius)`` cells.

    ``radius_of`` maps the distance matrix block to an array of radii of shape
    ``(n_centers, n_radii)``. Yields ``(mask, radius, center)`` with one entry per
    distinct mask (the smallest radius wins, then the first centre).
    """
    best = {}
    chunk = max(1, 200_000 // max(1, pts.size))
    for lo in range(0, len(centers), chunk):
        C = centers[lo:lo + chunk]
        diff = pts[None, :, :] - C[:, None, :]
        dist = np.sqrt(np.einsum("cij,cij->ci", diff, diff))
        R = radius_of(dist)
        near = dist.min(axis=1)
        for ci in range(len(C)):
            for r in R[ci]:
                if not near[ci] < r:
                    continue
                mask = dist[ci] < r
                key = np.packbits(mask).tobytes()
                prev = best.get(key)
                if prev is None or r < prev[1]:
                    best[key] = (mask, float(r), C[ci])
    return best


def _ratio(D, rho, r):
    return max(D - rho, 0.0) / r


def _witness_key(ratio, c, r, q):
    # larger ratio first, then lexicographically smallest witness
    return (-ratio, tuple(np.round(c, 15)), r, tuple(np.round(q, 15)))


def defect(P, centers=None, radii=None, *, budget=512, resolution=None, radius_count=16,
           sampling_radius=0.0, hull_samples=32, seed=0, refine=True, top_k=8):
    """Lower estimate of the paraconvexity defect of a sampled set.

    Parameters
    ----------
    P : PointCloud
        Sample of the set.
    centers, radii : array_like, optional
        Search grids; default to :func:`default_centers` and
        :func:`default_radii`.
    budget, resolution, radius_count
        Size of the default grids.
    sampling_radius : float
        Covering radius of the underlying set by ``P``; subtracted from every
        hull distance before dividing by the radius.
    hull_samples, seed
        Extra random convex combinations per subset and their seed.
    refine : bool
        Also try balls enclosing pairs and triples of points, and shrink the
        best ``top_k`` cells onto the minimal enclosing ball of what they
        capture. With ``refine=False`` the estimate is the plain grid maximum
        and is monotone under grid refinement.

    Returns
    -------
    ParaconvexityReport
    """
    P = P if isinstance(P, PointCloud) else PointCloud(P)
    rho = float(sampling_radius)
    if rho < 0:
        raise InputError("sampling_radius must be non-negative")
    pts = P.points
    centers = default_centers(P, budget, resolution) if centers is None else np.atleast_2d(
        np.asarray(centers, dtype=float))
    radii = default_radii(P, radius_count) if radii is None else np.asarray(radii, dtype=float).ravel()
    if centers.shape[1] != P.dim:
        raise InputError("centre grid dimension does not match the cloud")
    if np.any(radii <= 0):
        raise InputError("radii must be positive")
    info = {
        "n_centers": int(len(centers)),
        "n_radii": int(len(radii)),
        "radius_min": float(radii.min()),
        "radius_max": float(radii.max()),
        "refined": bool(refine),
        "hull_samples": int(hull_samples),
        "seed": int(seed),
    }
    if resolution is not None:
        info["center_step"] = float(resolution)

    hd = _HullDistance(P, hull_samples, seed)
    D_all, _ = hd(np.arange(len(P)))
    fallback = ParaconvexityReport(0.0, pts[0].copy(), float(radii.min()), pts[0].copy(), info, rho)
    slack = D_all - rho
    if len(P) < 2 or slack <= 0:
        # D is monotone in the subset, so no ball can beat zero
        info["pruned_by_global_bound"] = True
        return fallback

    cells = _masks(pts, centers, lambda dist: np.broadcast_to(radii, (len(dist), len(radii))))
    if refine:
        # per-centre radii differ, so these cells are evaluated one by one
        for c, r in _critical_cells(pts, hd.faces.get(2)):
            diff = pts - c
            mask = np.sqrt(np.einsum("ij,ij->i", diff, diff)) < r
            key = np.packbits(mask).tobytes()
            prev = cells.get(key)
            if prev is None or r < prev[1]:
                cells[key] = (mask, float(r), c)
    info["n_cells"] = len(cells)

    entries = sorted(cells.values(), key=lambda e: (e[1], np.packbits(e[0]).tobytes()))

    def evaluate(entry):
        mask, r, c = entry
        if slack / r <= 0:
            return None
        D, q = hd(np.flatnonzero(mask))
        return _ratio(D, rho, r), c, r, q, mask

    results = [res for res in _pmap(evaluate, entries) if res is not None]
    if not results:
        return fallback
    results.sort(key=lambda t: _witness_key(t[0], t[1], t[2], t[3]))

    if refine:
        for ratio, c, r, q, mask in list(results[:top_k]):
            idx = np.flatnonzero(mask)
            for _ in range(4):
                cc, R = min_enclosing_ball(pts[idx])
                if R == 0:
                    break
                rr = R * (1 + _SHRINK)
                diff = pts - cc
                new = np.flatnonzero(np.sqrt(np.einsum("ij,ij->i", diff, diff)) < rr)
                D, qq = hd(new)
                results.append((_ratio(D, rho, rr), cc, rr, qq, None))
                if np.array_equal(new, idx):
                    break
                idx = new
        results.sort(key=lambda t: _witness_key(t[0], t[1], t[2], t[3]))

    ratio, c, r, q, _ = results[0]
    return ParaconvexityReport(float(ratio), np.array(c, dtype=float), float(r),
                               np.array(q, dtype=float), info, rho)


def profile(P, radii=None, centers=None, *, budget=512, resolution=None, radius_count=16,
            sampling_radius=0.0, hull_samples=32, seed=0, refine=True):
    """Estimated ``h(r)`` on a radius grid.

    For each radius ``r`` this maximises the local defect over the centre
    grid. With ``refine`` the best cells are re-centred at the minimal
    enclosing ball of what they capture (same radius), which can only
    enlarge the captured set.
    """
    P = P if isinstance(P, PointCloud) else PointCloud(P)
    rho = float(sampling_radius)
    radii = default_radii(P, radius_count) if radii is None else np.asarray(radii, dtype=float).ravel()
    if np.any(radii <= 0):
        raise InputError("radii must be positive")
    centers = default_centers(P, budget, resolution) if centers is None else np.atleast_2d(
        np.asarray(centers, dtype=float))
    hd = _HullDistance(P, hull_samples, seed)
    pts = P.points
    values = np.zeros(len(radii))
    for j, r in enumerate(radii):
        cells = _masks(pts, centers, lambda dist, r=r: np.full((len(dist), 1), r))
        best = 0.0
        for mask, _, _ in cells.values():
            best = max(best, _ratio(hd(np.flatnonzero(mask))[0], rho, r))
            if refine:
                cc, R = min_enclosing_ball(pts[mask])
                if 0 < R < r:
                    diff = pts - cc
                    new = np.flatnonzero(np.sqrt(np.einsum("ij,ij->i", diff, diff)) < r)
                    best = max(best, _ratio(hd(new)[0], rho, r))
        values[j] = best
    return ParaconvexityProfile(radii, values, rho)


def is_alpha_paraconvex(P, alpha, *, tol=TOL_GEO, **kwargs):
    """Check ``P`` against a defect level ``alpha``.

    Returns ``(True, None)`` when no ball beats ``alpha`` (up to ``tol``) and
    ``(False, (center, radius, hull_point))`` otherwise. Keyword arguments
    go to :func:`defect`.
    """
    if not 0 <= alpha <= 1:
        raise InputError("alpha must lie in [0, 1]")
    rep = defect(P, **kwargs)
    if rep.alpha_hat <= alpha + tol:
        return True, None
    return False, rep.witness


def local_ratio(P, center, radius, sampling_radius=0.0):
    """Local defect of one ball ``B(center, radius)``, recomputed from scratch."""
    P = P if isinstance(P, PointCloud) else PointCloud(P)
    c = as_point(center)
    diff = P.points - c
    idx = np.flatnonzero(np.sqrt(np.einsum("ij,ij->i", diff, diff)) < radius)
    if len(idx) == 0:
        raise InputError("ball does not meet the cloud")
    D, q = hull_distance(P, idx)
    return _ratio(D, float(sampling_radius), float(radius)), q


# ---------------------------------------------------------------------------
# brute-force reference


def oracle_defect(P, resolution, sampling_radius=0.0, *, radius=None, max_evaluations=2e8):
    """Brute-force defect of a small planar or linear cloud.

    Centres run over a lattice of spacing ``resolution``; for each centre the
    radii are taken just above each point distance (rounded up to the next
    multiple of ``resolution``), or fixed to ``radius`` when given. The hull
    distance of every captured subset is taken over a lattice of the same
    spacing clipped to the hull, plus finely sampled hull edges. It shares no
    code with :func:`defect` beyond point-cloud distances.

    Raises :class:`ResourceError` (with the running maximum as ``partial``)
    when the work would exceed ``max_evaluations`` distance evaluations.
    """
    P = P if isinstance(P, PointCloud) else PointCloud(P)
    if P.dim > 2:
        raise InputError("oracle_defect supports dimension 1 and 2 only")
    if len(P) > 62:
        raise InputError("oracle_defect supports at most 62 points")
    pts = P.points
    rho = float(sampling_radius)
    n = len(pts)
    diam = P.diameter()
    if n < 2 or diam == 0:
        return 0.0
    res = float(resolution)
    lo, hi = pts.min(axis=0) - diam, pts.max(axis=0) + diam
    axes = [lo[j] + res * np.arange(int(np.floor((hi[j] - lo[j]) / res)) + 1) for j in range(P.dim)]
    grid = np.column_stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")])
    bits = (1 << np.arange(n, dtype=np.int64))
    best_r = {}
    spent = 0
    for s in range(0, len(grid), 4096):
        C = grid[s:s + 4096]
        dist = np.sqrt(((C[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        spent += dist.size
        if radius is None:
            order = np.argsort(dist, axis=1)
            sd = np.take_along_axis(dist, order, axis=1)
            prefix = np.cumsum(bits[order], axis=1)
            r = (np.floor(sd / res) + 1.0) * res
            count = np.array([np.searchsorted(sd[i], r[i], side="left") for i in range(len(C))])
            masks = np.take_along_axis(prefix, count - 1, axis=1)
            keep = r <= 2 * diam + res
            pairs = zip(masks[keep].tolist(), r[keep].tolist())
        else:
            inside = dist < radius
            masks = (inside * bits).sum(axis=1)
            pairs = ((m, float(radius)) for m in masks[inside.any(axis=1)].tolist())
        for m, r in pairs:
            if r < best_r.get(m, np.inf):
                best_r[m] = r
    best = 0.0
    for m, r in sorted(best_r.items()):
        S = pts[[(m >> i) & 1 == 1 for i in range(n)]]
        Q = _oracle_hull_grid(S, res)
        spent += len(Q) * n
        if spent > max_evaluations:
            raise ResourceError("oracle budget exceeded", partial=best)
        d = np.sqrt(((Q[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
        best = max(best, max(d.max() - rho, 0.0) / r)
    return float(best)


def _oracle_hull_grid(S, res):
    """Lattice points of spacing ``res`` inside ``conv S`` plus its edges."""
    S = np.unique(S, axis=0)
    if len(S) == 1:
        return S
    centred = S - S.mean(axis=0)
    sv = np.linalg.svd(centred, compute_uv=False)
    if S.shape[1] == 1 or sv[1] <= 1e-12 * max(1.0, sv[0]):
        # collinear: walk the segment between the two extreme points
        u = centred @ np.linalg.svd(centred)[2][0]
        a, b = S[np.argmin(u)], S[np.argmax(u)]
        t = np.linspace(0.0, 1.0, int(np.ceil(np.linalg.norm(b - a) / res)) + 2)
        return a + t[:, None] * (b - a)
    tri = Delaunay(S)
    lo, hi = S.min(axis=0), S.max(axis=0)
    xs = np.arange(lo[0], hi[0] + res, res)
    ys = np.arange(lo[1], hi[1] + res, res)
    G = np.column_stack([m.ravel() for m in np.meshgrid(xs, ys, indexing="ij")])
    G = G[tri.find_simplex(G) >= 0]
    edges = []
    for i, j in tri.convex_hull:
        a, b = S[i], S[j]
        t = np.linspace(0.0, 1.0, int(np.ceil(np.linalg.norm(b - a) / (res / 4))) + 2)
        edges.append(a + t[:, None] * (b - a))
    return np.concatenate([G] + edges)
