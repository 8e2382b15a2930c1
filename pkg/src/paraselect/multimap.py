"""Set-valued maps on finite metric domains.

A domain is a connected graph whose vertices carry coordinates; each vertex is
mapped to a finite cloud or to the whole ambient space. Continuity of the map
is measured by Hausdorff semidistance moduli along edges.
"""
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionError, ContractError, InputError
from .geometry import (
    TOL_GEO,
    Ball,
    PointCloud,
    ball_mask,
    as_point,
    cloud_distances,
    hausdorff_semidistance,
)


class WholeSpace:
    """Marker for the value ``E`` (the whole ambient space)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "WHOLE_SPACE"

    def __reduce__(self):
        return (WholeSpace, ())


WHOLE_SPACE = WholeSpace()


def is_whole_space(value):
    return value is WHOLE_SPACE


@dataclass
class DomainComplex:
    """Finite connected graph with coordinates, the discretised domain.

    Parameters
    ----------
    coords : array_like, shape (n_vertices, k)
        Vertex coordinates; the vertex id is the row index.
    edges : array_like, shape (n_edges, 2)
        Undirected edges as index pairs.
    lengths : array_like, optional
        Edge lengths; computed from ``coords`` when omitted and checked
        against them otherwise.
    simplices : list of tuple of int, optional
        Cells for piecewise-linear interpolation.
    """

    coords: np.ndarray
    edges: np.ndarray
    lengths: np.ndarray = None
    simplices: list = None
    _adjacency: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2 or len(coords) == 0:
            raise InputError("a domain needs at least one vertex")
        if not np.all(np.isfinite(coords)):
            raise InputError("vertex coordinates must be finite")
        edges = np.asarray(self.edges, dtype=int).reshape(-1, 2)
        n = len(coords)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise InputError("edge refers to a missing vertex")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise InputError("self-loop edges are not allowed")
        geometric = np.linalg.norm(coords[edges[:, 0]] - coords[edges[:, 1]], axis=1)
        if self.lengths is None:
            lengths = geometric
        else:
            lengths = np.asarray(self.lengths, dtype=float).reshape(-1)
            if lengths.shape != geometric.shape:
                raise InputError("one length per edge is required")
            if not np.allclose(lengths, geometric, rtol=1e-9, atol=1e-12):
                raise InputError("edge lengths disagree with vertex coordinates")
        if np.any(lengths <= 0):
            raise InputError("edge lengths must be positive (duplicate vertices?)")
        self.coords, self.edges, self.lengths = coords, edges, lengths
        if self.simplices is not None:
            self.simplices = [tuple(int(i) for i in s) for s in self.simplices]
        if not self._connected():
            raise InputError("domain graph must be connected")

    def __len__(self):
        return len(self.coords)

    @property
    def adjacency(self):
        if self._adjacency is None:
            adj = [[] for _ in range(len(self))]
            for i, j in self.edges:
                adj[i].append(int(j))
                adj[j].append(int(i))
            self._adjacency = adj
        return self._adjacency

    def _connected(self):
        seen = {0}
        todo = deque([0])
        while todo:
            for j in self.adjacency[todo.popleft()]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == len(self)

    def dilate(self, subset):
        """Vertices of ``subset`` together with all their neighbours."""
        out = set(subset)
        for i in subset:
            out.update(self.adjacency[i])
        return frozenset(out)

    @classmethod
    def path(cls, coords):
        """Path graph through 1-d ``coords`` (sorted), with edges as simplices."""
        x = np.sort(np.asarray(coords, dtype=float).reshape(-1))
        edges = np.column_stack([np.arange(len(x) - 1), np.arange(1, len(x))])
        return cls(x.reshape(-1, 1), edges, simplices=[tuple(e) for e in edges])

    @classmethod
    def grid(cls, n, a=0.0, b=1.0):
        """Uniform path of ``n`` vertices on ``[a, b]``."""
        if n < 1:
            raise InputError("a grid needs at least one vertex")
        return cls.path(np.linspace(a, b, n))

    def to_dict(self):
        out = {
            "vertices": self.coords.tolist(),
            "edges": [[int(i), int(j), float(l)] for (i, j), l in zip(self.edges, self.lengths)],
        }
        if self.simplices is not None:
            out["simplices"] = [list(s) for s in self.simplices]
        return out

    @classmethod
    def from_dict(cls, data):
        try:
            raw = data["vertices"]
            if raw and isinstance(raw[0], dict):
                raw = sorted(raw, key=lambda v: v["id"])
                if [v["id"] for v in raw] != list(range(len(raw))):
                    raise InputError("vertex ids must be 0..n-1")
                coords = [v["coords"] for v in raw]
            else:
                coords = raw
            edges = [e[:2] for e in data["edges"]]
            lengths = None
            if data["edges"] and all(len(e) == 3 for e in data["edges"]):
                lengths = [e[2] for e in data["edges"]]
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"malformed domain: {exc}") from exc
        return cls(coords, edges, lengths=lengths, simplices=data.get("simplices"))


@dataclass
class SetValuedMap:
    """Assignment of a cloud (or :data:`WHOLE_SPACE`) to each domain vertex."""

    domain: DomainComplex
    values: list
    ambient_dim: int

    def __post_init__(self):
        if len(self.values) != len(self.domain):
            raise InputError("one value per domain vertex is required")
        self.ambient_dim = int(self.ambient_dim)
        for i, v in enumerate(self.values):
            if is_whole_space(v):
                continue
            if not isinstance(v, PointCloud):
                raise InputError(f"value at vertex {i} is neither a cloud nor WHOLE_SPACE")
            if v.dim != self.ambient_dim:
                raise InputError(f"value at vertex {i} has dimension {v.dim}, expected {self.ambient_dim}")

    def __len__(self):
        return len(self.values)

    def distance(self, i, q):
        """``d(q, phi(x_i))``; zero for the whole space."""
        v = self.values[i]
        if is_whole_space(v):
            return 0.0
        return float(cloud_distances(np.asarray(q, dtype=float)[None, :], v)[0][0])

    def distances(self, F):
        """Vector of ``d(F[i], phi(x_i))`` for a vertex-indexed array ``F``."""
        return np.array([self.distance(i, F[i]) for i in range(len(self))])

    def to_dict(self):
        vals = []
        for v in self.values:
            if is_whole_space(v):
                vals.append({"type": "whole_space"})
            else:
                vals.append({"type": "cloud", "points": v.points.tolist()})
        return {"domain": self.domain.to_dict(), "ambient_dim": self.ambient_dim, "values": vals}

    @classmethod
    def from_dict(cls, data):
        try:
            domain = DomainComplex.from_dict(data["domain"])
            dim = int(data["ambient_dim"])
            values = []
            for entry in data["values"]:
                kind = entry["type"]
                if kind == "whole_space":
                    values.append(WHOLE_SPACE)
                elif kind == "cloud":
                    pts = np.asarray(entry["points"], dtype=float).reshape(-1, dim)
                    values.append(PointCloud(pts))
                else:
                    raise InputError(f"unknown value type {kind!r}")
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed set-valued map: {exc}") from exc
        return cls(domain, values, dim)


@dataclass
class VertexFunction:
    """Single-valued map given by its values at domain vertices.

    Between vertices it is extended piecewise linearly over
    ``domain.simplices`` when those are present.
    """

    values: np.ndarray
    domain: DomainComplex = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if not np.all(np.isfinite(v)):
            raise InputError("function values must be finite")
        if self.domain is not None and len(v) != len(self.domain):
            raise InputError("one value per domain vertex is required")
        self.values = v

    @property
    def dim(self):
        return self.values.shape[1]

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def midpoint_values(self):
        """Values at simplex barycentres, shape ``(n_simplices, dim)``."""
        if self.domain is None or not self.domain.simplices:
            return np.zeros((0, self.dim))
        return np.array([self.values[list(s)].mean(axis=0) for s in self.domain.simplices])

    def evaluate(self, point):
        """Piecewise-linear value at a domain point inside some simplex."""
        if self.domain is None or not self.domain.simplices:
            raise InputError("interpolation needs a domain with simplices")
        p = as_point(point)
        for s in self.domain.simplices:
            verts = self.domain.coords[list(s)]
            if len(s) == 1:
                if np.allclose(verts[0], p):
                    return self.values[s[0]].copy()
                continue
            # barycentric coordinates in the simplex's affine span
            basis = (verts[1:] - verts[0]).T
            coef, *_ = np.linalg.lstsq(basis, p - verts[0], rcond=None)
            bary = np.concatenate([[1.0 - coef.sum()], coef])
            if np.all(bary >= -1e-12) and np.allclose(verts.T @ bary, p, atol=1e-12):
                return bary @ self.values[list(s)]
        raise InputError(f"point {p} lies in no simplex of the domain")

    def to_list(self):
        return self.values.tolist()


@dataclass
class ModulusReport:
    """Per-edge semidistance moduli.

    ``forward[k]`` is the semidistance from the value at ``edges[k, 0]`` to
    the value at ``edges[k, 1]``; ``backward`` the reverse. ``moduli`` is the
    larger of the two divided by the edge length.
    """

    edges: np.ndarray
    lengths: np.ndarray
    forward: np.ndarray
    backward: np.ndarray
    moduli: np.ndarray
    flagged: np.ndarray
    epsilon: float

    @property
    def max_modulus(self):
        return float(self.moduli.max(initial=0.0))

    def flagged_edges(self):
        return [tuple(int(v) for v in e) for e in self.edges[self.flagged]]


def _edge_moduli(phi, epsilon):
    dom = phi.domain
    m = len(dom.edges)
    fwd, bwd = np.zeros(m), np.zeros(m)
    for k, (i, j) in enumerate(dom.edges):
        a, b = phi.values[i], phi.values[j]
        if is_whole_space(a) or is_whole_space(b):
            continue
        fwd[k] = hausdorff_semidistance(a, b)
        bwd[k] = hausdorff_semidistance(b, a)
    worst = np.maximum(fwd, bwd)
    return ModulusReport(dom.edges, dom.lengths, fwd, bwd, worst / dom.lengths,
                         worst > epsilon, float(epsilon))


def preimage(phi, B):
    """Vertices whose value meets the open ball ``B``.

    >>> dom = DomainComplex.grid(3)
    >>> phi = SetValuedMap(dom, [PointCloud([[0.0]])] * 3, 1)
    >>> sorted(preimage(phi, Ball([0.0], 1.0)))
    [0, 1, 2]
    """
    hit = set()
    for i, v in enumerate(phi.values):
        if is_whole_space(v) or ball_mask(v, B.center, B.radius).any():
            hit.add(i)
    return frozenset(hit)


def lsc_defect(phi, epsilon):
    """Lower-semicontinuity surrogate: semidistance moduli along edges.

    Edges touching a :data:`WHOLE_SPACE` value are reported with modulus 0.
    An edge is flagged when its semidistance exceeds ``epsilon``, i.e. when
    the modulus exceeds ``epsilon / length``.
    """
    if not epsilon > 0:
        raise InputError("epsilon must be positive")
    return _edge_moduli(phi, epsilon)


@dataclass
class ProximalReport:
    """Hypothesis check for a convex-valued multi-selection pair."""

    usc: ModulusReport
    inclusion_gap: np.ndarray
    differs: np.ndarray
    side_condition: np.ndarray

    @property
    def ok(self):
        return bool(np.all(self.side_condition) and not self.usc.flagged.any())


def d_proximal_report(phi, psi, epsilon, tol_geo=TOL_GEO):
    """Check ``phi`` as a multi-selection of ``psi`` and ``psi``'s u.s.c. moduli.

    Returns a :class:`ProximalReport` with, per vertex, ``inclusion_gap``
    (semidistance of ``phi(x)`` from ``psi(x)``), ``differs`` (whether
    ``psi(x)`` has points farther than ``tol_geo`` from ``phi(x)``) and
    ``side_condition`` (``phi(x)`` is a compact cloud wherever it differs
    from ``psi(x)``).

    Raises
    ------
    ContractError
        If ``phi(x)`` is not contained in ``psi(x)`` at some vertex.
    """
    if len(phi) != len(psi) or not np.array_equal(phi.domain.coords, psi.domain.coords):
        raise InputError("phi and psi must share a domain")
    n = len(phi)
    gap = np.zeros(n)
    differs = np.zeros(n, dtype=bool)
    side = np.ones(n, dtype=bool)
    for i in range(n):
        a, b = phi.values[i], psi.values[i]
        if is_whole_space(b):
            differs[i] = not is_whole_space(a)
            continue
        if is_whole_space(a):
            raise ContractError(f"vertex {i}: the whole space is not inside a bounded value", vertex=i)
        gap[i] = hausdorff_semidistance(a, b)
        if gap[i] > tol_geo:
            raise ContractError(f"vertex {i}: phi(x) leaves psi(x) by {gap[i]:.3g}", vertex=i)
        differs[i] = hausdorff_semidistance(b, a) > tol_geo
    side = ~differs | np.array([not is_whole_space(v) for v in phi.values])
    return ProximalReport(_edge_moduli(psi, epsilon), gap, differs, side)


@dataclass
class CoverLevel:
    n: int
    v_radius: float
    f_radius: float
    A: frozenset
    U: frozenset


@dataclass
class CoverChain:
    """Increasing vertex sets ``A_n`` with ``A_n`` inside the preimage of ``B(0, beta**n)``."""

    beta: float
    levels: list

    def violations(self, phi):
        """Invariant failures, checked by direct enumeration; empty when valid."""
        out = []
        everything = frozenset(range(len(phi)))
        origin = np.zeros(phi.ambient_dim)
        prev_A = frozenset()
        for lvl in self.levels:
            if not prev_A <= lvl.A:
                out.append(f"A_{lvl.n} does not contain A_{lvl.n - 1}")
            if not lvl.A <= lvl.U:
                out.append(f"A_{lvl.n} not inside U_{lvl.n}")
            pre = preimage(phi, Ball(origin, lvl.v_radius))
            if not lvl.A <= pre:
                out.append(f"A_{lvl.n} leaves the preimage of V_{lvl.n}")
            prev_A = lvl.A
        for lo, hi in zip(self.levels, self.levels[1:]):
            if not lo.U <= hi.A:
                out.append(f"U_{lo.n} not inside A_{hi.n}")
        if not self.levels or frozenset().union(*(l.A for l in self.levels)) != everything:
            out.append("the sets A_n do not cover the domain")
        return out


def _min_norm(value):
    if is_whole_space(value):
        return 0.0
    return float(np.linalg.norm(value.points, axis=1).min())


def build_cover_chain(phi, beta):
    """Increasing closed cover adapted to the balls ``V_n = B(0, beta**n)``.

    ``F_n`` is the closed ball of radius ``beta**n * (1 - 1/(2 beta))``,
    ``A_n`` the vertices whose value meets ``F_n`` and ``U_n`` one graph
    dilation of ``A_n`` cut back to ``A_{n+1}``. Levels stop at the first ``n``
    with ``A_n`` equal to the whole domain.
    """
    beta = float(beta)
    if not beta > 1:
        raise InputError(f"beta must exceed 1, got {beta}")
    dom = phi.domain
    norms = np.array([_min_norm(v) for v in phi.values])
    shrink = 1.0 - 1.0 / (2.0 * beta)
    everything = frozenset(range(len(phi)))
    raw = []
    n = 1
    while True:
        f_radius = beta ** n * shrink
        A = frozenset(int(i) for i in np.flatnonzero(norms <= f_radius))
        raw.append((n, beta ** n, f_radius, A))
        if A == everything:
            break
        n += 1
        if n > 10_000:
            raise ConstructionError("cover chain did not stabilise")
    levels = []
    for k, (n, v_radius, f_radius, A) in enumerate(raw):
        U = dom.dilate(A) & raw[k + 1][3] if k + 1 < len(raw) else everything
        if not A <= U:
            raise ConstructionError(f"level {n}: dilation lost part of A_n")
        levels.append(CoverLevel(n, v_radius, f_radius, A, U))
    chain = CoverChain(beta, levels)
    bad = chain.violations(phi)
    if bad:
        raise ConstructionError("; ".join(bad))
    return chain
