"""Ready-made maps used by the tests, the demos and the acceptance suite."""
import numpy as np

from .geometry import PointCloud
from .multimap import WHOLE_SPACE, DomainComplex, SetValuedMap, VertexFunction


def vgraph_cloud(center, step=0.01, half_width=1.0, lift=0.0):
    """Samples of the graph ``u -> |u - center| / 2`` for ``|u - center| <= half_width``.

    The samples sit at ``center + k * step`` so the corner ``(center, lift)``
    is always one of them; ``lift`` shifts the whole graph upwards.
    """
    k = int(round(half_width / step))
    offsets = np.arange(-k, k + 1) * step
    pts = np.column_stack([center + offsets, np.abs(offsets) / 2.0 + lift])
    return PointCloud(pts, label=f"vgraph@{center:g}")


def vgraph_sampling_radius(step=0.01):
    """Covering radius of the V graph by its samples: half a sample spacing."""
    return 0.5 * step * np.hypot(1.0, 0.5)


def vgraph_map(n_vertices=101, step=0.01, half_width=1.0, lift_slope=0.0):
    """Domain grid on ``[0, 1]`` with a V-shaped cloud over each vertex.

    The value at ``x`` is :func:`vgraph_cloud` centred at ``x`` and lifted by
    ``lift_slope * x``; a positive slope pushes far vertices away from the
    origin, which makes the cover chain of the map have several levels.
    """
    domain = DomainComplex.grid(n_vertices)
    xs = domain.coords[:, 0]
    values = [vgraph_cloud(x, step, half_width, lift_slope * x) for x in xs]
    return SetValuedMap(domain, values, 2)


def vgraph_start(phi, height=1.0):
    """Starting map ``g(x) = (x, height + corner height of phi(x))``."""
    xs = phi.domain.coords[:, 0]
    base = np.array([v.points[:, 1].min() for v in phi.values])
    return VertexFunction(np.column_stack([xs, base + height]), phi.domain)


def two_point_map(n_vertices=11):
    """Constant map ``x -> {0, 1}`` in the line, the 1-paraconvex extreme case."""
    domain = DomainComplex.grid(n_vertices)
    cloud = PointCloud([[0.0], [1.0]], label="two_point")
    return SetValuedMap(domain, [cloud] * n_vertices, 1)


def segment_cloud(n_points=101, length=1.0):
    """Samples of the horizontal segment ``[0, length] x {0}``."""
    u = np.linspace(0.0, length, n_points)
    return PointCloud(np.column_stack([u, np.zeros_like(u)]), label="segment")


def mixed_map(n_vertices=21, whole_space_at=None, spread=3.0):
    """Bounded clouds drifting away from the origin plus one whole-space value.

    Vertex ``i`` at ``x`` gets three points around ``(spread * x, 0)``; the
    vertex ``whole_space_at`` (default: the middle one) gets
    :data:`WHOLE_SPACE`.
    """
    domain = DomainComplex.grid(n_vertices)
    if whole_space_at is None:
        whole_space_at = n_vertices // 2
    values = []
    for i, x in enumerate(domain.coords[:, 0]):
        if i == whole_space_at:
            values.append(WHOLE_SPACE)
            continue
        c = spread * x
        values.append(PointCloud([[c, 0.0], [c + 0.1, 0.05], [c, 0.1]]))
    return SetValuedMap(domain, values, 2)
