"""
How non-convex is a sampled set?
================================

The defect of a set P is the worst ratio d(q, P) / r over balls B of radius
r that meet P and points q in the convex hull of B & P. Convex sets score 0
and every set scores at most 1.

Finite samples always look maximally non-convex between two neighbouring
samples, so the estimator takes a sampling radius: distances up to that
radius are treated as sampling noise.
"""
import sys
from pathlib import Path

import numpy as np

from paraselect import PointCloud, defect, oracle_defect, profile
from paraselect.benchmarks import segment_cloud, vgraph_cloud, vgraph_sampling_radius
from paraselect.serialization import svg_polyline, svg_scatter

out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).with_name("_output"))
out.mkdir(exist_ok=True)

# The two-point set {0, 1}: the ball centred at 1/2 of radius just above 1/2
# sees both points, and the hull point 1/2 is 1/2 away from P.
two = PointCloud([[0.0], [1.0]])
rep = defect(two, resolution=0.01)
c, r, q = rep.witness
print(f"{{0,1}}: defect {rep.alpha_hat:.6f} at centre {c[0]:.4f}, radius {r:.6f}, q = {q[0]:.4f}")

# A sampled segment is convex up to its sampling radius.
seg = segment_cloud(11)
print("segment, raw samples:     ", round(defect(seg).alpha_hat, 4))
print(f"segment, sampling radius:  {defect(seg, sampling_radius=0.05).alpha_hat:.3g}")

# The graph of |u|/2 bends at the origin; the worst ball sits on the corner.
step = 0.01
V = vgraph_cloud(0.0, step=step)
rho = vgraph_sampling_radius(step)
rep = defect(V, sampling_radius=rho)
print(f"V graph: defect {rep.alpha_hat:.4f} (corner value 1/sqrt(5) - rho = {1 / 5 ** 0.5 - rho:.4f})")
(out / "vgraph_witness.svg").write_text(
    svg_scatter(V.points, title="V graph witness ball", circles=[(rep.witness_center, rep.witness_radius)]))

# The grid oracle is independent of the estimator; it needs a coarse cloud.
Vc = vgraph_cloud(0.0, step=0.1)
rho_c = vgraph_sampling_radius(0.1)
print(f"coarse V graph: estimator {defect(Vc, sampling_radius=rho_c).alpha_hat:.4f}, "
      f"oracle {oracle_defect(Vc, 0.01, sampling_radius=rho_c):.4f}")

# Resolving the defect by radius gives the function h(r).
prof = profile(two, radii=np.geomspace(0.51, 3, 12))
for r, h in zip(prof.radii, prof.values):
    print(f"  r = {r:.3f}  h = {h:.4f}")
(out / "two_point_profile.svg").write_text(svg_polyline([("h", prof.radii, prof.values)], title="h(r)"))
print("plots written to", out)
