#!/usr/bin/env python3
"""The unit-vector relaxation and its solver.

For a 2-LO colorable hypergraph, coloring with {-1, +1} and reading the color
of vertex a as x_a gives x_a + x_b + x_c = -1 per edge.  Relaxing the numbers
to unit vectors (with one extra special vector playing the role of -1) gives
the feasibility program solved here: per edge the three vertex vectors plus
the special vector must cancel.
"""

import numpy as np

from lochroma import (
    SdpConfig,
    gamma_profile,
    gen_balanced_tripartite,
    gen_planted,
    ortho_profile,
    plant_rank1_certificate,
    residual,
    solve_feasibility,
)

print("== planted instance and its free certificate ==")
inst = gen_planted(30, 40, seed=7)
cert = plant_rank1_certificate(inst)
print("rank-1 certificate residuals:", residual(inst.H, cert))

print()
print("== cold-start solve ==")
sol = solve_feasibility(inst.H, SdpConfig(seed=0))
print(f"dimension {sol.d}, iterations {sol.iters}")
print(f"norm residual {sol.norm_residual:.2e}, edge residual {sol.edge_residual:.2e}")

gamma = sol.gamma()
E = inst.H.edge_array()
sums = gamma[E[:, 0]] + gamma[E[:, 1]] + gamma[E[:, 2]]
print(f"per-edge gamma sums in [{sums.min():.9f}, {sums.max():.9f}] (should be -1)")

print()
print("== the balance split ==")
profile = gamma_profile(sol, eps=1e-6)
print(f"balanced vertices: {profile.balanced.size}, unbalanced: {profile.unbalanced.size}")
print("gamma range:", float(gamma.min()), "to", float(gamma.max()))

print()
print("== exactly balanced construction ==")
tri, tri_cert = gen_balanced_tripartite(30, 25, seed=1)
print("certificate residuals:", residual(tri.H, tri_cert))
print("all gammas:", np.unique(np.round(tri_cert.gamma(), 12)).tolist())

op = ortho_profile(tri_cert)
Et = tri.H.edge_array()
cancel = op.ubar[Et[:, 0]] + op.ubar[Et[:, 1]] + op.ubar[Et[:, 2]]
print("max ||u_a + u_b + u_c||^2 over edges:", float((cancel * cancel).sum(axis=1).max()))

print()
print("== an infeasible instance stalls with evidence ==")
from lochroma import Hypergraph, SolverStalled

k4 = Hypergraph(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
try:
    solve_feasibility(k4, SdpConfig(seed=0))
except SolverStalled as exc:
    print("stalled:", exc)
