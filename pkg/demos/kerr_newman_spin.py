"""A spin offset i J / m moves the null roots off the real axis and adds a magnetic dipole."""
from __future__ import annotations

import numpy as np

from bohmkn.lienard_wiechert import null_roots, retarded_root
from bohmkn.minkowski import kn_static_field
from bohmkn.trajectory import GaussTrajectory, boosted_spin_offset
from bohmkn.wavepacket import PacketParams

p = PacketParams([1, 0, 0, 0], 1.0)
O = boosted_spin_offset([0, 0, 0.5], 1.0, p.u)
t = GaussTrajectory(p, [0, 0.3, 0, 0], O)
x = np.array([10.0, 3.0, 0.0, 2.0])
for r in null_roots(x, t):
    print(f"s = {r.s:.6f}  sheet {r.sheet:+d}  {r.kind:8s} ({r.causal})")
r = retarded_root(null_roots(x, t), allow_complex=True)
print(f"retarded root used when complex roots are allowed: {r.s:.6f}")

for dist in (10.0, 100.0, 1000.0):
    w = kn_static_field(np.array([0, 0, dist]), O[1:], 1.0)
    print(f"r = {dist:6.0f}: B_z r^3 / 2 = {w[2].imag * dist**3 / 2:.6f}  (q b = 0.5)")
