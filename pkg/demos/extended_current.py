"""The trajectory ensemble reproduces the s-integrated quantum current."""
from __future__ import annotations

import numpy as np

from bohmkn.current import charge_normalization, quantum_current
from bohmkn.ensemble import EnsembleSpec, trajectory_current
from bohmkn.wavepacket import PacketParams

p = PacketParams([1, 0.1, 0, 0], 1.0, M=4.0)
x = np.array([[0.0, 0.3, 0.0, 0.0], [2.0, 0.5, -0.4, 0.2], [-1.5, -0.2, 0.3, 0.6]])
Jq = quantum_current(x, p)
for N in (100, 1_000, 10_000, 100_000):
    for anti in (False, True):
        Jm = trajectory_current(x, EnsembleSpec(p, N=N, seed=1, antithetic=anti))
        err = np.max(np.linalg.norm(Jm - Jq, axis=1) / np.linalg.norm(Jq, axis=1))
        print(f"N = {N:>6}  antithetic = {anti!s:5}  max relative error {err:.2e}")
print(f"total charge on the x0 = 0 slice: {charge_normalization(p):.12f}")
