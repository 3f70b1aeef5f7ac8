"""Radiation field of one sheet against the equal-weight pair of sheets.

A slow packet (|u| = 0.01, sigma Gamma = 0.01) with amplitude along x.  Each
sheet alone carries a 1/R radiation field; the antithetic pair cancels it,
leaving 1/R^2.
"""
from __future__ import annotations

import numpy as np

from bohmkn.ensemble import EnsembleSpec, ensemble_field, loglog_slope
from bohmkn.verify import cancellation_setup

p, R, pts = cancellation_setup()
A = np.array([0.0, 1.0, 0.0, 0.0])
single = EnsembleSpec(p, weighting="custom", amps=[A], weights=[1.0])
pair = EnsembleSpec(p, weighting="equalPair", amps=A)
norm = lambda F: np.linalg.norm(F.reshape(F.shape[0], -1), axis=1)
f1 = norm(ensemble_field(pts, single, "acceleration").F)
f2 = norm(ensemble_field(pts, pair, "acceleration").F)
print(f"{'R':>8} {'single':>12} {'pair':>12}")
for r, a, b in zip(R, f1, f2):
    print(f"{r:8.1f} {a:12.4e} {b:12.4e}")
print(f"slopes: single {loglog_slope(R, f1):.3f}, pair {loglog_slope(R, f2):.3f}")
