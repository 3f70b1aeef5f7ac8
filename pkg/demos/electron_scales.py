"""Electron-scale numbers for a one-angstrom packet."""
from __future__ import annotations

from bohmkn.units import SI_ELECTRON
from bohmkn.wavepacket import PacketParams

p = PacketParams([1, 0, 0, 0], 1.0, SI_ELECTRON.M, SI_ELECTRON.hbar)  # sigma_I = 1 angstrom
gamma = float(p.gamma[0])
print(f"Gamma             = {SI_ELECTRON.rate_si(gamma):.4e} 1/s")
print(f"|X_B(0)| Gamma / c = {gamma:.6f}   for |X_B(0)| = 1 angstrom")
print(f"spread doubles after s = {3**0.5 / gamma:.1f} angstrom/c = "
      f"{3**0.5 / gamma * SI_ELECTRON.time_s:.3e} s")
