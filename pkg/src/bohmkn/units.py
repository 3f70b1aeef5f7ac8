"""Unit presets.  Physics modules work in c = 1 units; only this module knows SI."""
from __future__ import annotations

from dataclasses import dataclass

from scipy import constants

ANGSTROM = 1e-10
REDUCED_COMPTON = constants.hbar / (constants.m_e * constants.c)


@dataclass(frozen=True)
class UnitSystem:
    name: str
    length_m: float | None  # metres per internal length unit; None when dimensionless
    M: float
    hbar: float

    @property
    def time_s(self) -> float | None:
        return None if self.length_m is None else self.length_m / constants.c

    def to_internal(self, length):
        """Convert a config length (metres for SI presets) to internal units."""
        return length if self.length_m is None else length / self.length_m

    def rate_si(self, rate):
        """A rate in internal units (1 / length) as 1/s, or unchanged if dimensionless."""
        return rate if self.length_m is None else rate / self.time_s

    def length_label(self) -> str:
        return "1" if self.length_m is None else f"{self.length_m!r} m"


DIMENSIONLESS = UnitSystem("dimensionless", None, 1.0, 1.0)
# lengths in angstrom, mass in electron masses: hbar becomes the reduced Compton wavelength
SI_ELECTRON = UnitSystem("SI-electron", ANGSTROM, 1.0, REDUCED_COMPTON / ANGSTROM)

PRESETS = {u.name: u for u in (DIMENSIONLESS, SI_ELECTRON)}
