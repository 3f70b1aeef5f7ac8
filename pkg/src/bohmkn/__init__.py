"""Bohmian trajectories and Lienard-Wiechert fields of Gaussian packets in complex Minkowski space."""
from __future__ import annotations

from .config import Scenario, load_config, parse_config
from .current import charge_normalization, continuity_residual, quantum_current, spectral_radiation_check
from .ensemble import (EnsembleSpec, ensemble_field, ensemble_power, radiated_power, sample_amplitudes,
                       trajectory_current)
from .errors import BohmKNError, ConfigError, NumericalError
from .gan import GanWeights, combine, gan_trajectory_family, sqrt_sheets
from .lienard_wiechert import NullRoot, lw_faraday, lw_potential, null_roots, retarded_root
from .tolerances import DEFAULT, Tolerances
from .trajectory import GaussTrajectory, acceleration, continue_sheet, kerr_newman_bohm, position, velocity
from .wavepacket import PacketParams, probability_current, psi, velocity_field

__all__ = [
    "Scenario", "load_config", "parse_config",
    "charge_normalization", "continuity_residual", "quantum_current", "spectral_radiation_check",
    "EnsembleSpec", "ensemble_field", "ensemble_power", "radiated_power", "sample_amplitudes",
    "trajectory_current",
    "BohmKNError", "ConfigError", "NumericalError",
    "GanWeights", "combine", "gan_trajectory_family", "sqrt_sheets",
    "NullRoot", "lw_faraday", "lw_potential", "null_roots", "retarded_root",
    "DEFAULT", "Tolerances",
    "GaussTrajectory", "acceleration", "continue_sheet", "kerr_newman_bohm", "position", "velocity",
    "PacketParams", "probability_current", "psi", "velocity_field",
]
