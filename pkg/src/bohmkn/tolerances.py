"""Named numerical tolerances, collected in one record."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    on_shell: float = 1e-12
    antisymmetry: float = 1e-12
    singular_ring: float = 1e-12
    nodal: float = 1e-300
    branch_point: float = 1e-14
    path_clearance: float = 1e-10
    # predictor ambiguity ratio: refine below `refine_ratio`, fail above `coarse_ratio`
    refine_ratio: float = 0.1
    coarse_ratio: float = 0.5
    weights_sum: float = 1e-14
    root_residual: float = 1e-10
    root_imag: float = 1e-8
    quartic_leading: float = 1e-14
    lw_denominator: float = 1e-12
    filter_starvation: float = 0.5
    quad_rel: float = 1e-10


DEFAULT = Tolerances()
