"""Function model: closed-form test functions, sampled functions and fractional calculus."""

from __future__ import annotations

from .calculus import (SobolevParams, branch_factor, convolve, convolve_at, d_alpha, decay_sup,
                       pairing, sobolev_norm, weyl_minus_at, weyl_plus, weyl_plus_at,
                       weyl_plus_closed, weyl_zero, weyl_zero_at)
from .expr import (Constant, Domain, Exponential, FnExpr, Gaussian, LinComb, MittagLefflerFn,
                   Pointwise, PowerKernel, ShiftedPower, from_json, scaled)
from .grid import GridFn, default_grid, parse_grid

__all__ = [
    "Constant", "Domain", "Exponential", "FnExpr", "Gaussian", "GridFn", "LinComb",
    "MittagLefflerFn", "Pointwise", "PowerKernel", "ShiftedPower", "SobolevParams",
    "branch_factor", "convolve", "convolve_at", "d_alpha", "decay_sup", "default_grid",
    "from_json", "pairing", "parse_grid", "scaled", "sobolev_norm", "weyl_minus_at",
    "weyl_plus", "weyl_plus_at", "weyl_plus_closed", "weyl_zero", "weyl_zero_at",
]
