"""Generalized Cesaro operators on fractional Sobolev spaces: numerics and identity checks."""

from __future__ import annotations

__version__ = "0.1.0"
