"""Sampled functions on a strictly increasing grid."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DomainError, ParameterError
from .expr import Domain

__all__ = ["GridFn", "default_grid", "parse_grid"]


@dataclass(frozen=True, eq=False)
class GridFn:
    """Samples (abscissae, values) with local cubic (4-point Lagrange) interpolation.

    Evaluation outside [abscissae[0], abscissae[-1]] raises DomainError.
    """

    abscissae: np.ndarray
    values: np.ndarray
    domain: Domain = Domain.HALF_LINE

    def __post_init__(self):
        x = np.array(self.abscissae, dtype=float)
        v = np.array(self.values, dtype=complex)
        if x.ndim != 1 or v.shape != x.shape:
            raise ParameterError("abscissae and values must be 1-d arrays of equal length")
        if len(x) < 4:
            raise ParameterError("GridFn needs at least 4 samples")
        if not np.all(np.diff(x) > 0):
            raise ParameterError("abscissae must be strictly increasing")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise ParameterError("GridFn samples must be finite")
        if self.domain is Domain.HALF_LINE and x[0] < 0:
            raise ParameterError("half-line GridFn abscissae must be non-negative")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "domain", Domain(self.domain))

    def __len__(self):
        return len(self.abscissae)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    def __call__(self, t):
        tt = np.asarray(t, dtype=float)
        x = self.abscissae
        slack = 1e-12 * max(abs(x[0]), abs(x[-1]), 1.0)
        if np.any(tt < x[0] - slack) or np.any(tt > x[-1] + slack):
            raise DomainError(f"GridFn evaluated outside [{x[0]:g}, {x[-1]:g}]")
        flat = np.clip(np.ravel(tt), x[0], x[-1])
        i = np.clip(np.searchsorted(x, flat) - 2, 0, len(x) - 4)
        xs = x[i[:, None] + np.arange(4)]
        vs = self.values[i[:, None] + np.arange(4)]
        out = np.zeros(flat.shape, dtype=complex)
        for k in range(4):
            basis = np.ones_like(flat)
            for j in range(4):
                if j != k:
                    basis = basis * (flat - xs[:, j]) / (xs[:, k] - xs[:, j])
            out += basis * vs[:, k]
        if self.is_real:
            out = out.real
        out = out.reshape(tt.shape)
        if tt.ndim == 0:
            return out[()].item()
        return out

    # --- serialization -------------------------------------------------

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write("t,re,im\n")
        for x, v in zip(self.abscissae, self.values):
            buf.write(f"{x:.17g},{v.real:.17g},{v.imag:.17g}\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source, domain: Domain = Domain.HALF_LINE) -> "GridFn":
        text = Path(source).read_text() if not isinstance(source, str) or "\n" not in source else source
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["t", "re", "im"]:
            raise ParameterError("CSV must start with the header t,re,im")
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2], domain)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.value,
            "t": self.abscissae.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, d) -> "GridFn":
        if isinstance(d, str):
            d = json.loads(d)
        try:
            return cls(np.asarray(d["t"]), np.asarray(d["re"]) + 1j * np.asarray(d["im"]),
                       Domain(d.get("domain", "half-line")))
        except KeyError as exc:
            raise ParameterError(f"GridFn JSON is missing {exc}") from None

    @classmethod
    def sample(cls, f, grid, domain=None) -> "GridFn":
        grid = np.asarray(grid, dtype=float)
        dom = domain or getattr(f, "domain", Domain.HALF_LINE)
        return cls(grid, np.asarray(f(grid), dtype=complex), dom)


def default_grid(domain: Domain = Domain.HALF_LINE, n: int = 512) -> np.ndarray:
    """512 log-spaced points on [1e-4, 1e4], or a symmetric grid on [-50, 50].

    The real-line grid is x = 50 sinh(4u)/sinh(4), u uniform on [-1, 1],
    which clusters points near the origin where the test functions live.
    """
    if Domain(domain) is Domain.HALF_LINE:
        return np.logspace(-4.0, 4.0, n)
    u = np.linspace(-1.0, 1.0, n)
    return 50.0 * np.sinh(4.0 * u) / math.sinh(4.0)


def parse_grid(text: str) -> np.ndarray:
    """Parse ``log:a:b:n``, ``lin:a:b:n`` or a comma-separated list."""
    try:
        if text.startswith(("log:", "lin:")):
            kind, a, b, n = text.split(":")
            a, b, n = float(a), float(b), int(n)
            if n < 1 or not a < b or (kind == "log" and a <= 0):
                raise ValueError
            if kind == "log":
                return np.geomspace(a, b, n)
            return np.linspace(a, b, n)
        vals = np.array([float(x) for x in text.split(",") if x.strip()])
        if vals.size == 0:
            raise ValueError
        return vals
    except ValueError:
        raise ParameterError(f"cannot parse grid {text!r}") from None
