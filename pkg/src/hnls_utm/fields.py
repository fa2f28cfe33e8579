"""Space-time field container and its serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Field:
    """Complex solution samples on a rectangular grid [0, ell] x [0, T].

    values[i, j] is the sample at (x_grid[i], t_grid[j]).
    """

    x_grid: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_grid, dtype=np.float64)
        t = np.asarray(self.t_grid, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.complex128)
        if len(x) < 4 or len(t) < 4:
            raise ValueError("grids need at least 4 points each")
        if v.shape != (len(x), len(t)):
            raise ValueError("values shape must be (len(x_grid), len(t_grid))")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "values", v)

    def l2_norm_xt(self) -> float:
        """L2(x, t) norm by trapezoid quadrature on the grid."""
        sq = np.abs(self.values) ** 2
        inner = np.trapezoid(sq, self.x_grid, axis=0)
        return float(np.sqrt(np.trapezoid(inner, self.t_grid)))

    def relative_l2_gap(self, other: "Field") -> float:
        diff = Field(self.x_grid, self.t_grid, self.values - other.values)
        ref = other.l2_norm_xt()
        return diff.l2_norm_xt() / ref if ref > 0 else diff.l2_norm_xt()

    def slice_l2(self) -> np.ndarray:
        """L2_x norm of each time slice."""
        sq = np.abs(self.values) ** 2
        return np.sqrt(np.trapezoid(sq, self.x_grid, axis=0))

    def to_csv(self, path, header: dict | None = None):
        """CSV columns x, t, re_u, im_u; optional JSON header sidecar."""
        with open(path, "w", newline="\n") as fh:
            fh.write("x,t,re_u,im_u\n")
            for i, x in enumerate(self.x_grid):
                for j, t in enumerate(self.t_grid):
                    v = self.values[i, j]
                    fh.write("%.17g,%.17g,%.17g,%.17g\n" % (x, t, v.real, v.imag))
        if header is not None:
            with open(str(path) + ".json", "w") as fh:
                json.dump(header, fh, indent=2, sort_keys=True)
                fh.write("\n")

    @classmethod
    def from_callable(cls, func, x_grid, t_grid):
        xx, tt = np.meshgrid(np.asarray(x_grid), np.asarray(t_grid), indexing="ij")
        return cls(x_grid, t_grid, func(xx, tt))

    @classmethod
    def zeros(cls, x_grid, t_grid):
        return cls(x_grid, t_grid,
                   np.zeros((len(x_grid), len(t_grid)), dtype=np.complex128))
