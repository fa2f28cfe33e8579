"""Quadrature evaluation of the data transforms at complex arguments.

interval_fourier computes the finite-interval Fourier transform
phi_hat(k) = int_0^ell exp(-i k x) phi(x) dx, which is entire in k, and
tilde_transform computes the truncated time transform
phi_tilde(w, t) = int_0^t exp(-i w t') phi(t') dt'.  Both are evaluated by
composite Gauss-Legendre panels; sampled data are carried onto the
quadrature nodes by interpolation, while analytic presets attach a callable
that is evaluated directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import BarycentricInterpolator, CubicSpline
from scipy.special import roots_legendre

from .errors import ExponentialOverflow

OVERFLOW_GUARD = 700.0


class GridKind(enum.Enum):
    UNIFORM = "uniform"
    CHEBYSHEV = "chebyshev"


def chebyshev_grid(n: int, ell: float) -> np.ndarray:
    """Chebyshev-Lobatto points mapped to [0, ell], increasing."""
    j = np.arange(n)
    return 0.5 * ell * (1.0 - np.cos(np.pi * j / (n - 1)))


@dataclass(frozen=True)
class SpatialProfile:
    """Complex samples of a function on [0, ell].

    func, when given, is the analytic source of the samples and is used for
    off-grid evaluation; otherwise interpolation of the samples is used
    (global barycentric on Chebyshev grids, cubic spline on uniform grids,
    where a global interpolant would be unstable).
    """

    ell: float
    samples: np.ndarray
    grid_kind: GridKind = GridKind.UNIFORM
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.ell <= 0:
            raise ValueError("ell must be positive")
        if len(self.samples) < 4:
            raise ValueError("need at least 4 samples")
        object.__setattr__(self, "samples",
                           np.asarray(self.samples, dtype=np.complex128))

    def grid(self) -> np.ndarray:
        n = len(self.samples)
        if self.grid_kind is GridKind.CHEBYSHEV:
            return chebyshev_grid(n, self.ell)
        return np.linspace(0.0, self.ell, n)

    def __call__(self, x):
        if self.func is not None:
            return np.asarray(self.func(np.asarray(x)), dtype=np.complex128)
        g = self.grid()
        if self.grid_kind is GridKind.CHEBYSHEV:
            interp = BarycentricInterpolator(g, self.samples)
            return np.asarray(interp(x), dtype=np.complex128)
        return CubicSpline(g, self.samples)(x)

    @classmethod
    def from_callable(cls, func, ell, n=257, grid_kind=GridKind.UNIFORM):
        x = (chebyshev_grid(n, ell) if grid_kind is GridKind.CHEBYSHEV
             else np.linspace(0.0, ell, n))
        return cls(ell, np.asarray(func(x), dtype=np.complex128), grid_kind, func)


@dataclass(frozen=True)
class TimeSeries:
    """Complex samples on a uniform grid over [0, horizon]."""

    horizon: float
    samples: np.ndarray
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if len(self.samples) < 4:
            raise ValueError("need at least 4 samples")
        object.__setattr__(self, "samples",
                           np.asarray(self.samples, dtype=np.complex128))

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, len(self.samples))

    def __call__(self, t):
        if self.func is not None:
            return np.asarray(self.func(np.asarray(t)), dtype=np.complex128)
        return CubicSpline(self.grid(), self.samples)(t)

    @classmethod
    def from_callable(cls, func, horizon, n=257):
        t = np.linspace(0.0, horizon, n)
        return cls(horizon, np.asarray(func(t), dtype=np.complex128), func)


def composite_gl(a: float, b: float, n_samples: int):
    """Composite 8-point Gauss-Legendre rule with the panel count scaled to
    the sample resolution of the data being integrated."""
    n_panels = max(2, (n_samples - 1) // 4)
    xg, wg = roots_legendre(8)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def interval_fourier(profile: SpatialProfile, k):
    """phi_hat(k) = int_0^ell exp(-i k x) phi(x) dx for scalar or array k."""
    scalar = np.isscalar(k)
    karr = np.atleast_1d(np.asarray(k, dtype=np.complex128))
    if np.max(np.abs(karr.imag)) * profile.ell > OVERFLOW_GUARD:
        raise ExponentialOverflow("|Im k| * ell exceeds the overflow guard")
    x, w = composite_gl(0.0, profile.ell, len(profile.samples))
    vals = profile(x) * w
    out = np.exp(-1j * np.outer(karr, x)) @ vals
    return complex(out[0]) if scalar else out.reshape(np.shape(k))


def tilde_transform(series: TimeSeries, w, t_upper: float):
    """phi_tilde(w, t_upper) = int_0^{t_upper} exp(-i w t') phi(t') dt'."""
    if not (0.0 <= t_upper <= series.horizon * (1 + 1e-12)):
        raise ValueError("t_upper outside [0, horizon]")
    if t_upper == 0.0:
        return 0.0 + 0.0j if np.isscalar(w) else np.zeros(np.shape(w), dtype=np.complex128)
    scalar = np.isscalar(w)
    warr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    if np.max(np.abs(warr.imag)) * t_upper > OVERFLOW_GUARD:
        raise ExponentialOverflow("|Im w| * t exceeds the overflow guard")
    t, wt = composite_gl(0.0, t_upper, len(series.samples))
    vals = series(t) * wt
    out = np.exp(-1j * np.outer(warr, t)) @ vals
    return complex(out[0]) if scalar else out.reshape(np.shape(w))


def forcing_transform(f_hat_slices: np.ndarray, horizon: float, w, t_upper: float):
    """Time transform int_0^{t_upper} exp(-i w t') f_hat(k, t') dt' of
    forcing-transform slices sampled on the solver's uniform time grid.

    f_hat_slices has shape (nt,) for a single k, or (nk, nt) with w of shape
    (nk,) pairing each row with its own transform argument.
    """
    slices = np.asarray(f_hat_slices, dtype=np.complex128)
    if slices.ndim == 1:
        return tilde_transform(TimeSeries(horizon, slices), w, t_upper)
    if t_upper == 0.0:
        return np.zeros(slices.shape[0], dtype=np.complex128)
    warr = np.asarray(w, dtype=np.complex128)
    if np.max(np.abs(warr.imag)) * t_upper > OVERFLOW_GUARD:
        raise ExponentialOverflow("|Im w| * t exceeds the overflow guard")
    t, wt = composite_gl(0.0, t_upper, slices.shape[1])
    tgrid = np.linspace(0.0, horizon, slices.shape[1])
    vals = CubicSpline(tgrid, slices, axis=1)(t) * wt[None, :]
    return np.sum(np.exp(-1j * np.outer(warr, t)) * vals, axis=1)


def laplace_transform(phi_samples: np.ndarray, r_max: float):
    """Return x -> int_0^{r_max} exp(-r x) phi(r) dr for compactly supported
    samples on a uniform grid over [0, r_max]."""
    samples = np.asarray(phi_samples, dtype=np.complex128)
    r, w = composite_gl(0.0, r_max, len(samples))
    vals = CubicSpline(np.linspace(0.0, r_max, len(samples)), samples)(r) * w

    def transform(x):
        xarr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.exp(-np.outer(xarr, r)) @ vals
        return complex(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))

    return transform
