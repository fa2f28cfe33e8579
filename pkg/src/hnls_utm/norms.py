"""Sobolev, Bessel-potential, and mixed space-time norms.

Integer-order Sobolev norms follow the sum convention
||v||_{H^s(0,ell)} = sum_{j=0}^{s} ||d^j v / dx^j||_{L2(0,ell)}.
Fractional orders use one concrete realization of the restriction norm: a
reflect-and-taper extension to a smooth function of period 4*ell, a discrete
Fourier multiplier (1+k^2)^{s/2}, and the L^p norm of the restriction back to
(0, ell).  Comparisons against other realizations are only meaningful up to
equivalence constants.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from scipy.interpolate import CubicSpline
from scipy.special import roots_legendre

from .fields import Field
from .transforms import GridKind, SpatialProfile, chebyshev_grid


class NormKind(enum.Enum):
    SOBOLEV_INTERVAL = "SobolevInterval"
    BESSEL_INTERVAL = "BesselInterval"
    MIXED_TIME = "MixedTime"


@dataclass(frozen=True)
class NormSpec:
    s: float = 0.0
    p: float = 2.0
    q: float = 2.0
    kind: NormKind = NormKind.SOBOLEV_INTERVAL

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be nonnegative")
        if self.p < 2 or self.q < 2:
            raise ValueError("p and q must be at least 2")


def check_admissible_pair(q: float, p: float) -> bool:
    """True iff q, p >= 2 and 3/q + 1/p = 1/2 (to 1e-12; inf allowed)."""
    if q < 2 or p < 2:
        return False
    inv_q = 0.0 if np.isinf(q) else 1.0 / q
    inv_p = 0.0 if np.isinf(p) else 1.0 / p
    return abs(3.0 * inv_q + inv_p - 0.5) <= 1e-12


def _cheb_interpolant(profile: SpatialProfile, deg: int = 128):
    """Chebyshev-series representation of the profile on [0, ell]."""
    if profile.func is not None:
        x = chebyshev_grid(deg + 1, profile.ell)
        y = np.asarray(profile.func(x), dtype=np.complex128)
    elif profile.grid_kind is GridKind.CHEBYSHEV:
        x = profile.grid()
        y = profile.samples
        deg = len(x) - 1
    else:
        return None
    re = npcheb.Chebyshev.fit(x, y.real, deg, domain=[0.0, profile.ell])
    im = npcheb.Chebyshev.fit(x, y.imag, deg, domain=[0.0, profile.ell])
    return re, im


def _derivative_func(profile: SpatialProfile, order: int):
    """Callable for the order-th derivative of the profile."""
    cheb = _cheb_interpolant(profile)
    if cheb is not None:
        re, im = cheb
        dre = re.deriv(order) if order else re
        dim = im.deriv(order) if order else im
        return lambda x: dre(x) + 1j * dim(x)
    # uniform samples without an analytic source: spline derivatives
    spline = CubicSpline(profile.grid(), profile.samples)
    return spline.derivative(order) if order else spline


def _gl_l2(func, ell: float, n_panels: int = 64) -> float:
    xg, wg = roots_legendre(8)
    edges = np.linspace(0.0, ell, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return float(np.sqrt(np.sum(w * np.abs(func(x)) ** 2).real))


def sobolev_norm(profile: SpatialProfile, s: float) -> float:
    """H^s(0, ell) norm; integer s uses the derivative-sum convention,
    fractional s the extension realization of bessel_norm at p=2."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if float(s).is_integer():
        total = 0.0
        for j in range(int(s) + 1):
            total += _gl_l2(_derivative_func(profile, j), profile.ell)
        return total
    return bessel_norm(profile, s, 2.0)


def _smoothstep(s: np.ndarray) -> np.ndarray:
    """C-infinity ramp from 0 (s<=0) to 1 (s>=1)."""
    s = np.clip(s, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(s > 0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
        b = np.where(s < 1, np.exp(-1.0 / np.maximum(1.0 - s, 1e-300)), 0.0)
    return a / (a + b)


def _periodic_extension(profile: SpatialProfile, n_base: int = 1024):
    """Samples of the period-4*ell reflect-and-taper extension.

    Layout over one period [0, 4*ell): the profile itself on [0, ell], a
    tapered reflection about x = ell on [ell, 2*ell], zeros on [2*ell, 3*ell],
    and a tapered reflection about x = 0 (placed at the period's end) on
    [3*ell, 4*ell).
    """
    ell = profile.ell
    n = n_base
    h = ell / n
    x = np.arange(n) * h  # one quarter period
    core = np.asarray(profile(x), dtype=np.complex128)
    # taper falls from 1 at the interface to 0 at the far end of each copy
    ramp = _smoothstep(1.0 - x / ell)
    right = np.asarray(profile(ell - x), dtype=np.complex128) * ramp
    # reflection about x = 0 occupies [3*ell, 4*ell): value phi(4*ell - x)
    mirror = np.asarray(profile(ell - x), dtype=np.complex128) * _smoothstep(x / ell)
    ext = np.concatenate([core, right, np.zeros(n, dtype=np.complex128), mirror])
    return ext, h


def bessel_norm(profile: SpatialProfile, s: float, p: float) -> float:
    """Bessel-potential norm ||F^{-1}{(1+k^2)^{s/2} F phi}||_{L^p} restricted
    to (0, ell), realized through the periodic extension."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if p < 2:
        raise ValueError("p must be at least 2")
    ext, h = _periodic_extension(profile)
    n_tot = len(ext)
    period = n_tot * h
    k = 2.0 * np.pi * np.fft.fftfreq(n_tot, d=h)
    mult = (1.0 + k ** 2) ** (s / 2.0)
    smoothed = np.fft.ifft(np.fft.fft(ext) * mult)
    n_core = n_tot // 4
    core = smoothed[:n_core + 1]
    xs = np.arange(len(core)) * h
    if np.isinf(p):
        return float(np.max(np.abs(core)))
    vals = np.abs(core) ** p
    return float(np.trapezoid(vals, xs) ** (1.0 / p))


def _slice_profile(field: Field, j: int) -> SpatialProfile:
    ell = float(field.x_grid[-1] - field.x_grid[0])
    return SpatialProfile(ell, field.values[:, j], GridKind.UNIFORM)


def spatial_slice_norm(field: Field, j: int, spec: NormSpec) -> float:
    """Norm of the j-th time slice per the spatial part of spec."""
    if spec.s == 0 and spec.p == 2:
        # plain grid L2; exact coincidence with the C_t L2_x convention
        sq = np.abs(field.values[:, j]) ** 2
        return float(np.sqrt(np.trapezoid(sq, field.x_grid)))
    prof = _slice_profile(field, j)
    if spec.kind is NormKind.BESSEL_INTERVAL or spec.p != 2:
        return bessel_norm(prof, spec.s, spec.p)
    return sobolev_norm(prof, spec.s)


def mixed_norm(field: Field, q: float, spatial: NormSpec) -> float:
    """L^q in time of the spatial slice norms; q = inf takes the grid max."""
    if q < 2:
        raise ValueError("q must be at least 2")
    slice_norms = np.array([spatial_slice_norm(field, j, spatial)
                            for j in range(len(field.t_grid))])
    if np.isinf(q):
        return float(np.max(slice_norms))
    return float(np.trapezoid(slice_norms ** q, field.t_grid) ** (1.0 / q))


def ct_l2_norm(field: Field) -> float:
    """The C_t L2_x norm: max over the time grid of the spatial L2 norm."""
    return mixed_norm(field, np.inf, NormSpec(0.0, 2.0, np.inf))


def ct_l2_distance(a: Field, b: Field) -> float:
    return ct_l2_norm(Field(a.x_grid, a.t_grid, a.values - b.values))
