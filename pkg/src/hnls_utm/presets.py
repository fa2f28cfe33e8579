"""Named analytic data presets for reproducible scenarios.

Three families cover the benchmark needs:

* ``plane_wave(a)``: the manufactured solution e^{i(ax + omega(a) t)} of the
  homogeneous linear equation, with all data read off the exact solution.
* ``gaussian(center, width)``: a smooth profile exp(-((x-center)/width)^2).
* ``bump(lo, hi)``: a C-infinity profile compactly supported in (lo, hi) with
  all endpoint derivatives vanishing, so boundary series built from it satisfy
  the support condition supp in (0, T) and data corners are exactly
  compatible.

Profile/series specs used by the configuration layer are dictionaries
``{"preset": name, **parameters}`` or ``{"path": csv_file}`` for sampled data.
"""

from __future__ import annotations

import numpy as np

from .dispersion import DispersionParams, omega
from .errors import ConfigInvalid
from .fields import Field
from .linear import ProblemData
from .transforms import SpatialProfile, TimeSeries


def bump_callable(lo: float, hi: float, amplitude: float = 1.0):
    """C-infinity bump supported on (lo, hi), normalized to peak amplitude.

    Uses exp(4 - 1/s - 1/(1-s)) with s the affine coordinate on [lo, hi];
    the factor e^4 makes the midpoint value exactly ``amplitude``.
    """
    if not hi > lo:
        raise ValueError("bump support needs hi > lo")
    span = hi - lo

    def func(x):
        s = (np.asarray(x, dtype=np.float64) - lo) / span
        out = np.zeros(s.shape, dtype=np.complex128)
        inside = (s > 0.0) & (s < 1.0)
        si = s[inside]
        out[inside] = amplitude * np.exp(4.0 - 1.0 / si - 1.0 / (1.0 - si))
        return out

    return func


def gaussian_callable(center: float, width: float, amplitude: float = 1.0):
    if width <= 0:
        raise ValueError("gaussian width must be positive")

    def func(x):
        x = np.asarray(x, dtype=np.float64)
        return amplitude * np.exp(-((x - center) / width) ** 2) + 0.0j

    return func


def gaussian_profile(ell: float, center: float, width: float,
                     amplitude: float = 1.0, n: int = 257) -> SpatialProfile:
    return SpatialProfile.from_callable(
        gaussian_callable(center, width, amplitude), ell, n=n)


def bump_profile(ell: float, lo: float = None, hi: float = None,
                 amplitude: float = 1.0, n: int = 257) -> SpatialProfile:
    lo = 0.15 * ell if lo is None else lo
    hi = 0.85 * ell if hi is None else hi
    return SpatialProfile.from_callable(
        bump_callable(lo, hi, amplitude), ell, n=n)


def bump_series(horizon: float, lo: float = None, hi: float = None,
                amplitude: float = 1.0, n: int = 257) -> TimeSeries:
    """Time bump supported strictly inside (0, horizon); satisfies the
    boundary-data support condition and vanishes with all derivatives at
    t = 0, so the data corners are compatible with any u0 vanishing there."""
    lo = 0.15 * horizon if lo is None else lo
    hi = 0.85 * horizon if hi is None else hi
    return TimeSeries.from_callable(bump_callable(lo, hi, amplitude),
                                    horizon, n=n)


def zero_profile(ell: float) -> SpatialProfile:
    return SpatialProfile(ell, np.zeros(8))


def zero_series(horizon: float) -> TimeSeries:
    return TimeSeries(horizon, np.zeros(8))


def plane_wave_exact(params: DispersionParams, a: float):
    """(x, t) -> e^{i(ax + omega(a) t)}, an exact homogeneous solution."""
    wa = omega(params, complex(a))

    def func(x, t):
        return np.exp(1j * (a * np.asarray(x) + wa * np.asarray(t)))

    return func


def plane_wave_data(params: DispersionParams, ell: float, horizon: float,
                    a: float, n: int = 257) -> ProblemData:
    """ProblemData whose initial/boundary data are read off the plane wave."""
    wa = omega(params, complex(a))
    u0 = SpatialProfile.from_callable(
        lambda x: np.exp(1j * a * np.asarray(x)), ell, n=n)
    g0 = TimeSeries.from_callable(
        lambda t: np.exp(1j * wa * np.asarray(t)), horizon, n=n)
    h0 = TimeSeries.from_callable(
        lambda t: np.exp(1j * (a * ell + wa * np.asarray(t))), horizon, n=n)
    h1 = TimeSeries.from_callable(
        lambda t: 1j * a * np.exp(1j * (a * ell + wa * np.asarray(t))),
        horizon, n=n)
    return ProblemData(params, ell, horizon, u0, g0, h0, h1)


def plane_wave_field(params: DispersionParams, a: float,
                     x_grid, t_grid) -> Field:
    return Field.from_callable(plane_wave_exact(params, a), x_grid, t_grid)


# --------------------------------------------------------------------------
# spec-dictionary builders used by the configuration layer
# --------------------------------------------------------------------------

def _load_samples(path):
    try:
        raw = np.loadtxt(path, delimiter=",", skiprows=1)
    except OSError as exc:
        raise ConfigInvalid("cannot read data file %r: %s" % (path, exc))
    if raw.ndim != 2 or raw.shape[1] < 3:
        raise ConfigInvalid("data file %r needs columns coord,re,im" % path)
    return raw[:, 0], raw[:, 1] + 1j * raw[:, 2]


def profile_from_spec(spec, ell: float) -> SpatialProfile:
    """Build a SpatialProfile from a preset/path dictionary (None -> zero)."""
    if spec is None:
        return zero_profile(ell)
    if "path" in spec:
        _coords, vals = _load_samples(spec["path"])
        return SpatialProfile(ell, vals)
    name = spec.get("preset")
    if name == "zero":
        return zero_profile(ell)
    if name == "gaussian":
        return gaussian_profile(ell, float(spec.get("center", 0.5 * ell)),
                                float(spec.get("width", 0.1 * ell)),
                                float(spec.get("amplitude", 1.0)))
    if name == "bump":
        lo = spec.get("lo")
        hi = spec.get("hi")
        return bump_profile(ell, None if lo is None else float(lo),
                            None if hi is None else float(hi),
                            float(spec.get("amplitude", 1.0)))
    if name == "plane_wave":
        a = float(spec.get("a", 2.0))
        return SpatialProfile.from_callable(
            lambda x: np.exp(1j * a * np.asarray(x)), ell)
    raise ConfigInvalid("unknown spatial preset %r" % (name,))


def series_from_spec(spec, horizon: float) -> TimeSeries:
    """Build a TimeSeries from a preset/path dictionary (None -> zero)."""
    if spec is None:
        return zero_series(horizon)
    if "path" in spec:
        _coords, vals = _load_samples(spec["path"])
        return TimeSeries(horizon, vals)
    name = spec.get("preset")
    if name == "zero":
        return zero_series(horizon)
    if name == "bump":
        lo = spec.get("lo")
        hi = spec.get("hi")
        return bump_series(horizon, None if lo is None else float(lo),
                           None if hi is None else float(hi),
                           float(spec.get("amplitude", 1.0)))
    raise ConfigInvalid("unknown time-series preset %r" % (name,))
