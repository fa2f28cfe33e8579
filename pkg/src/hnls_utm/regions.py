"""Region classification and quadrature contours in the complex k-plane.

The sign of Im omega(k) splits the plane into the solution-formula regions:
D0 (Im omega < 0 above the real axis) and D+/D- (Im omega < 0 below the real
axis, right/left of the center line Re k = alpha/(3 beta)).  The punctured
regions remove the disk of radius R_Delta around the center, which contains
the branch cut and all zeros of Delta.  Their boundaries are assembled from
nine oriented segments: hyperbola branches of the Im omega = 0 locus,
circular arcs of the puncture disk, and real-axis rays, each truncated at a
common radius and discretized by composite Gauss-Legendre panels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from .dispersion import DispersionParams, mu_factors, symmetries, symmetry_roots
from .errors import InvalidTruncation


class RegionLabel(enum.Enum):
    D0 = "D0"
    DPLUS = "DPlus"
    DMINUS = "DMinus"
    OUTSIDE = "Outside"
    BOUNDARY = "Boundary"


class SegmentKind(enum.Enum):
    HYPERBOLA_BRANCH = "HyperbolaBranch"
    CIRCULAR_ARC = "CircularArc"
    REAL_RAY = "RealRay"


def im_omega(params: DispersionParams, k):
    """Closed-form Im omega(k) = beta*Im(k)*(3X**2 - Y**2 - disc/(3 beta**2)),
    with X = Re(k) - alpha/(3 beta) and Y = Im(k)."""
    k = np.asarray(k, dtype=np.complex128)
    x = k.real - params.center
    y = k.imag
    val = params.beta * y * (3.0 * x ** 2 - y ** 2 - params.discriminant / (3.0 * params.beta ** 2))
    return float(val) if val.ndim == 0 else val


def classify_region(params: DispersionParams, k: complex, tol: float) -> RegionLabel:
    """Assign the region label of a single point, with a boundary band of
    half-width tol on Im omega."""
    if tol <= 0:
        raise ValueError("classification tolerance must be positive")
    w = im_omega(params, k)
    if w > tol:
        return RegionLabel.OUTSIDE
    if w < -tol:
        if k.imag > 0:
            return RegionLabel.D0
        if k.imag < 0:
            if k.real - params.center > 0:
                return RegionLabel.DPLUS
            return RegionLabel.DMINUS
    return RegionLabel.BOUNDARY


def r_delta(params: DispersionParams, ell: float) -> float:
    """Puncture radius R_Delta = max{(2 sqrt2/(sqrt3 beta)) sqrt|disc|, 9/ell}."""
    if ell <= 0:
        raise ValueError("ell must be positive")
    geo = (2.0 * np.sqrt(2.0) / (np.sqrt(3.0) * params.beta)) * np.sqrt(abs(params.discriminant))
    return max(geo, 9.0 / ell)


def m_delta(params: DispersionParams, ell: float) -> float:
    """Bound M_Delta on |omega| over the puncture disk."""
    rho = abs(params.center) + r_delta(params, ell)
    return params.beta * rho ** 3 + abs(params.alpha) * rho ** 2 + abs(params.delta) * rho


def classification_tol(params: DispersionParams, ell: float) -> float:
    # scale-aware boundary band
    return 1e-12 * (1.0 + m_delta(params, ell))


def delta_fn(params: DispersionParams, ell: float, k):
    """The exponential-sum denominator
    Delta(k) = (nu+ - nu-) e^{-ik ell} + (nu- - k) e^{-i nu+ ell}
             + (k - nu+) e^{-i nu- ell}."""
    nu0, nup, num = symmetry_roots(params, k)
    return ((nup - num) * np.exp(-1j * nu0 * ell)
            + (num - nu0) * np.exp(-1j * nup * ell)
            + (nu0 - nup) * np.exp(-1j * num * ell))


# explicit lower-bound constants for |e^{i nu_n ell} Delta(k)| >= c_n |k - c0|
DELTA_BOUND_C0 = (np.sqrt(5.0) / np.sqrt(2.0)
                  - (3.0 + np.sqrt(7.0) / np.sqrt(2.0))
                  * np.exp(-9.0 * np.sqrt(23.0) / (4.0 * np.sqrt(2.0))))
DELTA_BOUND_CPM = ((3.0 * np.sqrt(2.0) - np.sqrt(7.0)) / (2.0 * np.sqrt(2.0))
                   - ((3.0 * np.sqrt(2.0) + 3.0 * np.sqrt(7.0)) / (2.0 * np.sqrt(2.0)))
                   * np.exp(-9.0 / 4.0))


class SegmentId(enum.Enum):
    GAMMA1 = 1
    GAMMA2 = 2
    GAMMA3 = 3
    GAMMA4 = 4
    GAMMA5 = 5
    GAMMA6 = 6
    GAMMA7 = 7
    GAMMA8 = 8
    GAMMA9 = 9


@dataclass(frozen=True)
class ContourSegment:
    """One oriented piece of the truncated region boundary.

    parametrization maps the natural real parameter (height r for hyperbola
    branches, angle theta for arcs, abscissa for real rays) to a point k.
    orientation is +1 when the traversal runs with increasing parameter and
    -1 otherwise; the quadrature weights already carry the sign, so
    sum(w * f(nodes_k)) approximates the oriented integral of f dk.
    """

    id: SegmentId
    kind: SegmentKind
    region: RegionLabel
    param_range: tuple
    orientation: int
    parametrization: Callable = field(repr=False)
    nodes_param: np.ndarray = field(repr=False)
    nodes_k: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ContourSet:
    segments: tuple
    r_delta: float
    phi0: float
    truncation_radius: float
    nodes_per_segment: int

    def nodes(self, regions=None):
        """Concatenated (k, dk-weight) arrays, optionally restricted to the
        boundary of the given regions."""
        segs = [s for s in self.segments
                if regions is None or s.region in regions]
        k = np.concatenate([s.nodes_k for s in segs])
        w = np.concatenate([s.weights for s in segs])
        return k, w

    def to_csv(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write("segment_id,param,re_k,im_k,weight\n")
            for s in self.segments:
                for p, k, w in zip(s.nodes_param, s.nodes_k, s.weights):
                    fh.write("%s,%.17g,%.17g,%.17g,%.17g%+.17gj\n"
                             % (s.id.name, p, k.real, k.imag, w.real, w.imag))


def _panel_nodes(lo: float, hi: float, n_nodes: int):
    """Composite Gauss-Legendre nodes/weights on [lo, hi].

    Panels are uniform except that the first and last are split in half, to
    concentrate points near segment junctions where integrand curvature
    peaks.
    """
    per_panel = 8
    n_panels = max(1, int(np.ceil(n_nodes / per_panel)))
    edges = list(np.linspace(lo, hi, n_panels + 1))
    if n_panels >= 2:
        edges = ([edges[0], 0.5 * (edges[0] + edges[1])] + edges[1:-1]
                 + [0.5 * (edges[-2] + edges[-1]), edges[-1]])
    xg, wg = roots_legendre(per_panel)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        xs.append(0.5 * (a + b) + half * xg)
        ws.append(half * wg)
    return np.concatenate(xs), np.concatenate(ws)


def _make_segment(seg_id, kind, region, lo, hi, orientation, gamma, dgamma, n_nodes):
    p, w = _panel_nodes(lo, hi, n_nodes)
    k = gamma(p)
    weights = orientation * w * dgamma(p)
    return ContourSegment(seg_id, kind, region, (lo, hi), orientation,
                          gamma, p, np.asarray(k, dtype=np.complex128),
                          np.asarray(weights, dtype=np.complex128))


def arc_half_angle(params: DispersionParams, radius: float) -> float:
    """Half-angle (measured from the vertical) subtended by the puncture arc
    bounding the upper region: the circle of the given radius meets the
    hyperbola 3X^2 - Y^2 = d/(3 beta^2) where
    sin^2(phi0) = (1 + d/(3 beta^2 R^2))/4."""
    d = params.discriminant
    val = 0.25 * (1.0 + d / (3.0 * params.beta ** 2 * radius ** 2))
    return float(np.arcsin(np.sqrt(val)))


def segment_specs(params: DispersionParams, ell: float, puncture_radius: float,
                  truncation_radius: float):
    """Geometric descriptions of the nine boundary segments.

    Returns a list of (id, kind, region, lo, hi, orientation, gamma, dgamma)
    tuples; the puncture radius is R_Delta for the canonical contour set but
    the solver may pass a smaller (deformation-checked) radius.
    """
    beta = params.beta
    c0 = params.center
    d = params.discriminant
    rd = puncture_radius
    r_t = truncation_radius
    phi0 = arc_half_angle(params, rd)

    def s_of_r(r):
        return np.sqrt(3.0 * beta ** 2 * r ** 2 + d) / (3.0 * beta)

    def ds_of_r(r):
        return beta * r / np.sqrt(3.0 * beta ** 2 * r ** 2 + d)

    # junction height and truncation height on the hyperbola branches
    r0 = rd * np.cos(phi0)
    r_trunc = np.sqrt(0.75 * (r_t ** 2 - d / (9.0 * beta ** 2)))

    def arc(theta):
        return c0 + rd * np.exp(1j * theta)

    def darc(theta):
        return 1j * rd * np.exp(1j * theta)

    def hyper(sx, sy):
        # branch with Re k = c0 + sx*S(r), Im k = sy*r, r > 0
        def gamma(r):
            return c0 + sx * s_of_r(r) + 1j * sy * r

        def dgamma(r):
            return sx * ds_of_r(r) + 1j * sy

        return gamma, dgamma

    def real_ray(x):
        return x + 0j * np.asarray(x)

    def done(x):
        return np.ones_like(np.asarray(x), dtype=np.complex128)

    g1, dg1 = hyper(-1.0, +1.0)
    g3, dg3 = hyper(+1.0, +1.0)
    g6, dg6 = hyper(+1.0, -1.0)
    g7, dg7 = hyper(-1.0, -1.0)
    hb = SegmentKind.HYPERBOLA_BRANCH
    return [
        # boundary of the punctured D0, counterclockwise
        (SegmentId.GAMMA1, hb, RegionLabel.D0, r0, r_trunc, -1, g1, dg1),
        (SegmentId.GAMMA2, SegmentKind.CIRCULAR_ARC, RegionLabel.D0,
         0.5 * np.pi - phi0, 0.5 * np.pi + phi0, -1, arc, darc),
        (SegmentId.GAMMA3, hb, RegionLabel.D0, r0, r_trunc, +1, g3, dg3),
        # boundary of the punctured D+
        (SegmentId.GAMMA4, SegmentKind.REAL_RAY, RegionLabel.DPLUS,
         c0 + rd, c0 + r_t, -1, real_ray, done),
        (SegmentId.GAMMA5, SegmentKind.CIRCULAR_ARC, RegionLabel.DPLUS,
         -(0.5 * np.pi - phi0), 0.0, -1, arc, darc),
        (SegmentId.GAMMA6, hb, RegionLabel.DPLUS, r0, r_trunc, +1, g6, dg6),
        # boundary of the punctured D-
        (SegmentId.GAMMA7, hb, RegionLabel.DMINUS, r0, r_trunc, -1, g7, dg7),
        (SegmentId.GAMMA8, SegmentKind.CIRCULAR_ARC, RegionLabel.DMINUS,
         -np.pi, -(0.5 * np.pi + phi0), -1, arc, darc),
        (SegmentId.GAMMA9, SegmentKind.REAL_RAY, RegionLabel.DMINUS,
         c0 - r_t, c0 - rd, -1, real_ray, done),
    ]


def build_contour_set(params: DispersionParams, ell: float,
                      truncation_radius: float, nodes_per_segment: int) -> ContourSet:
    """Construct the nine truncated boundary segments of the punctured
    regions, positively oriented (region on the left).

    Within each region the three segments meet end to end; the labeling runs
    counterclockwise starting from the upper-left hyperbola branch.
    """
    if nodes_per_segment < 8:
        raise ValueError("nodes_per_segment must be at least 8")
    rd = r_delta(params, ell)
    if truncation_radius < rd:
        raise InvalidTruncation(
            "truncation radius %.6g is below the puncture radius %.6g"
            % (truncation_radius, rd))
    phi0 = arc_half_angle(params, rd)
    specs = segment_specs(params, ell, rd, truncation_radius)
    segments = tuple(_make_segment(*spec, nodes_per_segment) for spec in specs)
    return ContourSet(segments, rd, phi0, truncation_radius, nodes_per_segment)


def segment_endpoints(seg: ContourSegment):
    """Start and end point of the oriented traversal."""
    lo, hi = seg.param_range
    if seg.orientation > 0:
        return complex(seg.parametrization(lo)), complex(seg.parametrization(hi))
    return complex(seg.parametrization(hi)), complex(seg.parametrization(lo))
