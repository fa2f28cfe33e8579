"""Theta-weighted implicit finite-difference reference solver.

An independent discretization of the interval problem used to validate the
contour-integral evaluator: the equation is stepped as

    u_t = L u - i (f + kappa |u|^{lambda-1} u),
    L   = -beta d_xxx + i alpha d_xx - delta d_x,

with a theta-weighted implicit scheme.  Interior stencils are 4th order for
u_x and u_xx and centered (2nd order) for u_xxx; the row adjacent to x = 0
uses a one-sided 6-point stencil, and a single ghost point past x = ell is
closed by the 4th-order one-sided Neumann condition.  Each step solves one
banded system; the LU factorization is computed once (the step is constant)
and reused.  The nonlinearity is handled by a per-step fixed-point sweep.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import lapack

from .errors import StepDiverged
from .fields import Field
from .linear import ProblemData, fd_weights

_KL, _KU = 3, 4  # band widths of the implicit matrix


class BcMode(enum.Enum):
    FULL_DATA = "FullData"
    HOMOGENEOUS = "Homogeneous"


@dataclass(frozen=True)
class OracleConfig:
    nx: int = 256
    nt: int = 256
    theta: float = 0.55
    bc_mode: BcMode = BcMode.FULL_DATA

    def __post_init__(self):
        if self.nx < 16 or self.nt < 16:
            raise ValueError("nx and nt must be at least 16")
        if not 0.5 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [1/2, 1]")


def _stencil_rows(params, x):
    """Rows of the spatial operator L at the interior points.

    Returns (rows, neumann) where rows is a list of (i, point_indices, weights)
    with index nx standing for the ghost point at ell + h, and neumann is the
    (point_indices, weights) of the 4th-order one-sided first derivative at
    x = ell used to close the ghost.
    """
    nx = len(x)
    h = x[1] - x[0]
    ghost_x = x[-1] + h

    def coords(idx):
        return np.array([ghost_x if j == nx else x[j] for j in idx])

    rows = []
    for i in range(1, nx - 1):
        idx = np.arange(0, 6) if i == 1 else np.arange(i - 2, i + 3)
        pts = coords(idx)
        lrow = (-params.beta * fd_weights(pts, x[i], 3)
                + 1j * params.alpha * fd_weights(pts, x[i], 2)
                - params.delta * fd_weights(pts, x[i], 1))
        rows.append((i, idx, lrow))
    n_idx = np.array([nx - 4, nx - 3, nx - 2, nx - 1, nx])
    n_w = fd_weights(coords(n_idx), x[-1], 1)
    return rows, (n_idx, n_w)


def _unknown_col(p, nx):
    """Column of grid point p in the unknown vector (u_1..u_{nx-2}, ghost),
    or -1 if p is a boundary point carried on the right-hand side."""
    if 1 <= p <= nx - 2:
        return p - 1
    if p == nx:
        return nx - 2
    return -1


def _banded_matrix(rows, neumann, nx, dt_theta):
    """LAPACK band storage of I - dt*theta*L on the unknowns, with the
    Neumann closure as the last row."""
    n_un = nx - 1
    ab = np.zeros((2 * _KL + _KU + 1, n_un), dtype=np.complex128)

    def put(r, c, v):
        ab[_KL + _KU + r - c, c] += v

    for i, idx, lrow in rows:
        r = i - 1
        put(r, r, 1.0)
        for p, lv in zip(idx, lrow):
            c = _unknown_col(p, nx)
            if c >= 0:
                put(r, c, -dt_theta * lv)
    n_idx, n_w = neumann
    r = n_un - 1
    for p, wv in zip(n_idx, n_w):
        c = _unknown_col(p, nx)
        if c >= 0:
            put(r, c, wv)
    return ab


def _apply_l(rows, state):
    """L applied to the full state (grid values then ghost) at the interior
    points, as an array of length nx - 2."""
    out = np.empty(len(rows), dtype=np.complex128)
    for j, (_i, idx, lrow) in enumerate(rows):
        out[j] = lrow @ state[idx]
    return out


def _boundary_series(data: ProblemData, t_grid, bc_mode):
    if bc_mode is BcMode.HOMOGENEOUS:
        z = np.zeros(len(t_grid), dtype=np.complex128)
        return z, z, z
    return (np.asarray(data.g0(t_grid), dtype=np.complex128),
            np.asarray(data.h0(t_grid), dtype=np.complex128),
            np.asarray(data.h1(t_grid), dtype=np.complex128))


def _forcing_table(data: ProblemData, x_grid, t_grid):
    if data.forcing is None:
        return None
    f = data.forcing
    on_x = CubicSpline(f.x_grid, f.values, axis=0)(x_grid)
    return CubicSpline(f.t_grid, on_x, axis=1)(t_grid)


def oracle_solve(data: ProblemData, config: OracleConfig) -> Field:
    """Step the interval problem on a uniform grid and return the field."""
    params, ell, horizon = data.params, data.ell, data.horizon
    nx, nt, theta = config.nx, config.nt, config.theta
    x = np.linspace(0.0, ell, nx)
    t = np.linspace(0.0, horizon, nt)
    dt = t[1] - t[0]
    kappa, lam = complex(data.kappa), data.lam

    rows, neumann = _stencil_rows(params, x)
    ab = _banded_matrix(rows, neumann, nx, dt * theta)
    lu, piv, info = lapack.zgbtrf(ab, _KL, _KU)
    if info != 0:
        raise StepDiverged("implicit matrix is singular (info=%d)" % info)

    g0, h0, h1 = _boundary_series(data, t, config.bc_mode)
    ftab = _forcing_table(data, x, t)

    def q_term(interior, n):
        """-i (f + kappa |u|^{lam-1} u) at the interior points, time index n."""
        out = np.zeros(nx - 2, dtype=np.complex128)
        if ftab is not None:
            out += ftab[1:-1, n]
        if kappa != 0:
            out += kappa * np.abs(interior) ** (lam - 1.0) * interior
        return -1j * out

    # initial state: grid values then the ghost, closed by the Neumann row
    state = np.empty(nx + 1, dtype=np.complex128)
    state[:nx] = np.asarray(data.u0(x), dtype=np.complex128)
    state[0], state[nx - 1] = g0[0], h0[0]
    n_idx, n_w = neumann
    state[nx] = (h1[0] - n_w[:4] @ state[n_idx[:4]]) / n_w[4]

    values = np.empty((nx, nt), dtype=np.complex128)
    values[:, 0] = state[:nx]

    # static pieces of the implicit rows' boundary coupling
    bdry = []  # per row: list of (point, L weight) at known points
    for i, idx, lrow in rows:
        bdry.append([(p, lv) for p, lv in zip(idx, lrow)
                     if _unknown_col(p, nx) < 0])

    for n in range(1, nt):
        lu_n = _apply_l(rows, state)
        interior_n = state[1:nx - 1]
        rhs_fixed = interior_n + dt * (1.0 - theta) * (lu_n + q_term(interior_n, n - 1))
        # known boundary values at the new level enter the implicit side
        known = np.zeros(nx + 1, dtype=np.complex128)
        known[0], known[nx - 1] = g0[n], h0[n]
        for j, pairs in enumerate(bdry):
            for p, lv in pairs:
                rhs_fixed[j] += dt * theta * lv * known[p]
        b_neu = h1[n] - n_w[3] * h0[n]

        guess = interior_n.copy()
        scale = max(float(np.max(np.abs(guess))), 1.0)
        nonlinear = kappa != 0
        diffs = []
        for _sweep in range(5 if nonlinear else 1):
            b = np.empty(nx - 1, dtype=np.complex128)
            b[:-1] = rhs_fixed + dt * theta * q_term(guess, n)
            b[-1] = b_neu
            sol, info = lapack.zgbtrs(lu, _KL, _KU, b, piv)
            if info != 0:
                raise StepDiverged("banded solve failed at step %d" % n)
            new = sol[:nx - 2]
            diffs.append(float(np.max(np.abs(new - guess))))
            guess = new
            if not nonlinear or diffs[-1] <= 1e-12 * scale:
                break
        if nonlinear and diffs[-1] > 1e-9 * scale and (
                len(diffs) < 2 or diffs[-1] >= diffs[-2]):
            raise StepDiverged(
                "fixed-point sweep failed to contract at step %d "
                "(residual %.3g)" % (n, diffs[-1]))
        state[1:nx - 1] = guess
        state[0], state[nx - 1] = g0[n], h0[n]
        state[nx] = sol[nx - 2]
        if not np.all(np.isfinite(guess.view(np.float64))):
            raise StepDiverged("non-finite values at step %d" % n)
        values[:, n] = state[:nx]

    return Field(x, t, values)
