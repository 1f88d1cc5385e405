"""Conservative, continuous per-cell reconstructions.

Every cell interpolates its two boundary point values and matches its
average.  The default shape is the parabola; where the parabola would
over/undershoot and a monotone alternative exists, a power law
q_lo + (q_hi - q_lo) * u**N replaces it (u runs from 0 to 1 across the cell,
N fixed by conservation).  The 2D reconstruction is the tensor-product
biquadratic through the 9 cell DOFs; it reduces to a parabola on every edge,
which makes the global reconstruction continuous.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .core import BoundaryMode, Grid1D, Grid2D, State1D, State2D


class Region(Enum):
    """Monotonicity classification of a (average, left, right) triple."""

    A_OVERSHOOT = "A"     # average outside the point-value range
    B_LIMITABLE = "B"     # parabola not monotone, power law is
    C_MONOTONE = "C"      # parabola already monotone


class ReconMode(Enum):
    PARABOLA = 0
    POWER_LAW = 1
    POWER_LAW_MIRRORED = 2


class LimiterKind(Enum):
    NONE = "none"
    POWER_LAW = "power"
    SYMMETRIZED_POWER_LAW = "sym-power"


@dataclass(frozen=True)
class LimiterMode:
    """Limiter selection plus the exponent cutoff.

    Limiting is discarded when max(N, 1/N) exceeds n_cutoff; the parabola is
    used instead.
    """

    kind: LimiterKind = LimiterKind.NONE
    n_cutoff: float = 50.0

    def __post_init__(self) -> None:
        if not self.n_cutoff > 1.0:
            raise ValueError("n_cutoff must exceed 1")


NO_LIMITER = LimiterMode(LimiterKind.NONE)


@dataclass(frozen=True)
class CellReconstruction1D:
    """One cell's reconstruction in the coordinate s = (x - x_i)/dx.

    Parabola: value = c2*s**2 + c1*s + c0 (coefficients exposed as
    properties), evaluated through the endpoint-exact basis
    q_left*(3s^2 - s - 1/4) + q_right*(3s^2 + s - 1/4) + q_bar*(3/2 - 6s^2)
    so that s = -1/2 and +1/2 reproduce the stored endpoints bitwise.
    Power law: value = q_lo + (q_hi - q_lo)*u**exponent with u measured from
    the endpoint holding q_lo.  Mirrored: value = q_hi - (q_hi - q_lo)*u**e
    with u measured from the endpoint holding q_hi (e = 1/N of the plain
    branch).
    """

    mode: ReconMode
    q_bar: float
    q_left: float
    q_right: float
    exponent: float = 1.0

    @property
    def c2(self) -> float:
        return -3.0 * (2.0 * self.q_bar - self.q_left - self.q_right)

    @property
    def c1(self) -> float:
        return self.q_right - self.q_left

    @property
    def c0(self) -> float:
        return (6.0 * self.q_bar - self.q_left - self.q_right) / 4.0

    @property
    def q_lo(self) -> float:
        return min(self.q_left, self.q_right)

    @property
    def q_hi(self) -> float:
        return max(self.q_left, self.q_right)

    @property
    def lo_at_left(self) -> bool:
        return self.q_left <= self.q_right

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.mode is ReconMode.PARABOLA:
            if self.q_left == self.q_right == self.q_bar:
                return np.full_like(s, self.q_bar)
            s2 = s * s
            return (self.q_left * (3.0 * s2 - s - 0.25)
                    + self.q_right * (3.0 * s2 + s - 0.25)
                    + self.q_bar * (1.5 - 6.0 * s2))
        u_from_left = np.clip(s + 0.5, 0.0, 1.0)
        lo, hi = self.q_lo, self.q_hi
        if self.mode is ReconMode.POWER_LAW:
            u = u_from_left if self.lo_at_left else 1.0 - u_from_left
            return lo + (hi - lo) * u ** self.exponent
        u = 1.0 - u_from_left if self.lo_at_left else u_from_left
        return hi - (hi - lo) * u ** self.exponent


def build_parabola(q_bar: float, q_left: float, q_right: float) -> CellReconstruction1D:
    """Unique parabola matching the cell mean and both endpoint values."""
    return CellReconstruction1D(ReconMode.PARABOLA, q_bar, q_left, q_right)


def classify_cell(q_bar: float, q_left: float, q_right: float) -> Region:
    """Classify the triple into regions A (unavoidable overshoot),
    B (limitable) or C (parabola monotone).

    The limitable bands have width r = |q_right - q_left| / 3 measured from
    each endpoint; region C is the closed complement inside the value range.
    Degenerate data q_left == q_right give C when the average agrees, else A.
    """
    lo = min(q_left, q_right)
    hi = max(q_left, q_right)
    if q_bar < lo or q_bar > hi:
        return Region.A_OVERSHOOT
    if q_left == q_right:
        return Region.C_MONOTONE if q_bar == q_left else Region.A_OVERSHOOT
    r = (hi - lo) / 3.0
    if lo + r <= q_bar <= hi - r:
        return Region.C_MONOTONE
    return Region.B_LIMITABLE


def power_law_exponent(q_bar: float, q_left: float, q_right: float) -> float:
    """Exponent N of the monotone power law, orientation adjusted.

    N = (q_hi - q_bar)/(q_bar - q_lo); for decreasing data the coordinate is
    reflected, which swaps the endpoint roles and keeps N positive.  Only
    valid in region B.
    """
    if classify_cell(q_bar, q_left, q_right) is not Region.B_LIMITABLE:
        raise ValueError("power_law_exponent requires region B data")
    lo = min(q_left, q_right)
    hi = max(q_left, q_right)
    with np.errstate(divide="ignore"):
        return float(np.float64(hi - q_bar) / np.float64(q_bar - lo))


def reconstruct_cell(q_bar: float, q_left: float, q_right: float,
                     limiter: LimiterMode = NO_LIMITER) -> CellReconstruction1D:
    """Limited reconstruction of one cell.

    Regions A and C keep the parabola (in A no monotone choice exists and the
    parabola minimizes clipping of extrema).  In region B the power law is
    used; the symmetrized variant switches to the mirrored exponent 1/N when
    the average sits within r of the high endpoint.  The cutoff reverts to
    the parabola whenever max(N, 1/N) > n_cutoff.
    """
    if limiter.kind is LimiterKind.NONE:
        return build_parabola(q_bar, q_left, q_right)
    if classify_cell(q_bar, q_left, q_right) is not Region.B_LIMITABLE:
        return build_parabola(q_bar, q_left, q_right)
    n_exp = power_law_exponent(q_bar, q_left, q_right)
    if not np.isfinite(n_exp) or n_exp == 0.0 or max(n_exp, 1.0 / n_exp) > limiter.n_cutoff:
        return build_parabola(q_bar, q_left, q_right)
    hi = max(q_left, q_right)
    lo = min(q_left, q_right)
    if limiter.kind is LimiterKind.SYMMETRIZED_POWER_LAW and q_bar > hi - (hi - lo) / 3.0:
        return CellReconstruction1D(ReconMode.POWER_LAW_MIRRORED, q_bar,
                                    q_left, q_right, exponent=1.0 / n_exp)
    return CellReconstruction1D(ReconMode.POWER_LAW, q_bar, q_left, q_right,
                                exponent=n_exp)


@njit(cache=True)
def _eval_1d(x, x_min, x_max, dx, n_cells, periodic, q_bar, q_l, q_r, mode,
             p_exp, points, out):
    """Fused evaluation kernel; exact interface hits return point values."""
    m = q_bar.shape[1]
    length = x_max - x_min
    for k in range(x.shape[0]):
        if periodic:
            x_eff = x_min + (x[k] - x_min) % length
        else:
            x_eff = min(max(x[k], x_min), x_max)
        f = (x_eff - x_min) / dx
        j = np.rint(f)
        if x_eff == x_min + j * dx:
            jj = int(j)
            if periodic:
                jj = jj % n_cells
            elif jj > n_cells:
                jj = n_cells
            elif jj < 0:
                jj = 0
            for c in range(m):
                out[k, c] = points[jj, c]
            continue
        i = int(np.floor(f))
        if i < 0:
            i = 0
        elif i > n_cells - 1:
            i = n_cells - 1
        s = f - i - 0.5
        s2 = s * s
        for c in range(m):
            md = mode[i, c]
            ql = q_l[i, c]
            qr = q_r[i, c]
            if md == 0:
                qb = q_bar[i, c]
                if ql == qr and ql == qb:
                    out[k, c] = qb
                else:
                    out[k, c] = (ql * (3.0 * s2 - s - 0.25)
                                 + qr * (3.0 * s2 + s - 0.25)
                                 + qb * (1.5 - 6.0 * s2))
            else:
                u = s + 0.5
                if u < 0.0:
                    u = 0.0
                elif u > 1.0:
                    u = 1.0
                lo = min(ql, qr)
                hi = max(ql, qr)
                if (ql <= qr) != (md == 2):
                    uu = u
                else:
                    uu = 1.0 - u
                val = uu ** p_exp[i, c]
                if md == 2:
                    out[k, c] = hi - (hi - lo) * val
                else:
                    out[k, c] = lo + (hi - lo) * val


class Reconstruction1D:
    """Vectorized global reconstruction of a 1D state (all cells, all vars).

    Applied to conservative quantities individually.  Evaluation resolves any
    coordinate through the boundary mode, so footpoints outside the origin
    cell are valid queries.  Coordinates landing exactly on an interface
    return the stored point value.
    """

    def __init__(self, grid: Grid1D, bc: BoundaryMode, averages: np.ndarray,
                 points: np.ndarray, limiter: LimiterMode = NO_LIMITER):
        self.grid = grid
        self.bc = bc
        self.points = np.ascontiguousarray(points, dtype=np.float64)
        points = self.points
        n, m = averages.shape

        self.q_bar = np.ascontiguousarray(averages, dtype=np.float64)
        if bc is BoundaryMode.PERIODIC:
            self.q_l = points
            self.q_r = np.ascontiguousarray(np.roll(points, -1, axis=0))
        else:
            self.q_l = np.ascontiguousarray(points[:-1])
            self.q_r = np.ascontiguousarray(points[1:])
        q_l, q_r = self.q_l, self.q_r

        self.mode = np.zeros((n, m), dtype=np.uint8)
        self.p_exp = np.ones((n, m))

        if limiter.kind is not LimiterKind.NONE:
            lo = np.minimum(q_l, q_r)
            hi = np.maximum(q_l, q_r)
            r = (hi - lo) / 3.0
            in_range = (averages >= lo) & (averages <= hi) & (q_l != q_r)
            monotone = (averages >= lo + r) & (averages <= hi - r)
            region_b = in_range & ~monotone
            with np.errstate(divide="ignore", invalid="ignore"):
                n_exp = (hi - averages) / (averages - lo)
                inv = 1.0 / n_exp
            ok = region_b & np.isfinite(n_exp) & (n_exp > 0.0)
            ok &= np.maximum(n_exp, np.where(ok, inv, np.inf)) <= limiter.n_cutoff
            mirrored = ok & (averages > hi - r) if \
                limiter.kind is LimiterKind.SYMMETRIZED_POWER_LAW else np.zeros_like(ok)
            self.mode[ok] = ReconMode.POWER_LAW.value
            self.mode[mirrored] = ReconMode.POWER_LAW_MIRRORED.value
            self.p_exp = np.where(mirrored, inv, np.where(ok, n_exp, 1.0))

    def cell(self, i: int, comp: int = 0) -> CellReconstruction1D:
        """Single-cell view, mainly for tests and diagnostics."""
        return CellReconstruction1D(ReconMode(self.mode[i, comp]),
                                    self.q_bar[i, comp], self.q_l[i, comp],
                                    self.q_r[i, comp],
                                    exponent=self.p_exp[i, comp])

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Evaluate at coordinates x, returning shape (len(x), m)."""
        grid = self.grid
        x = np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
        out = np.empty((x.shape[0], self.q_bar.shape[1]))
        _eval_1d(x, grid.x_min, grid.x_max, grid.dx, grid.n_cells,
                 self.bc is BoundaryMode.PERIODIC, self.q_bar, self.q_l,
                 self.q_r, self.mode, self.p_exp, self.points, out)
        return out


def eval_reconstruction(state: State1D, grid: Grid1D, bc: BoundaryMode, x,
                        limiter: LimiterMode = NO_LIMITER) -> np.ndarray:
    """Evaluate the state's reconstruction at x (owning cell via locate_cell)."""
    recon = Reconstruction1D(grid, bc, state.averages, state.points, limiter)
    out = recon(np.atleast_1d(np.asarray(x, dtype=float)))
    if np.ndim(x) == 0:
        return out[0]
    return out


# 1D quadratic Lagrange basis on nodes {-1/2, 0, +1/2}


def _lagrange3(s: np.ndarray) -> tuple:
    return 2.0 * s * s - s, 1.0 - 4.0 * s * s, 2.0 * s * s + s


@dataclass(frozen=True)
class BiquadraticCell:
    """Tensor-product quadratic on one cell, nodal 3x3 value matrix.

    nodal[a, b] is the value at (s_a, s_b), s in {-1/2, 0, +1/2}; the center
    value nodal[1, 1] is fixed by conservation.
    """

    nodal: np.ndarray

    def __call__(self, sx, sy):
        lx = _lagrange3(np.asarray(sx, dtype=float))
        ly = _lagrange3(np.asarray(sy, dtype=float))
        out = 0.0
        for a in range(3):
            for b in range(3):
                out = out + self.nodal[a, b] * lx[a] * ly[b]
        return out


def build_biquadratic_2d(q_bar: float, corners, mids) -> BiquadraticCell:
    """Biquadratic through 4 corners, 4 edge midpoints and the cell mean.

    corners = (sw, se, nw, ne), mids = (south, east, north, west).  The
    restriction to each edge is the parabola through that edge's 3 point
    values, so neighbouring cells agree along shared edges.
    """
    sw, se, nw, ne = corners
    m_s, m_e, m_n, m_w = mids
    center = 2.25 * q_bar - (sw + se + nw + ne) / 16.0 - (m_s + m_e + m_n + m_w) / 4.0
    nodal = np.array([[sw, m_w, nw],
                      [m_s, center, m_n],
                      [se, m_e, ne]], dtype=float)
    return BiquadraticCell(nodal)


@njit(cache=True)
def _fold(k, size, periodic):
    if periodic:
        return k % size
    if k < 0:
        return 0
    if k > size - 1:
        return size - 1
    return k


@njit(cache=True)
def _eval_2d(x, y, x_min, y_min, dx, dy, nx, ny, periodic,
             corners, xmid, ymid, center, out):
    len_x = nx * dx
    len_y = ny * dy
    for k in range(x.shape[0]):
        if periodic:
            x_eff = x_min + (x[k] - x_min) % len_x
            y_eff = y_min + (y[k] - y_min) % len_y
        else:
            x_eff = min(max(x[k], x_min), x_min + len_x)
            y_eff = min(max(y[k], y_min), y_min + len_y)
        fx = (x_eff - x_min) / dx
        fy = (y_eff - y_min) / dy

        # Exact hits on the half-index grid -> stored DOF (or derived center).
        kx = np.rint(2.0 * fx)
        ky = np.rint(2.0 * fy)
        if fx == 0.5 * kx and fy == 0.5 * ky:
            ke_x = int(kx)
            ke_y = int(ky)
            ie = ke_x // 2
            je = ke_y // 2
            if ke_x % 2 == 0:
                if ke_y % 2 == 0:
                    out[k] = corners[_fold(ie, corners.shape[0], periodic),
                                     _fold(je, corners.shape[1], periodic)]
                else:
                    out[k] = ymid[_fold(ie, ymid.shape[0], periodic),
                                  _fold(je, ymid.shape[1], periodic)]
            else:
                if ke_y % 2 == 0:
                    out[k] = xmid[_fold(ie, xmid.shape[0], periodic),
                                  _fold(je, xmid.shape[1], periodic)]
                else:
                    out[k] = center[_fold(ie, nx, periodic),
                                    _fold(je, ny, periodic)]
            continue

        ci = int(np.floor(fx))
        cj = int(np.floor(fy))
        if ci < 0:
            ci = 0
        elif ci > nx - 1:
            ci = nx - 1
        if cj < 0:
            cj = 0
        elif cj > ny - 1:
            cj = ny - 1
        sx = fx - ci - 0.5
        sy = fy - cj - 0.5

        ip = (ci + 1) % nx if periodic else ci + 1
        jp = (cj + 1) % ny if periodic else cj + 1

        # flat cells reproduce the constant bitwise
        v00 = corners[ci, cj]
        if (v00 == corners[ci, jp] and v00 == corners[ip, cj]
                and v00 == corners[ip, jp] and v00 == ymid[ci, cj]
                and v00 == ymid[ip, cj] and v00 == xmid[ci, cj]
                and v00 == xmid[ci, jp] and v00 == center[ci, cj]):
            out[k] = v00
            continue

        lx0 = 2.0 * sx * sx - sx
        lx1 = 1.0 - 4.0 * sx * sx
        lx2 = 2.0 * sx * sx + sx
        ly0 = 2.0 * sy * sy - sy
        ly1 = 1.0 - 4.0 * sy * sy
        ly2 = 2.0 * sy * sy + sy

        out[k] = (lx0 * (ly0 * corners[ci, cj] + ly1 * ymid[ci, cj]
                         + ly2 * corners[ci, jp])
                  + lx1 * (ly0 * xmid[ci, cj] + ly1 * center[ci, cj]
                           + ly2 * xmid[ci, jp])
                  + lx2 * (ly0 * corners[ip, cj] + ly1 * ymid[ip, cj]
                           + ly2 * corners[ip, jp]))


class Reconstruction2D:
    """Vectorized global biquadratic reconstruction of a scalar 2D state.

    No limiting is applied in 2D.  Exact hits on stored DOF locations return
    the stored values; the derived cell-center value is likewise returned
    exactly when queried.
    """

    def __init__(self, grid: Grid2D, bc: BoundaryMode, state: State2D):
        self.grid = grid
        self.bc = bc
        self.corners = np.ascontiguousarray(state.corners, dtype=np.float64)
        self.xmid = np.ascontiguousarray(state.xmid, dtype=np.float64)
        self.ymid = np.ascontiguousarray(state.ymid, dtype=np.float64)
        c, mx, my = self.corners, self.xmid, self.ymid
        if bc is BoundaryMode.PERIODIC:
            csum = c + np.roll(c, -1, 0) + np.roll(c, -1, 1) + np.roll(np.roll(c, -1, 0), -1, 1)
            msum = mx + np.roll(mx, -1, 1) + my + np.roll(my, -1, 0)
        else:
            csum = c[:-1, :-1] + c[1:, :-1] + c[:-1, 1:] + c[1:, 1:]
            msum = mx[:, :-1] + mx[:, 1:] + my[:-1, :] + my[1:, :]
        self.center = 2.25 * state.averages - csum / 16.0 - msum / 4.0

    def cell(self, i: int, j: int) -> BiquadraticCell:
        """Single-cell view (tests and diagnostics)."""
        per = self.bc is BoundaryMode.PERIODIC
        ip = (i + 1) % self.grid.nx if per else i + 1
        jp = (j + 1) % self.grid.ny if per else j + 1
        nodal = np.array([
            [self.corners[i, j], self.ymid[i, j], self.corners[i, jp]],
            [self.xmid[i, j], self.center[i, j], self.xmid[i, jp]],
            [self.corners[ip, j], self.ymid[ip, j], self.corners[ip, jp]]])
        return BiquadraticCell(nodal)

    def __call__(self, x, y) -> np.ndarray:
        x = np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
        y = np.ascontiguousarray(np.atleast_1d(y), dtype=np.float64)
        out = np.empty_like(x)
        grid = self.grid
        _eval_2d(x, y, grid.x_min, grid.y_min, grid.dx, grid.dy,
                 grid.nx, grid.ny, self.bc is BoundaryMode.PERIODIC,
                 self.corners, self.xmid, self.ymid, self.center, out)
        return out
