"""Conservation-law definitions and exact-solution oracles.

Scalar models carry flux f(q) and wave speed a(q) = f'(q); system models add
the eigen-structure (speeds, left-eigenvector matrix R and its inverse) in a
convenient set of working variables, transforms between conservative and
working variables, and characteristic variables where the system admits
them.  Reconstruction always acts on conservative variables; transforms
happen at evaluation points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class InadmissibleStateError(RuntimeError):
    """A state left the model's admissible region (e.g. rho <= 0)."""


@dataclass(frozen=True)
class ScalarModel:
    """Scalar 1D conservation law with convex flux.

    inverse_speed is the rarefaction profile a^{-1}(x/t); shock_speed is the
    Rankine-Hugoniot speed of the jump joining two states.
    """

    name: str
    flux: Callable[[np.ndarray], np.ndarray]
    speed: Callable[[np.ndarray], np.ndarray]
    inverse_speed: Callable[[np.ndarray], np.ndarray]
    m: int = 1
    var_names: Sequence[str] = ("q",)

    def shock_speed(self, q_l: float, q_r: float) -> float:
        if q_l == q_r:
            return float(self.speed(np.float64(q_l)))
        return float((self.flux(np.float64(q_l)) - self.flux(np.float64(q_r)))
                     / (q_l - q_r))


@dataclass(frozen=True)
class ScalarModel2D:
    """Scalar 2D conservation law with per-direction fluxes and speeds."""

    name: str
    flux_x: Callable[[np.ndarray], np.ndarray]
    flux_y: Callable[[np.ndarray], np.ndarray]
    speed_x: Callable[[np.ndarray], np.ndarray]
    speed_y: Callable[[np.ndarray], np.ndarray]
    m: int = 1
    var_names: Sequence[str] = ("q",)


def burgers() -> ScalarModel:
    """f = q^2/2, a = q."""
    return ScalarModel("burgers", lambda q: 0.5 * q * q, lambda q: q,
                       lambda s: s)


def burgers_2d() -> ScalarModel2D:
    """Multi-dimensional variant with flux (q^2/2, q^2/2)."""
    f = lambda q: 0.5 * q * q
    a = lambda q: q
    return ScalarModel2D("burgers2d", f, f, a, a)


def quartic() -> ScalarModel:
    """f = q^4/4, a = q^3; rarefaction profile is cbrt(x/t)."""
    return ScalarModel("quartic", lambda q: 0.25 * q ** 4, lambda q: q ** 3,
                       np.cbrt)


def advection(speed: float = 1.0) -> ScalarModel:
    """Linear advection at constant speed; the evolution is exact."""
    c = float(speed)
    return ScalarModel("advection", lambda q: c * q,
                       lambda q: np.full_like(np.asarray(q, dtype=float), c),
                       lambda s: np.full_like(np.asarray(s, dtype=float), np.nan))


def quartic_shock_speed(q_l: float, q_r: float) -> float:
    """Rankine-Hugoniot speed of a quartic-flux shock joining q_l and q_r."""
    return (q_l ** 3 + q_r * q_l ** 2 + q_r ** 2 * q_l + q_r ** 3) / 4.0


class SystemModel:
    """Base for 1D hyperbolic systems.

    Batched conventions: states have shape (n, m); eigen() returns speeds
    (n, m) plus R and R^{-1} with shape (n, m, m), rows of R being left
    eigenvectors in working variables.
    """

    name: str
    m: int
    var_names: Sequence[str]
    has_characteristic_variables: bool = False

    def flux(self, q_cons: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_working(self, q_cons: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_conservative(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def is_admissible(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eigenvalues(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eigen(self, w: np.ndarray):
        raise NotImplementedError

    def validate(self, w: np.ndarray, where: str = "") -> None:
        ok = self.is_admissible(w)
        if not np.all(ok):
            i = int(np.argmin(ok))
            raise InadmissibleStateError(
                f"{self.name}: inadmissible state {w[i]} ({where or 'evaluation'})")

    def projectors(self, w: np.ndarray) -> np.ndarray:
        """Characteristic projectors, shape (n, m, m, m): [:, k] projects
        onto the k-th field; sum over k is the identity."""
        _, r_mat, r_inv = self.eigen(w)
        return np.einsum("nbk,nka->nkba", r_inv, r_mat)

    def max_speed(self, w: np.ndarray) -> float:
        return float(np.max(np.abs(self.eigenvalues(w))))

    # Characteristic-variable interface (diagonalizable models only).

    def to_characteristic(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def from_characteristic(self, q_char: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def char_speeds(self, q_char: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class PSystem(SystemModel):
    """rho_t + v_x = 0, v_t + p(rho)_x = 0 with p = rho^gamma.

    Conservative and working variables coincide: (rho, v).  Characteristic
    variables 2*rho*c/(gamma+1) +- v travel at speeds +-c, c = sqrt(p'(rho)).
    """

    has_characteristic_variables = True

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)
        self.name = "p-system"
        self.m = 2
        self.var_names = ("rho", "v")

    def sound_speed(self, rho: np.ndarray) -> np.ndarray:
        return np.sqrt(self.gamma * rho ** (self.gamma - 1.0))

    def flux(self, q_cons: np.ndarray) -> np.ndarray:
        rho, v = q_cons[..., 0], q_cons[..., 1]
        return np.stack([v, rho ** self.gamma], axis=-1)

    def to_working(self, q_cons: np.ndarray) -> np.ndarray:
        return np.asarray(q_cons)

    def to_conservative(self, w: np.ndarray) -> np.ndarray:
        return np.asarray(w)

    def is_admissible(self, w: np.ndarray) -> np.ndarray:
        # rho > 0; NaN fails the comparison, full finiteness is checked by
        # the solver at step boundaries.
        return w[..., 0] > 0.0

    def eigenvalues(self, w: np.ndarray) -> np.ndarray:
        c = self.sound_speed(w[..., 0])
        return np.stack([c, -c], axis=-1)

    def eigen(self, w: np.ndarray):
        self.validate(w, "eigen")
        n = w.shape[0]
        c = self.sound_speed(w[:, 0])
        lam = np.stack([c, -c], axis=-1)
        r_mat = np.zeros((n, 2, 2))
        r_mat[:, 0, 0] = c
        r_mat[:, 0, 1] = 1.0
        r_mat[:, 1, 0] = -c
        r_mat[:, 1, 1] = 1.0
        r_inv = np.zeros((n, 2, 2))
        r_inv[:, 0, 0] = 0.5 / c
        r_inv[:, 0, 1] = -0.5 / c
        r_inv[:, 1, 0] = 0.5
        r_inv[:, 1, 1] = 0.5
        return lam, r_mat, r_inv

    def to_characteristic(self, w: np.ndarray) -> np.ndarray:
        self.validate(w, "characteristic transform")
        g = self.gamma
        rho, v = w[..., 0], w[..., 1]
        # 2 rho c / (g+1) = 2 sqrt(g)/(g+1) * rho^((g+1)/2)
        base = 2.0 * np.sqrt(g) / (g + 1.0) * rho ** (0.5 * (g + 1.0))
        return np.stack([base + v, base - v], axis=-1)

    def _rho_pow_half_gp(self, q_char: np.ndarray) -> np.ndarray:
        """rho^((gamma+1)/2) from the characteristic pair."""
        g = self.gamma
        total = q_char[..., 0] + q_char[..., 1]
        if not np.all(total > 0.0):
            raise InadmissibleStateError("p-system: rho <= 0 in characteristic state")
        return 0.25 * (g + 1.0) / np.sqrt(g) * total

    def from_characteristic(self, q_char: np.ndarray) -> np.ndarray:
        g = self.gamma
        rho = self._rho_pow_half_gp(q_char) ** (2.0 / (g + 1.0))
        v = 0.5 * (q_char[..., 0] - q_char[..., 1])
        return np.stack([rho, v], axis=-1)

    def char_speeds(self, q_char: np.ndarray) -> np.ndarray:
        g = self.gamma
        # c = sqrt(g) * rho^((g-1)/2)
        c = np.sqrt(g) * self._rho_pow_half_gp(q_char) ** ((g - 1.0) / (g + 1.0))
        return np.stack([c, -c], axis=-1)


class IsentropicEuler(SystemModel):
    """Isentropic Euler with p = K rho^gamma; conservative (rho, rho v).

    Riemann invariants v +- 2c/(gamma-1) travel at speeds v +- c with
    c = sqrt(gamma p / rho).
    """

    has_characteristic_variables = True

    def __init__(self, k_const: float = 1.0, gamma: float = 1.4):
        self.k_const = float(k_const)
        self.gamma = float(gamma)
        self.name = "isentropic-euler"
        self.m = 2
        self.var_names = ("rho", "mom")

    def sound_speed(self, rho: np.ndarray) -> np.ndarray:
        return np.sqrt(self.gamma * self.k_const * rho ** (self.gamma - 1.0))

    def flux(self, q_cons: np.ndarray) -> np.ndarray:
        rho, mom = q_cons[..., 0], q_cons[..., 1]
        return np.stack([mom, mom * mom / rho + self.k_const * rho ** self.gamma],
                        axis=-1)

    def to_working(self, q_cons: np.ndarray) -> np.ndarray:
        rho = q_cons[..., 0]
        return np.stack([rho, q_cons[..., 1] / rho], axis=-1)

    def to_conservative(self, w: np.ndarray) -> np.ndarray:
        rho, v = w[..., 0], w[..., 1]
        return np.stack([rho, rho * v], axis=-1)

    def is_admissible(self, w: np.ndarray) -> np.ndarray:
        return w[..., 0] > 0.0

    def eigenvalues(self, w: np.ndarray) -> np.ndarray:
        c = self.sound_speed(w[..., 0])
        v = w[..., 1]
        return np.stack([v + c, v - c], axis=-1)

    def eigen(self, w: np.ndarray):
        self.validate(w, "eigen")
        n = w.shape[0]
        rho, v = w[:, 0], w[:, 1]
        c = self.sound_speed(rho)
        lam = np.stack([v + c, v - c], axis=-1)
        r_mat = np.zeros((n, 2, 2))
        r_mat[:, 0, 0] = c / rho
        r_mat[:, 0, 1] = 1.0
        r_mat[:, 1, 0] = -c / rho
        r_mat[:, 1, 1] = 1.0
        r_inv = np.zeros((n, 2, 2))
        r_inv[:, 0, 0] = 0.5 * rho / c
        r_inv[:, 0, 1] = -0.5 * rho / c
        r_inv[:, 1, 0] = 0.5
        r_inv[:, 1, 1] = 0.5
        return lam, r_mat, r_inv

    def to_characteristic(self, w: np.ndarray) -> np.ndarray:
        self.validate(w, "characteristic transform")
        rho, v = w[..., 0], w[..., 1]
        base = 2.0 * self.sound_speed(rho) / (self.gamma - 1.0)
        return np.stack([v + base, v - base], axis=-1)

    def _v_c_from_char(self, q_char: np.ndarray):
        v = 0.5 * (q_char[..., 0] + q_char[..., 1])
        c = 0.25 * (self.gamma - 1.0) * (q_char[..., 0] - q_char[..., 1])
        if not np.all(c > 0.0):
            raise InadmissibleStateError(
                "isentropic Euler: sound speed <= 0 in characteristic state")
        return v, c

    def from_characteristic(self, q_char: np.ndarray) -> np.ndarray:
        g = self.gamma
        v, c = self._v_c_from_char(q_char)
        rho = (c * c / (g * self.k_const)) ** (1.0 / (g - 1.0))
        return np.stack([rho, v], axis=-1)

    def char_speeds(self, q_char: np.ndarray) -> np.ndarray:
        v, c = self._v_c_from_char(q_char)
        return np.stack([v + c, v - c], axis=-1)


class FullEuler(SystemModel):
    """Full Euler with ideal EOS e = p/(gamma-1) + rho v^2/2.

    No characteristic variables exist; the eigen-structure is expressed in
    working variables (rho, v, p) with speeds (v + c, v, v - c).
    """

    has_characteristic_variables = False

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)
        self.name = "euler"
        self.m = 3
        self.var_names = ("rho", "mom", "energy")

    def sound_speed(self, rho: np.ndarray, p: np.ndarray) -> np.ndarray:
        return np.sqrt(self.gamma * p / rho)

    def flux(self, q_cons: np.ndarray) -> np.ndarray:
        rho, mom, e = q_cons[..., 0], q_cons[..., 1], q_cons[..., 2]
        v = mom / rho
        p = (self.gamma - 1.0) * (e - 0.5 * mom * v)
        return np.stack([mom, mom * v + p, v * (e + p)], axis=-1)

    def to_working(self, q_cons: np.ndarray) -> np.ndarray:
        rho, mom, e = q_cons[..., 0], q_cons[..., 1], q_cons[..., 2]
        v = mom / rho
        p = (self.gamma - 1.0) * (e - 0.5 * mom * v)
        return np.stack([rho, v, p], axis=-1)

    def to_conservative(self, w: np.ndarray) -> np.ndarray:
        rho, v, p = w[..., 0], w[..., 1], w[..., 2]
        e = p / (self.gamma - 1.0) + 0.5 * rho * v * v
        return np.stack([rho, rho * v, e], axis=-1)

    def is_admissible(self, w: np.ndarray) -> np.ndarray:
        return (w[..., 0] > 0.0) & (w[..., 2] > 0.0)

    def eigenvalues(self, w: np.ndarray) -> np.ndarray:
        c = self.sound_speed(w[..., 0], w[..., 2])
        v = w[..., 1]
        return np.stack([v + c, v, v - c], axis=-1)

    def eigen(self, w: np.ndarray):
        self.validate(w, "eigen")
        n = w.shape[0]
        g = self.gamma
        rho, v, p = w[:, 0], w[:, 1], w[:, 2]
        c = self.sound_speed(rho, p)
        lam = np.stack([v + c, v, v - c], axis=-1)
        r_mat = np.zeros((n, 3, 3))
        r_mat[:, 0, 1] = 1.0
        r_mat[:, 0, 2] = c / (g * p)
        r_mat[:, 1, 0] = -g * p * rho ** (-g - 1.0)
        r_mat[:, 1, 2] = rho ** (-g)
        r_mat[:, 2, 1] = -1.0
        r_mat[:, 2, 2] = c / (g * p)
        r_inv = np.zeros((n, 3, 3))
        r_inv[:, 0, 0] = 0.5 * rho / c
        r_inv[:, 0, 1] = -(rho ** (1.0 + g)) / (g * p)
        r_inv[:, 0, 2] = 0.5 * rho / c
        r_inv[:, 1, 0] = 0.5
        r_inv[:, 1, 2] = -0.5
        r_inv[:, 2, 0] = 0.5 * g * p / c
        r_inv[:, 2, 2] = 0.5 * g * p / c
        return lam, r_mat, r_inv


def p_system(gamma: float = 1.4) -> PSystem:
    return PSystem(gamma)


def isentropic_euler(k_const: float = 1.0, gamma: float = 1.4) -> IsentropicEuler:
    return IsentropicEuler(k_const, gamma)


def full_euler(gamma: float = 1.4) -> FullEuler:
    return FullEuler(gamma)


def exact_scalar_riemann(model: ScalarModel, q_l: float, q_r: float, xi):
    """Entropy solution of a scalar Riemann problem at similarity variable
    xi = x/t: Rankine-Hugoniot shock for a(q_l) > a(q_r), else the
    rarefaction fan a^{-1}(xi) clipped between the states."""
    xi = np.asarray(xi, dtype=float)
    if q_l == q_r:
        return np.full_like(xi, q_l)
    a_l = float(model.speed(np.float64(q_l)))
    a_r = float(model.speed(np.float64(q_r)))
    if a_l > a_r:
        s = model.shock_speed(q_l, q_r)
        return np.where(xi < s, q_l, q_r)
    fan = model.inverse_speed(xi)
    return np.where(xi <= a_l, q_l, np.where(xi >= a_r, q_r, fan))


def piecewise_linear_shock_time(nodes: np.ndarray, values: np.ndarray) -> float:
    """First crossing time of adjacent characteristics of piecewise linear
    Burgers data (inf if none)."""
    dn = np.diff(nodes)
    dv = np.diff(values)
    with np.errstate(divide="ignore"):
        times = np.where(dv < 0.0, dn / -dv, np.inf)
    return float(times.min()) if len(times) else np.inf


def exact_burgers_piecewise_linear(nodes, values, t: float, x):
    """Exact Burgers evolution of piecewise linear data.

    Every node travels at its own value; the solution stays piecewise linear
    between the moved nodes.  Only valid before the first shock time.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    t_shock = piecewise_linear_shock_time(nodes, values)
    if t >= t_shock:
        raise ValueError(f"piecewise linear data shock at t={t_shock:g} <= t={t:g}")
    moved = nodes + values * t
    return np.interp(np.asarray(x, dtype=float), moved, values)


# Exact solver for the full Euler Riemann problem (ideal gas).


@dataclass(frozen=True)
class EulerState:
    rho: float
    v: float
    p: float

    def validate(self) -> "EulerState":
        if not (self.rho > 0.0 and self.p > 0.0):
            raise InadmissibleStateError(f"non-admissible Euler state {self}")
        return self


def _pressure_fn(p: float, state: EulerState, gamma: float):
    """Velocity change across the wave connecting to pressure p, and its
    derivative (shock branch for p > state.p, rarefaction otherwise)."""
    c = np.sqrt(gamma * state.p / state.rho)
    if p > state.p:
        a_k = 2.0 / ((gamma + 1.0) * state.rho)
        b_k = (gamma - 1.0) / (gamma + 1.0) * state.p
        root = np.sqrt(a_k / (p + b_k))
        f = (p - state.p) * root
        df = root * (1.0 - 0.5 * (p - state.p) / (p + b_k))
    else:
        f = 2.0 * c / (gamma - 1.0) * ((p / state.p) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = (p / state.p) ** (-(gamma + 1.0) / (2.0 * gamma)) / (state.rho * c)
    return f, df


def euler_star_state(left: EulerState, right: EulerState, gamma: float = 1.4,
                     tol: float = 1e-12, max_iter: int = 100):
    """Pressure and velocity in the star region via Newton iteration.

    Starts from the two-rarefaction approximation; raises on vacuum."""
    left.validate()
    right.validate()
    c_l = np.sqrt(gamma * left.p / left.rho)
    c_r = np.sqrt(gamma * right.p / right.rho)
    if 2.0 * (c_l + c_r) / (gamma - 1.0) <= right.v - left.v:
        raise InadmissibleStateError("Riemann data generate vacuum")

    z = (gamma - 1.0) / (2.0 * gamma)
    num = c_l + c_r - 0.5 * (gamma - 1.0) * (right.v - left.v)
    den = c_l / left.p ** z + c_r / right.p ** z
    p = max((num / den) ** (1.0 / z), 1e-14)

    for _ in range(max_iter):
        f_l, df_l = _pressure_fn(p, left, gamma)
        f_r, df_r = _pressure_fn(p, right, gamma)
        g = f_l + f_r + right.v - left.v
        dp = -g / (df_l + df_r)
        p_new = p + dp
        if p_new <= 0.0:
            p_new = 0.5 * p
        if abs(p_new - p) <= tol * max(p_new, 1e-300):
            p = p_new
            break
        p = p_new
    v_star = 0.5 * (left.v + right.v) + 0.5 * (_pressure_fn(p, right, gamma)[0]
                                               - _pressure_fn(p, left, gamma)[0])
    return p, v_star


def exact_euler_riemann(left: EulerState, right: EulerState, xi,
                        gamma: float = 1.4):
    """Sample the exact Euler Riemann solution at xi = x/t.

    Returns (rho, v, p) arrays over the four-wave pattern."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    p_star, v_star = euler_star_state(left, right, gamma)
    gm, gp = gamma - 1.0, gamma + 1.0

    rho = np.empty_like(xi)
    v = np.empty_like(xi)
    p = np.empty_like(xi)

    c_l = np.sqrt(gamma * left.p / left.rho)
    c_r = np.sqrt(gamma * right.p / right.rho)

    lft = xi < v_star
    # Left wave
    if p_star > left.p:
        rho_star = left.rho * (p_star / left.p + gm / gp) / (gm / gp * p_star / left.p + 1.0)
        s_l = left.v - c_l * np.sqrt((gp * p_star / left.p + gm) / (2.0 * gamma))
        pre = lft & (xi < s_l)
        post = lft & ~pre
        rho[pre], v[pre], p[pre] = left.rho, left.v, left.p
        rho[post], v[post], p[post] = rho_star, v_star, p_star
    else:
        rho_star = left.rho * (p_star / left.p) ** (1.0 / gamma)
        c_star = c_l * (p_star / left.p) ** (gm / (2.0 * gamma))
        head, tail = left.v - c_l, v_star - c_star
        pre = lft & (xi < head)
        fan = lft & (xi >= head) & (xi < tail)
        post = lft & (xi >= tail)
        rho[pre], v[pre], p[pre] = left.rho, left.v, left.p
        beta = (2.0 + gm / c_l * (left.v - xi[fan])) / gp
        rho[fan] = left.rho * beta ** (2.0 / gm)
        v[fan] = (2.0 * (c_l + 0.5 * gm * left.v) + gm * xi[fan]) / gp
        p[fan] = left.p * beta ** (2.0 * gamma / gm)
        rho[post], v[post], p[post] = rho_star, v_star, p_star

    rgt = ~lft
    if p_star > right.p:
        rho_star = right.rho * (p_star / right.p + gm / gp) / (gm / gp * p_star / right.p + 1.0)
        s_r = right.v + c_r * np.sqrt((gp * p_star / right.p + gm) / (2.0 * gamma))
        post = rgt & (xi > s_r)
        pre = rgt & ~post
        rho[post], v[post], p[post] = right.rho, right.v, right.p
        rho[pre], v[pre], p[pre] = rho_star, v_star, p_star
    else:
        rho_star = right.rho * (p_star / right.p) ** (1.0 / gamma)
        c_star = c_r * (p_star / right.p) ** (gm / (2.0 * gamma))
        head, tail = right.v + c_r, v_star + c_star
        post = rgt & (xi > head)
        fan = rgt & (xi <= head) & (xi > tail)
        pre = rgt & (xi <= tail)
        rho[post], v[post], p[post] = right.rho, right.v, right.p
        beta = (2.0 - gm / c_r * (right.v - xi[fan])) / gp
        rho[fan] = right.rho * beta ** (2.0 / gm)
        v[fan] = (2.0 * (-c_r + 0.5 * gm * right.v) + gm * xi[fan]) / gp
        p[fan] = right.p * beta ** (2.0 * gamma / gm)
        rho[pre], v[pre], p[pre] = rho_star, v_star, p_star

    return rho, v, p


def euler_wave_speeds(left: EulerState, right: EulerState, gamma: float = 1.4) -> dict:
    """Characteristic positions (per unit time) of the exact solution's
    waves: rarefaction head/tail, contact and shock speeds as applicable."""
    p_star, v_star = euler_star_state(left, right, gamma)
    gm, gp = gamma - 1.0, gamma + 1.0
    c_l = np.sqrt(gamma * left.p / left.rho)
    c_r = np.sqrt(gamma * right.p / right.rho)
    out = {"contact": v_star, "p_star": p_star, "v_star": v_star}
    if p_star > left.p:
        out["left_shock"] = left.v - c_l * np.sqrt((gp * p_star / left.p + gm) / (2.0 * gamma))
    else:
        c_star = c_l * (p_star / left.p) ** (gm / (2.0 * gamma))
        out["left_raref_head"] = left.v - c_l
        out["left_raref_tail"] = v_star - c_star
    if p_star > right.p:
        out["right_shock"] = right.v + c_r * np.sqrt((gp * p_star / right.p + gm) / (2.0 * gamma))
    else:
        c_star = c_r * (p_star / right.p) ** (gm / (2.0 * gamma))
        out["right_raref_head"] = right.v + c_r
        out["right_raref_tail"] = v_star + c_star
    return out
