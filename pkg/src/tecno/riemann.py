"""Exact solver for the 1D Euler Riemann problem.

Newton iteration on the star pressure using the standard shock (Rankine-
Hugoniot) and rarefaction (isentrope) branch functions, then similarity
sampling of the full wave fan. Used to build reference solutions for the
shock-tube test cases and the overshoot diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RiemannState:
    """Primitive constant state on one side of the initial discontinuity."""

    rho: float
    u: float
    p: float

    def __post_init__(self):
        if self.rho <= 0.0 or self.p <= 0.0:
            raise ValueError("Riemann states need positive density and pressure")


@dataclass(frozen=True)
class StarState:
    """Pressure and velocity between the waves, with the two star densities."""

    p: float
    u: float
    rho_left: float
    rho_right: float


def _sound_speed(state: RiemannState, gamma: float) -> float:
    return np.sqrt(gamma * state.p / state.rho)


def _branch(p: float, state: RiemannState, gamma: float):
    """Velocity-jump function f_K(p) and its derivative for one side."""
    if p > state.p:
        a_coef = 2.0 / ((gamma + 1.0) * state.rho)
        b_coef = state.p * (gamma - 1.0) / (gamma + 1.0)
        root = np.sqrt(a_coef / (p + b_coef))
        f = (p - state.p) * root
        df = root * (1.0 - 0.5 * (p - state.p) / (p + b_coef))
    else:
        a = _sound_speed(state, gamma)
        ratio = p / state.p
        f = 2.0 * a / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (state.rho * a)
    return f, df


def _initial_guess(left: RiemannState, right: RiemannState, gamma: float) -> float:
    # Linearized (acoustic) estimate, floored away from zero.
    al, ar = _sound_speed(left, gamma), _sound_speed(right, gamma)
    p_pv = (0.5 * (left.p + right.p)
            - 0.125 * (right.u - left.u) * (left.rho + right.rho) * (al + ar))
    return max(p_pv, 1e-8 * min(left.p, right.p))


def solve_star(left: RiemannState, right: RiemannState,
               gamma: float = 1.4, tol: float = 1e-14,
               max_iter: int = 100) -> StarState:
    """Star region via Newton on the pressure equation f_L + f_R + du = 0."""
    du = right.u - left.u
    a_sum = (_sound_speed(left, gamma) + _sound_speed(right, gamma))
    if 2.0 * a_sum / (gamma - 1.0) <= du:
        raise ValueError("initial states generate vacuum")
    p = _initial_guess(left, right, gamma)
    for _ in range(max_iter):
        fl, dfl = _branch(p, left, gamma)
        fr, dfr = _branch(p, right, gamma)
        step = (fl + fr + du) / (dfl + dfr)
        p_new = p - step
        if p_new <= 0.0:
            p_new = 0.5 * p
        if abs(p_new - p) <= tol * p_new:
            p = p_new
            break
        p = p_new
    fl, _ = _branch(p, left, gamma)
    fr, _ = _branch(p, right, gamma)
    u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl)

    def star_density(state: RiemannState) -> float:
        ratio = p / state.p
        if p > state.p:
            gm = (gamma - 1.0) / (gamma + 1.0)
            return state.rho * (ratio + gm) / (gm * ratio + 1.0)
        return state.rho * ratio ** (1.0 / gamma)

    return StarState(p=p, u=u_star,
                     rho_left=star_density(left),
                     rho_right=star_density(right))


def _sample_side(xi, state: RiemannState, star: StarState, gamma: float,
                 sign: float):
    """Similarity solution on one side of the contact (sign -1 left, +1 right).

    The right side is mirrored (x -> -x, u -> -u) so both sides share the
    left-wave formulas; returns primitive arrays (rho, u, p) at xi = x/t.
    """
    m = -sign
    u0 = m * state.u
    us = m * star.u
    a0 = _sound_speed(state, gamma)
    xi = m * xi
    rho_star = star.rho_left if sign < 0 else star.rho_right
    if star.p > state.p:
        gm = (gamma - 1.0) / (gamma + 1.0)
        s_shock = u0 - a0 * np.sqrt((gamma + 1.0) / (2.0 * gamma) * star.p / state.p
                                    + (gamma - 1.0) / (2.0 * gamma))
        ahead = xi < s_shock
        rho = np.where(ahead, state.rho, rho_star)
        u = np.where(ahead, u0, us)
        p = np.where(ahead, state.p, star.p)
    else:
        a_star = a0 * (star.p / state.p) ** ((gamma - 1.0) / (2.0 * gamma))
        head = u0 - a0
        tail = us - a_star
        fan_scale = (2.0 / (gamma + 1.0)
                     + (gamma - 1.0) / ((gamma + 1.0) * a0) * (u0 - xi))
        fan_scale = np.maximum(fan_scale, 0.0)
        rho_fan = state.rho * fan_scale ** (2.0 / (gamma - 1.0))
        u_fan = (2.0 / (gamma + 1.0)) * (a0 + 0.5 * (gamma - 1.0) * u0 + xi)
        p_fan = state.p * fan_scale ** (2.0 * gamma / (gamma - 1.0))
        rho = np.where(xi < head, state.rho, np.where(xi > tail, rho_star, rho_fan))
        u = np.where(xi < head, u0, np.where(xi > tail, us, u_fan))
        p = np.where(xi < head, state.p, np.where(xi > tail, star.p, p_fan))
    return rho, m * u, p


def sample(left: RiemannState, right: RiemannState, xi,
           gamma: float = 1.4, star: StarState | None = None) -> np.ndarray:
    """Primitive solution (rho, u, p) at similarity coordinates xi = x/t."""
    xi = np.asarray(xi, dtype=float)
    if star is None:
        star = solve_star(left, right, gamma)
    rho_l, u_l, p_l = _sample_side(xi, left, star, gamma, -1.0)
    rho_r, u_r, p_r = _sample_side(xi, right, star, gamma, +1.0)
    on_left = xi < star.u
    return np.stack([np.where(on_left, rho_l, rho_r),
                     np.where(on_left, u_l, u_r),
                     np.where(on_left, p_l, p_r)], axis=-1)


def exact_solution(left: RiemannState, right: RiemannState, x, t: float,
                   x0: float = 0.0, gamma: float = 1.4) -> np.ndarray:
    """Primitive solution at positions x and time t (initial data at t = 0)."""
    x = np.asarray(x, dtype=float)
    if t <= 0.0:
        on_left = x < x0
        return np.stack([np.where(on_left, left.rho, right.rho),
                         np.where(on_left, left.u, right.u),
                         np.where(on_left, left.p, right.p)], axis=-1)
    return sample(left, right, (x - x0) / t, gamma)
