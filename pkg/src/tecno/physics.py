"""Conservation-law models: fluxes, entropy pairs, and interface algebra.

Each model bundles what the solver needs at an interface:

  * entropy-conservative two-point flux (the building block of the
    fourth-order flux),
  * entropy variables v and, for systems, the entropy-scaled eigenvector
    matrix R of the flux Jacobian satisfying R R^T = du/dv,
  * diffusion spectra (Roe or Rusanov) evaluated at the arithmetic mean of
    the two primitive states.

States are numpy arrays with the variable index last, so every method works
on a single state, a 1D line of cells, or a 2D plane alike. Scalar models
use shape (..., 1) for uniformity with systems.

The Euler models use the kinetic-energy and entropy conservative (KEPEC)
two-point flux built on logarithmic means, with gamma = 1.4 by default.
"""

from __future__ import annotations

import numpy as np


def log_mean(a, b):
    """Logarithmic mean (a - b) / (ln a - ln b) for positive inputs.

    Near a == b the direct quotient loses all precision, so for
    |a - b| / (a + b) < 1e-2 the mean is evaluated from the Pade-like series
    (a + b) / (2 F(zeta^2)), F(w) = 1 + w/3 + w^2/5 + w^3/7, which is exact
    to double precision in that range and gives the correct limit a.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = a + b
    zeta = (a - b) / s
    w = zeta * zeta
    series = s / (2.0 * (1.0 + w / 3.0 + w * w / 5.0 + w * w * w / 7.0))
    near = np.abs(zeta) < 1e-2
    with np.errstate(divide="ignore", invalid="ignore"):
        dlog = np.log(a) - np.log(b)
        direct = (a - b) / np.where(dlog == 0.0, 1.0, dlog)
    out = np.where(near, series, direct)
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# scalar models


class PositivityError(RuntimeError):
    """Non-positive density or pressure; the scheme applies no fix.

    Carries the offending quantity name, the interior cell index (int in 1D,
    (row, col) in 2D) and the simulation time when known.
    """

    def __init__(self, quantity: str, cell=None, time=None):
        self.quantity = quantity
        self.cell = cell
        self.time = time
        where = "" if cell is None else f" at cell {cell}"
        when = "" if time is None else f", t = {time:.6g}"
        super().__init__(f"non-positive {quantity}{where}{when}")


class ScalarModel:
    """Common scalar machinery: entropy eta = u^2 / 2, so v = u and z = v.

    The interface diffusion coefficient is the average |f'| of the two cell
    states (the half of the usual 1/2 |lambda| jump term is folded into the
    average).
    """

    n_vars = 1
    variable_names = ("u",)

    def flux(self, u):
        raise NotImplementedError

    def dflux(self, u):
        raise NotImplementedError

    def ec_flux(self, ul, ur):
        raise NotImplementedError

    def entropy_vars(self, u):
        return np.asarray(u, dtype=float)

    def entropy(self, u):
        u = np.asarray(u, dtype=float)
        return 0.5 * u * u

    def entropy_flux(self, u):
        """Entropy flux q with q' = v f', for cell-sum diagnostics."""
        raise NotImplementedError

    def entropy_potential(self, u):
        """psi = v f(u) - q(u); the EC two-point flux satisfies
        [[v]] f_ec = [[psi]] across any pair of states."""
        raise NotImplementedError

    def max_wave_speed(self, u):
        return float(np.max(np.abs(self.dflux(u))))

    def diffusion_coeff(self, ul, ur):
        return 0.5 * (np.abs(self.dflux(ul)) + np.abs(self.dflux(ur)))


class Advection(ScalarModel):
    """u_t + (c u)_x = 0."""

    def __init__(self, speed: float = 1.0):
        self.speed = float(speed)

    def flux(self, u):
        return self.speed * np.asarray(u, dtype=float)

    def dflux(self, u):
        return np.full_like(np.asarray(u, dtype=float), self.speed)

    def ec_flux(self, ul, ur):
        return 0.5 * self.speed * (np.asarray(ul, float) + np.asarray(ur, float))

    def entropy_flux(self, u):
        u = np.asarray(u, dtype=float)
        return 0.5 * self.speed * u * u

    def entropy_potential(self, u):
        u = np.asarray(u, dtype=float)
        return 0.5 * self.speed * u * u


class Burgers(ScalarModel):
    """u_t + (u^2 / 2)_x = 0."""

    def flux(self, u):
        u = np.asarray(u, dtype=float)
        return 0.5 * u * u

    def dflux(self, u):
        return np.asarray(u, dtype=float)

    def ec_flux(self, ul, ur):
        ul = np.asarray(ul, dtype=float)
        ur = np.asarray(ur, dtype=float)
        return (ul * ul + ul * ur + ur * ur) / 6.0

    def entropy_flux(self, u):
        u = np.asarray(u, dtype=float)
        return u * u * u / 3.0

    def entropy_potential(self, u):
        u = np.asarray(u, dtype=float)
        return u * u * u / 6.0


# ---------------------------------------------------------------------------
# Euler equations


class Euler1D:
    """Compressible Euler in one space dimension.

    Conserved state (rho, rho u, E); primitive state (rho, u, p). The
    entropy pair is eta = -rho s / (gamma - 1) with s = ln p - gamma ln rho.
    """

    n_vars = 3
    variable_names = ("density", "momentum", "energy")

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)

    # state conversions ----------------------------------------------------

    def conserved(self, prim):
        prim = np.asarray(prim, dtype=float)
        rho, u, p = prim[..., 0], prim[..., 1], prim[..., 2]
        E = p / (self.gamma - 1.0) + 0.5 * rho * u * u
        return np.stack([rho, rho * u, E], axis=-1)

    def primitive(self, cons):
        cons = np.asarray(cons, dtype=float)
        rho, m, E = cons[..., 0], cons[..., 1], cons[..., 2]
        u = m / rho
        p = (self.gamma - 1.0) * (E - 0.5 * m * u)
        return np.stack([rho, u, p], axis=-1)

    def positivity_ok(self, cons):
        """Elementwise check that density and pressure are positive."""
        prim = self.primitive(np.asarray(cons, dtype=float))
        return (prim[..., 0] > 0.0) & (prim[..., 2] > 0.0)

    def sound_speed(self, prim):
        prim = np.asarray(prim, dtype=float)
        return np.sqrt(self.gamma * prim[..., 2] / prim[..., 0])

    # fluxes ----------------------------------------------------------------

    def flux(self, cons):
        cons = np.asarray(cons, dtype=float)
        prim = self.primitive(cons)
        rho, u, p = prim[..., 0], prim[..., 1], prim[..., 2]
        E = cons[..., 2]
        return np.stack([rho * u, rho * u * u + p, (E + p) * u], axis=-1)

    def max_wave_speed(self, cons):
        prim = self.primitive(np.asarray(cons, dtype=float))
        return float(np.max(np.abs(prim[..., 1]) + self.sound_speed(prim)))

    def ec_flux_prim(self, pl, pr):
        """KEPEC two-point flux from primitive left/right states."""
        pl = np.asarray(pl, dtype=float)
        pr = np.asarray(pr, dtype=float)
        rl, ul_, Pl = pl[..., 0], pl[..., 1], pl[..., 2]
        rr, ur_, Pr = pr[..., 0], pr[..., 1], pr[..., 2]
        bl = rl / (2.0 * Pl)
        br = rr / (2.0 * Pr)
        rho_ln = log_mean(rl, rr)
        beta_ln = log_mean(bl, br)
        u_bar = 0.5 * (ul_ + ur_)
        rho_bar = 0.5 * (rl + rr)
        beta_bar = 0.5 * (bl + br)
        u2_bar = 0.5 * (ul_ * ul_ + ur_ * ur_)
        f_rho = rho_ln * u_bar
        p_tilde = rho_bar / (2.0 * beta_bar)
        f_m = p_tilde + u_bar * f_rho
        f_e = (0.5 / ((self.gamma - 1.0) * beta_ln) - 0.5 * u2_bar) * f_rho \
            + u_bar * f_m
        return np.stack([f_rho, f_m, f_e], axis=-1)

    def ec_flux(self, ul, ur):
        return self.ec_flux_prim(self.primitive(ul), self.primitive(ur))

    # entropy algebra -------------------------------------------------------

    def physical_entropy(self, prim):
        prim = np.asarray(prim, dtype=float)
        return np.log(prim[..., 2]) - self.gamma * np.log(prim[..., 0])

    def entropy(self, cons):
        prim = self.primitive(np.asarray(cons, dtype=float))
        return -prim[..., 0] * self.physical_entropy(prim) / (self.gamma - 1.0)

    def entropy_flux(self, cons):
        prim = self.primitive(np.asarray(cons, dtype=float))
        return prim[..., 1] * self.entropy(cons)

    def entropy_vars(self, cons):
        return self.entropy_vars_prim(self.primitive(np.asarray(cons, dtype=float)))

    def entropy_vars_prim(self, prim):
        prim = np.asarray(prim, dtype=float)
        rho, u, p = prim[..., 0], prim[..., 1], prim[..., 2]
        s = self.physical_entropy(prim)
        beta = rho / (2.0 * p)
        v0 = (self.gamma - s) / (self.gamma - 1.0) - beta * u * u
        return np.stack([v0, 2.0 * beta * u, -2.0 * beta], axis=-1)

    def entropy_potential(self, cons):
        """psi = rho u, the contraction of v with f minus the entropy flux."""
        cons = np.asarray(cons, dtype=float)
        return cons[..., 1]

    # interface diffusion ---------------------------------------------------

    def interface_primitive(self, ul, ur):
        """Arithmetic mean of the two primitive states."""
        return 0.5 * (self.primitive(ul) + self.primitive(ur))

    def eigen_scaled(self, prim):
        """Entropy-scaled right eigenvectors, shape (..., 3, 3).

        Columns are the acoustic/entropy/acoustic eigenvectors scaled so
        that R R^T = du/dv at the same state.
        """
        prim = np.asarray(prim, dtype=float)
        rho, u, p = prim[..., 0], prim[..., 1], prim[..., 2]
        a = np.sqrt(self.gamma * p / rho)
        H = a * a / (self.gamma - 1.0) + 0.5 * u * u
        one = np.ones_like(rho)
        R = np.stack([
            np.stack([one, one, one], axis=-1),
            np.stack([u - a, u, u + a], axis=-1),
            np.stack([H - u * a, 0.5 * u * u, H + u * a], axis=-1),
        ], axis=-2)
        scale = np.stack([rho / (2.0 * self.gamma),
                          rho * (self.gamma - 1.0) / self.gamma,
                          rho / (2.0 * self.gamma)], axis=-1)
        return R * np.sqrt(scale)[..., None, :]

    def lambda_roe(self, prim):
        prim = np.asarray(prim, dtype=float)
        u = prim[..., 1]
        a = self.sound_speed(prim)
        return np.stack([np.abs(u - a), np.abs(u), np.abs(u + a)], axis=-1)

    def lambda_rusanov(self, prim):
        prim = np.asarray(prim, dtype=float)
        u = prim[..., 1]
        a = self.sound_speed(prim)
        lam = np.abs(u) + a
        return np.stack([lam, lam, lam], axis=-1)


class Euler2D:
    """Compressible Euler in two space dimensions.

    Conserved state (rho, rho u1, rho u2, E). Directional methods take
    axis = 0 for x fluxes and axis = 1 for y fluxes; the y eigensystem is
    the x one with the velocity components exchanged.
    """

    n_vars = 4
    variable_names = ("density", "momentum_x", "momentum_y", "energy")

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)

    def conserved(self, prim):
        prim = np.asarray(prim, dtype=float)
        rho, u1, u2, p = (prim[..., k] for k in range(4))
        E = p / (self.gamma - 1.0) + 0.5 * rho * (u1 * u1 + u2 * u2)
        return np.stack([rho, rho * u1, rho * u2, E], axis=-1)

    def primitive(self, cons):
        cons = np.asarray(cons, dtype=float)
        rho, m1, m2, E = (cons[..., k] for k in range(4))
        u1 = m1 / rho
        u2 = m2 / rho
        p = (self.gamma - 1.0) * (E - 0.5 * (m1 * u1 + m2 * u2))
        return np.stack([rho, u1, u2, p], axis=-1)

    def positivity_ok(self, cons):
        prim = self.primitive(np.asarray(cons, dtype=float))
        return (prim[..., 0] > 0.0) & (prim[..., 3] > 0.0)

    def sound_speed(self, prim):
        prim = np.asarray(prim, dtype=float)
        return np.sqrt(self.gamma * prim[..., 3] / prim[..., 0])

    def flux(self, cons, axis: int):
        cons = np.asarray(cons, dtype=float)
        prim = self.primitive(cons)
        rho, u1, u2, p = (prim[..., k] for k in range(4))
        E = cons[..., 3]
        un = u1 if axis == 0 else u2
        return np.stack([rho * un,
                         rho * u1 * un + (p if axis == 0 else 0.0),
                         rho * u2 * un + (p if axis == 1 else 0.0),
                         (E + p) * un], axis=-1)

    def max_wave_speed(self, cons, axis: int):
        prim = self.primitive(np.asarray(cons, dtype=float))
        un = prim[..., 1] if axis == 0 else prim[..., 2]
        return float(np.max(np.abs(un) + self.sound_speed(prim)))

    def ec_flux_prim(self, pl, pr, axis: int):
        """KEPEC two-point flux from primitive states along one axis."""
        pl = np.asarray(pl, dtype=float)
        pr = np.asarray(pr, dtype=float)
        rl, u1l, u2l, Pl = (pl[..., k] for k in range(4))
        rr, u1r, u2r, Pr = (pr[..., k] for k in range(4))
        bl = rl / (2.0 * Pl)
        br = rr / (2.0 * Pr)
        rho_ln = log_mean(rl, rr)
        beta_ln = log_mean(bl, br)
        u1_bar = 0.5 * (u1l + u1r)
        u2_bar = 0.5 * (u2l + u2r)
        rho_bar = 0.5 * (rl + rr)
        beta_bar = 0.5 * (bl + br)
        q2_bar = 0.5 * (u1l * u1l + u2l * u2l + u1r * u1r + u2r * u2r)
        un_bar = u1_bar if axis == 0 else u2_bar
        f_rho = rho_ln * un_bar
        p_tilde = rho_bar / (2.0 * beta_bar)
        f_m1 = u1_bar * f_rho + (p_tilde if axis == 0 else 0.0)
        f_m2 = u2_bar * f_rho + (p_tilde if axis == 1 else 0.0)
        f_e = (0.5 / ((self.gamma - 1.0) * beta_ln) - 0.5 * q2_bar) * f_rho \
            + u1_bar * f_m1 + u2_bar * f_m2
        return np.stack([f_rho, f_m1, f_m2, f_e], axis=-1)

    def ec_flux(self, ul, ur, axis: int):
        return self.ec_flux_prim(self.primitive(ul), self.primitive(ur), axis)

    def physical_entropy(self, prim):
        prim = np.asarray(prim, dtype=float)
        return np.log(prim[..., 3]) - self.gamma * np.log(prim[..., 0])

    def entropy(self, cons):
        prim = self.primitive(np.asarray(cons, dtype=float))
        return -prim[..., 0] * self.physical_entropy(prim) / (self.gamma - 1.0)

    def entropy_vars(self, cons):
        return self.entropy_vars_prim(self.primitive(np.asarray(cons, dtype=float)))

    def entropy_vars_prim(self, prim):
        prim = np.asarray(prim, dtype=float)
        rho, u1, u2, p = (prim[..., k] for k in range(4))
        s = self.physical_entropy(prim)
        beta = rho / (2.0 * p)
        q2 = u1 * u1 + u2 * u2
        v0 = (self.gamma - s) / (self.gamma - 1.0) - beta * q2
        return np.stack([v0, 2.0 * beta * u1, 2.0 * beta * u2, -2.0 * beta],
                        axis=-1)

    def entropy_potential(self, cons, axis: int):
        cons = np.asarray(cons, dtype=float)
        return cons[..., 1 + axis]

    def interface_primitive(self, ul, ur):
        return 0.5 * (self.primitive(ul) + self.primitive(ur))

    def eigen_scaled(self, prim, axis: int):
        """Entropy-scaled right eigenvectors along one axis, (..., 4, 4)."""
        prim = np.asarray(prim, dtype=float)
        rho, u1, u2, p = (prim[..., k] for k in range(4))
        a = np.sqrt(self.gamma * p / rho)
        q2 = u1 * u1 + u2 * u2
        H = a * a / (self.gamma - 1.0) + 0.5 * q2
        one = np.ones_like(rho)
        zero = np.zeros_like(rho)
        if axis == 0:
            un, ut = u1, u2
        else:
            un, ut = u2, u1
        # rows ordered (rho, m_n, m_t, E) then permuted back for axis = 1
        rows = [
            np.stack([one, one, zero, one], axis=-1),
            np.stack([un - a, un, zero, un + a], axis=-1),
            np.stack([ut, ut, one, ut], axis=-1),
            np.stack([H - un * a, 0.5 * q2, ut, H + un * a], axis=-1),
        ]
        if axis == 1:
            rows = [rows[0], rows[2], rows[1], rows[3]]
        R = np.stack(rows, axis=-2)
        scale = np.stack([rho / (2.0 * self.gamma),
                          rho * (self.gamma - 1.0) / self.gamma,
                          p,
                          rho / (2.0 * self.gamma)], axis=-1)
        return R * np.sqrt(scale)[..., None, :]

    def lambda_roe(self, prim, axis: int):
        prim = np.asarray(prim, dtype=float)
        un = prim[..., 1 + axis]
        a = self.sound_speed(prim)
        return np.stack([np.abs(un - a), np.abs(un), np.abs(un),
                         np.abs(un + a)], axis=-1)

    def lambda_rusanov(self, prim, axis: int):
        prim = np.asarray(prim, dtype=float)
        un = prim[..., 1 + axis]
        a = self.sound_speed(prim)
        lam = np.abs(un) + a
        return np.stack([lam] * 4, axis=-1)
