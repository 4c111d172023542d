"""Interface reconstructions with the sign property.

A reconstruction takes cell values around an interface and returns the two
one-sided interface states (z_minus from the left cell, z_plus from the
right cell). The jump [[z]] = z_plus - z_minus feeds the diffusion term of
the entropy-stable flux; the schemes here guarantee sign([[z]]) equals the
sign of the central cell difference (or the jump vanishes), which is what
makes the overall flux entropy stable.

The WENO-form schemes write the third-order weights as perturbations
(C1, C2) of the quarter/three-quarter linear weights:

    w0 = 3/4 + 2 C1,  w1 = 1/4 - 2 C1   (left state)
    wt0 = 1/4 - 2 C2, wt1 = 3/4 + 2 C2  (right state)

    z_minus = [w0 (z0 + z1) + w1 (3 z0 - zm1)] / 2
    z_plus  = [wt0 (3 z1 - z2) + wt1 (z0 + z1)] / 2

and differ only in how (C1, C2) respond to the local jump ratios

    theta_plus  = d_m / d_0,  theta_minus = d_p / d_0,
    psi_plus = (1 - theta_minus) / (1 - theta_plus),  psi_minus = 1 / psi_plus

built from the three stencil differences d_m, d_0, d_p. All branch decisions
compare these ratios exactly (no epsilon thresholds); a zero central
difference short-circuits to the degenerate rule z_minus = z0, z_plus = z1.

Public functions come in two flavors: scalar helpers operating on a single
4-point stencil (convenient for inspection and tests) and vectorized kernels
operating on flat arrays with one entry per interface (used by the solver).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

# Consistency box for the weight perturbations: C in [-3/8, 1/8] keeps all
# four weights in [0, 1].
BOX_LO = -0.375
BOX_HI = 0.125


@dataclass(frozen=True)
class Stencil4:
    """Four consecutive cell values around one interface (z_0 | z_1 split)."""

    z_m1: float
    z_0: float
    z_p1: float
    z_p2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.z_m1, self.z_0, self.z_p1, self.z_p2], dtype=float)


@dataclass(frozen=True)
class JumpData:
    """Stencil differences and jump ratios for a non-degenerate stencil."""

    d_m: float
    d_0: float
    d_p: float
    theta_plus: float
    theta_minus: float
    psi_plus: float | None
    psi_minus: float | None


class FeasibleCase(Enum):
    CASE1 = "case1"    # theta+ > 1, theta- > 1
    CASE2A = "case2a"  # theta+ < 1, theta- > 1, -1 <= psi+ < 0
    CASE2B = "case2b"  # theta+ < 1, theta- > 1, psi+ < -1
    CASE3A = "case3a"  # theta+ > 1, theta- < 1, -1 <= psi+ < 0
    CASE3B = "case3b"  # theta+ > 1, theta- < 1, psi+ < -1
    CASE4A = "case4a"  # theta- = 1, theta+ > 1
    CASE4B = "case4b"  # theta- = 1, theta+ <= 1
    CASE5A = "case5a"  # theta+ = 1, theta- > 1
    CASE5B = "case5b"  # theta+ = 1, theta- < 1
    CASE6 = "case6"    # theta+ < 1, theta- < 1


@dataclass(frozen=True)
class WenoPerturbation:
    c1: float
    c2: float


@dataclass(frozen=True)
class ReconPair:
    z_minus: float
    z_plus: float

    @property
    def jump(self) -> float:
        return self.z_plus - self.z_minus


class ConstraintInapplicable(ValueError):
    """The sign-property functional is undefined for these jump ratios."""


# ---------------------------------------------------------------------------
# vectorized stencil terms


def stencil_terms(zm1, z0, zp1, zp2) -> dict:
    """Differences, jump ratios and scaling data for a batch of stencils.

    Entries flagged by the ``degenerate`` mask (zero central difference) carry
    placeholder ratios and must be resolved by the degenerate rule.
    """
    zm1, z0, zp1, zp2 = (np.asarray(a, dtype=float) for a in (zm1, z0, zp1, zp2))
    d_m = z0 - zm1
    d_0 = zp1 - z0
    d_p = zp2 - zp1
    degenerate = d_0 == 0.0
    den = np.where(degenerate, 1.0, d_0)
    theta_plus = d_m / den
    theta_minus = d_p / den
    scale = np.maximum(
        1.0,
        np.maximum(np.maximum(np.abs(zm1), np.abs(z0)),
                   np.maximum(np.abs(zp1), np.abs(zp2))),
    )
    return {
        "z": (zm1, z0, zp1, zp2),
        "d_m": d_m, "d_0": d_0, "d_p": d_p,
        "theta_plus": theta_plus, "theta_minus": theta_minus,
        "degenerate": degenerate,
        "aj_m": np.abs(d_m) / scale,
        "aj_0": np.abs(d_0) / scale,
        "aj_p": np.abs(d_p) / scale,
    }


def _psi_ratio(num, den):
    """Elementwise num/den with a placeholder where den == 0."""
    safe = np.where(den == 0.0, 1.0, den)
    return num / safe


def _rational_c(psi):
    """Stable evaluation of (1/8)(1 + psi) / (1 + psi^2).

    Equals kappa+ / ((kappa+)^2 + (kappa-)^2) / 8 with kappa+- = 1/(1 + psi+-)
    after clearing denominators; for |psi| > 1 the reciprocal form avoids
    overflow and stays exact in the limit psi -> +-inf.
    """
    psi = np.asarray(psi, dtype=float)
    big = np.abs(psi) > 1.0
    p = np.where(big, _safe_reciprocal(psi), psi)
    # (1 + psi) / (1 + psi^2) == (q^2 + q) / (q^2 + 1) with q = 1/psi
    val_small = (1.0 + p) / (1.0 + p * p)
    val_big = (p * p + p) / (p * p + 1.0)
    return 0.125 * np.where(big, val_big, val_small)


def _safe_reciprocal(x):
    return 1.0 / np.where(x == 0.0, 1.0, x)


def _rational_x(psi):
    """Stable evaluation of (psi^2 + psi) / (8 (psi^2 + 1)).

    Companion of _rational_c: the two give the unique point on the line
    C1 + C2 psi = (1/8)(1 + psi) closest to the admissible box center, used
    as a single-point vertex set when the line misses the box.
    """
    psi = np.asarray(psi, dtype=float)
    big = np.abs(psi) > 1.0
    p = np.where(big, _safe_reciprocal(psi), psi)
    # with q = 1/psi the value is (1 + q) / (8 (1 + q^2))
    val_small = (p * p + p) / (p * p + 1.0)
    val_big = (1.0 + p) / (1.0 + p * p)
    return 0.125 * np.where(big, val_big, val_small)


def _c1_of(tp, tm):
    """First SP-WENO perturbation as a function of (theta+, theta-).

    Branches, keyed on exact comparisons:
      theta+ == 1                      -> -3/8
      psi+ < 0, psi+ != -1             -> (1/8)(1 + psi+)/(1 + psi+^2)
      psi+ == -1                       -> 0
      psi+ >= 0 and |theta+| <= 1      -> -3/8
      psi+ >= 0 and |theta+| >  1      -> 1/8
    The second perturbation is the same map with the ratios swapped.
    """
    tp = np.asarray(tp, dtype=float)
    tm = np.asarray(tm, dtype=float)
    one_m_tp = 1.0 - tp
    one_m_tm = 1.0 - tm
    is_t1 = one_m_tp == 0.0
    psi = _psi_ratio(one_m_tm, np.where(is_t1, np.nan, one_m_tp))
    c = np.full(np.broadcast(tp, tm).shape, -0.375)
    rational = ~is_t1 & (psi < 0.0) & (psi != -1.0)
    zero_branch = ~is_t1 & (psi == -1.0)
    pos18 = ~is_t1 & (psi >= 0.0) & (np.abs(tp) > 1.0)
    if c.ndim == 0:
        c = c[()]  # keep scalars simple
        if rational:
            return float(_rational_c(psi))
        if zero_branch:
            return 0.0
        if pos18:
            return 0.125
        return -0.375
    np.putmask(c, rational, _rational_c(np.where(rational, psi, 0.0)))
    np.putmask(c, zero_branch, 0.0)
    np.putmask(c, pos18, 0.125)
    return c


def _weno_values(zm1, z0, zp1, zp2, c1, c2):
    w0 = 0.75 + 2.0 * c1
    w1 = 0.25 - 2.0 * c1
    wt0 = 0.25 - 2.0 * c2
    wt1 = 0.75 + 2.0 * c2
    z_minus = 0.5 * (w0 * (z0 + zp1) + w1 * (3.0 * z0 - zm1))
    z_plus = 0.5 * (wt0 * (3.0 * zp1 - zp2) + wt1 * (z0 + zp1))
    return z_minus, z_plus


def _apply_degenerate(terms, z_minus, z_plus):
    deg = terms["degenerate"]
    _, z0, zp1, _ = terms["z"]
    return np.where(deg, z0, z_minus), np.where(deg, zp1, z_plus)


def spweno_c1c2(terms) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        c1 = _c1_of(terms["theta_plus"], terms["theta_minus"])
        c2 = _c1_of(terms["theta_minus"], terms["theta_plus"])
    return c1, c2


def spwenoc_c1c2(terms) -> tuple[np.ndarray, np.ndarray]:
    """SP-WENO perturbations with the contact-sharpening correction.

    The correction subtracts (1/4) G / (1 - theta+-) inside the C-region
    (theta ratios on opposite sides of 1), where G cubes the limited relative
    central jump; elsewhere the weights are plain SP-WENO.
    """
    c1, c2 = spweno_c1c2(terms)
    tp, tm = terms["theta_plus"], terms["theta_minus"]
    cregion = ~terms["degenerate"] & (((tp < 1.0) & (tm > 1.0)) | ((tp > 1.0) & (tm < 1.0)))
    _, z0, zp1, _ = terms["z"]
    half_sum = 0.5 * (np.abs(z0) + np.abs(zp1))
    abs_d0 = np.abs(terms["d_0"])
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = abs_d0 / np.where(half_sum == 0.0, 1.0, half_sum)
        g = np.minimum(np.where(half_sum == 0.0, abs_d0, rel), abs_d0) ** 3
        corr1 = 0.25 * g / np.where(cregion, 1.0 - tp, 1.0)
        corr2 = 0.25 * g / np.where(cregion, 1.0 - tm, 1.0)
    c1 = np.where(cregion, c1 - corr1, c1)
    c2 = np.where(cregion, c2 - corr2, c2)
    return c1, c2


def spweno_interface_values(zm1, z0, zp1, zp2):
    """Vectorized SP-WENO reconstruction; returns (z_minus, z_plus)."""
    terms = stencil_terms(zm1, z0, zp1, zp2)
    c1, c2 = spweno_c1c2(terms)
    zl, zr = _weno_values(*terms["z"], c1, c2)
    return _apply_degenerate(terms, zl, zr)


def spwenoc_interface_values(zm1, z0, zp1, zp2):
    """Vectorized SP-WENOc reconstruction; returns (z_minus, z_plus)."""
    terms = stencil_terms(zm1, z0, zp1, zp2)
    c1, c2 = spwenoc_c1c2(terms)
    zl, zr = _weno_values(*terms["z"], c1, c2)
    return _apply_degenerate(terms, zl, zr)


# ---------------------------------------------------------------------------
# third-order ENO


def eno3_interface_values(zm2, zm1, z0, zp1, zp2, zp3):
    """Vectorized third-order ENO interface states.

    Newton-form stencil selection on point values: the left state starts from
    the cell left of the interface and twice extends toward the smaller
    absolute difference (ties extend left); the right state starts from the
    right cell. The selected quadratic is evaluated at the interface.
    """
    zm2, zm1, z0, zp1, zp2, zp3 = (np.asarray(a, dtype=float)
                                   for a in (zm2, zm1, z0, zp1, zp2, zp3))
    # Undivided differences; uniform spacing makes divided and undivided
    # comparisons equivalent.
    d0 = z0 - zm1
    d1 = zp1 - z0
    d2 = zp2 - zp1
    dd_m2 = zm2 - 2.0 * zm1 + z0
    dd_m1 = zm1 - 2.0 * z0 + zp1
    dd_0 = z0 - 2.0 * zp1 + zp2
    dd_p1 = zp1 - 2.0 * zp2 + zp3

    # candidate quadratic values at the interface
    q_ll = (3.0 * zm2 - 10.0 * zm1 + 15.0 * z0) / 8.0    # cells {-2,-1,0}
    q_c = (-zm1 + 6.0 * z0 + 3.0 * zp1) / 8.0            # cells {-1,0,1}
    q_r = (3.0 * z0 + 6.0 * zp1 - zp2) / 8.0             # cells {0,1,2}
    q_rr = (15.0 * zp1 - 10.0 * zp2 + 3.0 * zp3) / 8.0   # cells {1,2,3}

    # left state: start {0}
    left1 = np.abs(d0) <= np.abs(d1)
    # stencil {-1,0}: extend to {-2,-1,0} vs {-1,0,1}
    left2a = np.abs(dd_m2) <= np.abs(dd_m1)
    # stencil {0,1}: extend to {-1,0,1} vs {0,1,2}
    left2b = np.abs(dd_m1) <= np.abs(dd_0)
    z_minus = np.where(left1,
                       np.where(left2a, q_ll, q_c),
                       np.where(left2b, q_c, q_r))

    # right state: start {1}
    right1 = np.abs(d1) <= np.abs(d2)
    # stencil {0,1}: extend to {-1,0,1} vs {0,1,2}
    right2a = left2b
    # stencil {1,2}: extend to {0,1,2} vs {1,2,3}
    right2b = np.abs(dd_0) <= np.abs(dd_p1)
    z_plus = np.where(right1,
                      np.where(right2a, q_c, q_r),
                      np.where(right2b, q_r, q_rr))
    return z_minus, z_plus


# ---------------------------------------------------------------------------
# feasible vertex sets for the data-driven scheme


def vertex_sets_from_terms(terms) -> np.ndarray:
    """Five feasible (C1, C2) vertices per stencil, shape (m, 5, 2).

    The vertices span the sign-property-feasible region for the stencil's
    case, shrunk to the data-adaptive box [gamma2, gamma1]^2 in the smooth
    C-region cases so that the perturbations stay O(h) on smooth data.
    Duplicates are intentional (a convex combination over a fixed-length
    list); degenerate stencils get placeholder vertices and are resolved by
    the degenerate rule downstream.
    """
    tp = np.atleast_1d(terms["theta_plus"])
    tm = np.atleast_1d(terms["theta_minus"])
    aj_max = np.atleast_1d(np.maximum(np.maximum(terms["aj_m"], terms["aj_0"]),
                                      terms["aj_p"]))
    m = tp.shape[0]
    g1 = np.minimum(aj_max, 0.125)
    g2 = -np.minimum(aj_max, 0.375)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        psi = _psi_ratio(1.0 - tm, 1.0 - tp)      # psi+ (valid in cases 2/3)
        psi_inv = _psi_ratio(1.0 - tp, 1.0 - tm)  # psi-
        # cap astronomically large ratios so the line anchors below stay
        # finite; decisions are unaffected (cancellation already dominates
        # long before the cap bites)
        psi = np.clip(psi, -1e154, 1e154)
        psi_inv = np.clip(psi_inv, -1e154, 1e154)

    V = np.empty((m, 5, 2))
    # default: cases 4b / 5b / 6 share the full-box vertex list
    V[:, 0] = (BOX_HI, BOX_HI)
    V[:, 1] = (BOX_HI, BOX_LO)
    V[:, 2] = (BOX_LO, BOX_LO)
    V[:, 3] = (BOX_LO, BOX_HI)
    V[:, 4] = (-0.125, -0.125)

    case1 = (tm > 1.0) & (tp > 1.0)
    case2 = (tm > 1.0) & (tp < 1.0)
    case3 = (tm < 1.0) & (tp > 1.0)
    case4a = (tm == 1.0) & (tp > 1.0)
    case5a = (tp == 1.0) & (tm > 1.0)

    if np.any(case1):
        V[case1] = (BOX_HI, BOX_HI)

    if np.any(case4a):
        V[case4a, 0] = (BOX_HI, BOX_LO)
        V[case4a, 1] = (BOX_HI, BOX_HI)
        V[case4a, 2] = (BOX_HI, BOX_HI)
        V[case4a, 3] = (BOX_HI, BOX_LO)
        V[case4a, 4] = (BOX_HI, -0.125)

    if np.any(case5a):
        V[case5a, 0] = (BOX_HI, BOX_HI)
        V[case5a, 1] = (BOX_HI, BOX_HI)
        V[case5a, 2] = (BOX_LO, BOX_HI)
        V[case5a, 3] = (BOX_LO, BOX_HI)
        V[case5a, 4] = (-0.125, BOX_HI)

    # C-region line anchors: x on the constraint line at C2 = gamma, etc.
    with np.errstate(invalid="ignore", over="ignore"):
        x_g1 = 0.125 * (1.0 + psi) - g1 * psi        # C1 with C2 = g1
        x_g2 = 0.125 * (1.0 + psi) - g2 * psi        # C1 with C2 = g2
        y_g1 = 0.125 * (1.0 + psi_inv) - g1 * psi_inv  # C2 with C1 = g1
        y_g2 = 0.125 * (1.0 + psi_inv) - g2 * psi_inv  # C2 with C1 = g2
        # single feasible point when the zero-jump line misses the box;
        # algebraically y_hat = (1/8)(1 + psi-) - x_hat psi-
        x_hat = _rational_x(psi_inv)
        y_hat = _rational_c(psi_inv)

    sub2b = case2 & (psi < -1.0)
    sub2a = case2 & ~sub2b
    sub3b = case3 & (psi < -1.0)
    sub3a = case3 & ~sub3b

    def assign(mask, rows):
        if not np.any(mask):
            return
        for k, (xx, yy) in enumerate(rows):
            V[mask, k, 0] = np.broadcast_to(xx, tp.shape)[mask]
            V[mask, k, 1] = np.broadcast_to(yy, tp.shape)[mask]

    # Case 2b: constraint line crosses the box unless x_g1 leaves it below.
    fall2b = sub2b & (x_g1 < g2)
    keep2b = sub2b & ~fall2b
    xc2 = (2.0 * g2 + x_g1) / 3.0
    yc2 = (2.0 * g1 + y_g1) / 3.0
    assign(fall2b, [(x_hat, y_hat)] * 5)
    assign(keep2b, [(g2, g1), (x_g1, g1), (g2, y_g1), (xc2, yc2), (xc2, yc2)])

    # Case 2a: whole box feasible unless y_g1 drops below it.
    fall2a = sub2a & (y_g1 < g2)
    keep2a = sub2a & ~fall2a
    assign(fall2a, [(g2, g1), (g1, g1), (g2, g2), (g1, g2), (0.0, 0.0)])
    assign(keep2a, [(g2, g1), (g1, g1), (g2, g2), (g1, y_g1), (x_g2, g2)])

    # Case 3b mirrors 2a/2b with the roles of the axes exchanged.
    fall3b = sub3b & (x_g1 < g2)
    keep3b = sub3b & ~fall3b
    assign(fall3b, [(g2, g1), (g1, g1), (g2, g2), (g1, g2), (0.0, 0.0)])
    assign(keep3b, [(g1, g2), (g1, g1), (g2, g2), (x_g1, g1), (g2, y_g2)])

    # Case 3a
    fall3a = sub3a & (y_g1 < g2)
    keep3a = sub3a & ~fall3a
    xc3 = (2.0 * g1 + x_g1) / 3.0
    yc3 = (2.0 * g2 + y_g1) / 3.0
    assign(fall3a, [(x_hat, y_hat)] * 5)
    assign(keep3a, [(g1, g2), (x_g1, g2), (g1, y_g1), (xc3, yc3), (xc3, yc3)])

    return V


# ---------------------------------------------------------------------------
# scalar API


def jump_data(s: Stencil4) -> JumpData | None:
    """Differences and jump ratios of one stencil; None if d_0 == 0."""
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    if bool(terms["degenerate"]):
        return None
    tp = float(terms["theta_plus"])
    tm = float(terms["theta_minus"])
    if tp == 1.0 or tm == 1.0:
        psi_p = psi_m = None
    else:
        psi_p = (1.0 - tm) / (1.0 - tp)
        psi_m = (1.0 - tp) / (1.0 - tm)
    return JumpData(float(terms["d_m"]), float(terms["d_0"]), float(terms["d_p"]),
                    tp, tm, psi_p, psi_m)


def classify_case(j: JumpData) -> FeasibleCase:
    """Partition of the (theta+, theta-) plane; exactly one case matches."""
    tp, tm = j.theta_plus, j.theta_minus
    if tp > 1.0 and tm > 1.0:
        return FeasibleCase.CASE1
    if tp < 1.0 and tm > 1.0:
        return FeasibleCase.CASE2B if j.psi_plus < -1.0 else FeasibleCase.CASE2A
    if tp > 1.0 and tm < 1.0:
        return FeasibleCase.CASE3B if j.psi_plus < -1.0 else FeasibleCase.CASE3A
    if tm == 1.0:
        return FeasibleCase.CASE4A if tp > 1.0 else FeasibleCase.CASE4B
    if tp == 1.0:
        return FeasibleCase.CASE5A if tm > 1.0 else FeasibleCase.CASE5B
    return FeasibleCase.CASE6


def script_L(c: WenoPerturbation, j: JumpData) -> float:
    """Sign-property functional; the reconstructed jump is proportional to
    (1 - L), so L = 1 means a zero jump.

        L = C1 / [(1/8)(1 + psi+)] + C2 / [(1/8)(1 + psi-)]

    with L = C1 - C2 + 1 when psi+ = psi- = -1. Raises when exactly one of
    the denominators vanishes (possible only through inconsistent inputs).
    """
    if j.psi_plus is None:
        raise ConstraintInapplicable("psi ratios undefined (a theta ratio equals 1)")
    zp = 1.0 + j.psi_plus == 0.0
    zm = 1.0 + j.psi_minus == 0.0
    if zp and zm:
        return c.c1 - c.c2 + 1.0
    if zp or zm:
        raise ConstraintInapplicable("exactly one of 1 + psi+- vanishes")
    return (c.c1 / (0.125 * (1.0 + j.psi_plus))
            + c.c2 / (0.125 * (1.0 + j.psi_minus)))


def spweno_perturbation(j: JumpData) -> WenoPerturbation:
    c1 = _c1_of(j.theta_plus, j.theta_minus)
    c2 = _c1_of(j.theta_minus, j.theta_plus)
    return WenoPerturbation(float(c1), float(c2))


def spwenoc_perturbation(j: JumpData, s: Stencil4) -> WenoPerturbation:
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    c1, c2 = spwenoc_c1c2(terms)
    return WenoPerturbation(float(c1), float(c2))


def weights_from_perturbation(c: WenoPerturbation):
    """(w0, w1, wt0, wt1) from (C1, C2); consistency needs C in [-3/8, 1/8]."""
    return (0.75 + 2.0 * c.c1, 0.25 - 2.0 * c.c1,
            0.25 - 2.0 * c.c2, 0.75 + 2.0 * c.c2)


def weno_reconstruct(s: Stencil4, c: WenoPerturbation) -> ReconPair:
    """Apply the perturbed third-order weights to one stencil."""
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    if bool(terms["degenerate"]):
        return ReconPair(s.z_0, s.z_p1)
    zl, zr = _weno_values(s.z_m1, s.z_0, s.z_p1, s.z_p2,
                          np.float64(c.c1), np.float64(c.c2))
    return ReconPair(float(zl), float(zr))


def eno3_reconstruct(stencil6) -> ReconPair:
    """Third-order ENO states from six consecutive cell values."""
    vals = np.asarray(stencil6, dtype=float)
    if vals.shape != (6,):
        raise ValueError("eno3 needs exactly six stencil values")
    zl, zr = eno3_interface_values(*vals)
    return ReconPair(float(zl), float(zr))


def vertex_set(j: JumpData, scaled_jumps) -> np.ndarray:
    """Five feasible (C1, C2) vertices from jump ratios and scaled jumps.

    scaled_jumps are the three absolute stencil differences after the
    max-magnitude normalization (as produced by stencil_terms).
    """
    aj_m, aj_0, aj_p = (float(a) for a in scaled_jumps)
    terms = {
        "theta_plus": np.atleast_1d(float(j.theta_plus)),
        "theta_minus": np.atleast_1d(float(j.theta_minus)),
        "degenerate": np.atleast_1d(False),
        "aj_m": np.atleast_1d(aj_m),
        "aj_0": np.atleast_1d(aj_0),
        "aj_p": np.atleast_1d(aj_p),
    }
    return vertex_sets_from_terms(terms)[0]


def feasible_vertices(s: Stencil4) -> np.ndarray:
    """Five feasible (C1, C2) vertices for one stencil, shape (5, 2)."""
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    if bool(terms["degenerate"]):
        raise ValueError("degenerate central jump has no vertex set")
    return vertex_sets_from_terms(terms)[0]


# Dispatch table used by the solver and the studies; the data-driven scheme
# registers itself in network.py to avoid a circular import.
KERNELS_4 = {
    "sp-weno": spweno_interface_values,
    "sp-wenoc": spwenoc_interface_values,
}
