"""Semi-discrete right-hand side and SSP-RK3 time marching.

The solver advances du_i/dt = -(f_{i+1/2} - f_{i-1/2})/h with the
entropy-stable interface fluxes from flux.py (per axis in 2D, summed).
rhs() assembles the tendency from a ghost-filled field; evolve() loops
fill_ghosts -> compute_dt -> ssprk3_step until t_final, logging per-step
diagnostics, and fails loudly on positivity loss or non-finite values
rather than clipping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import network, reconstruct
from .flux import DIFFUSION_KINDS, tecno_flux
from .mesh import (GHOST_WIDTH, BoundaryKind, Field, Mesh1D, Mesh2D,
                   cell_volume, fill_ghosts)
from .physics import PositivityError, ScalarModel

RECONSTRUCTIONS = ("eno3", "sp-weno", "sp-wenoc", "dsp-weno")


class BlowupError(RuntimeError):
    """Field became non-finite during time marching."""

    def __init__(self, time: float, step: int):
        self.time = time
        self.step = step
        super().__init__(f"non-finite field values after step {step}, "
                         f"t = {time:.6g}")


def resolve_reconstruction(name: str, params=None):
    """Map a reconstruction name to (stencil width, vectorized kernel)."""
    if name == "eno3":
        return 6, reconstruct.eno3_interface_values
    if name in reconstruct.KERNELS_4:
        return 4, reconstruct.KERNELS_4[name]
    if name == "dsp-weno":
        if params is None:
            raise ValueError("dsp-weno needs trained network parameters")
        return 4, network.make_kernel(params)
    raise ValueError(f"unknown reconstruction {name!r}; "
                     f"expected one of {RECONSTRUCTIONS}")


@dataclass
class RhsContext:
    """Scheme configuration: model, mesh, boundaries, and discretization."""

    model: object
    mesh: object
    bc: BoundaryKind
    reconstruction: str = "sp-weno"
    diffusion: str = "roe"
    params: Optional[network.MlpParams] = None

    def __post_init__(self):
        if self.diffusion not in DIFFUSION_KINDS:
            raise ValueError(f"unknown diffusion kind {self.diffusion!r}")
        self.width, self.kernel = resolve_reconstruction(self.reconstruction,
                                                         self.params)
        sizes = ([self.mesh.x.n_cells, self.mesh.y.n_cells]
                 if isinstance(self.mesh, Mesh2D) else [self.mesh.n_cells])
        if min(sizes) < 4:
            raise ValueError("need at least 4 cells along each axis")


@dataclass(frozen=True)
class TimeControls:
    """CFL number and final time for a run."""

    cfl: float
    t_final: float

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.t_final < 0.0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")


@dataclass
class StepLog:
    """Per-step diagnostics appended by evolve.

    min_density/min_pressure are NaN for scalar models.
    """

    t: list = field(default_factory=list)
    dt: list = field(default_factory=list)
    total_entropy: list = field(default_factory=list)
    min_density: list = field(default_factory=list)
    min_pressure: list = field(default_factory=list)

    def record(self, t, dt, total_entropy, min_density, min_pressure):
        self.t.append(float(t))
        self.dt.append(float(dt))
        self.total_entropy.append(float(total_entropy))
        self.min_density.append(float(min_density))
        self.min_pressure.append(float(min_pressure))

    def __len__(self):
        return len(self.dt)


def _windows(arr, width: int, n: int, axis: int):
    """Shifted views covering all n+1 interfaces along one axis.

    Slot k of the window holds, for the interface between cells i and i+1,
    cell i - width/2 + 1 + k; the slices rely on the ghost padding.
    """
    start0 = GHOST_WIDTH - width // 2
    index = [slice(None)] * arr.ndim
    out = []
    for k in range(width):
        s = list(index)
        s[axis] = slice(start0 + k, start0 + k + n + 1)
        out.append(arr[tuple(s)])
    return out


def _check_interior_positive(prim_interior):
    for index, name in ((0, "density"), (-1, "pressure")):
        bad = ~(prim_interior[..., index] > 0.0)
        if bad.any():
            cell = np.unravel_index(int(np.argmax(bad)), bad.shape)
            cell = cell[0] if len(cell) == 1 else tuple(int(c) for c in cell)
            raise PositivityError(name, cell=cell)


def rhs(ctx: RhsContext, fld: Field) -> np.ndarray:
    """Interior-shaped tendency -(f_{i+1/2} - f_{i-1/2})/h; ghosts must be
    current."""
    if isinstance(ctx.mesh, Mesh2D):
        return _rhs_2d(ctx, fld)
    return _rhs_1d(ctx, fld)


def _rhs_1d(ctx: RhsContext, fld: Field) -> np.ndarray:
    model = ctx.model
    n = ctx.mesh.n_cells
    values = fld.values
    window = _windows(values, ctx.width, n, 0)
    if isinstance(model, ScalarModel):
        f = tecno_flux(model, window, ctx.kernel)
    else:
        g = GHOST_WIDTH
        prim_all = model.primitive(values)
        _check_interior_positive(prim_all[g:g + n])
        v_all = model.entropy_vars_prim(prim_all)
        f = tecno_flux(model, window, ctx.kernel, diffusion=ctx.diffusion,
                       prim_window=_windows(prim_all, ctx.width, n, 0),
                       v_window=_windows(v_all, ctx.width, n, 0))
    return -(f[1:] - f[:-1]) / ctx.mesh.h


def _rhs_2d(ctx: RhsContext, fld: Field) -> np.ndarray:
    model = ctx.model
    if isinstance(model, ScalarModel):
        raise ValueError("2D runs support system models only")
    g = GHOST_WIDTH
    mesh = ctx.mesh
    nx, ny = mesh.x.n_cells, mesh.y.n_cells
    values = fld.values
    prim_all = model.primitive(values)
    _check_interior_positive(prim_all[g:g + ny, g:g + nx])
    v_all = model.entropy_vars_prim(prim_all)

    tendency = np.zeros_like(fld.interior)
    # model_axis selects the normal velocity; array_axis the sweep direction.
    sweeps = ((0, 1, mesh.x.h, nx, np.s_[g:g + ny, :]),
              (1, 0, mesh.y.h, ny, np.s_[:, g:g + nx]))
    for model_axis, array_axis, h, n_along, rows in sweeps:
        window = _windows(values[rows], ctx.width, n_along, array_axis)
        f = tecno_flux(model, window, ctx.kernel, diffusion=ctx.diffusion,
                       axis=model_axis,
                       prim_window=_windows(prim_all[rows], ctx.width,
                                            n_along, array_axis),
                       v_window=_windows(v_all[rows], ctx.width,
                                         n_along, array_axis))
        if array_axis == 1:
            tendency -= (f[:, 1:, :] - f[:, :-1, :]) / h
        else:
            tendency -= (f[1:, :, :] - f[:-1, :, :]) / h
    return tendency


def compute_dt(ctx: RhsContext, fld: Field, controls: TimeControls,
               t: float = 0.0) -> float:
    """CFL time step, capped so the run lands exactly on t_final."""
    remaining = controls.t_final - t
    if remaining <= 0.0:
        return 0.0
    interior = fld.interior
    if isinstance(ctx.mesh, Mesh2D):
        sx = float(np.max(ctx.model.max_wave_speed(interior, 0)))
        sy = float(np.max(ctx.model.max_wave_speed(interior, 1)))
        denom = sx / ctx.mesh.x.h + sy / ctx.mesh.y.h
        dt = controls.cfl / denom if denom > 0.0 else remaining
    else:
        smax = float(np.max(ctx.model.max_wave_speed(interior)))
        dt = controls.cfl * ctx.mesh.h / smax if smax > 0.0 else remaining
    return min(dt, remaining)


def ssprk3_step(ctx: RhsContext, fld: Field, dt: float,
                rhs_fn: Optional[Callable] = None) -> Field:
    """One SSP-RK3 step; ghosts are refilled before every stage evaluation.

    u1 = u + dt L(u); u2 = 3/4 u + 1/4 (u1 + dt L(u1));
    u_next = 1/3 u + 2/3 (u2 + dt L(u2)).
    """
    L = rhs if rhs_fn is None else rhs_fn
    u0 = np.array(fld.interior, copy=True)
    stage = fld.copy()

    fill_ghosts(stage, ctx.bc)
    stage.interior[...] = u0 + dt * L(ctx, stage)

    fill_ghosts(stage, ctx.bc)
    stage.interior[...] = 0.75 * u0 + 0.25 * (stage.interior
                                              + dt * L(ctx, stage))

    fill_ghosts(stage, ctx.bc)
    stage.interior[...] = (u0 + 2.0 * (stage.interior
                                       + dt * L(ctx, stage))) / 3.0
    return stage


def _record_step(log: StepLog, ctx: RhsContext, fld: Field,
                 t: float, dt: float) -> None:
    model = ctx.model
    interior = fld.interior
    total = float(np.sum(model.entropy(interior))) * cell_volume(ctx.mesh)
    if isinstance(model, ScalarModel):
        min_rho = min_p = float("nan")
    else:
        prim = model.primitive(interior)
        min_rho = float(np.min(prim[..., 0]))
        min_p = float(np.min(prim[..., -1]))
    log.record(t, dt, total, min_rho, min_p)


def evolve(ctx: RhsContext, initial: Field, controls: TimeControls):
    """March to t_final; returns (final field, step log).

    The last step is clipped so the logged dt values accumulate to exactly
    t_final. Positivity violations and non-finite values abort with
    structured errors carrying the step time.
    """
    current = initial.copy()
    log = StepLog()
    t = 0.0
    while t < controls.t_final:
        dt = compute_dt(ctx, current, controls, t)
        remaining = controls.t_final - t
        if dt >= remaining:
            dt = remaining
            t_next = controls.t_final
        else:
            t_next = t + dt
        try:
            current = ssprk3_step(ctx, current, dt)
        except PositivityError as err:
            raise PositivityError(err.quantity, cell=err.cell,
                                  time=t) from err
        if not np.isfinite(current.interior).all():
            raise BlowupError(time=t_next, step=len(log) + 1)
        t = t_next
        _record_step(log, ctx, current, t, dt)
    return current, log
