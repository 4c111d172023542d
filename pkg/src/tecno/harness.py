"""Experiment driver: runs, convergence studies, and diagnostic metrics.

Turns a RunConfig into artifacts on disk (solution and step-log CSVs plus a
JSON manifest), sweeps mesh refinements into error/rate tables, and hosts the
static reconstruction studies that need no time evolution. CSV numbers are
printed with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import network
from .cases import TestCase, get_case, inclined_sine, pseudo_jump
from .evolve import (RECONSTRUCTIONS, BlowupError, RhsContext, TimeControls,
                     evolve, resolve_reconstruction)
from .mesh import (BoundaryKind, Field, Mesh2D, error_norms, interface_error)
from .physics import PositivityError
from .reconstruct import eno3_interface_values

FLOAT_FMT = "%.17g"


@dataclass
class RunConfig:
    """One solver invocation; None fields fall back to the case defaults."""

    case: str
    n: Optional[int] = None
    reconstruction: str = "sp-weno"
    diffusion: str = "roe"
    cfl: Optional[float] = None
    t_final: Optional[float] = None
    bc: Optional[str] = None
    seed: int = 0
    out_dir: Path = field(default_factory=lambda: Path("runs"))
    weights: Optional[Path] = None

    def resolve(self):
        """Fill defaults from the catalog; returns (case, settings dict)."""
        case = get_case(self.case)
        if self.reconstruction not in RECONSTRUCTIONS:
            raise ValueError(f"unknown reconstruction {self.reconstruction!r}; "
                             f"expected one of {RECONSTRUCTIONS}")
        bc = case.bc if self.bc is None else BoundaryKind(self.bc)
        settings = {
            "n": case.default_n if self.n is None else int(self.n),
            "cfl": case.cfl if self.cfl is None else float(self.cfl),
            "t_final": case.t_final if self.t_final is None else float(self.t_final),
            "bc": bc,
        }
        if settings["n"] < 4:
            raise ValueError("mesh needs at least 4 cells per axis")
        if settings["cfl"] <= 0 or settings["t_final"] < 0:
            raise ValueError("cfl must be positive and t_final non-negative")
        return case, settings


def load_reconstruction_params(name: str, weights: Optional[Path]):
    """Network parameters for the named reconstruction (None if unused)."""
    if name != "dsp-weno":
        return None
    if weights is None:
        return network.default_params()
    return network.load_params(Path(weights))


def weights_digest(weights: Optional[Path]) -> Optional[str]:
    """SHA-256 of the weights file backing a run (packaged file if no path)."""
    if weights is not None:
        data = Path(weights).read_bytes()
    else:
        ref = resources.files("tecno").joinpath("data") \
                       .joinpath(network.DEFAULT_WEIGHTS_RESOURCE)
        data = ref.read_bytes()
    return hashlib.sha256(data).hexdigest()


def variable_names(model) -> list[str]:
    """Primitive variable names used in snapshot CSV headers."""
    n_vars = getattr(model, "n_vars", 1)
    if n_vars == 1:
        return ["u"]
    if n_vars == 3:
        return ["rho", "u1", "p"]
    return ["rho", "u1", "u2", "p"]


def _primitive_interior(model, interior: np.ndarray) -> np.ndarray:
    if getattr(model, "n_vars", 1) == 1:
        return interior
    return model.primitive(interior)


def write_field_csv(path: Path, mesh, values: np.ndarray,
                    names: Sequence[str]) -> None:
    """One row per cell: x[,y],var columns, 17-significant-digit floats."""
    if isinstance(mesh, Mesh2D):
        xg, yg = mesh.cell_centers()
        cols = [xg.ravel(), yg.ravel()]
        header = ["x", "y"]
        flat = values.reshape(-1, values.shape[-1])
    else:
        cols = [mesh.cell_centers()]
        header = ["x"]
        flat = values.reshape(len(cols[0]), -1)
    data = np.column_stack(cols + [flat[:, k] for k in range(flat.shape[1])])
    header = header + list(names)
    np.savetxt(path, data, delimiter=",", header=",".join(header),
               comments="", fmt=FLOAT_FMT)


def write_table_csv(path: Path, header: Sequence[str],
                    rows: Sequence[Sequence]) -> None:
    """Generic CSV writer; floats at full precision, blanks allowed."""
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return FLOAT_FMT % v
        return str(v)

    lines = [",".join(header)]
    lines += [",".join(cell(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(config: RunConfig) -> dict:
    """Execute one run and write solution.csv, steps.csv, manifest.json.

    Returns the manifest dict. Solver aborts are recorded in the manifest and
    re-raised so callers can map them to exit codes.
    """
    case, settings = config.resolve()
    model = case.make_model()
    mesh = case.make_mesh(settings["n"])
    params = load_reconstruction_params(config.reconstruction, config.weights)

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "case": case.name,
        "model": type(model).__name__,
        "n": settings["n"],
        "reconstruction": config.reconstruction,
        "diffusion": config.diffusion,
        "cfl": settings["cfl"],
        "t_final": settings["t_final"],
        "bc": settings["bc"].value,
        "weights": None if params is None else
                   ("packaged" if config.weights is None else str(config.weights)),
        "weights_sha256": weights_digest(config.weights)
                          if config.reconstruction == "dsp-weno" else None,
        "status": "pending",
        "error": None,
        "steps": 0,
        "wall_seconds": None,
        "files": {},
    }
    manifest_path = out / "manifest.json"

    ctx = RhsContext(model=model, mesh=mesh, bc=settings["bc"],
                     reconstruction=config.reconstruction,
                     diffusion=config.diffusion, params=params)
    initial = Field.from_interior(mesh, case.initial(mesh))
    controls = TimeControls(cfl=settings["cfl"], t_final=settings["t_final"])

    start = time.perf_counter()
    try:
        final, log = evolve(ctx, initial, controls)
    except (BlowupError, PositivityError) as exc:
        manifest["status"] = "aborted"
        manifest["error"] = str(exc)
        manifest["wall_seconds"] = time.perf_counter() - start
        manifest_path.write_text(json.dumps(manifest, indent=1) + "\n",
                                 encoding="utf-8")
        raise
    manifest["wall_seconds"] = time.perf_counter() - start
    manifest["status"] = "completed"
    manifest["steps"] = len(log)

    names = variable_names(model)
    write_field_csv(out / "solution.csv", mesh,
                    _primitive_interior(model, final.interior), names)
    manifest["files"]["solution"] = "solution.csv"

    step_rows = list(zip(range(1, len(log) + 1), log.t, log.dt,
                         log.total_entropy, log.min_density, log.min_pressure))
    write_table_csv(out / "steps.csv",
                    ["step", "t", "dt", "total_entropy",
                     "min_density", "min_pressure"], step_rows)
    manifest["files"]["steps"] = "steps.csv"

    if case.exact is not None:
        exact = case.exact(mesh, settings["t_final"])
        write_field_csv(out / "reference.csv", mesh,
                        _primitive_interior(model, exact), names)
        manifest["files"]["reference"] = "reference.csv"

    manifest_path.write_text(json.dumps(manifest, indent=1) + "\n",
                             encoding="utf-8")
    return manifest


def rate(err_coarse: float, err_fine: float,
         h_coarse: float, h_fine: float) -> Optional[float]:
    """Convergence rate between two refinements (handles non-dyadic ratios)."""
    if err_coarse <= 0.0 or err_fine <= 0.0:
        return None
    return float(np.log(err_coarse / err_fine) / np.log(h_coarse / h_fine))


def solve_case(config: RunConfig, n: int):
    """Evolve one mesh size; returns (mesh, model, final field, settings)."""
    case, settings = config.resolve()
    settings["n"] = n
    model = case.make_model()
    mesh = case.make_mesh(n)
    params = load_reconstruction_params(config.reconstruction, config.weights)
    ctx = RhsContext(model=model, mesh=mesh, bc=settings["bc"],
                     reconstruction=config.reconstruction,
                     diffusion=config.diffusion, params=params)
    initial = Field.from_interior(mesh, case.initial(mesh))
    final, log = evolve(ctx, initial,
                        TimeControls(settings["cfl"], settings["t_final"]))
    return case, settings, mesh, model, final, log


def convergence_study(config: RunConfig, mesh_sizes: Sequence[int]) -> dict:
    """Errors against the exact solution over a list of mesh sizes.

    Returns {"variables": names, "rows": [...]} where each row carries n, h,
    and per-variable L1/L2/Linf errors with rates relative to the previous
    mesh (None on the first row). Requires a case with an exact solution.
    """
    case = get_case(config.case)
    if case.exact is None:
        raise ValueError(f"case {case.name!r} has no exact solution; "
                         "use a fine-mesh reference run instead")
    names = variable_names(case.make_model())
    rows = []
    for n in mesh_sizes:
        _, settings, mesh, model, final, _ = solve_case(config, n)
        exact = Field.from_interior(mesh, case.exact(mesh, settings["t_final"]))
        l1, l2, linf = error_norms(final, exact)
        h = mesh.x.h if isinstance(mesh, Mesh2D) else mesh.h
        rows.append({"n": n, "h": h, "l1": l1, "l2": l2, "linf": linf})
    for prev, cur in zip(rows, rows[1:]):
        for norm in ("l1", "l2", "linf"):
            cur[f"{norm}_rate"] = np.array([
                r if (r := rate(ec, ef, prev["h"], cur["h"])) is not None
                else np.nan
                for ec, ef in zip(prev[norm], cur[norm])])
    return {"variables": names, "rows": rows}


def write_convergence_csv(path: Path, study: dict) -> None:
    """Long-format table: one row per (mesh, variable), blank first rates."""
    header = ["n", "h", "variable", "l1", "l1_rate", "l2", "l2_rate",
              "linf", "linf_rate"]
    rows = []
    for row in study["rows"]:
        for k, name in enumerate(study["variables"]):
            out = [row["n"], row["h"], name]
            for norm in ("l1", "l2", "linf"):
                out.append(float(row[norm][k]))
                r = row.get(f"{norm}_rate")
                out.append(None if r is None or np.isnan(r[k]) else float(r[k]))
            rows.append(out)
    write_table_csv(path, header, rows)


def overshoot_metric(numeric: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Total spurious over/undershoot of numeric beyond the reference range.

    Per variable: max(0, max(numeric) - max(reference))
                + max(0, min(reference) - min(numeric)).
    Both arrays must live on a common grid (shape (..., n_vars)).
    """
    numeric = np.asarray(numeric, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if numeric.shape != reference.shape:
        raise ValueError("numeric and reference fields must share a grid")
    num = numeric.reshape(-1, numeric.shape[-1])
    ref = reference.reshape(-1, reference.shape[-1])
    over = np.maximum(0.0, num.max(axis=0) - ref.max(axis=0))
    under = np.maximum(0.0, ref.min(axis=0) - num.min(axis=0))
    return over + under


def nearest_cell_sample(x_fine: np.ndarray, values_fine: np.ndarray,
                        x_coarse: np.ndarray) -> np.ndarray:
    """Downsample a fine-mesh 1D reference to coarse cells by nearest cell."""
    x_fine = np.asarray(x_fine, dtype=float)
    idx = np.searchsorted(x_fine, np.asarray(x_coarse, dtype=float))
    idx = np.clip(idx, 1, len(x_fine) - 1)
    left_closer = (np.abs(x_coarse - x_fine[idx - 1])
                   <= np.abs(x_fine[idx] - x_coarse))
    idx = np.where(left_closer, idx - 1, idx)
    return np.asarray(values_fine)[idx]


# reconstruction studies (no time evolution)

def interface_states(recon: str, u: np.ndarray, params=None):
    """Reconstructed one-sided states at the n+1 interfaces of a cell array.

    Only interfaces whose full stencil lies inside the array are evaluated;
    the rest are NaN so downstream error sums can skip them.
    """
    u = np.asarray(u, dtype=float)
    n = len(u)
    left = np.full(n + 1, np.nan)
    right = np.full(n + 1, np.nan)
    width, kernel = resolve_reconstruction(recon, params)
    if width == 6:
        j = np.arange(3, n - 2)
        zl, zr = eno3_interface_values(u[j - 3], u[j - 2], u[j - 1],
                                       u[j], u[j + 1], u[j + 2])
    else:
        j = np.arange(2, n - 1)
        zl, zr = kernel(u[j - 2], u[j - 1], u[j], u[j + 1])
    left[j] = zl
    right[j] = zr
    return left, right


def reconstruction_accuracy(recon: str, mesh_sizes: Sequence[int],
                            params=None, profile=inclined_sine) -> list[dict]:
    """Mean one-sided interface error of a reconstruction on [0, 1].

    Point values at cell centers feed the stencils; errors are measured
    against the profile at the interfaces, averaged per cell, with rates
    between successive mesh sizes.
    """
    rows = []
    for n in mesh_sizes:
        h = 1.0 / n
        centers = (np.arange(n) + 0.5) * h
        interfaces = np.arange(n + 1) * h
        left, right = interface_states(recon, profile(centers), params)
        err = interface_error(left, right, profile(interfaces))
        rows.append({"n": n, "h": h, "error": err, "rate": None})
    for prev, cur in zip(rows, rows[1:]):
        cur["rate"] = rate(prev["error"], cur["error"], prev["h"], cur["h"])
    return rows


def pseudo_jump_study(recon: str, n: int = 1000, eps: float = 1e-3,
                      params=None) -> dict:
    """Reconstructed jumps around a one-cell-wide pseudo-discontinuity.

    The profile on [-0.5, 0.5] ramps from x/2 to x - eps + 1 across a single
    steep cell of width eps = 1/n. Returns interface coordinates, the raw
    cell-value jumps, and the reconstructed jumps (NaN at boundary stencils).
    """
    a, b = -0.5, 0.5
    h = (b - a) / n
    centers = a + (np.arange(n) + 0.5) * h
    u = pseudo_jump(centers, eps)
    left, right = interface_states(recon, u, params)
    interfaces = a + np.arange(n + 1) * h
    cell_jumps = np.full(n + 1, np.nan)
    cell_jumps[1:n] = u[1:] - u[:-1]
    return {"x": interfaces, "cell_jump": cell_jumps,
            "recon_jump": right - left,
            "left": left, "right": right}


def write_recon_accuracy_csv(path: Path, rows: list[dict]) -> None:
    write_table_csv(path, ["n", "h", "error", "rate"],
                    [[r["n"], r["h"], r["error"], r["rate"]] for r in rows])


def write_pseudo_jump_csv(path: Path, study: dict) -> None:
    rows = list(zip(study["x"], study["cell_jump"], study["recon_jump"],
                    study["left"], study["right"]))
    write_table_csv(path, ["x", "cell_jump", "recon_jump", "left", "right"],
                    [[float(a), _blank_nan(b), _blank_nan(c),
                      _blank_nan(d), _blank_nan(e)] for a, b, c, d, e in rows])


def _blank_nan(v) -> Optional[float]:
    return None if np.isnan(v) else float(v)
