"""Uniform Cartesian meshes and cell-centered fields with ghost layers.

Cells are indexed by their centers: x_i = a + (i + 1/2) h for i = 0..n-1,
interfaces sit at x_{i+1/2} = a + (i + 1) h. Fields store a fixed number of
ghost cells on every side so that interface stencils never index out of
bounds; the widest stencil in the package (third-order ENO) needs three.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

GHOST_WIDTH = 3


class BoundaryKind(Enum):
    PERIODIC = "periodic"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class Mesh1D:
    a: float
    b: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells <= 0:
            raise ValueError(f"n_cells must be positive, got {self.n_cells}")
        if not self.b > self.a:
            raise ValueError(f"need b > a, got [{self.a}, {self.b}]")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_cells

    def cell_centers(self) -> np.ndarray:
        return self.a + (np.arange(self.n_cells) + 0.5) * self.h

    def interfaces(self) -> np.ndarray:
        return self.a + np.arange(self.n_cells + 1) * self.h


@dataclass(frozen=True)
class Mesh2D:
    x: Mesh1D
    y: Mesh1D

    def cell_centers(self):
        """Meshgrid of cell centers, shape (ny, nx) each, rows indexed by y."""
        return np.meshgrid(self.x.cell_centers(), self.y.cell_centers(), indexing="xy")


class Field:
    """Cell-centered values with ghost padding.

    1D layout: values[cell, var], shape (n + 2g, n_vars).
    2D layout: values[row, col, var] with rows along y and columns along x,
    shape (ny + 2g, nx + 2g, n_vars); variables are interleaved per cell and
    the x index runs fastest in memory.
    """

    __slots__ = ("mesh", "n_vars", "ghost_width", "values")

    def __init__(self, mesh, n_vars: int, ghost_width: int = GHOST_WIDTH):
        if ghost_width < 2:
            raise ValueError("ghost_width must be at least 2 for the interface stencils")
        self.mesh = mesh
        self.n_vars = n_vars
        self.ghost_width = ghost_width
        g2 = 2 * ghost_width
        if isinstance(mesh, Mesh2D):
            shape = (mesh.y.n_cells + g2, mesh.x.n_cells + g2, n_vars)
        else:
            shape = (mesh.n_cells + g2, n_vars)
        self.values = np.zeros(shape)

    @property
    def interior(self) -> np.ndarray:
        g = self.ghost_width
        if self.values.ndim == 3:
            return self.values[g:-g, g:-g, :]
        return self.values[g:-g, :]

    def copy(self) -> "Field":
        out = Field(self.mesh, self.n_vars, self.ghost_width)
        out.values[...] = self.values
        return out

    @classmethod
    def from_interior(cls, mesh, data: np.ndarray, ghost_width: int = GHOST_WIDTH) -> "Field":
        data = np.asarray(data, dtype=float)
        if data.ndim == 1:
            data = data[:, None]
        field = cls(mesh, data.shape[-1], ghost_width)
        field.interior[...] = data
        return field


def _fill_axis(values: np.ndarray, axis: int, n: int, g: int, bc: BoundaryKind) -> None:
    # Views onto the leading/trailing ghost slabs along one axis.
    sl = [slice(None)] * values.ndim

    def take(lo, hi):
        s = list(sl)
        s[axis] = slice(lo, hi)
        return tuple(s)

    if bc is BoundaryKind.PERIODIC:
        values[take(0, g)] = values[take(n, n + g)]
        values[take(n + g, n + 2 * g)] = values[take(g, 2 * g)]
    elif bc is BoundaryKind.NEUMANN:
        values[take(0, g)] = values[take(g, g + 1)]
        values[take(n + g, n + 2 * g)] = values[take(n + g - 1, n + g)]
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown boundary kind {bc}")


def fill_ghosts(field: Field, bc: BoundaryKind) -> Field:
    """Fill ghost layers in place from the interior; returns the same field.

    Periodic ghosts are an exact wrap of the opposite interior band; Neumann
    ghosts replicate the outermost interior cell. In 2D the x sweep runs
    first, then the y sweep copies whole rows (ghost columns included), which
    leaves the corner blocks consistent for both kinds.
    """
    g = field.ghost_width
    if field.values.ndim == 3:
        _fill_axis(field.values, 1, field.mesh.x.n_cells, g, bc)
        _fill_axis(field.values, 0, field.mesh.y.n_cells, g, bc)
    else:
        _fill_axis(field.values, 0, field.mesh.n_cells, g, bc)
    return field


def cell_volume(mesh) -> float:
    if isinstance(mesh, Mesh2D):
        return mesh.x.h * mesh.y.h
    return mesh.h


def error_norms(numeric: Field, exact: Field):
    """Discrete L1, L2 and Linf error norms per variable.

    L1 = sum |e| * vol, L2 = sqrt(sum e^2 * vol), Linf = max |e|, where vol is
    the cell volume (h in 1D, hx*hy in 2D). Returns three arrays of length
    n_vars.
    """
    if numeric.mesh != exact.mesh or numeric.n_vars != exact.n_vars:
        raise ValueError("numeric and exact fields must share mesh and variables")
    vol = cell_volume(numeric.mesh)
    err = numeric.interior - exact.interior
    flat = err.reshape(-1, numeric.n_vars)
    l1 = vol * np.sum(np.abs(flat), axis=0)
    l2 = np.sqrt(vol * np.sum(flat * flat, axis=0))
    linf = np.max(np.abs(flat), axis=0)
    return l1, l2, linf


def interface_error(numeric_left: np.ndarray, numeric_right: np.ndarray,
                    exact_at_interfaces: np.ndarray) -> float:
    """Mean one-sided reconstruction error over a mesh of n cells.

    Inputs are the reconstructed left/right interface states and the exact
    interface values, all of length n + 1 (interfaces 0..n). Cell i
    contributes its left state at interface i+1 and its right state at
    interface i:

        E = (1/n) sum_{j=1..n} |left_j - exact_j|
          + (1/n) sum_{j=0..n-1} |right_j - exact_j|

    Entries of numeric_left/numeric_right set to NaN mark interfaces where
    the reconstruction was not evaluated (a stencil sticking out of the
    domain); those terms drop out of the sums while the 1/n normalization
    keeps counting all cells.
    """
    numeric_left = np.asarray(numeric_left, dtype=float)
    numeric_right = np.asarray(numeric_right, dtype=float)
    exact_at_interfaces = np.asarray(exact_at_interfaces, dtype=float)
    if not (numeric_left.shape == numeric_right.shape == exact_at_interfaces.shape):
        raise ValueError("interface arrays must have identical shapes")
    n = numeric_left.shape[0] - 1
    if n < 1:
        raise ValueError("need at least one cell (two interfaces)")
    left_sum = np.nansum(np.abs(numeric_left[1:] - exact_at_interfaces[1:]))
    right_sum = np.nansum(np.abs(numeric_right[:-1] - exact_at_interfaces[:-1]))
    return float((left_sum + right_sum) / n)
