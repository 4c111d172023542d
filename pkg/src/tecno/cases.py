"""Catalog of the benchmark problems the solver is exercised on.

Each case bundles the model, domain, initial data, boundary kind, and default
run settings (mesh size, CFL, final time), plus an exact solution when one is
available in closed form. Shock-tube exact solutions come from the Riemann
solver; Shu-Osher, Burgers test 2, and the 2D Riemann problems have no closed
form and use fine-mesh references built by the harness instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .mesh import BoundaryKind, Mesh1D, Mesh2D
from .physics import Advection, Burgers, Euler1D, Euler2D
from .riemann import RiemannState, exact_solution

GAMMA = 1.4


@dataclass(frozen=True)
class TestCase:
    """One benchmark problem with its defaults.

    initial(mesh) and exact(mesh, t) return interior arrays of conserved
    cell-center values matching the mesh layout; exact is None when only a
    fine-mesh reference makes sense.
    """

    name: str
    description: str
    make_model: Callable[[], object]
    make_mesh: Callable[[int], object]
    initial: Callable[[object], np.ndarray]
    bc: BoundaryKind
    t_final: float
    cfl: float
    default_n: int
    exact: Optional[Callable[[object, float], np.ndarray]] = None

    def n_vars(self) -> int:
        model = self.make_model()
        return getattr(model, "n_vars", 1)


def _interval(a: float, b: float) -> Callable[[int], Mesh1D]:
    return lambda n: Mesh1D(a, b, n)


def _square(a: float, b: float) -> Callable[[int], Mesh2D]:
    return lambda n: Mesh2D(Mesh1D(a, b, n), Mesh1D(a, b, n))


def _wrap(x: np.ndarray, a: float, b: float) -> np.ndarray:
    return np.mod(x - a, b - a) + a


# scalar initial profiles

def _shapes_profile(x: np.ndarray) -> np.ndarray:
    """Ramp pair, box, and parabola with different orders of regularity."""
    u = np.zeros_like(x)
    m = (x > 0.2) & (x <= 0.3)
    u[m] = 10.0 * (x[m] - 0.2)
    m = (x > 0.3) & (x <= 0.4)
    u[m] = 10.0 * (0.4 - x[m])
    m = (x > 0.6) & (x <= 0.8)
    u[m] = 1.0
    m = (x > 1.0) & (x <= 1.2)
    u[m] = 100.0 * (x[m] - 1.0) * (1.2 - x[m])
    return u


def _burgers2_profile(x: np.ndarray) -> np.ndarray:
    u = np.sin(np.pi * x)
    u = np.where((x >= -1.0) & (x < -0.5), 3.0, u)
    u = np.where((x >= -0.5) & (x < 0.0), 1.0, u)
    u = np.where((x >= 0.0) & (x < 0.5), 3.0, u)
    u = np.where((x >= 0.5) & (x < 1.0), 2.0, u)
    return u


def _advection_case(name, profile, t_final, cfl, *, domain=(-np.pi, np.pi),
                    default_n=100, description) -> TestCase:
    a, b = domain

    def initial(mesh):
        return profile(mesh.cell_centers())[:, None]

    def exact(mesh, t):
        return profile(_wrap(mesh.cell_centers() - t, a, b))[:, None]

    return TestCase(name=name, description=description,
                    make_model=lambda: Advection(1.0),
                    make_mesh=_interval(a, b), initial=initial,
                    bc=BoundaryKind.PERIODIC, t_final=t_final, cfl=cfl,
                    default_n=default_n, exact=exact)


# Euler helpers

def _tube_initial(model: Euler1D, left, right, x0: float):
    def initial(mesh):
        x = mesh.cell_centers()
        prim = np.where(x[:, None] < x0, left, right)
        return model.conserved(prim)
    return initial


def _tube_exact(model: Euler1D, left, right, x0: float):
    ls = RiemannState(*left)
    rs = RiemannState(*right)

    def exact(mesh, t):
        prim = exact_solution(ls, rs, mesh.cell_centers(), t, x0=x0,
                              gamma=model.gamma)
        return model.conserved(prim)
    return exact


def vortex_primitive(x: np.ndarray, y: np.ndarray,
                     gamma: float = GAMMA, strength: float = 5.0) -> np.ndarray:
    """Isentropic vortex centered at the origin, background flow (1, 0)."""
    r2 = x * x + y * y
    bump = np.exp(0.5 * (1.0 - r2))
    u1 = 1.0 - strength * y / (2.0 * np.pi) * bump
    u2 = strength * x / (2.0 * np.pi) * bump
    temp = 1.0 - (gamma - 1.0) * strength ** 2 / (8.0 * gamma * np.pi ** 2) * bump ** 2
    rho = temp ** (1.0 / (gamma - 1.0))
    p = temp ** (gamma / (gamma - 1.0))
    return np.stack([rho, u1, u2, p], axis=-1)


def _vortex_initial(mesh):
    model = Euler2D(GAMMA)
    xg, yg = mesh.cell_centers()
    return model.conserved(vortex_primitive(xg, yg))


def _vortex_exact(mesh, t):
    # unit horizontal advection speed on a 10-wide periodic box
    model = Euler2D(GAMMA)
    xg, yg = mesh.cell_centers()
    return model.conserved(vortex_primitive(_wrap(xg - t, -5.0, 5.0), yg))


def _quadrant_initial(states):
    """2D Riemann data: quadrant states (Q1..Q4) around (0.5, 0.5)."""
    q1, q2, q3, q4 = (np.asarray(q, dtype=float) for q in states)

    def initial(mesh):
        model = Euler2D(GAMMA)
        xg, yg = mesh.cell_centers()
        right = xg > 0.5
        top = yg > 0.5
        prim = np.empty(xg.shape + (4,))
        prim[right & top] = q1
        prim[~right & top] = q2
        prim[~right & ~top] = q3
        prim[right & ~top] = q4
        return model.conserved(prim)
    return initial


def _kelvin_helmholtz_initial(mesh):
    model = Euler2D(GAMMA)
    xg, yg = mesh.cell_centers()
    inner = np.abs(yg) <= 0.25
    prim = np.empty(xg.shape + (4,))
    prim[..., 0] = np.where(inner, 2.0, 1.0)
    prim[..., 1] = np.where(inner, -0.5, 0.5)
    prim[..., 2] = 0.01 * np.sin(2.0 * np.pi * xg)
    prim[..., 3] = 2.5
    return model.conserved(prim)


def _burgers1_exact(mesh, t):
    # single right-moving shock, Rankine-Hugoniot speed (3 + (-1)) / 2 = 1
    x = mesh.cell_centers()
    return np.where(x < t, 3.0, -1.0)[:, None]


SOD_LEFT = (1.0, 0.75, 1.0)
SOD_RIGHT = (0.125, 0.0, 0.1)
LAX_LEFT = (0.445, 0.698, 3.528)
LAX_RIGHT = (0.5, 0.0, 0.571)


def _shu_osher_initial(mesh):
    model = Euler1D(GAMMA)
    x = mesh.cell_centers()
    prim = np.stack([np.where(x < -4.0, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x)),
                     np.where(x < -4.0, 2.629369, 0.0),
                     np.where(x < -4.0, 10.33333, 1.0)], axis=-1)
    return model.conserved(prim)


def _euler1d_case(name, description, domain, initial, exact, *,
                  t_final, cfl, default_n) -> TestCase:
    a, b = domain
    return TestCase(name=name, description=description,
                    make_model=lambda: Euler1D(GAMMA),
                    make_mesh=_interval(a, b), initial=initial,
                    bc=BoundaryKind.NEUMANN, t_final=t_final, cfl=cfl,
                    default_n=default_n, exact=exact)


_SOD_MODEL = Euler1D(GAMMA)

CASES = {}


def _register(case: TestCase) -> TestCase:
    CASES[case.name] = case
    return case


_register(_advection_case(
    "advect-sine", lambda x: np.sin(x), 0.5, 0.4,
    description="linear advection of sin(x), smooth accuracy test"))

_register(_advection_case(
    "advect-sine4", lambda x: np.sin(x) ** 4, 0.5, 0.5,
    description="linear advection of sin^4(x), exposes linear instability"))

_register(_advection_case(
    "advect-shapes", _shapes_profile, 1.4, 0.2, domain=(0.0, 1.4),
    description="linear advection of shapes with mixed regularity"))

_register(TestCase(
    name="burgers-riemann",
    description="Burgers two-state Riemann data forming a right-moving shock",
    make_model=Burgers, make_mesh=_interval(-1.0, 1.0),
    initial=lambda mesh: np.where(mesh.cell_centers() < 0.0, 3.0, -1.0)[:, None],
    bc=BoundaryKind.NEUMANN, t_final=0.5, cfl=0.4, default_n=100,
    exact=_burgers1_exact))

_register(TestCase(
    name="burgers-mixed",
    description="Burgers with piecewise-constant blocks over a sine background",
    make_model=Burgers, make_mesh=_interval(-4.0, 4.0),
    initial=lambda mesh: _burgers2_profile(mesh.cell_centers())[:, None],
    bc=BoundaryKind.PERIODIC, t_final=0.4, cfl=0.4, default_n=400,
    exact=None))

_register(_euler1d_case(
    "sod", "modified Sod shock tube (sonic rarefaction, contact, shock)",
    (0.0, 1.0),
    _tube_initial(_SOD_MODEL, SOD_LEFT, SOD_RIGHT, 0.3),
    _tube_exact(_SOD_MODEL, SOD_LEFT, SOD_RIGHT, 0.3),
    t_final=0.2, cfl=0.4, default_n=400))

_register(_euler1d_case(
    "lax", "Lax shock tube", (-5.0, 5.0),
    _tube_initial(_SOD_MODEL, LAX_LEFT, LAX_RIGHT, 0.0),
    _tube_exact(_SOD_MODEL, LAX_LEFT, LAX_RIGHT, 0.0),
    t_final=1.3, cfl=0.4, default_n=200))

_register(_euler1d_case(
    "shu-osher", "shock interacting with an oscillatory smooth wave",
    (-5.0, 5.0), _shu_osher_initial, None,
    t_final=1.8, cfl=0.4, default_n=400))

_register(TestCase(
    name="vortex",
    description="isentropic vortex advected once around a periodic box",
    make_model=lambda: Euler2D(GAMMA), make_mesh=_square(-5.0, 5.0),
    initial=_vortex_initial, bc=BoundaryKind.PERIODIC,
    t_final=10.0, cfl=0.5, default_n=100, exact=_vortex_exact))

_register(TestCase(
    name="riemann2d-12",
    description="2D Riemann data forming two shocks and two contacts",
    make_model=lambda: Euler2D(GAMMA), make_mesh=_square(0.0, 1.0),
    initial=_quadrant_initial([(0.5313, 0.0, 0.0, 0.4),
                               (1.0, 0.7276, 0.0, 1.0),
                               (0.8, 0.0, 0.0, 1.0),
                               (1.0, 0.0, 0.7276, 1.0)]),
    bc=BoundaryKind.NEUMANN, t_final=0.25, cfl=0.5, default_n=400,
    exact=None))

_register(TestCase(
    name="riemann2d-3",
    description="2D Riemann data forming four interacting shocks",
    make_model=lambda: Euler2D(GAMMA), make_mesh=_square(0.0, 1.0),
    initial=_quadrant_initial([(1.5, 0.0, 0.0, 1.5),
                               (0.5323, 1.206, 0.0, 0.3),
                               (0.138, 1.206, 1.206, 0.029),
                               (0.5323, 0.0, 1.206, 0.3)]),
    bc=BoundaryKind.NEUMANN, t_final=0.3, cfl=0.4, default_n=400,
    exact=None))

_register(TestCase(
    name="kelvin-helmholtz",
    description="perturbed shear layer developing vortical structures",
    make_model=lambda: Euler2D(GAMMA), make_mesh=_square(-0.5, 0.5),
    initial=_kelvin_helmholtz_initial, bc=BoundaryKind.PERIODIC,
    t_final=3.0, cfl=0.4, default_n=256, exact=None))


def get_case(name: str) -> TestCase:
    try:
        return CASES[name]
    except KeyError:
        known = ", ".join(sorted(CASES))
        raise KeyError(f"unknown case {name!r}; available: {known}") from None


# profiles for the reconstruction studies (no time evolution involved)

def inclined_sine(x: np.ndarray) -> np.ndarray:
    """Oscillatory profile with a linear trend, for accuracy studies."""
    x = np.asarray(x, dtype=float)
    return np.sin(10.0 * np.pi * x) + x


def pseudo_jump(x: np.ndarray, eps: float = 1e-3) -> np.ndarray:
    """Near-discontinuity resolved by a single steep cell of width eps."""
    x = np.asarray(x, dtype=float)
    return np.where(x < 0.0, 0.5 * x,
                    np.where(x <= eps, x / eps, x - eps + 1.0))
