"""Spatial grids, the discrete Laplacian, quadrature and field functionals.

Three geometries are available:

* ``line``: Cartesian n = 1 on [-R, R], Dirichlet at both ends.
* ``radial``: radially symmetric data in n >= 2 on [0, R], even reflection at
  r = 0 and Dirichlet at r = R.
* ``periodic``: n = 1 on [-R, R) with periodic wrap; used to reduce the PDE
  to its spatially homogeneous ODE.

Quadrature weights are cell measures (trapezoidal on uniform Cartesian
grids, control volumes in the radial case) and the Laplacian is written in
flux form against those weights, so that summation by parts holds exactly:
``inner(lap u, w) == -(grad u, grad w)`` for ``w`` vanishing on the boundary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

GEOMETRIES = ("line", "radial", "periodic")
_ALIASES = {"line1d": "line", "radialnd": "radial", "periodic1d": "periodic"}


def sphere_area(n):
    """Surface area of the unit (n-1)-sphere in R^n."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class Grid:
    geometry: str
    n: int
    radius: float
    points: int

    def __post_init__(self):
        geom = _ALIASES.get(str(self.geometry).lower(), str(self.geometry).lower())
        object.__setattr__(self, "geometry", geom)
        if geom not in GEOMETRIES:
            raise ValueError(f"unknown geometry {self.geometry!r}; expected one of {GEOMETRIES}")
        if geom in ("line", "periodic") and self.n != 1:
            raise ValueError(f"{geom} geometry is one-dimensional, got n={self.n}")
        if geom == "radial" and self.n < 2:
            raise ValueError("radial geometry needs n >= 2; use 'line' for n = 1")
        if not self.radius > 0:
            raise ValueError(f"domain radius must be positive, got {self.radius}")
        if int(self.points) != self.points or self.points < 16:
            raise ValueError(f"need at least 16 grid cells, got {self.points}")

    @property
    def dx(self):
        if self.geometry == "radial":
            return self.radius / self.points
        return 2.0 * self.radius / self.points

    @cached_property
    def nodes(self):
        N, h = self.points, self.dx
        if self.geometry == "radial":
            return np.arange(N + 1) * h
        if self.geometry == "line":
            return -self.radius + np.arange(N + 1) * h
        return -self.radius + np.arange(N) * h

    @property
    def size(self):
        return self.nodes.size

    @cached_property
    def weights(self):
        h = self.dx
        if self.geometry == "periodic":
            return np.full(self.points, h)
        if self.geometry == "line":
            w = np.full(self.points + 1, h)
            w[0] = w[-1] = 0.5 * h
            return w
        n, r = self.n, self.nodes
        lo = np.maximum(r - 0.5 * h, 0.0)
        hi = np.minimum(r + 0.5 * h, self.radius)
        return sphere_area(n) / n * (hi**n - lo**n)

    @cached_property
    def face_weights(self):
        """Quadrature weights for quantities living on cell faces."""
        h = self.dx
        if self.geometry == "radial":
            faces = (np.arange(self.points) + 0.5) * h
            return sphere_area(self.n) * faces ** (self.n - 1) * h
        return np.full(self.points, h)

    @cached_property
    def boundary(self):
        """Indices of Dirichlet nodes."""
        if self.geometry == "line":
            return np.array([0, self.points])
        if self.geometry == "radial":
            return np.array([self.points])
        return np.array([], dtype=int)

    def gradient(self, u):
        """Face-centred differences ``(u[j+1] - u[j]) / dx``."""
        if self.geometry == "periodic":
            return (np.roll(u, -1) - u) / self.dx
        return np.diff(u) / self.dx

    def laplacian(self, u):
        u = np.asarray(u, dtype=float)
        h = self.dx
        if self.geometry == "periodic":
            return (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / (h * h)
        out = np.zeros_like(u)
        if self.geometry == "line":
            out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
            return out
        flux = self.face_weights * np.diff(u) / (h * h)
        out[:-1] = flux
        out[1:-1] -= flux[:-1]
        out[:-1] /= self.weights[:-1]
        return out

    def inner(self, u, w):
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        if u.shape != (self.size,) or w.shape != (self.size,):
            raise ValueError(f"arrays of shape {u.shape}, {w.shape} do not match grid of {self.size} nodes")
        return float(np.dot(self.weights, u * w))

    def grad_norm_sq(self, u):
        g = self.gradient(u)
        return float(np.dot(self.face_weights, g * g))

    def integrate(self, u):
        return float(np.dot(self.weights, u))

    def zero_boundary(self, u):
        u[self.boundary] = 0.0
        return u


@dataclass
class FieldState:
    """Discrete ``(u, u_t)`` at time ``t``; ``v`` stores ``u_t``."""

    grid: Grid
    t: float
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if self.u.shape != (self.grid.size,) or self.v.shape != (self.grid.size,):
            raise ValueError(
                f"state arrays {self.u.shape}, {self.v.shape} do not match grid of {self.grid.size} nodes")

    @property
    def alive(self):
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v)))

    def scaled(self, lam):
        return replace(self, u=lam * self.u, v=lam * self.v)

    def copy(self):
        return replace(self, u=self.u.copy(), v=self.v.copy())


def bump_profile(grid, rho):
    """Compact bump ``(1 - (r/rho)**2)**4`` for ``r <= rho``, zero outside."""
    r = np.abs(grid.nodes)
    s = np.clip(1.0 - (r / rho) ** 2, 0.0, None)
    w = s**4
    if grid.geometry != "periodic":
        grid.zero_boundary(w)
    return w


def bump_state(grid, A, B, rho, t=0.0):
    """Initial data ``u0 = A*bump``, ``u1 = B*bump``."""
    w = bump_profile(grid, rho)
    return FieldState(grid, t, A * w, B * w)


def laplacian(state):
    return state.grid.laplacian(state.u)


def inner(u, w, grid):
    return grid.inner(u, w)


def norms(state):
    """``(||u||, ||u_t||, ||grad u||)`` by grid quadrature."""
    g = state.grid
    return (math.sqrt(g.inner(state.u, state.u)), math.sqrt(g.inner(state.v, state.v)),
            math.sqrt(g.grad_norm_sq(state.u)))


def energy(state, bg, nl):
    """E = 1/2 (||u_t||^2 + m^2 ||u||^2 + a^-2 ||grad u||^2 - 2 int F(u))."""
    g = state.grid
    a = bg.a(state.t)
    return 0.5 * (g.inner(state.v, state.v) + bg.m**2 * g.inner(state.u, state.u)
                  + g.grad_norm_sq(state.u) / (a * a) - 2.0 * g.integrate(nl.F(state.u)))


def nehari(state, bg, nl):
    """Modified Nehari functional, with the cross term weighted by min(1, m)**2."""
    g = state.grid
    a = bg.a(state.t)
    mt2 = min(1.0, bg.m) ** 2
    return (bg.m**2 * g.inner(state.u, state.u) + g.grad_norm_sq(state.u) / (a * a)
            + bg.n * bg.hubble_ratio(state.t) * mt2 * g.inner(state.u, state.v)
            - g.inner(state.u, nl.f(state.u)))


def h1_norm(state):
    g = state.grid
    return math.sqrt(g.inner(state.u, state.u) + g.grad_norm_sq(state.u))


def write_snapshot(state, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node_coordinate", "u", "v"])
        for row in zip(state.grid.nodes, state.u, state.v):
            w.writerow([repr(float(x)) for x in row])
