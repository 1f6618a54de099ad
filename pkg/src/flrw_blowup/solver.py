"""Method-of-lines integration of u_tt + n (adot/a) u_t - a^-2 lap u + m^2 u = f(u).

Classical RK4 on the first-order system ``(u, v = u_t)``. The step is the
smallest of a CFL step ``cfl * a(t) * dx``, the time left to the horizon,
and an amplitude-limited step that shrinks like the local blowup time scale
``|u|**(-(p-1)/2)`` so that the divergence time is localized to one short
step.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import fill_concavity_certificate, record
from .field import FieldState

ALIVE = "alive"
BLEW_UP = "blew_up"
REACHED_HORIZON = "reached_horizon"

TRIGGERS = ("linf_exceeded", "l2_exceeded", "non_finite", "dt_underflow")

# NonFinite below this L2 norm points at instability rather than blowup
SUSPICIOUS_L2 = 1e3


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    cfl: float = 0.5
    dt_floor: float = 1e-12
    blowup_linf: float = 1e8
    blowup_l2: float = 1e10
    record_every: int = 1
    amp_step: float = 0.1

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.dt_floor > 0:
            raise ValueError("dt_floor must be positive")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"record_every must be a positive integer, got {self.record_every}")
        if not self.amp_step > 0:
            raise ValueError("amp_step must be positive")


@dataclass(frozen=True)
class StepOutcome:
    status: str
    t_blow: float | None = None
    trigger: str | None = None

    @property
    def blew_up(self):
        return self.status == BLEW_UP

    def __str__(self):
        if self.blew_up:
            return f"BlewUp(t_blow={self.t_blow:.12g}, trigger={self.trigger})"
        return "ReachedHorizon" if self.status == REACHED_HORIZON else "Alive"


def _rhs(t, u, v, grid, bg, nl):
    a, adot, _ = bg.eval(t)
    du = v.copy()
    dv = grid.laplacian(u) / (a * a) - bg.n * (adot / a) * v - bg.m**2 * u + nl.f(u)
    b = grid.boundary
    du[b] = 0.0
    dv[b] = 0.0
    return du, dv


def rhs(state, bg, nl):
    """Time derivative ``(du, dv)`` of the first-order system."""
    return _rhs(state.t, state.u, state.v, state.grid, bg, nl)


def stable_dt(state, bg, nl, cfg):
    a = bg.a(state.t)
    dt = cfg.cfl * a * state.grid.dx
    if nl.kind != "zero":
        peak = float(np.max(np.abs(state.u)))
        dt = min(dt, cfg.amp_step / (1.0 + peak ** ((nl.p - 1) / 2)))
    return min(dt, cfg.t_end - state.t)


def _classify(u, v, grid, cfg):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        return "non_finite"
    if np.max(np.abs(u)) > cfg.blowup_linf:
        return "linf_exceeded"
    if math.sqrt(grid.inner(u, u)) > cfg.blowup_l2:
        return "l2_exceeded"
    return None


def step(state, bg, nl, cfg):
    """Advance one RK4 step; returns ``(new_state, outcome)``.

    The input state is not modified. On blowup the returned state is the
    diverged one and ``t_blow`` is the midpoint of the step.
    """
    t, u, v, g = state.t, state.u, state.v, state.grid
    if cfg.t_end - t <= cfg.dt_floor:
        return state, StepOutcome(REACHED_HORIZON)
    dt = stable_dt(state, bg, nl, cfg)
    if dt < cfg.dt_floor:
        return state, StepOutcome(BLEW_UP, t_blow=t, trigger="dt_underflow")
    with np.errstate(over="ignore", invalid="ignore"):
        k1u, k1v = _rhs(t, u, v, g, bg, nl)
        k2u, k2v = _rhs(t + dt / 2, u + dt / 2 * k1u, v + dt / 2 * k1v, g, bg, nl)
        k3u, k3v = _rhs(t + dt / 2, u + dt / 2 * k2u, v + dt / 2 * k2v, g, bg, nl)
        k4u, k4v = _rhs(t + dt, u + dt * k3u, v + dt * k3v, g, bg, nl)
        un = u + dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
        vn = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        g.zero_boundary(un)
        g.zero_boundary(vn)
        trigger = _classify(un, vn, g, cfg)
    t_new = cfg.t_end if cfg.t_end - (t + dt) <= cfg.dt_floor else t + dt
    new = FieldState(g, t_new, un, vn)
    if trigger is not None:
        return new, StepOutcome(BLEW_UP, t_blow=0.5 * (t + t_new), trigger=trigger)
    if t_new >= cfg.t_end:
        return new, StepOutcome(REACHED_HORIZON)
    return new, StepOutcome(ALIVE)


@dataclass
class Simulation:
    """Trajectory summary returned by :func:`run`."""

    outcome: StepOutcome
    series: list
    final_state: FieldState
    steps: int = 0
    suspicious: bool = False
    wall_time: float = 0.0
    max_l2: float = 0.0
    extras: dict = field(default_factory=dict)


def run(initial, bg, nl, cfg, epsilon=None, max_steps=10_000_000):
    """Integrate from ``initial`` until the horizon or blowup.

    Records diagnostics at the start, every ``record_every`` steps and at the
    last alive state. NaN/Inf in the state is reported as blowup, never raised.
    """
    eps = nl.epsilon if epsilon is None else epsilon
    start = time.perf_counter()
    state = initial
    series = []
    if cfg.t_end <= initial.t:
        return Simulation(StepOutcome(REACHED_HORIZON), series, state)
    series.append(record(state, bg, nl, eps))
    max_l2 = series[0].l2_u
    outcome = StepOutcome(ALIVE)
    steps = 0
    last_recorded = 0
    suspicious = False
    dt = 0.0
    while outcome.status == ALIVE and steps < max_steps:
        new, outcome = step(state, bg, nl, cfg)
        if outcome.blew_up:
            if outcome.trigger == "non_finite" and series and state.alive:
                suspicious = math.sqrt(state.grid.inner(state.u, state.u)) < SUSPICIOUS_L2
            break
        dt = new.t - state.t
        state = new
        steps += 1
        if steps % cfg.record_every == 0 or outcome.status == REACHED_HORIZON:
            rec = record(state, bg, nl, eps, dt=dt)
            series.append(rec)
            last_recorded = steps
            max_l2 = max(max_l2, rec.l2_u)
    if last_recorded != steps:
        rec = record(state, bg, nl, eps, dt=dt)
        series.append(rec)
        max_l2 = max(max_l2, rec.l2_u)
    fill_concavity_certificate(series, eps)
    return Simulation(outcome, series, state, steps=steps, suspicious=suspicious,
                      wall_time=time.perf_counter() - start, max_l2=max_l2)
