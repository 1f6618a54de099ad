"""Functionals of the concavity argument, the blowup-time bound and checkers.

Everything here works on recorded series; no PDE evaluation happens besides
the quadratures in :func:`record`. Second derivatives of ``B = ||m u||**2``
are taken from the series by divided differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .field import energy, nehari

CSV_COLUMNS = ("t", "E", "I", "B", "Bprime", "xi", "linf_u", "l2_u", "dt")


@dataclass
class DiagnosticRecord:
    t: float
    E: float
    I: float
    B: float
    Bprime: float
    xi: float
    concavity_certificate: float = math.nan
    linf_u: float = 0.0
    l2_u: float = 0.0
    dt: float = 0.0
    l2_v: float = 0.0
    grad_sq: float = 0.0
    uv: float = 0.0
    # predicted dE/dt = -n (adot/a) ||u_t||^2 - (adot/a^3) ||grad u||^2
    energy_rate: float = 0.0

    def csv_row(self):
        return [getattr(self, c) for c in CSV_COLUMNS]


def record(state, bg, nl, epsilon=None, dt=0.0):
    """Evaluate all diagnostics on one alive state.

    ``xi = -m^2 (lam + 1) ||u_t||^2 - 2 m^2 I`` with ``lam = eps/2 + 1``.
    The concavity certificate needs neighbouring records and is filled in by
    :func:`fill_concavity_certificate`.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _record(state, bg, nl, nl.epsilon if epsilon is None else epsilon, dt)


def _record(state, bg, nl, eps, dt):
    g = state.grid
    m2 = bg.m**2
    uu = g.inner(state.u, state.u)
    vv = g.inner(state.v, state.v)
    uv = g.inner(state.u, state.v)
    gs = g.grad_norm_sq(state.u)
    I = nehari(state, bg, nl)
    lam = eps / 2 + 1
    a, adot, _ = bg.eval(state.t)
    return DiagnosticRecord(
        t=float(state.t),
        E=energy(state, bg, nl),
        I=I,
        B=m2 * uu,
        Bprime=2.0 * m2 * uv,
        xi=-m2 * (lam + 1) * vv - 2.0 * m2 * I,
        linf_u=float(np.max(np.abs(state.u))) if state.u.size else 0.0,
        l2_u=math.sqrt(uu),
        dt=float(dt),
        l2_v=math.sqrt(vv),
        grad_sq=gs,
        uv=uv,
        energy_rate=-bg.n * (adot / a) * vv - (adot / a**3) * gs,
    )


def _second_divided(t, y):
    """Second derivative at interior samples of a nonuniform series."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.full(y.shape, np.nan)
    if y.size < 3:
        return out
    h0 = t[1:-1] - t[:-2]
    h1 = t[2:] - t[1:-1]
    out[1:-1] = 2.0 * ((y[2:] - y[1:-1]) / h1 - (y[1:-1] - y[:-2]) / h0) / (h0 + h1)
    return out


def fill_concavity_certificate(series, epsilon):
    """Set ``B'' B - (4 + eps)/4 B'^2`` on every interior record, in place."""
    if len(series) < 3:
        return series
    t = [r.t for r in series]
    B2 = _second_divided(t, [r.B for r in series])
    for r, b2 in zip(series, B2):
        r.concavity_certificate = float(b2 * r.B - (4 + epsilon) / 4 * r.Bprime**2)
    return series


# -- blowup-time bound -------------------------------------------------------


class HypothesisError(ValueError):
    """Initial data violate a precondition of the blowup bound."""


@dataclass(frozen=True)
class BoundReport:
    variant_theorem: float
    variant_proof: float
    variant_no_t0: float
    t0: float
    observed_t_blow: float | None = None
    bound_respected: bool | None = None
    below_theorem_variant: bool | None = None

    def attach(self, t_blow):
        """Return a copy carrying the observed blowup time (or ``None``)."""
        if t_blow is None:
            return replace(self, observed_t_blow=None, bound_respected=None,
                           below_theorem_variant=None)
        return replace(self, observed_t_blow=float(t_blow),
                       bound_respected=bool(t_blow < self.variant_proof),
                       below_theorem_variant=bool(t_blow < self.variant_theorem))


def tmax_bound(B0, Bprime0, epsilon, t0):
    """Upper bounds on the maximal existence time.

    ``variant_theorem = t0 + B0/(eps B'0)`` is the headline form;
    ``variant_proof = t0 + 4 B0/(eps B'0)`` is where the tangent line to
    ``B**(-eps/4)`` at ``t0`` crosses zero. ``variant_no_t0`` drops the shift.
    """
    if not Bprime0 > 0:
        raise HypothesisError(
            f"hypotheses not satisfied: (u0,u1) must be positive (B'(t0) = {Bprime0})")
    if not B0 > 0:
        raise HypothesisError(f"hypotheses not satisfied: B(t0) = {B0} must be positive")
    ratio = B0 / (epsilon * Bprime0)
    return BoundReport(variant_theorem=t0 + ratio, variant_proof=t0 + 4 * ratio,
                       variant_no_t0=4 * ratio, t0=float(t0))


# -- checkers ----------------------------------------------------------------


@dataclass
class CheckReport:
    """Outcome of a series check; ``applicable=False`` means it was skipped."""

    applicable: bool
    passed: bool = False
    reason: str = ""
    checked: int = 0
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None


def verify_invariant_set(series, tol_I=1e-10, tol_xi_rel=1e-8):
    """Check that the flow stays in the unstable set.

    Confirms at every record: ``I < tol_I``; ``B'`` increasing (strictly and
    within a roundoff tolerance); ``xi > -tol`` after the first record, with
    ``tol = tol_xi_rel * (1 + |xi(t0)|)``. Violations are ``(t, what, value)``.
    """
    if not series:
        return CheckReport(False, reason="empty series")
    if series[0].I >= 0:
        return CheckReport(False, reason="not applicable: initial Nehari nonnegative")
    viol = []
    for r in series:
        if not r.I < tol_I:
            viol.append((r.t, "I", r.I))
    strict = True
    for prev, cur in zip(series, series[1:]):
        if not cur.Bprime > prev.Bprime:
            strict = False
            slack = 1e-12 * max(1.0, abs(prev.Bprime))
            if cur.Bprime < prev.Bprime - slack:
                viol.append((cur.t, "Bprime", cur.Bprime - prev.Bprime))
    xi_tol = tol_xi_rel * (1 + abs(series[0].xi))
    for r in series[1:]:
        if not r.xi > -xi_tol:
            viol.append((r.t, "xi", r.xi))
    return CheckReport(True, passed=not viol, checked=len(series), violations=viol,
                       details={"bprime_strictly_increasing": strict, "xi_tol": xi_tol})


def verify_concavity(series, epsilon, exponent=None, transient=3, applicable=True):
    """Check that ``G = B**(-exponent)`` is strictly decreasing and concave.

    ``exponent`` defaults to ``epsilon/4``. Second divided differences of
    ``G`` must be negative at every interior record with index >= ``transient``.
    """
    if not applicable:
        return CheckReport(False, reason="skipped: hypotheses unmet")
    if len(series) < 5:
        return CheckReport(False, reason="need at least 5 records")
    B = np.array([r.B for r in series])
    if np.any(B <= 0):
        return CheckReport(False, reason="not applicable: B vanishes")
    alpha = epsilon / 4 if exponent is None else exponent
    t = np.array([r.t for r in series])
    G = B ** (-alpha)
    viol = []
    for k in np.nonzero(np.diff(G) >= 0)[0]:
        viol.append((float(t[k + 1]), "increase", float(G[k + 1] - G[k])))
    G2 = _second_divided(t, G)
    interior = np.arange(max(transient, 1), len(series) - 1)
    for k in interior[G2[interior] >= 0]:
        viol.append((float(t[k]), "convex", float(G2[k])))
    viol.sort()
    return CheckReport(True, passed=not viol, checked=len(series), violations=viol,
                       details={"exponent": alpha})


def verify_energy_inequality(series, tol=None):
    """``E(t_k) <= E(t0) + tol`` with ``tol = 1e-6 (1 + |E(t0)|)`` by default."""
    if not series:
        return CheckReport(False, reason="empty series")
    E0 = series[0].E
    tol = 1e-6 * (1 + abs(E0)) if tol is None else tol
    viol = [(r.t, "E", r.E - E0) for r in series if not r.E <= E0 + tol]
    return CheckReport(True, passed=not viol, checked=len(series), violations=viol,
                       details={"tol": tol, "max_excess": max(r.E - E0 for r in series)})


def dissipation_mismatch(series, skip=2):
    """Relative error between the finite-difference dE/dt and the predicted rate.

    Uses second-order differences on the (possibly nonuniform) record times
    and drops ``skip`` records at each end.
    """
    t = np.array([r.t for r in series])
    E = np.array([r.E for r in series])
    rate = np.array([r.energy_rate for r in series])
    dE = np.gradient(E, t, edge_order=2)
    sl = slice(skip, len(series) - skip)
    return np.abs(dE[sl] - rate[sl]) / np.abs(rate[sl])
