"""Preconditions of the blowup theorem on concrete initial data.

Besides the sign conditions, initial data are placed in one of the four
cases of the high-energy blowup table: the threshold
``S = 3 (eps + 2) / (min(1, m)**2 eps) * E(t0)`` is compared with both
``||u0||**2`` and ``(u0, u1)``. Only cases II and III are covered by the
theorem; I and IV remain open.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .field import energy, h1_norm, nehari

CASES = ("CaseI", "CaseII", "CaseIII", "CaseIV", "NotApplicable")


@dataclass(frozen=True)
class HypothesisReport:
    E0: float
    I0: float
    uu0: float
    u0_l2sq: float
    threshold_S: float
    nehari_negative: bool
    pairing_ok: bool
    case_label: str
    theorem_applies: bool
    cosmology_ok: bool = True
    nonlinearity_ok: bool = True
    mass_positive: bool = True

    def summary_lines(self):
        yield f"E(t0)          = {self.E0:.10g}"
        yield f"I(u0)          = {self.I0:.10g}  ({'negative' if self.nehari_negative else 'nonnegative'})"
        yield f"(u0, u1)       = {self.uu0:.10g}"
        yield f"||u0||^2       = {self.u0_l2sq:.10g}"
        yield f"threshold S    = {self.threshold_S:.10g}"
        yield f"pairing ok     = {self.pairing_ok}"
        yield f"cosmology ok   = {self.cosmology_ok}"
        yield f"nonlinearity ok= {self.nonlinearity_ok}"
        yield f"case           = {self.case_label}"
        yield f"theorem applies= {self.theorem_applies}"


def threshold(E0, epsilon, m):
    mt = min(1.0, m)
    return 3.0 * (epsilon + 2.0) / (mt * mt * epsilon) * E0


def classify(E0, I0, uu0, u0_l2sq, S):
    if not (I0 < 0 and E0 > 0 and uu0 > 0):
        return "NotApplicable"
    big_norm = u0_l2sq >= S
    if uu0 >= S:
        return "CaseII" if big_norm else "CaseIII"
    return "CaseI" if big_norm else "CaseIV"


def evaluate(initial, bg, nl, epsilon=None, t0=None, cosmology_ok=True, nonlinearity_ok=True):
    """Compute the hypothesis report for initial data ``initial``.

    ``cosmology_ok`` and ``nonlinearity_ok`` carry the background audit and
    admissibility verdicts, evaluated by the caller.
    """
    eps = nl.epsilon if epsilon is None else epsilon
    if t0 is not None and not math.isclose(initial.t, t0, rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"initial state is at t={initial.t}, expected t0={t0}")
    g = initial.grid
    E0 = energy(initial, bg, nl)
    I0 = nehari(initial, bg, nl)
    uu0 = g.inner(initial.u, initial.v)
    u0sq = g.inner(initial.u, initial.u)
    S = threshold(E0, eps, bg.m)
    neg = I0 < 0
    pairing = E0 > 0 and uu0 >= S
    label = classify(E0, I0, uu0, u0sq, S)
    mass_ok = bg.m > 0
    return HypothesisReport(
        E0=E0, I0=I0, uu0=uu0, u0_l2sq=u0sq, threshold_S=S,
        nehari_negative=bool(neg), pairing_ok=bool(pairing), case_label=label,
        theorem_applies=bool(neg and pairing and cosmology_ok and nonlinearity_ok and mass_ok),
        cosmology_ok=bool(cosmology_ok), nonlinearity_ok=bool(nonlinearity_ok),
        mass_positive=bool(mass_ok),
    )


@dataclass
class ExclusionReport:
    lambdas: list
    nehari_values: list
    bracket: tuple | None
    lambda_c: float | None
    h1_at_bracket: float | None
    floor_confirmed: bool
    notes: list = field(default_factory=list)


def small_amplitude_exclusion(shape, bg, nl, epsilon=None, t0=None, lambdas=None, rtol=1e-12):
    """Scan ``I(lam u0, lam u1)`` over decreasing amplitudes.

    The sign change is bracketed on the scan and refined by bisection to
    ``lambda_c``; the report carries ``||lambda_c u0||_{H^1}``, the empirical
    positive floor on the data norm below which ``I >= 0``.
    """
    if not (np.any(shape.u != 0) or np.any(shape.v != 0)):
        raise ValueError("shape must not vanish identically")
    if lambdas is None:
        lambdas = [2.0**-j for j in range(11)]
    lambdas = sorted((float(x) for x in lambdas), reverse=True)

    def I_of(lam):
        return nehari(shape.scaled(lam), bg, nl)

    values = [I_of(lam) for lam in lambdas]
    neg = [i for i, val in enumerate(values) if val < 0]
    if not neg:
        return ExclusionReport(lambdas, values, None, None, None,
                               floor_confirmed=all(val >= 0 for val in values),
                               notes=["I >= 0 at every tested amplitude"])
    last_neg = neg[-1]
    if last_neg == len(values) - 1:
        return ExclusionReport(lambdas, values, None, None, None, floor_confirmed=False,
                               notes=["I < 0 down to the smallest tested amplitude"])
    lo, hi = lambdas[last_neg + 1], lambdas[last_neg]
    bracket = (lo, hi)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if I_of(mid) < 0:
            hi = mid
        else:
            lo = mid
    lam_c = 0.5 * (lo + hi)
    return ExclusionReport(
        lambdas, values, bracket, lam_c, h1_norm(shape.scaled(lam_c)),
        floor_confirmed=all(val >= 0 for val in values[last_neg + 1:]),
    )
