"""Source term f, its primitive F, and admissibility checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("power", "focusing", "defocusing", "zero")


@dataclass(frozen=True)
class Nonlinearity:
    """Power-type source term.

    ``power`` is ``s**p`` and needs an odd integer ``p`` so that it is defined
    for negative ``s``; ``focusing`` is ``|s|**(p-1) s`` and ``defocusing``
    its negative. ``epsilon`` is carried explicitly rather than derived from
    ``p``; :func:`check_admissibility` validates the pair.
    """

    kind: str
    p: float = 3.0
    epsilon: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}; expected one of {KINDS}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.kind != "zero" and not self.p > 1:
            raise ValueError(f"power nonlinearities need p > 1, got {self.p}")
        if self.kind == "power" and (self.p != int(self.p) or int(self.p) % 2 == 0):
            raise ValueError(f"'power' needs an odd integer p, got {self.p}; use 'focusing'")

    @property
    def alpha_f(self):
        """Lipschitz exponent (p - 1 for the power kinds)."""
        return 0.0 if self.kind == "zero" else self.p - 1.0

    def f(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(s)
        if self.kind == "power":
            return s ** int(self.p)
        g = np.abs(s) ** (self.p - 1) * s
        return g if self.kind == "focusing" else -g

    def F(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(s)
        q = self.p + 1
        if self.kind == "power":
            return s ** int(q) / q
        g = np.abs(s) ** q / q
        return g if self.kind == "focusing" else -g


@dataclass(frozen=True)
class AdmissibilityReport:
    epsilon_condition: bool
    lipschitz_exponent_ok: bool
    lipschitz_bound: float
    exponent_unconstrained: bool
    f_vanishes_at_zero: bool
    counterexample: float | None = None

    @property
    def admissible(self):
        return self.epsilon_condition and self.lipschitz_exponent_ok and self.f_vanishes_at_zero


def check_admissibility(nl, n):
    """Validate ``s f(s) >= (2 + eps) F(s)`` and the Lipschitz exponent bound.

    For dimensions ``n <= 2`` the exponent bound ``2/(n-2)`` is void; the
    report marks it ``exponent_unconstrained``.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    eps = nl.epsilon
    counterexample = None
    if nl.kind in ("power", "focusing"):
        eps_ok = nl.p + 1 >= 2 + eps
    elif nl.kind == "defocusing":
        # never admissible; attach a sampled s where the inequality fails, if any
        eps_ok = False
        for s in np.linspace(-4.0, 4.0, 81):
            if s * nl.f(s) - (2 + eps) * nl.F(s) < 0:
                counterexample = float(s)
                break
    else:
        # f = F = 0 satisfies the inequality trivially
        eps_ok = True

    if n <= 2:
        bound, unconstrained, lip_ok = math.inf, True, True
    else:
        bound = 2.0 / (n - 2)
        unconstrained = False
        lip_ok = nl.alpha_f <= bound
    return AdmissibilityReport(
        epsilon_condition=bool(eps_ok),
        lipschitz_exponent_ok=bool(lip_ok),
        lipschitz_bound=bound,
        exponent_unconstrained=unconstrained,
        f_vanishes_at_zero=bool(nl.f(0.0) == 0 and nl.F(0.0) == 0),
        counterexample=counterexample,
    )
