"""Expansion factor a(t) of a spatially flat FLRW metric and derived scalars.

Four families are supported: Minkowski (a = 1), de Sitter (a = exp(H t)),
power law (a = t**k) and a tabulated factor given by samples ``(t, a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("minkowski", "de_sitter", "power_law", "tabulated")

# floor for the curved mass, M(t) > c0; the cosmology never fixes c0
CURVED_MASS_FLOOR = 1e-10


class InadmissibleCosmology(ValueError):
    """The expansion is too fast for the requested nonlinearity exponent."""


@dataclass(frozen=True)
class BackgroundModel:
    """Expansion factor family with spatial dimension ``n`` and mass ``m``.

    Use the constructors :meth:`minkowski`, :meth:`de_sitter`,
    :meth:`power_law` and :meth:`tabulated` rather than the raw initializer.
    """

    kind: str
    n: int
    m: float
    H: float = 0.0
    k: float = 0.0
    table_t: tuple = field(default=(), repr=False)
    table_a: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown background kind {self.kind!r}; expected one of {KINDS}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"spatial dimension must be a positive integer, got {self.n}")
        if self.m == 0:
            raise ValueError("mass m must be nonzero")
        if self.kind == "de_sitter" and not self.H > 0:
            raise ValueError(f"de Sitter needs H > 0, got {self.H}")
        if self.kind == "power_law" and not self.k > 0:
            raise ValueError(f"power law needs k > 0, got {self.k}")
        if self.kind == "tabulated":
            t = np.asarray(self.table_t, dtype=float)
            a = np.asarray(self.table_a, dtype=float)
            if t.ndim != 1 or t.shape != a.shape or t.size < 3:
                raise ValueError("tabulated background needs >= 3 matching (t, a) samples")
            if np.any(np.diff(t) <= 0):
                raise ValueError("tabulated t samples must be strictly increasing")
            if np.any(a <= 0):
                raise ValueError("tabulated a samples must be strictly positive")
            adot = np.gradient(a, t, edge_order=2)
            addot = np.gradient(adot, t, edge_order=2)
            object.__setattr__(self, "_tab", (t, a, adot, addot))

    @classmethod
    def minkowski(cls, n, m):
        return cls("minkowski", n, m)

    @classmethod
    def de_sitter(cls, n, m, H):
        return cls("de_sitter", n, m, H=H)

    @classmethod
    def power_law(cls, n, m, k):
        return cls("power_law", n, m, k=k)

    @classmethod
    def tabulated(cls, n, m, t, a):
        return cls("tabulated", n, m, table_t=tuple(map(float, t)), table_a=tuple(map(float, a)))

    # -- evaluation ---------------------------------------------------------

    def eval(self, t):
        """Return ``(a, adot, addot)`` at time ``t``.

        Closed forms for the analytic families. Tabulated factors use
        second-order differences of the samples (one-sided at the ends),
        linearly interpolated between sample times.
        """
        t = float(t)
        if self.kind == "minkowski":
            return 1.0, 0.0, 0.0
        if self.kind == "de_sitter":
            a = math.exp(self.H * t)
            return a, self.H * a, self.H * self.H * a
        if self.kind == "power_law":
            if t <= 0:
                raise ValueError(f"power-law expansion is singular at t={t}; need t > 0")
            k = self.k
            return t**k, k * t ** (k - 1), k * (k - 1) * t ** (k - 2)
        ts, a, adot, addot = self._tab
        if t < ts[0] or t > ts[-1]:
            raise ValueError(f"t={t} outside tabulated range [{ts[0]}, {ts[-1]}]")
        return (float(np.interp(t, ts, a)), float(np.interp(t, ts, adot)),
                float(np.interp(t, ts, addot)))

    def a(self, t):
        return self.eval(t)[0]

    def hubble_ratio(self, t):
        """adot / a at ``t``."""
        if self.kind == "minkowski":
            return 0.0
        if self.kind == "de_sitter":
            return self.H
        if self.kind == "power_law":
            if t <= 0:
                raise ValueError(f"power-law expansion is singular at t={t}; need t > 0")
            return self.k / t
        a, adot, _ = self.eval(t)
        return adot / a

    def curved_mass_squared(self, t):
        """m**2 + (n/2 - n**2/4) (adot/a)**2 - (n/2) addot/a."""
        a, adot, addot = self.eval(t)
        n = self.n
        h = adot / a
        return self.m**2 + (n / 2 - n * n / 4) * h * h - (n / 2) * (addot / a)

    @property
    def is_expanding(self):
        if self.kind == "tabulated":
            return bool(np.all(self._tab[2] >= 0))
        return True

    def min_admissible_t0(self, epsilon):
        """Smallest t0 >= 0 with adot/a <= epsilon/(6n) for every t >= t0.

        Raises
        ------
        InadmissibleCosmology
            For de Sitter with H above the bound, or a table that never
            settles below it.
        """
        if not epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        bound = epsilon / (6 * self.n)
        if self.kind == "minkowski":
            return 0.0
        if self.kind == "de_sitter":
            if self.H > bound:
                raise InadmissibleCosmology(
                    f"cosmology inadmissible for this epsilon: H={self.H} > epsilon/6n={bound}")
            return 0.0
        if self.kind == "power_law":
            t0 = 6 * self.k * self.n / epsilon
            # k/t0 may round one ulp above the bound
            while self.k / t0 > bound:
                t0 = math.nextafter(t0, math.inf)
            return t0
        ts, a, adot, _ = self._tab
        ok = (adot / a) <= bound
        bad = np.nonzero(~ok)[0]
        if bad.size == 0:
            return 0.0
        if bad[-1] == ts.size - 1:
            raise InadmissibleCosmology(
                f"tabulated Hubble ratio exceeds epsilon/6n={bound} at the end of the table")
        return float(ts[bad[-1] + 1])


@dataclass(frozen=True)
class CosmologyAudit:
    hubble_ratio_at_t0: float
    epsilon_bound: float
    initial_time_ok: bool
    curved_mass_positive: bool
    curved_mass_nonincreasing: bool
    min_admissible_t0: float
    expanding: bool = True

    @property
    def passed(self):
        return (self.initial_time_ok and self.curved_mass_positive
                and self.curved_mass_nonincreasing and self.expanding)


def audit(model, epsilon, t0, t_end, samples=1024):
    """Check the initial-time bound at ``t0`` and the curved-mass conditions.

    The curved mass is sampled uniformly on ``[t0, t_end]``; it must stay
    above :data:`CURVED_MASS_FLOOR` and be nonincreasing (to a relative
    roundoff allowance of 1e-12). Failures are reported in the returned
    flags, never raised.
    """
    if not t_end > t0:
        raise ValueError(f"audit needs t_end > t0, got t0={t0}, t_end={t_end}")
    bound = epsilon / (6 * model.n)
    h0 = model.hubble_ratio(t0)
    try:
        t_min = model.min_admissible_t0(epsilon)
    except InadmissibleCosmology:
        t_min = math.inf
    ts = np.linspace(t0, t_end, samples)
    m2 = np.array([model.curved_mass_squared(t) for t in ts])
    positive = bool(np.all(m2 > 0) and np.sqrt(m2.min()) > CURVED_MASS_FLOOR)
    slack = 1e-12 * np.maximum(1.0, np.abs(m2[:-1]))
    nonincreasing = bool(np.all(np.diff(m2) <= slack))
    return CosmologyAudit(
        hubble_ratio_at_t0=h0,
        epsilon_bound=bound,
        initial_time_ok=bool(h0 <= bound),
        curved_mass_positive=positive,
        curved_mass_nonincreasing=nonincreasing,
        min_admissible_t0=t_min,
        expanding=model.is_expanding,
    )
