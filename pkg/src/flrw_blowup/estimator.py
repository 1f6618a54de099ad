"""Scikit-learn style facade over the blowup laboratory.

A sample is one initial datum ``(u0, u1)`` on the configured grid, passed as
an array of shape ``(2, points)``; a batch has shape ``(n_samples, 2, points)``.
``fit`` resolves and audits the background, ``transform`` evaluates the
theorem's initial-data functionals without time stepping, and ``predict``
integrates each sample and returns its blowup time (``nan`` if none).
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .background import audit
from .config import ConfigError, from_dict
from .diagnostics import HypothesisError, tmax_bound
from .field import FieldState
from .hypotheses import evaluate
from .nonlinearity import check_admissibility
from .solver import run

FEATURES = ("E0", "I0", "uu0", "u0_l2sq", "threshold_S", "theorem_applies",
            "variant_theorem", "variant_proof")


def check_initial_data(X, grid):
    """Validate initial data against ``grid``; returns a float array ``(n, 2, points)``.

    Raises ``ValueError`` on a wrong shape, non-finite entries or nonzero
    Dirichlet boundary values.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3 or X.shape[1:] != (2, grid.size):
        raise ValueError(f"expected initial data of shape (n_samples, 2, {grid.size}) "
                         f"or (2, {grid.size}), got {np.shape(X)}")
    if X.shape[0] == 0:
        raise ValueError("no samples given")
    if not np.all(np.isfinite(X)):
        raise ValueError("initial data contain NaN or Inf")
    b = grid.boundary
    if b.size and np.any(X[:, :, b] != 0):
        raise ValueError("initial data must vanish at the Dirichlet boundary nodes")
    return X


class KleinGordonBlowup(BaseEstimator):
    """Blowup-time estimator for ``u_tt + n H u_t - a^-2 lap u + m^2 u = f(u)``.

    Parameters
    ----------
    background : {"minkowski", "de_sitter", "power_law"}
    n : int
        Spatial dimension.
    m : float
        Mass.
    H, k : float
        Hubble constant (de Sitter) and power-law exponent; the unused one
        is ignored.
    nonlinearity : {"focusing", "power", "defocusing", "zero"}
    p : float
        Power of the nonlinearity.
    epsilon : float
    t0 : float or "auto"
    geometry : {"radial", "line", "periodic"}
    radius : float
    points : int
    t_end : float
        Integration horizon used by :meth:`predict`.
    cfl, amp_step : float
        Step controls, see :class:`~flrw_blowup.solver.SolverConfig`.
    """

    def __init__(self, background="de_sitter", n=3, m=1.0, H=0.01, k=0.5,
                 nonlinearity="focusing", p=3.0, epsilon=2.0, t0="auto",
                 geometry="radial", radius=1.5, points=1024, t_end=2.0,
                 cfl=0.5, amp_step=0.1):
        self.background = background
        self.n = n
        self.m = m
        self.H = H
        self.k = k
        self.nonlinearity = nonlinearity
        self.p = p
        self.epsilon = epsilon
        self.t0 = t0
        self.geometry = geometry
        self.radius = radius
        self.points = points
        self.t_end = t_end
        self.cfl = cfl
        self.amp_step = amp_step

    def _tree(self):
        bg = {"kind": self.background, "n": self.n, "m": self.m}
        if self.background == "de_sitter":
            bg["H"] = self.H
        elif self.background == "power_law":
            bg["k"] = self.k
        return {
            "background": bg,
            "nonlinearity": {"kind": self.nonlinearity, "p": self.p},
            "grid": {"geometry": self.geometry, "n": self.n, "radius": self.radius,
                     "points": self.points},
            # placeholder amplitudes; samples supply the actual data
            "initial": {"A": 0.0, "B": 0.0},
            "solver": {"t_end": self.t_end, "cfl": self.cfl, "amp_step": self.amp_step},
            "epsilon": self.epsilon,
            "t0": self.t0,
            "allow_truncation": True,
        }

    def fit(self, X=None, y=None):
        """Resolve the model and audit the background on ``[t0, t_end]``.

        ``X`` is optional and only validated; nothing is learned from it.
        """
        try:
            cfg = from_dict(self._tree(), source="<estimator>").resolved()
        except ConfigError as e:
            raise ValueError(str(e)) from None
        self.config_ = cfg
        self.t0_ = cfg.t0
        self.grid_ = cfg.grid
        self.audit_ = audit(cfg.background, cfg.epsilon, cfg.t0, cfg.solver.t_end)
        self.admissibility_ = check_admissibility(cfg.nonlinearity, cfg.background.n)
        if X is not None:
            check_initial_data(X, self.grid_)
        self.n_features_in_ = 2 * self.grid_.size
        return self

    def _state(self, sample):
        return FieldState(self.grid_, self.t0_, sample[0].copy(), sample[1].copy())

    def hypotheses(self, X):
        """One :class:`~flrw_blowup.hypotheses.HypothesisReport` per sample."""
        check_is_fitted(self, "config_")
        X = check_initial_data(X, self.grid_)
        cfg = self.config_
        return [evaluate(self._state(s), cfg.background, cfg.nonlinearity, cfg.epsilon,
                         cfg.t0, cosmology_ok=self.audit_.passed,
                         nonlinearity_ok=self.admissibility_.admissible) for s in X]

    def transform(self, X):
        """Initial-data functionals, one row per sample, columns :data:`FEATURES`."""
        reports = self.hypotheses(X)
        m2 = self.config_.background.m ** 2
        rows = []
        for h in reports:
            try:
                b = tmax_bound(m2 * h.u0_l2sq, 2 * m2 * h.uu0, self.config_.epsilon, self.t0_)
                vt, vp = b.variant_theorem, b.variant_proof
            except HypothesisError:
                vt = vp = math.nan
            rows.append([h.E0, h.I0, h.uu0, h.u0_l2sq, h.threshold_S,
                         float(h.theorem_applies), vt, vp])
        return np.array(rows)

    def simulate(self, X):
        """Full :class:`~flrw_blowup.solver.Simulation` for every sample."""
        check_is_fitted(self, "config_")
        X = check_initial_data(X, self.grid_)
        cfg = self.config_
        return [run(self._state(s), cfg.background, cfg.nonlinearity, cfg.solver, cfg.epsilon)
                for s in X]

    def predict(self, X):
        """Observed blowup time per sample, ``nan`` where the horizon was reached."""
        out = [s.outcome.t_blow if s.outcome.blew_up else math.nan for s in self.simulate(X)]
        return np.array(out)
