"""Semilinear Klein-Gordon blowup laboratory on expanding FLRW backgrounds."""

from .background import BackgroundModel, CosmologyAudit, InadmissibleCosmology, audit
from .nonlinearity import AdmissibilityReport, Nonlinearity, check_admissibility
from .field import FieldState, Grid, bump_state, energy, inner, laplacian, nehari, norms
from .solver import SolverConfig, StepOutcome, rhs, run, step
from .diagnostics import (
    BoundReport,
    DiagnosticRecord,
    record,
    tmax_bound,
    verify_concavity,
    verify_energy_inequality,
    verify_invariant_set,
)
from .hypotheses import HypothesisReport, evaluate, small_amplitude_exclusion
from .estimator import KleinGordonBlowup

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "BackgroundModel",
    "BoundReport",
    "CosmologyAudit",
    "DiagnosticRecord",
    "FieldState",
    "Grid",
    "HypothesisReport",
    "InadmissibleCosmology",
    "KleinGordonBlowup",
    "Nonlinearity",
    "SolverConfig",
    "StepOutcome",
    "audit",
    "bump_state",
    "check_admissibility",
    "energy",
    "evaluate",
    "inner",
    "laplacian",
    "nehari",
    "norms",
    "record",
    "rhs",
    "run",
    "small_amplitude_exclusion",
    "step",
    "tmax_bound",
    "verify_concavity",
    "verify_energy_inequality",
    "verify_invariant_set",
]
