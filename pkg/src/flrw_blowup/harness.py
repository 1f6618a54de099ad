"""Resolve a run configuration into checks, a simulation and persisted results.

Output layout::

    <out>/<run_id>/summary.json   one JSON document per run, "schema": 1
    <out>/<run_id>/series.csv     diagnostic time series
    <out>/sweep.csv               one row per sweep cell
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .background import audit
from .config import from_dict, parse_vary, set_path
from .diagnostics import CSV_COLUMNS, HypothesisError, tmax_bound
from .field import FieldState, bump_state
from .hypotheses import evaluate
from .nonlinearity import check_admissibility
from .solver import REACHED_HORIZON, run

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
WORKERS_ENV = "FLRW_BLOWUP_WORKERS"
SWEEP_TAIL = ("theorem_applies", "outcome", "t_blow", "variant_proof", "bound_respected")


def initial_state(cfg):
    t0 = cfg.resolved_t0
    init = cfg.initial
    if init.profile == "mode":
        g = cfg.grid
        w = np.sin(init.mode * math.pi * (g.nodes + g.radius) / (2 * g.radius))
        g.zero_boundary(w)
        return FieldState(g, t0, init.A * w, init.B * w)
    return bump_state(cfg.grid, init.A, init.B, init.rho, t0)


@dataclass
class RunResult:
    run_id: str
    config: dict
    cosmology: object
    admissibility: object
    hypotheses: object
    bound: object | None
    outcome: object | None
    series: list = field(default_factory=list, repr=False)
    series_path: str | None = None
    wall_time: float = 0.0
    anomaly: bool = False
    suspicious: bool = False
    truncation_ok: bool = True
    max_l2: float = 0.0
    warnings: list = field(default_factory=list)

    @property
    def t_blow(self):
        if self.outcome is not None and self.outcome.blew_up:
            return self.outcome.t_blow
        return None

    def summary(self):
        def block(obj):
            return None if obj is None else _jsonable(asdict(obj))
        out = self.outcome
        return {
            "schema": SCHEMA_VERSION,
            "run_id": self.run_id,
            "config": self.config,
            "cosmology_audit": block(self.cosmology),
            "admissibility": block(self.admissibility),
            "hypotheses": block(self.hypotheses),
            "bound": block(self.bound),
            "outcome": None if out is None else {
                "status": out.status, "t_blow": out.t_blow, "trigger": out.trigger},
            "series_path": self.series_path,
            "records": len(self.series),
            "max_l2_u": self.max_l2,
            "anomaly": self.anomaly,
            "suspicious": self.suspicious,
            "truncation_ok": self.truncation_ok,
            "warnings": self.warnings,
            "wall_time": self.wall_time,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def assess(cfg):
    """Background audit, admissibility, hypotheses and bound; no time stepping."""
    cfg = cfg.resolved()
    t0 = cfg.t0
    cos = audit(cfg.background, cfg.epsilon, t0, max(cfg.solver.t_end, t0 + 1e-9))
    adm = check_admissibility(cfg.nonlinearity, cfg.background.n)
    state = initial_state(cfg)
    hyp = evaluate(state, cfg.background, cfg.nonlinearity, cfg.epsilon, t0,
                   cosmology_ok=cos.passed, nonlinearity_ok=adm.admissible)
    m2 = cfg.background.m ** 2
    try:
        bound = tmax_bound(m2 * hyp.u0_l2sq, 2 * m2 * hyp.uu0, cfg.epsilon, t0)
    except HypothesisError:
        bound = None
    return cfg, cos, adm, hyp, bound, state


def run_config(cfg, write=True):
    """Full run of one configuration; writes summary and series when ``write``."""
    start = time.perf_counter()
    cfg, cos, adm, hyp, bound, state = assess(cfg)
    warnings = []
    need = cfg.truncation_radius()
    truncation_ok = cfg.grid.radius >= need or cfg.grid.geometry == "periodic"
    if not truncation_ok:
        msg = (f"domain radius {cfg.grid.radius} < {need:.6g} needed for exact truncation"
               + (" (override set)" if cfg.allow_truncation else ""))
        warnings.append(msg)
        (log.info if cfg.allow_truncation else log.warning)("%s: %s", cfg.run_id, msg)
    result = RunResult(cfg.run_id, cfg.to_dict(), cos, adm, hyp, bound, None,
                       truncation_ok=truncation_ok, warnings=warnings)
    if not cos.passed and not cfg.override_audit:
        warnings.append("background audit failed; simulation skipped (set override_audit)")
    else:
        sim = run(state, cfg.background, cfg.nonlinearity, cfg.solver, cfg.epsilon)
        result.outcome = sim.outcome
        result.series = sim.series
        result.suspicious = sim.suspicious
        result.max_l2 = sim.max_l2
        if bound is not None:
            result.bound = bound.attach(sim.outcome.t_blow if sim.outcome.blew_up else None)
        if hyp.theorem_applies and result.bound is not None:
            if sim.outcome.status == REACHED_HORIZON and cfg.solver.t_end >= result.bound.variant_proof:
                result.anomaly = True
                warnings.append("ANOMALY: theorem predicts blowup before the bound but the run reached the horizon")
            elif sim.outcome.blew_up and not result.bound.bound_respected:
                result.anomaly = True
                warnings.append("ANOMALY: blowup observed after the proof bound")
        if sim.suspicious:
            warnings.append("non-finite state at small L2 norm: likely instability, not blowup")
    result.wall_time = time.perf_counter() - start
    if write:
        write_result(result, cfg.output_dir)
    return result


def series_csv(series):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in series:
        w.writerow([repr(float(x)) for x in r.csv_row()])
    return buf.getvalue()


def write_result(result, out_dir):
    d = Path(out_dir) / result.run_id
    d.mkdir(parents=True, exist_ok=True)
    if result.outcome is not None:
        p = d / "series.csv"
        p.write_text(series_csv(result.series))
        result.series_path = str(p)
    (d / "summary.json").write_text(json.dumps(result.summary(), indent=2) + "\n")
    return d


# -- sweeps ------------------------------------------------------------------


def sweep_cells(base, varies):
    """Cartesian product of ``key=lo:hi:steps`` specs over the base config tree."""
    parsed = [parse_vary(v) for v in varies]
    keys = [k for k, _ in parsed]
    cells = []
    for idx, combo in enumerate(itertools.product(*[vals for _, vals in parsed])):
        tree = base
        for k, val in zip(keys, combo):
            tree = set_path(tree, k, val)
        tree = set_path(tree, "run_id", f"{base.get('run_id', 'run')}-cell{idx:04d}")
        cells.append((idx, dict(zip(keys, combo)), tree))
    return keys, cells


def _run_cell(args):
    idx, values, tree, write = args
    cfg = from_dict(tree)
    res = run_config(cfg, write=write)
    b = res.bound
    row = dict(values)
    row.update(
        theorem_applies=res.hypotheses.theorem_applies,
        outcome="skipped" if res.outcome is None else res.outcome.status,
        t_blow=res.t_blow,
        variant_proof=None if b is None else b.variant_proof,
        bound_respected=None if b is None else b.bound_respected,
    )
    return idx, row, res.anomaly


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def sweep(base, varies, workers=None, out_dir=None, write_runs=True):
    """Run every sweep cell and write ``<out>/sweep.csv``.

    Rows are sorted by cell index, so the file is identical for any worker
    count. Returns ``(csv_text, rows, any_anomaly)``.
    """
    keys, cells = sweep_cells(base, varies)
    workers = default_workers() if workers is None else workers
    jobs = [(idx, vals, tree, write_runs) for idx, vals, tree in cells]
    if workers == 1 or len(jobs) == 1:
        results = [_run_cell(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_cell, jobs))
    results.sort(key=lambda r: r[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(keys) + list(SWEEP_TAIL)
    w.writerow(header)
    for _, row, _ in results:
        w.writerow([_fmt(row[k]) for k in header])
    text = buf.getvalue()
    out_dir = base.get("output_dir", "runs") if out_dir is None else out_dir
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        (Path(out_dir) / "sweep.csv").write_text(text)
    return text, [r[1] for r in results], any(r[2] for r in results)

