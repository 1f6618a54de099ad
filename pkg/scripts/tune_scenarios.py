"""Bisection oracle for the built-in scenario amplitudes.

For a fixed bump shape w the data are u0 = A w, u1 = B w. Along the curve
B = B(A), chosen so that the pairing condition holds with a factor-2 margin
(6 E(t0) = (u0, u1) / 2), the smallest amplitude A_min at which every
hypothesis of the blowup theorem holds is located by bisection. The scenario
uses A = SAFETY * A_min. The horizon is t0 + 1.25 (T_proof - t0) and the
radius follows the truncation rule R >= rho + (t_end - t0)/a(t0), rounded up
to a multiple of 0.5.

Run ``python scripts/tune_scenarios.py`` and paste the printed dict into
``flrw_blowup.scenarios.TUNED``.
"""

from __future__ import annotations

import math
import pprint

from flrw_blowup.config import from_dict
from flrw_blowup.field import bump_state, energy
from flrw_blowup.harness import assess
from flrw_blowup.scenarios import base_tree

SAFETY = 1.5
HORIZON_FACTOR = 1.25
SMALL_SCALE = 1e-3


def _config(tree, A, B, radius, t_end):
    tree = dict(tree)
    tree["grid"] = dict(tree["grid"], radius=radius)
    tree["initial"] = dict(tree["initial"], A=A, B=B)
    tree["solver"] = dict(tree["solver"], t_end=t_end)
    return from_dict(tree)


def margin_B(cfg, A):
    """Velocity amplitude with 6 E(t0) = (u0, u1)/2, or None if none exists."""
    g = cfg.grid
    t0 = cfg.resolved_t0
    rho = cfg.initial.rho
    K = energy(bump_state(g, A, 0.0, rho, t0), cfg.background, cfg.nonlinearity)
    w = bump_state(g, 1.0, 0.0, rho, t0).u
    W = g.inner(w, w)
    disc = 0.25 * A * A * W * W - 72.0 * W * K
    if disc < 0:
        return None
    return (0.5 * A * W + math.sqrt(disc)) / (6.0 * W)


def applies(tree, A, radius, t_end):
    cfg = _config(tree, A, 1.0, radius, t_end)
    B = margin_B(cfg, A)
    if B is None:
        return False, None
    cfg = _config(tree, A, B, radius, t_end)
    return assess(cfg)[3].theorem_applies, B


def tune(name, rtol=1e-9):
    tree = base_tree(name)
    rho = tree["initial"]["rho"]
    radius = rho + 1.0
    t_end = tree["t0"] + 1.0
    for _ in range(10):
        hi = 1.0
        while not applies(tree, hi, radius, t_end)[0]:
            hi *= 2.0
            if hi > 1e6:
                raise RuntimeError(f"{name}: no admissible amplitude found")
        lo = hi / 2
        while applies(tree, lo, radius, t_end)[0]:
            lo /= 2
        while hi - lo > rtol * hi:
            mid = 0.5 * (lo + hi)
            if applies(tree, mid, radius, t_end)[0]:
                hi = mid
            else:
                lo = mid
        A = SAFETY * hi
        ok, B = applies(tree, A, radius, t_end)
        assert ok
        cfg = _config(tree, A, B, radius, t_end)
        _, _, _, _, bound, _ = assess(cfg)
        t0 = cfg.resolved_t0
        new_t_end = t0 + HORIZON_FACTOR * (bound.variant_proof - t0)
        need = rho + (new_t_end - t0) / cfg.background.a(t0)
        new_radius = math.ceil(2.0 * need) / 2.0
        if new_radius == radius and math.isclose(new_t_end, t_end, rel_tol=1e-12):
            break
        radius, t_end = new_radius, new_t_end
    return {"A": A, "B": B, "t_end": t_end, "radius": radius, "A_min": hi}


def tune_small(ds1):
    """DS-1 shape scaled down; the horizon is twice the bound formula value."""
    tree = base_tree("DS-1")
    A, B = SMALL_SCALE * ds1["A"], SMALL_SCALE * ds1["B"]
    cfg = _config(tree, A, B, ds1["radius"], ds1["t_end"])
    bound = assess(cfg)[4]
    t_end = 2.0 * bound.variant_proof
    t0 = cfg.resolved_t0
    radius = math.ceil(2.0 * (tree["initial"]["rho"] + (t_end - t0) / cfg.background.a(t0))) / 2.0
    return {"A": A, "B": B, "t_end": t_end, "radius": radius}


def main():
    out = {}
    for name in ("DS-1", "FLRW-1", "MINK-1"):
        res = tune(name)
        res.pop("A_min")
        out[name] = res
    out["DS-1-SMALL"] = tune_small(out["DS-1"])
    pprint.pprint(out, sort_dicts=False, width=100)
    return out


if __name__ == "__main__":
    main()
