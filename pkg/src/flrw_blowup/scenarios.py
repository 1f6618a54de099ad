"""Built-in named scenarios.

Structural parameters (background, nonlinearity, grid, epsilon, t0) follow
the admissible parameter regimes of the theory. Amplitudes, horizons and
domain radii are *not* theory values: they are produced by
``scripts/tune_scenarios.py`` and pasted into :data:`TUNED` verbatim.
"""

from __future__ import annotations

import copy

from .config import from_dict

# generated by scripts/tune_scenarios.py -- do not edit by hand
TUNED = {'DS-1': {'A': 13.94430374354124,
          'B': 65.35925209137721,
          't_end': 1.2666857272946996,
          'radius': 1.5},
 'FLRW-1': {'A': 7.272455574944615,
            'B': 18.067666817494988,
            't_end': 5.00314019848309,
            'radius': 1.5},
 'MINK-1': {'A': 14.07627721130848,
            'B': 66.59116748594057,
            't_end': 1.2642294342992337,
            'radius': 1.5},
 'DS-1-SMALL': {'A': 0.01394430374354124,
                'B': 0.06535925209137722,
                't_end': 2.4266971636715193,
                'radius': 2.5}}

SOLVER_DEFAULTS = {"cfl": 0.5, "dt_floor": 1e-12, "blowup_linf": 1e8, "blowup_l2": 1e10,
                   "record_every": 1, "amp_step": 0.1}

_BASES = {
    "DS-1": {
        "provenance": "de Sitter with H small and m large: H = 0.01 < eps/6n = 1/9, m - nH/2 = 0.985 > 0",
        "background": {"kind": "de_sitter", "n": 3, "m": 1.0, "H": 0.01},
        "nonlinearity": {"kind": "focusing", "p": 3.0},
        "epsilon": 2.0,
        "t0": 1.0,
    },
    "FLRW-1": {
        "provenance": "power law a = t^k with k = 1/2 <= 2/n and t0 = 6kn/eps = 4.5",
        "background": {"kind": "power_law", "n": 3, "m": 1.0, "k": 0.5},
        "nonlinearity": {"kind": "focusing", "p": 3.0},
        "epsilon": 2.0,
        "t0": 4.5,
    },
    "MINK-1": {
        "provenance": "flat baseline a = 1, where every expansion term vanishes",
        "background": {"kind": "minkowski", "n": 3, "m": 1.0},
        "nonlinearity": {"kind": "focusing", "p": 3.0},
        "epsilon": 2.0,
        "t0": 1.0,
    },
}


def base_tree(name):
    """Structural part of a tuned scenario (no amplitudes, horizon or radius)."""
    b = copy.deepcopy(_BASES[name])
    b.pop("provenance")
    b["grid"] = {"geometry": "radial", "n": b["background"]["n"], "points": 1024}
    b["initial"] = {"rho": 1.0}
    b["solver"] = dict(SOLVER_DEFAULTS)
    b["run_id"] = name
    return b


def _tuned_tree(name, base=None):
    t = TUNED[name]
    tree = base_tree(base or name)
    tree["run_id"] = name
    tree["grid"]["radius"] = t["radius"]
    tree["initial"].update(A=t["A"], B=t["B"])
    tree["solver"]["t_end"] = t["t_end"]
    return tree


def _defocus_tree():
    tree = _tuned_tree("DS-1")
    tree["run_id"] = "DEFOCUS-CTRL"
    tree["nonlinearity"] = {"kind": "defocusing", "p": 3.0}
    return tree


def _mink_linear_tree():
    return {
        "run_id": "MINK-1-LINEAR",
        "background": {"kind": "minkowski", "n": 1, "m": 1.0},
        "nonlinearity": {"kind": "zero"},
        "grid": {"geometry": "line", "n": 1, "radius": 1.0, "points": 1024},
        "initial": {"A": 1.0, "B": 0.0, "profile": "mode", "mode": 1},
        "solver": dict(SOLVER_DEFAULTS, t_end=11.0),
        "epsilon": 2.0,
        "t0": 1.0,
        # Dirichlet walls are part of the standing-mode problem, not a truncation of R^n
        "allow_truncation": True,
    }


def _ds_linear_tree():
    tree = _tuned_tree("DS-1")
    tree["run_id"] = "DS-1-LINEAR"
    tree["nonlinearity"] = {"kind": "zero"}
    tree["initial"].update(A=1.0, B=1.0)
    tree["solver"]["t_end"] = 2.0
    # rho + (t_end - t0)/a(t0) = 1.99
    tree["grid"]["radius"] = 2.0
    return tree


PROVENANCE = {
    "DS-1": _BASES["DS-1"]["provenance"],
    "FLRW-1": _BASES["FLRW-1"]["provenance"],
    "MINK-1": _BASES["MINK-1"]["provenance"],
    "DEFOCUS-CTRL": "DS-1 data with the defocusing power, the standard non-example of an admissible f",
    "DS-1-SMALL": "DS-1 shape scaled by 1e-3; horizon twice the (inapplicable) blowup bound",
    "MINK-1-LINEAR": "f = 0 standing mode on [-1, 1], closed-form linear solution",
    "DS-1-LINEAR": "f = 0 on the DS-1 background, for the energy dissipation identity",
}


def scenario_tree(name):
    if name in ("DS-1", "FLRW-1", "MINK-1"):
        return _tuned_tree(name)
    if name == "DS-1-SMALL":
        return _tuned_tree("DS-1-SMALL", base="DS-1")
    if name == "DEFOCUS-CTRL":
        return _defocus_tree()
    if name == "MINK-1-LINEAR":
        return _mink_linear_tree()
    if name == "DS-1-LINEAR":
        return _ds_linear_tree()
    raise KeyError(f"unknown scenario {name!r}; known: {', '.join(PROVENANCE)}")


def names():
    return list(PROVENANCE)


def built_in_scenarios():
    """All built-in scenarios as parsed :class:`RunConfig` objects."""
    return [from_dict(scenario_tree(n)) for n in names()]


ADMISSIBLE = ("DS-1", "FLRW-1", "MINK-1")
