"""Run configuration: a JSON tree with blocks background/nonlinearity/grid/initial/solver.

Overrides address keys by dotted path (``background.H``). Parse errors carry
the line of the offending key in the source document when one is known.
"""

from __future__ import annotations

import copy
import json
import math
import re
from dataclasses import dataclass, replace

from .background import BackgroundModel
from .field import Grid
from .nonlinearity import Nonlinearity
from .solver import SolverConfig

BLOCKS = ("background", "nonlinearity", "grid", "initial", "solver")
PROFILES = ("bump", "mode")


class ConfigError(ValueError):
    def __init__(self, message, line=None, source="<config>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class InitialData:
    """``u0 = A*w``, ``u1 = B*w`` with ``w`` a compact bump of radius ``rho``.

    ``profile="mode"`` (line geometry only) uses the standing mode
    ``w = sin(mode*pi*(x + R) / (2R))`` instead; ``rho`` is then unused.
    """

    A: float
    B: float
    rho: float = 1.0
    profile: str = "bump"
    mode: int = 1


@dataclass(frozen=True)
class RunConfig:
    background: BackgroundModel
    nonlinearity: Nonlinearity
    grid: Grid
    initial: InitialData
    solver: SolverConfig
    epsilon: float
    t0: object = "auto"
    output_dir: str = "runs"
    run_id: str = "run"
    allow_truncation: bool = False
    override_audit: bool = False

    @property
    def resolved_t0(self):
        if self.t0 == "auto":
            return self.background.min_admissible_t0(self.epsilon)
        return float(self.t0)

    def resolved(self):
        return replace(self, t0=self.resolved_t0)

    def truncation_radius(self):
        """Smallest radius for which the truncated domain is exact up to solver error."""
        t0 = self.resolved_t0
        ext = self.initial.rho if self.initial.profile == "bump" else 0.0
        return ext + (self.solver.t_end - t0) / self.background.a(t0)

    def to_dict(self):
        bg = self.background
        b = {"kind": bg.kind, "n": bg.n, "m": bg.m}
        if bg.kind == "de_sitter":
            b["H"] = bg.H
        elif bg.kind == "power_law":
            b["k"] = bg.k
        elif bg.kind == "tabulated":
            b["t"] = list(bg.table_t)
            b["a"] = list(bg.table_a)
        nl = self.nonlinearity
        s = self.solver
        init = {"A": self.initial.A, "B": self.initial.B, "rho": self.initial.rho}
        if self.initial.profile != "bump":
            init.update(profile=self.initial.profile, mode=self.initial.mode)
        return {
            "run_id": self.run_id,
            "background": b,
            "nonlinearity": {"kind": nl.kind, "p": nl.p},
            "grid": {"geometry": self.grid.geometry, "n": self.grid.n,
                     "radius": self.grid.radius, "points": self.grid.points},
            "initial": init,
            "solver": {"t_end": s.t_end, "cfl": s.cfl, "dt_floor": s.dt_floor,
                       "blowup_linf": s.blowup_linf, "blowup_l2": s.blowup_l2,
                       "record_every": s.record_every, "amp_step": s.amp_step},
            "epsilon": self.epsilon,
            "t0": self.t0,
            "output_dir": self.output_dir,
            "allow_truncation": self.allow_truncation,
            "override_audit": self.override_audit,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _locate(text, path):
    """Line number (1-based) of the key at dotted ``path`` in ``text``, if found."""
    if not text:
        return None
    pos = 0
    line = None
    for key in path.split("."):
        m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, pos)
        if m is None:
            return line
        pos = m.end()
        line = text.count("\n", 0, m.start()) + 1
    return line


def _num(block, key, where, default=None, kind=float):
    path = f"{where}.{key}" if where else key
    if key not in block:
        if default is None:
            raise _Missing(path)
        return default
    val = block[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise _Bad(path, f"expected a number, got {val!r}")
    if kind is int:
        if val != int(val):
            raise _Bad(path, f"expected an integer, got {val!r}")
        return int(val)
    return float(val)


class _Missing(Exception):
    def __init__(self, path):
        self.path = path


class _Bad(Exception):
    def __init__(self, path, message):
        self.path = path
        self.message = message


def from_dict(d, text=None, source="<config>"):
    """Build a :class:`RunConfig` from a parsed tree; raise :class:`ConfigError`."""
    if not isinstance(d, dict):
        raise ConfigError("top level must be an object", 1, source)
    try:
        return _build(d)
    except _Missing as e:
        parent = e.path.rsplit(".", 1)[0] if "." in e.path else e.path
        raise ConfigError(f"missing required key '{e.path}'", _locate(text, parent), source) from None
    except _Bad as e:
        raise ConfigError(f"'{e.path}': {e.message}", _locate(text, e.path), source) from None


def _block(d, name):
    if name not in d:
        raise _Missing(name)
    b = d[name]
    if not isinstance(b, dict):
        raise _Bad(name, "expected an object")
    return b


def _build(d):
    unknown = set(d) - set(BLOCKS) - {"epsilon", "t0", "output_dir", "run_id",
                                      "allow_truncation", "override_audit", "schema"}
    if unknown:
        key = sorted(unknown)[0]
        raise _Bad(key, "unknown top-level key")
    b = _block(d, "background")
    kind = b.get("kind")
    n = _num(b, "n", "background", kind=int)
    m = _num(b, "m", "background")
    try:
        if kind == "minkowski":
            bg = BackgroundModel.minkowski(n, m)
        elif kind == "de_sitter":
            bg = BackgroundModel.de_sitter(n, m, _num(b, "H", "background"))
        elif kind == "power_law":
            bg = BackgroundModel.power_law(n, m, _num(b, "k", "background"))
        elif kind == "tabulated":
            if "t" not in b or "a" not in b:
                raise _Missing("background.t")
            bg = BackgroundModel.tabulated(n, m, b["t"], b["a"])
        else:
            raise _Bad("background.kind", f"unknown kind {kind!r}")
    except ValueError as e:
        raise _Bad("background", str(e)) from None

    eps = _num(d, "epsilon", "") if "epsilon" in d else None
    nb = _block(d, "nonlinearity")
    nl_eps = _num(nb, "epsilon", "nonlinearity") if "epsilon" in nb else None
    if eps is None and nl_eps is None:
        raise _Missing("epsilon")
    if eps is not None and nl_eps is not None and eps != nl_eps:
        raise _Bad("nonlinearity.epsilon", f"{nl_eps} disagrees with top-level epsilon {eps}")
    eps = eps if eps is not None else nl_eps
    try:
        nl = Nonlinearity(nb.get("kind", "focusing"), _num(nb, "p", "nonlinearity", default=3.0), eps)
    except ValueError as e:
        raise _Bad("nonlinearity", str(e)) from None

    gb = _block(d, "grid")
    gn = _num(gb, "n", "grid", default=n, kind=int)
    if gn != n:
        raise _Bad("grid.n", f"grid dimension {gn} differs from background dimension {n}")
    try:
        grid = Grid(gb.get("geometry", "radial" if n >= 2 else "line"), gn,
                    _num(gb, "radius", "grid"), _num(gb, "points", "grid", kind=int))
    except ValueError as e:
        raise _Bad("grid", str(e)) from None

    ib = _block(d, "initial")
    profile = ib.get("profile", "bump")
    if profile not in PROFILES:
        raise _Bad("initial.profile", f"unknown profile {profile!r}; expected one of {PROFILES}")
    if profile == "mode" and grid.geometry != "line":
        raise _Bad("initial.profile", "standing-mode data need the line geometry")
    init = InitialData(_num(ib, "A", "initial"), _num(ib, "B", "initial"),
                       _num(ib, "rho", "initial", default=1.0), profile,
                       _num(ib, "mode", "initial", default=1, kind=int))
    if not init.rho > 0:
        raise _Bad("initial.rho", "must be positive")

    sb = _block(d, "solver")
    try:
        solver = SolverConfig(
            t_end=_num(sb, "t_end", "solver"),
            cfl=_num(sb, "cfl", "solver", default=0.5),
            dt_floor=_num(sb, "dt_floor", "solver", default=1e-12),
            blowup_linf=_num(sb, "blowup_linf", "solver", default=1e8),
            blowup_l2=_num(sb, "blowup_l2", "solver", default=1e10),
            record_every=_num(sb, "record_every", "solver", default=1, kind=int),
            amp_step=_num(sb, "amp_step", "solver", default=0.1),
        )
    except ValueError as e:
        raise _Bad("solver", str(e)) from None

    t0 = d.get("t0", "auto")
    if t0 != "auto":
        t0 = _num(d, "t0", "")
        if t0 < 0:
            raise _Bad("t0", "must be nonnegative or 'auto'")
    cfg = RunConfig(bg, nl, grid, init, solver, eps, t0,
                    output_dir=str(d.get("output_dir", "runs")),
                    run_id=str(d.get("run_id", "run")),
                    allow_truncation=bool(d.get("allow_truncation", False)),
                    override_audit=bool(d.get("override_audit", False)))
    if not solver.t_end >= _resolve_or_bad(cfg):
        raise _Bad("solver.t_end", f"t_end={solver.t_end} precedes t0={cfg.resolved_t0}")
    return cfg


def _resolve_or_bad(cfg):
    try:
        return cfg.resolved_t0
    except ValueError as e:
        raise _Bad("t0", str(e)) from None


def loads(text, source="<config>"):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, e.lineno, source) from None
    return from_dict(d, text, source)


def load(path):
    with open(path) as fh:
        text = fh.read()
    return loads(text, source=str(path))


def set_path(tree, path, value):
    """Return a copy of ``tree`` with dotted ``path`` set to ``value``."""
    out = copy.deepcopy(tree)
    node = out
    keys = path.split(".")
    for k in keys[:-1]:
        if k not in node or not isinstance(node[k], dict):
            raise KeyError(f"no block {k!r} along override path {path!r}")
        node = node[k]
    if keys[-1] in node and isinstance(node[keys[-1]], int) and not isinstance(node[keys[-1]], bool):
        if float(value) == int(value):
            value = int(value)
    node[keys[-1]] = value
    return out


def parse_vary(spec):
    """``key=lo:hi:steps`` into ``(key, values)`` on an inclusive uniform grid."""
    try:
        key, rng = spec.split("=", 1)
        lo, hi, steps = rng.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise ValueError(f"malformed --vary {spec!r}; expected key=lo:hi:steps") from None
    if steps < 1:
        raise ValueError(f"--vary {spec!r} needs at least one step")
    if steps == 1:
        return key, [lo]
    # weighted endpoints keep grid values like 0.01 exact more often than lo + i*step
    vals = [(lo * (steps - 1 - i) + hi * i) / (steps - 1) for i in range(steps)]
    return key, [v if not math.isclose(v, round(v), abs_tol=1e-12) else float(round(v)) for v in vals]
