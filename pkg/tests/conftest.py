import functools
import sys

import pytest

from flrw_blowup.config import from_dict, set_path
from flrw_blowup.harness import run_config
from flrw_blowup.scenarios import scenario_tree


@functools.lru_cache(maxsize=None)
def _run(name, overrides):
    tree = scenario_tree(name)
    for key, val in overrides:
        tree = set_path(tree, key, val)
    return run_config(from_dict(tree), write=False)


def scenario_run(name, **overrides):
    """Cached in-memory run of a built-in scenario; overrides use ``__`` for dots."""
    items = tuple(sorted((k.replace("__", "."), v) for k, v in overrides.items()))
    return _run(name, items)


@pytest.fixture(scope="session")
def run_scenario():
    return scenario_run


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.LINES):
        terminalreporter.write_line(acc.LINES[n])
