"""Bundled scenarios.

``representative`` uses real-world system limits with synthetic hydrology
and economics (see the file header).
``toy-linear`` and ``toy-kinked`` are small analytic instances.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .scenario import Scenario

BUNDLED = {
    "representative": "representative.yaml",
    "toy-linear": "toy_linear.yaml",
    "toy-kinked": "toy_kinked.yaml",
}


def bundled_path(name: str) -> Path:
    try:
        filename = BUNDLED[name]
    except KeyError:
        raise KeyError(f"no bundled scenario {name!r}; choose from {sorted(BUNDLED)}") from None
    return Path(str(resources.files("irrigopt") / "data" / filename))


def load_bundled(name: str) -> Scenario:
    from .formats import load_scenario
    return load_scenario(bundled_path(name))


def representative_scenario() -> Scenario:
    return load_bundled("representative")


def toy_linear_scenario() -> Scenario:
    return load_bundled("toy-linear")


def toy_kinked_scenario() -> Scenario:
    return load_bundled("toy-kinked")
