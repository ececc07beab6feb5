"""Bundled example graphs (.dag files shipped with the package)."""

from __future__ import annotations

from importlib import resources

from .dsl import parse
from .graph import Dag

FIXTURE_NAMES = (
    "fig1a",
    "fig1b",
    "fig1c",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig3",
    "fig4a",
    "fig5b",
    "fig5c",
    "fig5d",
)


def fixture_source(name: str) -> str:
    """Return the DSL text of a bundled fixture by name (e.g. 'fig3')."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {FIXTURE_NAMES}")
    return (
        resources.files("detdag") / "fixtures" / f"{name}.dag"
    ).read_text(encoding="utf-8")


def load_fixture(name: str) -> Dag:
    """Parse a bundled fixture into a Dag."""
    return parse(fixture_source(name))
