"""Bundled generator sets."""

from importlib import resources

from .io import parse_group

__all__ = ["load_fixture", "figure_eight", "whitehead", "fixture_path"]


def fixture_path(name):
    return resources.files("hypwalls") / "data" / f"{name}.json"


def load_fixture(name):
    return parse_group(fixture_path(name).read_text(encoding="utf-8"))


def figure_eight():
    return load_fixture("figure_eight")


def whitehead():
    return load_fixture("whitehead")
