"""Shared fixtures and helpers for the test suite."""

import json
import os
from pathlib import Path

import pytest

from subshift_escape.config import Settings, _settings_from_environment, use_settings
from subshift_escape.escape import HoleSpec
from subshift_escape.words import WordCollection, WordMode, parse_collection

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "subshift_escape" / "schemas"


def abstract(text: str, q: int = 36) -> WordCollection:
    """Collection from abstract letters, one shared letter map."""
    return parse_collection(text, q, WordMode.ABSTRACT)


def digits(text: str, q: int) -> WordCollection:
    return parse_collection(text, q, WordMode.DIGIT)


def hole(text: str, q: int, base: str | None = None) -> HoleSpec:
    """Hole spec from abstract text; the base letters are mapped first."""
    mapping: dict[str, int] = {}
    base_collection = parse_collection(base, q, WordMode.ABSTRACT, mapping) if base else None
    return HoleSpec(parse_collection(text, q, WordMode.ABSTRACT, mapping), q, base_collection)


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text(encoding="utf-8"))


@pytest.fixture(autouse=True)
def default_settings(monkeypatch):
    """Every test runs on the default settings, whatever the environment says."""
    for name in list(os.environ):
        if name.startswith("SUBSHIFT_ESCAPE_"):
            monkeypatch.delenv(name)
    use_settings(Settings())
    yield
    use_settings(None)
    _settings_from_environment.cache_clear()
