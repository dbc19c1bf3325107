"""Test fixtures and configuration for relhilb engine tests."""
from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

GOLDEN_DIR = Path(__file__).parent / "golden"


def pytest_configure(config):
    """Set up environment variables before any test imports happen."""
    os.environ["ENVIRONMENT"] = "test"
    os.environ["LOG_LEVEL"] = "WARNING"
    os.environ["RELHILB_MAX_N"] = "10"
    os.environ["RELHILB_EXPANSION"] = "binomial"
    os.environ["RELHILB_TRUNCATION_PADDING"] = "2"
    os.environ["RELHILB_FORMAT"] = "table"
    os.environ.pop("RELHILB_STEP_LIMIT", None)

    # Clear any cached settings
    try:
        from app.core.config import get_settings
        get_settings.cache_clear()
    except ImportError:
        pass


from app.core.config import get_settings
from app.services.goettsche import plane_relative_series
from app.services.notation import parse_cycle, parse_expression


@pytest.fixture
def fresh_settings():
    """Clear the settings cache around a test that edits the environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def plane_series():
    """Plane relative to a line, to q^6."""
    return plane_relative_series(6)


@pytest.fixture
def cycle():
    return parse_cycle


@pytest.fixture
def expr():
    return parse_expression


@pytest.fixture
def golden():
    def load(name: str):
        return json.loads((GOLDEN_DIR / name).read_text())

    return load
