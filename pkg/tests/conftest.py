"""Shared pytest fixtures for s2rkit tests."""
import pytest

from s2rkit import PackingSettings
from s2rkit.packing import optimize_multiply_transitive, optimize_simply_transitive


@pytest.fixture
def packing_settings() -> PackingSettings:
    return PackingSettings()


@pytest.fixture(scope="session")
def simply_transitive_q2():
    return optimize_simply_transitive(2, PackingSettings())


@pytest.fixture(scope="session")
def multiply_transitive_q2():
    return optimize_multiply_transitive(2, PackingSettings())
