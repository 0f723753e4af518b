"""Store the classes and fixtures used throughout the tests."""

import os

import pytest

from smallhouse.adapters import FakeFixtureSource, JsonFixtureSource
from smallhouse.config import Config
from smallhouse.model.fixtures import TableFixtures
from smallhouse.services import table_one_keys


@pytest.fixture(name="config")
def fixture_config() -> Config:
    """Configure the Config object for the tests."""
    os.environ["SMALLHOUSE_CONFIG_PATH"] = "tests/assets/config.yaml"
    config = Config()
    config.load("tests/assets/config.yaml")
    return config


# Adapter Fixtures


@pytest.fixture(name="fixtures")
def fixtures_() -> TableFixtures:
    """Load the packaged tables."""
    return JsonFixtureSource().load()


@pytest.fixture(name="source")
def source_(fixtures: TableFixtures) -> FakeFixtureSource:
    """Configure a FakeFixtureSource instance."""
    return FakeFixtureSource(fixtures)


@pytest.fixture(name="known")
def known_(fixtures: TableFixtures) -> dict:
    """Map the hashes of the exceptional classes to their table position."""
    return table_one_keys(fixtures)
