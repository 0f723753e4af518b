"""Define the fake adapters used for testing."""

from typing import Optional

from ..model.fixtures import TableFixtures
from .abstract import AbstractFixtureSource
from .json_file import JsonFixtureSource


class FakeFixtureSource(AbstractFixtureSource):
    """Serve the tables from memory so tests can tamper with them."""

    def __init__(self, fixtures: Optional[TableFixtures] = None) -> None:
        """Initialize the source attributes.

        Args:
            fixtures: tables to serve, a copy of the packaged ones by default.
        """
        if fixtures is None:
            fixtures = JsonFixtureSource().load()
        self.fixtures = fixtures
        self.loads = 0

    def load(self) -> TableFixtures:
        """Return the tables held in memory."""
        self.loads += 1
        return self.fixtures
