"""Define the interface for the fixture adapters."""

import abc

from ..model.fixtures import TableFixtures


class AbstractFixtureSource(abc.ABC):
    """Define the interface of the sources of the published tables."""

    @abc.abstractmethod
    def load(self) -> TableFixtures:
        """Read the published tables.

        Returns:
            The tables to verify.

        Raises:
            FixtureError: if the tables can't be read or don't validate.
        """
        raise NotImplementedError
