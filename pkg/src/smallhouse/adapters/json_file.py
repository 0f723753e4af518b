"""Read the published tables from a JSON file."""

import logging
import os
from pathlib import Path
from typing import Optional

from pydantic import ValidationError  # noqa: E0611

from ..exceptions import FixtureError
from ..model.fixtures import TableFixtures
from .abstract import AbstractFixtureSource

log = logging.getLogger(__name__)

PACKAGED_TABLES = Path(__file__).parent.parent / "data" / "tables.json"
SUPPORTED_SCHEMA = 1


class JsonFixtureSource(AbstractFixtureSource):
    """Load the tables from a JSON file, by default the one shipped with the package."""

    def __init__(self, path: Optional[str] = None) -> None:
        """Initialize the source attributes.

        Args:
            path: JSON file to read, None selects the packaged tables.
        """
        self.path = PACKAGED_TABLES if path is None else Path(os.path.expanduser(path))

    def load(self) -> TableFixtures:
        """Read and validate the tables.

        Raises:
            FixtureError: if the file is missing, malformed or of another schema.
        """
        log.debug(f"Loading the tables from {self.path}")
        try:
            fixtures = TableFixtures.parse_file(self.path)
        except FileNotFoundError as error:
            raise FixtureError(f"There is no fixture file at {self.path}") from error
        except (ValidationError, ValueError) as error:
            raise FixtureError(
                f"The fixture file {self.path} is invalid: {error}"
            ) from error
        if fixtures.schema_version != SUPPORTED_SCHEMA:
            raise FixtureError(
                f"Unsupported schema version {fixtures.schema_version} in {self.path}"
            )
        return fixtures
