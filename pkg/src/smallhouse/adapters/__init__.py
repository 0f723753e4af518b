"""Store the exposed adapters."""

from typing import Dict, Type

from .abstract import AbstractFixtureSource
from .fake import FakeFixtureSource
from .json_file import PACKAGED_TABLES, JsonFixtureSource

AVAILABLE_SOURCES: Dict[str, Type[AbstractFixtureSource]] = {
    "json": JsonFixtureSource,
    "fake": FakeFixtureSource,
}


__all__ = [
    "AVAILABLE_SOURCES",
    "AbstractFixtureSource",
    "FakeFixtureSource",
    "JsonFixtureSource",
    "PACKAGED_TABLES",
]
