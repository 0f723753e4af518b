"""Define the configuration of the main program."""

import os
from enum import Enum
from fractions import Fraction
from typing import Optional

from goodconf import GoodConf


class LogLevel(str, Enum):
    """Define the possible log levels."""

    DEBUG = "debug"
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"


class Config(GoodConf):
    """Define the configuration of the program."""

    log_level: LogLevel = LogLevel.INFO

    # Castles are displayed with enclosures of width 2^-enclosure_bits.
    enclosure_bits: int = 60

    # Exhaustive search thresholds, the exact one is read as a rational.
    float_threshold: float = 5.1
    exact_threshold: str = "5.01"

    # Worker processes of the exhaustive searches.
    jobs: int = 1

    # Largest weight the weight command searches by default.
    weight_bound: int = 4

    # Largest N of the Cassels families level check.
    family_bound: int = 200

    # Tables to verify against, the packaged ones when empty.
    fixtures_path: Optional[str] = None

    @property
    def exact_threshold_value(self) -> Fraction:
        """Return the exact threshold as a rational."""
        return Fraction(self.exact_threshold)

    class Config:
        """Define the default files to check."""

        env_prefix = "SMALLHOUSE_"
        default_files = [
            os.path.expanduser("~/.local/share/smallhouse/config.yaml"),
            "config.yaml",
        ]
