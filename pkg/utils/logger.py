"""Project-wide logging configuration.

Importing this module will configure root logging handlers/formatters.
"""

from __future__ import annotations

import logging
import os
import sys

_LOG_FORMAT = "%(levelname)s | %(message)s"

logging.basicConfig(
    level=os.getenv("LANE_LOG_LEVEL", "INFO").upper(),
    format=_LOG_FORMAT,
    handlers=[logging.StreamHandler(sys.stdout)],
)

logger = logging.getLogger("lane")
