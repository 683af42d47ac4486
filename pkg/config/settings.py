"""Centralised settings layering for the project.

Values resolve in this order: CLI flag, ``LANE_``-prefixed environment
variable, flat ``KEY=VALUE`` config file, built-in default.
"""

from __future__ import annotations

import os
from collections.abc import Callable, Mapping
from pathlib import Path
from typing import TypeVar

from dotenv import dotenv_values, load_dotenv

from models.errors import InvalidConfigError

# ---------------------------------------------------------------------------
# Load environment variables from `.env`
# ---------------------------------------------------------------------------
load_dotenv()

# ---------------------------------------------------------------------------
# Environment variables
# ---------------------------------------------------------------------------
ENV_PREFIX = "LANE_"

T = TypeVar("T")

_TRUE_VALUES = {"1", "true", "yes", "on"}
_FALSE_VALUES = {"0", "false", "no", "off"}


def parse_bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in _TRUE_VALUES:
        return True
    if value in _FALSE_VALUES:
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def parse_float_list(raw: str) -> tuple[float, ...]:
    """Parse ``"0.5, 0.75"`` into a sorted, de-duplicated tuple."""
    return tuple(sorted({float(part) for part in raw.split(",") if part.strip()}))


def load_config_file(path: Path | None) -> dict[str, str]:
    """Read a flat ``KEY=VALUE`` file; keys are upper-cased and may omit the prefix."""
    if path is None:
        return {}
    if not path.is_file():
        raise InvalidConfigError(f"Config file not found: {path}")
    values = dotenv_values(path)
    normalized: dict[str, str] = {}
    for key, value in values.items():
        if value is None:
            continue
        name = key.upper()
        normalized[name.removeprefix(ENV_PREFIX)] = value
    return normalized


class SettingsResolver:
    """Resolve one setting at a time across CLI, environment, file and default."""

    def __init__(self, file_values: Mapping[str, str] | None = None, environ: Mapping[str, str] | None = None):
        self.file_values = dict(file_values or {})
        self.environ = os.environ if environ is None else environ

    def get(self, key: str, cli_value: T | None, default: T, cast: Callable[[str], T]) -> T:
        """Return the effective value of ``key``.

        Args:
            key: Setting name without prefix, e.g. ``"LAG"``
            cli_value: Value given on the command line, or None
            default: Built-in default
            cast: Parser applied to string values from env or file

        Returns:
            The highest-precedence value available

        Raises:
            InvalidConfigError: If an env or file value does not parse
        """
        if cli_value is not None:
            return cli_value
        env_key = f"{ENV_PREFIX}{key}"
        for source, raw in ((env_key, self.environ.get(env_key)), (key, self.file_values.get(key))):
            if raw is None or raw == "":
                continue
            try:
                return cast(raw)
            except ValueError as exc:
                raise InvalidConfigError(f"Invalid value for {source}: {raw!r}") from exc
        return default
