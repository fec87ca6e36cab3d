"""Settings for the lab, the CLI and the experiment runner.

Precedence is CLI flag > config file > environment (``.env``) > defaults. This module
covers the last two layers; callers apply file values and flags as overrides.
"""

import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import load_dotenv

from .common import ConfigError
from .utils.textformat import parse_key_values, read_lines

logger = logging.getLogger(__name__)

ENV_PREFIX = "TEAMFORM_"


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    max_rounds: int = 10**8
    p: float = 1.0
    q: float = 1.0
    workers: int = 1
    enumeration_limit: int = 2_000_000
    log_level: str = "WARNING"
    resample_limit: int = 100

    def __post_init__(self) -> None:
        for name in ("p", "q"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ConfigError(f"{name} must lie in (0, 1], got {value}", {name: value})
        if self.max_rounds < 0:
            raise ConfigError(f"max_rounds must be >= 0, got {self.max_rounds}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.enumeration_limit < 1:
            raise ConfigError(f"enumeration_limit must be >= 1, got {self.enumeration_limit}")
        if self.resample_limit < 0:
            raise ConfigError(f"resample_limit must be >= 0, got {self.resample_limit}")
        if logging.getLevelName(self.log_level.upper()) not in (10, 20, 30, 40, 50):
            raise ConfigError(f"unknown log level {self.log_level!r}")


def _from_env(name: str, cast: type) -> Optional[Any]:
    variable = ENV_PREFIX + name.upper()
    raw = os.getenv(variable)
    if raw is None or raw.strip() == "":
        return None
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigError(f"{variable} must be {cast.__name__}, got {raw!r}", {"variable": variable})


def load_settings(
    env_file: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> Settings:
    """Build Settings from ``.env``/environment, then apply non-None overrides.

    Args:
        env_file: Explicit ``.env`` path. Defaults to ``.env`` in the working directory
            when present.
        overrides: Field values that win over the environment; ``None`` values are ignored.

    Raises:
        ConfigError: A variable or override cannot be converted, or a value is out of range.
    """
    if env_file is not None:
        if not Path(env_file).exists():
            raise ConfigError(f"env file {env_file} does not exist")
        load_dotenv(env_file)
    elif Path(".env").exists():
        load_dotenv(".env")

    values: Dict[str, Any] = {}
    for spec in fields(Settings):
        cast = float if spec.type in (float, "float") else int if spec.type in (int, "int") else str
        value = _from_env(spec.name, cast)
        if value is not None:
            values[spec.name] = value

    known = {spec.name for spec in fields(Settings)}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in known:
            raise ConfigError(f"unknown setting {key!r}", {"setting": key})
        values[key] = value
    settings = replace(Settings(), **values)
    logger.debug("settings loaded seed=%d workers=%d log_level=%s", settings.seed, settings.workers, settings.log_level)
    return settings


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a ``key = value`` config file; see ``utils.textformat.parse_value`` for value syntax.

    Raises:
        ConfigError: The file does not exist.
        ParseError: A line lacks ``=`` or repeats a key.
    """
    source = Path(path)
    if not source.exists():
        raise ConfigError(f"config file {source} does not exist", {"path": str(source)})
    return parse_key_values(read_lines(source))
