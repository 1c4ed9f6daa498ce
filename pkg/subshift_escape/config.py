"""
Runtime Configuration

Settings are read once from the process environment (after loading a .env
file, if present) into a frozen Settings object. Every knob has a default,
so the library runs without any environment at all.

Environment variables:
    SUBSHIFT_ESCAPE_ENUMERATION_CAP   canonical enumeration size cap
    SUBSHIFT_ESCAPE_BRUTE_FORCE_CAP   brute-force word count cap (q**n)
    SUBSHIFT_ESCAPE_ROOT_TOL          Perron root bracket width
    SUBSHIFT_ESCAPE_ENGINE_TOL        allowed gap between the two root engines
    SUBSHIFT_ESCAPE_TABLE_TOL         table reproduction tolerance
    SUBSHIFT_ESCAPE_MAX_ITERATIONS    power iteration cap
    SUBSHIFT_ESCAPE_LOG_LEVEL         root log level for CLI entry points
"""

import logging
from dataclasses import dataclass, replace
from functools import lru_cache

from dotenv import load_dotenv

from shared.utils import read_env_float, read_env_int, read_env_str
from subshift_escape.errors import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "SUBSHIFT_ESCAPE_"

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    """Numeric limits and tolerances shared by every engine."""

    enumeration_cap: int = 10_000_000
    brute_force_cap: int = 10_000_000
    root_tol: float = 1e-12
    engine_tol: float = 1e-9
    table_tol: float = 5e-4
    max_iterations: int = 100_000
    log_level: str = "INFO"

    def __post_init__(self):
        for name in ("enumeration_cap", "brute_force_cap", "max_iterations"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("root_tol", "engine_tol", "table_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigurationError(f"{name} must lie in (0, 1), got {value}")
        if self.log_level.upper() not in _LOG_LEVELS:
            raise ConfigurationError(
                f"log_level must be one of {', '.join(_LOG_LEVELS)}, got {self.log_level!r}"
            )

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from SUBSHIFT_ESCAPE_* environment variables.

        Returns:
            Settings: Validated settings

        Raises:
            ConfigurationError: If a variable is malformed or out of range
        """
        defaults = cls()
        try:
            return cls(
                enumeration_cap=read_env_int(f"{ENV_PREFIX}ENUMERATION_CAP", defaults.enumeration_cap),
                brute_force_cap=read_env_int(f"{ENV_PREFIX}BRUTE_FORCE_CAP", defaults.brute_force_cap),
                root_tol=read_env_float(f"{ENV_PREFIX}ROOT_TOL", defaults.root_tol),
                engine_tol=read_env_float(f"{ENV_PREFIX}ENGINE_TOL", defaults.engine_tol),
                table_tol=read_env_float(f"{ENV_PREFIX}TABLE_TOL", defaults.table_tol),
                max_iterations=read_env_int(f"{ENV_PREFIX}MAX_ITERATIONS", defaults.max_iterations),
                log_level=read_env_str(f"{ENV_PREFIX}LOG_LEVEL", defaults.log_level).upper(),
            )
        except ValueError as e:
            raise ConfigurationError(str(e)) from e

    def with_overrides(self, **changes) -> "Settings":
        """Return a copy with the non-None keyword values replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_active: Settings | None = None


def get_settings() -> Settings:
    """Process-wide settings: installed ones if any, else the environment."""
    if _active is not None:
        return _active
    return _settings_from_environment()


def use_settings(settings: Settings | None) -> None:
    """Install settings for the rest of the process; None goes back to the environment."""
    global _active
    _active = settings
    if settings is not None:
        logger.info(f"[Config] Using settings: {settings}")


@lru_cache(maxsize=1)
def _settings_from_environment() -> Settings:
    load_dotenv()
    settings = Settings.from_env()
    logger.debug(f"[Config] Loaded settings: {settings}")
    return settings


def configure_logging(level: str | None = None, debug: bool = False) -> None:
    """
    Configure root logging for CLI entry points.

    Library modules only create loggers; handlers are installed here.
    """
    if debug:
        level = "DEBUG"
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(getattr(logging, level, logging.INFO))
