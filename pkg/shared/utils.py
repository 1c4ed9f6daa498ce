"""
Shared Utilities

Console helpers for run_all.py and typed environment readers for the
settings layer.
"""

import os
from datetime import datetime, timezone
from typing import Optional


def get_timestamp() -> str:
    """UTC timestamp stamped on reports, e.g. "2025-11-12T14:30:00Z"."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def print_header(title: str, width: int = 80):
    """Print a title between two rules of '='."""
    rule = "=" * width
    print(f"\n{rule}\n{title.center(width)}\n{rule}\n")


def print_section(title: str, width: int = 80):
    print(f"\n{title}\n{'-' * width}")


def read_env_str(var_name: str, default: Optional[str] = None) -> Optional[str]:
    """
    Read an environment variable, treating blank values as unset.

    Args:
        var_name: Name of environment variable
        default: Value returned when the variable is unset or blank
    """
    value = os.getenv(var_name)
    if value is None or not value.strip():
        return default
    return value.strip()


def read_env_int(var_name: str, default: int) -> int:
    """
    Read an integer environment variable.

    Underscores are accepted as digit separators ("10_000_000").

    Raises:
        ValueError: If the variable is set but is not an integer
    """
    value = read_env_str(var_name)
    if value is None:
        return default
    try:
        return int(value.replace("_", ""))
    except ValueError:
        raise ValueError(f"{var_name} must be an integer, got {value!r}") from None


def read_env_float(var_name: str, default: float) -> float:
    """
    Read a float environment variable.

    Raises:
        ValueError: If the variable is set but is not a number
    """
    value = read_env_str(var_name)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"{var_name} must be a number, got {value!r}") from None


def format_duration(seconds: float) -> str:
    """"840 ms" below one second, "12.3 s" otherwise."""
    if seconds < 1.0:
        return f"{seconds * 1000:.0f} ms"
    return f"{seconds:.1f} s"


class ColoredOutput:
    """Pass/fail lines for the run_all summary."""

    RESET = '\033[0m'
    RED = '\033[91m'
    GREEN = '\033[92m'

    @staticmethod
    def success(message: str) -> str:
        return f"{ColoredOutput.GREEN}✓ {message}{ColoredOutput.RESET}"

    @staticmethod
    def error(message: str) -> str:
        return f"{ColoredOutput.RED}✗ {message}{ColoredOutput.RESET}"
