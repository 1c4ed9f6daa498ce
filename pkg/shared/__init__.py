"""
Shared Utilities Package

Console and environment helpers used across the project.
"""

__version__ = "1.0.0"

from .utils import (
    ColoredOutput,
    format_duration,
    get_timestamp,
    print_header,
    print_section,
    read_env_float,
    read_env_int,
    read_env_str,
)

__all__ = [
    "ColoredOutput",
    "format_duration",
    "get_timestamp",
    "print_header",
    "print_section",
    "read_env_float",
    "read_env_int",
    "read_env_str",
]
