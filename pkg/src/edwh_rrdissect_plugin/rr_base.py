#!/usr/bin/env python3
"""
Rogers-Ramanujan Dissection Base Module - Shared Functionality
==============================================================

Shared functionality for the series engine, the identity verifier and the
asymptotic checks. Contains the exception hierarchy, configuration loading,
run configuration and standard error handling.

Author: Based on series.py and identities.py
Date: October 2026
"""

import logging
import os
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from dotenv import dotenv_values

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_PREC = 50
DEFAULT_S_MAX = 5
DEFAULT_SCHEDULE = (0.90, 0.95, 0.98)
DEFAULT_TOL = 0.1
OUTPUT_FORMATS = ("text", "structured")


def default_jobs():
    """Worker processes when neither the config file nor a flag sets them: the available CPUs"""
    return os.cpu_count() or 1


class RRDissectError(Exception):
    """Base class for every error raised by this package"""


class UsageError(RRDissectError, ValueError):
    """The caller asked for something that is not defined (unknown id, mismatched denominators, ...)"""


class DomainError(RRDissectError, ArithmeticError):
    """The request is well-formed but mathematically invalid (a = 0, non-unit inversion, ...)"""


class ConfigManager:
    """Centralized configuration management, file based only"""

    @staticmethod
    def get_config_path():
        """Get the standard config file path"""
        return Path.home() / ".config/edwh/edwh_rrdissect_plugin.env"

    @staticmethod
    def _sanitize_config_value(key, value):
        """Sanitize configuration values, returning None for anything unusable"""
        if value is None or not str(value).strip():
            return None

        value = str(value).strip()
        try:
            if key in ("prec", "s_max", "jobs"):
                number = int(value)
                if number < (0 if key == "prec" else 1):
                    raise ValueError(number)
                return number
            if key == "tol":
                number = float(value)
                if not number > 0:
                    raise ValueError(number)
                return number
            if key == "schedule":
                return parse_schedule(value)
            if key == "format":
                if value not in OUTPUT_FORMATS:
                    raise ValueError(value)
                return value
        except (ValueError, DomainError):
            logger.warning(f"Ignoring invalid configuration value for {key}: {value!r}")
            return None

        return value

    @staticmethod
    def load_config(path=None, verbose=False):
        """
        Load configuration values from the dotenv file.

        Only the file is read; the process environment is never consulted so
        that a run is reproducible from its flags and this file alone.
        Missing file means an empty configuration.
        """
        config_path = Path(path) if path else ConfigManager.get_config_path()

        if not config_path.exists():
            logger.debug(f"No configuration file at {config_path}")
            return {}

        if verbose:
            print(f"📁 Loading configuration from: {config_path.absolute()}")

        raw = dotenv_values(config_path)
        raw_config = {
            "prec": raw.get("RRD_PREC"),
            "s_max": raw.get("RRD_S_MAX"),
            "schedule": raw.get("RRD_SCHEDULE"),
            "tol": raw.get("RRD_TOL"),
            "jobs": raw.get("RRD_JOBS"),
            "format": raw.get("RRD_FORMAT"),
        }

        config = {}
        for key, value in raw_config.items():
            sanitized = ConfigManager._sanitize_config_value(key, value)
            if sanitized is not None:
                config[key] = sanitized
        return config


def parse_schedule(text):
    """Parse '0.9,0.95,0.98' into a validated tuple of floats"""
    if isinstance(text, (tuple, list)):
        values = tuple(float(v) for v in text)
    else:
        parts = [p for p in re.split(r"[,\s]+", str(text).strip()) if p]
        try:
            values = tuple(float(p) for p in parts)
        except ValueError as e:
            raise UsageError(f"Invalid q schedule: {text!r}") from e
    validate_schedule(values)
    return values


def validate_schedule(values):
    if not values:
        raise UsageError("q schedule must not be empty")
    for q in values:
        if not 0.0 < q < 1.0:
            raise DomainError(f"q schedule values must lie in (0, 1), got {q}")
    for left, right in zip(values, values[1:]):
        if not left < right:
            raise UsageError(f"q schedule must be strictly increasing, got {values}")


def parse_s_range(text):
    """Parse '3', '1..5' or '1,2,4' into a tuple of positive integers"""
    if text is None:
        return None
    if isinstance(text, int):
        values = (text,)
    else:
        text = str(text).strip()
        match = re.fullmatch(r"(\d+)\s*\.\.\s*(\d+)", text)
        try:
            if match:
                lo, hi = int(match.group(1)), int(match.group(2))
                values = tuple(range(lo, hi + 1))
            else:
                values = tuple(int(p) for p in text.split(",") if p.strip())
        except ValueError as e:
            raise UsageError(f"Invalid s range: {text!r}") from e
    if not values or any(v < 1 for v in values):
        raise UsageError(f"s values must be positive integers, got {text!r}")
    return values


@dataclass(frozen=True)
class RunConfig:
    """Everything one batch invocation needs; defaults < config file < flags"""

    command: str
    identity_filter: tuple = ()
    s_values: tuple = None
    prec: int = DEFAULT_PREC
    s_max: int = DEFAULT_S_MAX
    schedule: tuple = DEFAULT_SCHEDULE
    tol: float = DEFAULT_TOL
    jobs: int = 1
    output_format: str = "text"
    output_path: str = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.prec < 0:
            raise UsageError(f"Precision must be non-negative, got {self.prec}")
        if self.jobs < 1:
            raise UsageError(f"jobs must be at least 1, got {self.jobs}")
        if not self.tol > 0:
            raise UsageError(f"Tolerance must be positive, got {self.tol}")
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(f"Unknown output format {self.output_format!r}, use one of {OUTPUT_FORMATS}")
        validate_schedule(self.schedule)

    @classmethod
    def build(cls, command, config_path=None, verbose=False, **flags):
        """Merge defaults, the configuration file and explicit flags (None means 'not given')"""
        file_config = ConfigManager.load_config(config_path, verbose=verbose)
        values = {
            "prec": file_config.get("prec", DEFAULT_PREC),
            "s_max": file_config.get("s_max", DEFAULT_S_MAX),
            "schedule": file_config.get("schedule", DEFAULT_SCHEDULE),
            "tol": file_config.get("tol", DEFAULT_TOL),
            "jobs": file_config.get("jobs", default_jobs()),
            "output_format": file_config.get("format", "text"),
        }
        for key, value in flags.items():
            if value is not None:
                values[key] = value
        return cls(command=command, **values)

    def with_overrides(self, **changes):
        return replace(self, **changes)


class ErrorHandler:
    """Standardized error handling, mapping failures onto the stable exit codes"""

    @staticmethod
    def exit_code_for(error):
        if isinstance(error, (ValueError, DomainError)):
            return EXIT_USAGE
        return EXIT_FAIL

    @staticmethod
    def handle_task_error(operation, error, verbose=False):
        """Standard error handling for task operations; returns the exit code"""
        print(f"❌ Error in {operation}: {error}")
        if verbose:
            import traceback

            print(f"   Traceback: {traceback.format_exc()}")
        code = ErrorHandler.exit_code_for(error)
        logger.debug(f"{operation} failed with exit code {code}: {error}")
        return code
