"""
Suite Executor

Runs verification suites from SuiteRequest objects, either built by the CLI
or loaded from a JSON experiments config file.

Config file layout:
    {
      "settings": {"root_tol": 1e-12, "enumeration_cap": 10000000},
      "output": {"directory": "reports", "format": "json"},
      "suites": [
        {"suite": "min-period", "params": {"p": 3, "q": 5, "mode": "exhaustive"}},
        {"suite": "oracles", "params": {"samples": 200, "seed": 7}}
      ]
    }
"""

import inspect
import json
import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from pathlib import Path
from typing import Any

try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

from subshift_escape.config import Settings, get_settings, use_settings
from subshift_escape.errors import ConfigurationError, EscapeRateError, SuiteError
from subshift_escape.experiments import suites
from subshift_escape.experiments.reports import VerificationReport

logger = logging.getLogger(__name__)

SUITES: dict[str, Callable[..., VerificationReport]] = {
    "p2": suites.verify_p2_theorem,
    "r-order": suites.verify_r_order,
    "min-period": suites.verify_min_period,
    "counterexamples": suites.run_counterexamples,
    "lemma2": suites.verify_lemma2_bracket,
    "lemma1": suites.verify_lemma1_uniqueness,
    "oracles": suites.verify_oracles,
    "extremal": suites.verify_extremal_words,
    "gen-period": suites.verify_gen_period,
    "gen-r-order": suites.verify_gen_r_order,
    "subshift-r-order": suites.verify_subshift_r_order,
}


@dataclass(frozen=True)
class SuiteRequest:
    """
    One suite run.

    Attributes:
        suite: Name from SUITES
        params: Keyword arguments for the suite function
    """

    suite: str
    params: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"suite": self.suite, "params": self.params}


@dataclass
class ExperimentConfig:
    """A parsed experiments config file."""

    requests: list[SuiteRequest]
    settings: Settings | None = None
    output_directory: Path | None = None
    output_format: str = "json"


class Executor(ABC):
    """Something that turns a SuiteRequest into a VerificationReport."""

    @abstractmethod
    def execute(self, request: SuiteRequest) -> VerificationReport:
        ...


class SuiteExecutor(Executor):
    """
    Validates requests against the suite registry and runs them.

    Domain errors (HypothesisViolation, CapExceeded, ...) propagate as they
    are; anything else is logged and wrapped in SuiteError.
    """

    def __init__(self, registry: dict[str, Callable[..., VerificationReport]] | None = None):
        self.registry = registry if registry is not None else SUITES
        logger.debug(f"[Suite Executor] {len(self.registry)} suites registered")

    @override
    def execute(self, request: SuiteRequest) -> VerificationReport:
        """
        Run one suite.

        Args:
            request: Suite name and parameters

        Returns:
            VerificationReport: The suite's report

        Raises:
            ConfigurationError: If the request names an unknown suite or parameter
            EscapeRateError: Domain errors raised by the suite
            SuiteError: If the suite crashes unexpectedly
        """
        try:
            # Step 1: Validate request
            error = self._validate_request(request)
            if error:
                logger.error(f"[Suite Executor] Invalid request: {error}")
                raise ConfigurationError(error)

            # Step 2: Run the suite
            logger.info(f"[Suite Executor] Running {request.suite} with {request.params}")
            report = self.registry[request.suite](**request.params)

            # Step 3: Summarise
            status = "passed" if report.passed else f"{len(report.failures)} failures"
            logger.info(f"[Suite Executor] {request.suite}: {report.instances_tested} instances, {status}")
            return report

        except EscapeRateError:
            raise
        except Exception as e:
            logger.error(f"[Suite Executor] Error during {request.suite}: {e}", exc_info=True)
            raise SuiteError(f"suite {request.suite} crashed: {e}") from e

    def _validate_request(self, request: SuiteRequest) -> str | None:
        """
        Check the suite name and parameter names.

        Returns:
            str | None: Error message, or None if the request is valid
        """
        if request.suite not in self.registry:
            return f"unknown suite {request.suite!r}; choose from {', '.join(sorted(self.registry))}"
        accepted = inspect.signature(self.registry[request.suite]).parameters
        unknown = sorted(set(request.params) - set(accepted))
        if unknown:
            return f"suite {request.suite} does not take {', '.join(unknown)}"
        return None


def _run_request(request: SuiteRequest, settings: Settings) -> VerificationReport:
    """Worker entry point; installs the parent's settings whatever the start method."""
    use_settings(settings)
    return SuiteExecutor().execute(request)


def execute_many(
    requests: Sequence[SuiteRequest],
    jobs: int = 1,
    settings: Settings | None = None,
) -> list[VerificationReport]:
    """
    Run several requests, in worker processes when jobs > 1.

    Args:
        requests: Suites to run
        jobs: Worker processes (1 runs in-process)
        settings: Settings to install before running; workers always receive
            the active settings explicitly

    Returns:
        list[VerificationReport]: One report per request, in request order
    """
    if settings is not None:
        use_settings(settings)
    active = get_settings()
    if jobs > 1 and len(requests) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_request, requests, repeat(active)))
    executor = SuiteExecutor()
    return [executor.execute(request) for request in requests]


def load_suite_config(path: str | Path) -> ExperimentConfig:
    """
    Parse an experiments config file.

    Raises:
        ConfigurationError: If the file is missing, not JSON, or malformed
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigurationError(f"config file {path} not found") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict) or not isinstance(raw.get("suites"), list):
        raise ConfigurationError(f"config file {path} needs a \"suites\" list")

    requests = []
    for entry in raw["suites"]:
        if not isinstance(entry, dict) or "suite" not in entry:
            raise ConfigurationError(f"suite entry {entry!r} needs a \"suite\" name")
        requests.append(SuiteRequest(entry["suite"], dict(entry.get("params", {}))))

    settings = None
    if "settings" in raw:
        try:
            settings = get_settings().with_overrides(**raw["settings"])
        except TypeError as e:
            raise ConfigurationError(f"unknown setting in {path}: {e}") from e

    output = raw.get("output", {})
    output_format = output.get("format", "json")
    if output_format not in ("json", "csv"):
        raise ConfigurationError(f"output format must be json or csv, got {output_format!r}")
    directory = Path(output["directory"]) if "directory" in output else None
    logger.info(f"[Suite Executor] Loaded {len(requests)} suite requests from {path}")
    return ExperimentConfig(requests, settings, directory, output_format)
