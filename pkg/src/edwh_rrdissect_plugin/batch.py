#!/usr/bin/env python3
"""
Batch Commands - Expansion, Verification And Numeric Checks
===========================================================

The command implementations behind the rrd.* tasks and the standalone
`rrdissect` program. Every command writes either human readable lines or
newline-delimited JSON records (one per report), to stdout or to a file,
and returns a CommandResult carrying the stable exit code:

    0  everything passed
    1  a verification or numeric check failed
    2  usage or domain error (unknown id, a <= 0, malformed literal, ...)

Author: Based on identities.py and asymptotics.py
Date: October 2026
"""

import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .asymptotics import (
    check_product_asymptotic,
    check_ramanujan_asymptotic,
    check_ri_chain,
    check_second_term_asymptotic,
    check_section7_chain,
)
from .identities import Perturbation, iter_verify, registry_jobs
from .partitions import PARTITION_CHECKS
from .qfunctions import NAMED_SERIES, named_series, parse_sum_spec, sum_expand
from .rr_base import EXIT_FAIL, EXIT_PASS, ErrorHandler, RRDissectError, UsageError
from .series import TMonomial, dumps, format_series, specialize, to_record

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """Exit code plus the records a command produced"""

    code: int
    records: list = field(default_factory=list)
    error: str = None

    @property
    def success(self):
        return self.code == EXIT_PASS

    def as_task_result(self):
        result = {"success": self.success, "code": self.code, "records": self.records}
        if self.error:
            result["error"] = self.error
        return result


class ReportWriter:
    """Writes text lines or JSON records to stdout or a file, flushing after each report"""

    def __init__(self, output_format="text", output_path=None):
        self.output_format = output_format
        self.output_path = Path(output_path) if output_path else None
        self._handle = None

    def __enter__(self):
        if self.output_path:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.output_path.open("w", encoding="utf-8")
        return self

    def __exit__(self, *exc_info):
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    @property
    def stream(self):
        return self._handle or sys.stdout

    def emit(self, lines, record):
        if self.output_format == "structured":
            self.stream.write(json.dumps(record, separators=(",", ":"), default=str) + "\n")
        else:
            for line in [lines] if isinstance(lines, str) else lines:
                self.stream.write(line + "\n")
        self.stream.flush()


def _run(operation, body, verbose=False):
    """Run a command body, mapping package errors onto exit code 2"""
    try:
        return body()
    except RRDissectError as e:
        code = ErrorHandler.handle_task_error(operation, e, verbose)
        return CommandResult(code, error=str(e))


def parse_value(text):
    """'2', '-1', '1/2' -> exact number; 't^k' or 'c*t^k' -> TMonomial"""
    if text is None:
        return None
    if isinstance(text, (int, Fraction)):
        return text
    text = str(text).strip().replace(" ", "")
    try:
        if "t" in text:
            coeff, _, power = text.partition("t")
            coeff = coeff.rstrip("*")
            power = power.lstrip("^") or "1"
            coeff = {"": 1, "-": -1}.get(coeff, coeff)
            return TMonomial(_exact(coeff), int(power))
        return _exact(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"Invalid parameter value {text!r}") from e


def _exact(value):
    number = Fraction(value)
    return number.numerator if number.denominator == 1 else number


def expand_target(target, prec, s=None, mu=None):
    """A named series or a SumSpec literal, expanded exactly"""
    if target in NAMED_SERIES:
        return named_series(target, prec, s=s, mu=mu)
    if "=" in target:
        spec, denom = parse_sum_spec(target)
        return sum_expand(spec, prec, denom)
    raise UsageError(f"Unknown series {target!r}; use one of {', '.join(sorted(NAMED_SERIES))} or a sum literal")


def cmd_expand(target, config, s=None, mu=None, a=None, b=None, spec_prec=None, verbose=False):
    """Expand a series and print its canonical serialization"""

    def body():
        series = expand_target(target, config.prec, s=s, mu=mu)
        if a is not None or b is not None:
            series = specialize(series, a=parse_value(a), b=parse_value(b), prec=spec_prec)
        with ReportWriter(config.output_format, config.output_path) as writer:
            writer.emit(format_series(series), to_record(series))
        return CommandResult(EXIT_PASS, [dumps(series)])

    return _run("expand", body, verbose)


def parse_perturbation(text):
    """'side:exponent[:delta]' -> Perturbation (mutation testing hook)"""
    if text is None or isinstance(text, Perturbation):
        return text
    pieces = str(text).split(":")
    try:
        numbers = [int(p) for p in pieces]
    except ValueError as e:
        raise UsageError(f"Invalid perturbation {text!r}, expected side:exponent[:delta]") from e
    if len(numbers) not in (2, 3):
        raise UsageError(f"Invalid perturbation {text!r}, expected side:exponent[:delta]")
    return Perturbation(*numbers)


def cmd_verify(config, perturb=None, verbose=False):
    """Verify the selected registry entries, streaming one report per parameter set"""

    def body():
        ids = list(config.identity_filter) or None
        s_max = config.s_max
        if config.s_values:
            s_max = max(s_max, max(config.s_values))
        jobs = registry_jobs(ids, s_max=s_max, s_values=config.s_values)
        if not jobs:
            raise UsageError("No identity matches the selection")
        mutation = parse_perturbation(perturb)
        logger.debug(f"Selected {len(jobs)} jobs, perturbation {mutation}")

        if verbose:
            print(f"🔍 Verifying {len(jobs)} identity instances at P={config.prec} with {config.jobs} worker(s)")

        records = []
        failed = 0
        with ReportWriter(config.output_format, config.output_path) as writer:
            for report in iter_verify(jobs, config.prec, config.jobs, mutation):
                record = report.to_record()
                records.append(record)
                failed += not report.passed
                writer.emit(report.summary_line(), record)

        if verbose:
            print(f"📋 {len(records) - failed} passed, {failed} failed")
        return CommandResult(EXIT_FAIL if failed else EXIT_PASS, records)

    return _run("verify", body, verbose)


def cmd_partitions(config, check="all", max_weight=None, verbose=False):
    """Run the partition oracles; checks that take s run over config.s_values, else 1..s_max"""

    def body():
        names = list(PARTITION_CHECKS) if check == "all" else [check]
        unknown = [name for name in names if name not in PARTITION_CHECKS]
        if unknown:
            raise UsageError(f"Unknown partition check {unknown[0]!r}; known: {', '.join(PARTITION_CHECKS)}")
        s_values = config.s_values or tuple(range(1, config.s_max + 1))

        reports = []
        for name in names:
            runner = PARTITION_CHECKS[name]
            if name == "durfee-rectangle":
                reports += [runner(value, max_weight or 12) for value in s_values]
            elif name == "thm-3.1-coefficients":
                reports += [runner(value, max_weight or 20) for value in s_values]
            else:
                reports.append(runner(max_weight or 40))

        with ReportWriter(config.output_format, config.output_path) as writer:
            for report in reports:
                writer.emit(report.summary_line(), report.to_record())
        code = EXIT_PASS if all(report.passed for report in reports) else EXIT_FAIL
        return CommandResult(code, [report.to_record() for report in reports])

    return _run("partitions", body, verbose)


def run_asymptotic(check, config, a=1.0, s=2, b=1.0, linear=0.0):
    """Dispatch one named numeric check"""
    schedule, tol = config.schedule, config.tol
    if check == "product":
        return check_product_asymptotic(float(a), int(s), schedule, tol)
    if check == "second-term":
        return check_second_term_asymptotic(float(a), schedule, tol)
    if check == "section7":
        return check_section7_chain(float(a), schedule, tol)
    if check == "ri-chain":
        return check_ri_chain(schedule, tol)
    if check == "ramanujan":
        return check_ramanujan_asymptotic(float(a), float(b), float(linear), schedule, tol)
    raise UsageError(f"Unknown asymptotic check {check!r}")


def cmd_asympt(check, config, a=1.0, s=2, b=1.0, linear=0.0, verbose=False):
    """Run a numeric asymptotic check; exit 0 on pass"""

    def body():
        result = run_asymptotic(check, config, a=a, s=s, b=b, linear=linear)
        record = result.to_record()
        with ReportWriter(config.output_format, config.output_path) as writer:
            writer.emit(list(result.lines()), record)
        return CommandResult(EXIT_PASS if result.passed else EXIT_FAIL, [record])

    return _run("asympt", body, verbose)
