#!/usr/bin/env python3
"""
Partition Oracles - Brute Force Checks Of The Combinatorial Identities
======================================================================

Exhaustive partition enumeration used as an independent oracle for the
series engine. Nothing here touches the series arithmetic: the counts come
from plain recursion over integer partitions and are compared against
coefficients extracted from the generating functions afterwards.

Provides:
- Partition: a weakly decreasing tuple of positive parts
- count_partitions: partitions of n into m parts with largest part r
- verify_durfee_rectangle, verify_thm31_coefficients, verify_a179080,
  verify_partition_totals: oracle-vs-series reports

The enumeration is exponential on purpose; keep weights small (<= 40).

Author: Based on identities.py
Date: October 2026
"""

import logging
import time
from collections import Counter
from dataclasses import dataclass, field

from .identities import get_entry
from .qfunctions import Affine, Quadratic, SumSpec, named_series, poch, sum_expand
from .rr_base import UsageError

logger = logging.getLogger(__name__)

MAX_MISMATCHES = 10


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers"""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise UsageError(f"Partition parts must be positive integers, got {parts}")
        if any(left < right for left, right in zip(parts, parts[1:])):
            raise UsageError(f"Partition parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    @property
    def largest(self):
        return self.parts[0] if self.parts else 0

    def part(self, i):
        """The i-th part counted from 1, zero past the end"""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0


def iter_partitions(n, cap=None):
    """All partitions of n with parts at most cap, largest part first"""
    if n == 0:
        yield Partition()
        return
    cap = n if cap is None else min(cap, n)
    for first in range(cap, 0, -1):
        for rest in iter_partitions(n - first, first):
            yield Partition((first,) + rest.parts)


def _count_bounded(n, m, cap):
    """Partitions of n into exactly m parts, each at most cap"""
    if m == 0:
        return 1 if n == 0 else 0
    if n < m or n > m * cap:
        return 0
    return sum(_count_bounded(n - p, m - 1, p) for p in range(1, min(cap, n) + 1))


def count_partitions(n, m, r):
    """Number of partitions of n into exactly m parts with largest part exactly r"""
    if n < 0 or m < 0 or r < 0:
        return 0
    if m == 0 or r == 0:
        return 1 if n == m == r == 0 else 0
    return _count_bounded(n - r, m - 1, r)


# -- reports -----------------------------------------------------------------


@dataclass
class PartitionReport:
    """Outcome of one oracle comparison"""

    name: str
    params: dict
    max_weight: int
    status: str = "pass"
    checked: int = 0
    mismatches: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self):
        return self.status == "pass"

    def record_mismatch(self, key, expected, observed):
        self.status = "fail"
        if len(self.mismatches) < MAX_MISMATCHES:
            self.mismatches.append({"key": list(key), "oracle": expected, "series": observed})

    def to_record(self):
        return {
            "name": self.name,
            "params": self.params,
            "max_weight": self.max_weight,
            "status": self.status,
            "checked": self.checked,
            "mismatches": self.mismatches,
            "elapsed": round(self.elapsed, 4),
        }

    def summary_line(self):
        params = ",".join(f"{k}={v}" for k, v in self.params.items()) or "-"
        line = f"{self.name:<24} {params:<10} {self.status.upper():<4} w<={self.max_weight} checked={self.checked}"
        if self.mismatches:
            line += f"  first mismatch: {self.mismatches[0]}"
        return line


def _compare(report, expected, observed):
    for key in sorted(set(expected) | set(observed)):
        report.checked += 1
        want, got = expected.get(key, 0), observed.get(key, 0)
        if want != got:
            report.record_mismatch(key, want, got)


def _series_table(x, max_weight):
    """{(weight, a_exp, b_exp): coefficient} of a D=1 series up to max_weight"""
    table = {}
    for e, poly in x.terms():
        if e > max_weight:
            break
        for (i, j), c in poly.items():
            table[(e, i, j)] = c
    return table


def _finish(report, started):
    report.elapsed = time.perf_counter() - started
    logger.info(report.summary_line())
    return report


# -- Durfee rectangles -------------------------------------------------------


def durfee_class(partition, s):
    """
    (n, k) of the maximal Durfee rectangle for ratio s.

    n is the largest i with lambda_i >= s*i. When the next row has length
    s*n + k with 1 <= k <= s-1 the rectangle is (n+1) x (sn+k), class (n, k);
    otherwise it is n x sn, class (n, 0).
    """
    n = 0
    while partition.part(n + 1) >= s * (n + 1):
        n += 1
    k = partition.part(n + 1) - s * n
    return (n, k) if 1 <= k <= s - 1 else (n, 0)


def _in_class(partition, s, n, k):
    """Membership test for class (n, k), written without reference to durfee_class"""
    if k == 0:
        return partition.part(n) >= s * n and partition.part(n + 1) <= s * n
    return partition.part(n + 1) == s * n + k


def durfee_class_series(s, n, k, max_weight):
    """Generating function of class (n, k), a = largest part, b = number of parts"""
    j = 0 if k == 0 else 1
    term = SumSpec(
        q_exp=Quadratic(s, s * j + k, k * j),
        a_exp=Affine(k, s),
        b_exp=Affine(j, 1),
        pochhammers=(poch(a=1), poch(b=1, length=Affine(k, s))),
        n_start=n,
        n_stop=n,
    )
    return sum_expand(term, max_weight, 1)


def verify_durfee_rectangle(s, max_n):
    """Classify every partition of weight <= max_n and compare each class with its generating function"""
    if s < 1:
        raise UsageError(f"s must be a positive integer, got {s}")
    started = time.perf_counter()
    report = PartitionReport("durfee-rectangle", {"s": s}, max_n)

    classified = {}
    for weight in range(max_n + 1):
        for partition in iter_partitions(weight):
            candidates = [
                (n, k)
                for n in range(partition.length + 1)
                for k in range(s)
                if _in_class(partition, s, n, k)
            ]
            chosen = durfee_class(partition, s)
            if candidates != [chosen]:
                report.record_mismatch((weight,) + partition.parts, [list(chosen)], [list(c) for c in candidates])
                continue
            counts = classified.setdefault(chosen, Counter())
            counts[(weight, partition.largest, partition.length)] += 1

    n = 0
    while s * n * n <= max_n:
        for k in range(s):
            expected = dict(classified.get((n, k), {}))
            observed = _series_table(durfee_class_series(s, n, k, max_n), max_n)
            _compare(report, {(n, k) + key: v for key, v in expected.items()},
                     {(n, k) + key: v for key, v in observed.items()})
        n += 1

    stray = [key for key in classified if s * key[0] * key[0] > max_n]
    for key in stray:
        report.record_mismatch(key, sum(classified[key].values()), 0)
    return _finish(report, started)


# -- three-way identity ------------------------------------------------------


def verify_thm31_coefficients(s, max_weight):
    """Every coefficient b^m a^r q^n of the three expressions equals count_partitions(n, m, r)"""
    if s < 1:
        raise UsageError(f"s must be a positive integer, got {s}")
    started = time.perf_counter()
    report = PartitionReport("thm-3.1-coefficients", {"s": s}, max_weight)

    expected = {}
    for n in range(max_weight + 1):
        for m in range(n + 1):
            for r in range(n + 1):
                count = count_partitions(n, m, r)
                if count:
                    expected[(n, r, m)] = count

    for label, side in get_entry("thm-3.1-three-way").build(max_weight, s=s):
        observed = _series_table(side, max_weight)
        _compare(report, {(label,) + key: v for key, v in expected.items()},
                 {(label,) + key: v for key, v in observed.items()})
    return _finish(report, started)


def verify_partition_totals(max_weight):
    """sum over m, r of count_partitions(n, m, r) equals the coefficients of 1/(q)_inf"""
    started = time.perf_counter()
    report = PartitionReport("partition-totals", {}, max_weight)
    series = named_series("partitions", max_weight)
    expected = {}
    for n in range(max_weight + 1):
        expected[(n,)] = sum(count_partitions(n, m, r) for m in range(n + 1) for r in range(n + 1))
    observed = {(e,): poly.get(0, 0) for e, poly in series.terms()}
    _compare(report, expected, observed)
    return _finish(report, started)


# -- odd differences ---------------------------------------------------------


def has_odd_differences(partition):
    """Distinct parts with every difference of consecutive parts odd"""
    return all((left - right) % 2 == 1 for left, right in zip(partition.parts, partition.parts[1:]))


def verify_a179080(max_weight):
    """
    Count partitions into distinct parts with odd consecutive differences.

    The empty partition satisfies the condition vacuously, matching the n=1
    term of the sum, so weight 0 counts 1.
    """
    started = time.perf_counter()
    report = PartitionReport("a179080", {}, max_weight)
    expected = {}
    for weight in range(max_weight + 1):
        count = sum(1 for partition in iter_partitions(weight) if has_odd_differences(partition))
        if count:
            expected[(weight,)] = count
    series = named_series("a179080", max_weight)
    observed = {(e,): poly.get(0, 0) for e, poly in series.terms()}
    _compare(report, expected, observed)
    return _finish(report, started)


PARTITION_CHECKS = {
    "durfee-rectangle": verify_durfee_rectangle,
    "thm-3.1-coefficients": verify_thm31_coefficients,
    "a179080": verify_a179080,
    "partition-totals": verify_partition_totals,
}
