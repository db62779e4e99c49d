import pytest

from edwh_rrdissect_plugin.partitions import (
    MAX_MISMATCHES,
    PARTITION_CHECKS,
    Partition,
    PartitionReport,
    count_partitions,
    durfee_class,
    has_odd_differences,
    iter_partitions,
    verify_a179080,
    verify_durfee_rectangle,
    verify_partition_totals,
    verify_thm31_coefficients,
)
from edwh_rrdissect_plugin.rr_base import UsageError

PARTITION_NUMBERS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]


def test_partition_accessors():
    partition = Partition((4, 2, 2))
    assert partition.weight == 8
    assert partition.length == 3
    assert partition.largest == 4
    assert partition.part(3) == 2
    assert partition.part(4) == 0
    assert Partition().largest == 0


@pytest.mark.parametrize("parts", [(2, 3), (1, 0), (2, -1), (1.5,)])
def test_partition_validation(parts):
    with pytest.raises(UsageError):
        Partition(parts)


def test_iter_partitions_counts():
    assert [sum(1 for _ in iter_partitions(n)) for n in range(12)] == PARTITION_NUMBERS
    assert [p.parts for p in iter_partitions(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [p.parts for p in iter_partitions(4, cap=2)] == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]


@pytest.mark.parametrize(
    "n, m, r, expected",
    [
        (0, 0, 0, 1),
        (5, 2, 3, 1),
        (4, 2, 2, 1),
        (6, 3, 3, 1),
        (6, 2, 3, 1),
        (5, 1, 5, 1),
        (5, 2, 2, 0),
        (3, 0, 0, 0),
        (-1, 1, 1, 0),
    ],
)
def test_count_partitions(n, m, r, expected):
    assert count_partitions(n, m, r) == expected


def test_count_partitions_sums_to_partition_numbers():
    for n, total in enumerate(PARTITION_NUMBERS):
        assert sum(count_partitions(n, m, r) for m in range(n + 1) for r in range(n + 1)) == total


@pytest.mark.parametrize(
    "parts, s, expected",
    [
        ((3, 2), 1, (2, 0)),
        ((1,), 2, (0, 1)),
        ((4, 3), 2, (1, 1)),
        ((5, 1), 2, (1, 0)),
        ((5, 5, 1), 2, (2, 0)),
        ((), 3, (0, 0)),
    ],
)
def test_durfee_class(parts, s, expected):
    assert durfee_class(Partition(parts), s) == expected


def test_has_odd_differences():
    assert has_odd_differences(Partition((5, 2)))
    assert has_odd_differences(Partition())
    assert not has_odd_differences(Partition((4, 2)))
    assert not has_odd_differences(Partition((3, 3)))


@pytest.mark.parametrize("s", [1, 2, 3])
def test_durfee_rectangle_classes(s):
    report = verify_durfee_rectangle(s, 12)
    assert report.passed, report.summary_line()
    assert report.checked > 0


@pytest.mark.parametrize("s, max_weight", [(2, 20), (5, 15)])
def test_three_way_coefficients(s, max_weight):
    report = verify_thm31_coefficients(s, max_weight)
    assert report.passed, report.summary_line()


def test_a179080():
    assert verify_a179080(40).passed


def test_partition_totals():
    report = verify_partition_totals(30)
    assert report.passed
    assert report.checked == 31


def test_non_positive_s_is_rejected():
    with pytest.raises(UsageError):
        verify_durfee_rectangle(0, 5)
    with pytest.raises(UsageError):
        verify_thm31_coefficients(0, 5)


def test_report_keeps_a_bounded_mismatch_list():
    report = PartitionReport("demo", {}, 5)
    for n in range(MAX_MISMATCHES + 5):
        report.record_mismatch((n,), 1, 0)
    assert report.status == "fail"
    assert len(report.mismatches) == MAX_MISMATCHES
    record = report.to_record()
    assert record["mismatches"][0] == {"key": [0], "oracle": 1, "series": 0}
    assert "first mismatch" in report.summary_line()


def test_check_table():
    assert set(PARTITION_CHECKS) == {"durfee-rectangle", "thm-3.1-coefficients", "a179080", "partition-totals"}


@pytest.mark.slow
@pytest.mark.parametrize("s", [1, 2, 3, 4, 5])
def test_three_way_coefficients_to_weight_20(s):
    assert verify_thm31_coefficients(s, 20).passed
