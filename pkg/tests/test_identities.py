import json

import pytest

from edwh_rrdissect_plugin.identities import (
    REGISTRY,
    Perturbation,
    coefficient_of,
    dissection_lhs,
    get_entry,
    gmr_lhs,
    iter_verify,
    registry_jobs,
    sides_record,
    stacks_rhs,
    stacks_split_printed,
    verify,
    verify_all,
)
from edwh_rrdissect_plugin.qfunctions import theta_full
from edwh_rrdissect_plugin.rr_base import UsageError
from edwh_rrdissect_plugin.series import CoeffPoly, QSeries, add, first_difference

QUICK_PREC = 16


def job_id(job):
    identity_id, params = job
    return identity_id + "".join(f"-{k}{v}" for k, v in params.items())


@pytest.mark.parametrize("job", registry_jobs(s_max=3), ids=job_id)
def test_registry_passes_at_reduced_precision(job):
    identity_id, params = job
    report = verify(identity_id, prec=QUICK_PREC, **params)
    assert report.passed, report.summary_line()


@pytest.mark.slow
def test_full_registry_at_default_precision():
    reports = verify_all(prec=50, s_max=5)
    failed = [report.summary_line() for report in reports if not report.passed]
    assert not failed


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_theorem_symbolic_in_a_and_b(s):
    report = verify("theorem-1.1", s=s, prec=24)
    assert report.passed
    assert report.denom == 2 * s
    assert report.prec == 24


def test_theorem_constant_term_only():
    report = verify("theorem-1.1", s=1, prec=0)
    assert report.passed
    for _, side in get_entry("theorem-1.1").build(0, s=1):
        assert side == QSeries.one(0, 2)


def test_gmr_is_the_s2_dissection():
    assert gmr_lhs(30) == dissection_lhs(2, 30)


@pytest.mark.parametrize("s", [1, 2, 3])
def test_first_and_second_part_add_up(s):
    prec = 18
    first = dict(get_entry("firstPart").build(prec, s=s))
    second = dict(get_entry("secondPart").build(prec, s=s))
    whole = dict(get_entry("theorem-1.1").build(prec, s=s))
    assert add(first["lhs"], second["lhs"]) == whole["lhs"]
    assert add(first["rhs"], second["rhs"]) == whole["rhs"]


def test_rhs_zero_carries_the_s3_display():
    report = verify("rhs-zero", s=3, prec=30)
    assert report.passed
    assert "display" in report.sides


def test_gmr2_reports_its_note():
    report = verify("gmr2", prec=12)
    assert report.passed
    assert report.notes
    assert "(q)_m" in report.notes[0]


def test_congruence_uses_its_precision_floor():
    report = verify("congruence", prec=10)
    assert report.passed
    assert report.prec >= 100


@pytest.mark.parametrize(
    "identity_id, params, exponent",
    [
        ("theorem-1.1", {"s": 3}, 13),
        ("gmr", {}, 7),
        ("rogers-1", {}, 5),
        ("jtpi", {}, 4),
        ("mcintosh-mu", {"mu": 1}, 9),
        ("bressoud", {"s": 2}, 6),
    ],
)
@pytest.mark.parametrize("delta", [1, -1])
def test_single_coefficient_mutation_is_caught(identity_id, params, exponent, delta):
    report = verify(identity_id, prec=20, perturb=Perturbation(side=1, exponent=exponent, delta=delta), **params)
    assert report.status == "fail"
    _, e, diff = report.first_diff
    assert e == exponent
    assert diff == CoeffPoly.constant(-delta)
    assert f"t^{exponent}" in report.summary_line()


def test_symbolic_mutation_is_caught():
    bump = Perturbation(side=0, exponent=3, a_exp=-1, b_exp=2)
    report = verify("gen-jtpi", prec=10, perturb=bump)
    assert not report.passed
    assert report.first_diff[2] == CoeffPoly.monomial(1, -1, 2)


def test_perturbation_of_missing_side():
    with pytest.raises(UsageError):
        verify("gmr", prec=8, perturb=Perturbation(side=5))


def test_verify_errors():
    with pytest.raises(UsageError):
        verify("theorem-9.9")
    with pytest.raises(UsageError):
        verify("theorem-1.1", prec=10)
    with pytest.raises(UsageError):
        verify("bressoud", s=5, prec=10)
    with pytest.raises(UsageError):
        verify("gmr", s=2, prec=10)
    with pytest.raises(UsageError):
        verify("gmr", prec=-1)


def test_coefficient_of():
    square = dict(get_entry("thm-3.1-three-way").build(10, s=1))["durfee-square"]
    assert coefficient_of(square, 5, 3, 2) == 1
    assert coefficient_of(square, 1, 1, 1) == 1
    assert coefficient_of(theta_full(4, 4), 1, 1, 0) == 1
    with pytest.raises(UsageError):
        coefficient_of(square, 11)


def test_grid():
    assert get_entry("gmr").grid() == [{}]
    assert len(get_entry("cor-3.2").grid(s_max=2)) == 12
    assert [p["s"] for p in get_entry("theorem-1.1").grid(s_max=6)] == [1, 2, 3, 4, 5, 6]
    assert [p["s"] for p in get_entry("bressoud").grid(s_max=6)] == [2, 3, 4]


def test_registry_jobs_filtering():
    assert registry_jobs([]) == []
    assert verify_all(ids=[]) == []
    jobs = registry_jobs(["theorem-1.1", "gmr"], s_max=5, s_values=(2, 4))
    assert jobs == [("theorem-1.1", {"s": 2}), ("theorem-1.1", {"s": 4}), ("gmr", {})]
    with pytest.raises(UsageError):
        registry_jobs(["nope"])


def test_every_entry_has_a_reference():
    for entry in REGISTRY.values():
        assert entry.summary
        assert entry.reference


def test_parallel_run_keeps_job_order():
    jobs = [("rogers-1", {}), ("rogers-2", {}), ("mcintosh-mu", {"mu": 0})]
    serial = list(iter_verify(jobs, prec=10, workers=1))
    parallel = list(iter_verify(jobs, prec=10, workers=2))
    assert [r.id for r in parallel] == ["rogers-1", "rogers-2", "mcintosh-mu"]
    assert [r.status for r in parallel] == [r.status for r in serial]


def test_report_record_is_json():
    report = verify("gmr", prec=8, perturb=Perturbation(side=1, exponent=2))
    record = json.loads(json.dumps(report.to_record()))
    assert record["id"] == "gmr"
    assert record["status"] == "fail"
    assert record["denom"] == 4
    assert record["first_diff"]["e"] == 2
    assert record["first_diff"]["diff"] == [{"a": 0, "b": 0, "c": "-1"}]


def test_sides_record():
    record = sides_record("jtpi", prec=6)
    assert set(record) == {"theta", "product", "halves"}
    assert record["theta"]["prec"] == 6


@pytest.mark.slow
def test_theorem_at_s6_default_precision():
    assert verify("theorem-1.1", s=6, prec=50).passed


def test_stacks_substituted_compares_only_equal_sides():
    report = verify("stacks-substituted", prec=30)
    assert report.passed, report.summary_line()
    assert set(report.sides) == {"substituted", "stacks-rhs"}
    assert "2q^12" in report.notes[0]


def test_printed_stacks_split_is_off_from_q12():
    prec = 24
    split = stacks_split_printed(prec)
    rhs = stacks_rhs(prec)
    assert first_difference(split, rhs) == (12, CoeffPoly.constant(2))
    excess = add(split, -rhs)
    assert [excess.coefficient(e) for e in (12, 13, 16, 20, 21)] == [2, 0, 2, 2, 2]
