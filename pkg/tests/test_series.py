from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edwh_rrdissect_plugin.qfunctions import (
    Monomial,
    Quadratic,
    SumSpec,
    inverse_poch,
    named_series,
    poch,
    poch_infinite,
    sum_expand,
    theta_full,
)
from edwh_rrdissect_plugin.rr_base import DomainError, UsageError
from edwh_rrdissect_plugin.series import (
    CoeffPoly,
    QSeries,
    TMonomial,
    add,
    change_denom,
    dumps,
    evaluate,
    first_difference,
    flip_q,
    format_series,
    from_record,
    invert,
    loads,
    mul,
    negate_parameter,
    reduce_mod,
    rescale,
    specialize,
    to_record,
)

A = CoeffPoly.monomial(1, 1, 0)
A_INV = CoeffPoly.monomial(1, -1, 0)
B = CoeffPoly.monomial(1, 0, 1)

polys = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(0, 2)),
    st.integers(-3, 3),
    max_size=3,
).map(CoeffPoly)

series = st.builds(
    lambda coeffs, prec: QSeries(coeffs, prec),
    st.dictionaries(st.integers(0, 6), polys, max_size=5),
    st.integers(0, 6),
)

unit_series = st.builds(
    lambda coeffs, prec: QSeries({**coeffs, 0: 1}, prec),
    st.dictionaries(st.integers(1, 6), polys, max_size=4),
    st.integers(0, 8),
)


def values(x):
    """Constant coefficients of t^0..t^prec"""
    return [x.coefficient(e).get(0, 0) for e in range(x.prec + 1)]


def agree(x, y):
    prec = min(x.prec, y.prec)
    return x.truncate(prec) == y.truncate(prec)


def test_coeff_poly_never_stores_zero():
    poly = CoeffPoly({(1, 0): 2, (0, 1): 0}) + CoeffPoly.monomial(-2, 1, 0)
    assert poly.is_zero()
    assert (A + A_INV) * (A - A_INV) == CoeffPoly({(2, 0): 1, (-2, 0): -1})


def test_coeff_poly_rejects_negative_b():
    with pytest.raises(DomainError):
        CoeffPoly({(0, -1): 1})


def test_add_cancels():
    total = QSeries.from_list([1, 1]) + QSeries.from_list([1, -1])
    assert total == QSeries({0: 2}, 1)


def test_add_takes_lesser_precision():
    x = QSeries.from_list([1, 2, 3, 4])
    total = add(x, QSeries.zero(2))
    assert total.prec == 2
    assert values(total) == [1, 2, 3]


def test_like_terms_merge_at_denominator_four():
    total = QSeries({1: A}, 4, 4) + QSeries({1: A_INV}, 4, 4)
    assert total.coefficient(1) == A + A_INV


def test_add_rejects_denominator_mismatch():
    with pytest.raises(UsageError):
        add(QSeries.one(4, 2), QSeries.one(4, 4))


def test_mul_of_three_binomials():
    prec = 6
    x = QSeries.from_list([1, -1], prec)
    y = QSeries({0: 1, 2: -1}, prec)
    z = QSeries({0: 1, 3: -1}, prec)
    assert values(mul(mul(x, y), z)) == [1, -1, -1, 0, 1, 1, -1]


def test_mul_symbolic_binomials():
    x = QSeries({0: 1, 1: A}, 2)
    y = QSeries({0: 1, 1: A_INV}, 2)
    product = mul(x, y)
    assert product.coefficient(1) == A + A_INV
    assert product.coefficient(2) == 1


def test_mul_precision_uses_valuations():
    x = QSeries({2: 1}, 10)
    y = QSeries({3: 1}, 5)
    assert mul(x, y).prec == min(10 + 3, 5 + 2)


def test_invert_geometric_series():
    inverse = invert(QSeries({0: 1, 1: -B}, 5))
    for e in range(6):
        assert inverse.coefficient(e) == CoeffPoly.monomial(1, 0, e)


def test_invert_gives_partition_numbers():
    inverse = invert(poch_infinite(Monomial(q=1), 1, 10))
    assert values(inverse) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_invert_rejects_non_unit():
    with pytest.raises(DomainError):
        invert(QSeries.from_list([2, 1]))
    with pytest.raises(DomainError):
        invert(QSeries({0: A}, 3))


def test_rescale():
    x = rescale(QSeries.from_list([1, 1, 1]), 4)
    assert x.exponents() == [0, 4, 8]
    assert x.prec == 11
    assert rescale(x, 1) is x


def test_rescale_matches_direct_expansion():
    direct = sum_expand(SumSpec(Quadratic(4), pochhammers=(poch(1, 4, 4),)), 40, 1)
    assert rescale(named_series("G", 10), 4).truncate(40) == direct


def test_specialize_to_numbers():
    x = QSeries({0: A + A_INV, 1: A * B}, 1)
    assert specialize(x, a=1, b=1) == QSeries.from_list([2, 1])
    half = specialize(x, a=Fraction(1, 2))
    assert half.coefficient(0) == Fraction(5, 2)


def test_specialize_theta_annihilation():
    # a = -q^(-1/4) pairs n with 1 - n and cancels every term
    theta = theta_full(4, 40)
    assert specialize(theta, a=TMonomial(-1, -1), prec=20).is_zero()


def test_specialize_errors():
    x = QSeries({0: A + A_INV}, 3)
    with pytest.raises(DomainError):
        specialize(x, a=0)
    with pytest.raises(UsageError):
        specialize(x, a=TMonomial(1, 1))
    with pytest.raises(DomainError):
        specialize(QSeries({0: A_INV}, 3), a=TMonomial(1, 1), prec=3)


def test_coefficient_beyond_precision():
    with pytest.raises(UsageError):
        QSeries.from_list([1, 2]).coefficient(2)


def test_shift_and_truncate():
    x = QSeries({2: 1, 3: 5}, 6)
    assert x.shift(-2) == QSeries({0: 1, 1: 5}, 4)
    assert x.truncate(2) == QSeries({2: 1}, 2)
    assert x.valuation == 2
    with pytest.raises(DomainError):
        x.shift(-3)


def test_change_denom():
    x = QSeries({1: 1, 2: 3}, 4)
    up = change_denom(x, 3)
    assert up.exponents() == [3, 6]
    assert up.prec == 14
    assert change_denom(up, 1) == x
    with pytest.raises(UsageError):
        change_denom(QSeries({1: 1}, 4, 2), 1)


def test_flip_q():
    assert values(flip_q(QSeries.from_list([1, 1, 1, 1]))) == [1, -1, 1, -1]
    with pytest.raises(DomainError):
        flip_q(QSeries({1: 1}, 4, 2))


def test_negate_parameter_and_reduce_mod():
    x = QSeries({0: A + B, 1: CoeffPoly.constant(4), 2: CoeffPoly.constant(3)}, 2)
    assert negate_parameter(x, "a").coefficient(0) == B - A
    reduced = reduce_mod(x, 2)
    assert reduced.exponents() == [0, 2]
    with pytest.raises(UsageError):
        negate_parameter(x, "c")


def test_evaluate():
    x = QSeries({0: 1, 2: A}, 4, 2)
    assert evaluate(x, 0.25, a=2.0) == pytest.approx(1.0 + 2.0 * 0.25)


def test_first_difference():
    x = QSeries.from_list([1, 2, 3])
    y = QSeries.from_list([1, 2, 4])
    assert first_difference(x, y) == (2, CoeffPoly.constant(-1))
    assert first_difference(x, x) is None


def test_format_series():
    assert format_series(theta_full(4, 9)) == "1 + (a^-1 + a)*t + (a^-2 + a^2)*t^4 + (a^-3 + a^3)*t^9 + O(t^10)"


def test_canonical_record_ordering():
    x = QSeries({3: A_INV + B, 0: Fraction(1, 2)}, 4, 2)
    record = to_record(x)
    assert record["denom"] == 2
    assert record["prec"] == 4
    assert [term["e"] for term in record["terms"]] == [0, 3]
    assert record["terms"][0]["coeff"] == [{"a": 0, "b": 0, "c": "1/2"}]
    assert [(c["a"], c["b"]) for c in record["terms"][1]["coeff"]] == [(-1, 0), (0, 1)]


def test_serialization_is_bit_exact():
    x = specialize(theta_full(6, 30), b=1) * CoeffPoly({(0, 1): 7, (2, 0): -3})
    text = dumps(x)
    assert loads(text) == x
    assert dumps(loads(text)) == text
    assert from_record(to_record(x)) == x


def test_loads_rejects_garbage():
    with pytest.raises(UsageError):
        loads("{not json")
    with pytest.raises(UsageError):
        from_record({"denom": 1})


def test_precision_tracking_is_sound():
    assert named_series("G", 30).truncate(15) == named_series("G", 15)
    assert inverse_poch(Monomial(q=1), 1, None, 40).truncate(12) == inverse_poch(Monomial(q=1), 1, None, 12)


@given(series, series, series)
def test_ring_axioms(x, y, z):
    assert agree(mul(mul(x, y), z), mul(x, mul(y, z)))
    assert mul(x, y) == mul(y, x)
    assert add(x, y) == add(y, x)
    assert agree(mul(x, add(y, z)), add(mul(x, y), mul(x, z)))


@settings(max_examples=50)
@given(unit_series)
def test_mul_by_inverse_is_one(x):
    assert mul(x, invert(x)) == QSeries.one(x.prec)


@given(series, series, st.integers(1, 4))
def test_rescale_is_multiplicative(x, y, k):
    assert agree(rescale(mul(x, y), k), mul(rescale(x, k), rescale(y, k)))


@given(unit_series)
def test_invert_is_an_involution(x):
    assert invert(invert(x)) == x
