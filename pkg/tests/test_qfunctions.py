from fractions import Fraction

import pytest

from edwh_rrdissect_plugin.qfunctions import (
    INDEX,
    NAMED_SERIES,
    Affine,
    Monomial,
    Quadratic,
    SumSpec,
    correction_term,
    infinite,
    inverse_poch,
    named_series,
    parse_sum_spec,
    partial_theta,
    poch,
    poch_finite,
    poch_infinite,
    q_product,
    sum_expand,
    summation_bound,
    theta_full,
    to_t_exponent,
)
from edwh_rrdissect_plugin.rr_base import DomainError, UsageError
from edwh_rrdissect_plugin.series import CoeffPoly, QSeries, add, specialize

Q = Monomial(q=1)
BQ = Monomial(1, 0, 1, 1)
PREC = 60


def values(x, upto=None):
    upto = x.prec if upto is None else upto
    return [x.coefficient(e).get(0, 0) for e in range(upto + 1)]


def test_to_t_exponent():
    assert to_t_exponent(Fraction(1, 4), 4) == 1
    assert to_t_exponent(3, 2) == 6
    with pytest.raises(UsageError):
        to_t_exponent(Fraction(1, 3), 2)


def test_poch_finite():
    assert values(poch_finite(Q, 1, 0)) == [1]
    assert values(poch_finite(Q, 1, 3)) == [1, -1, -1, 0, 1, 1, -1]
    two = poch_finite(BQ, 1, 2)
    assert two.coefficient(1) == CoeffPoly.monomial(-1, 0, 1)
    assert two.coefficient(2) == CoeffPoly.monomial(-1, 0, 1)
    assert two.coefficient(3) == CoeffPoly.monomial(1, 0, 2)


def test_poch_infinite_pentagonal():
    eta = poch_infinite(Q, 1, 15)
    expected = [0] * 16
    for e, sign in ((0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)):
        expected[e] = sign
    assert values(eta) == expected


def test_poch_infinite_needs_positive_valuation():
    with pytest.raises(DomainError):
        poch_infinite(Monomial(q=0), 1, 10)
    with pytest.raises(DomainError):
        inverse_poch(Monomial(1, 1, 0, 0), 1, 3, 10)


@pytest.mark.parametrize(
    "base, sign, b_exp",
    [
        (Q, None, Affine()),
        (BQ, None, INDEX),
        (Monomial(-1, 0, 1, 1), INDEX, INDEX),
    ],
)
def test_euler_inverse_product(base, sign, b_exp):
    # sum z^n/(q)_n = 1/(z;q)_inf for z = q, bq, -bq
    spec = SumSpec(Quadratic(0, 1), b_exp=b_exp, sign=sign, pochhammers=(poch(),))
    assert sum_expand(spec, PREC, 1) == inverse_poch(base, 1, None, PREC)


@pytest.mark.parametrize(
    "base, a_exp, sign",
    [
        (Q, Affine(), INDEX),
        (Monomial(-1, 1, 0, 1), INDEX, None),
    ],
)
def test_euler_product(base, a_exp, sign):
    # sum (-1)^n z^n q^(n(n-1)/2)/(q)_n = (z;q)_inf for z = q, -aq
    spec = SumSpec(Quadratic(Fraction(1, 2), Fraction(1, 2)), a_exp=a_exp, sign=sign, pochhammers=(poch(),))
    assert sum_expand(spec, PREC, 1) == poch_infinite(base, 1, PREC)


def test_euler_product_in_inverse_a():
    # (-q/a;q)_inf after clearing: the a -> 1/a image of the -aq case
    spec = SumSpec(Quadratic(Fraction(1, 2), Fraction(1, 2)), a_exp=Affine(0, -1), pochhammers=(poch(),))
    assert sum_expand(spec, 30, 1) == poch_infinite(Monomial(-1, -1, 0, 1), 1, 30)


def test_sum_expand_named_examples():
    assert values(named_series("G", 6)) == [1, 1, 1, 1, 2, 2, 3]
    assert values(named_series("H", 6)) == [1, 0, 1, 1, 1, 1, 2]
    assert values(named_series("f0", 6)) == [1, 1, -1, 1, 0, 0, -1]


def test_sum_expand_empty_range():
    spec = SumSpec(Quadratic(1), pochhammers=(poch(),), n_start=3)
    assert sum_expand(spec, 5, 1).is_zero()


@pytest.mark.parametrize("quad", [Quadratic(0, 0), Quadratic(0, -1), Quadratic(-1, 5)])
def test_sum_expand_rejects_non_divergent_exponent(quad):
    with pytest.raises(DomainError):
        sum_expand(SumSpec(quad), 10, 1)


def test_sum_expand_rejects_incompatible_denominator():
    with pytest.raises(UsageError):
        sum_expand(SumSpec(Quadratic(Fraction(1, 4))), 10, 2)


def test_summation_bound_is_exact():
    spec = SumSpec(Quadratic(1), pochhammers=(poch(),))
    assert summation_bound(spec, 24, 1) == 4
    assert summation_bound(spec, 25, 1) == 5
    # vertex at n = 2: the exponent first falls before it grows
    dipping = SumSpec(Quadratic(1, -4, 5))
    assert summation_bound(dipping, 5, 1) == 4


def test_theta_full():
    theta = theta_full(4, 9)
    assert theta.denom == 4
    assert theta.exponents() == [0, 1, 4, 9]
    for n in (1, 2, 3):
        assert theta.coefficient(n * n) == CoeffPoly({(n, 0): 1, (-n, 0): 1})


def test_phi_from_theta():
    assert values(named_series("phi", 9)) == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]


def test_partial_theta_split():
    for denom2s in (2, 4, 6):
        whole = theta_full(denom2s, 30)
        split = add(partial_theta("positive", denom2s, 30), partial_theta("nonpositive", denom2s, 30))
        assert split == whole
    positive = partial_theta("positive", 4, 9)
    assert positive.exponents() == [1, 4, 9]
    assert positive.coefficient(4) == CoeffPoly.monomial(1, 2, 0)
    assert partial_theta("nonpositive", 4, 9).coefficient(0) == 1
    with pytest.raises(UsageError):
        partial_theta("left", 4, 9)


def test_correction_term():
    assert specialize(correction_term(4, 16), b=1).is_zero()
    assert correction_term(4, 16).coefficient(1) == CoeffPoly({(1, 0): 1, (1, 1): -1})


def test_named_series_errors():
    with pytest.raises(UsageError):
        named_series("nope", 10)
    with pytest.raises(UsageError):
        named_series("theta", 10)
    with pytest.raises(UsageError):
        named_series("G", -1)


PARAMETERIZED = {"theta", "bressoud-lhs", "bressoud-rhs", "mcintosh-lhs", "mcintosh-rhs"}


@pytest.mark.parametrize("name", sorted(set(NAMED_SERIES) - PARAMETERIZED))
def test_named_series_are_integral(name):
    x = specialize(named_series(name, 20), a=1, b=1)
    for _, poly in x.terms():
        assert all(isinstance(c, int) for c in poly.terms.values())


def test_bressoud_rhs_at_s2_is_g():
    assert specialize(named_series("bressoud-rhs", 20, s=2), a=1) == named_series("G", 20)
    assert specialize(named_series("bressoud-lhs", 20, s=2), a=1) == named_series("G", 20)


def test_rogers_products():
    assert named_series("rogers-G", 25) == named_series("G", 25)
    assert named_series("rogers-H", 25) == named_series("H", 25)


def test_psi_product():
    # psi(q) = sum q^(n(n+1)/2)
    assert values(named_series("psi", 10)) == [1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]


def test_a179080_head():
    assert values(named_series("a179080", 5)) == [1, 1, 1, 2, 1, 3]


def test_numerator_pochhammer_and_minus_q_nome():
    # (-q;-q)_inf = prod (1 - (-q)^k), and 1/(q)_inf * (q)_inf = 1
    flipped = q_product((infinite(-1, 1, 1, nome_sign=-1),), 10)
    direct = QSeries.one(10)
    for k in range(1, 11):
        direct = direct.mul_binomial(CoeffPoly.constant((-1) ** k), k)
    assert flipped == direct
    both = q_product((infinite(1, 1, 1), infinite(1, 1, 1, power=-1)), 20)
    assert both == QSeries.one(20)


def test_parse_sum_spec():
    spec, denom = parse_sum_spec("q=1;poch=q")
    assert denom is None
    assert sum_expand(spec, 10) == named_series("G", 10)

    spec, denom = parse_sum_spec("q=1/4;a=1;b=1;denom=4")
    assert denom == 4
    assert spec.a_exp == INDEX
    assert spec.q_exp == Quadratic(Fraction(1, 4))

    spec, _ = parse_sum_spec("q=1/2,-1/2;start=1;poch=q2@2")
    assert sum_expand(spec, 12, 1) == named_series("a179080", 12)


@pytest.mark.parametrize(
    "literal",
    ["a=1", "q=1;zeta=2", "q=1;poch=x", "q=1,2,3,4", "q=1;a=1/2", "q=1;start=x", "q1"],
)
def test_parse_sum_spec_errors(literal):
    with pytest.raises(UsageError):
        parse_sum_spec(literal)
