#!/usr/bin/env python3
"""
Identity Registry - Exact Verification Of Q-Series Identities
=============================================================

Every identity of the Rogers-Ramanujan dissection family is registered here as
a list of sides. Each side is an exact truncated series built from the
q-function builders; an identity passes when all sides agree coefficient by
coefficient through the requested precision.

Provides:
- IdentityEntry: registry entry with side builders, denominator policy and parameter grid
- IdentityReport: outcome of a single verification
- verify / verify_all / iter_verify: the verifier, serial or on a process pool
- coefficient_of: exact coefficient extraction

Most entries are symbolic in a and b. Entries obtained by specialisation carry
extra sides that re-derive them through the substitution chain, so that
rescale/specialize/flip_q are exercised on real data.

Author: Based on qfunctions.py
Date: October 2026
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .qfunctions import (
    INDEX,
    Affine,
    Monomial,
    PochFactor,
    Quadratic,
    SumSpec,
    correction_term,
    infinite,
    inverse_poch,
    named_series,
    partial_theta,
    poch,
    q_product,
    sum_expand,
    summation_bound,
    theta_full,
    to_t_exponent,
)
from .rr_base import DEFAULT_PREC, DEFAULT_S_MAX, UsageError
from .series import (
    CoeffPoly,
    QSeries,
    TMonomial,
    add,
    change_denom,
    first_difference,
    flip_q,
    mul,
    negate_parameter,
    reduce_mod,
    rescale,
    specialize,
    to_record,
)

logger = logging.getLogger(__name__)

QN = poch()  # (q)_n
BQ = poch(b=1)  # (bq)_n
AQ = poch(a=1)  # (aq)_n
BQ_BASE = Monomial(1, 0, 1, 1)
Q_BASE = Monomial(q=1)
ONE_MINUS_B = CoeffPoly({(0, 0): 1, (0, 1): -1})
ONE_PLUS_B = CoeffPoly({(0, 0): 1, (0, 1): 1})


def spec(sq, lin=0, const=0, *, a=Affine(), b=Affine(), sign=None, pochs=(QN,), start=0, stop=None, coeff=1):
    return SumSpec(Quadratic(sq, lin, const), a, b, sign, tuple(pochs), start, stop, coeff)


def single_term(sum_spec, n, prec, denom):
    """The n-th summand of a SumSpec as a series"""
    return sum_expand(replace(sum_spec, n_start=n, n_stop=n), prec, denom)


def coefficient_of(x, e, a_exp=0, b_exp=0):
    """Coefficient of a^a_exp b^b_exp t^e; e must be within the known precision"""
    return x.coefficient(e).get(a_exp, b_exp)


def _j(k):
    return 0 if k == 0 else 1


def _zero(prec, denom):
    return QSeries.zero(prec, denom)


def _sum_all(series, prec, denom):
    total = _zero(prec, denom)
    for x in series:
        total = add(total, x)
    return total


def substitute_q_power(x, k, denom=1):
    """x(q) -> x(q^k), re-expressed over `denom`"""
    return change_denom(rescale(x, k), denom)


def at_q_power(name, k, prec, **params):
    """A named D=1 series evaluated at q^k, known to q^prec"""
    return rescale(named_series(name, prec // k, **params), k).truncate(prec)


def specialisation_margin(prec):
    """
    Precision to build at before substituting a = c*t^e with |e| <= 2.

    Every substitution used here moves a term t^E down by at most 2*sqrt(E),
    so terms beyond this bound cannot land at or below `prec`.
    """
    return prec + 2 * math.isqrt(prec + 3) + 8


def _tail_double_sum(outer, inner_term, prec, denom, start=1):
    """sum_{n >= start} outer(n) * sum_{l < n} inner_term(l)

    outer(n) returns (CoeffPoly, t-exponent) or None once exhausted.
    """
    running = _zero(prec, denom)
    total = _zero(prec, denom)
    for ell in range(start - 1):
        running = add(running, inner_term(ell))
    n = start
    while True:
        head = outer(n)
        if head is None:
            return total
        running = add(running, inner_term(n - 1))
        poly, e0 = head
        if e0 <= prec:
            total = add(total, (running.truncate(prec - e0) * poly).shift(e0))
        n += 1


# -- the dissection family ---------------------------------------------------


def dissection_outer(s, k, outer_poch=BQ):
    """sum_m a^(-sm-k) q^((sm+k)^2/(2s)) / (bq)_m"""
    return spec(Fraction(s, 2), k, Fraction(k * k, 2 * s), a=Affine(-k, -s), pochs=(outer_poch,))


def dissection_inner(s, k):
    """sum_n a^n b^n q^(n(n+2js-2k)/(2s)) / (q)_n"""
    return spec(Fraction(1, 2 * s), Fraction(_j(k) * s - k, s), a=INDEX, b=INDEX)


def dissection_lhs(s, prec):
    denom = 2 * s
    products = (
        mul(sum_expand(dissection_outer(s, k), prec, denom), sum_expand(dissection_inner(s, k), prec, denom))
        for k in range(s)
    )
    return _sum_all(products, prec, denom)


def theta_over_bq(theta, prec, denom):
    return mul(theta, inverse_poch(BQ_BASE, 1, None, prec, denom))


def dissection_rhs(s, prec):
    denom = 2 * s
    return add(theta_over_bq(theta_full(denom, prec), prec, denom), -correction_term(denom, prec))


def split_lhs(s, prec, part):
    """
    The dissection LHS with the inner sum cut at n = sm+k.

    part 'first' keeps n >= sm+k+1, part 'second' keeps n <= sm+k.
    """
    denom = 2 * s
    total = _zero(prec, denom)
    for k in range(s):
        inner_spec = dissection_inner(s, k)
        bound = summation_bound(inner_spec, prec, denom)
        prefix = []
        running = _zero(prec, denom)
        for n in range(bound + 1):
            running = add(running, single_term(inner_spec, n, prec, denom))
            prefix.append(running)
        full = running

        outer_spec = dissection_outer(s, k)
        for m in range(summation_bound(outer_spec, prec, denom) + 1):
            head_term = single_term(outer_spec, m, prec, denom)
            if head_term.is_zero():
                continue
            cut = s * m + k
            head = prefix[min(cut, bound)] if prefix else _zero(prec, denom)
            inner = head if part == "second" else add(full, -head)
            total = add(total, mul(head_term, inner))
    return total


def _theorem_sides(prec, s):
    return [("lhs", dissection_lhs(s, prec)), ("rhs", dissection_rhs(s, prec))]


def _first_part_sides(prec, s):
    denom = 2 * s
    rhs = add(theta_over_bq(partial_theta("positive", denom, prec), prec, denom), -correction_term(denom, prec))
    return [("lhs", split_lhs(s, prec, "first")), ("rhs", rhs)]


def _second_part_sides(prec, s):
    denom = 2 * s
    rhs = theta_over_bq(partial_theta("nonpositive", denom, prec), prec, denom)
    return [("lhs", split_lhs(s, prec, "second")), ("rhs", rhs)]


def gmr_lhs(prec):
    """The two-product generalized modular relation as printed, D = 4"""
    first = mul(
        sum_expand(spec(1, a=Affine(0, -2), pochs=(BQ,)), prec, 4),
        sum_expand(spec(Fraction(1, 4), a=INDEX, b=INDEX), prec, 4),
    )
    second = mul(
        sum_expand(spec(1, 1, a=Affine(-1, -2), pochs=(BQ,)), prec, 4),
        sum_expand(spec(Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), a=INDEX, b=INDEX), prec, 4),
    )
    return add(first, second)


def _gmr_sides(prec):
    rhs = add(theta_over_bq(theta_full(4, prec), prec, 4), -correction_term(4, prec))
    return [("lhs", gmr_lhs(prec)), ("rhs", rhs)]


def _gen_jtpi_sides(prec):
    lhs = mul(
        sum_expand(spec(Fraction(1, 2), a=Affine(0, -1), pochs=(BQ,)), prec, 2),
        sum_expand(spec(Fraction(1, 2), a=INDEX, b=INDEX), prec, 2),
    )
    rhs = add(theta_over_bq(theta_full(2, prec), prec, 2), -correction_term(2, prec))
    return [("lhs", lhs), ("rhs", rhs)]


def _jtpi_sides(prec):
    theta = theta_full(1, prec)
    product = q_product(
        (infinite(-1, 1, 2, a=1), infinite(-1, 1, 2, a=-1), infinite(1, 2, 2)),
        prec,
    )
    q2 = poch(1, 2, 2)
    halves = mul(
        sum_expand(spec(1, a=Affine(0, -1), pochs=(q2,)), prec, 1),
        sum_expand(spec(1, a=INDEX, pochs=(q2,)), prec, 1),
    )
    return [("theta", theta), ("product", product), ("halves", mul(q_product((infinite(1, 2, 2),), prec), halves))]


def _s3_sides(prec):
    def block(offset, outer_lin, a_const, inner_lin):
        outer = spec(Fraction(3, 2), outer_lin, a=Affine(a_const, -3), pochs=(BQ,))
        inner = spec(Fraction(1, 6), inner_lin, a=INDEX, b=INDEX)
        e0 = to_t_exponent(offset, 6)
        body = mul(sum_expand(outer, prec, 6), sum_expand(inner, prec, 6))
        return body.truncate(prec - e0).shift(e0)

    lhs = _sum_all(
        (
            block(0, 0, 0, 0),
            block(Fraction(1, 6), 1, -1, Fraction(4, 6)),
            block(Fraction(2, 3), 2, -2, Fraction(2, 6)),
        ),
        prec,
        6,
    )
    return [("lhs", lhs), ("rhs", dissection_rhs(3, prec))]


def _rogers_sides(which):
    def build(prec):
        return [(which, named_series(which, prec)), (f"rogers-{which}", named_series(f"rogers-{which}", prec))]

    return build


def _mre_sides(prec):
    lhs = add(
        mul(named_series("G", prec), at_q_power("G", 4, prec)),
        mul(named_series("H", prec), at_q_power("H", 4, prec)).truncate(prec - 1).shift(1),
    )
    theta_side = mul(named_series("phi", prec), q_product((infinite(1, 2, 2, power=-1),), prec))
    product = q_product((infinite(-1, 1, 2, power=2),), prec)
    derived_core = substitute_q_power(specialize(gmr_lhs(prec), a=1, b=1), 4)
    derived = mul(q_product((infinite(-1, 2, 2),), prec), derived_core)
    return [("lhs", lhs), ("phi/(q2;q2)", theta_side), ("product", product), ("from-gmr", derived)]


def _gh5mock_sides(prec):
    lhs = add(
        mul(named_series("G", prec), at_q_power("f0", 4, prec)),
        -mul(named_series("H", prec), at_q_power("f1", 4, prec)).truncate(prec - 1).shift(1),
    )
    false_theta = specialize(theta_full(1, prec), a=-1)
    first = mul(q_product((infinite(-1, 2, 4),), prec), false_theta)

    q4 = Monomial(1, 0, 0, 4)
    double = _zero(prec, 1)
    for big_n in range(1, math.isqrt(prec) + 1):
        e0 = big_n * big_n
        for ell in range(big_n):
            sign = -1 if (big_n - 1 - ell) % 2 else 1
            term = inverse_poch(q4, 4, ell, prec).truncate(prec - e0) * sign
            double = add(double, term.shift(e0))
    second = mul(q_product((infinite(-1, 2, 2),), prec), double) * 2
    rhs = add(first, second)

    derived_core = substitute_q_power(specialize(gmr_lhs(prec), a=-1, b=-1), 4)
    derived = mul(q_product((infinite(-1, 2, 2),), prec), derived_core)
    return [("lhs", lhs), ("rhs", rhs), ("from-gmr", derived)]


def mock_gen_lhs(prec):
    return sum_expand(spec(1, sign=INDEX, pochs=(poch(-1, 2, 2, b=1),)), prec, 1)


def mock_gen_rhs(prec):
    phi_minus = flip_q(named_series("phi", prec))
    first = mul(phi_minus, inverse_poch(Monomial(-1, 0, 1, 1), 1, None, prec))
    tail = sum_expand(spec(1, sign=Affine(-1, 1), start=1, pochs=(poch(-1, 1, 2, b=1),)), prec, 1)
    return add(first, tail * ONE_PLUS_B)


def _mock_gen_sides(prec):
    return [("lhs", mock_gen_lhs(prec)), ("rhs", mock_gen_rhs(prec))]


def _mock_3rd_sides(prec):
    two_psi = named_series("psi-mock", prec) * 2
    lhs = add(named_series("phi-mock", prec), two_psi)
    product = q_product((infinite(-1, 1, 2, power=3), infinite(1, 2, 2)), prec)
    via_lhs = add(flip_q(specialize(mock_gen_lhs(prec), b=1)), two_psi)
    via_rhs = add(flip_q(specialize(mock_gen_rhs(prec), b=1)), two_psi)
    return [("lhs", lhs), ("product", product), ("from-mock-gen-lhs", via_lhs), ("from-mock-gen-rhs", via_rhs)]


def _mock_rewrite_sides(prec):
    q2 = Monomial(1, 0, 0, 2)

    def inner_minus_b(ell):
        return inverse_poch(q2, 2, ell, prec) * CoeffPoly.monomial(-1 if ell % 2 else 1, 0, ell)

    def outer(n):
        e0 = n * n
        if e0 > prec:
            return None
        return CoeffPoly.constant(-1 if n % 2 else 1), e0

    direct = _tail_double_sum(outer, inner_minus_b, prec, 1) * ONE_PLUS_B

    rewritten = _zero(prec, 1)
    for m in range(1, math.isqrt(prec) + 1):
        for ell in range(0, math.isqrt(prec) + 1):
            e0 = (m + ell) ** 2
            if e0 > prec:
                break
            term = inverse_poch(q2, 2, ell, prec).truncate(prec - e0)
            term = term * CoeffPoly.monomial(-1 if m % 2 else 1, 0, ell)
            rewritten = add(rewritten, term.shift(e0))
    rewritten = rewritten * ONE_PLUS_B

    from_correction = substitute_q_power(negate_parameter(specialize(correction_term(2, prec), a=-1), "b"), 2)
    return [("from-correction", from_correction), ("lhs", direct), ("rhs", rewritten)]


def annihilation_lhs(s, prec, symbolic_b=True):
    denom = 2 * s
    products = []
    for k in range(s):
        outer = spec(
            Fraction(s, 2),
            Fraction(2 * k + 1, 2),
            Fraction(k * (k + 1), 2 * s),
            sign=Affine(-k, s),
            pochs=(BQ if symbolic_b else QN,),
        )
        inner = spec(
            Fraction(1, 2 * s),
            Fraction(2 * _j(k) * s - 2 * k - 1, 2 * s),
            sign=INDEX,
            b=INDEX if symbolic_b else Affine(),
        )
        products.append(mul(sum_expand(outer, prec, denom), sum_expand(inner, prec, denom)))
    return _sum_all(products, prec, denom)


def annihilation_rhs(s, prec):
    """-(1-b) sum_{n>=1} (-1)^n q^(n(n-1)/(2s)) sum_{l<n} b^l/(q)_l"""
    denom = 2 * s

    def outer(n):
        e0 = n * (n - 1)
        if e0 > prec:
            return None
        return CoeffPoly.constant(-1 if n % 2 else 1), e0

    def inner(ell):
        return inverse_poch(Q_BASE, 1, ell, prec, denom) * CoeffPoly.monomial(1, 0, ell)

    return _tail_double_sum(outer, inner, prec, denom) * (-ONE_MINUS_B)


def _annihilation_sides(prec, s):
    lifted = prec + math.isqrt(prec + 1) + 2
    theta_killer = TMonomial(-1, -1)
    via_lhs = specialize(dissection_lhs(s, lifted), a=theta_killer, prec=prec)
    via_rhs = specialize(dissection_rhs(s, lifted), a=theta_killer, prec=prec)
    return [
        ("lhs", annihilation_lhs(s, prec)),
        ("rhs", annihilation_rhs(s, prec)),
        ("from-dissection-lhs", via_lhs),
        ("from-dissection-rhs", via_rhs),
    ]


def _rhs_zero_sides(prec, s):
    sides = [("lhs", annihilation_lhs(s, prec, symbolic_b=False)), ("rhs", _zero(prec, 2 * s))]
    if s == 3:
        blocks = []
        for sign, (o_sq, o_lin, o_const), (i_lin,) in (
            (1, (Fraction(3, 2), Fraction(1, 2), 0), (Fraction(-1, 6),)),
            (-1, (Fraction(3, 2), Fraction(3, 2), Fraction(1, 3)), (Fraction(3, 6),)),
            (1, (Fraction(3, 2), Fraction(5, 2), 1), (Fraction(1, 6),)),
        ):
            outer = spec(o_sq, o_lin, o_const, sign=INDEX, coeff=sign)
            inner = spec(Fraction(1, 6), i_lin, sign=INDEX)
            blocks.append(mul(sum_expand(outer, prec, 6), sum_expand(inner, prec, 6)))
        sides.append(("display", _sum_all(blocks, prec, 6)))
    return sides


NEG_Q2 = poch(-1, 2, 2)  # (-q^2;q^2)_n
Q2 = poch(1, 2, 2)  # (q^2;q^2)_n


def stacks_parts(prec):
    """The four sums of the stacks identity: A, N, B, N+"""
    a_sum = sum_expand(spec(2, 1, pochs=(NEG_Q2,)), prec, 1)
    n_sum = sum_expand(spec(Fraction(1, 2), Fraction(-1, 2), pochs=(Q2,)), prec, 1)
    b_sum = sum_expand(spec(2, 3, 1, pochs=(NEG_Q2,)), prec, 1)
    n_plus = sum_expand(spec(Fraction(1, 2), Fraction(1, 2), pochs=(Q2,)), prec, 1)
    return a_sum, n_sum, b_sum, n_plus


def stacks_rhs(prec):
    q2 = Monomial(1, 0, 0, 2)

    def outer(n):
        e0 = n * (n - 1) // 2
        if e0 > prec:
            return None
        return CoeffPoly.constant(-1 if n % 2 else 1), e0

    def inner(ell):
        return inverse_poch(q2, 2, ell, prec) * (-1 if ell % 2 else 1)

    return _tail_double_sum(outer, inner, prec, 1) * -2


def _stacks_sides(prec):
    a_sum, n_sum, b_sum, n_plus = stacks_parts(prec)
    lhs = add(mul(a_sum, n_sum), -mul(b_sum, n_plus))
    annihilated = specialize(annihilation_lhs(2, 2 * prec + 1), b=-1)
    derived = substitute_q_power(annihilated, 2)
    return [("lhs", lhs), ("rhs", stacks_rhs(prec)), ("from-annihilation", derived)]


def inverse_minus_q_minus_q(prec):
    """1/(-q;-q)_inf"""
    return inverse_poch(Monomial(-1, 0, 0, 1), 1, None, prec, 1, nome_sign=-1)


def congruence_series(prec):
    a_sum, n_sum, b_sum, _ = stacks_parts(prec)
    braces = add(n_sum, -mul(inverse_minus_q_minus_q(prec), b_sum))
    return mul(a_sum, braces)


def _congruence_sides(prec):
    return [("mod-2", reduce_mod(congruence_series(prec), 2)), ("zero", _zero(prec, 1))]


def _stacks_substituted_sides(prec):
    a_sum, n_sum, b_sum, _ = stacks_parts(prec)
    inv = inverse_minus_q_minus_q(prec)
    numerator = PochFactor(Monomial(-1, 0, 0, 2), 2, Affine(-1, 1), 1, 1)
    tail = sum_expand(spec(1, start=1, pochs=(numerator,)), prec, 1)
    left = add(
        mul(a_sum, add(n_sum, -mul(inv, b_sum))),
        -mul(mul(inv, b_sum), tail) * 2,
    )
    return [("substituted", left), ("stacks-rhs", stacks_rhs(prec))]


def stacks_split_printed(prec):
    """Parity split of the stacks double sum over n and l, in its printed form

    Not an equal side: it exceeds the stacks right-hand side by 2q^12 + 2q^16 + 2q^20 + ...
    """
    first = sum_expand(spec(2, 1, pochs=(poch(1, 2, 2, length=Affine(0, 2)),), coeff=2), prec, 1)
    q2 = Monomial(1, 0, 0, 2)
    q4 = Monomial(1, 0, 0, 4)
    double = _zero(prec, 1)
    big_n = 1
    while 2 * big_n * big_n - big_n + 2 <= prec:
        for ell in range(1, big_n + 1):
            m = big_n - ell
            e0 = 2 * big_n * big_n - big_n + 2 * ell * ell
            if e0 > prec:
                break
            body = mul(inverse_poch(q2, 2, big_n - 1, prec), inverse_poch(q4, 4, m, prec)).truncate(prec - e0)
            double = add(double, (body * (-1 if ell % 2 else 1)).shift(e0))
        big_n += 1
    return add(first, -double * 2)


def _mcintosh_sides(prec, mu):
    return [("lhs", named_series("mcintosh-lhs", prec, mu=mu)), ("rhs", named_series("mcintosh-rhs", prec, mu=mu))]


def gmr2_lhs(prec):
    theta = theta_full(4, prec)
    with_minus = sum_expand(spec(Fraction(1, 4), a=INDEX, sign=INDEX), prec, 4)
    with_plus = sum_expand(spec(Fraction(1, 4), a=INDEX), prec, 4)
    return add(mul(theta, with_minus), -mul(negate_parameter(theta, "a"), with_plus))


def gmr2_rhs(prec):
    body = sum_expand(spec(1, 1, Fraction(1, 4), a=Affine(-1, -2), coeff=2), prec, 4)
    return mul(q_product((infinite(1, 1, 1),), prec, 4), body)


def _gmr2_sides(prec):
    return [("lhs", gmr2_lhs(prec)), ("rhs", gmr2_rhs(prec))]


def _watson_1_sides(prec):
    g_value, phi = named_series("G", prec), named_series("phi", prec)
    lhs = add(mul(flip_q(g_value), phi), -mul(g_value, flip_q(phi)))
    rhs = mul(at_q_power("H", 4, prec), at_q_power("psi", 2, prec)).truncate(prec - 1).shift(1) * 2
    derived = mul(
        q_product((infinite(-1, 2, 2),), prec),
        substitute_q_power(specialize(gmr2_lhs(prec), a=1), 4),
    )
    return [("lhs", lhs), ("rhs", rhs), ("from-gmr2", derived)]


def _watson_2_sides(prec):
    h_value, phi = named_series("H", prec), named_series("phi", prec)
    lhs = add(mul(flip_q(h_value), phi), mul(h_value, flip_q(phi)))
    rhs = mul(at_q_power("G", 4, prec), at_q_power("psi", 2, prec)) * 2
    # a = q^(1/2) = t^2 after clearing the q^(-1/4) with a shift by t
    shifted = gmr2_lhs(specialisation_margin(prec)).shift(1)
    core = specialize(shifted, a=TMonomial(1, 2), prec=prec)
    derived = mul(q_product((infinite(-1, 2, 2),), prec), substitute_q_power(core, 4))
    return [("lhs", lhs), ("rhs", rhs), ("from-gmr2", derived)]


def intermediate_lhs(prec):
    shifted_plus = sum_expand(spec(Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), a=INDEX), prec, 4)
    shifted_minus = sum_expand(spec(Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), a=INDEX, sign=INDEX), prec, 4)
    plain_plus = sum_expand(spec(Fraction(1, 4), a=INDEX), prec, 4)
    plain_minus = sum_expand(spec(Fraction(1, 4), a=INDEX, sign=INDEX), prec, 4)
    return add(mul(shifted_plus, plain_minus), mul(shifted_minus, plain_plus))


def _intermediate_sides(prec):
    return [("lhs", intermediate_lhs(prec)), ("rhs", QSeries.monomial(2, 1, prec, 4))]


def _entry_320_sides(prec):
    g_value, h_value = named_series("G", prec), named_series("H", prec)
    lhs = add(mul(g_value, flip_q(h_value)), mul(flip_q(g_value), h_value))
    squared = q_product((infinite(-1, 2, 2, power=2),), prec + 1)
    rhs = squared.truncate(prec) * 2
    core = substitute_q_power(specialize(intermediate_lhs(prec + 1), a=1), 4)
    derived = mul(squared, core).shift(-1)
    return [("lhs", lhs), ("rhs", rhs), ("from-intermediate", derived)]


def _bressoud_sides(prec, s):
    return [("lhs", named_series("bressoud-lhs", prec, s=s)), ("rhs", named_series("bressoud-rhs", prec, s=s))]


def _three_way_sides(prec, s):
    first = sum_expand(spec(1, a=INDEX, b=INDEX, pochs=(AQ, BQ)), prec, 1)
    middle_parts = []
    for k in range(s):
        j = _j(k)
        middle_parts.append(
            sum_expand(
                spec(
                    s,
                    s * j + k,
                    k * j,
                    a=Affine(k, s),
                    b=Affine(j, 1),
                    pochs=(AQ, poch(b=1, length=Affine(k, s))),
                ),
                prec,
                1,
            )
        )
    middle = _sum_all(middle_parts, prec, 1)
    tail = sum_expand(spec(0, 1, a=INDEX, b=Affine(1, 0), start=1, pochs=(BQ,)), prec, 1)
    last = add(QSeries.one(prec), tail)
    return [("durfee-square", first), ("durfee-rectangle", middle), ("closed", last)]


def _cor_32_sides(prec, s, n):
    shifted = Monomial(1, 0, 0, n + 1)
    parts = []
    for k in range(s):
        j = _j(k)
        parts.append(
            sum_expand(
                spec(
                    s,
                    s * j + k + n,
                    j * (k + n),
                    b=Affine(k, s),
                    pochs=(BQ, PochFactor(shifted, 1, Affine(k, s))),
                ),
                prec,
                1,
            )
        )
    lhs = _sum_all(parts, prec, 1)
    tail = sum_expand(spec(0, 1, n, b=INDEX, start=1, pochs=(PochFactor(shifted),)), prec, 1)
    return [("lhs", lhs), ("rhs", add(QSeries.one(prec), tail))]


def _cor_33_sides(prec, s, m):
    shifted = Monomial(1, 0, 1, m + 1)
    parts = []
    for k in range(s):
        j = _j(k)
        parts.append(
            sum_expand(
                spec(
                    s,
                    s * (m + j) + k,
                    k * (m + j),
                    b=Affine(k, s),
                    pochs=(PochFactor(shifted), poch(length=Affine(k, s))),
                ),
                prec,
                1,
            )
        )
    lhs = _sum_all(parts, prec, 1)
    return [("lhs", lhs), ("rhs", inverse_poch(shifted, 1, None, prec))]


# -- registry ----------------------------------------------------------------


@dataclass(frozen=True)
class IdentityEntry:
    """
    One registered identity.

    `build(prec, **params)` returns the labelled sides, all over the same
    denominator; `ranges` bounds each parameter (None = unbounded above);
    `grid(s_max)` lists the parameter sets of a full run.
    """

    id: str
    summary: str
    reference: str
    build: object
    ranges: dict = field(default_factory=dict)
    grid_limits: dict = field(default_factory=dict)
    denom: object = None
    symbolic: str = ""
    notes: tuple = ()
    prec_floor: int = 0

    def grid(self, s_max=DEFAULT_S_MAX):
        combos = [{}]
        for name, (lo, hi) in self.ranges.items():
            top = self.grid_limits.get(name, hi)
            if name == "s":
                top = s_max if top is None else min(top, s_max)
            values = range(lo, top + 1)
            combos = [dict(combo, **{name: value}) for combo in combos for value in values]
        return combos

    def check_params(self, params):
        unknown = set(params) - set(self.ranges)
        if unknown:
            raise UsageError(f"Identity {self.id!r} does not take {', '.join(sorted(unknown))}")
        for name, (lo, hi) in self.ranges.items():
            if name not in params:
                raise UsageError(f"Identity {self.id!r} needs the parameter {name!r}")
            value = params[name]
            if not isinstance(value, int) or value < lo or (hi is not None and value > hi):
                upper = "" if hi is None else f"..{hi}"
                raise UsageError(f"Identity {self.id!r} supports {name} in {lo}{upper}, got {value!r}")

    def denominator(self, params):
        if callable(self.denom):
            return self.denom(params)
        return self.denom or 1


def _by_s(params):
    return 2 * params["s"]


REGISTRY = {
    entry.id: entry
    for entry in (
        IdentityEntry(
            "gmr",
            "Ramanujan's generalized modular relation (two products of sums)",
            "generalized modular relation, 'It is a generalized modular relation which states'",
            lambda prec: _gmr_sides(prec),
            denom=4,
            symbolic="a, b",
        ),
        IdentityEntry(
            "theorem-1.1",
            "Rogers-Ramanujan dissection of the theta function",
            "main dissection theorem, 'Let s in N. For a in C, a != 0'",
            lambda prec, s: _theorem_sides(prec, s),
            ranges={"s": (1, None)},
            denom=_by_s,
            symbolic="a, b",
        ),
        IdentityEntry(
            "firstPart",
            "dissection restricted to n >= sm+k+1 against the positive partial theta function",
            "'Let S_1 denote the left-hand side'",
            lambda prec, s: _first_part_sides(prec, s),
            ranges={"s": (1, None)},
            denom=_by_s,
            symbolic="a, b",
        ),
        IdentityEntry(
            "secondPart",
            "dissection restricted to n <= sm+k against the non-positive partial theta function",
            "'Let S_2 denote the left-hand side'",
            lambda prec, s: _second_part_sides(prec, s),
            ranges={"s": (1, None)},
            denom=_by_s,
            symbolic="a, b",
        ),
        IdentityEntry(
            "thm-3.1-three-way",
            "Durfee square sum = Durfee rectangle sum = closed form",
            "'This result is proved combinatorially'",
            lambda prec, s: _three_way_sides(prec, s),
            ranges={"s": (1, None)},
            symbolic="a, b",
        ),
        IdentityEntry(
            "cor-3.2",
            "three-way identity at b = q^n with a renamed to b",
            "'Now let b=q^n and then replace'",
            lambda prec, s, n: _cor_32_sides(prec, s, n),
            ranges={"s": (1, 4), "n": (1, 6)},
            symbolic="b",
        ),
        IdentityEntry(
            "cor-3.3",
            "three-way identity at b = 1, a = b q^m",
            "'Let b=1 in the second equality'",
            lambda prec, s, m: _cor_33_sides(prec, s, m),
            ranges={"s": (1, 4), "m": (1, 6)},
            symbolic="b",
        ),
        IdentityEntry(
            "gen-jtpi",
            "generalization of the Jacobi triple product (s = 1)",
            "'generalization of the Jacobi triple'",
            lambda prec: _gen_jtpi_sides(prec),
            denom=2,
            symbolic="a, b",
        ),
        IdentityEntry(
            "jtpi",
            "Jacobi triple product, with the intermediate two-sum form",
            "'For any complex number a != 0'",
            lambda prec: _jtpi_sides(prec),
            symbolic="a",
        ),
        IdentityEntry(
            "s3",
            "the s = 3 dissection as printed, with q^(1/6) and q^(2/3) prefactors",
            "'The special case s=3'",
            lambda prec: _s3_sides(prec),
            denom=6,
            symbolic="a, b",
        ),
        IdentityEntry(
            "rogers-1",
            "Rogers' identity for G(q)",
            "'use Rogers' identities'",
            _rogers_sides("G"),
        ),
        IdentityEntry(
            "rogers-2",
            "Rogers' identity for H(q)",
            "'use Rogers' identities'",
            _rogers_sides("H"),
        ),
        IdentityEntry(
            "mre",
            "G(q)G(q^4) + qH(q)H(q^4) = phi(q)/(q^2;q^2)_inf = (-q;q^2)_inf^2",
            "'the well-known modular relation'",
            lambda prec: _mre_sides(prec),
        ),
        IdentityEntry(
            "gh5mock",
            "G(q)f0(q^4) - qH(q)f1(q^4) in terms of theta and a double sum",
            "'two fifth order mock theta functions'",
            lambda prec: _gh5mock_sides(prec),
        ),
        IdentityEntry(
            "mock-gen",
            "generalized third order mock theta identity",
            "'generalized third order mock theta functions'",
            lambda prec: _mock_gen_sides(prec),
            symbolic="b",
        ),
        IdentityEntry(
            "mock-3rd",
            "phi(q) + 2 psi(q) = (-q;q^2)_inf^3 (q^2;q^2)_inf",
            "'phi(q)+2psi(q)'",
            lambda prec: _mock_3rd_sides(prec),
        ),
        IdentityEntry(
            "mock-rewrite",
            "rewriting of the correction term at s = 1, a = -1, b -> -b, q -> q^2",
            "'sum_{n=1}^inf (-1)^n q^{n^2} sum_{l=0}^{n-1}'",
            lambda prec: _mock_rewrite_sides(prec),
            symbolic="b",
        ),
        IdentityEntry(
            "annihilation",
            "dissection at a = -q^(-1/(2s)), where the theta function vanishes",
            "'annihilate the theta function'",
            lambda prec, s: _annihilation_sides(prec, s),
            ranges={"s": (1, None)},
            denom=_by_s,
            symbolic="b",
        ),
        IdentityEntry(
            "rhs-zero",
            "annihilated dissection at b = 1 sums to zero",
            "'letting b=1 in the above corollary'",
            lambda prec, s: _rhs_zero_sides(prec, s),
            ranges={"s": (1, None)},
            denom=_by_s,
        ),
        IdentityEntry(
            "stacks",
            "annihilated dissection at s = 2, b = -1, q -> q^2",
            "'If we let s=2, b=-1'",
            lambda prec: _stacks_sides(prec),
        ),
        IdentityEntry(
            "mcintosh-mu",
            "McIntosh's identity",
            "'McIntosh's identity is given by'",
            lambda prec, mu: _mcintosh_sides(prec, mu),
            ranges={"mu": (0, 1)},
        ),
        IdentityEntry(
            "congruence",
            "stacks-derived series vanishes modulo 2",
            "'the following congruence can obviously be extracted'",
            lambda prec: _congruence_sides(prec),
            prec_floor=100,
        ),
        IdentityEntry(
            "stacks-substituted",
            "stacks identity after substituting Andrews' formula",
            "'splitting the double sum over n and l'",
            lambda prec: _stacks_substituted_sides(prec),
            notes=(
                "printed parity split over n and l is not compared: it exceeds the right-hand side "
                "by 2q^12 + 2q^16 + 2q^20 + ... (see stacks_split_printed)",
            ),
        ),
        IdentityEntry(
            "gmr2",
            "Ramanujan's companion identity without b",
            "'On page 26 of the Lost Notebook'",
            lambda prec: _gmr2_sides(prec),
            denom=4,
            symbolic="a",
            notes=("printed denominator (bq)_m on the right-hand side is read as (q)_m; no b occurs elsewhere",),
        ),
        IdentityEntry(
            "watson-1",
            "G(-q)phi(q) - G(q)phi(-q) = 2qH(q^4)psi(q^2)",
            "'Watson's identities'",
            lambda prec: _watson_1_sides(prec),
        ),
        IdentityEntry(
            "watson-2",
            "H(-q)phi(q) + H(q)phi(-q) = 2G(q^4)psi(q^2)",
            "'Watson's identities'",
            lambda prec: _watson_2_sides(prec),
        ),
        IdentityEntry(
            "entry-3.20",
            "G(q)H(-q) + G(-q)H(q) = 2(-q^2;q^2)_inf^2",
            "'G(q)H(-q)+G(-q)H(q)'",
            lambda prec: _entry_320_sides(prec),
        ),
        IdentityEntry(
            "entry-3.20-intermediate",
            "the two-product identity equal to 2q^(1/4)",
            "'Now let a=1 (or -1)'",
            lambda prec: _intermediate_sides(prec),
            denom=4,
            symbolic="a",
        ),
        IdentityEntry(
            "bressoud",
            "Bressoud's generalization of Rogers' identity",
            "'Bressoud has further generalized'",
            lambda prec, s: _bressoud_sides(prec, s),
            ranges={"s": (2, 4)},
            symbolic="a",
        ),
    )
}


def get_entry(identity_id):
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UsageError(f"Unknown identity {identity_id!r}; known: {', '.join(REGISTRY)}") from None


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    """Add delta * a^a_exp b^b_exp t^exponent to one side (mutation testing hook)"""

    side: int = 1
    exponent: int = 0
    delta: int = 1
    a_exp: int = 0
    b_exp: int = 0

    def apply(self, sides):
        if not 0 <= self.side < len(sides):
            raise UsageError(f"Perturbation targets side {self.side}, identity has {len(sides)} sides")
        label, target = sides[self.side]
        coeff = CoeffPoly.monomial(self.delta, self.a_exp, self.b_exp)
        bump = QSeries.monomial(coeff, self.exponent, target.prec, target.denom)
        patched = list(sides)
        patched[self.side] = (label, add(target, bump))
        return patched


@dataclass
class IdentityReport:
    """Outcome of verifying one identity at one parameter set"""

    id: str
    params: dict
    prec: int
    denom: int
    status: str
    first_diff: tuple = None
    elapsed: float = 0.0
    notes: tuple = ()
    sides: tuple = ()

    @property
    def passed(self):
        return self.status == "pass"

    def to_record(self):
        diff = None
        if self.first_diff is not None:
            labels, e, poly = self.first_diff
            diff = {
                "sides": list(labels),
                "e": e,
                "diff": [{"a": i, "b": j, "c": str(c)} for (i, j), c in poly.items()],
            }
        return {
            "id": self.id,
            "params": self.params,
            "prec": self.prec,
            "denom": self.denom,
            "status": self.status,
            "first_diff": diff,
            "elapsed": round(self.elapsed, 4),
            "notes": list(self.notes),
            "sides": list(self.sides),
        }

    def summary_line(self):
        params = ",".join(f"{k}={v}" for k, v in self.params.items()) or "-"
        line = f"{self.id:<24} {params:<10} {self.status.upper():<4} P={self.prec} D={self.denom} {self.elapsed:.2f}s"
        if self.first_diff is not None:
            labels, e, poly = self.first_diff
            line += f"  first diff at t^{e} ({labels[0]} vs {labels[1]}): {poly!r}"
        return line


def compare_sides(sides):
    """Earliest discrepancy of every side against the first one, or None"""
    base_label, base = sides[0]
    earliest = None
    for label, other in sides[1:]:
        found = first_difference(base, other)
        if found is not None and (earliest is None or found[0] < earliest[1]):
            earliest = ((base_label, label), found[0], found[1])
    return earliest


def verify(identity_id, s=None, prec=DEFAULT_PREC, perturb=None, **params):
    """Build every side of an identity at precision prec and compare them exactly"""
    entry = get_entry(identity_id)
    if s is not None:
        params["s"] = s
    entry.check_params(params)
    if prec < 0:
        raise UsageError(f"Precision must be non-negative, got {prec}")
    prec = max(prec, entry.prec_floor)

    started = time.perf_counter()
    sides = entry.build(prec, **params)
    denom = entry.denominator(params)
    for label, side in sides:
        if side.denom != denom:
            raise UsageError(f"Side {label!r} of {identity_id} has denominator {side.denom}, expected {denom}")
    reached = min(side.prec for _, side in sides)
    if reached < prec:
        logger.warning(f"{identity_id} {params}: sides only known to t^{reached}, requested t^{prec}")
    sides = [(label, side.truncate(reached)) for label, side in sides]
    if perturb is not None:
        sides = perturb.apply(sides)

    first_diff = compare_sides(sides)
    report = IdentityReport(
        id=identity_id,
        params=dict(params),
        prec=reached,
        denom=denom,
        status="pass" if first_diff is None else "fail",
        first_diff=first_diff,
        elapsed=time.perf_counter() - started,
        notes=entry.notes,
        sides=tuple(label for label, _ in sides),
    )
    for note in entry.notes:
        logger.warning(f"{identity_id}: {note}")
    logger.info(report.summary_line())
    return report


def registry_jobs(ids=None, s_max=DEFAULT_S_MAX, s_values=None):
    """(id, params) pairs of a full run in registry order, optionally filtered"""
    selected = list(REGISTRY) if ids is None else list(ids)
    jobs = []
    for identity_id in selected:
        entry = get_entry(identity_id)
        for params in entry.grid(s_max):
            if s_values is not None and "s" in params and params["s"] not in s_values:
                continue
            jobs.append((identity_id, params))
    return jobs


def _run_job(job):
    identity_id, params, prec, perturb = job
    return verify(identity_id, prec=prec, perturb=perturb, **params)


def iter_verify(jobs, prec=DEFAULT_PREC, workers=1, perturb=None):
    """Yield reports in job order; with workers > 1 the jobs run on a process pool"""
    payload = [(identity_id, dict(params), prec, perturb) for identity_id, params in jobs]
    if workers <= 1 or len(payload) <= 1:
        for job in payload:
            yield _run_job(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as executor:
        yield from executor.map(_run_job, payload)


def verify_all(prec=DEFAULT_PREC, s_max=DEFAULT_S_MAX, ids=None, workers=1, perturb=None):
    """Run every registry entry over its parameter grid; failures are data, not errors"""
    return list(iter_verify(registry_jobs(ids, s_max), prec, workers, perturb))


def sides_record(identity_id, prec=DEFAULT_PREC, **params):
    """Serialized sides of an identity, for golden files and debugging"""
    entry = get_entry(identity_id)
    entry.check_params(params)
    return {label: to_record(side) for label, side in entry.build(prec, **params)}
