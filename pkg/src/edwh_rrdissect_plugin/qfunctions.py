#!/usr/bin/env python3
"""
Q-Functions - Builders For Named Series And Products
====================================================

Pochhammer symbols, theta and partial theta sums, the double-sum correction
term and the declarative SumSpec description of one-parameter
q-hypergeometric sums. Every builder returns an exact QSeries.

Exponents of q are given in q-units (Fractions); a builder converts them to
t-units for the requested denominator and refuses anything that does not
land on an integer power of t.

Author: Based on series.py
Date: October 2026
"""

import functools
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .rr_base import DomainError, UsageError
from .series import CoeffPoly, QSeries, add, mul, specialize

logger = logging.getLogger(__name__)


def to_t_exponent(q_exp, denom):
    """q^(q_exp) as an integer power of t where t^denom = q"""
    value = Fraction(q_exp) * denom
    if value.denominator != 1:
        raise UsageError(f"q^({q_exp}) is not an integral power of t for denominator {denom}")
    return value.numerator


@dataclass(frozen=True)
class Monomial:
    """coeff * a^a * b^b * q^q with a rational power of q"""

    coeff: int = 1
    a: int = 0
    b: int = 0
    q: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.b < 0:
            raise DomainError("Pochhammer bases never carry negative powers of b")

    def poly(self):
        return CoeffPoly.monomial(self.coeff, self.a, self.b)


@dataclass(frozen=True)
class Affine:
    """const + slope * n"""

    const: int = 0
    slope: int = 0

    def __call__(self, n):
        return self.const + self.slope * n


@dataclass(frozen=True)
class Quadratic:
    """sq * n^2 + lin * n + const, in q-units"""

    sq: Fraction = Fraction(0)
    lin: Fraction = Fraction(0)
    const: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("sq", "lin", "const"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __call__(self, n):
        return self.sq * n * n + self.lin * n + self.const

    def denominators(self):
        return math.lcm(self.sq.denominator, self.lin.denominator, self.const.denominator)


INDEX = Affine(0, 1)


@dataclass(frozen=True)
class PochFactor:
    """
    (base; nome^step)_length raised to `power`.

    `length` is an Affine in the summation index, or None for the infinite
    product. `nome_sign` -1 selects the nome -q. `power` -1 puts the factor in
    the denominator.
    """

    base: Monomial
    step: int = 1
    length: Affine = INDEX
    nome_sign: int = 1
    power: int = -1


@dataclass(frozen=True)
class SumSpec:
    """
    Declarative one-parameter sum

        sum_{n >= n_start} coeff * (-1)^sign(n) * a^a_exp(n) * b^b_exp(n)
                           * q^q_exp(n) * prod(pochhammers)

    with the summation cut off at n_stop when given.
    """

    q_exp: Quadratic
    a_exp: Affine = Affine()
    b_exp: Affine = Affine()
    sign: Affine = None
    pochhammers: tuple = ()
    n_start: int = 0
    n_stop: int = None
    coeff: object = 1

    def natural_denom(self):
        period = 2 * math.lcm(self.q_exp.sq.denominator, self.q_exp.lin.denominator)
        denom = 1
        for n in range(self.n_start, self.n_start + period):
            denom = math.lcm(denom, self.q_exp(n).denominator)
        for factor in self.pochhammers:
            denom = math.lcm(denom, factor.base.q.denominator)
        return denom


# -- Pochhammer symbols ------------------------------------------------------


def clear_caches():
    """Forget every cached Pochhammer expansion"""
    _inverse_poch_cached.cache_clear()
    _poch_cached.cache_clear()


def _factor(base, step, i, denom, nome_sign):
    """The i-th factor 1 - mono * t^k of (base; nome^step)_n"""
    mono = base.poly() * (nome_sign ** (i * step))
    return mono, to_t_exponent(base.q + i * step, denom)


def effective_length(base, step, n, prec, denom):
    """Number of leading factors that differ from 1 modulo t^(prec+1)"""
    if step < 1:
        raise UsageError(f"Pochhammer step must be a positive integer, got {step}")
    first = base.q * denom
    if first > prec:
        return 0
    count = math.floor((Fraction(prec, denom) - base.q) / step) + 1
    return count if n is None else min(n, count)


@functools.lru_cache(maxsize=None)
def _poch_cached(base, step, n, prec, denom, nome_sign):
    if n == 0:
        return QSeries.one(prec, denom)
    mono, k = _factor(base, step, n - 1, denom, nome_sign)
    return _poch_cached(base, step, n - 1, prec, denom, nome_sign).mul_binomial(mono, k)


@functools.lru_cache(maxsize=None)
def _inverse_poch_cached(base, step, n, prec, denom, nome_sign):
    if n == 0:
        return QSeries.one(prec, denom)
    logger.debug(f"Expanding 1/({base};q^{step})_{n} to t^{prec} (denominator {denom})")
    mono, k = _factor(base, step, n - 1, denom, nome_sign)
    if k == 0:
        raise DomainError(f"Cannot invert the Pochhammer factor (1 - {mono}) with zero q-valuation")
    return _inverse_poch_cached(base, step, n - 1, prec, denom, nome_sign).div_binomial(mono, k)


def poch_finite(base, step, n, prec=None, denom=1, nome_sign=1):
    """
    (base; q^step)_n as an exact product.

    Without `prec` the full polynomial is returned, with precision equal to
    its degree in t.
    """
    if n < 0:
        raise DomainError(f"Pochhammer length must be non-negative, got {n}")
    if prec is None:
        prec = sum(to_t_exponent(base.q + i * step, denom) for i in range(n))
        return _poch_cached(base, step, n, max(prec, 0), denom, nome_sign)
    return _poch_cached(base, step, effective_length(base, step, n, prec, denom), prec, denom, nome_sign)


def poch_infinite(base, step, prec, denom=1, nome_sign=1):
    """(base; q^step)_inf truncated; the base needs positive q-valuation"""
    if base.q <= 0:
        raise DomainError(f"(A;q)_inf does not converge formally for A = {base}")
    return _poch_cached(base, step, effective_length(base, step, None, prec, denom), prec, denom, nome_sign)


def inverse_poch(base, step, n, prec, denom=1, nome_sign=1):
    """1/(base; q^step)_n, n None for the infinite product"""
    if n is None:
        if base.q <= 0:
            raise DomainError(f"(A;q)_inf does not converge formally for A = {base}")
    elif n < 0:
        raise DomainError(f"Pochhammer length must be non-negative, got {n}")
    return _inverse_poch_cached(base, step, effective_length(base, step, n, prec, denom), prec, denom, nome_sign)


def poch_power(factor, n, prec, denom=1):
    """One PochFactor evaluated at length n (None = infinite), power applied"""
    if factor.power == 0:
        return QSeries.one(prec, denom)
    if factor.power > 0:
        if n is None:
            series = poch_infinite(factor.base, factor.step, prec, denom, factor.nome_sign)
        else:
            series = poch_finite(factor.base, factor.step, n, prec, denom, factor.nome_sign)
    else:
        series = inverse_poch(factor.base, factor.step, n, prec, denom, factor.nome_sign)
    result = series
    for _ in range(abs(factor.power) - 1):
        result = mul(result, series)
    return result


def q_product(factors, prec, denom=1):
    """Product of PochFactors whose lengths are fixed (an int) or None (infinite)"""
    result = QSeries.one(prec, denom)
    for factor in factors:
        length = factor.length
        if isinstance(length, Affine):
            length = length.const
        result = mul(result, poch_power(factor, length, prec, denom))
    return result


def poch(coeff=1, q=1, step=1, a=0, b=0, power=-1, length=INDEX, nome_sign=1):
    """Shorthand for a PochFactor, e.g. poch(-1, 2, 2) is 1/(-q^2;q^2)_n"""
    return PochFactor(Monomial(coeff, a, b, Fraction(q)), step, length, nome_sign, power)


def infinite(coeff=1, q=1, step=1, a=0, b=0, power=1, nome_sign=1):
    """Shorthand for an infinite product factor, numerator by default"""
    return PochFactor(Monomial(coeff, a, b, Fraction(q)), step, None, nome_sign, power)


# -- sums --------------------------------------------------------------------


def monomial_series(poly, q_exp, prec, denom=1):
    """poly * q^q_exp as a series (zero when beyond the precision)"""
    e = to_t_exponent(q_exp, denom)
    if e < 0:
        raise DomainError(f"Negative power q^({q_exp}) in a power series")
    return QSeries({e: poly} if e <= prec else {}, prec, denom)


def _check_divergent(quad):
    if quad.sq < 0 or (quad.sq == 0 and quad.lin <= 0):
        raise DomainError(f"Exponent {quad} does not tend to infinity; the sum has no truncated expansion")


def summation_bound(spec, prec, denom):
    """Largest n whose leading exponent is still within t^prec (exact, never estimated)"""
    quad = spec.q_exp
    if spec.n_stop is not None:
        return spec.n_stop
    _check_divergent(quad)
    n = spec.n_start
    last = None
    vertex = -quad.lin / (2 * quad.sq) if quad.sq else Fraction(spec.n_start)
    while True:
        if quad(n) * denom <= prec:
            last = n
        elif n >= vertex:
            return last if last is not None else spec.n_start - 1
        n += 1


def term_coefficient(spec, n):
    b_exp = spec.b_exp(n)
    if b_exp < 0:
        raise DomainError(f"Term n={n} carries a negative power of b")
    sign = -1 if spec.sign is not None and spec.sign(n) % 2 else 1
    return CoeffPoly.monomial(sign * spec.coeff, spec.a_exp(n), b_exp)


def sum_expand(spec, prec, denom=None):
    """Exact truncated expansion of a SumSpec"""
    natural = spec.natural_denom()
    denom = denom or natural
    if denom % natural:
        raise UsageError(f"Denominator {denom} cannot hold the exponents of this sum (needs a multiple of {natural})")

    stop = summation_bound(spec, prec, denom)
    logger.debug(f"Summing n = {spec.n_start}..{stop} to t^{prec} (denominator {denom})")
    total = QSeries.zero(prec, denom)
    for n in range(spec.n_start, stop + 1):
        e0 = to_t_exponent(spec.q_exp(n), denom)
        if e0 < 0:
            raise DomainError(f"Term n={n} has a negative power of q")
        if e0 > prec:
            continue
        inner = prec - e0
        body = QSeries.one(inner, denom)
        for factor in spec.pochhammers:
            length = factor.length(n)
            if length < 0:
                raise DomainError(f"Pochhammer length {length} is negative at n={n}")
            body = mul(body, poch_power(factor, length, prec, denom).truncate(inner))
        term = (body * term_coefficient(spec, n)).shift(e0)
        total = add(total, term)
    return total


def _theta_terms(denom2s, prec, denom, indices):
    coeffs = {}
    for n in indices:
        e = to_t_exponent(Fraction(n * n, denom2s), denom)
        if e <= prec:
            coeffs[e] = coeffs.get(e, CoeffPoly()) + CoeffPoly.monomial(1, n, 0)
    return coeffs


def _theta_bound(denom2s, prec, denom):
    """Largest n with n^2/denom2s <= prec/denom"""
    return math.isqrt(prec * denom2s // denom) if prec >= 0 else -1


def theta_full(denom2s, prec, denom=None):
    """sum_{n in Z} a^n q^(n^2/denom2s)"""
    denom = denom or denom2s
    bound = _theta_bound(denom2s, prec, denom)
    return QSeries(_theta_terms(denom2s, prec, denom, range(-bound, bound + 1)), prec, denom)


def partial_theta(side, denom2s, prec, denom=None):
    """sum over n >= 1 ('positive') or n <= 0 ('nonpositive') of a^n q^(n^2/denom2s)"""
    denom = denom or denom2s
    bound = _theta_bound(denom2s, prec, denom)
    if side == "positive":
        indices = range(1, bound + 1)
    elif side == "nonpositive":
        indices = range(-bound, 1)
    else:
        raise UsageError(f"Unknown partial theta side {side!r}, expected 'positive' or 'nonpositive'")
    return QSeries(_theta_terms(denom2s, prec, denom, indices), prec, denom)


def correction_term(denom2s, prec, denom=None):
    """(1 - b) sum_{n>=1} a^n q^(n^2/denom2s) sum_{l<n} b^l/(q)_l"""
    denom = denom or denom2s
    bound = _theta_bound(denom2s, prec, denom)
    q_base = Monomial(q=1)
    inner = QSeries.zero(prec, denom)
    total = QSeries.zero(prec, denom)
    for n in range(1, bound + 1):
        ell = n - 1
        inner = add(inner, inverse_poch(q_base, 1, ell, prec, denom) * CoeffPoly.monomial(1, 0, ell))
        e0 = to_t_exponent(Fraction(n * n, denom2s), denom)
        if e0 > prec:
            continue
        term = (inner.truncate(prec - e0) * CoeffPoly.monomial(1, n, 0)).shift(e0)
        total = add(total, term)
    return total * CoeffPoly({(0, 0): 1, (0, 1): -1})


# -- named series ------------------------------------------------------------


def _spec(sq, lin=0, const=0, **kwargs):
    return SumSpec(q_exp=Quadratic(sq, lin, const), **kwargs)


def _rogers_product_side(lin, prec):
    body = sum_expand(_spec(1, lin, pochhammers=(poch(1, 4, 4),)), prec, 1)
    return mul(q_product((infinite(-1, 2, 2),), prec, 1), body)


def bressoud_lhs(s, prec):
    """sum_m q^(m + s m(m-1)/2) a^m / (q)_m"""
    half = Fraction(s, 2)
    return sum_expand(_spec(half, 1 - half, a_exp=INDEX, pochhammers=(poch(),)), prec, 1)


def bressoud_rhs(s, prec):
    """(-a q^s; q^s)_inf times the (s-1)-fold sum, by nested loops with exponent pruning"""
    if s < 1:
        raise UsageError(f"Bressoud sums need s >= 1, got {s}")
    inner_base = Monomial(1, 0, 0, Fraction(s))
    a_base = Monomial(-1, 1, 0, Fraction(s))
    total = QSeries.zero(prec, 1)

    def visit(i, counts, weight):
        nonlocal total
        if i == s:
            big_n = sum(counts)
            e0 = s * big_n * (big_n - 1) // 2 + weight
            if e0 > prec:
                return
            inner = prec - e0
            body = inverse_poch(a_base, s, big_n, prec).truncate(inner)
            for count in counts:
                body = mul(body, inverse_poch(inner_base, s, count, prec).truncate(inner))
            total = add(total, (body * CoeffPoly.monomial(1, big_n, 0)).shift(e0))
            return
        count = 0
        # the exponent grows with every n_i, so stop as soon as the cheapest completion overshoots
        while True:
            partial = counts + (count,)
            big_n = sum(partial)
            if s * big_n * (big_n - 1) // 2 + weight + i * count > prec:
                break
            visit(i + 1, partial, weight + i * count)
            count += 1

    visit(1, (), 0)
    return mul(q_product((PochFactor(a_base, s, None, 1, 1),), prec, 1), total)


def mcintosh_lhs(mu, prec):
    """sum q^((2n+mu)(2n+mu+1)/2) / (q^2;q^2)_n"""
    return sum_expand(_spec(2, 2 * mu + 1, Fraction(mu * (mu + 1), 2), pochhammers=(poch(1, 2, 2),)), prec, 1)


def mcintosh_rhs(mu, prec):
    """(-q)_inf sum (-1)^n q^(n(n+1)/2 - mu n) / (q^2;q^2)_n"""
    body = sum_expand(
        _spec(Fraction(1, 2), Fraction(1, 2) - mu, sign=INDEX, pochhammers=(poch(1, 2, 2),)),
        prec,
        1,
    )
    return mul(q_product((infinite(-1, 1, 1),), prec, 1), body)


def _need(params, name):
    if params.get(name) is None:
        raise UsageError(f"This series needs the parameter {name!r}")
    return int(params[name])


NAMED_SERIES = {
    "G": lambda prec, **_: sum_expand(_spec(1, pochhammers=(poch(),)), prec, 1),
    "H": lambda prec, **_: sum_expand(_spec(1, 1, pochhammers=(poch(),)), prec, 1),
    "rogers-G": lambda prec, **_: _rogers_product_side(0, prec),
    "rogers-H": lambda prec, **_: _rogers_product_side(2, prec),
    "f0": lambda prec, **_: sum_expand(_spec(1, pochhammers=(poch(-1),)), prec, 1),
    "f1": lambda prec, **_: sum_expand(_spec(1, 1, pochhammers=(poch(-1),)), prec, 1),
    "phi-mock": lambda prec, **_: sum_expand(_spec(1, pochhammers=(poch(-1, 2, 2),)), prec, 1),
    "psi-mock": lambda prec, **_: sum_expand(_spec(1, n_start=1, pochhammers=(poch(1, 1, 2),)), prec, 1),
    "phi": lambda prec, **_: specialize(theta_full(1, prec), a=1),
    "psi": lambda prec, **_: q_product((infinite(1, 2, 2), infinite(1, 1, 2, power=-1)), prec, 1),
    "theta": lambda prec, **params: theta_full(2 * _need(params, "s"), prec),
    "bressoud-lhs": lambda prec, **params: bressoud_lhs(_need(params, "s"), prec),
    "bressoud-rhs": lambda prec, **params: bressoud_rhs(_need(params, "s"), prec),
    "mcintosh-lhs": lambda prec, **params: mcintosh_lhs(_need(params, "mu"), prec),
    "mcintosh-rhs": lambda prec, **params: mcintosh_rhs(_need(params, "mu"), prec),
    "a179080": lambda prec, **_: sum_expand(
        _spec(Fraction(1, 2), Fraction(-1, 2), n_start=1, pochhammers=(poch(1, 2, 2),)), prec, 1
    ),
    "eta": lambda prec, **_: poch_infinite(Monomial(q=1), 1, prec),
    "partitions": lambda prec, **_: inverse_poch(Monomial(q=1), 1, None, prec),
}


def named_series(name, prec, **params):
    """Build a registered series (G, H, f0, theta, ...) to t^prec"""
    try:
        builder = NAMED_SERIES[name]
    except KeyError:
        raise UsageError(f"Unknown series {name!r}; known: {', '.join(sorted(NAMED_SERIES))}") from None
    if prec < 0:
        raise UsageError(f"Precision must be non-negative, got {prec}")
    return builder(prec, **params)


# -- SumSpec literals --------------------------------------------------------

_POCH_RE = re.compile(r"^(?P<neg>-)?(?P<a>a)?(?P<b>b)?q(?P<exp>\d+(?:/\d+)?)?(?:@(?P<step>\d+))?$")


def _parse_poch(text):
    """'q', 'bq', '-q2@2', 'q@2' -> denominator PochFactor of length n (step after @)"""
    match = _POCH_RE.match(text.strip())
    if not match:
        raise UsageError(f"Invalid Pochhammer literal {text!r}")
    base = Monomial(
        -1 if match.group("neg") else 1,
        1 if match.group("a") else 0,
        1 if match.group("b") else 0,
        Fraction(match.group("exp") or 1),
    )
    return PochFactor(base, int(match.group("step") or 1))


def _numbers(text, count):
    values = [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    if len(values) > count:
        raise UsageError(f"Expected at most {count} numbers, got {text!r}")
    return values + [Fraction(0)] * (count - len(values))


def _affine(text):
    slope, const = _numbers(text, 2)
    if slope.denominator != 1 or const.denominator != 1:
        raise UsageError(f"Parameter exponents must be integers, got {text!r}")
    return Affine(int(const), int(slope))


def parse_sum_spec(text):
    """
    Parse a literal such as 'q=1,0,0;a=1;poch=q|bq;start=0;denom=1'.

    Keys: q (sq,lin,const), a / b / sign (slope,const), poch ('|'-separated
    Pochhammer literals, each of length n), start, stop, coeff, denom.
    Returns (SumSpec, denom or None).
    """
    fields = {}
    for chunk in text.strip().split(";"):
        if not chunk.strip():
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise UsageError(f"Expected key=value in sum literal, got {chunk!r}")
        fields[key.strip()] = value.strip()

    unknown = set(fields) - {"q", "a", "b", "sign", "poch", "start", "stop", "coeff", "denom"}
    if unknown:
        raise UsageError(f"Unknown keys in sum literal: {', '.join(sorted(unknown))}")
    if "q" not in fields:
        raise UsageError("A sum literal needs the q exponent, e.g. q=1,0,0")

    try:
        spec = SumSpec(
            q_exp=Quadratic(*_numbers(fields["q"], 3)),
            a_exp=_affine(fields["a"]) if "a" in fields else Affine(),
            b_exp=_affine(fields["b"]) if "b" in fields else Affine(),
            sign=_affine(fields["sign"]) if "sign" in fields else None,
            pochhammers=tuple(_parse_poch(p) for p in fields["poch"].split("|") if p.strip())
            if fields.get("poch")
            else (),
            n_start=int(fields.get("start", 0)),
            n_stop=int(fields["stop"]) if "stop" in fields else None,
            coeff=Fraction(fields.get("coeff", 1)),
        )
        denom = int(fields["denom"]) if "denom" in fields else None
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"Invalid sum literal {text!r}: {e}") from e
    return spec, denom
