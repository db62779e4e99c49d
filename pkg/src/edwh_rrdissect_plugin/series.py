#!/usr/bin/env python3
"""
Series Core - Exact Truncated Puiseux Series
============================================

Exact arithmetic on truncated series in t = q^(1/D) whose coefficients live in
Z[a, 1/a, b] (or Q[a, 1/a, b] after a rational specialisation).

Provides:
- CoeffPoly: sparse Laurent polynomial in a, polynomial in b
- QSeries: sparse truncated series with tracked precision
- The ring operations, inversion, substitutions and the canonical
  serialization used by the cli and the golden tests

A QSeries with precision P is known exactly modulo t^(P+1).

Author: Based on rr_base.py
Date: October 2026
"""

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .rr_base import DomainError, UsageError

logger = logging.getLogger(__name__)


def _normalize(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _check_number(value):
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise UsageError(f"Coefficients must be int or Fraction, got {type(value).__name__}")
    return _normalize(value)


def _add_into(dst, src, factor=1):
    """dst += factor * src on raw term dicts"""
    for key, value in src.items():
        total = dst.get(key, 0) + factor * value
        if total:
            dst[key] = total
        else:
            dst.pop(key, None)


def _mul_add_into(dst, x, y):
    """dst += x * y on raw term dicts"""
    for (ai, bi), ci in x.items():
        for (aj, bj), cj in y.items():
            key = (ai + aj, bi + bj)
            total = dst.get(key, 0) + ci * cj
            if total:
                dst[key] = total
            else:
                dst.pop(key, None)


class CoeffPoly:
    """
    Exact Laurent polynomial in a and ordinary polynomial in b.

    Terms are keyed by (a_exp, b_exp); zero values are never stored and b_exp
    is never negative. Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, value in (terms or {}).items():
            a_exp, b_exp = key
            if not isinstance(a_exp, int) or not isinstance(b_exp, int):
                raise UsageError(f"Exponents must be integers, got {key!r}")
            if b_exp < 0:
                raise DomainError(f"Negative power of b is not allowed: {key!r}")
            value = _check_number(value)
            if value:
                clean[(a_exp, b_exp)] = clean.get((a_exp, b_exp), 0) + value
        self._terms = {k: _normalize(v) for k, v in clean.items() if v}

    @classmethod
    def _wrap(cls, terms):
        poly = cls.__new__(cls)
        poly._terms = terms
        return poly

    @classmethod
    def constant(cls, value=1):
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, coeff=1, a=0, b=0):
        return cls({(a, b): coeff})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, CoeffPoly):
            return value
        if isinstance(value, dict):
            return cls(value)
        return cls.constant(value)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        """Terms sorted by (a_exp, b_exp)"""
        return sorted(self._terms.items())

    def get(self, a_exp=0, b_exp=0):
        return self._terms.get((a_exp, b_exp), 0)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(key == (0, 0) for key in self._terms)

    def is_one(self):
        return self._terms == {(0, 0): 1}

    def a_degree_range(self):
        exps = [a for a, _ in self._terms]
        return (min(exps), max(exps)) if exps else (0, 0)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CoeffPoly.constant(other)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __neg__(self):
        return CoeffPoly._wrap({k: -v for k, v in self._terms.items()})

    def __add__(self, other):
        other = CoeffPoly.coerce(other)
        terms = dict(self._terms)
        _add_into(terms, other._terms)
        return CoeffPoly._wrap(terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = CoeffPoly.coerce(other)
        terms = dict(self._terms)
        _add_into(terms, other._terms, -1)
        return CoeffPoly._wrap(terms)

    def __rsub__(self, other):
        return CoeffPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return CoeffPoly()
            return CoeffPoly._wrap({k: _normalize(v * other) for k, v in self._terms.items()})
        other = CoeffPoly.coerce(other)
        terms = {}
        _mul_add_into(terms, self._terms, other._terms)
        return CoeffPoly._wrap({k: _normalize(v) for k, v in terms.items()})

    __rmul__ = __mul__

    def negate_parameter(self, name):
        index = _parameter_index(name)
        return CoeffPoly._wrap({k: (-v if k[index] % 2 else v) for k, v in self._terms.items()})

    def reduce_mod(self, modulus):
        terms = {}
        for key, value in self._terms.items():
            if isinstance(value, Fraction):
                raise DomainError("Cannot reduce a non-integral coefficient modulo an integer")
            residue = value % modulus
            if residue:
                terms[key] = residue
        return CoeffPoly._wrap(terms)

    def evaluate(self, a=1.0, b=1.0):
        return math.fsum(float(c) * a**i * b**j for (i, j), c in self._terms.items())

    def __repr__(self):
        return f"CoeffPoly({format_poly(self)})"


def _parameter_index(name):
    if name == "a":
        return 0
    if name == "b":
        return 1
    raise UsageError(f"Unknown parameter {name!r}, expected 'a' or 'b'")


def format_poly(poly):
    """Human readable rendering, e.g. 'a + a^-1 - 2*a*b^2'"""
    if poly.is_zero():
        return "0"
    pieces = []
    for (i, j), c in poly.items():
        factors = []
        if i:
            factors.append("a" if i == 1 else f"a^{i}")
        if j:
            factors.append("b" if j == 1 else f"b^{j}")
        if not factors:
            pieces.append(str(c))
            continue
        body = "*".join(factors)
        if c == 1:
            pieces.append(body)
        elif c == -1:
            pieces.append(f"-{body}")
        else:
            pieces.append(f"{c}*{body}")
    text = " + ".join(pieces)
    return text.replace("+ -", "- ")


ONE = CoeffPoly.constant(1)


@dataclass(frozen=True)
class TMonomial:
    """coeff * t^exponent, the value substituted for a parameter by specialize()"""

    coeff: object = 1
    exponent: int = 0


class QSeries:
    """
    Truncated Puiseux series in q with exponents over a fixed denominator.

    `denom` is D with t^D = q, keys are exponent numerators e >= 0 and the
    series is known exactly modulo t^(prec+1). Instances are immutable.
    """

    __slots__ = ("denom", "prec", "_coeffs")

    def __init__(self, coeffs=None, prec=0, denom=1):
        if not isinstance(denom, int) or denom < 1:
            raise UsageError(f"Denominator must be a positive integer, got {denom!r}")
        if not isinstance(prec, int) or prec < -1:
            raise UsageError(f"Precision must be an integer >= -1, got {prec!r}")
        self.denom = denom
        self.prec = prec
        clean = {}
        for e, value in (coeffs or {}).items():
            if not isinstance(e, int) or e < 0:
                raise UsageError(f"Exponent numerators must be non-negative integers, got {e!r}")
            if e > prec:
                continue
            poly = CoeffPoly.coerce(value)
            if poly:
                clean[e] = poly
        self._coeffs = clean

    @classmethod
    def _wrap(cls, coeffs, prec, denom):
        series = cls.__new__(cls)
        series.denom = denom
        series.prec = prec
        series._coeffs = coeffs
        return series

    @classmethod
    def _from_raw(cls, raw, prec, denom):
        """Build from {e: term-dict}, dropping empty and out-of-range entries"""
        coeffs = {}
        for e, terms in raw.items():
            if terms and e <= prec:
                coeffs[e] = CoeffPoly._wrap({k: _normalize(v) for k, v in terms.items()})
        return cls._wrap(coeffs, prec, denom)

    @classmethod
    def zero(cls, prec, denom=1):
        return cls._wrap({}, prec, denom)

    @classmethod
    def one(cls, prec, denom=1):
        return cls.monomial(1, 0, prec, denom)

    @classmethod
    def monomial(cls, coeff, e, prec, denom=1):
        return cls({e: coeff}, prec, denom)

    @classmethod
    def from_list(cls, values, prec=None, denom=1):
        """Dense constructor: values[e] is the coefficient of t^e"""
        values = list(values)
        if prec is None:
            prec = len(values) - 1
        return cls(dict(enumerate(values)), prec, denom)

    @property
    def valuation(self):
        """Least stored exponent, or prec+1 for a series known to vanish"""
        return min(self._coeffs) if self._coeffs else self.prec + 1

    def terms(self):
        """(e, CoeffPoly) pairs sorted by exponent"""
        return sorted(self._coeffs.items())

    def exponents(self):
        return sorted(self._coeffs)

    def coefficient(self, e):
        if e > self.prec:
            raise UsageError(f"Exponent {e} is beyond the known precision {self.prec}")
        if e < 0:
            return CoeffPoly()
        return self._coeffs.get(e, CoeffPoly())

    def is_zero(self):
        return not self._coeffs

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return QSeries._wrap({e: c for e, c in self._coeffs.items() if e <= prec}, prec, self.denom)

    def shift(self, k):
        """Multiply by t^k; negative k needs valuation >= -k"""
        if k < 0 and self._coeffs and self.valuation < -k:
            raise DomainError(f"Cannot divide by t^{-k}: valuation is {self.valuation}")
        prec = self.prec + k
        if prec < -1:
            raise DomainError(f"Shift by {k} leaves no known coefficients")
        return QSeries._wrap({e + k: c for e, c in self._coeffs.items()}, prec, self.denom)

    def map_coefficients(self, func):
        coeffs = {}
        for e, poly in self._coeffs.items():
            mapped = func(poly)
            if mapped:
                coeffs[e] = mapped
        return QSeries._wrap(coeffs, self.prec, self.denom)

    def mul_binomial(self, mono, k):
        """Multiply by (1 - mono * t^k), k >= 1, exact"""
        mono = CoeffPoly.coerce(mono)
        raw = {e: dict(c._terms) for e, c in self._coeffs.items()}
        for e, poly in self._coeffs.items():
            target = e + k
            if target > self.prec:
                continue
            _mul_add_into(raw.setdefault(target, {}), poly._terms, (-mono)._terms)
        return QSeries._from_raw(raw, self.prec, self.denom)

    def div_binomial(self, mono, k):
        """Divide by (1 - mono * t^k), k >= 1, exact to the same precision"""
        if k < 1:
            raise DomainError("Can only divide by a binomial with positive valuation")
        mono = CoeffPoly.coerce(mono)
        raw = {e: dict(c._terms) for e, c in self._coeffs.items()}
        if not raw:
            return self
        start = min(raw)
        for e in range(start + k, self.prec + 1):
            source = raw.get(e - k)
            if source:
                _mul_add_into(raw.setdefault(e, {}), source, mono._terms)
        return QSeries._from_raw(raw, self.prec, self.denom)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.denom == other.denom and self.prec == other.prec and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.denom, self.prec, frozenset(self._coeffs.items())))

    def __neg__(self):
        return self.map_coefficients(lambda c: -c)

    def __add__(self, other):
        return add(self, _as_series(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, -_as_series(other, self))

    def __rsub__(self, other):
        return add(_as_series(other, self), -self)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        poly = CoeffPoly.coerce(other)
        return self.map_coefficients(lambda c: c * poly)

    __rmul__ = __mul__

    def __repr__(self):
        return f"QSeries(denom={self.denom}, prec={self.prec}, {format_series(self)})"


def _as_series(value, like):
    if isinstance(value, QSeries):
        return value
    # scalars are exact, so they never limit the precision
    return QSeries.monomial(value, 0, like.prec, like.denom)


def format_series(x, max_terms=None):
    """Readable rendering such as '1 + (a + a^-1)*t + O(t^5)'"""
    pieces = []
    for index, (e, poly) in enumerate(x.terms()):
        if max_terms is not None and index >= max_terms:
            pieces.append("...")
            break
        power = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        body = format_poly(poly)
        if not power:
            pieces.append(body)
        elif poly.is_one():
            pieces.append(power)
        elif len(poly.terms) == 1:
            pieces.append(f"{body}*{power}")
        else:
            pieces.append(f"({body})*{power}")
    pieces.append(f"O(t^{x.prec + 1})")
    return " + ".join(pieces)


def _check_denoms(x, y):
    if x.denom != y.denom:
        raise UsageError(f"Denominator mismatch: {x.denom} vs {y.denom}; rescale first")


def add(x, y):
    """Coefficient-wise sum to the lesser precision"""
    _check_denoms(x, y)
    prec = min(x.prec, y.prec)
    raw = {e: dict(c._terms) for e, c in x._coeffs.items() if e <= prec}
    for e, poly in y._coeffs.items():
        if e <= prec:
            _add_into(raw.setdefault(e, {}), poly._terms)
    return QSeries._from_raw(raw, prec, x.denom)


def mul(x, y):
    """Truncated Cauchy product; prec = min(prec x + val y, prec y + val x)"""
    _check_denoms(x, y)
    prec = min(x.prec + y.valuation, y.prec + x.valuation)
    right = y.terms()
    raw = {}
    for e1, p1 in x._coeffs.items():
        limit = prec - e1
        if limit < 0:
            continue
        for e2, p2 in right:
            if e2 > limit:
                break
            _mul_add_into(raw.setdefault(e1 + e2, {}), p1._terms, p2._terms)
    return QSeries._from_raw(raw, prec, x.denom)


def product(factors, prec=None, denom=1):
    result = None
    for factor in factors:
        result = factor if result is None else mul(result, factor)
    if result is None:
        return QSeries.one(prec if prec is not None else 0, denom)
    return result if prec is None else result.truncate(prec)


def invert(x, target_prec=None):
    """Multiplicative inverse of a series whose constant term is exactly 1"""
    if x.prec < 0 or not x.coefficient(0).is_one():
        raise DomainError("Can only invert a series with constant term 1")
    prec = x.prec if target_prec is None else min(target_prec, x.prec)
    tail = [(e, c._terms) for e, c in x.terms() if e > 0]
    raw = {0: {(0, 0): 1}}
    for e in range(1, prec + 1):
        acc = {}
        for k, terms in tail:
            if k > e:
                break
            prev = raw.get(e - k)
            if prev:
                _mul_add_into(acc, terms, prev)
        if acc:
            raw[e] = {key: -value for key, value in acc.items()}
    return QSeries._from_raw(raw, prec, x.denom)


def rescale(x, k):
    """Substitute q -> q^k: every key and the bound prec+1 are multiplied by k"""
    if not isinstance(k, int) or k < 1:
        raise UsageError(f"Rescale factor must be a positive integer, got {k!r}")
    if k == 1:
        return x
    return QSeries._wrap({e * k: c for e, c in x._coeffs.items()}, k * (x.prec + 1) - 1, x.denom)


def change_denom(x, denom):
    """Re-express x over a new denominator (a multiple of D, or a divisor when exponents allow)"""
    if denom == x.denom:
        return x
    if denom % x.denom == 0:
        factor = denom // x.denom
        return QSeries._wrap({e * factor: c for e, c in x._coeffs.items()}, factor * (x.prec + 1) - 1, denom)
    if x.denom % denom == 0:
        factor = x.denom // denom
        bad = [e for e in x._coeffs if e % factor]
        if bad:
            raise UsageError(f"Exponent t^{bad[0]} has no representation over denominator {denom}")
        return QSeries._wrap({e // factor: c for e, c in x._coeffs.items()}, x.prec // factor, denom)
    raise UsageError(f"Denominators {x.denom} and {denom} are not compatible")


def to_common_denom(*series):
    denom = math.lcm(*(x.denom for x in series))
    return [change_denom(x, denom) for x in series]


def _power(value, exponent):
    if exponent >= 0:
        return value**exponent
    return Fraction(1) / Fraction(value) ** (-exponent)


def specialize(x, a=None, b=None, prec=None):
    """
    Substitute values for the parameters a and/or b.

    Each of a, b is None (stay symbolic), an int/Fraction, or a TMonomial
    c*t^e. A monomial that can move unseen terms downwards (any exponent for a,
    since a is Laurent, or a negative exponent for b) needs an explicit
    `prec` for the result: the caller guarantees that every term that lands at
    or below it has been computed.
    """
    subs = [_substitution("a", a), _substitution("b", b)]
    shifts_down = (subs[0] is not None and subs[0][1] != 0) or (subs[1] is not None and subs[1][1] < 0)
    if shifts_down and prec is None:
        raise UsageError("Specialising by a monomial in t needs an explicit result precision")
    result_prec = x.prec if prec is None else prec

    raw = {}
    for e, poly in x._coeffs.items():
        for key, c in poly._terms.items():
            value = c
            new_key = list(key)
            shift = 0
            for index, sub in enumerate(subs):
                if sub is None:
                    continue
                coeff, exponent = sub
                power = key[index]
                value = value * _power(coeff, power)
                shift += exponent * power
                new_key[index] = 0
            target = e + shift
            if target < 0:
                raise DomainError(f"Substitution moves t^{e} to a negative exponent {target}")
            if target > result_prec or not value:
                continue
            bucket = raw.setdefault(target, {})
            total = bucket.get(tuple(new_key), 0) + value
            if total:
                bucket[tuple(new_key)] = total
            else:
                bucket.pop(tuple(new_key), None)
    return QSeries._from_raw(raw, result_prec, x.denom)


def _substitution(name, value):
    if value is None:
        return None
    if isinstance(value, TMonomial):
        coeff, exponent = value.coeff, value.exponent
    else:
        coeff, exponent = value, 0
    coeff = _check_number(coeff)
    if name == "a" and coeff == 0:
        raise DomainError("a = 0 is not allowed (a appears with negative powers)")
    return coeff, exponent


def flip_q(x):
    """Substitute q -> -q; needs every stored exponent to be a whole power of q"""
    coeffs = {}
    for e, poly in x._coeffs.items():
        if e % x.denom:
            raise DomainError(f"q -> -q is undefined on the fractional power t^{e} (denominator {x.denom})")
        coeffs[e] = -poly if (e // x.denom) % 2 else poly
    return QSeries._wrap(coeffs, x.prec, x.denom)


def negate_parameter(x, name):
    """Substitute a -> -a or b -> -b, staying symbolic"""
    _parameter_index(name)
    return x.map_coefficients(lambda c: c.negate_parameter(name))


def reduce_mod(x, modulus):
    if modulus < 2:
        raise UsageError(f"Modulus must be at least 2, got {modulus}")
    return x.map_coefficients(lambda c: c.reduce_mod(modulus))


def evaluate(x, q, a=1.0, b=1.0):
    """Float value of the truncated series at real q"""
    return math.fsum(c.evaluate(a, b) * q ** (e / x.denom) for e, c in x._coeffs.items())


def first_difference(x, y):
    """First exponent where x and y differ (to their shared precision), with x - y there"""
    _check_denoms(x, y)
    prec = min(x.prec, y.prec)
    for e in sorted(set(x._coeffs) | set(y._coeffs)):
        if e > prec:
            break
        diff = x.coefficient(e) - y.coefficient(e)
        if diff:
            return e, diff
    return None


# -- canonical serialization -------------------------------------------------


def _number_to_text(value):
    return str(_normalize(value))


def _number_from_text(text):
    try:
        if "/" in text:
            return _normalize(Fraction(text))
        return int(text)
    except (TypeError, ValueError) as e:
        raise UsageError(f"Invalid coefficient literal {text!r}") from e


def to_record(x):
    """Structured record with terms sorted by e and coefficient keys by (a, b)"""
    return {
        "denom": x.denom,
        "prec": x.prec,
        "terms": [
            {"e": e, "coeff": [{"a": i, "b": j, "c": _number_to_text(c)} for (i, j), c in poly.items()]}
            for e, poly in x.terms()
        ],
    }


def from_record(record):
    try:
        coeffs = {}
        for term in record["terms"]:
            coeffs[int(term["e"])] = CoeffPoly(
                {(int(c["a"]), int(c["b"])): _number_from_text(c["c"]) for c in term["coeff"]}
            )
        return QSeries(coeffs, int(record["prec"]), int(record["denom"]))
    except (KeyError, TypeError) as e:
        raise UsageError(f"Malformed series record: {e}") from e


def dumps(x):
    return json.dumps(to_record(x), separators=(",", ":"))


def loads(text):
    try:
        record = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"Malformed series record: {e}") from e
    return from_record(record)
