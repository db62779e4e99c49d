#!/usr/bin/env python3
"""
Asymptotics - Numeric Checks As q Tends To 1
============================================

Double precision toolkit for the q -> 1- behaviour of the generalized
Rogers-Ramanujan sums and their products.

Provides:
- li2: real dilogarithm, from mpmath polylog
- solve_root / product_root: bracketed safe-Newton root finders
- eval_sum_numeric / eval_theta_numeric / eval_pochhammer: numeric series
- predictions for single sums, for the product of two sums and for the
  chain of asymptotics that leads back to the two-product modular relation
- AsymptoticCheck: ratio-convergence verdicts over a q schedule

An asymptotic equivalence is accepted when |ratio - 1| strictly decreases
over the schedule (or sits at the numerical noise floor) and ends below the
tolerance. No error terms are assumed.

Author: Based on qfunctions.py
Date: October 2026
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import polylog

from .qfunctions import INDEX, Affine, Quadratic, SumSpec, poch
from .rr_base import DEFAULT_SCHEDULE, DEFAULT_TOL, DomainError, UsageError, validate_schedule

logger = logging.getLogger(__name__)

PI2_6 = math.pi**2 / 6
NOISE_FLOOR = 1e-12
RELATIVE_CUTOFF = 1e-16
QUIET_TERMS = 3
MAX_TERMS = 200_000
ROOT_RESIDUAL = 1e-13


def _finite(value, what):
    if not math.isfinite(value):
        raise DomainError(f"{what} is not finite ({value})")
    return value


def _check_q(q):
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")


def _check_positive(name, value):
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


# -- dilogarithm -------------------------------------------------------------


def li2(z):
    """Real dilogarithm for z <= 1"""
    z = float(z)
    _finite(z, "li2 argument")
    if z > 1.0:
        raise DomainError(f"li2 is complex for z > 1, got {z}")
    return float(polylog(2, z).real)


# -- roots -------------------------------------------------------------------


def _safe_newton(func, dfunc, lo, hi, tol=1e-16, max_iter=500):
    """Newton-Raphson that falls back to bisection whenever a step leaves the bracket"""
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise DomainError(f"Root is not bracketed in [{lo}, {hi}]")
    x_lo, x_hi = (lo, hi) if f_lo < 0.0 else (hi, lo)
    root = 0.5 * (lo + hi)
    dx_old = dx = abs(hi - lo)
    f, df = func(root), dfunc(root)
    for _ in range(max_iter):
        if ((root - x_hi) * df - f) * ((root - x_lo) * df - f) > 0.0 or abs(2.0 * f) > abs(dx_old * df):
            dx_old, dx = dx, 0.5 * (x_hi - x_lo)
            root = x_lo + dx
            if x_lo == root:
                return root
        else:
            dx_old, dx = dx, f / df
            previous = root
            root -= dx
            if previous == root:
                return root
        if abs(dx) < tol:
            return root
        f, df = func(root), dfunc(root)
        if f < 0.0:
            x_lo = root
        else:
            x_hi = root
    raise DomainError("Root finder did not converge")


def solve_root(a, exponent2b):
    """The unique root in (0, 1) of a*z^p + z - 1, p = exponent2b"""
    _check_positive("a", a)
    _check_positive("exponent", exponent2b)
    p = float(exponent2b)
    root = _safe_newton(lambda z: a * z**p + z - 1.0, lambda z: a * p * z ** (p - 1.0) + 1.0, 0.0, 1.0)
    residual = abs(a * root**p + root - 1.0)
    if not 0.0 < root < 1.0 or residual > ROOT_RESIDUAL:
        raise DomainError(f"Root {root} of a*z^{p}+z-1 has residual {residual}")
    return root


def product_root(a, s):
    """z1, the root of a*z^(1/s) + z - 1, found as w^s where a*w + w^s = 1"""
    _check_positive("a", a)
    if not isinstance(s, int) or s < 1:
        raise UsageError(f"s must be a positive integer, got {s!r}")
    w = _safe_newton(lambda w: w**s + a * w - 1.0, lambda w: s * w ** (s - 1) + a, 0.0, 1.0)
    residual = abs(a * w + w**s - 1.0)
    if residual > ROOT_RESIDUAL:
        raise DomainError(f"Root {w} of a*w+w^{s}-1 has residual {residual}")
    return w**s


def product_facts(a, s):
    """
    Relations between z1 and z2 used to simplify the product asymptotic.

    z2 is solved independently from a^(-s) z^s + z - 1 = 0; the residuals of
    z1 + z2 = 1, z1 = a^(-s) z2^s and of the prefactor identity
    (z1 + (1-z1)/s)(z2 + s(1-z2)) = (1 + (s-1) z1)^2 / s are returned.
    """
    z1 = product_root(a, s)
    z2 = solve_root(a ** (-s), s)
    left = (z1 + (1.0 - z1) / s) * (z2 + s * (1.0 - z2))
    right = (1.0 + (s - 1) * z1) ** 2 / s
    return {
        "z1": z1,
        "z2": z2,
        "sum_residual": abs(z1 + z2 - 1.0),
        "power_residual": abs(z1 - a ** (-s) * z2**s),
        "prefactor_residual": abs(left - right),
    }


# -- numeric series ----------------------------------------------------------


def eval_pochhammer(x, nome, n=None):
    """(x; nome)_n as a float, n None for the infinite product (|nome| < 1)"""
    if n is None and not abs(nome) < 1.0:
        raise DomainError(f"(x; nome)_inf needs |nome| < 1, got {nome}")
    result = 1.0
    factor = x
    i = 0
    while n is None or i < n:
        if n is None and abs(factor) < 1e-18:
            break
        result *= 1.0 - factor
        factor *= nome
        i += 1
        if i > MAX_TERMS:
            raise DomainError("Pochhammer product did not converge")
    return _finite(result, "Pochhammer product")


def _factor_value(factor, i, a, b, q):
    base = factor.base
    mono = base.coeff * a**base.a * b**base.b * factor.nome_sign ** (i * factor.step)
    value = 1.0 - mono * q ** float(base.q + i * factor.step)
    if value == 0.0:
        raise DomainError(f"Pochhammer factor vanishes at index {i}")
    return value


class _RunningPochhammer:
    """A finite Pochhammer factor extended one index at a time as the length grows"""

    def __init__(self, factor, a, b, q):
        self.factor = factor
        self.a, self.b, self.q = a, b, q
        self.length = 0
        self.value = 1.0

    def at(self, length):
        if length < 0:
            raise DomainError(f"Pochhammer length {length} is negative")
        if length < self.length:
            self.length, self.value = 0, 1.0
        while self.length < length:
            self.value *= _factor_value(self.factor, self.length, self.a, self.b, self.q)
            self.length += 1
        return self.value**self.factor.power


def _infinite_factor(factor, a, b, q):
    base = factor.base
    if base.q <= 0:
        raise DomainError(f"(A;q)_inf does not converge for A = {base}")
    result = 1.0
    i = 0
    while True:
        term = abs(base.coeff * a**base.a * b**base.b) * q ** float(base.q + i * factor.step)
        if term < 1e-18:
            break
        result *= _factor_value(factor, i, a, b, q)
        i += 1
        if i > MAX_TERMS:
            raise DomainError("Infinite product did not converge")
    return result**factor.power


def eval_sum_numeric(spec, a=1.0, b=1.0, q=0.5):
    """
    Numeric value of a SumSpec at real a, b and q in (0, 1).

    Terms are added until three consecutive terms fall below 1e-16 of the
    running sum, and never before the q-exponent has passed its minimum.
    """
    _check_q(q)
    if a == 0:
        raise DomainError("a = 0 is not allowed")
    quad = spec.q_exp
    if spec.n_stop is None and (quad.sq < 0 or (quad.sq == 0 and quad.lin <= 0)):
        raise DomainError(f"Exponent {quad} does not tend to infinity; the sum diverges numerically")
    vertex = float(-quad.lin / (2 * quad.sq)) if quad.sq > 0 else spec.n_start
    infinite_part = 1.0
    running = []
    for factor in spec.pochhammers:
        if factor.length is None:
            infinite_part *= _infinite_factor(factor, a, b, q)
        else:
            running.append(_RunningPochhammer(factor, a, b, q))

    terms = []
    total = 0.0
    quiet = 0
    n = spec.n_start
    try:
        while spec.n_stop is None or n <= spec.n_stop:
            sign = -1.0 if spec.sign is not None and spec.sign(n) % 2 else 1.0
            term = sign * float(spec.coeff) * a ** spec.a_exp(n) * b ** spec.b_exp(n) * q ** float(quad(n))
            for poch_factor in running:
                term *= poch_factor.at(poch_factor.factor.length(n))
            terms.append(term)
            total += term
            if abs(term) <= RELATIVE_CUTOFF * abs(total) and n >= vertex:
                quiet += 1
                if quiet >= QUIET_TERMS and spec.n_stop is None:
                    break
            else:
                quiet = 0
            n += 1
            if n - spec.n_start > MAX_TERMS:
                raise DomainError("Numeric summation did not converge")
    except (OverflowError, ZeroDivisionError) as e:
        raise DomainError(f"Numeric summation failed at n={n}: {e}") from e
    logger.debug(f"Summed {len(terms)} terms at q={q}")
    return _finite(math.fsum(terms) * infinite_part, "numeric sum")


def eval_theta_numeric(a, denom2s, q):
    """sum over all integers n of a^n q^(n^2/denom2s), for a > 0"""
    _check_q(q)
    _check_positive("a", a)
    log_a, log_q = math.log(a), math.log(q)
    # terms peak near n = denom2s*log(a)/(-2 log q) on either side
    peak = abs(denom2s * log_a / (2.0 * log_q))
    terms = [1.0]
    quiet = 0
    n = 1
    try:
        while True:
            pair = math.exp(n * log_a + n * n * log_q / denom2s) + math.exp(-n * log_a + n * n * log_q / denom2s)
            terms.append(pair)
            if pair <= RELATIVE_CUTOFF * math.fsum(terms) and n > peak:
                quiet += 1
                if quiet >= QUIET_TERMS:
                    break
            else:
                quiet = 0
            n += 1
            if n > MAX_TERMS:
                raise DomainError("Theta summation did not converge")
    except OverflowError as e:
        raise DomainError(f"Theta summation overflowed at n={n}") from e
    return _finite(math.fsum(terms), "theta sum")


def _exp(value, what):
    try:
        return math.exp(value)
    except OverflowError as e:
        raise DomainError(f"{what} overflows double precision") from e


# -- predictions -------------------------------------------------------------


def ramanujan_prediction(a, b, c, q):
    """Leading asymptotic of sum a^n q^(b n^2 + c n)/(q)_n as q -> 1-"""
    _check_q(q)
    _check_positive("a", a)
    _check_positive("b", b)
    z = solve_root(a, 2 * b)
    prefactor = z**c / math.sqrt(z + 2 * b * (1.0 - z))
    exponent = -(li2(a * z ** (2 * b)) + b * math.log(z) ** 2) / math.log(q)
    return _finite(prefactor * _exp(exponent, "prediction"), "prediction")


def product_prediction(a, s, q):
    """Leading asymptotic of sum a^n q^(n^2/(2s))/(q)_n times sum a^(-ns) q^(s n^2/2)/(q)_n"""
    _check_q(q)
    z1 = product_root(a, s)
    prefactor = math.sqrt(s) / (1.0 + (s - 1) * z1)
    exponent = -(PI2_6 + 0.5 * s * math.log(a) ** 2) / math.log(q)
    return _finite(prefactor * _exp(exponent, "prediction"), "prediction")


def remark_prefactor(a):
    """Closed form of the s = 2 product prefactor: 2*sqrt(2)/(4 + a^2 - a*sqrt(4 + a^2))"""
    return 2.0 * math.sqrt(2.0) / (4.0 + a * a - a * math.sqrt(4.0 + a * a))


def second_term_prediction(a, q):
    """Asymptotic of the second product of the two-product modular relation at b = 1"""
    _check_q(q)
    _check_positive("a", a)
    root = math.sqrt(4.0 + a * a)
    prefactor = math.sqrt(2.0) * q**0.25 * (2.0 + a * a - a * root) / (4.0 + a * a - a * root)
    exponent = -(PI2_6 + math.log(a) ** 2) / math.log(q)
    return _finite(prefactor * _exp(exponent, "prediction"), "prediction")


def modular_prediction(a, q):
    """sqrt(2) exp(-(pi^2/6 + log^2 a)/log q), shared by both sides of the modular relation at b = 1"""
    _check_q(q)
    _check_positive("a", a)
    return _finite(math.sqrt(2.0) * _exp(-(PI2_6 + math.log(a) ** 2) / math.log(q), "prediction"), "prediction")


def partition_prediction(q):
    """1/(q;q)_inf ~ sqrt(-log q / 2 pi) exp(-pi^2/(6 log q))"""
    _check_q(q)
    log_q = math.log(q)
    return math.sqrt(-log_q / (2.0 * math.pi)) * _exp(-PI2_6 / log_q, "prediction")


def theta_prediction(a, q):
    """sum a^n q^(n^2/4) ~ 2 sqrt(pi/(-log q)) exp(-log^2 a / log q)"""
    _check_q(q)
    _check_positive("a", a)
    log_q = math.log(q)
    return 2.0 * math.sqrt(math.pi / -log_q) * _exp(-math.log(a) ** 2 / log_q, "prediction")


# -- checks ------------------------------------------------------------------


def ratio_verdict(ratios, tol=DEFAULT_TOL):
    """pass iff |ratio-1| strictly decreases (or is at the noise floor) and ends below tol"""
    for ratio in ratios:
        if not math.isfinite(ratio) or ratio <= 0:
            raise DomainError(f"Ratio {ratio} is not finite and positive")
    errors = [abs(r - 1.0) for r in ratios]
    if not errors:
        return "fail"
    for previous, current in zip(errors, errors[1:]):
        if not (current < previous or current <= NOISE_FLOOR):
            return "fail"
    return "pass" if errors[-1] < tol else "fail"


@dataclass
class AsymptoticCheck:
    """One ratio-convergence check, a scalar identity check, or a group of both"""

    name: str
    params: dict = field(default_factory=dict)
    schedule: tuple = ()
    ratios: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    verdict: str = "fail"
    values: dict = field(default_factory=dict)
    parts: list = field(default_factory=list)

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_record(self):
        return {
            "name": self.name,
            "params": self.params,
            "schedule": list(self.schedule),
            "ratios": list(self.ratios),
            "tol": self.tol,
            "verdict": self.verdict,
            "values": self.values,
            "parts": [part.to_record() for part in self.parts],
        }

    def summary_line(self):
        params = ",".join(f"{k}={v}" for k, v in self.params.items()) or "-"
        line = f"{self.name:<24} {params:<12} {self.verdict.upper():<4}"
        if self.ratios:
            line += " ratios=" + ",".join(f"{r:.6f}" for r in self.ratios)
        for key, value in self.values.items():
            if isinstance(value, list):
                continue
            line += f" {key}={value:.3e}" if isinstance(value, float) else f" {key}={value}"
        return line

    def lines(self, indent=""):
        yield indent + self.summary_line()
        for part in self.parts:
            yield from part.lines(indent + "  ")


def ratio_check(name, params, schedule, observe, predict, tol=DEFAULT_TOL):
    """Evaluate observe(q)/predict(q) over the schedule and judge convergence"""
    schedule = tuple(schedule)
    validate_schedule(schedule)
    ratios, observed, predicted = [], [], []
    for q in schedule:
        lhs, rhs = observe(q), predict(q)
        observed.append(lhs)
        predicted.append(rhs)
        ratios.append(_finite(lhs / rhs, f"{name} ratio"))
    check = AsymptoticCheck(name, dict(params), schedule, ratios, tol, ratio_verdict(ratios, tol))
    check.values = {"observed": observed, "predicted": predicted}
    logger.info(check.summary_line())
    return check


def scalar_check(name, value, expected, tol):
    residual = abs(value - expected)
    verdict = "pass" if residual <= tol else "fail"
    return AsymptoticCheck(
        name, verdict=verdict, tol=tol, values={"value": value, "expected": expected, "residual": residual}
    )


def group_check(name, params, parts, schedule=(), tol=DEFAULT_TOL):
    verdict = "pass" if parts and all(part.passed for part in parts) else "fail"
    return AsymptoticCheck(name, dict(params), tuple(schedule), [], tol, verdict, {}, list(parts))


def _sum(sq, lin=0, const=0, a_exp=Affine(), pochs=None):
    return SumSpec(Quadratic(sq, lin, const), a_exp=a_exp, pochhammers=pochs if pochs is not None else (poch(),))


def product_sums(a, s, q):
    """The two sums of the product asymptotic, evaluated numerically"""
    first = eval_sum_numeric(_sum(Fraction(1, 2 * s), a_exp=INDEX), a=a, q=q)
    second = eval_sum_numeric(_sum(Fraction(s, 2), a_exp=Affine(0, -s)), a=a, q=q)
    return first, second


def second_term_sums(a, q):
    first = eval_sum_numeric(_sum(1, 1, a_exp=Affine(-1, -2)), a=a, q=q)
    second = eval_sum_numeric(_sum(Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), a_exp=INDEX), a=a, q=q)
    return first, second


def check_ramanujan_asymptotic(a, b, c, schedule=DEFAULT_SCHEDULE, tol=DEFAULT_TOL):
    """sum a^n q^(b n^2 + c n)/(q)_n against ramanujan_prediction"""
    _check_positive("a", a)
    _check_positive("b", b)
    spec = _sum(Fraction(b), Fraction(c), a_exp=INDEX)
    return ratio_check(
        "ramanujan",
        {"a": a, "b": b, "c": c},
        schedule,
        lambda q: eval_sum_numeric(spec, a=a, q=q),
        lambda q: ramanujan_prediction(a, b, c, q),
        tol,
    )


def check_product_asymptotic(a, s, schedule=DEFAULT_SCHEDULE, tol=DEFAULT_TOL):
    """Product of the two sums against product_prediction"""
    _check_positive("a", a)

    def observe(q):
        first, second = product_sums(a, s, q)
        return first * second

    return ratio_check("product", {"a": a, "s": s}, schedule, observe, lambda q: product_prediction(a, s, q), tol)


def check_second_term_asymptotic(a, schedule=DEFAULT_SCHEDULE, tol=DEFAULT_TOL):
    """Second product of the modular relation (b = 1) against its closed-form asymptotic"""
    _check_positive("a", a)

    def observe(q):
        first, second = second_term_sums(a, q)
        return first * second

    return ratio_check("second-term", {"a": a}, schedule, observe, lambda q: second_term_prediction(a, q), tol)


def check_section7_chain(a, schedule=DEFAULT_SCHEDULE, tol=DEFAULT_TOL):
    """
    The three asymptotics showing both sides of the modular relation at b = 1
    share the leading behaviour sqrt(2) exp(-(pi^2/6 + log^2 a)/log q).
    """
    _check_positive("a", a)

    def modular_lhs(q):
        first, second = product_sums(a, 2, q)
        third, fourth = second_term_sums(a, q)
        return first * second + third * fourth

    parts = [
        ratio_check("modular-lhs", {"a": a}, schedule, modular_lhs, lambda q: modular_prediction(a, q), tol),
        ratio_check(
            "inverse-euler",
            {},
            schedule,
            lambda q: 1.0 / eval_pochhammer(q, q),
            partition_prediction,
            tol,
        ),
        ratio_check(
            "theta",
            {"a": a},
            schedule,
            lambda q: eval_theta_numeric(a, 4, q),
            lambda q: theta_prediction(a, q),
            tol,
        ),
    ]
    return group_check("section7", {"a": a}, parts, schedule, tol)


def golden_constant():
    """Li2(1-u) - Li2(u)/4 + log^2 u - log^2(1-u)/16 with u^2 + u = 1; equals pi^2/24"""
    u = solve_root(1.0, 2)
    return li2(1.0 - u) - 0.25 * li2(u) + math.log(u) ** 2 - math.log(1.0 - u) ** 2 / 16.0


def cubic_constants():
    """
    Dilogarithm values attached to v, the real root of v^3 + v = 1.

    Returns the reduced v-identity and the four-term relation it comes from
    (both pi^2: duplication turns one into the other exactly), and the
    exponent X of the s = 3 ratio in both printed forms.
    """
    v = solve_root(1.0, 3)
    log_v = math.log(v)
    return {
        "v": v,
        "reduced": 6.0 * li2(v) - 30.0 * li2(1.0 - v) - 36.0 * li2(-v * v),
        "four_term": 6.0 * li2(v) + 36.0 * li2(v**2) - 30.0 * li2(v**3) - 18.0 * li2(v**4),
        "x_full": li2(1.0 - v) + 1.5 * log_v**2 - li2(v) / 6.0 - math.log(1.0 - v) ** 2 / 36.0,
        "x_short": li2(1.0 - v) + 1.25 * log_v**2 - li2(v) / 6.0,
    }


def nearest_pi_multiple(value, limit=24):
    """Closest m*pi^2/n with 1 <= m, n <= limit, as (m, n, distance)"""
    best = None
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            distance = abs(value - m * math.pi**2 / n)
            if best is None or distance < best[2]:
                best = (m, n, distance)
    return best


def check_ri_chain(schedule=DEFAULT_SCHEDULE, tol=DEFAULT_TOL):
    """Rogers' first identity recovered asymptotically, and why s = 3 has no analogue"""
    golden = golden_constant()
    constants = cubic_constants()
    x_value = constants["x_short"]

    g_spec = _sum(1)
    quartic = _sum(1, pochs=(poch(1, 4, 4),))
    cubic_top = _sum(Fraction(3, 2))
    sextic = _sum(1, pochs=(poch(1, 6, 6),))

    m, n, distance = nearest_pi_multiple(x_value)
    no_multiple = AsymptoticCheck(
        "x-not-pi2-multiple",
        verdict="pass" if distance > 1e-6 else "fail",
        tol=1e-6,
        values={"x": x_value, "nearest": f"{m}*pi^2/{n}", "distance": distance},
    )

    parts = [
        ratio_check(
            "rogers-ratio",
            {},
            schedule,
            lambda q: eval_sum_numeric(g_spec, q=q) / eval_sum_numeric(quartic, q=q),
            lambda q: _exp(-golden / math.log(q), "prediction") / math.sqrt(2.0),
            tol,
        ),
        ratio_check(
            "minus-q2-product",
            {},
            schedule,
            lambda q: eval_pochhammer(-q * q, q * q),
            lambda q: _exp(-math.pi**2 / (24.0 * math.log(q)), "prediction") / math.sqrt(2.0),
            tol,
        ),
        scalar_check("golden-dilog", golden, math.pi**2 / 24.0, 1e-12),
        scalar_check("v-identity", constants["reduced"], math.pi**2, 1e-12),
        scalar_check("v-four-term", constants["four_term"], math.pi**2, 1e-11),
        scalar_check("x-forms-agree", constants["x_full"], x_value, 1e-12),
        no_multiple,
        ratio_check(
            "cubic-ratio",
            {},
            schedule,
            lambda q: eval_sum_numeric(cubic_top, q=q) / eval_sum_numeric(sextic, q=q),
            lambda q: _exp(-x_value / math.log(q), "prediction") / math.sqrt(3.0),
            tol,
        ),
    ]
    return group_check("ri-chain", {}, parts, schedule, tol)


ASYMPTOTIC_CHECKS = ("product", "second-term", "section7", "ri-chain", "ramanujan")
