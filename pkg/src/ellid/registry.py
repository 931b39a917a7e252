"""The audit core: a catalog of identity records and the residual engine.

Each record carries one identity between series/theta/elliptic expressions,
a small fixed parameter grid, and possibly contested variants.  The two
sides of every entry are evaluated by independent machinery (a Lambert-type
sum is never checked against a rearrangement of itself), the residual is
classified against fixed thresholds, and the resulting reports are the
product: contested entries are adjudicated by computation, never silently
corrected.

Classification is a pure function of the relative residual
|lhs - rhs| / max(1, |lhs|, |rhs|):  PASS <= 1e-9 < INCONCLUSIVE <= 1e-6 < FAIL.
Evaluation errors (non-convergence, poles, domain violations at odd points)
are embedded as INCONCLUSIVE reports with a note, never as PASS.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

from .elliptic import (Convention, EllipticArgument, Nome, ellint_E, ellint_K,
                       ellint_K_extended)
from .errors import (ConstraintError, DomainError, EllidError,
                     UnknownIdentityError)
from .series import (DEFAULT_POLICY, S1_cosh_over_sinh,
                     S2_alt_sin_sq_over_expm1, S2h_alt_sinh_sq_over_expm1,
                     S3_alt_n_over_expm1, S3sq_alt_nsq_over_expm1,
                     S4_n_over_sinh, S5_sech, S5sq_sech2,
                     S6_alt_sin_over_expm1, S6closed, S7_csch_sinh,
                     S8_exp_over_cube, S9_lambert_E2, S10_alt_sin_lambert,
                     SeriesResult, TruncationPolicy, exp_over_sinh,
                     n_cosh_over_sinh_double, sum_series, zeta_neg, zeta_even)
from .singular import dadk_candidates, dadk_fd, solve_k
from .theta import (ThetaEval, ThetaKind, log_theta_derivative, q_product_P0,
                    theta2, theta4_imag, theta4_u_derivative_imag,
                    theta_u_derivative)

PASS_THRESHOLD = 1e-9
FAIL_THRESHOLD = 1e-6


class Classification(str, Enum):
    PASS = "PASS"
    INCONCLUSIVE = "INCONCLUSIVE"
    FAIL = "FAIL"


class Expectation(str, Enum):
    EXPECT_PASS = "ExpectPass"
    CONTESTED = "Contested"
    DOCUMENT_ONLY = "DocumentOnly"


def classify(rel_residual: float) -> Classification:
    """The classification bands; fixed, independent of any policy."""
    if not math.isfinite(rel_residual):
        return Classification.INCONCLUSIVE
    if rel_residual <= PASS_THRESHOLD:
        return Classification.PASS
    if rel_residual <= FAIL_THRESHOLD:
        return Classification.INCONCLUSIVE
    return Classification.FAIL


@dataclass(frozen=True)
class Side:
    """One evaluated side of an identity plus its summation metadata."""
    value: float
    terms: int = 0
    tail: float = 0.0


def _side(x) -> Side:
    if isinstance(x, Side):
        return x
    if isinstance(x, (SeriesResult, ThetaEval)):
        return Side(x.value, x.terms_used, x.tail_bound)
    return Side(float(x))


def _merge(value: float, *parts) -> Side:
    terms = sum(_side(p).terms for p in parts)
    tail = sum(_side(p).tail for p in parts)
    return Side(value, terms, tail)


# ---------------------------------------------------------------------------
# polynomial test functions for the weighted-derivative identities

MAX_POLY_DEGREE = 8


@dataclass(frozen=True)
class PolynomialSpec:
    """A real polynomial f(x) = sum f_n x^n of degree <= 8.

    Carries the derived quantities the identity evaluators need: the even and
    odd parts, the factorial-scaled coefficients g_n = n! f_n, and the real
    value of an even polynomial at a purely imaginary argument.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) == 0:
            raise DomainError("polynomial needs at least one coefficient")
        if len(self.coefficients) - 1 > MAX_POLY_DEGREE:
            raise DomainError(
                f"polynomial degree {len(self.coefficients) - 1} above cap {MAX_POLY_DEGREE}")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise DomainError("polynomial coefficients must be finite")

    @classmethod
    def monomial(cls, degree: int, coeff: float = 1.0) -> "PolynomialSpec":
        if degree < 0:
            raise DomainError(f"monomial degree must be >= 0, got {degree}")
        return cls((0.0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, n: int) -> float:
        return self.coefficients[n] if 0 <= n < len(self.coefficients) else 0.0

    def eval(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_abs(self, x: float) -> float:
        """sum |f_n| |x|^n, an envelope for |f| on the disk of radius |x|."""
        ax = abs(x)
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * ax + abs(c)
        return acc

    def even_part(self) -> "PolynomialSpec":
        return PolynomialSpec(tuple(
            c if n % 2 == 0 else 0.0 for n, c in enumerate(self.coefficients)))

    def odd_part(self) -> "PolynomialSpec":
        return PolynomialSpec(tuple(
            c if n % 2 == 1 else 0.0 for n, c in enumerate(self.coefficients)))

    @property
    def is_even(self) -> bool:
        return all(c == 0.0 for n, c in enumerate(self.coefficients) if n % 2 == 1)

    def g_coefficients(self) -> tuple[float, ...]:
        """g_n = n! f_n."""
        return tuple(math.factorial(n) * c for n, c in enumerate(self.coefficients))

    def eval_imag_even(self, y: float) -> float:
        """f(iy) for an even polynomial, which is real: sum f_2k (-1)^k y^(2k)."""
        if not self.is_even:
            raise DomainError("imaginary-argument evaluation needs an even polynomial")
        acc = 0.0
        y2 = y * y
        for k in range((self.degree // 2), -1, -1):
            acc = acc * (-y2) + self.coefficient(2 * k)
        return acc


def poly_even_zeta_sum(F: PolynomialSpec, t: float) -> float:
    """sum over n of G(t/(2 pi i n)) collapsed to even zeta values.

    For even polynomial G (coefficients g_2k = (2k)! f_2k) the n-sum is
    sum_k g_2k (-1)^k zeta(2k) (2 pi)^(-2k) t^(2k).  Requires the test
    function to vanish to second order at 0, so the sum starts at k = 2.
    """
    if not F.is_even:
        raise DomainError("zeta-collapsed sum requires an even polynomial")
    if F.coefficient(0) != 0.0 or F.coefficient(2) != 0.0:
        raise DomainError(
            "test function must satisfy F(0) = F'(0) = F''(0) = 0")
    g = F.g_coefficients()
    total = 0.0
    for k in range(2, F.degree // 2 + 1):
        g2k = g[2 * k]
        if g2k == 0.0:
            continue
        sign = -1.0 if k % 2 else 1.0
        total += g2k * sign * zeta_even(k) / (2.0 * math.pi) ** (2 * k) * t ** (2 * k)
    return total


def poly_even_zeta_integral(F: PolynomialSpec) -> float:
    """2 * integral from 1 to 2 of (1/t) sum_n G(t/(2 pi i n)) dt, termwise.

    Exact polynomial integration: 2 sum_k c_2k (2^(2k) - 1)/(2k) with c_2k
    the collapsed-sum coefficients.
    """
    if not F.is_even:
        raise DomainError("zeta-collapsed integral requires an even polynomial")
    if F.coefficient(0) != 0.0 or F.coefficient(2) != 0.0:
        raise DomainError(
            "test function must satisfy F(0) = F'(0) = F''(0) = 0")
    g = F.g_coefficients()
    total = 0.0
    for k in range(2, F.degree // 2 + 1):
        g2k = g[2 * k]
        if g2k == 0.0:
            continue
        sign = -1.0 if k % 2 else 1.0
        c2k = g2k * sign * zeta_even(k) / (2.0 * math.pi) ** (2 * k)
        total += 2.0 * c2k * (2 ** (2 * k) - 1) / (2.0 * k)
    return total


def poly_weighted_log_theta4_sum(f: PolynomialSpec, a: float, s: float,
                                 form: str = "derivative",
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> Side:
    """The polynomial-weighted left sides built on log theta4(i s/2, e^(-pi a)).

    form="derivative": sum_n (-1)^n f_n d^n/ds^n log theta4(i s/2, q)
    form="shift":      sum_n f_n log theta4(i (s+n)/2, q)
    """
    q = Nome.from_pi_exponent(a)
    if form == "derivative":
        total = 0.0
        for n, c in enumerate(f.coefficients):
            if c == 0.0:
                continue
            d = log_theta_derivative(ThetaKind.THETA4_IMAG_HALF, n, s, q, policy)
            total += (-1.0 if n % 2 else 1.0) * c * d.value
        return Side(total)
    if form == "shift":
        total = 0.0
        terms = 0
        tail = 0.0
        for n, c in enumerate(f.coefficients):
            if c == 0.0:
                continue
            th = theta4_imag((s + n) / 2.0, q, policy)
            total += c * math.log(th.value)
            terms += th.terms_used
            tail += th.tail_bound
        return Side(total, terms, tail)
    raise DomainError(f"unknown form {form!r}; use 'derivative' or 'shift'")


def poly_weighted_log_theta2_sum(f: PolynomialSpec, a: float, s: float,
                                 policy: TruncationPolicy = DEFAULT_POLICY) -> Side:
    """sum_n (-1)^n f_n d^n/ds^n log theta2(s, e^(-1/a))."""
    q = Nome.from_exponent(1.0 / a)
    total = 0.0
    for n, c in enumerate(f.coefficients):
        if c == 0.0:
            continue
        d = log_theta_derivative(ThetaKind.THETA2, n, s, q, policy)
        total += (-1.0 if n % 2 else 1.0) * c * d.value
    return Side(total)


# ---------------------------------------------------------------------------
# bilateral sums shared by the polynomial identities

def _poly_bilateral_exp_sinh(f: PolynomialSpec, a: float, s: float,
                             policy: TruncationPolicy) -> SeriesResult:
    """-sum_{n in Z, n != 0} f(n) e^(-ns) / (2n sinh(pi a n)); needs |s| < pi a."""
    if abs(s) >= math.pi * a:
        raise DomainError(f"bilateral sum diverges: |s| = {abs(s)!r} >= pi*a = {math.pi * a!r}")

    def pair(n: int) -> tuple[float, float]:
        x = math.pi * a * n
        term = -(f.eval(n) * exp_over_sinh(-n * s, x)
                 + f.eval(-n) * exp_over_sinh(n * s, x)) / (2.0 * n)
        env = f.eval_abs(n) * exp_over_sinh(n * abs(s), x) / n
        return term, env

    return sum_series(pair, policy)


def _poly_exp_bilateral_exp_sinh(f: PolynomialSpec, a: float, s: float,
                                 policy: TruncationPolicy) -> SeriesResult:
    """-sum_{n != 0} f(e^(-n)) e^(-ns) / (2n sinh(pi a n)).

    f(e^(+-n)) is expanded coefficientwise into exp_over_sinh terms so the
    n > 0 mirror (which carries f(e^n) ~ e^(deg*n)) never overflows; the sum
    converges only for deg + |s| < pi a, which is enforced.
    """
    if f.degree + abs(s) >= math.pi * a:
        raise DomainError(
            f"bilateral sum diverges: degree + |s| = {f.degree + abs(s)!r} "
            f">= pi*a = {math.pi * a!r}")

    def pair(n: int) -> tuple[float, float]:
        x = math.pi * a * n
        plus = 0.0
        minus = 0.0
        env = 0.0
        for i, c in enumerate(f.coefficients):
            if c == 0.0:
                continue
            plus += c * exp_over_sinh(n * s + i * n, x)
            minus += c * exp_over_sinh(-n * s - i * n, x)
            env += abs(c) * exp_over_sinh(n * abs(s) + i * n, x)
        return -(minus + plus) / (2.0 * n), env / n

    return sum_series(pair, policy)


# ---------------------------------------------------------------------------
# registry data model

@dataclass(frozen=True)
class ParamSpec:
    """One named grid parameter: default audit values plus its legal range."""
    name: str
    grid: tuple
    lo: float | None = None
    hi: float | None = None
    choices: tuple | None = None


Evaluator = Callable[[Mapping, TruncationPolicy], Side]


@dataclass(frozen=True)
class Variant:
    variant_id: str
    lhs: Evaluator
    rhs: Evaluator
    note: str = ""


@dataclass(frozen=True)
class IdentityRecord:
    identity_id: str
    anchor: str
    params: tuple[ParamSpec, ...]
    variants: tuple[Variant, ...]
    expected: Expectation
    constraint: Callable[[Mapping], bool] | None = None
    constraint_note: str = ""

    def variant(self, variant_id: str) -> Variant:
        for v in self.variants:
            if v.variant_id == variant_id:
                return v
        raise UnknownIdentityError(
            f"identity {self.identity_id!r} has no variant {variant_id!r}")

    def grid_points(self) -> list[dict]:
        names = [p.name for p in self.params]
        points = []
        for combo in itertools.product(*(p.grid for p in self.params)):
            point = dict(zip(names, combo))
            if self.constraint is None or self.constraint(point):
                points.append(point)
        return points

    def validate_point(self, point: Mapping) -> None:
        names = {p.name for p in self.params}
        if set(point.keys()) != names:
            raise ConstraintError(
                f"{self.identity_id}: expected parameters {sorted(names)}, "
                f"got {sorted(point.keys())}")
        for p in self.params:
            v = point[p.name]
            if p.choices is not None:
                if v not in p.choices:
                    raise ConstraintError(
                        f"{self.identity_id}: {p.name}={v!r} not in {p.choices}")
                continue
            if not isinstance(v, (int, float)) or not math.isfinite(float(v)):
                raise ConstraintError(
                    f"{self.identity_id}: {p.name}={v!r} is not a finite number")
            if p.lo is not None and v < p.lo:
                raise ConstraintError(
                    f"{self.identity_id}: {p.name}={v!r} below {p.lo}")
            if p.hi is not None and v > p.hi:
                raise ConstraintError(
                    f"{self.identity_id}: {p.name}={v!r} above {p.hi}")
        if self.constraint is not None and not self.constraint(point):
            raise ConstraintError(
                f"{self.identity_id}: point {dict(point)!r} violates "
                f"{self.constraint_note or 'the domain constraint'}")


@dataclass(frozen=True)
class ResidualReport:
    identity: str
    variant: str
    params: dict
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    classification: Classification
    terms: dict = field(default_factory=dict)
    note: str = ""


def _sort_token(v) -> tuple:
    if isinstance(v, str):
        return (1, v)
    return (0, float(v))


def report_sort_key(r: ResidualReport) -> tuple:
    return (r.identity, r.variant,
            tuple((k, _sort_token(r.params[k])) for k in sorted(r.params)))


# ---------------------------------------------------------------------------
# identity evaluators
#
# LHS and RHS of each entry share only the library primitives; no identity
# feeds one side's intermediate values to the other.

def _ke_at(a: float) -> tuple[float, float, float]:
    """(k, K, E) at the singular modulus for ratio a; parameter convention."""
    k = solve_k(a).k.value
    arg = EllipticArgument.from_parameter(k * k)
    return k, ellint_K(arg), ellint_E(arg)


# -- P1 ---------------------------------------------------------------------

def _p1_lhs(p, policy):
    return _side(S1_cosh_over_sinh(p["a"], p["t"], policy))


def _p1_rhs(p, policy):
    q = Nome.from_pi_exponent(p["a"])
    prod = q_product_P0(q, policy)
    th = theta4_imag(p["t"], q, policy)
    return _merge(math.log(prod.value) - math.log(th.value), prod, th)


# -- P2 ---------------------------------------------------------------------

def _p2_lhs(p, policy):
    r = S2_alt_sin_sq_over_expm1(2.0 * math.pi * p["a"], p["theta"], policy)
    return _merge(4.0 * r.value, r)


def _p2_lhs_sinh(p, policy):
    r = S2h_alt_sinh_sq_over_expm1(2.0 * math.pi * p["a"], p["theta"], policy)
    return _merge(4.0 * r.value, r)


def _p2_rhs(p, policy):
    a, th = p["a"], p["theta"]
    q = Nome.from_pi_exponent(1.0 / a)
    num = theta4_imag(th / a, q, policy)
    den = theta4_imag(0.0, q, policy)
    value = (math.log(num.value) - math.log(den.value) - math.log(math.cos(th))
             - th * th / (a * math.pi))
    return _merge(value, num, den)


def _p2_rhs_theta2(p, policy):
    a, th = p["a"], p["theta"]
    q = Nome.from_pi_exponent(a)
    num = theta2(th, q, policy)
    den = theta2(0.0, q, policy)
    value = math.log(num.value) - math.log(den.value) - math.log(math.cos(th))
    return _merge(value, num, den)


# -- P2b --------------------------------------------------------------------

def _p2b_lhs(p, policy):
    q = Nome.from_exponent(p["z"])
    return Side(theta4_u_derivative_imag(p["z"], q, policy))


def _p2b_rhs(p, policy):
    q = Nome.from_exponent(p["z"])
    th = theta4_imag(p["z"], q, policy)
    return _merge(-2.0 * th.value, th)


def _p2b_lhs_pi(p, policy):
    q = Nome.from_pi_exponent(p["z"])
    return Side(theta4_u_derivative_imag(p["z"], q, policy))


def _p2b_rhs_pi(p, policy):
    q = Nome.from_pi_exponent(p["z"])
    th = theta4_imag(p["z"], q, policy)
    return _merge(-2.0 * th.value, th)


# -- P3 ---------------------------------------------------------------------

def _p3_lhs(p, policy):
    a = p["a"]
    q = Nome.from_pi_exponent(2.0 * a)
    d = log_theta_derivative(ThetaKind.THETA4_IMAG_HALF, 2, math.pi * a, q, policy)
    return Side(2.0 * math.pi ** 2 * d.value)


def _p3_rhs(p, policy):
    _, K, E = _ke_at(p["a"])
    return Side(K * E - K * K)


# -- E4 / E5 ----------------------------------------------------------------

def _e4_lhs(p, policy):
    return _side(S3_alt_n_over_expm1(2.0 * math.pi / p["a"], policy))


def _e4_rhs(p, policy):
    a = p["a"]
    _, K, E = _ke_at(a)
    return Side(0.125 - a / (4.0 * math.pi) + a * a * K * (E - K) / (2.0 * math.pi ** 2))


def _e5_lhs(p, policy):
    a = p["a"]
    alt = S3_alt_n_over_expm1(2.0 * math.pi / a, policy)
    hyp = n_cosh_over_sinh_double(a, policy)
    value = -0.25 + a / (2.0 * math.pi) + 2.0 * alt.value + 2.0 * a * a * hyp.value
    return _merge(value, alt, hyp)


def _zero_rhs(p, policy):
    return Side(0.0)


# -- E5b / E5c --------------------------------------------------------------

def _e5b_lhs(p, policy):
    return _side(S4_n_over_sinh(p["b"], policy))


def _e5b_rhs(p, policy):
    _, K, E = _ke_at(p["b"])
    return Side(K * (K - E) / math.pi ** 2)


def _e5c_lhs(p, policy):
    return _side(S5sq_sech2(p["x"], policy))


def _e5c_rhs(p, policy):
    r = S3_alt_n_over_expm1(2.0 * math.pi * p["x"], policy)
    return _merge(-4.0 * r.value, r)


# -- E7 / E7b ---------------------------------------------------------------

def _e7_lhs(p, policy):
    return Side(0.5 * p["a"] * math.tan(0.5 * p["v"]))


def _e7_rhs(p, policy):
    a, v = p["a"], p["v"]
    s6 = S6_alt_sin_over_expm1(a, v, policy)
    s7 = S7_csch_sinh(a, v, policy)
    return _merge(v + 2.0 * a * s6.value + 2.0 * math.pi * s7.value, s6, s7)


def _e7_rhs_inverted(p, policy):
    a, v = p["a"], p["v"]
    s6 = S6_alt_sin_over_expm1(a, v, policy)
    s7 = S7_csch_sinh(1.0 / a, v, policy)
    return _merge(v + 2.0 * a * s6.value + 2.0 * math.pi * s7.value, s6, s7)


def _e7b_lhs(p, policy):
    return _side(S6_alt_sin_over_expm1(p["a"], p["v"], policy))


def _e7b_rhs(p, policy):
    return _side(S6closed(p["a"], p["v"], policy))


# -- E8 ---------------------------------------------------------------------

def _e8_lhs(p, policy):
    r = S10_alt_sin_lambert(p["z"], Nome.from_value(p["q"]), policy)
    return _merge(4.0 * r.value, r)


def _e8_lhs_half(p, policy):
    r = S10_alt_sin_lambert(p["z"], Nome.from_value(p["q"]), policy)
    return _merge(2.0 * r.value, r)


def _e8_rhs(p, policy):
    z = p["z"]
    q = Nome.from_value(p["q"])
    th = theta2(z, q, policy)
    dth = theta_u_derivative(ThetaKind.THETA2, z, q, policy)
    return _merge(math.tan(z) + dth / th.value, th)


def _e8_rhs_minus_tan(p, policy):
    z = p["z"]
    q = Nome.from_value(p["q"])
    th = theta2(z, q, policy)
    dth = theta_u_derivative(ThetaKind.THETA2, z, q, policy)
    return _merge(-math.tan(z) + dth / th.value, th)


# -- P4 / P4b ---------------------------------------------------------------

_P4_X_GRID = (0.0, 0.1, 0.2, 0.3)


def _p4_bracket(a: float, x: float, policy) -> tuple[float, int, float]:
    t2 = theta2(x, Nome.from_pi_exponent(1.0 / a), policy)
    t4 = theta4_imag(a * x, Nome.from_pi_exponent(a), policy)
    value = math.exp(x * x * a / math.pi) * t2.value / t4.value
    return value, t2.terms_used + t4.terms_used, t2.tail_bound + t4.tail_bound


def _p4_lhs(p, policy):
    vals = [_p4_bracket(p["a"], x, policy) for x in _P4_X_GRID]
    return Side(max(v for v, _, _ in vals),
                sum(t for _, t, _ in vals), sum(b for _, _, b in vals))


def _p4_rhs(p, policy):
    vals = [_p4_bracket(p["a"], x, policy) for x in _P4_X_GRID]
    return Side(min(v for v, _, _ in vals))


def _p4b_lhs(p, policy):
    r = S7_csch_sinh(2.0 / p["a"], 2.0 * p["z"], policy)
    return _merge(2.0 * math.pi * r.value, r)


def _p4b_rhs(p, policy):
    a, z = p["a"], p["z"]
    q = Nome.from_exponent(1.0 / a)
    th = theta2(z, q, policy)
    dth = theta_u_derivative(ThetaKind.THETA2, z, q, policy)
    return _merge(-2.0 * z - dth / (a * th.value), th)


# -- P5 ---------------------------------------------------------------------

def _p5_lhs(p, policy):
    b = p["b"]
    cube = S8_exp_over_cube(b, policy)
    nsq = S3sq_alt_nsq_over_expm1(2.0 * math.pi / b, policy)
    return _merge(-2.0 * cube.value + nsq.value, cube, nsq)


def _p5_lhs_shifted(p, policy):
    b = p["b"]
    cube = S8_exp_over_cube(b, policy)
    nsq = S3sq_alt_nsq_over_expm1(2.0 * math.pi / b, policy)
    lin = S3_alt_n_over_expm1(2.0 * math.pi / b, policy)
    return _merge(-2.0 * cube.value + nsq.value + lin.value, cube, nsq, lin)


def _p5_rhs(p, policy):
    b = p["b"]
    _, K, E = _ke_at(b)
    return Side(0.125 - b / (4.0 * math.pi)
                + b * b * (E * K - K * K) / (2.0 * math.pi ** 2))


# -- P6 / P6b ---------------------------------------------------------------

def _p6_lhs(p, policy):
    q = Nome.from_pi_exponent(0.5 / p["a"])
    return Side(theta_u_derivative(ThetaKind.THETA2, 0.25 * math.pi, q, policy))


def _p6_rhs(p, policy):
    a = p["a"]
    q = Nome.from_pi_exponent(0.5 / a)
    th = theta2(0.25 * math.pi, q, policy)
    _, K, _ = _ke_at(a)
    return _merge(-(2.0 * a / math.pi) * th.value * K, th)


def _p6b_lhs(p, policy):
    return _side(S5_sech(p["a"], policy))


def _p6b_rhs_plus(p, policy):
    _, K, _ = _ke_at(p["a"])
    return Side(0.5 + K / math.pi)


def _p6b_rhs_minus(p, policy):
    _, K, _ = _ke_at(p["a"])
    return Side(K / math.pi - 0.5)


# -- P7 ---------------------------------------------------------------------

def _p7_arg(p) -> EllipticArgument:
    conv = Convention.MODULUS if p["convention"] == "modulus" else Convention.PARAMETER
    return EllipticArgument(p["value"], conv)


def _p7_lhs_stated(p, policy):
    return Side(dict(dadk_candidates(_p7_arg(p)))["stated-formula"])


def _p7_lhs_classical(p, policy):
    return Side(dict(dadk_candidates(_p7_arg(p)))["classical"])


def _p7_rhs_fd(p, policy):
    return Side(dadk_fd(_p7_arg(p)).value)


# -- P8 ---------------------------------------------------------------------

def _p8_lhs(p, policy):
    r = S9_lambert_E2(Nome.from_pi_exponent(p["r"]), policy)
    return _merge(24.0 * r.value, r)


def _p8_rhs_with(drdm: Callable[[float, float, float], float], p, policy):
    k, K, E = _ke_at(p["r"])
    m = k * k
    d = drdm(m, K, E)
    return Side(1.0 + (6.0 * E + (m - 5.0) * K) / (math.pi * m * (1.0 - m) * K * d))


def _p8_rhs_stated(p, policy):
    return _p8_rhs_with(
        lambda m, K, E: ((E - (1.0 - m) * K) / (2.0 * m * (1.0 - m))) / (E * K - K * K),
        p, policy)


def _p8_rhs_classical(p, policy):
    return _p8_rhs_with(
        lambda m, K, E: -math.pi / (4.0 * m * (1.0 - m) * K * K),
        p, policy)


# -- P9 ---------------------------------------------------------------------

def _p9_lhs_parameter(p, policy):
    x = p["x"]
    return Side(ellint_K_extended(x / (x - 1.0)) / math.sqrt(1.0 - x))


def _p9_rhs_parameter(p, policy):
    return Side(ellint_K(EllipticArgument.from_parameter(p["x"])))


def _p9_lhs_modulus(p, policy):
    x = p["x"]
    km = x / (x - 1.0)
    # |km| >= 1 has no real K in the modulus reading; refuse, the report
    # records the failure.
    if abs(km) >= 1.0:
        raise DomainError(f"modulus reading undefined: |x/(x-1)| = {abs(km)!r} >= 1")
    return Side(ellint_K_extended(km * km) / math.sqrt(1.0 - x))


def _p9_rhs_modulus(p, policy):
    return Side(ellint_K(EllipticArgument.from_modulus(p["x"])))


# -- P10 / P10a -------------------------------------------------------------

def _alt_poly_over_expm1(F: PolynomialSpec, a: float,
                         policy: TruncationPolicy) -> SeriesResult:
    """sum (-1)^n F(n) / (n (e^(an) - 1))."""

    def term(n: int) -> tuple[float, float]:
        x = a * n
        inv = 1.0 / math.expm1(x) if x <= 700.0 else math.exp(-x)
        env = F.eval_abs(n) * inv / n
        sign = -1.0 if n % 2 else 1.0
        return sign * F.eval(n) * inv / n, env

    return sum_series(term, policy)


def _imag_poly_over_sinh(F: PolynomialSpec, b: float,
                         policy: TruncationPolicy) -> SeriesResult:
    """sum F(ibn) / (n sinh(b n pi)) for even F (real values)."""

    def term(n: int) -> tuple[float, float]:
        inv = exp_over_sinh(0.0, b * n * math.pi)  # 1/sinh
        env = F.eval_abs(b * n) * inv / n
        return F.eval_imag_even(b * n) * inv / n, env

    return sum_series(term, policy)


def _p10_lhs(p, policy):
    F = PolynomialSpec.monomial(int(p["fdeg"]))
    b = p["b"]
    a = 2.0 * math.pi / b
    integral = poly_even_zeta_integral(F)
    alt = _alt_poly_over_expm1(F, a, policy)
    hyp = _imag_poly_over_sinh(F, b, policy)
    return _merge(integral + 2.0 * alt.value - hyp.value, alt, hyp)


def _p10a_lhs(p, policy):
    F = PolynomialSpec.monomial(int(p["fdeg"]))
    b = p["b"]
    a = 2.0 * math.pi / b
    zeta_term = sum(
        F.coefficient(2 * nu) * (2 ** (2 * nu) - 1) * zeta_neg(nu)
        for nu in range(1, F.degree // 2 + 1))
    alt = _alt_poly_over_expm1(F, a, policy)
    hyp = _imag_poly_over_sinh(F, b, policy)
    return _merge(zeta_term + 2.0 * alt.value - hyp.value, alt, hyp)


# -- P11a / P11b ------------------------------------------------------------

def _p11a_lhs(p, policy):
    f = PolynomialSpec.monomial(int(p["fdeg"]))
    return poly_weighted_log_theta4_sum(f, p["a"], p["s"], "derivative", policy)


def _p11a_rhs(p, policy):
    f = PolynomialSpec.monomial(int(p["fdeg"]))
    a, s = p["a"], p["s"]
    bil = _poly_bilateral_exp_sinh(f, a, s, policy)
    f0 = f.coefficient(0)
    if f0 != 0.0:
        prod = q_product_P0(Nome.from_pi_exponent(a), policy)
        return _merge(f0 * math.log(prod.value) + bil.value, prod, bil)
    return _merge(bil.value, bil)


_P11B_POLYS = {
    "base": PolynomialSpec((0.0, 0.0, 1.0)),            # x^2
    "mixed-parity": PolynomialSpec((0.0, 1.0, 1.0)),    # x + x^2
}


def _p11b_lhs_for(key: str):
    def lhs(p, policy):
        return poly_weighted_log_theta4_sum(_P11B_POLYS[key], p["a"], p["s"],
                                            "shift", policy)
    return lhs


def _p11b_rhs_for(key: str):
    def rhs(p, policy):
        f = _P11B_POLYS[key]
        a, s = p["a"], p["s"]
        bil = _poly_exp_bilateral_exp_sinh(f, a, s, policy)
        prod = q_product_P0(Nome.from_pi_exponent(a), policy)
        return _merge(f.eval(1.0) * math.log(prod.value) + bil.value, prod, bil)
    return rhs


# -- P12 --------------------------------------------------------------------

_P12_POLY = PolynomialSpec((0.0, 0.0, 1.0, 1.0))  # x^2 + x^3, f(0) = 0


def _p12_lhs(p, policy):
    return poly_weighted_log_theta2_sum(_P12_POLY, p["a"], p["s"], policy)


def _p12_bilateral(f: PolynomialSpec, a: float, s: float, weight_half_n: bool,
                   policy: TruncationPolicy) -> SeriesResult:
    """sum_{n != 0} f(2 pi n a) e^(-2 pi n s a) / w with w = 2n sinh(pi^2 a n)
    (weight_half_n) or w = sinh(pi^2 a n) (printed form)."""
    if 2.0 * math.pi * abs(s) >= math.pi ** 2:
        raise DomainError(f"bilateral sum diverges: |s| = {abs(s)!r} >= pi/2")

    def pair(n: int) -> tuple[float, float]:
        x = math.pi ** 2 * a * n
        c = 2.0 * math.pi * n * a
        plus = f.eval(c) * exp_over_sinh(-2.0 * math.pi * n * s * a, x)
        # the n -> -n mirror: f(-c) e^(+2 pi n s a) / sinh(-x) terms
        minus_num = f.eval(-c) * exp_over_sinh(2.0 * math.pi * n * s * a, x)
        env = f.eval_abs(c) * exp_over_sinh(2.0 * math.pi * n * abs(s) * a, x)
        if weight_half_n:
            return (plus + minus_num) / (2.0 * n), env / n
        return plus - minus_num, 2.0 * env

    return sum_series(pair, policy)


def _p12_rhs_printed(p, policy):
    a, s = p["a"], p["s"]
    f = _P12_POLY
    bil = _p12_bilateral(f, a, s, weight_half_n=False, policy=policy)
    value = 2.0 * a - 2.0 * a * f.eval(0.0) * s + a * math.pi * bil.value
    return _merge(value, bil)


def _p12_rhs_derived(p, policy):
    a, s = p["a"], p["s"]
    f = _P12_POLY
    bil = _p12_bilateral(f, a, s, weight_half_n=True, policy=policy)
    value = (2.0 * a * f.coefficient(1) * s - 2.0 * a * f.coefficient(2)
             - bil.value)
    return _merge(value, bil)


# -- P7b ----------------------------------------------------------------

def _p7b_lhs(p, policy):
    x = p["x"]
    q = Nome.from_pi_exponent(2.0 * x)
    d = log_theta_derivative(ThetaKind.THETA4_IMAG_HALF, 1, math.pi * x, q, policy)
    return Side(2.0 * math.pi * d.value)


def _p7b_rhs_k(p, policy):
    _, K, _ = _ke_at(p["x"])
    return Side(0.5 * math.pi - K)


def _p7b_rhs_sech(p, policy):
    r = S5_sech(p["x"], policy)
    return _merge(-math.pi * r.value, r)


def _p7b_rhs_plus_half(p, policy):
    _, K, _ = _ke_at(p["x"])
    return Side(-math.pi * (0.5 + K / math.pi))


# ---------------------------------------------------------------------------
# the registry itself

def build_registry() -> "Registry":
    pi = math.pi
    records = [
        IdentityRecord(
            "P1",
            "sum cosh(2tn)/(n sinh(pi a n)) = log P0 - log theta4(it, e^(-a pi))",
            (ParamSpec("a", (0.8, 1.0, 1.5), lo=0.05, hi=20.0),
             ParamSpec("t", (0.0, 0.1, 0.3), lo=0.0, hi=10.0)),
            (Variant("base", _p1_lhs, _p1_rhs),),
            Expectation.EXPECT_PASS,
            constraint=lambda p: 2.0 * abs(p["t"]) < pi * p["a"],
            constraint_note="2|t| < pi*a"),
        IdentityRecord(
            "P2",
            "4 sum (-1)^n sin(theta n)^2/((e^(2 pi n a)-1) n) = "
            "log(theta4(i theta/a, e^(-pi/a)) / (theta4(0, e^(-pi/a)) cos theta)) "
            "- theta^2/(a pi)",
            (ParamSpec("a", (0.5, 1.0, 2.0), lo=0.05, hi=20.0),
             ParamSpec("theta", (0.2, 0.5), lo=0.0, hi=1.2)),
            (Variant("base", _p2_lhs, _p2_rhs),
             Variant("sinh-squared", _p2_lhs_sinh, _p2_rhs,
                     note="proof text uses sinh^2 where the statement has sin^2"),
             Variant("theta2-direct", _p2_lhs, _p2_rhs_theta2,
                     note="same right side through theta2 at nome e^(-pi a), "
                          "no Gaussian correction term")),
            Expectation.CONTESTED,
            constraint=lambda p: abs(p["theta"]) < min(0.5 * pi, pi * p["a"]),
            constraint_note="|theta| < min(pi/2, pi*a)"),
        IdentityRecord(
            "P2b",
            "d theta4/du (iz, e^(-z)) + 2i theta4(iz, e^(-z)) = 0, "
            "read as the real series -4 sum (-1)^n n q^(n^2) sinh(2nz) "
            "+ 2 theta4(iz, q) = 0",
            (ParamSpec("z", (0.5, 1.0, 2.0), lo=0.05, hi=20.0),),
            (Variant("base", _p2b_lhs, _p2b_rhs),
             Variant("nome-exp-pi-z", _p2b_lhs_pi, _p2b_rhs_pi,
                     note="alternative reading with nome e^(-pi z)")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P3",
            "2 d^2/dt^2 log theta4(i t pi/2, e^(-2 pi a)) at t=a = "
            "K(k_a) E(k_a) - K(k_a)^2",
            (ParamSpec("a", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _p3_lhs, _p3_rhs),),
            Expectation.CONTESTED),
        IdentityRecord(
            "E4",
            "sum (-1)^n n/(e^(2 pi n/a)-1) = 1/8 - a/(4 pi) "
            "+ a^2 K(k_a)(E(k_a)-K(k_a))/(2 pi^2)",
            (ParamSpec("a", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _e4_lhs, _e4_rhs),),
            Expectation.EXPECT_PASS),
        IdentityRecord(
            "E5",
            "-1/4 + a/(2 pi) + 2 sum (-1)^n n/(e^(2 pi n/a)-1) "
            "+ 2 a^2 sum n cosh(a n pi)/sinh(2 a n pi) = 0",
            (ParamSpec("a", (0.5, 1.0, 2.0), lo=0.05, hi=20.0),),
            (Variant("base", _e5_lhs, _zero_rhs),),
            Expectation.EXPECT_PASS),
        IdentityRecord(
            "E5b",
            "sum n/sinh(pi b n) = (K(k_b)/pi^2)(K(k_b) - E(k_b))",
            (ParamSpec("b", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _e5b_lhs, _e5b_rhs),),
            Expectation.EXPECT_PASS),
        IdentityRecord(
            "E5c",
            "sum sech(pi n x)^2 = -4 sum (-1)^n n/(e^(2 pi n x)-1)",
            (ParamSpec("x", (0.5, 1.0, 2.0), lo=0.05, hi=20.0),),
            (Variant("base", _e5c_lhs, _e5c_rhs),),
            Expectation.EXPECT_PASS),
        IdentityRecord(
            "E7",
            "(a/2) tan(v/2) = v + 2a sum (-1)^n sin(nv)/(e^(an)-1) "
            "+ 2 pi sum csch(2 n pi^2/a) sinh(2 pi n v/a)",
            (ParamSpec("a", (2.0, 4.0), lo=0.05, hi=50.0),
             ParamSpec("v", (0.5, 1.0, 2.0), lo=0.0, hi=3.1)),
            (Variant("base", _e7_lhs, _e7_rhs),
             Variant("inverted-a", _e7_lhs, _e7_rhs_inverted,
                     note="hyperbolic sum with a replaced by 1/a, the other "
                          "plausible pairing")),
            Expectation.CONTESTED,
            constraint=lambda p: abs(p["v"]) < pi,
            constraint_note="|v| < pi"),
        IdentityRecord(
            "E7b",
            "sum (-1)^n sin(nv)/(e^(an)-1) = "
            "-(1/2) sum sin(v)/(cos(v)+cosh(an))",
            (ParamSpec("a", (1.0, 2.0), lo=0.05, hi=50.0),
             ParamSpec("v", (0.5, 1.0), lo=-10.0, hi=10.0)),
            (Variant("base", _e7b_lhs, _e7b_rhs),),
            Expectation.EXPECT_PASS),
        IdentityRecord(
            "E8",
            "4 sum (-1)^n sin(2nz) q^(2n)/(1-q^(2n)) = "
            "tan(z) + (d theta2/dz)/theta2(z, q)",
            (ParamSpec("z", (0.3, 0.6), lo=0.0, hi=1.4),
             ParamSpec("q", (0.2, math.exp(-pi)), lo=0.0, hi=0.9)),
            (Variant("base", _e8_lhs, _e8_rhs),
             Variant("minus-tan", _e8_lhs, _e8_rhs_minus_tan,
                     note="sign variant on the tangent term"),
             Variant("half-scale", _e8_lhs_half, _e8_rhs,
                     note="scale variant: factor 2 instead of 4")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P4",
            "e^(x^2 a/pi) theta2(x, e^(-pi/a)) / theta4(iax, e^(-a pi)) is "
            "constant in x (checked on x in {0, 0.1, 0.2, 0.3})",
            (ParamSpec("a", (1.0, 2.0), lo=0.05, hi=20.0),),
            (Variant("base", _p4_lhs, _p4_rhs,
                     note="lhs/rhs are the max/min of the bracket over the x grid"),),
            Expectation.CONTESTED),
        IdentityRecord(
            "P4b",
            "2 pi sum sinh(2 n pi z a)/sinh(n pi^2 a) = "
            "-2z - (1/a) d/dz log theta2(z, e^(-1/a))",
            (ParamSpec("a", (1.0, 2.0), lo=0.05, hi=20.0),
             ParamSpec("z", (0.2, 0.5), lo=0.0, hi=1.5)),
            (Variant("base", _p4b_lhs, _p4b_rhs),),
            Expectation.CONTESTED,
            constraint=lambda p: abs(p["z"]) < 0.5 * pi,
            constraint_note="|z| < pi/2"),
        IdentityRecord(
            "P5",
            "-2 sum e^(2 n pi/b)/(1+e^(2 n pi/b))^3 + sum (-1)^n n^2/(e^(2 n pi/b)-1) "
            "= 1/8 - b/(4 pi) + b^2 (E K - K^2)/(2 pi^2) at k_b",
            (ParamSpec("b", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _p5_lhs, _p5_rhs),
             Variant("n-times-n-plus-1", _p5_lhs_shifted, _p5_rhs,
                     note="proof text carries (-1)^n n(n+1) in place of (-1)^n n^2")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P6",
            "d/dz theta2(z, e^(-pi/(2a))) at z=pi/4 = "
            "-(2a/pi) theta2(pi/4, e^(-pi/(2a))) K(k_a)",
            (ParamSpec("a", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _p6_lhs, _p6_rhs),),
            Expectation.CONTESTED),
        IdentityRecord(
            "P6b",
            "sum sech(n pi a) = 1/2 + K(k_a)/pi",
            (ParamSpec("a", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _p6b_lhs, _p6b_rhs_plus),
             Variant("minus-half", _p6b_lhs, _p6b_rhs_minus,
                     note="closed form with -1/2; the desk-checked reading")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P7",
            "da/d(arg) = (dK/d(arg))/(E K - K^2), audited against a "
            "Richardson finite-difference oracle in both conventions",
            (ParamSpec("value", (0.3, 0.5, 0.7), lo=0.05, hi=0.95),
             ParamSpec("convention", ("modulus", "parameter"),
                       choices=("modulus", "parameter"))),
            (Variant("base", _p7_lhs_stated, _p7_rhs_fd,
                     note="stated derivative formula vs the fd oracle"),
             Variant("classical", _p7_lhs_classical, _p7_rhs_fd,
                     note="textbook period-ratio derivative vs the fd oracle")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P7b",
            "2 d/dt log theta4(i t pi/2, e^(-2 pi x)) at t=x = "
            "-pi sum sech(n pi x) = pi/2 - K(k_x)",
            (ParamSpec("x", (0.5, 1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _p7b_lhs, _p7b_rhs_k),
             Variant("middle-sum", _p7b_lhs, _p7b_rhs_sech,
                     note="theta derivative against the sech sum alone"),
             Variant("plus-half-closed", _p7b_lhs, _p7b_rhs_plus_half,
                     note="sech sum replaced by the printed +1/2 closed form")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P8",
            "24 sum n q^n/(1-q^n) = 1 + (6E + (m-5)K)/(pi m (1-m) K dr/dm) "
            "with q = e^(-pi r), m the parameter at ratio r",
            (ParamSpec("r", (1.0, 2.0), lo=0.11, hi=20.0),),
            (Variant("base", _p8_lhs, _p8_rhs_stated,
                     note="dr/dm from the stated derivative formula"),
             Variant("classical-drdk", _p8_lhs, _p8_rhs_classical,
                     note="dr/dm from the textbook period-ratio derivative")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P9",
            "K(x/(x-1))/sqrt(1-x) = K(x), read in each convention",
            (ParamSpec("x", (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7), lo=0.0, hi=0.7),),
            (Variant("parameter", _p9_lhs_parameter, _p9_rhs_parameter,
                     note="descending transformation of the parameter"),
             Variant("modulus", _p9_lhs_modulus, _p9_rhs_modulus,
                     note="modulus reading; x/(x-1) leaves the real domain "
                          "for x >= 1/2")),
            Expectation.CONTESTED),
        IdentityRecord(
            "P10",
            "2 int_1^2 (1/t) sum_n G(t/(2 pi i n)) dt + 2 sum (-1)^n F(n)/(n(e^(an)-1)) "
            "- sum F(ibn)/(n sinh(b n pi)) = 0, ab = 2 pi, F even vanishing "
            "to second order",
            (ParamSpec("fdeg", (4, 6), choices=(4, 6)),
             ParamSpec("b", (1.0, 2.0), lo=0.2, hi=10.0)),
            (Variant("base", _p10_lhs, _zero_rhs),),
            Expectation.CONTESTED),
        IdentityRecord(
            "P10a",
            "sum_nu f_(2nu) (2^(2nu)-1) zeta(1-2nu) + 2 sum (-1)^n f(n)/(n(e^(an)-1)) "
            "- sum f(ibn)/(n sinh(b n pi)) = 0, ab = 2 pi",
            (ParamSpec("fdeg", (2, 4), choices=(2, 4)),
             ParamSpec("b", (1.0, 2.0), lo=0.2, hi=10.0)),
            (Variant("base", _p10a_lhs, _zero_rhs),),
            Expectation.CONTESTED),
        IdentityRecord(
            "P11a",
            "sum (-1)^n f_n d^n/ds^n log theta4(i s/2, e^(-pi a)) = "
            "f(0) log P0 - sum_(n != 0) f(n) e^(-ns)/(2n sinh(pi a n))",
            (ParamSpec("fdeg", (2, 3, 4), choices=(2, 3, 4)),
             ParamSpec("a", (1.0, 2.0), lo=0.11, hi=20.0),
             ParamSpec("s", (0.0, 0.2), lo=0.0, hi=3.0)),
            (Variant("base", _p11a_lhs, _p11a_rhs),),
            Expectation.EXPECT_PASS,
            constraint=lambda p: abs(p["s"]) < pi * p["a"],
            constraint_note="|s| < pi*a"),
        IdentityRecord(
            "P11b",
            "sum f_n log theta4(i(s+n)/2, e^(-pi a)) = "
            "f(1) log P0 - sum_(n != 0) f(e^(-n)) e^(-ns)/(2n sinh(pi a n))",
            (ParamSpec("a", (1.0, 2.0), lo=0.11, hi=20.0),
             ParamSpec("s", (0.0, 0.5), lo=0.0, hi=0.6)),
            (Variant("base", _p11b_lhs_for("base"), _p11b_rhs_for("base"),
                     note="f(x) = x^2"),
             Variant("mixed-parity", _p11b_lhs_for("mixed-parity"),
                     _p11b_rhs_for("mixed-parity"),
                     note="f(x) = x + x^2")),
            Expectation.CONTESTED,
            constraint=lambda p: 2.0 + abs(p["s"]) < pi * p["a"],
            constraint_note="deg f + |s| < pi*a"),
        IdentityRecord(
            "P12",
            "sum (-1)^n f_n d^n/ds^n log theta2(s, e^(-1/a)) = 2a - 2a f(0) s "
            "+ a pi sum_(n != 0) f(2 pi n a) e^(-2 pi n s a)/sinh(pi^2 a n), "
            "f(x) = x^2 + x^3",
            (ParamSpec("a", (1.0, 2.0), lo=0.2, hi=20.0),
             ParamSpec("s", (0.3, 0.6), lo=0.0, hi=1.5)),
            (Variant("base", _p12_lhs, _p12_rhs_printed),
             Variant("derived-bilateral", _p12_lhs, _p12_rhs_derived,
                     note="right side rebuilt by transforming theta2 to the "
                          "theta4 chain: 2a f_1 s - 2a f_2 "
                          "- sum f(2 pi a n) e^(-2 pi a s n)/(2n sinh(pi^2 a n))")),
            Expectation.CONTESTED,
            constraint=lambda p: abs(p["s"]) < 0.5 * pi,
            constraint_note="|s| < pi/2"),
    ]
    return Registry(records)


class Registry:
    """Immutable catalog of identity records plus the residual engine."""

    def __init__(self, records: Sequence[IdentityRecord]):
        self._records: dict[str, IdentityRecord] = {}
        for rec in records:
            if rec.identity_id in self._records:
                raise ValueError(f"duplicate identity id {rec.identity_id!r}")
            self._records[rec.identity_id] = rec

    def __len__(self) -> int:
        return len(self._records)

    def ids(self) -> list[str]:
        return sorted(self._records)

    def records(self) -> list[IdentityRecord]:
        return [self._records[i] for i in self.ids()]

    def get(self, identity_id: str) -> IdentityRecord:
        try:
            return self._records[identity_id]
        except KeyError:
            raise UnknownIdentityError(f"unknown identity {identity_id!r}") from None

    def evaluate(self, identity_id: str, variant_id: str, point: Mapping,
                 policy: TruncationPolicy = DEFAULT_POLICY) -> ResidualReport:
        """Evaluate one (identity, variant, grid point) into a report.

        Unknown ids and constraint violations raise; numeric evaluation
        failures come back as INCONCLUSIVE reports with a note.
        """
        record = self.get(identity_id)
        variant = record.variant(variant_id)
        record.validate_point(point)
        params = dict(point)
        try:
            lhs = variant.lhs(point, policy)
            rhs = variant.rhs(point, policy)
        except EllidError as exc:
            return ResidualReport(
                identity_id, variant_id, params, math.nan, math.nan,
                math.nan, math.nan, Classification.INCONCLUSIVE,
                {"lhs": 0, "rhs": 0}, f"{type(exc).__name__}: {exc}")
        abs_res = abs(lhs.value - rhs.value)
        rel_res = abs_res / max(1.0, abs(lhs.value), abs(rhs.value))
        return ResidualReport(
            identity_id, variant_id, params, lhs.value, rhs.value,
            abs_res, rel_res, classify(rel_res),
            {"lhs": lhs.terms, "rhs": rhs.terms}, "")

    def _tasks(self, record: IdentityRecord) -> list[tuple[str, str, dict]]:
        return [(record.identity_id, v.variant_id, point)
                for v in record.variants
                for point in record.grid_points()]

    def _run_tasks(self, tasks: list[tuple[str, str, dict]],
                   policy: TruncationPolicy,
                   parallelism: int) -> list[ResidualReport]:
        def one(task: tuple[str, str, dict]) -> ResidualReport:
            identity_id, variant_id, point = task
            try:
                return self.evaluate(identity_id, variant_id, point, policy)
            except EllidError as exc:
                # Per-point failures are embedded, never fatal to the run.
                return ResidualReport(
                    identity_id, variant_id, dict(point), math.nan, math.nan,
                    math.nan, math.nan, Classification.INCONCLUSIVE,
                    {"lhs": 0, "rhs": 0}, f"{type(exc).__name__}: {exc}")

        if parallelism > 1:
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                reports = list(pool.map(one, tasks))
        else:
            reports = [one(t) for t in tasks]
        reports.sort(key=report_sort_key)
        return reports

    def run_grid(self, identity_id: str,
                 policy: TruncationPolicy = DEFAULT_POLICY,
                 parallelism: int = 1) -> list[ResidualReport]:
        record = self.get(identity_id)
        return self._run_tasks(self._tasks(record), policy, parallelism)

    def run_all(self, policy: TruncationPolicy = DEFAULT_POLICY,
                parallelism: int = 1) -> list[ResidualReport]:
        tasks: list[tuple[str, str, dict]] = []
        for record in self.records():
            tasks.extend(self._tasks(record))
        return self._run_tasks(tasks, policy, parallelism)


_DEFAULT_REGISTRY: Registry | None = None


def default_registry() -> Registry:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        _DEFAULT_REGISTRY = build_registry()
    return _DEFAULT_REGISTRY


def evaluate_identity(identity_id: str, variant_id: str, point: Mapping,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> ResidualReport:
    return default_registry().evaluate(identity_id, variant_id, point, policy)


def run_grid(identity_id: str, policy: TruncationPolicy = DEFAULT_POLICY,
             parallelism: int = 1) -> list[ResidualReport]:
    return default_registry().run_grid(identity_id, policy, parallelism)


def run_all(policy: TruncationPolicy = DEFAULT_POLICY,
            parallelism: int = 1) -> list[ResidualReport]:
    return default_registry().run_all(policy, parallelism)
