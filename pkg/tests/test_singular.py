"""Singular modulus solver and the period-ratio derivative oracles."""

import math

import pytest

from ellid import (Convention, DomainError, EllipticArgument, RangeError,
                   a_of_k, agm, dadk_candidates, dadk_fd, dK, ellint_K,
                   solve_k)

PI = math.pi


def test_solve_symmetric_point():
    res = solve_k(1.0)
    assert abs(res.k.value - 1.0 / math.sqrt(2.0)) <= 1e-15
    assert res.residual <= 1e-12
    assert res.k.convention is Convention.MODULUS


def test_solve_k_two():
    res = solve_k(2.0)
    assert res.residual <= 1e-12
    # verify the ratio by direct AGM evaluation, no closed form hardcoded
    k = res.k.value
    ratio = agm(1.0, math.sqrt(1.0 - k * k)) / agm(1.0, k)
    assert abs(ratio - 2.0) <= 1e-12
    assert abs(k - 0.1715728752538099) < 1e-12


@pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_round_trips(a):
    res = solve_k(a)
    back = a_of_k(res.k)
    assert abs(back - a) <= 1e-11 * a
    res2 = solve_k(back)
    assert abs(res2.k.value - res.k.value) <= 1e-10 * max(res.k.value, 1e-6)


@pytest.mark.parametrize("a", [2.0, 4.0])
def test_reciprocal_gives_complement(a):
    k_big = solve_k(a).k.value
    k_small = solve_k(1.0 / a).k.value
    assert abs(k_big ** 2 + k_small ** 2 - 1.0) <= 1e-10


def test_solve_monotone_in_a():
    ks = [solve_k(a).k.value for a in (0.5, 0.8, 1.0, 1.5, 2.0, 4.0, 8.0)]
    assert all(b < a for a, b in zip(ks, ks[1:]))


def test_solve_range_errors():
    with pytest.raises(RangeError):
        solve_k(0.01)
    with pytest.raises(RangeError):
        solve_k(25.0)
    # inside the nominal range but beyond binary64 resolution of 1 - k
    with pytest.raises(RangeError):
        solve_k(0.06)


def test_solve_extremes_within_range():
    res = solve_k(20.0)
    assert res.residual <= 1e-12
    assert 0.0 < res.k.value < 1.0
    res = solve_k(0.12)
    assert res.residual <= 1e-12 * max(1.0, 0.12)
    assert res.k.value < 1.0 - 1e-12


def test_a_of_k_values():
    assert abs(a_of_k(EllipticArgument.from_modulus(1.0 / math.sqrt(2.0))) - 1.0) <= 1e-15
    assert abs(a_of_k(EllipticArgument.from_parameter(0.5)) - 1.0) <= 1e-15
    got = a_of_k(EllipticArgument.from_modulus(0.3))
    want = (ellint_K(EllipticArgument.from_parameter(1.0 - 0.09))
            / ellint_K(EllipticArgument.from_parameter(0.09)))
    assert abs(got - want) <= 1e-14
    assert abs(got - 1.6341379853290105) < 1e-14


def test_a_of_k_strictly_decreasing():
    grid = [0.04 + 0.045 * i for i in range(20)]
    vals = [a_of_k(EllipticArgument.from_modulus(k)) for k in grid]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_a_of_k_domain():
    with pytest.raises(DomainError):
        a_of_k(EllipticArgument.from_modulus(0.0))


# -- derivative oracle and candidates -----------------------------------------

def test_dadk_fd_frozen_points():
    got = dadk_fd(EllipticArgument.from_parameter(0.5))
    assert abs(got.value - (-0.9138931620889272)) <= 1e-7
    got = dadk_fd(EllipticArgument.from_modulus(1.0 / math.sqrt(2.0)))
    assert abs(got.value - (-1.2924401043861942)) <= 1e-7


def test_dadk_fd_error_estimate_validated_by_halving():
    for value, conv in ((0.5, Convention.PARAMETER), (0.3, Convention.MODULUS)):
        arg = EllipticArgument(value, conv)
        d1 = dadk_fd(arg, step=1e-4)
        d2 = dadk_fd(arg, step=5e-5)
        assert abs(d1.value - d2.value) <= d1.error_estimate + d2.error_estimate
        assert d1.error_estimate <= 1e-7 * abs(d1.value)


def test_dadk_fd_symmetric_point_relation():
    # a = K'/K has derivative -2 (dK/darg)/K at the fixed point K' = K
    for arg in (EllipticArgument.from_parameter(0.5),
                EllipticArgument.from_modulus(1.0 / math.sqrt(2.0))):
        fd = dadk_fd(arg).value
        want = -2.0 * dK(arg) / ellint_K(arg)
        assert abs(fd - want) <= 1e-6 * abs(want)


def test_dadk_candidates_frozen():
    cands = dict(dadk_candidates(EllipticArgument.from_parameter(0.5)))
    assert abs(cands["stated-formula"] - (-0.9076651338075715)) < 1e-13
    cands = dict(dadk_candidates(EllipticArgument.from_modulus(1.0 / math.sqrt(2.0))))
    assert abs(cands["classical"] - (-1.2924401043861942)) < 1e-13


@pytest.mark.parametrize("k", [0.3, 1.0 / math.sqrt(2.0), 0.7])
def test_classical_candidate_matches_fd(k):
    arg = EllipticArgument.from_modulus(k)
    fd = dadk_fd(arg).value
    classical = dict(dadk_candidates(arg))["classical"]
    assert abs(fd - classical) <= 1e-6 * abs(classical)


def test_stated_formula_deviates_from_fd():
    # the deviation at the symmetric point is a bit under one percent
    arg = EllipticArgument.from_parameter(0.5)
    fd = dadk_fd(arg).value
    stated = dict(dadk_candidates(arg))["stated-formula"]
    dev = abs(stated - fd) / abs(fd)
    assert 0.005 < dev < 0.009


def test_derivative_domain_guards():
    with pytest.raises(DomainError):
        dadk_fd(EllipticArgument.from_modulus(0.99))
    with pytest.raises(DomainError):
        dadk_candidates(EllipticArgument.from_modulus(0.01))
