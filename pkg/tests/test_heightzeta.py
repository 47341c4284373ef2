from fractions import Fraction

import pytest

from dp4sieve import heightzeta as hz
from dp4sieve.exactnum import Interval
from dp4sieve.sieve import count_closed_points_for


def test_interval_arithmetic():
    a = Interval.exact(Fraction(1, 3))
    b = Interval.exact(Fraction(2, 7))
    c = a * b + a
    assert c.lo <= Fraction(1, 3) * Fraction(2, 7) + Fraction(1, 3) <= c.hi
    assert c.width < Fraction(1, 2 ** 180)
    big = Interval.exact(Fraction(3, 2), bits=256).power(10 ** 6)
    assert big.certainly_positive()
    d = a / b
    assert d.lo <= Fraction(7, 6) <= d.hi


def test_local_factor_coefficients():
    # the displayed factor, orders <= 3, |c| in {1, 2, 3}
    for q in (2, 3, 5):
        for deg in (1, 2, 3):
            spec = hz.EulerFactorSpec(degree=deg, q=q, orders=(3, 3, 3, 3))
            fac = hz.local_factor(spec)
            u = Fraction(1, q ** deg)
            assert fac.constant == 1 - 6 * u ** 2 + 8 * u ** 3 - 3 * u ** 4
            for i in range(4):
                e = [0] * 4
                e[i] = deg
                if deg <= 3:
                    expected = q ** deg * (u ** 2 - 2 * u ** 3 + 2 * u ** 5 - u ** 6)
                    assert fac.coefficient(tuple(e)) == expected
            # exponents not multiples of deg vanish
            if deg == 2:
                assert fac.coefficient((1, 0, 0, 0)) == 0
                assert fac.coefficient((3, 0, 0, 0)) == 0


def test_local_factor_coefficient_example_q_generic():
    # |c| = 1: coefficient of t_i is q^{-1} - 2 q^{-2} + 2 q^{-4} - q^{-5}
    for q in (2, 3, 5, 7):
        fac = hz.local_factor(hz.EulerFactorSpec(degree=1, q=q, orders=(1, 1, 1, 1)))
        u = Fraction(1, q)
        assert fac.coefficient((1, 0, 0, 0)) == u - 2 * u ** 2 + 2 * u ** 4 - u ** 5


def test_euler_product_constant():
    # N = 1, orders 0: the constant is the degree-1 factor to the (q+1)-st
    for q in (2, 3):
        prod = hz.euler_product(q, 1, (0, 0, 0, 0))
        assert prod.constant == hz.factor_constant(q, 1) ** (q + 1)


def test_euler_product_log_derivative():
    # coefficient of t_i two ways: direct expansion vs the product rule
    for q, N in ((2, 3), (3, 2)):
        orders = (1, 1, 1, 1)
        prod = hz.euler_product(q, N, orders)
        direct = prod.coefficient((1, 0, 0, 0))
        # only degree-1 factors carry t^1; the rest contribute constants
        c1 = count_closed_points_for(q, 1)
        fac1 = hz.local_factor(hz.EulerFactorSpec(degree=1, q=q, orders=orders))
        rest = Fraction(1)
        for n in range(2, N + 1):
            rest *= hz.factor_constant(q, n) ** count_closed_points_for(q, n)
        expected = c1 * fac1.coefficient((1, 0, 0, 0)) \
            * fac1.constant ** (c1 - 1) * rest
        assert direct == expected


def test_euler_product_truncation_monotone():
    # coefficients at cutoff N agree with cutoff N+1 up to degree-(N+1)
    # contributions; for orders below N+1 the t-coefficients agree exactly
    # after scaling by the new constant factors
    q = 3
    orders = (2, 2, 2, 2)
    p2 = hz.euler_product(q, 2, orders)
    p3 = hz.euler_product(q, 3, orders)
    scale = hz.factor_constant(q, 3) ** count_closed_points_for(q, 3)
    for expo, val in p2.coeffs.items():
        assert p3.coefficient(expo) == val * scale


def test_surface_count():
    assert hz.surface_count(3, 1) == 28
    assert hz.surface_count(5, 1) == 56
    # blow-up identity: #(P^1 x P^1) + 4 q^n
    for q in (2, 3, 4, 5):
        for n in (1, 2, 3):
            assert hz.surface_count(q, n) == (q ** n + 1) ** 2 + 4 * q ** n
            assert hz.surface_count(q, n) % q == 1
    # consistency with the good factor
    for q, n in ((3, 1), (5, 2)):
        u = Fraction(1, q ** n)
        assert hz.good_factor(q, n) == (1 - u) ** 6 * Fraction(hz.surface_count(q, n), q ** (2 * n))


def test_tamagawa_structure():
    res = hz.tamagawa(5, 6)
    # degree-1 partial: ((1-1/q)^6 (q^2+6q+1)/q^2)^{q+1} q^2 (1-1/q)^{-6}
    q = 5
    expected1 = hz.good_factor(q, 1) ** (q + 1) * q ** 2 * (1 - Fraction(1, q)) ** -6
    assert abs(res.partials[0] - expected1) < Fraction(1, 2 ** 100)
    # increments shrink for N >= 3
    incs = [abs(b - a) for a, b in zip(res.partials, res.partials[1:])]
    assert incs[4] < incs[3] < incs[2]
    assert res.enclosure_width < Fraction(1, 2 ** 100)
    # exact small-N path agrees
    assert abs(hz.tamagawa_exact(5, 4) - hz.tamagawa(5, 4).value) < Fraction(1, 2 ** 100)


def test_tamagawa_large_q_trend():
    # each local factor tends to 1, so tau -> q^2 (1 + o(1)) at fixed N
    vals = []
    for q in (3, 5, 11):
        vals.append(hz.tamagawa(q, 3).value / q ** 2)
    assert abs(vals[2] - 1) < abs(vals[1] - 1) < abs(vals[0] - 1)


def test_limit_formula_rhs_value():
    # rhs at N = 1, q = 5: (1 - 1/5)^{-4} ((1-1/5)^6 (1 + 6/5 + 1/25))^6
    res = hz.limit_formula_check(5, 1, 2)
    q = 5
    expected = (1 - Fraction(1, q)) ** -4 * hz.good_factor(q, 1) ** (q + 1)
    assert abs(res.rhs - expected) < Fraction(1, 2 ** 100)


def test_limit_formula_gaps_decrease():
    res = hz.limit_formula_check(5, 8, 4)
    assert res.gaps_decreasing_certified
    assert all(g > 0 for g in res.gaps)
    assert all(l > 0 for l in res.lhs) and res.rhs > 0


def test_expected_section_count_scalings():
    q = 3
    e1 = hz.expected_section_count(q, 1, 1, (0, 0, 0, 0), 6)
    e2 = hz.expected_section_count(q, 2, 1, (0, 0, 0, 0), 6)
    assert e2 == e1 * q ** 2
    # the section expectation is (q-1)^2 times the morphism expectation
    tau = hz.tamagawa(q, 6).value
    assert e1 == (q - 1) ** 2 * tau * q ** 4


def test_no_floats_in_results():
    res = hz.tamagawa(3, 8)
    assert isinstance(res.value, Fraction)
    lim = hz.limit_formula_check(3, 5, 3)
    assert all(isinstance(g, Fraction) for g in lim.gaps)
