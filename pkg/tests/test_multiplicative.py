import math
from fractions import Fraction

import pytest
import sympy

from zerorepulsion.analytic import divisor_tail_bound, l_eval, zeta
from zerorepulsion.characters import euler_phi, real_quadratic_characters
from zerorepulsion.interval import ComplexInterval, Interval
from zerorepulsion.multiplicative import (
    ExceptionalContext,
    a,
    a_divisor_sum,
    a_values,
    divisors,
    g,
    g_at_prime,
    h,
    h_at_prime,
    mobius,
    omega,
)


def _ctx(q, index=0):
    return ExceptionalContext(q, real_quadratic_characters(q)[index])


def _contexts(q_max):
    for q in range(3, q_max + 1):
        for c in real_quadratic_characters(q):
            yield ExceptionalContext(q, c)


def test_small_arithmetic_functions():
    assert (mobius(1), omega(1), divisors(1)) == (1, 0, [1])
    assert mobius(12) == 0
    assert mobius(30) == -1 and omega(30) == 3
    for n in range(1, 500):
        assert mobius(n) == sympy.mobius(n)
        assert omega(n) == len(sympy.primefactors(n))
        assert divisors(n) == sympy.divisors(n)


def test_a_examples():
    ctx = _ctx(5)
    assert ctx.chi1_value(2) == -1
    assert a(ctx, 1) == 1
    assert a(ctx, 5) == a(ctx, 25) == a(ctx, 125) == 1
    # divisors of 12: chi(1)+chi(2)+chi(3)+chi(4)+chi(6)+chi(12) = 1 - 1 - 1 + 1 + 1 - 1
    assert a(ctx, 12) == 0


def test_a_equals_divisor_sum_and_is_nonnegative():
    for ctx in _contexts(60):
        vals = a_values(ctx, 2000)
        for n in range(1, 2000):
            assert vals[n] == a(ctx, n) == a_divisor_sum(ctx, n)
    for ctx in _contexts(60):
        assert min(a_values(ctx, 10**5)[1:]) >= 0


def test_a_multiplicative_exhaustive():
    ctx = _ctx(12, 1)
    vals = a_values(ctx, 300 * 300)
    for m in range(1, 301):
        for n in range(1, 301):
            if math.gcd(m, n) == 1:
                assert vals[m * n] == vals[m] * vals[n]


def test_g_h_at_primes_examples():
    ctx5 = _ctx(5)
    assert (g_at_prime(ctx5, 5), h_at_prime(ctx5, 5)) == (4, 5)
    # q = 11: the Legendre symbol mod 11 has (3/11) = 1; q = 5 has (3/5) = -1
    ctx11 = _ctx(11)
    assert ctx11.chi1_value(3) == 1 and g_at_prime(ctx11, 3) == Fraction(4, 5)
    assert ctx5.chi1_value(3) == -1 and g_at_prime(ctx5, 3) == 8


def test_g_closed_form_matches_series():
    for q in (5, 8, 12, 13, 24):
        for c in real_quadratic_characters(q):
            ctx = ExceptionalContext(q, c)
            for p in sympy.primerange(2, 1000):
                # series from the divisor-sum definition of a(p^k)
                a_pk = [sum(ctx.chi1_value(pow(p, j, q)) for j in range(k + 1)) for k in range(60)]
                s = math.fsum(a_pk[k] / p**k for k in range(1, 60))
                assert float(g_at_prime(ctx, p)) == pytest.approx(1 / s, rel=1e-12)
                assert h_at_prime(ctx, p) == g_at_prime(ctx, p) + 1


def test_g_h_composite():
    ctx = _ctx(15)
    assert g(ctx, 1) == h(ctx, 1) == 1
    for q in (5, 13, 30, 42):
        c = _ctx(q)
        assert g(c, q) == euler_phi(q) and h(c, q) == q
    for n in range(1, 201):
        if mobius(n) and math.gcd(n, 15) == 1:
            assert g(ctx, n) == math.prod(g_at_prime(ctx, p) for p in sympy.primefactors(n))
        assert g(ctx, n) >= 0 and h(ctx, n) > 0


def test_h_totally_multiplicative():
    ctx = _ctx(8, 2)
    for m in range(1, 101):
        for n in range(1, 101):
            assert h(ctx, m * n) == h(ctx, m) * h(ctx, n)


@pytest.mark.parametrize("q", [5, 12])
def test_dirichlet_series_identity(q):
    N = 10**4
    for c in real_quadratic_characters(q):
        ctx = ExceptionalContext(q, c)
        vals = a_values(ctx, N)
        partial = sum((Interval(Fraction(vals[n], n * n)) for n in range(1, N + 1)), Interval(0))
        two = ComplexInterval(2)
        full = (zeta(two) * l_eval(two, c)).re
        tail = divisor_tail_bound(N)
        assert partial.certainly_le(full)
        assert (full - partial).certainly_le(tail)
