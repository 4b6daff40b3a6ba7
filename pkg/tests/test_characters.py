import math
import random
from fractions import Fraction

import pytest
import sympy

from zerorepulsion.characters import (
    DirichletCharacter,
    EnumerationOverflow,
    enumerate_characters,
    euler_phi,
    factorize,
    is_prime,
    kronecker,
    principal_character,
    real_quadratic_characters,
)


def _table(chi):
    """Value table as angles (None for 0) over one period."""
    return tuple(chi.angle(n) for n in range(chi.modulus))


@pytest.mark.parametrize("n, expected", [(1, []), (12, [(2, 2), (3, 1)]), (400000, [(2, 7), (5, 5)])])
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


def test_factorize_against_trial_division():
    rng = random.Random(1)
    for n in [rng.randint(1, 10**12) for _ in range(300)] + [2**61 - 1, 2**62 + 1, 600851475143]:
        f = factorize(n)
        assert f == sorted(sympy.factorint(n).items())
        assert math.prod(p**e for p, e in f) == n
        assert all(is_prime(p) for p, _ in f)


def test_is_prime_matches_oracle():
    for n in range(1, 5000):
        assert is_prime(n) == sympy.isprime(n)
    for n in (2**61 - 1, 2**63 - 25, 3215031751, 2**63 - 1):
        assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("q, count", [(1, 1), (5, 4), (12, 4)])
def test_enumerate_counts(q, count):
    chars = enumerate_characters(q)
    assert len(chars) == count
    assert chars[0].is_principal()


def test_q12_all_real():
    assert all(c.is_real() for c in enumerate_characters(12))


def test_enumeration_cap():
    with pytest.raises(EnumerationOverflow):
        enumerate_characters(10**6 + 3, cap=1000)


def test_brute_force_character_group():
    # the group of characters is exactly the set of multiplicative maps on units
    for q in range(1, 41):
        chars = enumerate_characters(q)
        assert len(chars) == euler_phi(q) == sympy.totient(q)
        tables = {_table(c) for c in chars}
        assert len(tables) == len(chars)
        units = [n for n in range(1, q + 1) if math.gcd(n, q) == 1]
        for c in chars:
            for m in units:
                for n in units:
                    assert c.angle(m * n) == (c.angle(m) + c.angle(n)) % 1
            for n in range(q + 1):
                if math.gcd(n, q) > 1:
                    assert c(n) is None


def test_multiplicativity_random_triples():
    rng = random.Random(7)
    for _ in range(10**4):
        q = rng.randint(1, 2000)
        chi = DirichletCharacter(q, tuple(rng.randrange(o) for o in DirichletCharacter(q).group.orders))
        m, n = rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)
        a, b, ab = chi.angle(m), chi.angle(n), chi.angle(m * n)
        if a is None or b is None:
            assert ab is None
        else:
            assert ab == (a + b) % 1


def test_orthogonality_all_q_up_to_60():
    for q in range(1, 61):
        chars = enumerate_characters(q)
        for c in chars[1:]:
            assert sum(c.complex_value(n) for n in range(1, q + 1)) == pytest.approx(0, abs=1e-9)
            # exact version: the angles of chi(n) over units are equidistributed on a coset
            counts = {}
            for n in range(1, q + 1):
                a = c.angle(n)
                if a is not None:
                    counts[a] = counts.get(a, 0) + 1
            assert len(set(counts.values())) == 1 and len(counts) == c.order
        for n in range(1, q + 1):
            values = [c.angle(n) for c in chars]
            if math.gcd(n, q) > 1:
                assert all(v is None for v in values)
            elif n % q == 1 % q:
                assert all(v == 0 for v in values)
            else:
                assert sum(1 for v in values if v == 0) * len({v for v in values}) == len(chars)


def test_principal_and_mod4():
    assert all(principal_character(15).angle(n) == 0 for n in (1, 2, 4, 7, 8))
    chi = enumerate_characters(4)[1]
    assert chi(3).real_value() == -1
    assert chi.conductor == 4


def test_conductor_brute_force():
    def oracle(chi):
        q = chi.modulus
        for d in sorted(sympy.divisors(q)):
            if all(chi.angle(n) == 0 for n in range(1, q + 1) if math.gcd(n, q) == 1 and n % d == 1 % d):
                return d

    for q in range(1, 61):
        for c in enumerate_characters(q):
            assert c.conductor == oracle(c)
            assert c.is_primitive() == (c.conductor == q)
    assert principal_character(30).conductor == 1


def test_mod12_character_induced_from_mod4():
    base = enumerate_characters(4)[1]
    induced = base.induce_to(12)
    assert induced.conductor == 4
    assert all(induced.angle(n) == (base.angle(n) if math.gcd(n, 3) == 1 else None) for n in range(1, 25))


@pytest.mark.parametrize("q, count", [(4, 1), (8, 3), (9, 1)])
def test_real_quadratic_counts(q, count):
    assert len(real_quadratic_characters(q)) == count


def test_reality_brute_force():
    for q in range(3, 201):
        real = {c.exponents for c in real_quadratic_characters(q)}
        for c in enumerate_characters(q):
            vals = [c.angle(n) for n in range(1, q + 1)]
            brute = all(v in (None, 0, Fraction(1, 2)) for v in vals) and Fraction(1, 2) in vals
            assert (c.exponents in real) == brute
            assert c.is_real() == (c.order <= 2)


def test_kronecker_examples():
    assert all(kronecker(1, n) == 1 for n in range(1, 100))
    assert kronecker(2, 5) == -1


def test_kronecker_euler_criterion():
    for p in sympy.primerange(3, 500):
        for a in range(-p, 2 * p):
            e = pow(a, (p - 1) // 2, p)
            expected = 0 if a % p == 0 else (1 if e == 1 else -1)
            assert kronecker(a, p) == expected


def test_kronecker_matches_jacobi_for_odd_n():
    rng = random.Random(3)
    for _ in range(2000):
        n = 2 * rng.randint(0, 10**6) + 1
        a = rng.randint(-10**9, 10**9)
        assert kronecker(a, n) == sympy.jacobi_symbol(a, n)
