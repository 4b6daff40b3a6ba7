import random
from fractions import Fraction

import mpmath
import pytest

from zerorepulsion.interval import ComplexInterval, Interval, decide, precision


def _rand_fraction(rng):
    return Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))


def test_soundness_random_triples():
    rng = random.Random(20240607)
    ops = [
        lambda x, y, z: x + y * z,
        lambda x, y, z: (x - y) * z,
        lambda x, y, z: x * y - z,
        lambda x, y, z: (x + z) / y if y else None,
        lambda x, y, z: x / (y * y + 1) - z,
    ]
    for _ in range(1000):
        x, y, z = (_rand_fraction(rng) for _ in range(3))
        op = rng.choice(ops)
        exact = op(x, y, z)
        if exact is None:
            continue
        enc = op(Interval(x), Interval(y), Interval(z))
        assert enc.contains(exact), (x, y, z, enc)


@pytest.mark.parametrize("x", ["0.001", "0.5", "1", "2", "7/3", "1000"])
def test_transcendentals_contain_high_precision_value(x):
    v = Fraction(x)
    with mpmath.workprec(300):
        ref = {
            "exp": mpmath.exp(mpmath.mpf(v.numerator) / v.denominator),
            "log": mpmath.log(mpmath.mpf(v.numerator) / v.denominator),
            "sqrt": mpmath.sqrt(mpmath.mpf(v.numerator) / v.denominator),
        }
    I = Interval(v)
    for name, r in ref.items():
        enc = getattr(I, name)()
        with mpmath.workprec(300):
            assert enc.lo <= r <= enc.hi, name


def test_pi_and_e():
    with mpmath.workprec(300):
        pi, e = +mpmath.pi, mpmath.e()
        assert Interval.pi().lo <= pi <= Interval.pi().hi
        assert Interval.e().lo <= e <= Interval.e().hi


def test_empty_interval_rejected_and_width():
    with pytest.raises(ValueError):
        Interval(3, 1)
    assert Interval(1, 2).width() == 1


def test_precision_context():
    with precision(160):
        narrow = Interval(1) / 3
    wide = Interval(1) / 3
    assert narrow.width() < wide.width()
    assert wide.contains(Fraction(1, 3)) and narrow.contains(Fraction(1, 3))


def test_decide():
    assert decide(Interval(1), Interval(2)) == "verified"
    assert decide(Interval(3), Interval(2)) == "failed"
    assert decide(Interval(1, 3), Interval(2)) == "inconclusive"
    assert decide(Interval(2), Interval(2), strict=False) == "verified"
    assert decide(Interval(2), Interval(2), strict=True) == "failed"


def test_complex_multiplication_contains_exact():
    rng = random.Random(5)
    for _ in range(200):
        a, b, c, d = (_rand_fraction(rng) for _ in range(4))
        z = ComplexInterval(a, b) * ComplexInterval(c, d)
        assert z.re.contains(a * c - b * d)
        assert z.im.contains(a * d + b * c)


def test_to_dict_is_decimal_strings():
    d = Interval(Fraction(1, 3)).to_dict()
    assert set(d) == {"lo", "hi"}
    assert Fraction(d["lo"]) <= Fraction(1, 3) <= Fraction(d["hi"])
