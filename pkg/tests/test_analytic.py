import dataclasses
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from zerorepulsion.analytic import (
    EvalParams,
    PoleProximity,
    dirichlet_partial,
    divisor_tail_bound,
    f_eval,
    fg_coefficient_identity,
    g_eval,
    g_series_bound,
    hurwitz_zeta,
    l_eval,
    l_values_float,
    locate_zeros,
    mellin_identity_check,
    mollified_sum,
    truncated_s_of_x,
    zeta,
)
from zerorepulsion.bounds import detector_rhs
from zerorepulsion.characters import enumerate_characters, principal_character, real_quadratic_characters
from zerorepulsion.interval import ComplexInterval, Interval
from zerorepulsion.multiplicative import ExceptionalContext, a_values
from zerorepulsion.sieve import build_weights, g1_principal

ZETA_HALF = "-1.46035450880958681288949915251529801246722933101258149054289"


def _ctx(q, index=0):
    return ExceptionalContext(q, real_quadratic_characters(q)[index])


def _mp(z: ComplexInterval):
    return mpmath.mpc(z.re.mid(), z.im.mid())


def _contains(z: ComplexInterval, ref) -> bool:
    return z.re.lo <= mpmath.re(ref) <= z.re.hi and z.im.lo <= mpmath.im(ref) <= z.im.hi


def test_zeta_two():
    with mpmath.workprec(200):
        ref = mpmath.pi**2 / 6
        assert _contains(zeta(ComplexInterval(2)), ref)


def test_zeta_half_reference_and_bound():
    z = zeta(ComplexInterval(Fraction(1, 2)))
    with mpmath.workprec(200):
        assert _contains(z, mpmath.mpf(ZETA_HALF))
    assert abs(z).certainly_le(Fraction("1.461"))


@pytest.mark.parametrize("eta", [Fraction(1, 10), Fraction(1, 2), Fraction(1)])
def test_zeta_near_one(eta):
    z = zeta(ComplexInterval(1 + eta))
    assert z.re.certainly_le(1 + 1 / eta)


def test_pole_rejected():
    with pytest.raises(PoleProximity):
        zeta(ComplexInterval(Interval(Fraction(9, 10), Fraction(11, 10))))
    with pytest.raises(PoleProximity):
        l_eval(ComplexInterval(1), principal_character(3))
    with pytest.raises(ValueError):
        zeta(ComplexInterval(-1, 3))


def test_hurwitz_identities():
    s = ComplexInterval(Fraction(3, 4), 5)
    assert hurwitz_zeta(s, 1).re.overlaps(zeta(s).re)
    with mpmath.workprec(200):
        assert _contains(hurwitz_zeta(ComplexInterval(2), Fraction(1, 2)), mpmath.pi**2 / 2)


@pytest.mark.parametrize("s", [(2, 0), (Fraction(1, 2), 14), (Fraction(3, 4), -7), (Fraction(3, 2), 40)])
@pytest.mark.parametrize("a", [Fraction(1, 3), Fraction(3, 4), Fraction(1, 7)])
def test_hurwitz_against_mpmath(s, a):
    z = hurwitz_zeta(ComplexInterval(*s), a)
    with mpmath.workprec(200):
        ref = mpmath.zeta(mpmath.mpc(mpmath.mpf(s[0].numerator) / s[0].denominator if isinstance(s[0], Fraction) else s[0], s[1]),
                          mpmath.mpf(a.numerator) / a.denominator)
        assert _contains(z, ref)


def test_l_values_known():
    with mpmath.workprec(200):
        assert _contains(l_eval(ComplexInterval(1), enumerate_characters(4)[1]), mpmath.pi / 4)
        two = ComplexInterval(2)
        assert _contains(l_eval(two, principal_character(2)), mpmath.zeta(2) * mpmath.mpf(3) / 4)


def test_l_eval_is_hurwitz_combination():
    s = ComplexInterval(Fraction(2, 3), 3)
    for q in (5, 12):
        q_s = complex(mpmath.power(q, -mpmath.mpc(mpmath.mpf(2) / 3, 3)))
        for chi in enumerate_characters(q):
            combo = sum(
                chi.complex_value(a) * complex(_mp(hurwitz_zeta(s, Fraction(a, q))))
                for a in range(1, q + 1)
                if math.gcd(a, q) == 1
            )
            assert complex(_mp(l_eval(s, chi))) == pytest.approx(combo * q_s, abs=1e-12)


@pytest.mark.parametrize("q", [5, 7, 8, 12])
def test_l_eval_against_mpmath(q):
    for chi in enumerate_characters(q):
        row = [chi.complex_value(n) for n in range(q)]
        for s in [(Fraction(1, 2), 0), (Fraction(1, 2), 9), (Fraction(9, 10), -4), (2, 1)]:
            if chi.is_principal() and s == (1, 0):
                continue
            enc = l_eval(ComplexInterval(*s), chi)
            with mpmath.workprec(200):
                ref = mpmath.dirichlet(mpmath.mpc(mpmath.mpf(Fraction(s[0]).numerator) / Fraction(s[0]).denominator, s[1]), row)
            # the mpmath row uses double-precision roots of unity
            assert abs(complex(_mp(enc)) - complex(ref)) < 1e-12
            assert float(enc.re.width()) < 1e-12


def test_convexity_bound_sampled():
    # coarse grid with intervals; t < 0 follows from L(1/2 - it, chi) = conj L(1/2 + it, conj chi)
    for q in range(3, 21):
        prim = [c for c in enumerate_characters(q) if c.is_primitive()]
        for chi in prim:
            for t in (0, 5, 10):
                bound = Fraction("2.97655") * (Interval(q * (1 + t)).log() / 4).exp()
                assert abs(l_eval(ComplexInterval(Fraction(1, 2), t), chi)).certainly_lt(bound)
    # fine grid in double precision with a relative margin of 1e-9
    ts = np.arange(-10, 10.0001, 0.05)
    for q in range(3, 21):
        prim = [c for c in enumerate_characters(q) if c.is_primitive()]
        if not prim:
            continue
        rows = [[c.complex_value(n) for n in range(q)] for c in prim]
        vals = np.abs(l_values_float(ts, rows, q))
        bound = 2.97655 * (q * (1 + np.abs(ts))) ** 0.25
        assert np.all(vals < bound * (1 - 1e-9))


def test_l_values_float_matches_intervals():
    chi = enumerate_characters(7)[2]
    row = [chi.complex_value(n) for n in range(7)]
    ts = [0.0, 3.3, 27.0, 150.0]
    vals = l_values_float(ts, [row], 7)[0]
    for t, v in zip(ts, vals):
        enc = l_eval(ComplexInterval(Fraction(1, 2), Fraction(t)), chi)
        assert abs(complex(_mp(enc)) - v) < 1e-10


GRID = [(Fraction(1, 2), 0), (Fraction(1, 2), 10), (Fraction(3, 4), 3), (2, 0), (Fraction(3, 2), 50)]


@pytest.mark.parametrize("s", GRID)
def test_euler_maclaurin_self_consistency(s):
    s = ComplexInterval(*s)
    for N in (8, 20, 50):
        p1, p2 = EvalParams(truncation=N, em_order=6), EvalParams(truncation=2 * N, em_order=6)
        pairs = [(zeta(s, p1), zeta(s, p2)), (hurwitz_zeta(s, Fraction(2, 5), p1), hurwitz_zeta(s, Fraction(2, 5), p2))]
        chi = enumerate_characters(5)[1]
        pairs.append((l_eval(s, chi, p1), l_eval(s, chi, p2)))
        for coarse, fine in pairs:
            for part in ("re", "im"):
                c, f = getattr(coarse, part), getattr(fine, part)
                assert abs(c.mid() - f.mid()) <= c.rad() + f.rad()


def test_shrinking_boxes_do_not_grow_outputs():
    rng = random.Random(17)
    chi = enumerate_characters(5)[1]
    for _ in range(100):
        sigma = Fraction(rng.randint(55, 190), 100)
        t = Fraction(rng.randint(-2000, 2000), 100)
        w = Fraction(rng.randint(1, 40), 1000)
        wide = ComplexInterval(Interval(sigma - w, sigma + w), Interval(t - w, t + w))
        narrow = ComplexInterval(Interval(sigma - w / 4, sigma + w / 4), Interval(t - w / 4, t + w / 4))
        f = rng.choice([zeta, lambda s: l_eval(s, chi)])
        try:
            big, small = f(wide), f(narrow)
        except PoleProximity:
            continue
        assert small.re.width() <= big.re.width() and small.im.width() <= big.im.width()
        assert big.re.overlaps(small.re) and big.im.overlaps(small.im)
        point = f(ComplexInterval(sigma, t))
        assert big.re.overlaps(point.re) and big.im.overlaps(point.im)


def test_f_at_two_against_coefficients():
    ctx = _ctx(5)
    N = 4000
    av = a_values(ctx, N)
    chi0 = principal_character(5)
    coeffs = [v if n % 5 else 0 for n, v in enumerate(av)]
    partial = dirichlet_partial(ComplexInterval(2), coeffs, N)
    full = f_eval(ComplexInterval(2), chi0, ctx)
    tail = divisor_tail_bound(N)
    assert full.re.overlaps(partial.re + Interval(0, tail.hi))
    # F(s, chi0) = zeta(s) L(s, chi1) (1 - 5^-s)
    s = ComplexInterval(Fraction(3, 2), 2)
    ref = complex(_mp(zeta(s) * l_eval(s, ctx.chi1))) * (1 - complex(mpmath.power(5, -mpmath.mpc(1.5, 2))))
    assert abs(complex(_mp(f_eval(s, chi0, ctx))) - ref) < 1e-12


def _convolution_check(q, n_max, chars):
    for chi1 in real_quadratic_characters(q):
        ctx = ExceptionalContext(q, chi1)
        av = a_values(ctx, n_max)
        for chi in chars:
            psi = chi * chi1
            # exact: coefficients as multisets of angles
            coeff = [dict() for _ in range(n_max + 1)]
            for d in range(1, n_max + 1):
                x = chi.angle(d)
                if x is None:
                    continue
                for m in range(1, n_max // d + 1):
                    y = psi.angle(m)
                    if y is None:
                        continue
                    # e(k + 1/2) = -e(k): fold the antipodal angle into a sign
                    k, sign = (x + y) % 1, 1
                    if k >= Fraction(1, 2):
                        k, sign = k - Fraction(1, 2), -1
                    slot = coeff[d * m]
                    slot[k] = slot.get(k, 0) + sign
            for n in range(1, n_max + 1):
                got = {k: v for k, v in coeff[n].items() if v}
                x = chi.angle(n)
                want = {}
                if x is not None and av[n]:
                    want = {x: av[n]} if x < Fraction(1, 2) else {x - Fraction(1, 2): -av[n]}
                assert got == want, (q, chi, n)


def test_coefficients_of_l_product():
    for q in (5, 12):
        _convolution_check(q, 5000, enumerate_characters(q))
    rng = random.Random(2)
    for q in range(3, 61):
        chars = enumerate_characters(q)
        _convolution_check(q, 600, [chars[0], rng.choice(chars)])


def test_g_trivial_weights():
    sys_ = build_weights(_ctx(5), 10)
    only_one = dataclasses.replace(sys_, theta={1: Fraction(1)})
    for chi in enumerate_characters(5):
        for form in "AB":
            val = g_eval(ComplexInterval(Fraction(7, 10), 2), chi, only_one, form=form)
            assert val.re.contains(1) and val.im.contains(0)


def test_g_at_one_principal_equals_quadratic_form():
    for q in (5, 8, 12, 13, 30, 60):
        for c in real_quadratic_characters(q)[:2]:
            sys_ = build_weights(ExceptionalContext(q, c), 200 if q < 20 else 60)
            exact = g1_principal(sys_)
            for form in "AB":
                val = g_eval(ComplexInterval(1), principal_character(q), sys_, form=form)
                assert val.re.contains(exact), (q, form)


def test_forms_agree_on_random_triples():
    rng = random.Random(23)
    for _ in range(50):
        q = rng.choice([5, 7, 8, 12, 13])
        ctx = ExceptionalContext(q, rng.choice(real_quadratic_characters(q)))
        sys_ = build_weights(ctx, rng.randint(2, 40))
        chi = rng.choice(enumerate_characters(q))
        s = ComplexInterval(Fraction(rng.randint(50, 200), 100), Fraction(rng.randint(-3000, 3000), 100))
        a, b = g_eval(s, chi, sys_, form="A"), g_eval(s, chi, sys_, form="B")
        assert a.re.overlaps(b.re) and a.im.overlaps(b.im)


def test_g_bounded_on_critical_line():
    ctx = _ctx(5)
    sys_ = build_weights(ctx, 30)
    bound = g_series_bound(5, 1 - 1 / (10 * Interval(5).log()), Fraction("2.97655"), Fraction(1, 4), 30)
    for chi in enumerate_characters(5):
        for t in range(-20, 21, 4):
            assert abs(g_eval(ComplexInterval(Fraction(1, 2), t), chi, sys_)).certainly_lt(bound)


def test_fg_identity_q5():
    ctx = _ctx(5)
    sys_ = build_weights(ctx, 10)
    report = fg_coefficient_identity(ctx, sys_, 5000)
    assert report.ok and report.checked == 4 * 5000


def test_fg_identity_negative_control():
    # F built from a different real character than the weights: the identity must break
    chars = real_quadratic_characters(12)
    sys_ = build_weights(ExceptionalContext(12, chars[0]), 10)
    report = fg_coefficient_identity(ExceptionalContext(12, chars[1]), sys_, 300)
    assert not report.ok


def test_fg_first_coefficients():
    # n = 1 and a prime n = p beyond the support of theta
    ctx = _ctx(5)
    sys_ = build_weights(ctx, 10)
    chi = enumerate_characters(5)[1]
    lam = sys_.theta_sum_table(13)
    assert lam[1] == 1 and lam[13] == 1
    report = fg_coefficient_identity(ctx, sys_, 13, chi=chi)
    assert report.ok


def test_mollified_sum_small_n():
    ctx = _ctx(5)
    sys_ = build_weights(ctx, 10)
    chi = enumerate_characters(5)[1]
    rho = ComplexInterval(Fraction(3, 4), 2)
    z = mollified_sum(1, rho, chi, ctx, sys_)
    assert z.re.contains(0) and z.im.contains(0)
    z = mollified_sum(2, rho, chi, ctx, sys_)
    assert z.re.contains(Fraction(1, 2)) and z.im.contains(0)
    with pytest.raises(ValueError):
        mollified_sum(10**7 + 1, rho, chi, ctx, sys_)


def test_detector_at_genuine_zero():
    chi = enumerate_characters(5)[2]  # the real character mod 5
    zeros = locate_zeros(chi, 10)
    assert zeros, "expected zeros of L(s, chi_5) below height 10"
    gamma = Fraction(zeros[0]).limit_denominator(10**12)
    rho = ComplexInterval(Fraction(1, 2), gamma)
    assert abs(l_eval(rho, chi)).hi < 1e-9
    ctx = ExceptionalContext(5, chi)
    sys_ = build_weights(ctx, 10)
    S = mollified_sum(200, rho, chi, ctx, sys_)
    rhs = detector_rhs(Fraction(1, 2), Fraction(99, 100), 200)
    assert abs(S).is_finite() and not rhs.is_finite()


def test_truncated_sum():
    ctx = _ctx(5)
    b1 = Fraction(99, 100)
    for x in (3, 10, 1000, Fraction(2001, 2)):
        ts = truncated_s_of_x(ctx, b1, x)
        # equality is possible (x = 3 with a(2) = 0), so only refutation is excluded
        assert not ts.value.certainly_lt(1 - 1 / Fraction(x))
        assert ts.min_term.lo >= 0
    av = a_values(ctx, 3)
    expected = Interval(Fraction(2, 3)) + Interval(av[2]) * Interval(2) ** (-Interval(b1)) * Fraction(1, 3)
    assert truncated_s_of_x(ctx, b1, 3).value.overlaps(expected)
    with pytest.raises(ValueError):
        truncated_s_of_x(ctx, b1, 2)


def test_mellin_identity_q5():
    for check in mellin_identity_check(_ctx(5)):
        assert check.agrees
        assert check.discrepancy <= float(check.tail_bound.hi) + check.quadrature_error
