"""Selberg sieve weights attached to the exceptional character.

All weight arithmetic is exact.  Instead of summing Fractions with ever
growing denominators, every 1/g(r) for squarefree r <= R is scaled by a common
denominator D so that the inner sums become plain integer sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import euler_phi
from .interval import Interval
from .multiplicative import (
    ExceptionalContext,
    a_values,
    g_at_prime,
    h_at_prime,
    smallest_prime_factors,
)

MAX_R = 10**7


class InvalidHypothesis(ValueError):
    """Inputs outside the range where a bound is asserted."""


def _squarefree_support(R: int) -> tuple[list[int], list[tuple[int, ...]]]:
    """Squarefree integers 1..R and their prime supports."""
    spf = smallest_prime_factors(R)
    ds, supports = [1], [()]
    for n in range(2, R + 1):
        m, ps, ok = n, [], True
        while m > 1:
            p = spf[m]
            m //= p
            if m % p == 0:
                ok = False
                break
            ps.append(p)
        if ok:
            ds.append(n)
            supports.append(tuple(sorted(ps)))
    return ds, supports


def _prod_fraction(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


def v_of_r(ctx: ExceptionalContext, R) -> Fraction:
    """V(R) = sum over squarefree l <= R of 1/g(l), exactly."""
    Rint = math.floor(R)
    if Rint < 1:
        raise ValueError("R must be at least 1")
    ds, supports = _squarefree_support(Rint)
    inv_g = {p: 1 / g_at_prime(ctx, p) for p in {p for s in supports for p in s}}
    return sum((_prod_fraction(inv_g[p] for p in s) for s in supports), Fraction(0))


@dataclass
class SieveSystem:
    ctx: ExceptionalContext
    R: int
    theta: dict[int, Fraction]
    VR: Fraction
    # integer scaffolding: N_d = D / g(d), S_d = sum_{r <= R/d, (r,d)=1} N_r
    D: int = field(repr=False)
    N: dict[int, int] = field(repr=False)
    S: dict[int, int] = field(repr=False)
    supports: dict[int, tuple[int, ...]] = field(repr=False)

    def theta_at(self, d: int) -> Fraction:
        return self.theta.get(d, Fraction(0))

    def max_abs_theta(self) -> Fraction:
        return max(abs(t) for t in self.theta.values())

    def theta_bounded(self) -> bool:
        return all(abs(t.numerator) <= t.denominator for t in self.theta.values())

    def theta_sum_table(self, n_max: int) -> list[Fraction]:
        """lambda(n) = sum_{d | n} theta_d for n <= n_max (index 0 unused)."""
        out = [Fraction(0)] * (n_max + 1)
        for d, t in self.theta.items():
            if d > n_max:
                continue
            for m in range(d, n_max + 1, d):
                out[m] += t
        return out


def build_weights(ctx: ExceptionalContext, R) -> SieveSystem:
    """Optimal Selberg weights theta_d at sifting level R."""
    Rint = math.floor(R)
    if Rint < 2:
        raise ValueError("sifting level must satisfy R >= 2")
    if Rint > MAX_R:
        raise ValueError(f"sifting level {R} exceeds the cap {MAX_R}")
    ds, supports = _squarefree_support(Rint)
    primes = sorted({p for s in supports for p in s})
    inv_g = {p: 1 / g_at_prime(ctx, p) for p in primes}

    inv_g_d = {}
    D = 1
    for d, s in zip(ds, supports):
        v = _prod_fraction(inv_g[p] for p in s)
        inv_g_d[d] = v
        D = D * v.denominator // math.gcd(D, v.denominator)
    N = {d: v.numerator * (D // v.denominator) for d, v in inv_g_d.items()}
    sup = dict(zip(ds, supports))

    # S_d for every squarefree d, each a single pass over r <= R/d
    S: dict[int, int] = {}
    cache: dict[tuple[int, tuple[int, ...]], int] = {}
    for d in ds:
        limit = Rint // d
        key = (limit, sup[d])
        val = cache.get(key)
        if val is None:
            val = 0
            for r, s in zip(ds, supports):
                if r > limit:
                    break
                if math.gcd(r, d) == 1:
                    val += N[r]
            cache[key] = val
        S[d] = val
    V_int = S[1]
    VR = Fraction(V_int, D)

    theta: dict[int, Fraction] = {}
    for d in ds:
        hg = _prod_fraction(h_at_prime(ctx, p) / g_at_prime(ctx, p) for p in sup[d])
        sign = -1 if len(sup[d]) % 2 else 1
        theta[d] = Fraction(sign * hg.numerator * S[d], hg.denominator * V_int)
    return SieveSystem(ctx=ctx, R=Rint, theta=theta, VR=VR, D=D, N=N, S=S, supports=sup)


def g1_principal(sys: SieveSystem) -> Fraction:
    """G(1, chi_0) = sum over d, e coprime to q of theta_d theta_e / h([d, e]).

    Uses 1/h([d,e]) = sum_{l | (d,e)} g(l) / (h(d) h(e)) for squarefree d, e,
    which turns the double sum into sum_l g(l) y_l**2.
    """
    ctx = sys.ctx
    qp = ctx.q_primes
    coprime = [d for d in sys.theta if not (set(sys.supports[d]) & qp)]
    # y_l = Y_l / (D * V_int) with Y_l = sum_{l | d} mu(d) N_d S_d
    w = {d: (-1 if len(sys.supports[d]) % 2 else 1) * sys.N[d] * sys.S[d] for d in coprime}
    Y: dict[int, int] = {}
    coprime_set = set(coprime)
    for l in coprime:
        tot = 0
        for d in range(l, sys.R + 1, l):
            if d in coprime_set:
                tot += w[d]
        Y[l] = tot
    gl = {l: _prod_fraction(g_at_prime(ctx, p) for p in sys.supports[l]) for l in coprime}
    U = 1
    for v in gl.values():
        U = U * v.denominator // math.gcd(U, v.denominator)
    total = sum(v.numerator * (U // v.denominator) * Y[l] ** 2 for l, v in gl.items())
    scale = sys.D * sys.S[1]
    return Fraction(total, U * scale * scale)


def quadratic_form(sys: SieveSystem, theta: dict[int, Fraction], restricted: bool = True) -> Fraction:
    """sum_{d,e} theta_d theta_e / h([d,e]) by the direct double sum (small R only).

    With ``restricted`` only pairs with (de, q) = 1 contribute.
    """
    from .multiplicative import h

    ctx = sys.ctx
    items = [(d, t) for d, t in theta.items() if t]
    if restricted:
        items = [(d, t) for d, t in items if math.gcd(d, ctx.q) == 1]
    total = Fraction(0)
    for d, td in items:
        for e, te in items:
            total += td * te / h(ctx, d * e // math.gcd(d, e))
    return total


def a_over_n_exact(ctx: ExceptionalContext, R) -> Fraction:
    Rint = math.floor(R)
    av = a_values(ctx, Rint)
    L = math.lcm(*range(1, Rint + 1)) if Rint >= 1 else 1
    return Fraction(sum(av[n] * (L // n) for n in range(1, Rint + 1)), L)


def a_over_n_partial(ctx: ExceptionalContext, R) -> Interval:
    """Enclosure of sum_{n <= R} a(n)/n."""
    return Interval(a_over_n_exact(ctx, R))


def divisor_sum_bound(ctx: ExceptionalContext, R) -> Fraction:
    """(q / phi(q)) * (sum_{n <= R} a(n)/n)^-1, exactly."""
    return Fraction(ctx.q, euler_phi(ctx.q)) / a_over_n_exact(ctx, R)


@dataclass(frozen=True)
class WeightCheck:
    theta_one: bool
    theta_bounded: bool
    g1: Fraction
    rhs: Fraction

    @property
    def inequality(self) -> bool:
        return self.g1 <= self.rhs

    @property
    def holds(self) -> bool:
        return self.theta_one and self.theta_bounded and self.inequality


def check_weights(sys: SieveSystem) -> WeightCheck:
    return WeightCheck(
        theta_one=sys.theta.get(1) == 1,
        theta_bounded=sys.theta_bounded(),
        g1=g1_principal(sys),
        rhs=divisor_sum_bound(sys.ctx, sys.R),
    )


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, float):
        return Interval(Fraction(x))
    return Interval(x)


def selberg_lower_bound_rhs(q: int, beta1, A, theta, R, l1=None) -> Interval:
    """Lower bound for the smoothed sum of a(n) n^-beta1 at level R.

    ``l1`` is an enclosure of L(1, chi_1); when omitted it is bracketed by
    (1 - beta1) * [0.72, 0.18 (log q)^2].
    """
    if q <= 400000:
        raise InvalidHypothesis("requires q > 400000")
    b1 = _as_interval(beta1)
    Rv = _as_interval(R)
    if Rv.certainly_lt(200) or not Rv.certainly_ge(200):
        raise InvalidHypothesis("requires R >= 200")
    logq = Interval(q).log()
    edge = 1 - 1 / (10 * logq)
    if b1.certainly_lt(edge) or not b1.certainly_lt(1):
        raise InvalidHypothesis("requires 1 - 1/(10 log q) <= beta1 < 1")
    one_minus = 1 - b1
    if l1 is None:
        l1 = Interval.hull(one_minus * Fraction(72, 100), one_minus * Fraction(18, 100) * logq.square())
    else:
        l1 = _as_interval(l1)
    main = l1 * (one_minus * Rv.log()).exp() / (one_minus * (2 - b1))
    bracket = 1 - 4 * _as_interval(A) * (logq ** Fraction(3, 4)).exp() * (_as_interval(theta) * logq).exp() / Rv.sqrt()
    return main * bracket


def smoothing_bracket(q: int, A, theta, R) -> Interval:
    logq = Interval(q).log()
    Rv = _as_interval(R)
    return 1 - 4 * _as_interval(A) * (logq ** Fraction(3, 4)).exp() * (_as_interval(theta) * logq).exp() / Rv.sqrt()


__all__ = [
    "InvalidHypothesis",
    "WeightCheck",
    "SieveSystem",
    "a_over_n_exact",
    "a_over_n_partial",
    "build_weights",
    "check_weights",
    "g1_principal",
    "divisor_sum_bound",
    "smoothing_bracket",
    "quadratic_form",
    "selberg_lower_bound_rhs",
    "v_of_r",
]
