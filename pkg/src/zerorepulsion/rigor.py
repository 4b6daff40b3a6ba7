"""Rigorous quadrature, prime products and series tails in interval arithmetic."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .interval import Interval
from .multiplicative import primes_up_to, smallest_prime_factors


class UnregisteredForm(ValueError):
    """The integrand or term is not one of the supported algebraic forms."""


class Nonconvergent(ValueError):
    """The requested integral or series diverges."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise UnregisteredForm(f"parameters must be exact rationals, got {x!r}")


@dataclass(frozen=True)
class AlgebraicIntegrand:
    """(1 + |t|)^alpha / prod_j (c_j + t^2)^(1/2)."""

    alpha: Fraction
    cs: tuple[Fraction, ...]

    @classmethod
    def make(cls, alpha, cs: Sequence) -> "AlgebraicIntegrand":
        form = cls(_frac(alpha), tuple(_frac(c) for c in cs))
        if not form.cs or any(c <= 0 for c in form.cs):
            raise UnregisteredForm("every c_j must be positive")
        return form

    @property
    def decay(self) -> Fraction:
        """Exponent e with integrand ~ t^e as t -> infinity."""
        return self.alpha - len(self.cs)

    def value(self, t: Interval) -> Interval:
        v = ((1 + t).log() * Interval(self.alpha)).exp() if self.alpha else Interval(1)
        den = Interval(1)
        for c in self.cs:
            den = den * (t.square() + c)
        return v / den.sqrt()

    def derivative(self, t: Interval) -> Interval:
        f = self.value(t)
        logd = Interval(self.alpha) / (1 + t)
        for c in self.cs:
            logd = logd - t / (t.square() + c)
        return f * logd

    def tail(self, T0: Interval) -> Interval:
        """Enclosure of the integral over [T0, infinity)."""
        J = len(self.cs)
        a = self.alpha
        e1 = Interval(a - J + 1)
        main = (e1 * T0.log()).exp() / Interval(J - 1 - a)
        shrink = Interval(1)
        for c in self.cs:
            shrink = shrink * (1 + Interval(c) / (2 * T0.square()))
        if a >= 0:
            upper = main + Interval(a) * (Interval(a - J) * T0.log()).exp() / Interval(J - a)
            lower = main / shrink
        else:
            upper = main
            lower = main * (Interval(a) * (1 + 1 / T0).log()).exp() / shrink
        return Interval(lower.lo, upper.hi)


@dataclass
class QuadratureResult:
    value: Interval
    main: Interval
    tail: Interval
    T0: int
    panels: int


def _panel(form: AlgebraicIntegrand, a: Fraction, b: Fraction) -> Interval:
    h = b - a
    m = (a + b) / 2
    fm = form.value(Interval(m))
    d = form.derivative(Interval(a, b))
    spread = Interval(d.lo - d.hi, d.hi - d.lo)
    return fm * h + spread * (h * h / 8)


def integrate_rigorous(
    form: AlgebraicIntegrand,
    domain: str = "half",
    tail_exponent=None,
    tol: float = 1e-5,
    t0: int | None = None,
    max_panels: int = 200_000,
) -> Interval:
    """Enclosure of the integral of ``form`` over [0, inf) ("half") or R ("real")."""
    return integrate_rigorous_detail(form, domain, tail_exponent, tol, t0, max_panels).value


def integrate_rigorous_detail(
    form: AlgebraicIntegrand,
    domain: str = "half",
    tail_exponent=None,
    tol: float = 1e-5,
    t0: int | None = None,
    max_panels: int = 200_000,
) -> QuadratureResult:
    if not isinstance(form, AlgebraicIntegrand):
        raise UnregisteredForm("integrand must be an AlgebraicIntegrand")
    if domain not in ("half", "real"):
        raise ValueError("domain must be 'half' or 'real'")
    if form.alpha >= len(form.cs) - 1:
        raise Nonconvergent("need alpha < (number of factors) - 1")
    if tail_exponent is not None and _frac(tail_exponent) != form.decay:
        raise UnregisteredForm(f"tail exponent {tail_exponent} does not match the decay {form.decay}")

    # the integrand is positive, so its minimum on [0, 1] bounds the main term below
    if t0 is None:
        floor_main = float(form.value(Interval(0, 1)).lo)
        T0 = 2
        while float(form.tail(Interval(T0)).hi) > 1e-3 * floor_main:
            T0 *= 2
    else:
        T0 = int(t0)

    # initial panels: 16 on [0,1], then 8 per dyadic block
    edges = [Fraction(k, 16) for k in range(17)]
    lo = 1
    while lo < T0:
        hi = min(2 * lo, T0)
        step = Fraction(hi - lo, 8)
        edges.extend(lo + step * k for k in range(1, 9))
        lo = hi
    heap = []
    panels = []
    for a, b in zip(edges, edges[1:]):
        v = _panel(form, a, b)
        panels.append(v)
        heapq.heappush(heap, (-float(v.width()), len(panels) - 1, a, b))
    widths = sum(float(v.width()) for v in panels)
    n_alive = len(panels)
    alive = [True] * len(panels)
    while widths > tol and n_alive < max_panels:
        negw, idx, a, b = heapq.heappop(heap)
        m = (a + b) / 2
        alive[idx] = False
        widths += negw
        for x, y in ((a, m), (m, b)):
            v = _panel(form, x, y)
            panels.append(v)
            alive.append(True)
            widths += float(v.width())
            heapq.heappush(heap, (-float(v.width()), len(panels) - 1, x, y))
        n_alive += 1
    main = Interval(0)
    for v, ok in zip(panels, alive):
        if ok:
            main = main + v
    tail = form.tail(Interval(T0))
    value = main + tail
    if domain == "real":
        value = value * 2
        main = main * 2
        tail = tail * 2
    return QuadratureResult(value=value, main=main, tail=tail, T0=T0, panels=n_alive)


# -- prime products ----------------------------------------------------------

@dataclass(frozen=True)
class PrimeFactorForm:
    """Local factor 1 + sum_k c_k p^(-e_k) with c_k >= 0."""

    terms: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def make(cls, terms) -> "PrimeFactorForm":
        out = tuple((_frac(c), _frac(e)) for c, e in terms)
        if any(c < 0 for c, _ in out):
            raise UnregisteredForm("coefficients must be nonnegative")
        return cls(out)

    def value(self, p: int) -> Interval:
        logp = Interval(p).log()
        v = Interval(1)
        for c, e in self.terms:
            if e.denominator == 1:
                v = v + Interval(Fraction(c, p ** int(e)) if e > 0 else c * p ** int(-e))
            else:
                v = v + Interval(c) * (-(Interval(e) * logp)).exp()
        return v


def prime_product_rigorous(form: PrimeFactorForm, p_min: int = 2, p_max: int | None = None, tail_from: int | None = None) -> Interval:
    """Enclosure of prod_{p_min <= p <= p_max} factor(p), times the tail over p > tail_from if given."""
    out = Interval(1)
    if p_max is not None and p_max >= p_min:
        for p in primes_up_to(p_max):
            if p >= p_min:
                out = out * form.value(p)
    if tail_from is not None:
        out = out * prime_tail_rigorous(form, tail_from)
    return out


def prime_tail_rigorous(form: PrimeFactorForm, P: int) -> Interval:
    """Enclosure of prod_{p > P} factor(p) via 1 + x <= e^x and the integral test."""
    s = Interval(0)
    for c, e in form.terms:
        if e <= 1:
            raise Nonconvergent("tail product needs every exponent > 1")
        s = s + Interval(c) * ((1 - Interval(e)) * Interval(P).log()).exp() / Interval(e - 1)
    return Interval(1, s.exp().hi)


# -- series --------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesTerm:
    """Registered positive decreasing terms.

    kind "power":       n^-e
    kind "power_log":   1 / (n^e log n)
    kind "omega_power": c^omega(n) n^-e  (majorised by n^(log2 c - e))
    """

    kind: str
    e: Fraction
    c: Fraction = Fraction(1)

    def value(self, n: int, omega: int = 0) -> Interval:
        if self.kind == "power":
            return _npow(n, -self.e)
        if self.kind == "power_log":
            return _npow(n, -self.e) / Interval(n).log()
        if self.kind == "omega_power":
            return Interval(self.c**omega) * _npow(n, -self.e)
        raise UnregisteredForm(self.kind)

    def tail_integral(self, N: int) -> Interval:
        """Upper bound for sum_{n > N} term(n)."""
        if self.kind == "power":
            if self.e <= 1:
                raise Nonconvergent("n^-e with e <= 1")
            return _npow(N, 1 - self.e) / Interval(self.e - 1)
        if self.kind == "power_log":
            if self.e <= 1:
                raise Nonconvergent("1/(n^e log n) with e <= 1 is handled only for e > 1")
            return _npow(N, 1 - self.e) / (Interval(self.e - 1) * Interval(N).log())
        if self.kind == "omega_power":
            if self.c < 1:
                raise UnregisteredForm("omega_power needs c >= 1")
            expo = Interval(self.e) - Interval(self.c).log() / Interval(2).log()
            if not expo.certainly_gt(1):
                raise Nonconvergent("majorant n^(log2 c - e) is not summable")
            return ((1 - expo) * Interval(N).log()).exp() / (expo - 1)
        raise UnregisteredForm(self.kind)


def _npow(n: int, e: Fraction) -> Interval:
    if e.denominator == 1:
        k = int(e)
        return Interval(Fraction(n) ** k)
    return (Interval(e) * Interval(n).log()).exp()


def series_tail_rigorous(term: SeriesTerm, start: int, explicit: int = 1000) -> Interval:
    """Enclosure of sum_{n >= start} term(n): explicit terms up to start+explicit-1,
    then the integral test from there on (terms are positive and decreasing)."""
    if not isinstance(term, SeriesTerm):
        raise UnregisteredForm("term must be a SeriesTerm")
    if term.kind == "power_log" and start < 2:
        raise ValueError("power_log needs start >= 2")
    last = start + explicit - 1
    omegas = None
    if term.kind == "omega_power":
        spf = smallest_prime_factors(last)
        omegas = [0] * (last + 1)
        for n in range(2, last + 1):
            p = spf[n]
            m = n // p
            omegas[n] = omegas[m] + (0 if m % p == 0 else 1)
    partial = Interval(0)
    for n in range(start, last + 1):
        partial = partial + term.value(n, omegas[n] if omegas else 0)
    upper = term.tail_integral(last)
    return Interval(partial.lo, (partial + upper).hi)


__all__ = [
    "AlgebraicIntegrand",
    "Nonconvergent",
    "PrimeFactorForm",
    "QuadratureResult",
    "SeriesTerm",
    "UnregisteredForm",
    "integrate_rigorous",
    "integrate_rigorous_detail",
    "prime_product_rigorous",
    "prime_tail_rigorous",
    "series_tail_rigorous",
]
