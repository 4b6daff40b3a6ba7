"""Rigorous evaluation of zeta, Hurwitz zeta and Dirichlet L-functions by
Euler-Maclaurin summation, plus the Dirichlet series built from them:
F = L(s, chi) L(s, chi chi1), the sieve series G, and the detector sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import mpmath

from .characters import DirichletCharacter, enumerate_characters
from .interval import ComplexInterval, Interval, expi_fraction, real_power
from .multiplicative import ExceptionalContext, a_prime_power, a_values, divisors
from .sieve import SieveSystem

MAX_DETECTOR_N = 10**7


class PoleProximity(ValueError):
    """The input box touches the pole at s = 1."""


@dataclass(frozen=True)
class EvalParams:
    """Euler-Maclaurin settings; ``None`` means choose automatically."""

    truncation: int | None = None
    em_order: int | None = None
    target_error: float = 1e-18


DEFAULT_PARAMS = EvalParams()


@lru_cache(maxsize=512)
def _bernoulli_ratio(k: int) -> Fraction:
    """B_{2k} / (2k)!"""
    p, q = mpmath.bernfrac(2 * k)
    return Fraction(int(p), int(q) * math.factorial(2 * k))


def _em_remainder_log(sigma: float, tabs: float, X: float, M: int) -> float:
    """log of the remainder bound after M Bernoulli corrections (float estimate)."""
    b = abs(float(_bernoulli_ratio(M)))
    lp = 0.0
    for j in range(2 * M):
        lp += 0.5 * math.log((sigma + j) ** 2 + tabs**2)
    return math.log(b) + lp + (1 - sigma - 2 * M) * math.log(X) - math.log(sigma + 2 * M - 1)


def choose_em(sigma: float, tabs: float, amin: float, params: EvalParams) -> tuple[int, int]:
    """Pick (N, M) so that the remainder bound falls below the target error."""
    if params.truncation is not None and params.em_order is not None:
        return params.truncation, params.em_order
    target = math.log(params.target_error)
    ns = [params.truncation] if params.truncation is not None else _n_candidates(tabs)
    ms = [params.em_order] if params.em_order is not None else range(1, 80)
    for N in ns:
        X = N + amin
        for M in ms:
            if sigma + 2 * M - 1 <= 0:
                continue
            if _em_remainder_log(sigma, tabs, X, M) <= target:
                return N, M
    raise ValueError("no Euler-Maclaurin parameters reach the target error")


def _n_candidates(tabs: float) -> list[int]:
    base = max(4, int(tabs / 6))
    return [base + k for k in (0, 2, 4, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512, 1024, 2048)]


def _box_features(s: ComplexInterval) -> tuple[float, float]:
    sigma = float(s.re.lo)
    tabs = max(abs(float(s.im.lo)), abs(float(s.im.hi)))
    return sigma, tabs


def _check_halfplane(s: ComplexInterval) -> None:
    if not s.re.certainly_positive():
        raise ValueError("requires Re(s) > 0")


def _contains_one(s: ComplexInterval) -> bool:
    return s.re.contains(1) and s.im.contains(0)


def _disk(r: Interval) -> ComplexInterval:
    return ComplexInterval.disk_box(r)


def _em_tail(s: ComplexInterval, X: Fraction, M: int, logX: Interval, Xs: ComplexInterval) -> ComplexInterval:
    """X^-s / 2 + sum_{k=1}^{M} B_2k/(2k)! (s)_{2k-1} X^{-s-2k+1} + remainder box."""
    out = Xs * Fraction(1, 2)
    poch = s
    Xinv = Fraction(1) / X
    for k in range(1, M + 1):
        out = out + poch * Xs * Interval(_bernoulli_ratio(k) * Xinv ** (2 * k - 1))
        poch = poch * (s + (2 * k - 1)) * (s + 2 * k)
    # poch is now (s)_{2M}
    sigma = s.re
    bound = abs(poch) * Interval(abs(_bernoulli_ratio(M))) * ((1 - sigma - 2 * M) * logX).exp() / (sigma + 2 * M - 1)
    return out + _disk(bound)


def hurwitz_zeta(s, a=Fraction(1), params: EvalParams = DEFAULT_PARAMS) -> ComplexInterval:
    """Enclosure of zeta(s, a) for rational 0 < a <= 1."""
    s = ComplexInterval.coerce(s)
    a = Fraction(a)
    if not 0 < a <= 1:
        raise ValueError("Hurwitz parameter must lie in (0, 1]")
    _check_halfplane(s)
    if _contains_one(s):
        raise PoleProximity("input box contains s = 1")
    sigma, tabs = _box_features(s)
    N, M = choose_em(sigma, tabs, float(a), params)
    total = ComplexInterval(0, 0)
    for n in range(N):
        total = total + real_power(Interval(n + a).log(), s)
    X = N + a
    logX = Interval(X).log()
    Xs = real_power(logX, s)
    total = total + Xs * Interval(X) / (s - 1)
    return total + _em_tail(s, X, M, logX, Xs)


def zeta(s, params: EvalParams = DEFAULT_PARAMS) -> ComplexInterval:
    return hurwitz_zeta(s, Fraction(1), params)


def _character_box(chi: DirichletCharacter, n: int) -> ComplexInterval | None:
    v = chi(n)
    if v is None:
        return None
    return expi_fraction(v.angle)


def l_eval(s, chi: DirichletCharacter, params: EvalParams = DEFAULT_PARAMS) -> ComplexInterval:
    """Enclosure of L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)."""
    s = ComplexInterval.coerce(s)
    _check_halfplane(s)
    q = chi.q
    principal = chi.is_principal()
    if principal and _contains_one(s):
        raise PoleProximity("L(s, chi_0) has a pole at s = 1")
    sigma, tabs = _box_features(s)
    N, M = choose_em(sigma, tabs, 1.0 / q, params)
    units = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
    values = {a: _character_box(chi, a) for a in units}

    # direct part: sum over m = n q + a < N q coprime to q of chi(m) m^-s
    direct = ComplexInterval(0, 0)
    for n in range(N):
        for a in units:
            direct = direct + values[a] * real_power(Interval(n * q + a).log(), s)

    logq = Interval(q).log()
    qs = real_power(logq, s)
    u = s - 1
    series_ok = not principal and _series_applicable(u, N, q)
    pole = ComplexInterval(0, 0)
    tail = ComplexInterval(0, 0)
    for a in units:
        X = N + Fraction(a, q)
        logX = Interval(X).log()
        Xs = real_power(logX, s)
        tail = tail + values[a] * _em_tail(s, X, M, logX, Xs)
        if not series_ok:
            pole = pole + values[a] * Xs * Interval(X)
    if series_ok:
        pole = _pole_free_sum(u, [(values[a], Interval(N + Fraction(a, q)).log()) for a in units], params)
    else:
        if u.re.contains(0) and u.im.contains(0):
            raise PoleProximity("box too wide for the pole-cancelling expansion")
        pole = pole / u
    return direct + qs * (pole + tail)


def _series_applicable(u: ComplexInterval, N: int, q: int) -> bool:
    umag = float(abs(u).hi)
    return umag * math.log(N + 1) <= 0.5


def _pole_free_sum(u: ComplexInterval, terms, params: EvalParams) -> ComplexInterval:
    """sum_a chi(a) (X_a^-u - 1)/u, which equals sum_a chi(a) X_a^-u / u when sum chi(a) = 0."""
    out = ComplexInterval(0, 0)
    upow = ComplexInterval(1, 0)
    zmax = float(abs(u).hi) * max(float(lx.hi) for _, lx in terms)
    lmax = max(float(lx.hi) for _, lx in terms)
    K = 1
    while True:
        bound = lmax * zmax**K / math.factorial(K + 1) / (1 - zmax) if zmax > 0 else 0.0
        if bound < params.target_error / 10 or K > 200:
            break
        K += 1
    powers = [lx for _, lx in terms]
    for k in range(1, K + 1):
        coeff = ComplexInterval(0, 0)
        for (v, _), lx in zip(terms, powers):
            coeff = coeff + v * (lx**k)
        out = out + coeff * upow * Interval(Fraction((-1) ** k, math.factorial(k)))
        upow = upow * u
    # rigorous tail with interval arithmetic
    L = Interval(max((lx.hi for _, lx in terms)))
    z = abs(u) * L
    tail_one = L * z**K / Interval(math.factorial(K + 1)) / (1 - z)
    tail = tail_one * len(terms)
    return out + _disk(tail)


def f_eval(s, chi: DirichletCharacter, ctx: ExceptionalContext, params: EvalParams = DEFAULT_PARAMS) -> ComplexInterval:
    """F(s, chi) = L(s, chi) L(s, chi chi1)."""
    return l_eval(s, chi, params) * l_eval(s, chi * ctx.chi1, params)


def dirichlet_partial(s, coeffs: Sequence, n_max: int) -> ComplexInterval:
    """sum_{n <= n_max} coeffs[n] n^-s for real coefficients."""
    s = ComplexInterval.coerce(s)
    total = ComplexInterval(0, 0)
    for n in range(1, n_max + 1):
        c = coeffs[n]
        if c:
            total = total + real_power(Interval(n).log(), s) * Interval(c)
    return total


def divisor_tail_bound(N: int) -> Interval:
    """Upper bound for sum_{n > N} d(n) n^-2, namely 2 (log N + 2) / N (N >= 2)."""
    return 2 * (Interval(N).log() + 2) / N


# -- the sieve series G -------------------------------------------------------

def _prime_factor_b(s: ComplexInterval, chi: DirichletCharacter, ctx: ExceptionalContext, p: int) -> ComplexInterval:
    """(1 + chi1(p)) chi(p) p^-s - chi1(p) chi(p)^2 p^-2s."""
    v = chi(p)
    if v is None:
        return ComplexInterval(0, 0)
    c1 = ctx.chi1_value(p)
    x = real_power(Interval(p).log(), s)
    w = expi_fraction(v.angle)
    return w * x * (1 + c1) - (w * w) * (x * x) * c1


def _prime_factor_ratio(s: ComplexInterval, chi: DirichletCharacter, ctx: ExceptionalContext, p: int, terms: int | None = None) -> ComplexInterval:
    """Truncated num / (1 + num) with num = sum_{k>=1} a(p^k) chi(p^k) p^-ks."""
    v = chi(p)
    if v is None:
        return ComplexInterval(0, 0)
    if terms is None:
        terms = min(600, int(55 / (float(s.re.lo) * math.log(p))) + 10)
    x = real_power(Interval(p).log(), s)
    w = expi_fraction(v.angle)
    term = ComplexInterval(1, 0)
    num = ComplexInterval(0, 0)
    for k in range(1, terms + 1):
        term = term * w * x
        ak = a_prime_power(ctx, p, k)
        if ak:
            num = num + term * ak
    # |a(p^k)| <= k + 1 and |p^-ks| = r^k with r = p^-sigma < 1
    r = (-(s.re * Interval(p).log())).exp()
    K = terms + 1
    tail = r**K * ((K + 1) - K * r) / (1 - r).square()
    num = num + _disk(tail)
    return num / (num + 1)


def g_eval(s, chi: DirichletCharacter, sys: SieveSystem, params: EvalParams = DEFAULT_PARAMS, form: str = "A") -> ComplexInterval:
    """Enclosure of G(s, chi) for Re(s) >= 1/2.

    Form "A" evaluates the per-prime ratio of prime-power series (with a
    tail bound) and diagonalises the double sum; form "B" uses the two-term
    polynomial per prime and sums over all pairs (d, e) directly.
    """
    s = ComplexInterval.coerce(s)
    if s.re.certainly_lt(Fraction(1, 2)):
        raise ValueError("requires Re(s) >= 1/2")
    ctx = sys.ctx
    support = {d: sys.supports[d] for d, t in sys.theta.items() if t and math.gcd(d, ctx.q) == 1}
    primes = sorted({p for ps in support.values() for p in ps})
    if form == "B":
        bp = {p: _prime_factor_b(s, chi, ctx, p) for p in primes}
        theta = {d: Interval(sys.theta[d]) for d in support}
        cache: dict[int, ComplexInterval] = {}
        total = ComplexInterval(0, 0)
        ds = sorted(support)
        for d in ds:
            for e in ds:
                m = d * e // math.gcd(d, e)
                val = cache.get(m)
                if val is None:
                    val = ComplexInterval(1, 0)
                    for p in set(support[d]) | set(support[e]):
                        val = val * bp[p]
                    cache[m] = val
                total = total + val * (theta[d] * theta[e])
        return total
    if form != "A":
        raise ValueError("form must be 'A' or 'B'")
    rp = {p: _prime_factor_ratio(s, chi, ctx, p) for p in primes}
    # b([d,e]) = b(d) b(e) / b((d,e)) and 1/b(l) = sum_{k | l} c(k), c(p) = 1/b(p) - 1
    bd: dict[int, ComplexInterval] = {}
    for d, ps in support.items():
        val = ComplexInterval(1, 0)
        for p in ps:
            val = val * rp[p]
        bd[d] = val * Interval(sys.theta[d])
    cp = {p: 1 / rp[p] - 1 for p in primes}
    total = ComplexInterval(0, 0)
    R = sys.R
    for k, ps in support.items():
        y = ComplexInterval(0, 0)
        for d in range(k, R + 1, k):
            if d in bd:
                y = y + bd[d]
        ck = ComplexInterval(1, 0)
        for p in ps:
            ck = ck * cp[p]
        total = total + ck * y * y
    return total


def g_series_bound(q: int, beta1, A, theta, R) -> Interval:
    """12 (1-beta1)^2 (log q)^4 R + 1.5e7 A^2 q^(2 theta) e^(2 (log q)^(3/4)) log^12(2 e R)."""
    logq = Interval(q).log()
    b1 = _iv(beta1)
    Rv = _iv(R)
    first = 12 * (1 - b1).square() * logq**4 * Rv
    second = Interval(15 * 10**6) * _iv(A).square() * (2 * _iv(theta) * logq).exp() * (2 * logq ** Fraction(3, 4)).exp()
    second = second * ((2 * Rv).log() + 1) ** 12
    return first + second


def _iv(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, float):
        return Interval(Fraction(x))
    return Interval(x)


# -- exact coefficient identity -------------------------------------------------

@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> list[int]:
    """Integer coefficients (low degree first) of the m-th cyclotomic polynomial."""
    # x^m - 1 divided by the product of Phi_d for proper divisors d
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d == m:
            continue
        poly = _poly_divexact(poly, _cyclotomic(d))
    return poly


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert all(v == 0 for v in num[: len(den) - 1])
    return out


def cyclotomic_normal_form(coeffs: dict[int, Fraction], m: int) -> tuple[Fraction, ...]:
    """Reduce sum c_k zeta_m^k modulo Phi_m; zero iff all entries vanish."""
    phi = _cyclotomic(m)
    deg = len(phi) - 1
    poly = [Fraction(0)] * max(m, deg + 1)
    for k, c in coeffs.items():
        poly[k % m] += c
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            for j, pj in enumerate(phi):
                poly[i - deg + j] -= c * pj
    return tuple(poly[:deg])


@dataclass
class CoefficientReport:
    q: int
    R: int
    n_max: int
    characters: int
    checked: int = 0
    violations: list[tuple[int, str, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _g_coefficients(chi: DirichletCharacter, sys: SieveSystem, n_max: int, m_order: int) -> dict[int, dict[int, Fraction]]:
    """Dirichlet coefficients of G(s, chi) as cyclotomic vectors (index mod m_order)."""
    ctx = sys.ctx
    idx = chi.index_table()
    ds = [d for d, t in sys.theta.items() if t and math.gcd(d, ctx.q) == 1]
    W: dict[int, Fraction] = {}
    for d in ds:
        td = sys.theta[d]
        for e in ds:
            m = d * e // math.gcd(d, e)
            if m <= n_max:
                W[m] = W.get(m, Fraction(0)) + td * sys.theta[e]
    out: dict[int, dict[int, Fraction]] = {}
    for m, w in W.items():
        if not w:
            continue
        ps = sys.supports[m] if m in sys.supports else tuple(p for p, _ in _factor(m))
        for r in range(len(ps) + 1):
            for S in combinations(ps, r):
                n = m * math.prod(S)
                if n > n_max:
                    continue
                coeff = w
                k = 0
                for p in ps:
                    c1 = ctx.chi1_value(p)
                    if p in S:
                        coeff *= -c1
                        k += 2 * idx[p % ctx.q]
                    else:
                        coeff *= 1 + c1
                        k += idx[p % ctx.q]
                if coeff:
                    slot = out.setdefault(n, {})
                    slot[k % m_order] = slot.get(k % m_order, Fraction(0)) + coeff
    return out


def _factor(n: int):
    from .characters import factorize

    return factorize(n)


def fg_coefficient_identity(ctx: ExceptionalContext, sys: SieveSystem, n_max: int, chi: DirichletCharacter | None = None) -> CoefficientReport:
    """Compare the coefficients of the formal product F(s,chi) G(s,chi) with
    a(n) chi(n) (sum_{d|n} theta_d)^2 for every n <= n_max, exactly.

    Without ``chi`` every character mod q is checked.
    """
    if n_max > 10**5:
        raise ValueError("n_max is capped at 100000")
    chars = [chi] if chi is not None else enumerate_characters(ctx.q)
    report = CoefficientReport(q=ctx.q, R=sys.R, n_max=n_max, characters=len(chars))
    av = a_values(ctx, n_max)
    lam = sys.theta_sum_table(n_max)
    for c in chars:
        m_order = c.group.exponent
        idx = c.index_table()
        G = _g_coefficients(c, sys, n_max, m_order)
        FG: list[dict[int, Fraction]] = [dict() for _ in range(n_max + 1)]
        for m, gm in G.items():
            for j in range(1, n_max // m + 1):
                k_j = idx[j % ctx.q]
                if k_j < 0 or av[j] == 0:
                    continue
                slot = FG[m * j]
                for k, v in gm.items():
                    kk = (k + k_j) % m_order
                    slot[kk] = slot.get(kk, Fraction(0)) + v * av[j]
        for n in range(1, n_max + 1):
            target: dict[int, Fraction] = {}
            kn = idx[n % ctx.q]
            if kn >= 0 and av[n] and lam[n]:
                target[kn] = av[n] * lam[n] ** 2
            diff = dict(FG[n])
            for k, v in target.items():
                diff[k] = diff.get(k, Fraction(0)) - v
            report.checked += 1
            if any(diff.values()) and any(cyclotomic_normal_form(diff, m_order)):
                report.violations.append((n, repr(c.exponents), m_order))
    return report


# -- detector and truncated sums ------------------------------------------------

def mollified_sum(N: int, rho, chi: DirichletCharacter, ctx: ExceptionalContext, sys: SieveSystem) -> ComplexInterval:
    """sum_{n <= N} a(n) chi(n) (sum_{d|n} theta_d)^2 n^-rho (1 - n/N)."""
    if N > MAX_DETECTOR_N:
        raise ValueError(f"N = {N} exceeds the cap {MAX_DETECTOR_N}")
    rho = ComplexInterval.coerce(rho)
    if rho.re.certainly_lt(Fraction(1, 2)) or not rho.re.certainly_lt(1):
        raise ValueError("requires 1/2 <= Re(rho) < 1")
    if N < 1:
        return ComplexInterval(0, 0)
    av = a_values(ctx, N)
    lam = sys.theta_sum_table(N)
    total = ComplexInterval(0, 0)
    for n in range(1, N + 1):
        if not av[n] or not lam[n]:
            continue
        v = chi(n)
        if v is None:
            continue
        w = Fraction(N - n, N)
        if not w:
            continue
        coeff = Interval(av[n] * lam[n] ** 2 * w)
        total = total + expi_fraction(v.angle) * real_power(Interval(n).log(), rho) * coeff
    return total


@dataclass(frozen=True)
class TruncatedSum:
    value: Interval
    min_term: Interval
    terms: int


def truncated_s_of_x(ctx: ExceptionalContext, beta1, x) -> TruncatedSum:
    """S(x) = sum_{n <= x} a(n) n^-beta1 (1 - n/x) with a nonnegativity witness."""
    xv = Fraction(x) if not isinstance(x, float) else Fraction(x)
    if xv < 3:
        raise ValueError("requires x >= 3")
    b1 = _iv(beta1)
    n_max = math.floor(xv)
    av = a_values(ctx, n_max)
    total = Interval(0)
    min_term = None
    for n in range(1, n_max + 1):
        w = 1 - Fraction(n) / xv
        term = Interval(av[n] * w) * (-(b1 * Interval(n).log())).exp() if n > 1 else Interval(w)
        total = total + term
        min_term = term if min_term is None or term.lo < min_term.lo else min_term
    return TruncatedSum(total, min_term, n_max)


# -- zero location (non-rigorous) ----------------------------------------------

def hardy_z(t: float, chi: DirichletCharacter, dps: int = 20) -> float:
    """Z(t) = e^{i theta(t)} L(1/2 + it, chi), real for a real primitive chi."""
    if not (chi.is_real() and chi.is_primitive()):
        raise ValueError("Hardy Z needs a real primitive character")
    q = chi.q
    kappa = 0 if chi.real_value(q - 1) == 1 or q == 1 else 1
    with mpmath.workdps(dps):
        s = mpmath.mpc(0.5, t)
        vals = [chi.real_value(n) for n in range(q)] if q > 1 else [1]
        L = mpmath.zeta(s) if q == 1 else mpmath.dirichlet(s, vals)
        th = t / 2 * mpmath.log(q / mpmath.pi) + mpmath.im(mpmath.loggamma((s + kappa) / 2))
        return float(mpmath.re(mpmath.exp(1j * th) * L))


def locate_zeros(chi: DirichletCharacter, t_max: float, step: float = 0.05) -> list[float]:
    """Ordinates in (0, t_max] of sign changes of Z, refined by bisection."""
    out = []
    t0, z0 = step / 2, hardy_z(step / 2, chi)
    t = t0
    while t < t_max:
        t1 = t + step
        z1 = hardy_z(t1, chi)
        if z0 == 0 or z0 * z1 < 0:
            lo, hi, zlo = t, t1, z0
            for _ in range(50):
                mid = (lo + hi) / 2
                zm = hardy_z(mid, chi, dps=25)
                if zlo * zm <= 0:
                    hi = mid
                else:
                    lo, zlo = mid, zm
            out.append((lo + hi) / 2)
        t, z0 = t1, z1
    return out



# -- floating-point evaluation on the critical line ---------------------------

_EM_FLOAT_ORDER = 15


@lru_cache(maxsize=None)
def _bernoulli_floats(M: int) -> tuple[float, ...]:
    return tuple(float(_bernoulli_ratio(j)) for j in range(1, M + 1))


def l_values_float(ts, chars: Sequence[Sequence[complex]], q: int, sigma: float = 0.5):
    """L(sigma + it, chi) in double precision for each character row (values chi(0..q-1)).

    Direct summation over m <= Nq followed by Euler-Maclaurin on each residue
    class, with N chosen so that |s| / (2 pi X) <= 1/2.
    """
    import numpy as np

    ts = np.asarray(ts, dtype=float)
    chimat = np.asarray(chars, dtype=complex).reshape(len(chars), q)
    out = np.empty((chimat.shape[0], ts.size), dtype=complex)
    bern = _bernoulli_floats(_EM_FLOAT_ORDER)
    order = np.argsort(ts)
    chunk = 256
    for start in range(0, ts.size, chunk):
        idx = order[start : start + chunk]
        s = sigma + 1j * ts[idx]
        N = int(np.abs(s).max() / math.pi) + 6
        m = np.arange(1, N * q + 1)
        vals = chimat[:, m % q]
        direct = np.exp(-np.outer(s, np.log(m))) @ vals.T
        X = N + np.arange(1, q + 1) / q
        logX = np.log(X)
        Xs = np.exp(-np.outer(s, logX))  # X^-s
        tail = Xs * X / (s[:, None] - 1) + Xs / 2
        poch = s.copy()
        powX = Xs / X
        for j, b in enumerate(bern, start=1):
            tail = tail + b * poch[:, None] * powX
            poch = poch * (s + 2 * j - 1) * (s + 2 * j)
            powX = powX / (X * X)
        chia = chimat[:, np.arange(1, q + 1) % q]
        em = (tail @ chia.T) * np.exp(-s * math.log(q))[:, None]
        out[:, idx] = (direct + em).T
    return out


# -- Mellin identity for the smoothed divisor sum -----------------------------

@dataclass
class MellinCheck:
    q: int
    chi1: tuple
    s0: Fraction
    R: int
    lhs: Interval
    residues: Interval
    contour: float
    quadrature_error: float
    tail_bound: Interval
    rhs: Interval

    @property
    def agrees(self) -> bool:
        return self.lhs.overlaps(self.rhs)

    @property
    def discrepancy(self) -> float:
        """|lhs - residues - contour| at midpoints; compare with the tail bound."""
        return abs(float(self.lhs.mid()) - float(self.residues.mid()) - self.contour)


def _bad_prime_factor(chi1: DirichletCharacter) -> Interval:
    """prod over p | q, p not dividing the conductor, of (1 + p^-1/2)."""
    from .characters import factorize

    cond = chi1.conductor
    out = Interval(1)
    for p, _ in factorize(chi1.q):
        if cond % p:
            out = out * (1 + 1 / Interval(p).sqrt())
    return out


def mellin_identity_check(
    ctx: ExceptionalContext,
    s0_values: Sequence = (Fraction(95, 100), Fraction(99, 100)),
    R: int = 1000,
    T0: int = 1000,
    panel: float = 0.5,
) -> list[MellinCheck]:
    """Compare sum_{n <= R} a(n) n^-s0 (1 - n/R) with the residues at s = 0 and
    s = 1 - s0 plus the integral over Re(s) = 1/2 - s0.

    The finite sum and residues are interval enclosures.  The contour integral
    uses Gauss-Legendre panels in double precision on [-T0, T0] with the
    difference between two panel widths as its error estimate, and a proven
    bound beyond T0 from |zeta(1/2+it)| <= 1.5 (1+t)^(1/6) and the convexity
    bound 2.97655 (q*(1+t))^(1/4) for the primitive character inducing chi1.
    """
    import numpy as np

    chi1 = ctx.chi1
    if chi1.is_principal():
        raise ValueError("chi1 must be nonprincipal")
    q = ctx.q
    av = a_values(ctx, R)
    chi_row = [chi1.real_value(n) for n in range(q)]

    nodes, weights = np.polynomial.legendre.leggauss(16)

    def grid(h):
        edges = np.arange(0.0, T0 + 1e-9, h)
        a, b = edges[:-1], edges[1:]
        t = ((b - a)[:, None] * (nodes[None, :] + 1) / 2 + a[:, None]).ravel()
        w = ((b - a)[:, None] * weights[None, :] / 2).ravel()
        return t, w

    grids = [grid(panel), grid(panel / 2)]
    fvals = []
    for t, _ in grids:
        z = l_values_float(t, [[1]], 1)[0]
        l = l_values_float(t, [chi_row], q)[0]
        fvals.append(z * l)

    l1 = l_eval(ComplexInterval(1, 0), chi1)
    cond = chi1.conductor
    bad = _bad_prime_factor(chi1)
    out = []
    for s0 in s0_values:
        s0 = Fraction(s0)
        if not Fraction(1, 2) < s0 < 1:
            raise ValueError("s0 must lie in (1/2, 1)")
        s0i = Interval(s0)
        lhs = Interval(0)
        for n in range(1, R + 1):
            if av[n]:
                lhs = lhs + Interval(av[n] * Fraction(R - n, R)) * (-(s0i * Interval(n).log())).exp()
        logR = Interval(R).log()
        one_minus = 1 - s0i
        res_pole = l1.re * (one_minus * logR).exp() / (one_minus * (2 - s0i))
        res_zero = (zeta(ComplexInterval(s0, 0)) * l_eval(ComplexInterval(s0, 0), chi1)).re
        residues = res_pole + res_zero

        c = 0.5 - float(s0)
        estimates = []
        for (t, w), f in zip(grids, fvals):
            kern = np.exp((c + 1j * t) * math.log(R)) / ((c + 1j * t) * (c + 1 + 1j * t))
            # integrand at -t is the conjugate, so the full line gives twice the real part
            estimates.append(float(np.sum(w * (f * kern).real)) / math.pi)
        contour = estimates[1]
        absint = float(np.sum(grids[1][1] * np.abs(fvals[1]))) / math.pi
        quad_err = abs(estimates[1] - estimates[0]) + 1e-10 * absint

        # |integrand| <= 1.5 * 2.97655 * cond^(1/4) * bad * (1+t)^(5/12) R^c / t^2 for t >= T0
        T = Interval(T0)
        cI = Fraction(1, 2) - s0
        const = Fraction(3, 2) * Interval(Fraction("2.97655")) * (Interval(cond).log() / 4).exp() * bad
        growth = (Fraction(5, 12) * (1 + 1 / T).log()).exp()
        tail_int = (Fraction(-7, 12) * T.log()).exp() / Fraction(7, 12)
        tail = const * growth * tail_int * (Interval(cI) * logR).exp() / Interval.pi()
        spread = tail.hi + mpmath.mpf(quad_err)
        rhs = residues + Interval(contour) + Interval(-spread, spread)
        out.append(
            MellinCheck(q=q, chi1=chi1.exponents, s0=s0, R=R, lhs=lhs, residues=residues,
                        contour=contour, quadrature_error=quad_err, tail_bound=tail, rhs=rhs)
        )
    return out

__all__ = [
    "CoefficientReport",
    "DEFAULT_PARAMS",
    "EvalParams",
    "PoleProximity",
    "TruncatedSum",
    "choose_em",
    "cyclotomic_normal_form",
    "dirichlet_partial",
    "divisor_tail_bound",
    "f_eval",
    "fg_coefficient_identity",
    "g_eval",
    "hardy_z",
    "hurwitz_zeta",
    "l_eval",
    "g_series_bound",
    "l_values_float",
    "locate_zeros",
    "MellinCheck",
    "mellin_identity_check",
    "mollified_sum",
    "truncated_s_of_x",
    "zeta",
]
