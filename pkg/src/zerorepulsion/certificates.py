"""Registry of explicit numerical inequalities, each checked in interval arithmetic.

A certificate is ``verified`` when the enclosures separate on the correct side,
``failed`` when they separate on the wrong side and ``inconclusive`` when they
overlap.  Inconclusive runs are repeated once at 160 bits.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .analytic import EvalParams, zeta
from .interval import ComplexInterval, Interval, decide, get_precision, precision
from .rigor import (
    AlgebraicIntegrand,
    PrimeFactorForm,
    SeriesTerm,
    integrate_rigorous_detail,
    prime_product_rigorous,
    prime_tail_rigorous,
    series_tail_rigorous,
)

RETRY_BITS = 160
CONVEXITY_A = Fraction("2.97655")


@dataclass
class Certificate:
    name: str
    claim: str
    location: str
    verdict: str
    enclosure: Interval
    threshold: Interval | None = None
    details: dict[str, Any] = field(default_factory=dict)
    sampled: bool = False
    precision: int = 0
    seconds: float = 0.0

    @property
    def width(self) -> float:
        return float(self.enclosure.width())

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        out = {
            "name": self.name,
            "claim": self.claim,
            "paper_location": self.location,
            "verdict": self.verdict,
            "enclosure": self.enclosure.to_dict(),
            "precision": self.precision,
            "sampled": self.sampled,
            "details": _jsonable(self.details),
        }
        if self.verdict == "inconclusive":
            out["width"] = repr(self.width)
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def _jsonable(x):
    if isinstance(x, Interval):
        return x.to_dict()
    if isinstance(x, ComplexInterval):
        return x.to_dict()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _combine(verdicts) -> str:
    verdicts = list(verdicts)
    if "failed" in verdicts:
        return "failed"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "verified"


def _iv(x) -> Interval:
    return x if isinstance(x, Interval) else Interval(Fraction(x) if isinstance(x, str) else x)


# -- individual checks ----------------------------------------------------------

_C1_FORM = AlgebraicIntegrand.make(Fraction(5, 12), [Fraction("0.24"), Fraction("0.25")])
_C2_FORM = AlgebraicIntegrand.make(Fraction(1, 2), [1, 1])
_C5_STATED = AlgebraicIntegrand.make(Fraction(1, 2), [Fraction("0.492"), Fraction("0.500")])
_C5_SQUARED = AlgebraicIntegrand.make(Fraction(1, 2), [Fraction("0.492") ** 2, Fraction("0.500") ** 2])


def _integral_check(form, domain, bound, strict, t0=None, tol=1e-5):
    res = integrate_rigorous_detail(form, domain, tail_exponent=form.decay, tol=tol, t0=t0)
    return res, decide(res.value, _iv(bound), strict=strict)


def c1_int_4_5(t0: int | None = None) -> tuple[str, Interval, dict]:
    res, verdict = _integral_check(_C1_FORM, "half", Fraction(9, 2), True, t0)
    return verdict, res.value, {"main": res.main, "tail": res.tail, "T0": res.T0, "panels": res.panels}


def c2_int_5_8(t0: int | None = None) -> tuple[str, Interval, dict]:
    res, verdict = _integral_check(_C2_FORM, "real", Fraction("5.8"), False, t0)
    return verdict, res.value, {"main": res.main, "tail": res.tail, "T0": res.T0, "panels": res.panels}


def c3_series() -> tuple[str, Interval, dict]:
    s = series_tail_rigorous(SeriesTerm("power_log", Fraction(2)), 2, explicit=20000)
    return decide(s, Interval(1)), s, {}


def c4_b1_product() -> tuple[str, Interval, dict]:
    form = PrimeFactorForm.make([(1, Fraction(3, 2)), (3, 3)])
    head = prime_product_rigorous(form, p_max=40000)
    # the tail in the form (1 + sum n^-3/2)(1 + sum 3^omega(n) n^-3), n >= 40000
    s1 = series_tail_rigorous(SeriesTerm("power", Fraction(3, 2)), 40000)
    s2 = series_tail_rigorous(SeriesTerm("omega_power", Fraction(3), Fraction(3)), 40000)
    tail_series = (1 + s1) * (1 + s2)
    tail_euler = prime_tail_rigorous(form, 40000)
    b1 = head * tail_euler
    parts = {
        "head<=3.15": decide(head, Interval(Fraction("3.15")), strict=False),
        "tail_series<=1.1": decide(tail_series, Interval(Fraction("1.1")), strict=False),
        "tail_euler<=1.1": decide(tail_euler, Interval(Fraction("1.1")), strict=False),
        "3.15*1.1<=3.5": decide(Interval(Fraction("3.465")), Interval(Fraction("3.5")), strict=False),
        "B(1)<=3.5": decide(b1, Interval(Fraction("3.5")), strict=False),
    }
    details = {"head": head, "tail_series": tail_series, "tail_euler": tail_euler, "checks": parts}
    return _combine(parts.values()), b1, details


def c5_ratio_integral(t0: int | None = None) -> tuple[str, Interval, dict]:
    const = 2 * _iv(CONVEXITY_A).square() * Interval(2).sqrt()
    out = {}
    for label, form in (("stated", _C5_STATED), ("squared", _C5_SQUARED)):
        res = integrate_rigorous_detail(form, "half", tail_exponent=form.decay, t0=t0)
        val = const * res.value
        out[label] = {
            "integral": res.value,
            "value": val,
            "verdict": decide(val, Interval(Fraction("92.7"))),
            "T0": res.T0,
        }
    # the constants as stated carry the verdict; the squared form is reported alongside
    return out["stated"]["verdict"], out["stated"]["value"], {"variants": out}


def c6_maple() -> tuple[str, Interval, dict]:
    u0 = Interval(400001).log()
    const = Interval(10**25 * 3**20) / Interval(100**2)
    lhs = 8 * (u0 ** Fraction(3, 4)) + 28 * u0.log() + const.log()
    rhs = 7 * u0 + 107
    margin = rhs - lhs
    # d/du (rhs - lhs) = 7 - 6 u^-1/4 - 28/u, increasing in u, so its value at u0 bounds it below
    deriv = 7 - 6 * (u0 ** Fraction(-1, 4)) - 28 / u0
    parts = {
        "endpoint": decide(Interval(0), margin),
        "derivative": decide(Interval(0), deriv),
    }
    return _combine(parts.values()), margin, {"lhs_at_q0": lhs, "rhs_at_q0": rhs, "derivative_lower": deriv, "checks": parts}


def c7_small_arith() -> tuple[str, Interval, dict]:
    F = Fraction
    e = Interval.e()
    pi = Interval.pi()
    claims = [
        ("0.740 < e^(-3/10)", Interval(F("0.740")), (-Interval(F(3, 10))).exp(), True),
        ("1.008*125.2 < 126", Interval(F("1.008") * F("125.2")), Interval(126), True),
        ("4.5*1.8/pi < 2.6", Interval(F("8.1")) / pi, Interval(F("2.6")), True),
        ("2.6*1.008/0.72 <= 3.7", Interval(F("2.6") * F("1.008") / F("0.72")), Interval(F("3.7")), False),
        ("3.7 <= 4", Interval(F("3.7")), Interval(4), False),
        ("3016*e/pi < 2610", 3016 * e / pi, Interval(2610), True),
        # increasing in theta, so theta = 1/4 is the worst case
        ("3^5*1.5*2^(1/6+theta) <= 520 (theta <= 1/4)", Interval(F(729, 2)) * (Interval(F(5, 12)) * Interval(2).log()).exp(), Interval(520), False),
    ]
    rows = {}
    first_bad = None
    for label, lhs, rhs, strict in claims:
        v = decide(lhs, rhs, strict=strict)
        rows[label] = {"lhs": lhs, "rhs": rhs, "verdict": v}
        if v != "verified" and first_bad is None:
            first_bad = lhs
    verdict = _combine(r["verdict"] for r in rows.values())
    enclosure = first_bad if first_bad is not None else claims[0][1]
    return verdict, enclosure, {"claims": rows}


def _logR_margin(q: int, A: Fraction, theta: Fraction, one_minus_beta1: Interval) -> tuple[Interval, Interval]:
    u = Interval(q).log()
    R = 64 * _iv(A).square() * (2 * _iv(theta) * u).exp() * (2 * (u ** Fraction(3, 4))).exp() / one_minus_beta1.square()
    lhs = (2 * Interval.e() * R).log()
    rhs = Fraction(23, 10) * (Fraction(42, 100) * _iv(A).log()).exp() * u
    return lhs, rhs


def c8_logR_bound() -> tuple[str, Interval, dict]:
    B, eps = 100, Fraction(1, 2)
    grid = []
    worst = None
    fails = 0
    for q in (400001, 10**6, 10**9, 10**12, 10**20):
        u = Interval(q).log()
        lo_edge = B / ((eps * u).exp() * u.square())
        hi_edge = 1 / (10 * u)
        for A in (Fraction(1), Fraction(2), Fraction(10)):
            for theta in (Fraction(1, 6), Fraction(1, 4)):
                # 1 - beta1 at twice its smallest allowed value and at the McCurley edge
                for label, omb in (("near_B_edge", 2 * lo_edge), ("mccurley_edge", hi_edge)):
                    if not omb.certainly_lt(hi_edge) and label == "near_B_edge":
                        continue
                    lhs, rhs = _logR_margin(q, A, theta, omb)
                    v = decide(lhs, rhs, strict=False)
                    fails += v == "failed"
                    gap = lhs - rhs
                    grid.append({"q": q, "A": A, "theta": theta, "one_minus_beta1": label, "log2eR": lhs, "rhs": rhs, "verdict": v})
                    if worst is None or gap.mid() > worst[0].mid():
                        worst = (gap, lhs)
    verdict = _combine(g["verdict"] for g in grid)

    # the intermediate chain: log((128e/6400) A^2 q^(3/2) (log q)^4) <= 2.3 A^0.42 log q,
    # worst at A = 1, q = 400001 (decreasing in both for q > 400000, A >= 1)
    u0 = Interval(400001).log()
    chain = (Interval(Fraction(128, 6400)) * Interval.e()).log() + Fraction(3, 2) * u0 + 4 * u0.log()
    chain_rhs = Fraction(23, 10) * u0
    d_u = Fraction(3, 2) + 4 / u0 - Fraction(23, 10)
    d_A = 2 - Fraction(966, 1000) * u0
    chain_verdict = _combine(
        [decide(chain, chain_rhs, strict=False), decide(d_u, Interval(0)), decide(d_A, Interval(0))]
    )
    details = {
        "grid_points": len(grid),
        "grid_failures": fails,
        "grid": grid,
        "intermediate_chain": {"lhs": chain, "rhs": chain_rhs, "d_du": d_u, "d_dA_times_A": d_A, "verdict": chain_verdict},
    }
    return verdict, worst[1], details


def c9_zeta_half_window() -> tuple[str, Interval, dict]:
    params = EvalParams()
    z0 = abs(zeta(ComplexInterval(Fraction(1, 2), 0), params))
    top = z0
    above_z0 = 0
    for k in range(1, 301):
        # |zeta(1/2 - it)| = |zeta(1/2 + it)|, so t >= 0 covers the symmetric grid
        z = abs(zeta(ComplexInterval(Fraction(1, 2), Fraction(k, 100)), params))
        top = Interval(max(top.lo, z.lo), max(top.hi, z.hi))
        if not z.certainly_le(z0):
            above_z0 += 1
    verdict = decide(top, Interval(Fraction("1.461")), strict=False)
    return verdict, top, {"zeta_half_abs": z0, "grid_points": 601, "step": "0.01", "points_not_below_zeta_half": above_z0}


def c10_theta_endgame() -> tuple[str, Interval, dict]:
    F = Fraction
    checks = {}
    # theta scales out of the first two steps
    step1 = Interval(F("10.08") / 4 + F(1, 5))
    checks["10.08/(4t)+1/(5t) <= 55/(20t)"] = decide(step1, Interval(F(55, 20)), strict=False)
    checks["1/(2t)+55/(20t) == 65/(20t)"] = "verified" if F(1, 2) + F(55, 20) == F(65, 20) else "failed"
    # S_0 step: 1 + (N^-1/(1-beta1) + 3.1)/log N <= 1/(2 theta) with N >= 1e25/(1-beta1), theta <= 1/4
    logN_min = Interval(10**25).log()
    s0 = 1 + (Interval(F(1, 10**25)) + F("3.1")) / logN_min
    checks["S0 absorbed by 1/(2 theta)"] = decide(s0, Interval(2), strict=False)
    # rearrangement: (1 - 1e-25) * 20/65 > 1/4 makes the derived bound strictly stronger
    factor = Interval(1 - F(1, 10**25)) * F(20, 65)
    checks["(1-1e-25)*20/65 > 1/4"] = decide(Interval(F(1, 4)), factor)
    # numerical sweep: beta on the boundary of the final inequality lies below the target bound
    worst = None
    sweep = 0
    for theta in (F(1, 6), F(1, 5), F(1, 4)):
        for omb in (F(1, 10**3), F(1, 10**6), F(1, 10**10)):
            for logN in (60, 100, 1000, 10**5):
                L = Interval(logN)
                if not L.certainly_ge(logN_min - Interval(omb).log()):
                    continue
                beta_star = 1 - (factor * theta / (omb * L)).log() / L
                target = 1 - (Interval(theta) / (4 * omb * L)).log() / L
                gap = target - beta_star
                v = decide(beta_star, target)
                checks[f"sweep theta={theta} 1-beta1={omb} logN={logN}"] = v
                sweep += 1
                if worst is None or gap.lo < worst.lo:
                    worst = gap
    return _combine(checks.values()), worst, {"checks": checks, "sweep_points": sweep}


# -- registry ---------------------------------------------------------------------

@dataclass(frozen=True)
class _Entry:
    name: str
    claim: str
    location: str
    run: Callable[[], tuple[str, Interval, dict]]
    threshold: Fraction | None
    sampled: bool = False


REGISTRY: dict[str, _Entry] = {
    e.name: e
    for e in [
        _Entry("int_4_5", "int_0^inf (1+t)^(5/12) / ((0.24+t^2)^(1/2) (0.25+t^2)^(1/2)) dt < 4.5",
               "integral bound for the smoothed sum lower bound", c1_int_4_5, Fraction(9, 2)),
        _Entry("int_5_8", "int_R (1+|t|)^(1/2) / (1+t^2) dt <= 5.8",
               "integral in the bound for the sieve series", c2_int_5_8, Fraction("5.8")),
        _Entry("series_n2logn", "sum_{n>=2} 1/(n^2 log n) < 1",
               "series in the Phragmen-Lindelof step", c3_series, Fraction(1)),
        _Entry("B1_product", "B(1) <= 3.15 * 1.1 <= 3.5",
               "Euler product at s = 1 in the sieve series bound", c4_b1_product, Fraction("3.5")),
        _Entry("ratio_integral", "2 (2.97655)^2 2^(1/2) int_0^inf (1+t)^(1/2) / ((0.492+t^2)^(1/2) (0.500+t^2)^(1/2)) dt < 92.7",
               "contour integral in the ratio lower bound for L(1, chi1)/(1-beta1)", c5_ratio_integral, Fraction("92.7")),
        _Entry("maple_ineq", "8 u^(3/4) + 28 log u + log(10^25 3^20 100^-2) <= 7u + 107 for u = log q, q > 400000",
               "reduction of log M to a linear form in log q, log T", c6_maple, None),
        _Entry("small_arith", "0.740 < e^(-3/10); 1.008*125.2 < 126; 4.5*1.8/pi < 2.6; 2.6*1.008/0.72 <= 3.7 <= 4; 3016 e/pi < 2610; 3^5*1.5*2^(1/6+theta) <= 520",
               "arithmetic steps in the ratio, smoothed sum and sieve series bounds", c7_small_arith, None),
        _Entry("logR_bound", "log(2eR) <= 2.3 A^0.42 log q for R = 64 A^2 q^(2 theta) e^(2 (log q)^(3/4)) (1-beta1)^-2",
               "crude bound on log(2eR) in the zero detector", c8_logR_bound, None),
        _Entry("zeta_half_window", "|zeta(1/2+it)| <= 1.461 for |t| <= 3 (grid step 0.01)",
               "zeta on the critical line near the real axis", c9_zeta_half_window, Fraction("1.461"), sampled=True),
        _Entry("theta_endgame", "1 - 10^-25 <= (65/(20 theta)) (1-beta1) N^(1-beta) log N rearranges to the repulsion bound",
               "final combination of the two detector sums", c10_theta_endgame, None),
    ]
}


def certificate_names() -> list[str]:
    return list(REGISTRY)


def _run_once(entry: _Entry, bits: int) -> Certificate:
    start = time.perf_counter()
    with precision(bits):
        verdict, enclosure, details = entry.run()
    return Certificate(
        name=entry.name,
        claim=entry.claim,
        location=entry.location,
        verdict=verdict,
        enclosure=enclosure,
        threshold=Interval(entry.threshold) if entry.threshold is not None else None,
        details=details,
        sampled=entry.sampled,
        precision=bits,
        seconds=time.perf_counter() - start,
    )


def verify_certificate(name: str, bits: int | None = None) -> Certificate:
    if name not in REGISTRY:
        raise KeyError(f"unknown certificate {name!r}; known: {', '.join(REGISTRY)}")
    bits = bits or get_precision()
    cert = _run_once(REGISTRY[name], bits)
    if cert.verdict == "inconclusive" and bits < RETRY_BITS:
        cert = _run_once(REGISTRY[name], RETRY_BITS)
    return cert


def verify_all(bits: int | None = None, jobs: int = 1) -> list[Certificate]:
    names = certificate_names()
    if jobs <= 1:
        return [verify_certificate(n, bits) for n in names]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(verify_certificate, names, [bits] * len(names)))


__all__ = [
    "Certificate",
    "REGISTRY",
    "certificate_names",
    "verify_all",
    "verify_certificate",
]
