"""Explicit constants for the zero-repulsion bound, all in interval arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

import mpmath

from .interval import Interval, decide

Q_MIN = 400000


class WindowViolated(ValueError):
    """beta1 lies outside 1 - 1/(10 log q) < beta1 < 1 - B/(q^eps (log q)^2)."""

    def __init__(self, side: str, message: str):
        super().__init__(message)
        self.side = side


class SigmaOutOfRange(ValueError):
    pass


class BetaOutOfRange(ValueError):
    pass


class IneffectivePreset(ValueError):
    pass


def _iv(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, str):
        return Interval(Fraction(x))
    if isinstance(x, float):
        return Interval(Fraction(x))
    return Interval(x)


def _one_minus(x) -> Interval:
    """1 - x, computed exactly first when x is rational (1 - beta1 can be far below 2^-prec)."""
    if isinstance(x, Interval):
        return 1 - x
    return Interval(1 - _frac(x))


def _frac(x) -> Fraction | None:
    if x is None:
        return None
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class HypothesisParams:
    """Subconvexity constants (A, theta) and the lower bound 1 - beta1 >= B q^-eps (log q)^-2.

    ``None`` marks a constant the preset leaves unspecified.
    """

    A: Fraction | None = None
    theta: Fraction | None = None
    B: Fraction | None = None
    eps: Fraction | None = None
    ineffective: bool = False
    names: tuple[str, ...] = ()

    def __post_init__(self):
        for key in ("A", "theta", "B", "eps"):
            object.__setattr__(self, key, _frac(getattr(self, key)))
        if self.A is not None and self.A < 1:
            raise ValueError("A must be >= 1")
        if self.theta is not None and not 0 < self.theta <= Fraction(1, 4):
            raise ValueError("theta must lie in (0, 1/4]")
        if self.B is not None and self.B <= 0:
            raise ValueError("B must be positive")
        if self.eps is not None and not 0 < self.eps <= Fraction(1, 2):
            raise ValueError("eps must lie in (0, 1/2]")

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if getattr(self, k) is None]
        if missing:
            raise ValueError(f"parameters not specified: {', '.join(missing)}")

    def exponents(self) -> tuple[Fraction, Fraction, Fraction]:
        """(8 theta + 2 eps, 4 theta, theta/4): the limiting c1, c2, c4."""
        self.require("theta", "eps")
        return 8 * self.theta + 2 * self.eps, 4 * self.theta, self.theta / 4

    def to_dict(self) -> dict[str, Any]:
        return {
            "A": None if self.A is None else str(self.A),
            "theta": None if self.theta is None else str(self.theta),
            "B": None if self.B is None else str(self.B),
            "eps": None if self.eps is None else str(self.eps),
            "ineffective": self.ineffective,
            "presets": list(self.names),
        }


def preset(name: str, slack: Fraction = Fraction(1, 1000)) -> HypothesisParams:
    name = name.strip().lower()
    if name == "convexity":
        return HypothesisParams(A=Fraction("2.97655"), theta=Fraction(1, 4), names=(name,))
    if name == "bordignon":
        return HypothesisParams(B=Fraction(100), eps=Fraction(1, 2), names=(name,))
    if name == "weyl":
        return HypothesisParams(theta=Fraction(1, 6) + slack, ineffective=True, names=(name,))
    if name == "siegel":
        return HypothesisParams(eps=slack, ineffective=True, names=(name,))
    raise KeyError(f"unknown preset {name!r}")


PRESET_NAMES = ("convexity", "bordignon", "weyl", "siegel")


def combine(*parts: HypothesisParams, **overrides) -> HypothesisParams:
    """Merge presets; a key set by two presets with different values is an error."""
    merged: dict[str, Any] = {}
    ineffective = False
    names: list[str] = []
    for p in parts:
        for key in ("A", "theta", "B", "eps"):
            v = getattr(p, key)
            if v is None:
                continue
            if key in merged and merged[key] != v:
                raise ValueError(f"presets disagree on {key}")
            merged[key] = v
        ineffective = ineffective or p.ineffective
        names.extend(p.names)
    for key, v in overrides.items():
        if v is not None:
            merged[key] = _frac(v)
    return HypothesisParams(**merged, ineffective=ineffective, names=tuple(names))


def from_preset_string(text: str, **overrides) -> HypothesisParams:
    parts = [preset(n) for n in text.split(",") if n.strip()] if text else []
    return combine(*parts, **overrides)


# -- elementary bounds ---------------------------------------------------------

def mccurley_region(q: int, t=0) -> Interval:
    """1 - 1/(10 log max{q, q|t|, 10})."""
    if q < 3:
        raise ValueError("requires q >= 3")
    tq = abs(_frac(t)) * q
    top = max(Fraction(q), tq, Fraction(10))
    return 1 - 1 / (10 * Interval(top).log())


def phragmen_bound(sigma, t, q_psi: int, eta, A, theta, primitive: bool = True, q: int | None = None) -> Interval:
    if not isinstance(sigma, Interval) and not isinstance(eta, Interval):
        sf, ef = _frac(sigma), _frac(eta)
        if not 0 < ef < 1:
            raise SigmaOutOfRange("requires 0 < eta < 1")
        if not Fraction(1, 2) <= sf <= 1 + ef:
            raise SigmaOutOfRange("requires 1/2 <= sigma <= 1 + eta")
    s = _iv(sigma)
    e = _iv(eta)
    if not (e.certainly_positive() and e.certainly_lt(1)):
        raise SigmaOutOfRange("requires 0 < eta < 1")
    if s.certainly_lt(Fraction(1, 2)) or s.certainly_gt(1 + e):
        raise SigmaOutOfRange("requires 1/2 <= sigma <= 1 + eta")
    modulus = q_psi if primitive else q
    if modulus is None:
        raise ValueError("the modulus q is required when primitive is false")
    tt = abs(_frac(t))
    denom = Fraction(1, 2) + e
    base = _iv(A) * (_iv(theta) * (2 * Interval(modulus) * (1 + Interval(tt))).log()).exp()
    first = ((1 + e - s) / denom * base.log()).exp()
    second = ((s - Fraction(1, 2)) / denom * (1 + 1 / e).log()).exp()
    out = first * second
    if not primitive:
        out = out * (((2 - s) / 2 * Interval(modulus).log().log()).exp()).exp()
    return out


def compute_M_K(q: int, T, params: HypothesisParams) -> tuple[Interval, Interval]:
    """K = 1e25 A^20 B^-2 e^(8 u^(3/4)) u^28 and M = K q^(8 theta + 2 eps) T^(4 theta), u = log q."""
    if q <= Q_MIN:
        raise ValueError(f"requires q > {Q_MIN}")
    Tv = _iv(T)
    if not Tv.certainly_ge(4):
        raise ValueError("requires T >= 4")
    params.require("A", "theta", "B", "eps")
    logK, logM = log_M_K(q, Tv, params)
    return logM.exp(), logK.exp()


def log_M_K(q: int, T, params: HypothesisParams) -> tuple[Interval, Interval]:
    u = Interval(q).log()
    logK = (
        Interval(10**25).log()
        + 20 * Interval(params.A).log()
        - 2 * Interval(params.B).log()
        + 8 * u ** Fraction(3, 4)
        + 28 * u.log()
    )
    logM = logK + (8 * params.theta + 2 * params.eps) * u + 4 * params.theta * _iv(T).log()
    return logK, logM


def log_R(q: int, beta1, params: HypothesisParams) -> Interval:
    u = Interval(q).log()
    omb = _one_minus(beta1)
    return Interval(64).log() + 2 * Interval(params.A).log() + 2 * params.theta * u + 2 * u ** Fraction(3, 4) - 2 * omb.log()


def log_N(q: int, T, beta1, params: HypothesisParams) -> Interval:
    u = Interval(q).log()
    omb = _one_minus(beta1)
    return (
        Interval(10**25).log()
        + 20 * Interval(params.A).log()
        + 8 * u ** Fraction(3, 4)
        + 24 * u.log()
        + 8 * params.theta * u
        + 4 * params.theta * _iv(T).log()
        - 2 * omb.log()
    )


def repulsion_beta_from_logM(logM: Interval, beta1, theta) -> Interval:
    """1 - log(theta / (4 (1 - beta1) log M)) / log M."""
    arg = _iv(theta) / (4 * _one_minus(beta1) * logM)
    return 1 - arg.log() / logM


def window(q: int, params: HypothesisParams) -> tuple[Interval, Interval]:
    params.require("B", "eps")
    u = Interval(q).log()
    lower = 1 - 1 / (10 * u)
    upper = 1 - Interval(params.B) / ((params.eps * u).exp() * u.square())
    return lower, upper


def window_status(q: int, beta1, params: HypothesisParams) -> str:
    """"inside", "below" or "above" (or "undecided" when an enclosure straddles an edge)."""
    lower, upper = window(q, params)
    b = _iv(beta1)
    if b.certainly_gt(lower) and b.certainly_lt(upper):
        return "inside"
    if b.certainly_le(lower):
        return "below"
    if b.certainly_ge(upper):
        return "above"
    return "undecided"


@dataclass
class BoundReport:
    q: int
    T: Fraction
    beta1: Fraction
    params: HypothesisParams
    window: str
    K: Interval
    M: Interval
    log_M: Interval
    R: Interval
    N: Interval
    log_N: Interval
    n_le_m: str
    log_argument: Interval
    repulsion_beta: Interval
    vacuous: bool
    corollary: dict[str, Any] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def invariants_ok(self) -> bool:
        if self.window == "inside" and self.n_le_m != "verified":
            return False
        if not self.vacuous and not self.repulsion_beta.certainly_lt(1):
            return False
        return True

    def to_dict(self) -> dict[str, Any]:
        out = {
            "q": self.q,
            "T": str(self.T),
            "beta1": str(self.beta1),
            "params": self.params.to_dict(),
            "window": self.window,
            "K": self.K.to_dict(),
            "M": self.M.to_dict(),
            "log_M": self.log_M.to_dict(),
            "R": self.R.to_dict(),
            "N": self.N.to_dict(),
            "log_N": self.log_N.to_dict(),
            "N_le_M": self.n_le_m,
            "log_argument": self.log_argument.to_dict(),
            "repulsion_beta": self.repulsion_beta.to_dict(),
            "vacuous": self.vacuous,
            "notes": list(self.notes),
        }
        if self.corollary is not None:
            out["corollary"] = {k: (v.to_dict() if isinstance(v, Interval) else v) for k, v in self.corollary.items()}
        return out


def repulsion_bound(q: int, T, beta1, params: HypothesisParams, strict: bool = True, corollary=None) -> BoundReport:
    """Evaluate the repulsion exponent and the auxiliary lengths R, N for one input.

    With ``strict`` a beta1 outside the beta1 window raises
    :class:`WindowViolated`; otherwise the report records the window status.
    """
    if q <= Q_MIN:
        raise ValueError(f"requires q > {Q_MIN}")
    params.require("A", "theta", "B", "eps")
    Tf = _frac(T)
    if Tf < 4:
        raise ValueError("requires T >= 4")
    b1 = _frac(beta1)
    if not 0 < b1 < 1:
        raise ValueError("beta1 must lie in (0, 1)")
    status = window_status(q, b1, params)
    notes = []
    if status != "inside":
        msg = {
            "below": "beta1 <= 1 - 1/(10 log q)",
            "above": "beta1 >= 1 - B/(q^eps (log q)^2)",
            "undecided": "beta1 is too close to a window edge to decide",
        }[status]
        if strict:
            raise WindowViolated(status, msg)
        notes.append(f"window violated: {msg}")
    logK, logM = log_M_K(q, Interval(Tf), params)
    lR = log_R(q, b1, params)
    lN = log_N(q, Interval(Tf), b1, params)
    n_le_m = decide(lN, logM, strict=False)
    arg = Interval(params.theta) / (4 * _one_minus(b1) * logM)
    vacuous = not arg.certainly_gt(1)
    beta = 1 - arg.log() / logM
    if vacuous:
        notes.append("vacuous: theta/(4 (1-beta1) log M) <= 1, so the bound is >= 1")
    report = BoundReport(
        q=q, T=Tf, beta1=b1, params=params, window=status,
        K=logK.exp(), M=logM.exp(), log_M=logM, R=lR.exp(), N=lN.exp(), log_N=lN,
        n_le_m=n_le_m, log_argument=arg, repulsion_beta=beta, vacuous=vacuous, notes=notes,
    )
    if corollary is not None:
        c1, c2, c3, c4 = (_frac(c) for c in corollary)
        lin = linear_form(q, Tf, c1, c2, c3)
        report.corollary = {
            "c1": str(c1), "c2": str(c2), "c3": str(c3), "c4": str(c4),
            "linear_form": lin,
            "value": corollary_form(q, Tf, b1, c1, c2, c3, c4),
            "dominance": decide(logM, lin, strict=False) if not params.ineffective else "not applicable",
        }
    return report


def linear_form(q: int, T, c1, c2, c3) -> Interval:
    return _iv(_frac(c1)) * Interval(q).log() + _iv(_frac(c2)) * _iv(_frac(T)).log() + _iv(_frac(c3))


def corollary_form(q: int, T, beta1, c1, c2, c3, c4) -> Interval:
    """1 - log(c4 / ((1 - beta1) L)) / L with L = c1 log q + c2 log T + c3."""
    if q <= Q_MIN:
        raise ValueError(f"requires q > {Q_MIN}")
    if _frac(T) < 4:
        raise ValueError("requires T >= 4")
    lin = linear_form(q, T, c1, c2, c3)
    return 1 - (_iv(_frac(c4)) / (_one_minus(beta1) * lin)).log() / lin


def corollary_dominance(q: int, T, params: HypothesisParams, c1, c2, c3) -> str:
    """``verified`` iff the upper end of log M is at most the lower end of c1 log q + c2 log T + c3."""
    if params.ineffective:
        raise IneffectivePreset("ineffective presets carry no explicit constants to compare")
    if q <= Q_MIN:
        raise ValueError(f"requires q > {Q_MIN}")
    if _frac(T) < 4:
        raise ValueError("requires T >= 4")
    params.require("A", "theta", "B", "eps")
    _, logM = log_M_K(q, _iv(_frac(T)), params)
    lin = linear_form(q, T, c1, c2, c3)
    if logM.hi <= lin.lo:
        return "verified"
    if logM.lo > lin.hi:
        return "failed"
    return "inconclusive"


def detector_rhs(beta, beta1, N) -> Interval:
    """((2 - beta1)/(1 - beta) + 1/(beta - 1/2)) (1 - beta1) N^(1 - beta).

    At beta = 1/2 the second term diverges and the upper end is +inf.
    """
    b = _iv(beta)
    b1 = _iv(beta1)
    Nv = _iv(N)
    if not (b.certainly_ge(Fraction(1, 2)) and b.certainly_lt(1)):
        raise BetaOutOfRange("requires 1/2 <= beta < 1")
    if not (b1.certainly_positive() and b1.certainly_lt(1)):
        raise BetaOutOfRange("requires 0 < beta1 < 1")
    if not Nv.certainly_ge(1):
        raise ValueError("requires N >= 1")
    scale = _one_minus(beta1) * (_one_minus(beta) * Nv.log()).exp()
    first = (2 - b1) / (1 - b)
    gap = b - Fraction(1, 2)
    if not gap.certainly_positive():
        lo = (first * scale).lo
        return Interval(lo, mpmath.inf)
    return (first + 1 / gap) * scale


def ratio_window(q: int) -> tuple[Interval, Interval]:
    if q <= Q_MIN:
        raise ValueError(f"requires q > {Q_MIN}")
    return Interval(Fraction(72, 100)), Fraction(18, 100) * Interval(q).log().square()


def threshold_implication(q: int, T, beta1, params: HypothesisParams) -> str:
    """theta/(4(1 - beta1)) < N^(1/2 - 5 theta/log N) log N for N from its defining formula."""
    lN = log_N(q, _iv(_frac(T)), beta1, params)
    lhs = (Interval(params.theta) / (4 * _one_minus(beta1))).log()
    rhs = (Fraction(1, 2) - 5 * params.theta / lN) * lN + lN.log()
    return decide(lhs, rhs)


def with_params(params: HypothesisParams, **changes) -> HypothesisParams:
    return replace(params, **{k: _frac(v) for k, v in changes.items()})


__all__ = [
    "BetaOutOfRange",
    "BoundReport",
    "HypothesisParams",
    "IneffectivePreset",
    "PRESET_NAMES",
    "SigmaOutOfRange",
    "WindowViolated",
    "combine",
    "compute_M_K",
    "corollary_dominance",
    "corollary_form",
    "detector_rhs",
    "from_preset_string",
    "linear_form",
    "log_M_K",
    "log_N",
    "log_R",
    "mccurley_region",
    "phragmen_bound",
    "preset",
    "ratio_window",
    "repulsion_beta_from_logM",
    "repulsion_bound",
    "threshold_implication",
    "window",
    "window_status",
    "with_params",
]
