"""Outward-rounded interval arithmetic on top of mpmath's raw mpf layer.

Endpoints are raw mpf tuples; every operation rounds the lower endpoint
toward -inf and the upper toward +inf at the working precision. Results of
transcendental functions are additionally padded by a few ulps so that the
enclosure does not depend on mpmath rounding those functions correctly.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath.libmp import (
    finf,
    fninf,
    fnan,
    fone,
    fzero,
    from_float,
    from_int,
    from_rational,
    from_str,
    mpf_abs,
    mpf_add,
    mpf_ge,
    mpf_gt,
    mpf_le,
    mpf_lt,
    mpf_neg,
    mpf_shift,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_float,
)
from mpmath.libmp import libmpi

DEFAULT_PRECISION = 80

_PREC: contextvars.ContextVar[int] = contextvars.ContextVar("interval_precision", default=DEFAULT_PRECISION)


def get_precision() -> int:
    return _PREC.get()


@contextlib.contextmanager
def precision(bits: int) -> Iterator[int]:
    """Temporarily set the working precision (in bits) for interval operations."""
    if bits < 16:
        raise ValueError("precision must be at least 16 bits")
    token = _PREC.set(int(bits))
    try:
        yield int(bits)
    finally:
        _PREC.reset(token)


Real = Union[int, float, Fraction, str, "mpmath.mpf", "Interval"]


def _pad(pair, prec):
    """Widen an endpoint pair by a relative 2**(4 - prec)."""
    a, b = pair
    if a not in (finf, fninf, fnan):
        a = mpf_sub(a, mpf_shift(mpf_abs(a), 4 - prec), prec, round_floor)
    if b not in (finf, fninf, fnan):
        b = mpf_add(b, mpf_shift(mpf_abs(b), 4 - prec), prec, round_ceiling)
    return a, b


def _to_raw(x, rnd, prec):
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return from_int(x, prec, rnd)
    if isinstance(x, Fraction):
        return from_rational(x.numerator, x.denominator, prec, rnd)
    if isinstance(x, float):
        if math.isnan(x):
            raise ValueError("NaN cannot be an interval endpoint")
        return from_float(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf"):
            return finf
        if s == "-inf":
            return fninf
        return from_str(x, prec, rnd)
    if isinstance(x, mpmath.mpf):
        return x._mpf_
    raise TypeError(f"cannot convert {type(x).__name__} to an interval endpoint")


def _raw_to_fraction(v) -> Fraction:
    sign, man, exp, _ = v
    val = Fraction(int(man)) * (Fraction(2) ** exp)
    return -val if sign else val


def _raw_to_decimal_str(v, digits: int, rounding: str) -> str:
    if v == finf:
        return "+inf"
    if v == fninf:
        return "-inf"
    if v == fzero:
        return "0"
    frac = _raw_to_fraction(v)
    ctx = Context(prec=digits, rounding=rounding)
    d = ctx.divide(Decimal(frac.numerator), Decimal(frac.denominator))
    return str(d)


class Interval:
    """Closed real interval ``[lo, hi]`` with outward rounding."""

    __slots__ = ("_a", "_b")

    def __init__(self, lo: Real, hi: Real | None = None):
        if isinstance(lo, Interval) and hi is None:
            self._a, self._b = lo._a, lo._b
            return
        prec = _PREC.get()
        if hi is None:
            hi = lo
        a = _to_raw(lo, round_floor, prec)
        b = _to_raw(hi, round_ceiling, prec)
        if mpf_gt(a, b):
            raise ValueError(f"empty interval: lo > hi ({lo!r} > {hi!r})")
        self._a, self._b = a, b

    @classmethod
    def _from_raw(cls, pair) -> "Interval":
        obj = object.__new__(cls)
        a, b = pair
        if a == fnan:
            a = fninf
        if b == fnan:
            b = finf
        obj._a, obj._b = a, b
        return obj

    @classmethod
    def coerce(cls, x: Real) -> "Interval":
        return x if isinstance(x, Interval) else cls(x)

    @classmethod
    def pi(cls) -> "Interval":
        return cls._from_raw(libmpi.mpi_pi(_PREC.get()))

    @classmethod
    def e(cls) -> "Interval":
        return cls(1).exp()

    @classmethod
    def hull(cls, *items: Real) -> "Interval":
        ivs = [cls.coerce(x) for x in items]
        a = ivs[0]._a
        b = ivs[0]._b
        for iv in ivs[1:]:
            if mpf_lt(iv._a, a):
                a = iv._a
            if mpf_gt(iv._b, b):
                b = iv._b
        return cls._from_raw((a, b))

    # -- accessors -------------------------------------------------------
    @property
    def lo(self) -> mpmath.mpf:
        return mpmath.mpf(self._a)

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mpf(self._b)

    @property
    def raw(self):
        return self._a, self._b

    def mid(self) -> mpmath.mpf:
        return mpmath.mpf(libmpi.mpi_mid((self._a, self._b), _PREC.get()))

    def width(self) -> mpmath.mpf:
        return mpmath.mpf(mpf_sub(self._b, self._a, _PREC.get(), round_ceiling))

    def rad(self) -> mpmath.mpf:
        return mpmath.mpf(mpf_shift(mpf_sub(self._b, self._a, _PREC.get(), round_ceiling), -1))

    def mag(self) -> mpmath.mpf:
        """Upper bound for ``|x|`` over the interval."""
        return mpmath.mpf(libmpi.mpi_abs((self._a, self._b))[1])

    def lo_float(self) -> float:
        return to_float(self._a, rnd=round_floor)

    def hi_float(self) -> float:
        return to_float(self._b, rnd=round_ceiling)

    def __float__(self) -> float:
        return to_float(libmpi.mpi_mid((self._a, self._b), 53))

    def is_finite(self) -> bool:
        return self._a not in (finf, fninf) and self._b not in (finf, fninf)

    def is_point(self) -> bool:
        return self._a == self._b

    # -- set relations ---------------------------------------------------
    def contains(self, x: Real) -> bool:
        if isinstance(x, (int, Fraction)) and self.is_finite():
            return _raw_to_fraction(self._a) <= x <= _raw_to_fraction(self._b)
        other = Interval.coerce(x) if not isinstance(x, float) else Interval(x)
        return mpf_le(self._a, other._a) and mpf_ge(self._b, other._b)

    def __contains__(self, x: Real) -> bool:
        return self.contains(x)

    def overlaps(self, other: Real) -> bool:
        o = Interval.coerce(other)
        return not (mpf_lt(self._b, o._a) or mpf_lt(o._b, self._a))

    def intersect(self, other: Real) -> "Interval":
        o = Interval.coerce(other)
        a = self._a if mpf_ge(self._a, o._a) else o._a
        b = self._b if mpf_le(self._b, o._b) else o._b
        if mpf_gt(a, b):
            raise ValueError("intervals are disjoint")
        return Interval._from_raw((a, b))

    # -- certain / possible comparisons ------------------------------------
    def certainly_lt(self, other: Real) -> bool:
        return mpf_lt(self._b, Interval.coerce(other)._a)

    def certainly_le(self, other: Real) -> bool:
        return mpf_le(self._b, Interval.coerce(other)._a)

    def certainly_gt(self, other: Real) -> bool:
        return mpf_gt(self._a, Interval.coerce(other)._b)

    def certainly_ge(self, other: Real) -> bool:
        return mpf_ge(self._a, Interval.coerce(other)._b)

    def certainly_positive(self) -> bool:
        return mpf_gt(self._a, fzero)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: Real) -> "Interval":
        o = Interval.coerce(other)
        return Interval._from_raw(libmpi.mpi_add((self._a, self._b), (o._a, o._b), _PREC.get()))

    __radd__ = __add__

    def __sub__(self, other: Real) -> "Interval":
        o = Interval.coerce(other)
        return Interval._from_raw(libmpi.mpi_sub((self._a, self._b), (o._a, o._b), _PREC.get()))

    def __rsub__(self, other: Real) -> "Interval":
        return Interval.coerce(other) - self

    def __mul__(self, other: Real) -> "Interval":
        o = Interval.coerce(other)
        return Interval._from_raw(libmpi.mpi_mul((self._a, self._b), (o._a, o._b), _PREC.get()))

    __rmul__ = __mul__

    def __truediv__(self, other: Real) -> "Interval":
        o = Interval.coerce(other)
        return Interval._from_raw(libmpi.mpi_div((self._a, self._b), (o._a, o._b), _PREC.get()))

    def __rtruediv__(self, other: Real) -> "Interval":
        return Interval.coerce(other) / self

    def __neg__(self) -> "Interval":
        return Interval._from_raw((mpf_neg(self._b), mpf_neg(self._a)))

    def __pos__(self) -> "Interval":
        return self

    def __abs__(self) -> "Interval":
        return Interval._from_raw(libmpi.mpi_abs((self._a, self._b)))

    def square(self) -> "Interval":
        return Interval._from_raw(libmpi.mpi_square((self._a, self._b), _PREC.get()))

    def __pow__(self, n) -> "Interval":
        prec = _PREC.get()
        if isinstance(n, int):
            return Interval._from_raw(libmpi.mpi_pow_int((self._a, self._b), n, prec))
        exponent = Interval.coerce(n)
        if mpf_le(self._a, fzero):
            raise ValueError("non-integer power requires a positive base")
        return (exponent * self.log()).exp()

    def __rpow__(self, base) -> "Interval":
        return Interval.coerce(base) ** self

    # -- elementary functions --------------------------------------------
    def exp(self) -> "Interval":
        prec = _PREC.get()
        return Interval._from_raw(_pad(libmpi.mpi_exp((self._a, self._b), prec + 10), prec))

    def log(self) -> "Interval":
        prec = _PREC.get()
        if not mpf_gt(self._a, fzero):
            raise ValueError("log of an interval that is not strictly positive")
        return Interval._from_raw(_pad(libmpi.mpi_log((self._a, self._b), prec + 10), prec))

    def sqrt(self) -> "Interval":
        prec = _PREC.get()
        if mpf_lt(self._a, fzero):
            raise ValueError("sqrt of an interval with negative part")
        a, b = libmpi.mpi_sqrt((self._a, self._b), prec)
        return Interval._from_raw((a, b))

    def cos_sin(self) -> tuple["Interval", "Interval"]:
        prec = _PREC.get()
        c, s = libmpi.mpi_cos_sin((self._a, self._b), prec + 10)
        return Interval._from_raw(_clip_unit(_pad(c, prec))), Interval._from_raw(_clip_unit(_pad(s, prec)))

    def cos(self) -> "Interval":
        return self.cos_sin()[0]

    def sin(self) -> "Interval":
        return self.cos_sin()[1]

    def atan(self) -> "Interval":
        prec = _PREC.get()
        return Interval._from_raw(_pad(libmpi.mpi_atan((self._a, self._b), prec + 10), prec))

    # -- presentation ----------------------------------------------------
    def to_fraction_bounds(self) -> tuple[Fraction, Fraction]:
        if not self.is_finite():
            raise ValueError("infinite endpoint has no rational value")
        return _raw_to_fraction(self._a), _raw_to_fraction(self._b)

    def to_dict(self, digits: int | None = None) -> dict[str, str]:
        """Directed decimal strings: ``lo`` rounded down, ``hi`` rounded up."""
        if digits is None:
            digits = decimal_digits(_PREC.get())
        return {
            "lo": _raw_to_decimal_str(self._a, digits, ROUND_FLOOR),
            "hi": _raw_to_decimal_str(self._b, digits, ROUND_CEILING),
        }

    def __repr__(self) -> str:
        d = self.to_dict(12)
        return f"Interval[{d['lo']}, {d['hi']}]"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self._a == other._a and self._b == other._b

    def __hash__(self) -> int:
        return hash((self._a, self._b))


def _clip_unit(pair):
    a, b = pair
    mone = mpf_neg(fone)
    if mpf_lt(a, mone):
        a = mone
    if mpf_gt(b, fone):
        b = fone
    return a, b


def decimal_digits(bits: int) -> int:
    """Number of decimal digits used when serialising a ``bits``-bit endpoint."""
    return int(math.ceil(bits * math.log10(2))) + 2


def iv(x: Real, y: Real | None = None) -> Interval:
    return Interval(x, y)


def decide(lhs: Interval, rhs: Interval, strict: bool = True) -> str:
    """Verdict for the claim ``lhs < rhs`` (or ``<=`` when not strict)."""
    if strict:
        if lhs.certainly_lt(rhs):
            return "verified"
        if lhs.certainly_ge(rhs):
            return "failed"
    else:
        if lhs.certainly_le(rhs):
            return "verified"
        if lhs.certainly_gt(rhs):
            return "failed"
    return "inconclusive"


class ComplexInterval:
    """Rectangular complex enclosure ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Real, im: Real = 0):
        self.re = Interval.coerce(re)
        self.im = Interval.coerce(im)

    @classmethod
    def coerce(cls, z) -> "ComplexInterval":
        if isinstance(z, ComplexInterval):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag)
        return cls(z, 0)

    @classmethod
    def disk_box(cls, radius: Interval | Real) -> "ComplexInterval":
        """Box containing the closed disk of the given radius about 0."""
        r = Interval.coerce(radius)
        m = mpmath.mpf(r._b)
        box = Interval(-m, m)
        return cls(box, box)

    def __add__(self, other) -> "ComplexInterval":
        o = ComplexInterval.coerce(other) if not isinstance(other, Interval) else ComplexInterval(other)
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "ComplexInterval":
        o = ComplexInterval.coerce(other) if not isinstance(other, Interval) else ComplexInterval(other)
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "ComplexInterval":
        return ComplexInterval.coerce(other) - self

    def __neg__(self) -> "ComplexInterval":
        return ComplexInterval(-self.re, -self.im)

    def __mul__(self, other) -> "ComplexInterval":
        if isinstance(other, (Interval, int, Fraction, float, str)) and not isinstance(other, complex):
            r = Interval.coerce(other)
            return ComplexInterval(self.re * r, self.im * r)
        o = ComplexInterval.coerce(other)
        return ComplexInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ComplexInterval":
        if isinstance(other, (Interval, int, Fraction, float, str)) and not isinstance(other, complex):
            r = Interval.coerce(other)
            return ComplexInterval(self.re / r, self.im / r)
        o = ComplexInterval.coerce(other)
        den = o.re.square() + o.im.square()
        re = (self.re * o.re + self.im * o.im) / den
        im = (self.im * o.re - self.re * o.im) / den
        return ComplexInterval(re, im)

    def __rtruediv__(self, other) -> "ComplexInterval":
        return ComplexInterval.coerce(other) / self

    def conj(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def abs_sq(self) -> Interval:
        return self.re.square() + self.im.square()

    def __abs__(self) -> Interval:
        return self.abs_sq().sqrt()

    def exp(self) -> "ComplexInterval":
        r = self.re.exp()
        c, s = self.im.cos_sin()
        return ComplexInterval(r * c, r * s)

    def contains(self, z) -> bool:
        if isinstance(z, (complex, float, int)):
            z = complex(z)
            return self.re.contains(z.real) and self.im.contains(z.imag)
        o = ComplexInterval.coerce(z)
        return self.re.contains(o.re) and self.im.contains(o.im)

    def overlaps(self, other) -> bool:
        o = ComplexInterval.coerce(other)
        return self.re.overlaps(o.re) and self.im.overlaps(o.im)

    def contains_point(self, re: Real, im: Real = 0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def mid(self) -> complex:
        return complex(float(self.re), float(self.im))

    def rad(self) -> mpmath.mpf:
        """Upper bound on the distance from the midpoint to any point of the box."""
        return mpmath.sqrt(self.re.rad() ** 2 + self.im.rad() ** 2)

    def to_dict(self, digits: int | None = None) -> dict:
        return {"re": self.re.to_dict(digits), "im": self.im.to_dict(digits)}

    def __repr__(self) -> str:
        return f"ComplexInterval({self.re!r}, {self.im!r})"


def expi_fraction(angle: Fraction) -> ComplexInterval:
    """Enclosure of exp(2*pi*i*angle) for a rational angle."""
    angle = angle % 1
    if angle == 0:
        return ComplexInterval(1, 0)
    if angle == Fraction(1, 2):
        return ComplexInterval(-1, 0)
    if angle == Fraction(1, 4):
        return ComplexInterval(0, 1)
    if angle == Fraction(3, 4):
        return ComplexInterval(0, -1)
    c, s = (Interval.pi() * 2 * angle).cos_sin()
    return ComplexInterval(c, s)


def real_power(log_base: Interval, s: ComplexInterval) -> ComplexInterval:
    """``b**(-s)`` given an enclosure of ``log b`` (b > 0)."""
    mag = (-(s.re * log_base)).exp()
    c, sn = (s.im * log_base).cos_sin()
    return ComplexInterval(mag * c, -(mag * sn))


__all__ = [
    "ComplexInterval",
    "DEFAULT_PRECISION",
    "Interval",
    "decide",
    "decimal_digits",
    "expi_fraction",
    "get_precision",
    "iv",
    "precision",
    "real_power",
]

