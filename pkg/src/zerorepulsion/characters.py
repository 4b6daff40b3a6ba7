"""Dirichlet characters modulo q, stored as exponent vectors on unit-group generators."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

MAX_INPUT = 2**63 - 1
DEFAULT_ENUMERATION_CAP = 200_000
_TABLE_LIMIT = 1 << 20

# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class EnumerationOverflow(ValueError):
    """Raised when phi(q) exceeds the enumeration cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        y = rng.randrange(0, n)
        m, g, r, q = 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    _split(n, out)
    return tuple(sorted(out.items()))


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as a sorted list of ``(p, e)`` pairs."""
    if not isinstance(n, int) or n < 1 or n > MAX_INPUT:
        raise ValueError(f"factorize expects 1 <= n <= 2**63-1, got {n!r}")
    return list(_factor_cached(n))


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r -= r // p
    return r


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if a == 0 and n == 0:
        raise ValueError("kronecker(0, 0) is undefined")
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n >= 1
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# -- discrete logarithms ----------------------------------------------------

def _bsgs(g: int, h: int, order: int, mod: int) -> int:
    m = math.isqrt(order) + 1
    table = {}
    e = 1
    for j in range(m):
        table.setdefault(e, j)
        e = e * g % mod
    factor = pow(g, -m, mod)
    gamma = h
    for i in range(m):
        if gamma in table:
            return (i * m + table[gamma]) % order
        gamma = gamma * factor % mod
    raise ArithmeticError("discrete log does not exist")


def _dlog(g: int, h: int, order: int, mod: int) -> int:
    """Pohlig-Hellman: x with g**x = h (mod mod), g of the given order."""
    residues, moduli = [], []
    for p, e in factorize(order) if order > 1 else []:
        pe = p**e
        gp = pow(g, order // pe, mod)
        hp = pow(h, order // pe, mod)
        gamma = pow(gp, p ** (e - 1), mod)
        x = 0
        for k in range(e):
            hk = pow(pow(gp, -x, mod) * hp % mod, p ** (e - 1 - k), mod)
            dk = _bsgs(gamma, hk, p, mod)
            x += dk * p**k
        residues.append(x)
        moduli.append(pe)
    return _crt(residues, moduli) if moduli else 0


def _crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = (r - x) * pow(m, -1, mi) % mi
        x += m * t
        m *= mi
    return x % m


def _primitive_root_prime_power(p: int, e: int) -> int:
    pm1 = [r for r, _ in factorize(p - 1)] if p > 2 else []
    g = 2 if p > 2 else 1
    while True:
        if all(pow(g, (p - 1) // r, p) != 1 for r in pm1):
            break
        g += 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    modulus: int   # prime power p**e
    gen: int       # generator of the cyclic factor, as a residue mod p**e
    order: int
    lift: int      # residue mod q: gen mod p**e, 1 mod the cofactor


class UnitGroup:
    """Generator basis of (Z/qZ)^* built prime power by prime power."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("modulus must be positive")
        self.q = q
        comps: list[_Component] = []
        for p, e in factorize(q):
            pe = p**e
            cof = q // pe

            def lift(r: int, pe: int = pe, cof: int = cof) -> int:
                return _crt([r % pe, 1], [pe, cof]) if cof > 1 else r % pe

            if p == 2:
                if e == 2:
                    comps.append(_Component(4, 3, 2, lift(3)))
                elif e >= 3:
                    comps.append(_Component(pe, pe - 1, 2, lift(pe - 1)))
                    comps.append(_Component(pe, 5, 2 ** (e - 2), lift(5)))
            else:
                g = _primitive_root_prime_power(p, e)
                comps.append(_Component(pe, g, pe - pe // p, lift(g)))
        self.components = tuple(comps)
        self.orders = tuple(c.order for c in comps)
        self.generators = tuple(c.lift for c in comps)
        self.exponent = math.lcm(*self.orders) if self.orders else 1
        self.size = math.prod(self.orders)
        self._tables: dict[int, list[int]] = {}

    def _table(self, c: _Component) -> list[int] | None:
        """Residue -> discrete log table for small cyclic components."""
        if c.modulus > _TABLE_LIMIT:
            return None
        t = self._tables.get(c.modulus)
        if t is None:
            t = [-1] * c.modulus
            x = 1
            for k in range(c.order):
                t[x] = k
                x = x * c.gen % c.modulus
            self._tables[c.modulus] = t
        return t

    def log(self, n: int) -> tuple[int, ...] | None:
        """Coordinates of n on the generators, or None when gcd(n, q) > 1."""
        if math.gcd(n, self.q) != 1:
            return None
        out = []
        comps = self.components
        i = 0
        while i < len(comps):
            c = comps[i]
            r = n % c.modulus
            if c.modulus >= 8 and c.modulus % 2 == 0:
                # two-generator convention: r = (-1)**a * 5**b
                a = 0 if r % 4 == 1 else 1
                r5 = r if a == 0 else (-r) % c.modulus
                b = _dlog(5, r5, comps[i + 1].order, c.modulus)
                out.extend((a, b))
                i += 2
                continue
            table = self._table(c)
            out.append(table[r] if table is not None else _dlog(c.gen, r, c.order, c.modulus))
            i += 1
        return tuple(out)


@lru_cache(maxsize=4096)
def unit_group(q: int) -> UnitGroup:
    return UnitGroup(q)


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """exp(2*pi*i*num/den) with 0 <= num < den and gcd(num, den) = 1."""

    num: int
    den: int

    @classmethod
    def from_angle(cls, angle: Fraction) -> "RootOfUnity":
        angle %= 1
        return cls(angle.numerator, angle.denominator)

    @property
    def angle(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity.from_angle(self.angle + other.angle)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity.from_angle(-self.angle)

    def is_real(self) -> bool:
        return self.den <= 2

    def real_value(self) -> int:
        if not self.is_real():
            raise ValueError("value is not real")
        return 1 if self.num == 0 else -1

    def __complex__(self) -> complex:
        if self.den == 1:
            return 1 + 0j
        if self.den == 2:
            return -1 + 0j
        if self.den == 4:
            return 1j if self.num == 1 else -1j
        t = 2 * math.pi * self.num / self.den
        return complex(math.cos(t), math.sin(t))


ONE = RootOfUnity(0, 1)


class DirichletCharacter:
    """A character mod q; ``exponents[i]`` is the value index at generator i."""

    __slots__ = ("q", "exponents", "_group", "_order", "_conductor")

    def __init__(self, q: int, exponents: Sequence[int] | None = None):
        group = unit_group(q)
        if exponents is None:
            exponents = (0,) * len(group.orders)
        if len(exponents) != len(group.orders):
            raise ValueError(f"modulus {q} needs {len(group.orders)} exponents")
        self.q = q
        self.exponents = tuple(int(a) % o for a, o in zip(exponents, group.orders))
        self._group = group
        self._order: int | None = None
        self._conductor: int | None = None

    # -- identity ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, DirichletCharacter) and self.q == other.q and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.q, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.q}, exponents={self.exponents})"

    @property
    def modulus(self) -> int:
        return self.q

    @property
    def group(self) -> UnitGroup:
        return self._group

    # -- evaluation ----------------------------------------------------------
    def angle(self, n: int) -> Fraction | None:
        logs = self._group.log(n)
        if logs is None:
            return None
        return sum((Fraction(a * l, o) for a, l, o in zip(self.exponents, logs, self._group.orders)), Fraction(0)) % 1

    def __call__(self, n: int) -> RootOfUnity | None:
        """Exact value: a RootOfUnity, or None for the value 0."""
        ang = self.angle(n)
        return None if ang is None else RootOfUnity.from_angle(ang)

    def index(self, n: int, modulus: int | None = None) -> int | None:
        """k with chi(n) = exp(2*pi*i*k/modulus); modulus defaults to the group exponent."""
        ang = self.angle(n)
        if ang is None:
            return None
        m = modulus or self._group.exponent
        k = ang * m
        if k.denominator != 1:
            raise ValueError("modulus is not a multiple of the value's order")
        return int(k)

    def index_table(self) -> list[int]:
        """Indices k (chi(n) = e(k/exponent)) for n = 0..q-1, with -1 at non-units."""
        m = self._group.exponent
        scale = [a * (m // o) for a, o in zip(self.exponents, self._group.orders)]
        out = []
        for n in range(self.q):
            logs = self._group.log(n)
            out.append(-1 if logs is None else sum(s * l for s, l in zip(scale, logs)) % m)
        return out

    def real_value(self, n: int) -> int:
        """Value in {-1, 0, 1} for a real character."""
        if not self.is_real():
            raise ValueError("character is not real")
        v = self(n)
        return 0 if v is None else v.real_value()

    def complex_value(self, n: int) -> complex:
        v = self(n)
        return 0j if v is None else complex(v)

    # -- structure -----------------------------------------------------------
    @property
    def order(self) -> int:
        if self._order is None:
            self._order = math.lcm(1, *(o // math.gcd(a, o) for a, o in zip(self.exponents, self._group.orders)))
        return self._order

    def is_principal(self) -> bool:
        return all(a == 0 for a in self.exponents)

    def is_real(self) -> bool:
        return 2 % self.order == 0

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.q != self.q:
            raise ValueError("characters have different moduli")
        return DirichletCharacter(self.q, [a + b for a, b in zip(self.exponents, other.exponents)])

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.q, [-a for a in self.exponents])

    @property
    def conductor(self) -> int:
        if self._conductor is None:
            self._conductor = self._compute_conductor()
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor == self.q

    def _compute_conductor(self) -> int:
        f = 1
        comps = self._group.components
        i = 0
        while i < len(comps):
            c = comps[i]
            if c.modulus % 2 == 0:
                if c.modulus == 4:
                    f *= 4 if self.exponents[i] else 1
                    i += 1
                    continue
                a, b = self.exponents[i], self.exponents[i + 1]
                o5 = comps[i + 1].order
                ob = o5 // math.gcd(b, o5)
                if ob > 1:
                    f *= 4 * ob
                elif a:
                    f *= 4
                i += 2
                continue
            a = self.exponents[i]
            o = c.order // math.gcd(a, c.order)
            if o > 1:
                p = factorize(c.modulus)[0][0]
                k = 0
                while o % p == 0:
                    o //= p
                    k += 1
                f *= p ** (k + 1)
            i += 1
        return f

    def restrict_to(self, m: int) -> "DirichletCharacter":
        """The character mod m (m | q) inducing self; requires conductor | m."""
        if self.q % m or m % self.conductor:
            raise ValueError(f"{self!r} is not induced from modulus {m}")
        group = unit_group(m)
        exps = []
        for gen, o in zip(group.generators, group.orders):
            n = gen
            while math.gcd(n, self.q) != 1:
                n += m
            ang = self.angle(n)
            exps.append(int(ang * o))
        return DirichletCharacter(m, exps)

    def primitive_inducing(self) -> "DirichletCharacter":
        return self.restrict_to(self.conductor)

    def induce_to(self, q: int) -> "DirichletCharacter":
        """The character mod q (a multiple of self.q) induced by self."""
        if q % self.q:
            raise ValueError("target modulus must be a multiple of the current one")
        group = unit_group(q)
        exps = []
        for gen, o in zip(group.generators, group.orders):
            ang = self.angle(gen)
            exps.append(int(ang * o))
        return DirichletCharacter(q, exps)


def principal_character(q: int) -> DirichletCharacter:
    return DirichletCharacter(q)


def enumerate_characters(q: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, principal first."""
    group = unit_group(q)
    if group.size > cap:
        raise EnumerationOverflow(f"phi({q}) = {group.size} exceeds the enumeration cap {cap}")
    return [DirichletCharacter(q, e) for e in product(*(range(o) for o in group.orders))]


def iter_real_exponents(q: int) -> Iterator[tuple[int, ...]]:
    group = unit_group(q)
    choices = [(0, o // 2) if o % 2 == 0 else (0,) for o in group.orders]
    return product(*choices)


def real_quadratic_characters(q: int) -> list[DirichletCharacter]:
    """Characters mod q of order exactly 2 (no enumeration of the full group)."""
    return [DirichletCharacter(q, e) for e in iter_real_exponents(q) if any(e)]


def character_from_kronecker(d: int, q: int) -> DirichletCharacter:
    """The character n -> kronecker(d, n) on units mod q; it must be periodic mod q."""
    group = unit_group(q)
    exps = []
    for gen, o in zip(group.generators, group.orders):
        k = kronecker(d, gen)
        exps.append(0 if k == 1 else o // 2)
    chi = DirichletCharacter(q, exps)
    for n in range(1, min(q, 400) + 1):
        if math.gcd(n, q) == 1 and chi.real_value(n) != kronecker(d, n):
            raise ValueError(f"kronecker({d}, .) is not a character mod {q}")
    return chi


__all__ = [
    "DirichletCharacter",
    "EnumerationOverflow",
    "ONE",
    "RootOfUnity",
    "UnitGroup",
    "character_from_kronecker",
    "enumerate_characters",
    "euler_phi",
    "factorize",
    "is_prime",
    "kronecker",
    "principal_character",
    "real_quadratic_characters",
    "unit_group",
]
