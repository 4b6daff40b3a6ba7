"""The divisor function twisted by the exceptional character, and the sieve
functions g, h derived from it."""

from __future__ import annotations

from fractions import Fraction

from .characters import DirichletCharacter, factorize


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def omega(n: int) -> int:
    return len(factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def smallest_prime_factors(n: int) -> list[int]:
    """spf[k] for 0 <= k <= n (spf[0] = spf[1] = 0)."""
    spf = [0] * (n + 1)
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            for j in range(i * i, n + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    return spf


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


def mobius_table(n: int) -> list[int]:
    mu = [1] * (n + 1)
    mu[0] = 0
    for p in primes_up_to(n):
        for j in range(p, n + 1, p):
            mu[j] = -mu[j]
        for j in range(p * p, n + 1, p * p):
            mu[j] = 0
    return mu


class ExceptionalContext:
    """A modulus q together with a real character chi1 mod q.

    The memo dictionaries are per-instance; share an instance across threads
    only if you accept duplicated work (results are identical either way).
    """

    def __init__(self, q: int, chi1: DirichletCharacter):
        if chi1.q != q:
            raise ValueError(f"chi1 has modulus {chi1.q}, expected {q}")
        if not chi1.is_real():
            raise ValueError("chi1 must be a real character")
        self.q = q
        self.chi1 = chi1
        self.q_primes = frozenset(p for p, _ in factorize(q))
        self._chi1_table = [chi1.real_value(n) for n in range(q)]
        self._a: dict[int, int] = {}
        self._g: dict[int, Fraction] = {}
        self._h: dict[int, Fraction] = {}

    def chi1_value(self, n: int) -> int:
        return self._chi1_table[n % self.q]

    def __repr__(self) -> str:
        return f"ExceptionalContext(q={self.q}, chi1={self.chi1.exponents})"


def a_prime_power(ctx: ExceptionalContext, p: int, k: int) -> int:
    if k == 0:
        return 1
    c = ctx.chi1_value(p)
    if c == 0:
        return 1
    if c == 1:
        return k + 1
    return 1 if k % 2 == 0 else 0


def a(ctx: ExceptionalContext, n: int) -> int:
    """a(n) = sum over d | n of chi1(d)."""
    if n < 1:
        raise ValueError("a(n) needs n >= 1")
    v = ctx._a.get(n)
    if v is None:
        v = 1
        for p, k in factorize(n):
            v *= a_prime_power(ctx, p, k)
        ctx._a[n] = v
    return v


def a_divisor_sum(ctx: ExceptionalContext, n: int) -> int:
    return sum(ctx.chi1_value(d) for d in divisors(n))


def a_values(ctx: ExceptionalContext, n_max: int) -> list[int]:
    """[a(0)=0, a(1), ..., a(n_max)] by a smallest-prime-factor sieve."""
    spf = smallest_prime_factors(n_max)
    out = [0] * (n_max + 1)
    if n_max >= 1:
        out[1] = 1
    for n in range(2, n_max + 1):
        p = spf[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        out[n] = out[m] * a_prime_power(ctx, p, k)
    return out


def g_at_prime(ctx: ExceptionalContext, p: int) -> Fraction:
    c = ctx.chi1_value(p)
    if c == 0:
        return Fraction(p - 1)
    if c == 1:
        return Fraction((p - 1) ** 2, 2 * p - 1)
    return Fraction(p * p - 1)


def h_at_prime(ctx: ExceptionalContext, p: int) -> Fraction:
    return g_at_prime(ctx, p) + 1


def g_series_at_prime(ctx: ExceptionalContext, p: int, terms: int = 200) -> float:
    """Inverse of the truncated series sum_{k>=1} a(p^k) p^-k, in floating point."""
    s = sum(a_prime_power(ctx, p, k) * float(p) ** -k for k in range(1, terms + 1))
    return 1.0 / s


def h(ctx: ExceptionalContext, n: int) -> Fraction:
    v = ctx._h.get(n)
    if v is None:
        v = Fraction(1)
        for p, k in factorize(n):
            v *= h_at_prime(ctx, p) ** k
        ctx._h[n] = v
    return v


def g(ctx: ExceptionalContext, n: int) -> Fraction:
    v = ctx._g.get(n)
    if v is None:
        v = h(ctx, n)
        for p, _ in factorize(n):
            hp = h_at_prime(ctx, p)
            assert hp != 0
            v *= 1 - 1 / hp
        ctx._g[n] = v
    return v


__all__ = [
    "ExceptionalContext",
    "a",
    "a_divisor_sum",
    "a_prime_power",
    "a_values",
    "divisors",
    "g",
    "g_at_prime",
    "g_series_at_prime",
    "h",
    "h_at_prime",
    "is_squarefree",
    "mobius",
    "mobius_table",
    "omega",
    "primes_up_to",
    "smallest_prime_factors",
]
