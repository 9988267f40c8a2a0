"""Small integer helpers: factoring, prime-power tests and exact logarithms."""

from __future__ import annotations

from functools import lru_cache

from sympy import factorint, isprime

from .errors import NotPrimePower


@lru_cache(maxsize=4096)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Sorted ``((p, e), ...)`` with ``n = prod p**e``; ``factor(1) == ()``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return tuple(sorted(factorint(n).items()))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` if ``q == p**e`` with ``e >= 1``, else ``None``."""
    if q < 2:
        return None
    f = factor(q)
    if len(f) != 1:
        return None
    return f[0]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def exact_log(value: int, base: int) -> int:
    """``k`` with ``base**k == value``; raise NotPrimePower when inexact."""
    if base < 2 or value < 1:
        raise NotPrimePower(f"{value} is not a power of {base}")
    k = 0
    while value % base == 0:
        value //= base
        k += 1
    if value != 1:
        raise NotPrimePower(f"not an exact power of {base}")
    return k


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
