"""Finite abelian groups in primary form, and recognition of black-box groups.

A group type is stored as a map ``p -> [e_1 >= e_2 >= ...]`` meaning
``prod_i C_{p^e_i}``. Text form uses ``C<n>[^<k>]`` and ``F<q>*`` terms joined
by ``x`` or ``*``:

>>> g = parse_group("F9* x C3^4")
>>> g.primary
{2: (3,), 3: (1, 1, 1, 1)}
>>> format_group(g)
'C8 x C3^4'
>>> order(g), exponent(g)
(648, 24)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .arith import exact_log, factor, is_prime, prime_power
from .errors import (
    GroupSyntaxError,
    NotAbelianDetected,
    NotPrimePower,
    QNotPrimePower,
    ZeroOrder,
)

__all__ = [
    "AbelianGroupType",
    "BlackBoxGroup",
    "canonical_type",
    "cyclic",
    "parse_group",
    "format_group",
    "group_product",
    "order",
    "exponent",
    "p_part",
    "blackbox_structure",
    "field_unit_group",
    "materialize",
    "TRIVIAL",
]


class AbelianGroupType:
    """Canonical primary decomposition of a finite abelian group (immutable)."""

    __slots__ = ("_key",)

    def __init__(self, primary: Mapping[int, Iterable[int]] | None = None):
        items = []
        for p, exps in (primary or {}).items():
            p = int(p)
            exps = tuple(sorted((int(e) for e in exps), reverse=True))
            if not exps:
                continue
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if exps[-1] < 1:
                raise ValueError("partition entries must be >= 1")
            items.append((p, exps))
        object.__setattr__(self, "_key", tuple(sorted(items)))

    def __setattr__(self, name, value):
        raise AttributeError("AbelianGroupType is immutable")

    @property
    def primary(self) -> dict[int, tuple[int, ...]]:
        return dict(self._key)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._key)

    def partition(self, p: int) -> tuple[int, ...]:
        return dict(self._key).get(p, ())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbelianGroupType):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, other: AbelianGroupType) -> AbelianGroupType:
        return group_product(self, other)

    def __str__(self) -> str:
        return format_group(self)

    def __repr__(self) -> str:
        return f"AbelianGroupType({format_group(self)!r})"

    def __reduce__(self):
        return (AbelianGroupType, (self.primary,))

    @property
    def order(self) -> int:
        return order(self)

    @property
    def exponent(self) -> int:
        return exponent(self)

    def is_trivial(self) -> bool:
        return not self._key

    def cyclic_orders(self) -> list[int]:
        """Prime-power orders of the cyclic factors, in format order."""
        return [p**e for p, exps in self._key for e in exps]


TRIVIAL = AbelianGroupType()


def canonical_type(cyclic_orders: Iterable[int]) -> AbelianGroupType:
    """Primary type of ``prod C_n`` over the given cyclic orders."""
    parts: dict[int, list[int]] = {}
    for n in cyclic_orders:
        n = int(n)
        if n < 1:
            raise ZeroOrder(f"cyclic order must be positive, got {n}")
        for p, e in factor(n):
            parts.setdefault(p, []).append(e)
    return AbelianGroupType(parts)


def cyclic(n: int) -> AbelianGroupType:
    return canonical_type([n])


def group_product(g1: AbelianGroupType, g2: AbelianGroupType) -> AbelianGroupType:
    parts = {p: list(e) for p, e in g1.primary.items()}
    for p, exps in g2.primary.items():
        parts.setdefault(p, []).extend(exps)
    return AbelianGroupType(parts)


def order(g: AbelianGroupType) -> int:
    return math.prod(p ** sum(exps) for p, exps in g.primary.items())


def exponent(g: AbelianGroupType) -> int:
    return math.prod(p ** max(exps) for p, exps in g.primary.items())


def p_part(g: AbelianGroupType, p: int) -> AbelianGroupType:
    exps = g.partition(p)
    return AbelianGroupType({p: exps} if exps else {})


def field_unit_group(q: int) -> AbelianGroupType:
    """Type of the cyclic group ``F_q^*``."""
    if prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    return cyclic(q - 1)


# -- text form -------------------------------------------------------------

_TERM = re.compile(r"C(\d+)(?:\^(\d+))?|F(\d+)\*|1")


def parse_group(text: str) -> AbelianGroupType:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise GroupSyntaxError("empty group expression")
    orders: list[int] = []
    pos = 0
    while True:
        m = _TERM.match(s, pos)
        if not m:
            raise GroupSyntaxError(f"expected a term at position {pos} in {text!r}")
        if m.group(1) is not None:
            n = int(m.group(1))
            reps = int(m.group(2)) if m.group(2) is not None else 1
            if n < 1:
                raise ZeroOrder("C0 is not a finite cyclic group")
            orders.extend([n] * reps)
        elif m.group(3) is not None:
            q = int(m.group(3))
            if prime_power(q) is None:
                raise QNotPrimePower(f"F{q}*: {q} is not a prime power")
            orders.append(q - 1)
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] not in "x*":
            raise GroupSyntaxError(f"expected 'x' or '*' at position {pos} in {text!r}")
        pos += 1
    return canonical_type(orders)


def format_group(g: AbelianGroupType) -> str:
    terms = []
    for p, exps in g.primary.items():
        for e in sorted(set(exps), reverse=True):
            k = exps.count(e)
            terms.append(f"C{p**e}" + (f"^{k}" if k > 1 else ""))
    return " x ".join(terms) if terms else "1"


# -- black boxes ---------------------------------------------------------------


@dataclass(frozen=True)
class BlackBoxGroup:
    """A finite group given by its elements and a row-wise vectorized operation.

    ``elements`` has shape ``(n, w)``; ``op(a, b)`` multiplies arrays of rows
    (broadcasting a single row is allowed); ``identity`` has shape ``(w,)``.
    """

    elements: np.ndarray
    op: Callable[[np.ndarray, np.ndarray], np.ndarray]
    identity: np.ndarray

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def power(self, x: np.ndarray, e: int) -> np.ndarray:
        x = np.atleast_2d(x)
        result = np.broadcast_to(self.identity, x.shape).copy()
        base = x
        while e > 0:
            if e & 1:
                result = self.op(result, base)
            e >>= 1
            if e:
                base = self.op(base, base)
        return result

    def is_identity(self, x: np.ndarray) -> np.ndarray:
        return np.all(np.atleast_2d(x) == self.identity, axis=1)

    def check_abelian(self, sample: int | None = None, seed: int = 0) -> bool:
        """Spot-check commutativity on ``sample`` random pairs (all pairs if None)."""
        x = self.elements
        if sample is None:
            a = np.repeat(x, len(x), axis=0)
            b = np.tile(x, (len(x), 1))
        else:
            rng = np.random.default_rng(seed)
            a = x[rng.integers(0, len(x), sample)]
            b = x[rng.integers(0, len(x), sample)]
        return bool(np.array_equal(self.op(a, b), self.op(b, a)))

    def product(self, other: BlackBoxGroup) -> BlackBoxGroup:
        """Direct product (pairs of elements, componentwise operation)."""
        w = self.elements.shape[1]
        elems = np.concatenate([
            np.repeat(self.elements, len(other.elements), axis=0),
            np.tile(other.elements, (len(self.elements), 1)),
        ], axis=1)

        def op(a, b, f=self.op, g=other.op):
            a, b = np.atleast_2d(a), np.atleast_2d(b)
            return np.concatenate([f(a[:, :w], b[:, :w]), g(a[:, w:], b[:, w:])], axis=1)

        return BlackBoxGroup(elems, op, np.concatenate([self.identity, other.identity]))


def exponent_counts(G: BlackBoxGroup, p: int) -> list[int]:
    """``[c_0, c_1, ...]`` with ``c_j = #{x : x^(p^j) = 1}``, up to the Sylow order."""
    n = G.order
    sylow = p ** dict(factor(n)).get(p, 0)
    counts = [1]
    y = G.elements
    while counts[-1] < sylow:
        y = G.power(y, p)
        c = int(G.is_identity(y).sum())
        if c <= counts[-1]:
            raise NotAbelianDetected(
                f"count of elements of exponent {p}^{len(counts)} stalled at {c} below {sylow}")
        counts.append(c)
        if len(counts) > 64:
            raise NotAbelianDetected("exponent counting did not terminate")
    if counts[-1] != sylow:
        raise NotAbelianDetected(f"{counts[-1]} elements of {p}-power order, expected {sylow}")
    return counts


def blackbox_structure(G: BlackBoxGroup) -> AbelianGroupType:
    """Isomorphism type of a finite abelian black-box group by exponent counting.

    For each prime ``p`` dividing ``|G|``, the ratio ``c_j / c_{j-1}`` of the
    counts of elements killed by ``p^j`` and ``p^(j-1)`` is ``p`` raised to the
    number of cyclic factors of order at least ``p^j``.
    """
    n = G.order
    if n < 1:
        raise ZeroOrder("empty group")
    parts: dict[int, list[int]] = {}
    for p, _ in factor(n):
        counts = exponent_counts(G, p)
        at_least = []
        for j in range(1, len(counts)):
            ratio = counts[j] // counts[j - 1]
            if ratio * counts[j - 1] != counts[j]:
                raise NotAbelianDetected(f"c_{j}/c_{j-1} = {counts[j]}/{counts[j-1]} is not integral")
            try:
                at_least.append(exact_log(ratio, p))
            except NotPrimePower:
                raise NotAbelianDetected(f"c_{j}/c_{j-1} = {ratio} is not a power of {p}") from None
        exps = []
        for j, m in enumerate(at_least, start=1):
            nxt = at_least[j] if j < len(at_least) else 0
            if nxt > m:
                raise NotAbelianDetected("factor counts are not monotone")
            exps.extend([j] * (m - nxt))
        parts[p] = exps
    g = AbelianGroupType(parts)
    if order(g) != n:
        raise NotAbelianDetected(f"reconstructed order {order(g)} differs from {n}")
    return g


def materialize(g: AbelianGroupType) -> BlackBoxGroup:
    """Explicit ``prod C_{p^e}`` as integer vectors under componentwise addition."""
    moduli = np.array(g.cyclic_orders(), dtype=np.int64)
    if len(moduli) == 0:
        return BlackBoxGroup(np.zeros((1, 1), dtype=np.int64),
                             lambda a, b: np.zeros(np.broadcast_shapes(np.shape(a), np.shape(b)), dtype=np.int64),
                             np.zeros(1, dtype=np.int64))
    idx = np.arange(int(np.prod(moduli)), dtype=np.int64)
    elems = np.stack(np.unravel_index(idx, tuple(moduli)), axis=1).astype(np.int64)

    def op(a, b, mod=moduli):
        return np.mod(np.atleast_2d(a) + np.atleast_2d(b), mod)

    return BlackBoxGroup(elems, op, np.zeros(len(moduli), dtype=np.int64))
