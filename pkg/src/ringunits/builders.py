"""Constructors for the concrete ring families, compiled to structure constants.

Every family is an algebra over a Galois ring ``R = (Z/p^m)[t]/(f)`` with
extra generators ``X_1, X_2, ...``; the shared compiler :func:`_compile` turns
the rule for multiplying generators into a :class:`~ringunits.ring.FiniteRing`.

>>> find_irreducible(2, 2)
[1, 1, 1]
>>> r = galois_ring(3, 2, 2)
>>> r.order
81
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .arith import is_prime, prime_power
from .errors import (
    A0TooSmall,
    BuilderError,
    ExponentTooLarge,
    PartitionPrimeMismatch,
    PIsTwo,
    PTooLargeForDeskScale,
    TooLarge,
)
from .groups import TRIVIAL, AbelianGroupType, canonical_type, cyclic, group_product
from .ring import FiniteRing, direct_product, make_ring

DEFAULT_CAP = 1 << 20

FAMILIES = ("galois", "odd", "two", "example-p", "example-2", "zn", "truncated", "product")


# -- polynomials over F_p (coefficient lists, lowest degree first) ----------


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by the monic polynomial ``b`` over F_p."""
    a = [c % p for c in a]
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        coef = a[-1]
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic_polys(p: int, degree: int):
    """Monic polynomials of the given degree in increasing integer-code order."""
    for code in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree ``1 .. deg(f)//2``."""
    f = [c % p for c in f]
    n = len(f) - 1
    if n < 1:
        return False
    for k in range(1, n // 2 + 1):
        for g in _monic_polys(p, k):
            if not _poly_mod(f, g, p):
                return False
    return True


def find_irreducible(p: int, lam: int) -> list[int]:
    """Smallest monic irreducible polynomial of degree ``lam`` over F_p.

    Polynomials are compared by the integer ``sum c_i p^i`` of their
    non-leading coefficients, i.e. lexicographically from the top degree down.
    """
    if not is_prime(p) or lam < 1:
        raise BuilderError(f"need a prime p and lam >= 1, got p={p}, lam={lam}")
    for f in _monic_polys(p, lam):
        if is_irreducible_mod_p(f, p):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def irreducible_polynomials(p: int, lam: int) -> list[list[int]]:
    return [f for f in _monic_polys(p, lam) if is_irreducible_mod_p(f, p)]


# -- the compiler -------------------------------------------------------------


def _t_powers(f: Sequence[int], modulus: int, upto: int) -> np.ndarray:
    """Rows ``t^0 .. t^upto`` reduced modulo ``(f, modulus)`` as length-lam vectors."""
    lam = len(f) - 1
    rows = np.zeros((upto + 1, lam), dtype=np.int64)
    cur = np.zeros(lam, dtype=np.int64)
    cur[0] = 1
    tail = np.array(f[:-1], dtype=np.int64)
    for s in range(upto + 1):
        rows[s] = cur
        top = cur[-1]
        cur = np.concatenate([[0], cur[:-1]])
        cur = (cur - top * tail) % modulus
    return rows % modulus


class _Coefficients:
    """Arithmetic in ``R = (Z/modulus)[t]/(f)`` on coefficient vectors."""

    def __init__(self, f: Sequence[int], modulus: int):
        self.lam = len(f) - 1
        self.modulus = modulus
        self.tp = _t_powers(f, modulus, 2 * self.lam)

    def one(self) -> np.ndarray:
        v = np.zeros(self.lam, dtype=np.int64)
        v[0] = 1
        return v

    def scalar(self, c: int) -> np.ndarray:
        return (c * self.one()) % self.modulus

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros(self.lam, dtype=np.int64)
        for i in range(self.lam):
            if a[i]:
                for j in range(self.lam):
                    if b[j]:
                        out = (out + a[i] * b[j] * self.tp[i + j]) % self.modulus
        return out

    def t(self, j: int) -> np.ndarray:
        return self.tp[j].copy()


def _compile(R: _Coefficients, gen_orders: Sequence[int],
             gen_mul: Callable[[int, int], dict[int, np.ndarray]],
             gen_labels: Sequence[str]) -> FiniteRing:
    """Ring with R-module basis ``X_0 = 1, X_1, ...`` where ``X_s`` has additive order ``gen_orders[s]``.

    The ring basis is ``t^j X_s`` (index ``s*lam + j``); ``gen_mul(a, b)`` gives
    ``X_a X_b`` as ``{s: r_s}`` with ``r_s`` in R.
    """
    lam = R.lam
    S = len(gen_orders)
    d = S * lam
    orders = [gen_orders[s] for s in range(S) for _ in range(lam)]
    c = np.zeros((d, d, d), dtype=np.int64)
    for a, b in itertools.product(range(S), repeat=2):
        rule = gen_mul(a, b)
        for j, l in itertools.product(range(lam), repeat=2):
            tt = R.mul(R.t(j), R.t(l))
            row = c[a * lam + j, b * lam + l]
            for s, r_s in rule.items():
                coeff = R.mul(tt, np.asarray(r_s) % R.modulus)
                row[s * lam:(s + 1) * lam] = coeff % gen_orders[s]
    t_labels = ["1"] + [("t" if j == 1 else f"t^{j}") for j in range(1, lam)]
    labels = []
    for s in range(S):
        for j in range(lam):
            if s == 0:
                labels.append(t_labels[j])
            else:
                labels.append(gen_labels[s] if j == 0 else f"{t_labels[j]}*{gen_labels[s]}")
    return make_ring(orders, c, labels)


def _check_cap(size: int, cap: int | None, exc=TooLarge) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if size > cap:
        raise exc(f"ring would have {size} elements, above the cap {cap}")


# -- families ---------------------------------------------------------------


@dataclass(frozen=True)
class PGroupPartition:
    """``prod_i C_{p^{a_i}}`` with ``a_0 >= a_1 >= ... >= 1``; empty means trivial."""

    p: int
    exps: tuple = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise BuilderError(f"{self.p} is not prime")
        exps = tuple(int(a) for a in self.exps)
        if any(a < 1 for a in exps) or list(exps) != sorted(exps, reverse=True):
            raise BuilderError(f"partition must be descending with entries >= 1, got {exps}")
        object.__setattr__(self, "exps", exps)

    @property
    def group(self) -> AbelianGroupType:
        return AbelianGroupType({self.p: self.exps})

    @property
    def exponent_exponent(self) -> int:
        return self.exps[0] if self.exps else 0


def _as_partition(p: int, partition) -> PGroupPartition:
    if isinstance(partition, PGroupPartition):
        if partition.p != p:
            raise PartitionPrimeMismatch(f"partition is for p={partition.p}, ring for p={p}")
        return partition
    return PGroupPartition(p, tuple(sorted((int(a) for a in partition), reverse=True)))


def galois_ring(p: int, m: int, lam: int, f: Sequence[int] | None = None,
                cap: int | None = None) -> FiniteRing:
    """``GR(p^m, lam) = (Z/p^m)[t]/(f)``; ``f`` defaults to :func:`find_irreducible`."""
    if not is_prime(p) or m < 1 or lam < 1:
        raise BuilderError(f"invalid Galois ring parameters p={p}, m={m}, lam={lam}")
    _check_cap(p ** (m * lam), cap)
    if f is None:
        f = find_irreducible(p, lam)
    elif len(f) != lam + 1 or f[-1] != 1 or not is_irreducible_mod_p(f, p):
        raise BuilderError(f"{list(f)} is not monic of degree {lam} and irreducible mod {p}")
    R = _Coefficients(f, p**m)
    return _compile(R, [p**m], lambda a, b: {0: R.one()}, ["1"])


def _family_over_galois(p: int, lam: int, base_exp: int, x_exps: Sequence[int],
                        cap: int | None) -> FiniteRing:
    """``GR(p^base_exp, lam)[x_1..x_r] / (p^{a_i} x_i, x_i x_j)``."""
    size = p ** (lam * (base_exp + sum(x_exps)))
    _check_cap(size, cap)
    R = _Coefficients(find_irreducible(p, lam), p**base_exp)
    gen_orders = [p**base_exp] + [p**a for a in x_exps]

    def gen_mul(a, b):
        if a == 0:
            return {b: R.one()}
        if b == 0:
            return {a: R.one()}
        return {}

    labels = ["1"] + [f"x{i}" for i in range(1, len(x_exps) + 1)]
    return _compile(R, gen_orders, gen_mul, labels)


def build_odd_family(p: int, lam: int, partition, cap: int | None = None) -> FiniteRing:
    """Local ring with unit group ``F_{p^lam}^* x P^lam`` for odd ``p``.

    The largest part ``a_0`` of ``P`` sets the base ``Z/p^{a_0+1}``; each further
    part ``a_i`` contributes a generator ``x_i`` with ``p^{a_i} x_i = 0``.
    """
    if p == 2:
        raise PIsTwo("the odd family needs p > 2; use build_two_family")
    P = _as_partition(p, partition)
    if lam < 1:
        raise BuilderError("lam must be >= 1")
    a0 = P.exponent_exponent
    return _family_over_galois(p, lam, a0 + 1, P.exps[1:], cap)


def build_two_family(lam: int, a0: int, partition, cap: int | None = None) -> FiniteRing:
    """Local ring of characteristic ``2^{a0+1}`` with one generator per part of ``P``."""
    P = _as_partition(2, partition)
    if lam < 1:
        raise BuilderError("lam must be >= 1")
    if a0 < 1:
        raise BuilderError(f"a0 must be >= 1, got {a0}")
    if a0 < P.exponent_exponent - 1:
        raise ExponentTooLarge(f"a0={a0} is below a-1 for exponent 2^{P.exponent_exponent}")
    return _family_over_galois(2, lam, a0 + 1, P.exps, cap)


def build_example_p(p: int, cap: int | None = None) -> FiniteRing:
    """``(Z/p^2)[t,x]/(f(t), p x^2, x^{p-1} + p)`` with ``deg f = 2``, for odd ``p``.

    As an R-module this is ``R 1 + R x + sum_{i=2}^{p-2} (R/pR) x^i``; the
    relation ``x^{p-1} = -p`` is folded into the products of powers of ``x``.
    """
    if p == 2 or not is_prime(p):
        raise BuilderError(f"example ring needs an odd prime, got {p}")
    _check_cap(p ** (2 * p + 2), cap, PTooLargeForDeskScale)
    R = _Coefficients(find_irreducible(p, 2), p**2)
    top = p - 2
    gen_orders = [p**2 if i <= 1 else p for i in range(top + 1)]

    def gen_mul(a, b):
        s = a + b
        if s <= top:
            return {s: R.one()}
        # x^s = x^{p-1} x^{s-p+1} = -p x^{s-p+1}
        return {s - (p - 1): R.scalar(-p)}

    labels = ["1"] + ["x" if i == 1 else f"x^{i}" for i in range(1, top + 1)]
    return _compile(R, gen_orders, gen_mul, labels)


def build_example_2(a0: int, cap: int | None = None) -> FiniteRing:
    """``(Z/2^{a0+1})[t,x]/(t^2+t+1, 4x, x^2+2x)`` for ``a0 >= 3``."""
    if a0 < 3:
        raise A0TooSmall(f"a0 must be >= 3, got {a0}")
    _check_cap(2 ** (2 * a0 + 6), cap)
    R = _Coefficients([1, 1, 1], 2 ** (a0 + 1))

    def gen_mul(a, b):
        if a == 0:
            return {b: R.one()}
        if b == 0:
            return {a: R.one()}
        return {1: R.scalar(-2)}

    return _compile(R, [2 ** (a0 + 1), 4], gen_mul, ["1", "x"])


def build_zn(n: int, cap: int | None = None) -> FiniteRing:
    if n < 2:
        raise BuilderError(f"Z/nZ needs n >= 2, got {n}")
    _check_cap(n, cap)
    return make_ring([n], [[[1]]], ["1"])


def build_truncated(p: int, lam: int, n: int, cap: int | None = None) -> FiniteRing:
    """``F_{p^lam}[x]/(x^n)``."""
    if not is_prime(p) or lam < 1 or n < 1:
        raise BuilderError(f"invalid truncated polynomial ring parameters ({p}, {lam}, {n})")
    _check_cap(p ** (lam * n), cap)
    R = _Coefficients(find_irreducible(p, lam), p)

    def gen_mul(a, b):
        return {a + b: R.one()} if a + b < n else {}

    labels = ["1"] + ["x" if i == 1 else f"x^{i}" for i in range(1, n)]
    return _compile(R, [p] * n, gen_mul, labels)


# -- recipes ------------------------------------------------------------------


@dataclass(frozen=True)
class BuildRecipe:
    """A ring family tag with its parameters; ``factors`` is used by ``product``."""

    family: str
    p: int | None = None
    m: int | None = None
    lam: int | None = None
    a0: int | None = None
    n: int | None = None
    partition: tuple = ()
    factors: tuple = field(default=())

    _REQUIRED = {
        "galois": ("p", "m", "lam"),
        "odd": ("p", "lam"),
        "two": ("lam", "a0"),
        "example-p": ("p",),
        "example-2": ("a0",),
        "zn": ("n",),
        "truncated": ("p", "lam", "n"),
        "product": (),
    }

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BuilderError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        missing = [k for k in self._REQUIRED[self.family] if getattr(self, k) is None]
        if missing:
            raise BuilderError(f"family {self.family} needs {', '.join(missing)}")
        object.__setattr__(self, "partition", tuple(int(a) for a in self.partition))
        object.__setattr__(self, "factors", tuple(self.factors))

    # convenience constructors
    @classmethod
    def galois(cls, p, m, lam):
        return cls("galois", p=p, m=m, lam=lam)

    @classmethod
    def field(cls, q):
        p, lam = prime_power(q)
        return cls.galois(p, 1, lam)

    @classmethod
    def odd(cls, p, lam, partition=()):
        return cls("odd", p=p, lam=lam, partition=tuple(partition))

    @classmethod
    def two(cls, lam, a0, partition=()):
        return cls("two", p=2, lam=lam, a0=a0, partition=tuple(partition))

    @classmethod
    def example_p(cls, p):
        return cls("example-p", p=p, lam=2)

    @classmethod
    def example_2(cls, a0):
        return cls("example-2", p=2, lam=2, a0=a0)

    @classmethod
    def zn(cls, n):
        return cls("zn", n=n)

    @classmethod
    def truncated(cls, p, lam, n):
        return cls("truncated", p=p, lam=lam, n=n)

    @classmethod
    def product(cls, factors):
        factors = tuple(factors)
        return factors[0] if len(factors) == 1 else cls("product", factors=factors)

    def to_dict(self) -> dict:
        if self.family == "product":
            return {"family": "product", "factors": [f.to_dict() for f in self.factors]}
        out = {"family": self.family}
        for key in ("p", "m", "lam", "a0", "n"):
            v = getattr(self, key)
            if v is not None:
                out["lambda" if key == "lam" else key] = v
        if self.family in ("odd", "two"):
            out["partition"] = list(self.partition)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> BuildRecipe:
        data = dict(data)
        family = data.pop("family")
        if family == "product":
            return cls("product", factors=tuple(cls.from_dict(f) for f in data["factors"]))
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        if "partition" in data:
            data["partition"] = tuple(data["partition"])
        return cls(family, **data)

    def __str__(self) -> str:
        if self.family == "product":
            return " | ".join(str(f) for f in self.factors)
        parts = [f"family={self.family}"]
        for key, v in self.to_dict().items():
            if key == "family":
                continue
            parts.append(f"{key}={','.join(map(str, v)) if isinstance(v, list) else v}")
        return " ".join(parts)


def parse_recipe(text: str) -> BuildRecipe:
    """Parse ``family=odd p=3 lambda=2 partition=1,1``; factors joined by ``|``."""
    chunks = [c.strip() for c in text.split("|")]
    if len(chunks) > 1:
        return BuildRecipe("product", factors=tuple(parse_recipe(c) for c in chunks))
    data: dict = {}
    for token in text.split():
        if "=" not in token:
            raise BuilderError(f"expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        if key == "family":
            data[key] = value
        elif key == "partition":
            data[key] = [int(v) for v in value.split(",") if v]
        else:
            data[key] = int(value)
    if "family" not in data:
        raise BuilderError("recipe needs family=...")
    if data["family"] in ("two", "example-2"):
        data.setdefault("p", 2)
    return BuildRecipe.from_dict(data)


def build_from_recipe(recipe: BuildRecipe, cap: int | None = None) -> FiniteRing:
    _check_cap(recipe_order(recipe), cap)
    fam = recipe.family
    if fam == "galois":
        return galois_ring(recipe.p, recipe.m, recipe.lam, cap=cap)
    if fam == "odd":
        return build_odd_family(recipe.p, recipe.lam, recipe.partition, cap=cap)
    if fam == "two":
        return build_two_family(recipe.lam, recipe.a0, recipe.partition, cap=cap)
    if fam == "example-p":
        return build_example_p(recipe.p, cap=cap)
    if fam == "example-2":
        return build_example_2(recipe.a0, cap=cap)
    if fam == "zn":
        return build_zn(recipe.n, cap=cap)
    if fam == "truncated":
        return build_truncated(recipe.p, recipe.lam, recipe.n, cap=cap)
    rings = [build_from_recipe(f, cap=cap) for f in recipe.factors]
    if not rings:
        raise BuilderError("empty product")
    out = rings[0]
    for r in rings[1:]:
        out = direct_product(out, r)
    return out


def recipe_order(recipe: BuildRecipe) -> int:
    """Cardinality of the ring a recipe builds, without building it."""
    fam = recipe.family
    if fam == "galois":
        return recipe.p ** (recipe.m * recipe.lam)
    if fam == "odd":
        part = recipe.partition
        a0 = part[0] if part else 0
        return recipe.p ** (recipe.lam * (a0 + 1 + sum(part[1:])))
    if fam == "two":
        return 2 ** (recipe.lam * (recipe.a0 + 1 + sum(recipe.partition)))
    if fam == "example-p":
        return recipe.p ** (2 * recipe.p + 2)
    if fam == "example-2":
        return 2 ** (2 * recipe.a0 + 6)
    if fam == "zn":
        return recipe.n
    if fam == "truncated":
        return recipe.p ** (recipe.lam * recipe.n)
    return math.prod(recipe_order(f) for f in recipe.factors)


# -- predicted unit groups ---------------------------------------------------------


def _power_of(g: AbelianGroupType, k: int) -> AbelianGroupType:
    return AbelianGroupType({p: list(e) * k for p, e in g.primary.items()})


def _one_plus_2R(lam: int, a0: int) -> AbelianGroupType:
    """Type of ``1 + 2R`` in ``GR(2^{a0+1}, lam)``."""
    if a0 == 0:
        return TRIVIAL
    if a0 == 1:
        return AbelianGroupType({2: [1] * lam})
    return canonical_type([2, 2 ** (a0 - 1)] + [2**a0] * (lam - 1))


def _zn_units(n: int) -> AbelianGroupType:
    from .arith import factor
    g = TRIVIAL
    for p, e in factor(n):
        if p == 2:
            if e == 2:
                g = g * cyclic(2)
            elif e >= 3:
                g = g * canonical_type([2, 2 ** (e - 2)])
        else:
            g = g * canonical_type([p - 1, p ** (e - 1)])
    return g


def _truncated_units(p: int, lam: int, n: int) -> AbelianGroupType:
    """``F_q[x]/(x^n)``: one factor ``(C_{p^e_j})^lam`` for each ``j < n`` prime to ``p``."""
    orders = [p**lam - 1]
    for j in range(1, n):
        if j % p == 0:
            continue
        e = 0
        while j * p**e < n:
            e += 1
        orders += [p**e] * lam
    return canonical_type(orders)


def predicted_unit_group(recipe: BuildRecipe) -> AbelianGroupType:
    """Unit group each family is proven to have, computed without building the ring."""
    fam = recipe.family
    p, lam = recipe.p, recipe.lam
    if fam == "galois":
        k = recipe.m - 1
        if p == 2:
            h = _one_plus_2R(lam, k)
        else:
            h = AbelianGroupType({p: [k] * lam} if k else {})
        return cyclic(p**lam - 1) * h
    if fam == "odd":
        P = AbelianGroupType({p: recipe.partition})
        return cyclic(p**lam - 1) * _power_of(P, lam)
    if fam == "two":
        P = AbelianGroupType({2: recipe.partition})
        return cyclic(2**lam - 1) * _one_plus_2R(lam, recipe.a0) * _power_of(P, lam)
    if fam == "example-p":
        return canonical_type([p**2 - 1, p**2] + [p] * (2 * p - 2))
    if fam == "example-2":
        a0 = recipe.a0
        return canonical_type([3, 2, 2, 2, 4, 2 ** (a0 - 1), 2**a0])
    if fam == "zn":
        return _zn_units(recipe.n)
    if fam == "truncated":
        return _truncated_units(p, lam, recipe.n)
    g = TRIVIAL
    for f in recipe.factors:
        g = group_product(g, predicted_unit_group(f))
    return g
