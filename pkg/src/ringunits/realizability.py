"""Which finite abelian groups and which integers occur as unit groups of rings.

Every finite ring of positive characteristic is a product of local rings, and a
local ring with residue field ``F_q`` (``q = p^lam``) has unit group
``C_{q-1} x H`` where ``H`` is a ``p``-group of order ``q^k`` and exponent at
most ``p^k``. The searches below enumerate such decompositions. A factor that
violates one of those numeric conditions rules its decomposition out; a factor
that matches a family with a known construction contributes a witness; any
other factor leaves the verdict undecided.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product as cartesian

from sympy import primerange

from .arith import divisors, factor, is_prime, prime_power
from .builders import BuildRecipe, predicted_unit_group, recipe_order
from .errors import EvenOrder, HNotPGroup, OrderTooLarge
from .groups import (
    TRIVIAL,
    AbelianGroupType,
    canonical_type,
    cyclic,
    exponent,
    format_group,
    group_product,
    order,
    parse_group,
)

DEFAULT_ORDER_CAP = 1 << 20
F2 = BuildRecipe.field(2)


class Status(str, Enum):
    REALIZABLE = "Realizable"
    NOT_REALIZABLE = "NotRealizable"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class LocalFactor:
    """One local factor ``C_{p^lam - 1} x h`` of a decomposition."""

    p: int
    lam: int
    h: AbelianGroupType

    def to_dict(self) -> dict:
        return {"p": self.p, "lambda": self.lam, "h_type": format_group(self.h)}

    @classmethod
    def from_dict(cls, d: dict) -> LocalFactor:
        return cls(d["p"], d["lambda"], parse_group(d["h_type"]))

    @property
    def group(self) -> AbelianGroupType:
        return cyclic(self.p**self.lam - 1) * self.h


@dataclass(frozen=True)
class RealizabilityVerdict:
    status: Status
    witness: BuildRecipe | None = None
    reason_tag: str | None = None
    reason_text: str | None = None
    decomposition: tuple[LocalFactor, ...] | None = None

    @property
    def realizable(self) -> bool:
        return self.status is Status.REALIZABLE

    @property
    def definitive(self) -> bool:
        return self.status is not Status.UNKNOWN

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness": self.witness.to_dict() if self.witness else None,
            "reason": {"tag": self.reason_tag, "text": self.reason_text} if self.reason_tag else None,
            "decomposition": [f.to_dict() for f in self.decomposition] if self.decomposition is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> RealizabilityVerdict:
        reason = d.get("reason") or {}
        dec = d.get("decomposition")
        return cls(
            Status(d["status"]),
            BuildRecipe.from_dict(d["witness"]) if d.get("witness") else None,
            reason.get("tag"),
            reason.get("text"),
            tuple(LocalFactor.from_dict(f) for f in dec) if dec is not None else None,
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def __str__(self) -> str:
        if self.realizable:
            return f"{self.status.value}: {self.witness}"
        return f"{self.status.value}: {self.reason_text}"


def _realizable(witness: BuildRecipe, decomposition=None) -> RealizabilityVerdict:
    return RealizabilityVerdict(Status.REALIZABLE, witness, decomposition=decomposition)


def _not_realizable(tag: str, text: str) -> RealizabilityVerdict:
    return RealizabilityVerdict(Status.NOT_REALIZABLE, reason_tag=tag, reason_text=text)


# -- cardinalities -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CardinalityTerm:
    """``(p^lam - 1) p^(lam k)``: the unit count of ``GR(p^(k+1), lam)``."""

    p: int
    lam: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p) or self.lam < 1 or self.k < 0:
            raise ValueError(f"invalid term parameters {self}")

    @property
    def value(self) -> int:
        q = self.p**self.lam
        return (q - 1) * q**self.k

    @property
    def ring_order(self) -> int:
        return self.p ** (self.lam * (self.k + 1))

    @property
    def recipe(self) -> BuildRecipe:
        return BuildRecipe.galois(self.p, self.k + 1, self.lam)


def enumerate_terms(bound: int) -> dict[int, list[CardinalityTerm]]:
    """Every term value ``<= bound`` mapped to all ``(p, lam, k)`` producing it."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    terms: dict[int, list[CardinalityTerm]] = {}
    for p in primerange(2, bound + 2):
        q, lam = p, 1
        while q - 1 <= bound:
            k, v = 0, q - 1
            while v <= bound:
                terms.setdefault(v, []).append(CardinalityTerm(p, lam, k))
                k, v = k + 1, v * q
            q, lam = q * p, lam + 1
    for witnesses in terms.values():
        witnesses.sort(key=lambda t: (t.ring_order, t))
    return dict(sorted(terms.items()))


def ditor_realizable(n: int, char_primes: set[int] | frozenset[int] | None = None) -> RealizabilityVerdict:
    """Is ``n`` the number of units of a finite ring (with the given characteristic primes)?

    ``n`` must split as a product of term values; with ``char_primes`` every
    term must come from one of those primes and each prime must be used.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    allowed = None if char_primes is None else frozenset(char_primes)
    terms = enumerate_terms(n)
    options = [
        t for v in reversed(terms) if n % v == 0 for t in terms[v]
        if allowed is None or t.p in allowed
    ]

    @lru_cache(maxsize=None)
    def search(rest: int, uncovered: frozenset) -> tuple[CardinalityTerm, ...] | None:
        if rest == 1 and not uncovered:
            return ()
        for t in options:
            v = t.value
            if rest % v:
                continue
            if v == 1 and t.p not in uncovered:
                continue
            if v > 1 and allowed is None and t is not terms[v][0]:
                continue
            sub = search(rest // v, uncovered - {t.p})
            if sub is not None:
                return (t, *sub)
        return None

    chosen = search(n, allowed or frozenset())
    if chosen is None:
        where = "" if allowed is None else f" with characteristic primes {sorted(allowed)}"
        return _not_realizable("no-term-product", f"{n} is not a product of unit counts of Galois rings{where}")
    if not chosen:
        chosen = (CardinalityTerm(2, 1, 0),)
    return _realizable(BuildRecipe.product([t.recipe for t in chosen]))


def enumerate_cardinalities(limit: int) -> list[int]:
    """All unit counts ``<= limit`` of finite rings, ascending."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    values = [v for v in enumerate_terms(limit) if v > 1]
    ok = [False] * (limit + 1)
    ok[1] = True
    for n in range(2, limit + 1):
        ok[n] = any(n % v == 0 and ok[n // v] for v in values if v <= n)
    return [n for n in range(1, limit + 1) if ok[n]]


# -- cyclic groups ------------------------------------------------------------------


def _cyclic_items(d: int) -> list[tuple[str, int, BuildRecipe]]:
    """Ways ``d`` appears in the list of cyclic local unit groups, preferred first."""
    out = []
    pp = prime_power(d + 1)
    if pp:
        out.append(("a", pp[0], BuildRecipe.field(d + 1)))
    for p, e in factor(d):
        if p > 2 and d == (p - 1) * p**e:
            out.append(("b", p, BuildRecipe.zn(p ** (e + 1))))
    if d == 2:
        out.append(("c", 2, BuildRecipe.zn(4)))
    if d == 4:
        out.append(("d", 2, BuildRecipe.truncated(2, 1, 3)))
    return out


def cyclic_realizable(n: int, char_primes: set[int] | frozenset[int] | None = None) -> RealizabilityVerdict:
    """Is ``C_n`` a unit group? Searches coprime factorizations into list items.

    The items are ``p^lam - 1``, ``(p-1) p^k`` for odd ``p`` and ``k >= 1``,
    ``2`` and ``4``. With ``char_primes`` only items coming from those residue
    characteristics are used, and each listed prime must contribute a factor.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    allowed = None if char_primes is None else frozenset(char_primes)

    def search(rest: int, uncovered: frozenset) -> list[BuildRecipe] | None:
        if rest == 1:
            if not uncovered:
                return []
            return [F2] if uncovered == {2} else None
        (q, e), *others = factor(rest)
        head = q**e
        for mask in cartesian((0, 1), repeat=len(others)):
            d = head * math.prod(p**k for (p, k), bit in zip(others, mask) if bit)
            for _, p, recipe in _cyclic_items(d):
                if allowed is not None and p not in allowed:
                    continue
                sub = search(rest // d, uncovered - {p})
                if sub is not None:
                    return [recipe, *sub]
        return None

    found = search(n, allowed or frozenset())
    if found is None:
        return _not_realizable("no-coprime-factorization",
                               f"{n} is not a product of pairwise coprime cyclic unit-group orders")
    return _realizable(BuildRecipe.product(found or [F2]))


# -- reduced rings --------------------------------------------------------------------


def _components(g: AbelianGroupType) -> Counter:
    return Counter((p, e) for p, exps in g.primary.items() for e in exps)


def _type_of(components: Counter) -> AbelianGroupType:
    parts: dict[int, list[int]] = {}
    for (p, e), c in components.items():
        parts.setdefault(p, []).extend([e] * c)
    return AbelianGroupType(parts)


def field_product_realizable(g: AbelianGroupType, base: int | None = None) -> RealizabilityVerdict:
    """Is ``g`` a product of ``F_q^*``? With ``base`` set, only ``q`` a power of it."""
    if g.is_trivial():
        return _realizable(BuildRecipe.field(base or 2))

    @lru_cache(maxsize=None)
    def search(key: tuple) -> tuple[int, ...] | None:
        rest = Counter(dict(key))
        if not rest:
            return ()
        top = max(rest, key=lambda c: (c[0] ** c[1], c[0]))
        for d in sorted(divisors(exponent(_type_of(rest))), reverse=True):
            comps = _components(cyclic(d))
            if comps[top] == 0 or any(rest[c] < 1 for c in comps):
                continue
            pp = prime_power(d + 1)
            if pp is None or (base is not None and pp[0] != base):
                continue
            sub = search(tuple(sorted((rest - comps).items())))
            if sub is not None:
                return (d + 1, *sub)
        return None

    qs = search(tuple(sorted(_components(g).items())))
    if qs is None:
        which = f"F_q^* with q a power of {base}" if base else "F_q^*"
        return _not_realizable("not-field-product", f"{format_group(g)} is not a product of groups {which}")
    return _realizable(BuildRecipe.product([BuildRecipe.field(q) for q in qs]),
                       tuple(LocalFactor(*prime_power(q), TRIVIAL) for q in qs))


def odd_order_classify(g: AbelianGroupType) -> RealizabilityVerdict:
    """Odd-order unit groups are exactly products of ``F_{2^lam}^*``."""
    if order(g) % 2 == 0:
        raise EvenOrder(f"{format_group(g)} has even order")
    return field_product_realizable(g, base=2)


# -- local factors ----------------------------------------------------------------------


@dataclass(frozen=True)
class NecessaryCheck:
    """Result of :func:`local_factor_necessary`; truthy iff both conditions hold."""

    ok: bool
    tag: str | None = None
    text: str | None = None
    k: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _require_p_group(p: int, h: AbelianGroupType) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if any(r != p for r in h.primes):
        raise HNotPGroup(f"{format_group(h)} is not a {p}-group")


def local_factor_necessary(p: int, lam: int, h: AbelianGroupType) -> NecessaryCheck:
    """Check ``|h| = p^(lam k)`` and ``exponent(h) <= p^k``."""
    _require_p_group(p, h)
    a = sum(h.partition(p))
    if a % lam:
        return NecessaryCheck(False, "order", f"|h| = {p}^{a} is not a power of {p}^{lam}")
    k = a // lam
    if exponent(h) > p**k:
        return NecessaryCheck(False, "exponent", f"exponent {exponent(h)} of h exceeds {p}^{k}", k)
    return NecessaryCheck(True, k=k)


def _divide_multiplicities(h: AbelianGroupType, p: int, lam: int) -> tuple[int, ...] | None:
    """Partition ``P`` with ``P^lam = h``, if there is one."""
    counts = Counter(h.partition(p))
    if any(c % lam for c in counts.values()):
        return None
    return tuple(sorted((e for e, c in counts.items() for _ in range(c // lam)), reverse=True))


def _remove(h: AbelianGroupType, sub: AbelianGroupType) -> AbelianGroupType | None:
    have, need = _components(h), _components(sub)
    if any(have[c] < n for c, n in need.items()):
        return None
    return _type_of(have - need)


def _h_of(recipe: BuildRecipe) -> AbelianGroupType:
    p = recipe.p
    return AbelianGroupType({p: predicted_unit_group(recipe).partition(p)})


def local_factor_sufficient(p: int, lam: int, h: AbelianGroupType) -> BuildRecipe | None:
    """A recipe for a local ring with unit group ``C_{p^lam - 1} x h``, if a known family fits."""
    _require_p_group(p, h)
    if h.is_trivial():
        return BuildRecipe.galois(p, 1, lam)
    if not local_factor_necessary(p, lam, h):
        return None
    if p > 2:
        P = _divide_multiplicities(h, p, lam)
        if P is not None:
            return BuildRecipe.odd(p, lam, P)
    else:
        top = max(h.partition(2))
        for a0 in range(top + 1, 0, -1):
            rest = _remove(h, _h_of(BuildRecipe.two(lam, a0)))
            if rest is None:
                continue
            P = _divide_multiplicities(rest, 2, lam)
            if P is not None and (not P or a0 >= P[0] - 1):
                return BuildRecipe.two(lam, a0, P)
    if lam == 2:
        if p > 2 and h == _h_of(BuildRecipe.example_p(p)):
            return BuildRecipe.example_p(p)
        if p == 2:
            for a0 in range(2, max(h.partition(2)) + 1):
                if h == _h_of(BuildRecipe.example_2(a0)):
                    return BuildRecipe.example_2(a0)
    a = sum(h.partition(p))
    for n in range(2, a // lam + 2):
        recipe = BuildRecipe.truncated(p, lam, n)
        if h == _h_of(recipe):
            return recipe
    return None


# -- general groups -----------------------------------------------------------------------


def _cyclic_obstruction(p: int, lam: int, h: AbelianGroupType) -> str | None:
    """Local factors with cyclic unit group must come from the four-item list."""
    parts = h.partition(p)
    if p == 2 and lam == 1 and len(parts) == 1 and parts[0] >= 3:
        return f"C{2 ** parts[0]} is not the unit group of a local ring"
    return None


def _sub_multisets(counts: Counter):
    """All sub-multisets of ``counts`` (as Counters)."""
    keys = sorted(counts)
    for picks in cartesian(*(range(counts[k] + 1) for k in keys)):
        yield Counter({k: c for k, c in zip(keys, picks) if c})


@dataclass
class _Outcome:
    status: Status
    factors: tuple = ()
    size: int = 0
    reasons: list = field(default_factory=list)


def group_realizable(g: AbelianGroupType, cap: int | None = None) -> RealizabilityVerdict:
    """Decide whether ``g`` is the unit group of a finite ring.

    ``Realizable`` carries a witness; ``NotRealizable`` means every
    decomposition into local factors has a factor failing a necessary
    condition; ``Unknown`` means some decomposition survives those conditions
    but has a factor no known family produces.
    """
    cap = DEFAULT_ORDER_CAP if cap is None else cap
    if order(g) > cap:
        raise OrderTooLarge(f"group order {order(g)} exceeds the cap {cap}")
    if g.is_trivial():
        return _realizable(F2, (LocalFactor(2, 1, TRIVIAL),))

    memo: dict[tuple, _Outcome] = {}

    def candidates(rest: Counter):
        """Local factors ``(p, lam, h)`` whose group sits inside ``rest`` and uses its top component."""
        top = max(rest, key=lambda c: (c[0] ** c[1], c[0]))
        seen = set()
        for d in sorted(divisors(exponent(_type_of(rest))), reverse=True):
            pp = prime_power(d + 1)
            if pp is None:
                continue
            comps = _components(cyclic(d))
            if any(rest[c] < 1 for c in comps):
                continue
            p, lam = pp
            after = rest - comps
            pool = Counter({c: n for c, n in after.items() if c[0] == p})
            for sub in _sub_multisets(pool):
                if comps[top] == 0 and sub[top] == 0:
                    continue
                key = (p, lam, tuple(sorted(sub.items())))
                if key not in seen:
                    seen.add(key)
                    yield p, lam, _type_of(sub), after - sub

    def solve(rest: Counter) -> _Outcome:
        if not rest:
            return _Outcome(Status.REALIZABLE)
        key = tuple(sorted(rest.items()))
        if key in memo:
            return memo[key]
        best = _Outcome(Status.NOT_REALIZABLE)
        unknown = None
        for p, lam, h, remainder in candidates(rest):
            check = local_factor_necessary(p, lam, h)
            failure = check.text if not check else _cyclic_obstruction(p, lam, h)
            if failure:
                if len(best.reasons) < 3:
                    best.reasons.append(f"C{p**lam - 1} x {format_group(h)}: {failure}")
                continue
            sub = solve(remainder)
            if sub.status is Status.NOT_REALIZABLE:
                continue
            factor_ = LocalFactor(p, lam, h)
            recipe = local_factor_sufficient(p, lam, h)
            if recipe is None or sub.status is Status.UNKNOWN:
                if unknown is None:
                    unknown = _Outcome(Status.UNKNOWN, ((factor_, recipe), *sub.factors))
                continue
            size = recipe_order(recipe) * max(sub.size, 1)
            if best.status is not Status.REALIZABLE or size < best.size:
                best = _Outcome(Status.REALIZABLE, ((factor_, recipe), *sub.factors), size)
        if best.status is not Status.REALIZABLE and unknown is not None:
            best = unknown
        memo[key] = best
        return best

    out = solve(_components(g))
    decomposition = tuple(f for f, _ in out.factors)
    if out.status is Status.REALIZABLE:
        return _realizable(BuildRecipe.product([r for _, r in out.factors]), decomposition)
    if out.status is Status.UNKNOWN:
        pending = [format_group(f.group) for f, r in out.factors if r is None]
        return RealizabilityVerdict(
            Status.UNKNOWN, reason_tag="no-known-construction",
            reason_text=f"local factor(s) {', '.join(pending)} pass the necessary conditions "
                        "but match no known construction",
            decomposition=decomposition)
    if out.reasons:
        return _not_realizable("necessary-condition",
                               "every decomposition has a local factor failing a necessary condition, e.g. "
                               + "; ".join(out.reasons))
    return _not_realizable("no-decomposition",
                           f"{format_group(g)} has no decomposition into groups C_(p^lam - 1) x (p-group)")
