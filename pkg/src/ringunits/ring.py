"""Finite commutative rings given by an additive basis and structure constants.

A ring is the additive group ``Z/n_0 e_0 + ... + Z/n_{d-1} e_{d-1}`` together with
a table ``c[i][j]`` giving ``e_i * e_j = sum_k c[i][j][k] e_k``. The basis element
``e_0`` is the identity, so ``n_0`` is the characteristic.

Elements are coefficient vectors. Bulk routines work on ``(N, d)`` integer
arrays, and every element also has a mixed-radix index (coordinate 0 most
significant), which is the fixed enumeration order used throughout.

>>> z4 = make_ring([4], [[[1]]])
>>> x = z4.element([3])
>>> (x + x).coeffs
(2,)
>>> is_unit(z4, x), is_nilpotent(z4, z4.element([2]))
(True, True)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .arith import exact_log, factor, prime_power
from .errors import (
    AxiomViolation,
    DimensionMismatch,
    NotLocal,
    NotPrimePower,
    TheoremViolation,
    TooLarge,
)

__all__ = [
    "FiniteRing",
    "RingElement",
    "AdditiveSubgroup",
    "QuotientRing",
    "make_ring",
    "add",
    "mul",
    "neg",
    "power",
    "is_unit",
    "is_nilpotent",
    "is_zero_divisor",
    "units_mask",
    "nilradical",
    "is_local",
    "ideal_power_chain",
    "residue_field_params",
    "idempotents",
    "primitive_idempotents",
    "direct_product",
    "factor_ring",
    "span",
    "ideal_generated",
    "quotient",
    "ring_to_dict",
    "ring_from_dict",
    "dumps",
    "loads",
]

# Hard ceiling for anything that materializes every element; callers apply
# their own (smaller, configurable) desk-scale caps before reaching this.
ENUMERATION_LIMIT = 1 << 22


class FiniteRing:
    """A validated finite commutative ring. Build it with :func:`make_ring`."""

    def __init__(self, basis_orders, structure_constants, labels=None):
        orders = tuple(int(n) for n in basis_orders)
        c = np.array(structure_constants, dtype=np.int64)
        d = len(orders)
        if d == 0:
            raise AxiomViolation("shape", (), "at least one basis element is required")
        if c.shape != (d, d, d):
            raise AxiomViolation("shape", c.shape, f"expected ({d}, {d}, {d})")
        if any(n < 1 for n in orders):
            raise AxiomViolation("shape", tuple(i for i, n in enumerate(orders) if n < 1),
                                 "basis orders must be positive")
        self._orders = np.array(orders, dtype=np.int64)
        c = np.mod(c, self._orders[None, None, :])
        c.setflags(write=False)
        self.basis_orders = orders
        self.structure_constants = c
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != d:
            raise DimensionMismatch(f"{len(self.labels)} labels for {d} basis elements")

    # -- basic attributes -------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis_orders)

    @property
    def order(self) -> int:
        return math.prod(self.basis_orders)

    cached_order = order

    @property
    def characteristic(self) -> int:
        return self.basis_orders[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteRing(order={self.order}, basis_orders={list(self.basis_orders)})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteRing):
            return NotImplemented
        return (self.basis_orders == other.basis_orders
                and np.array_equal(self.structure_constants, other.structure_constants))

    def __hash__(self) -> int:
        return hash((self.basis_orders, self.structure_constants.tobytes()))

    # -- elements ---------------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> RingElement:
        if len(coeffs) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(coeffs)}")
        return RingElement(self, tuple(int(a) % n for a, n in zip(coeffs, self.basis_orders)))

    def basis(self, i: int) -> RingElement:
        coeffs = [0] * self.dim
        coeffs[i] = 1
        return self.element(coeffs)

    @property
    def zero(self) -> RingElement:
        return self.element([0] * self.dim)

    @property
    def one(self) -> RingElement:
        return self.basis(0)

    def elements(self) -> np.ndarray:
        """All elements as an ``(N, d)`` array in mixed-radix order."""
        return self._all_elements

    @cached_property
    def _all_elements(self) -> np.ndarray:
        if self.order > ENUMERATION_LIMIT:
            raise TooLarge(f"ring of order {self.order} is too large to enumerate")
        idx = np.arange(self.order, dtype=np.int64)
        coords = np.stack(np.unravel_index(idx, self.basis_orders), axis=1).astype(np.int64)
        coords.setflags(write=False)
        return coords

    def index_of(self, coords: np.ndarray) -> np.ndarray:
        coords = np.atleast_2d(coords)
        return np.ravel_multi_index(tuple(coords.T), self.basis_orders)

    def element_at(self, index: int) -> RingElement:
        return RingElement(self, tuple(int(v) for v in np.unravel_index(int(index), self.basis_orders)))

    # -- bulk arithmetic ---------------------------------------------------

    def reduce(self, x: np.ndarray) -> np.ndarray:
        return np.mod(x, self._orders)

    def add_many(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.mod(x + y, self._orders)

    def neg_many(self, x: np.ndarray) -> np.ndarray:
        return np.mod(-x, self._orders)

    def scale_many(self, x: np.ndarray, t: int) -> np.ndarray:
        return np.mod(x * (t % self.characteristic), self._orders)

    def mul_many(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Row-wise products of two ``(N, d)`` arrays (or one row broadcast)."""
        x = np.atleast_2d(x)
        y = np.atleast_2d(y)
        c = self.structure_constants
        out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
        for i in range(self.dim):
            xi = x[:, i:i + 1]
            if not xi.any():
                continue
            # entries stay below 2**45 for orders up to 2**20
            out += xi * np.mod(y @ c[i], self._orders)
        return np.mod(out, self._orders)

    def mul_by(self, y: np.ndarray) -> np.ndarray:
        """Matrix ``M`` with ``x * y == (x @ M) mod orders`` for every row ``x``."""
        y = np.asarray(y, dtype=np.int64).reshape(-1)
        return np.einsum("j,ijk->ik", y, self.structure_constants)

    def pow_many(self, x: np.ndarray, e: int) -> np.ndarray:
        x = np.atleast_2d(x)
        result = np.broadcast_to(np.asarray(self.one.coeffs, dtype=np.int64), x.shape).copy()
        base = x.copy()
        while e > 0:
            if e & 1:
                result = self.mul_many(result, base)
            e >>= 1
            if e:
                base = self.mul_many(base, base)
        return result


@dataclass(frozen=True, eq=False)
class RingElement:
    """An element of a :class:`FiniteRing`, stored as reduced coordinates."""

    ring: FiniteRing = field(repr=False)
    coeffs: tuple

    def _check(self, other: RingElement) -> None:
        if not isinstance(other, RingElement) or other.ring != self.ring:
            raise DimensionMismatch("elements belong to different rings")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.coeffs == other.coeffs and self.ring == other.ring

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: RingElement) -> RingElement:
        return add(self.ring, self, other)

    def __sub__(self, other: RingElement) -> RingElement:
        return add(self.ring, self, neg(self.ring, other))

    def __neg__(self) -> RingElement:
        return neg(self.ring, self)

    def __mul__(self, other: RingElement) -> RingElement:
        return mul(self.ring, self, other)

    def __pow__(self, m: int) -> RingElement:
        return power(self.ring, self, m)

    def __rmul__(self, t: int) -> RingElement:
        if isinstance(t, int):
            return self.ring.element([t * a for a in self.coeffs])
        return NotImplemented

    @property
    def index(self) -> int:
        return int(self.ring.index_of(np.array(self.coeffs))[0])

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        labels = self.ring.labels or tuple(f"e{i}" for i in range(self.ring.dim))
        terms = []
        for a, lab in zip(self.coeffs, labels):
            if a == 0:
                continue
            if lab == "1":
                terms.append(str(a))
            else:
                terms.append(lab if a == 1 else f"{a}*{lab}")
        return " + ".join(terms) or "0"


def _coerce(r: FiniteRing, x) -> RingElement:
    if isinstance(x, RingElement):
        if x.ring != r:
            raise DimensionMismatch("element does not belong to this ring")
        return x
    return r.element(x)


def _wrap(r: FiniteRing, row: np.ndarray) -> RingElement:
    return RingElement(r, tuple(int(v) for v in np.asarray(row).reshape(-1)))


# -- construction and validation ------------------------------------------


def make_ring(basis_orders, structure_constants, labels=None) -> FiniteRing:
    """Validate a structure-constant table and return the ring it defines.

    Every axiom is checked exhaustively on basis elements (which suffices by
    bilinearity). The first offending index tuple is reported.
    """
    r = FiniteRing(basis_orders, structure_constants, labels)
    n = r._orders
    c = r.structure_constants
    d = r.dim
    for i, ni in enumerate(r.basis_orders):
        if r.characteristic % ni:
            raise AxiomViolation("order-compatibility", (i,),
                                 f"basis order {ni} does not divide n_0 = {r.characteristic}")
    eye = np.eye(d, dtype=np.int64) % n
    for j in range(d):
        if not np.array_equal(c[0, j], eye[j]):
            raise AxiomViolation("unity", (0, j), "e_0 * e_j != e_j")
    diff = np.argwhere(np.any(c != c.transpose(1, 0, 2), axis=2))
    if len(diff):
        raise AxiomViolation("commutativity", tuple(int(v) for v in diff[0]))
    bad = np.argwhere((n[:, None, None] * c) % n[None, None, :] != 0)
    if len(bad):
        raise AxiomViolation("order-compatibility", tuple(int(v) for v in bad[0]),
                             "n_i * (e_i e_j) must vanish")
    # (e_i e_j) e_k  versus  e_i (e_j e_k)
    left = np.einsum("ijl,lkm->ijkm", c, c) % n
    right = np.einsum("jkl,ilm->ijkm", c, c) % n
    bad = np.argwhere(np.any(left != right, axis=3))
    if len(bad):
        raise AxiomViolation("associativity", tuple(int(v) for v in bad[0]))
    return r


# -- single-element arithmetic ------------------------------------------------


def add(r: FiniteRing, x, y) -> RingElement:
    x, y = _coerce(r, x), _coerce(r, y)
    return r.element([a + b for a, b in zip(x.coeffs, y.coeffs)])


def neg(r: FiniteRing, x) -> RingElement:
    x = _coerce(r, x)
    return r.element([-a for a in x.coeffs])


def mul(r: FiniteRing, x, y) -> RingElement:
    x, y = _coerce(r, x), _coerce(r, y)
    return _wrap(r, r.mul_many(x.array(), y.array()))


def power(r: FiniteRing, x, m: int) -> RingElement:
    if m < 0:
        raise ValueError("negative exponent")
    x = _coerce(r, x)
    return _wrap(r, r.pow_many(x.array(), m))


def _power_orbit(r: FiniteRing, x: RingElement) -> list[RingElement]:
    """``x, x^2, ...`` up to (excluding) the first repeated element."""
    seen = set()
    orbit = []
    cur = x
    while cur.coeffs not in seen:
        seen.add(cur.coeffs)
        orbit.append(cur)
        cur = mul(r, cur, x)
    return orbit


def is_unit(r: FiniteRing, x) -> bool:
    """True iff some power of ``x`` is the identity (power-orbit check)."""
    x = _coerce(r, x)
    one = r.one
    return any(y == one for y in _power_orbit(r, x))


def is_nilpotent(r: FiniteRing, x) -> bool:
    x = _coerce(r, x)
    return any(y.is_zero() for y in _power_orbit(r, x))


def is_zero_divisor(r: FiniteRing, x) -> bool:
    """True iff ``x * y == 0`` for some nonzero ``y``."""
    x = _coerce(r, x)
    prods = r.mul_many(r.elements(), x.array())
    zero_rows = ~prods.any(axis=1)
    zero_rows[0] = False
    return bool(zero_rows.any())


# -- bulk predicates -------------------------------------------------------


def _nilpotent_rows(r: FiniteRing, x: np.ndarray) -> np.ndarray:
    """Boolean mask of the nilpotent rows of ``x``."""
    # nilpotency index is at most log2|A| + 1, so that many squarings suffice
    steps = max(1, math.ceil(math.log2(math.log2(max(r.order, 2)) + 2)))
    y = x
    for _ in range(steps):
        y = r.mul_many(y, y)
    return ~y.any(axis=1)


def nilpotent_mask(r: FiniteRing) -> np.ndarray:
    return _nilpotent_rows(r, r.elements())


def idempotent_mask(r: FiniteRing) -> np.ndarray:
    x = r.elements()
    return np.all(r.mul_many(x, x) == x, axis=1)


def idempotents(r: FiniteRing) -> list[RingElement]:
    """All ``e`` with ``e*e == e``, in enumeration order."""
    x = r.elements()
    return [_wrap(r, row) for row in x[idempotent_mask(r)]]


def primitive_idempotents(r: FiniteRing) -> list[RingElement]:
    """Minimal nonzero idempotents under ``e <= f  iff  e*f == e``."""
    idem = [e for e in idempotents(r) if not e.is_zero()]
    prim = []
    for e in idem:
        below = [f for f in idem if f != e and mul(r, e, f) == f]
        if not below:
            prim.append(e)
    return prim


def units_mask(r: FiniteRing) -> np.ndarray:
    """Boolean mask over :meth:`FiniteRing.elements` marking the units.

    ``x`` is a unit iff ``e*x`` is not nilpotent for every primitive idempotent
    ``e``: the ring splits as the product of the local rings ``eA``, and in a
    finite local ring the non-units are exactly the nilpotents.
    """
    x = r.elements()
    mask = np.ones(len(x), dtype=bool)
    for e in primitive_idempotents(r):
        mask &= ~_nilpotent_rows(r, r.mul_many(x, e.array()))
    return mask


# -- additive subgroups -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdditiveSubgroup:
    """A subgroup of the additive group of ``ring``, stored as a sorted index set."""

    ring: FiniteRing = field(repr=False)
    generators: tuple
    indices: np.ndarray = field(repr=False)
    is_ideal: bool = False

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, x) -> bool:
        x = _coerce(self.ring, x)
        i = x.index
        pos = np.searchsorted(self.indices, i)
        return bool(pos < len(self.indices) and self.indices[pos] == i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdditiveSubgroup):
            return NotImplemented
        return self.ring == other.ring and np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash(self.indices.tobytes())

    def mask(self) -> np.ndarray:
        m = np.zeros(self.ring.order, dtype=bool)
        m[self.indices] = True
        return m

    def coords(self) -> np.ndarray:
        return self.ring.elements()[self.indices]

    def elements(self) -> list[RingElement]:
        return [_wrap(self.ring, row) for row in self.coords()]

    def __repr__(self) -> str:
        return f"AdditiveSubgroup(order={self.order}, generators={len(self.generators)}, ideal={self.is_ideal})"


def _extend_span(r: FiniteRing, mask: np.ndarray, members: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Add ``g`` to the subgroup given by ``members`` (coords); return new members."""
    blocks = [members]
    cur = members
    while True:
        cur = r.add_many(cur, g)
        idx = r.index_of(cur[:1])[0]
        if mask[idx]:
            break
        mask[r.index_of(cur)] = True
        blocks.append(cur)
    return np.concatenate(blocks)


def _greedy_span(r: FiniteRing, candidates: np.ndarray, limit_mask: np.ndarray | None = None):
    """Span the rows of ``candidates``; return (generator rows, span mask).

    A candidate is kept as a generator only if it is not already in the span.
    If ``limit_mask`` is given and the span escapes it, return ``None``.
    """
    mask = np.zeros(r.order, dtype=bool)
    zero = np.zeros((1, r.dim), dtype=np.int64)
    mask[0] = True
    members = zero
    gens = []
    cand_idx = r.index_of(candidates) if len(candidates) else np.zeros(0, dtype=np.int64)
    for pos in range(len(candidates)):
        if mask[cand_idx[pos]]:
            continue
        g = candidates[pos:pos + 1]
        members = _extend_span(r, mask, members, g)
        gens.append(g[0])
        if limit_mask is not None and np.any(mask & ~limit_mask):
            return None
    return gens, mask


def _subgroup_from_set(r: FiniteRing, set_mask: np.ndarray, ideal: bool) -> AdditiveSubgroup:
    """Subgroup whose element set is ``set_mask`` (verified additively closed)."""
    mask = np.zeros(r.order, dtype=bool)
    mask[0] = True
    members = np.zeros((1, r.dim), dtype=np.int64)
    gens = []
    all_x = r.elements()
    while True:
        missing = set_mask & ~mask
        if not missing.any():
            break
        pos = int(np.argmax(missing))
        g = all_x[pos:pos + 1]
        members = _extend_span(r, mask, members, g)
        gens.append(_wrap(r, g[0]))
        if np.any(mask & ~set_mask):
            raise TheoremViolation("element set is not additively closed")
    return AdditiveSubgroup(r, tuple(gens), np.flatnonzero(mask), ideal)


def is_additively_closed(r: FiniteRing, set_mask: np.ndarray) -> bool:
    if not set_mask[0]:
        return False
    try:
        _subgroup_from_set(r, set_mask, False)
    except TheoremViolation:
        return False
    return True


def span(r: FiniteRing, gens: Iterable, ideal: bool = False) -> AdditiveSubgroup:
    """Additive subgroup generated by ``gens`` (the ideal they generate if ``ideal``)."""
    rows = [_coerce(r, g).array() for g in gens]
    cand = np.array(rows, dtype=np.int64).reshape(-1, r.dim)
    if ideal and len(cand):
        basis = np.eye(r.dim, dtype=np.int64)
        cand = np.concatenate([r.mul_many(cand, basis[j]) for j in range(r.dim)])
    gens_rows, mask = _greedy_span(r, cand)
    return AdditiveSubgroup(r, tuple(_wrap(r, g) for g in gens_rows), np.flatnonzero(mask), ideal)


def ideal_generated(r: FiniteRing, gens: Iterable) -> AdditiveSubgroup:
    return span(r, gens, ideal=True)


# -- structure ---------------------------------------------------------------


def nilradical(r: FiniteRing) -> AdditiveSubgroup:
    """The ideal of nilpotent elements, found by full enumeration."""
    return _subgroup_from_set(r, nilpotent_mask(r), ideal=True)


def is_local(r: FiniteRing) -> tuple[bool, AdditiveSubgroup | None]:
    """``(True, m)`` iff the non-units form an (additively closed) ideal ``m``."""
    if r.order < 2:
        return False, None
    nonunits = ~units_mask(r)
    if not is_additively_closed(r, nonunits):
        return False, None
    return True, _subgroup_from_set(r, nonunits, ideal=True)


def _maximal_ideal(r: FiniteRing) -> AdditiveSubgroup:
    local, m = is_local(r)
    if not local:
        raise NotLocal("ring is not local")
    return m


def ideal_power_chain(r: FiniteRing, m: AdditiveSubgroup | None = None) -> list[AdditiveSubgroup]:
    """``[m, m^2, ..., {0}]`` for a local ring, ending at the zero ideal."""
    if m is None:
        m = _maximal_ideal(r)
    chain = [m]
    m_gens = np.array([g.array() for g in m.generators], dtype=np.int64).reshape(-1, r.dim)
    cur = m
    while cur.order > 1:
        cur_gens = np.array([g.array() for g in cur.generators], dtype=np.int64).reshape(-1, r.dim)
        prods = np.concatenate([r.mul_many(cur_gens, g) for g in m_gens])
        nxt = span(r, [_wrap(r, row) for row in prods], ideal=True)
        if nxt.order >= cur.order:
            raise TheoremViolation("powers of the maximal ideal do not decrease")
        chain.append(nxt)
        cur = nxt
    return chain


def residue_field_params(r: FiniteRing, m: AdditiveSubgroup | None = None) -> tuple[int, int]:
    """``(p, lam)`` with ``A/m`` of size ``p**lam``."""
    if m is None:
        m = _maximal_ideal(r)
    primes = [p for p, _ in factor(r.characteristic)]
    if len(primes) != 1:
        raise NotPrimePower(f"characteristic {r.characteristic} of a local ring is not a prime power")
    p = primes[0]
    q = r.order // m.order
    if q * m.order != r.order:
        raise NotPrimePower("|m| does not divide |A|")
    return p, exact_log(q, p)


# -- products and factor rings ------------------------------------------------


def _crt_residue(n: int, other: int, take_smaller: bool) -> int:
    """Residue mod ``n``: 1 on the primes where ``n`` carries the chosen share, else 0."""
    x_mod, x_val = 1, 0
    for p, a in factor(n):
        b = 0
        o = other
        while o % p == 0:
            o //= p
            b += 1
        if take_smaller:
            hit = b > 0 and a <= b
        else:
            hit = b > 0 and a < b
        target = 1 if hit else 0
        pa = p**a
        # combine x = x_val mod x_mod with x = target mod pa
        t = ((target - x_val) * pow(x_mod, -1, pa)) % pa
        x_val = x_val + x_mod * t
        x_mod *= pa
    return x_val % n


def direct_product(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    """The product ring, re-based so that the identity ``(1, 1)`` is basis element 0.

    The two identity summands ``Z/n (1,0) + Z/m (0,1)`` are replaced by ``(1,1)``
    (of order ``lcm(n, m)``) and, when ``g = gcd(n, m) > 1``, a complement ``w`` of
    order ``g`` chosen prime by prime on the side with the smaller exponent.
    """
    n, m = r1.characteristic, r2.characteristic
    L = math.lcm(n, m)
    g = math.gcd(n, m)
    d1, d2 = r1.dim, r2.dim
    D = d1 + d2
    # old coordinates live in the concatenated space (r1 coords, r2 coords)

    def old_one():
        v = np.zeros(D, dtype=np.int64)
        v[0] = 1
        v[d1] = 1
        return v

    new_basis = [old_one()]
    new_orders = [L]
    if g > 1:
        w = np.zeros(D, dtype=np.int64)
        w[0] = _crt_residue(n, m, take_smaller=True)
        w[d1] = _crt_residue(m, n, take_smaller=False)
        new_basis.append(w)
        new_orders.append(g)
    for i in range(1, d1):
        v = np.zeros(D, dtype=np.int64)
        v[i] = 1
        new_basis.append(v)
        new_orders.append(r1.basis_orders[i])
    for j in range(1, d2):
        v = np.zeros(D, dtype=np.int64)
        v[d1 + j] = 1
        new_basis.append(v)
        new_orders.append(r2.basis_orders[j])
    head = 2 if g > 1 else 1

    # identity block: (a, b) in Z/n + Z/m  ->  (s, t) with s*(1,1) + t*w
    table = {}
    wa = int(new_basis[1][0]) if g > 1 else 0
    wb = int(new_basis[1][d1]) if g > 1 else 0
    for s in range(L):
        for t in range(g if g > 1 else 1):
            table[((s + t * wa) % n, (s + t * wb) % m)] = (s, t)
    if len(table) != n * m:
        raise TheoremViolation("identity block of the product is not re-based correctly")

    old_orders = np.array(r1.basis_orders + r2.basis_orders, dtype=np.int64)

    def old_mul(u, v):
        a = r1.mul_many(u[:d1], v[:d1])[0]
        b = r2.mul_many(u[d1:], v[d1:])[0]
        return np.concatenate([a, b])

    def to_new(v):
        v = np.mod(v, old_orders)
        s, t = table[(int(v[0]), int(v[d1]))]
        out = [s] + ([t] if g > 1 else [])
        out += [int(a) for a in v[1:d1]] + [int(b) for b in v[d1 + 1:]]
        return out

    k = len(new_basis)
    c = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i, k):
            c[i, j] = c[j, i] = to_new(old_mul(new_basis[i], new_basis[j]))
    labels = None
    if r1.labels or r2.labels:
        l1 = r1.labels or tuple(f"a{i}" for i in range(d1))
        l2 = r2.labels or tuple(f"b{i}" for i in range(d2))
        labels = ("1",) + (("w",) if head == 2 else ()) + tuple(f"({x},0)" for x in l1[1:]) \
            + tuple(f"(0,{y})" for y in l2[1:])
    return make_ring(new_orders, c, labels)


def _pgroup_basis(r: FiniteRing, set_mask: np.ndarray, first: np.ndarray, p: int):
    """Cyclic decomposition of the additive p-subgroup ``set_mask`` starting with ``first``.

    ``first`` must have maximal order. Each further basis element is a coset
    representative of maximal order in the quotient by the current span,
    shifted so that its order equals its order in the quotient.
    Returns ``(basis rows, orders, coordinate lookup over all element indices)``.
    """
    all_x = r.elements()
    members_idx = np.flatnonzero(set_mask)
    members = all_x[members_idx]

    mask = np.zeros(r.order, dtype=bool)
    mask[0] = True
    coords = np.zeros((r.order, 0), dtype=np.int64)
    basis, orders = [], []

    def add_basis(b: np.ndarray, o: int):
        nonlocal coords
        span_idx = np.flatnonzero(mask)
        old = coords[span_idx]
        pts = all_x[span_idx]
        coords = np.concatenate([coords, np.zeros((r.order, 1), dtype=np.int64)], axis=1)
        for t in range(o):
            shifted = r.add_many(pts, r.scale_many(b[None, :], t))
            idx = r.index_of(shifted)
            coords[idx, :-1] = old
            coords[idx, -1] = t
            mask[idx] = True
        basis.append(b)
        orders.append(o)

    def order_mod_span(x: np.ndarray) -> np.ndarray:
        out = np.ones(len(x), dtype=np.int64)
        cur = x
        pending = ~mask[r.index_of(cur)]
        while pending.any():
            out[pending] *= p
            cur = r.scale_many(cur, p)
            pending &= ~mask[r.index_of(cur)]
        return out

    add_basis(np.asarray(first, dtype=np.int64), int(order_mod_span(first[None, :])[0]))
    total = len(members_idx)
    while mask.sum() < total:
        ords = order_mod_span(members)
        pos = int(np.argmax(ords))
        o = int(ords[pos])
        y = members[pos].copy()
        c = coords[r.index_of(r.scale_many(y[None, :], o))[0]]
        for ci, bi, oi in zip(c, basis, orders):
            if ci % o:
                raise TheoremViolation("basis lifting failed; subgroup is not a p-group with maximal first element")
            y = r.add_many(y[None, :], r.scale_many(bi[None, :], -(int(ci) // o)))[0]
        add_basis(y, o)
    if mask.sum() != total:
        raise TheoremViolation("cyclic decomposition escaped the subgroup")
    return basis, orders, coords


def factor_ring(r: FiniteRing, e) -> FiniteRing:
    """The ring ``eA`` with identity ``e`` for an idempotent ``e`` of a ring of prime-power characteristic.

    Used for the local factors of a non-local ring; the additive group of each
    local factor is a p-group so a cyclic basis starting at ``e`` exists.
    """
    e = _coerce(r, e)
    if mul(r, e, e) != e:
        raise ValueError("not an idempotent")
    all_x = r.elements()
    ex = r.mul_many(all_x, e.array())
    set_mask = np.zeros(r.order, dtype=bool)
    set_mask[r.index_of(ex)] = True
    # the local factor eA has prime-power characteristic: the additive order of e
    o = 1
    while r.scale_many(e.array()[None, :], o).any():
        o += 1
    pp = prime_power(o)
    if pp is None:
        raise NotPrimePower(f"factor ring has characteristic {o}")
    basis, orders, coords = _pgroup_basis(r, set_mask, e.array(), pp[0])
    k = len(basis)
    c = np.zeros((k, k, k), dtype=np.int64)
    brows = np.array(basis)
    for i in range(k):
        prods = r.mul_many(brows, brows[i])
        c[i] = coords[r.index_of(prods)]
    return make_ring(orders, c)


# -- quotients ---------------------------------------------------------------


class QuotientRing:
    """``A/I`` materialized as coset representatives (smallest index per coset)."""

    def __init__(self, ring: FiniteRing, ideal: AdditiveSubgroup):
        if not ideal.is_ideal:
            raise ValueError("quotient requires an ideal")
        self.ring = ring
        self.ideal = ideal
        all_x = ring.elements()
        label = np.full(ring.order, -1, dtype=np.int64)
        icoords = ideal.coords()
        reps = []
        for i in range(ring.order):
            if label[i] >= 0:
                continue
            coset = ring.index_of(ring.add_many(icoords, all_x[i]))
            label[coset] = len(reps)
            reps.append(i)
        self.coset_of = label
        self.representatives = np.array(reps, dtype=np.int64)

    @property
    def order(self) -> int:
        return len(self.representatives)

    def _rep(self, c: int) -> np.ndarray:
        return self.ring.elements()[self.representatives[c]]

    def mul(self, c1: int, c2: int) -> int:
        prod = self.ring.mul_many(self._rep(c1), self._rep(c2))
        return int(self.coset_of[self.ring.index_of(prod)[0]])

    def add(self, c1: int, c2: int) -> int:
        s = self.ring.add_many(self._rep(c1), self._rep(c2))
        return int(self.coset_of[self.ring.index_of(s[None, :])[0]])

    @property
    def one(self) -> int:
        return int(self.coset_of[self.ring.one.index])

    def is_unit(self, c: int) -> bool:
        seen = set()
        cur = c
        while cur not in seen:
            if cur == self.one:
                return True
            seen.add(cur)
            cur = self.mul(cur, c)
        return False

    def units(self) -> list[int]:
        return [c for c in range(self.order) if self.is_unit(c)]


def quotient(r: FiniteRing, ideal: AdditiveSubgroup) -> QuotientRing:
    return QuotientRing(r, ideal)


# -- serialization -------------------------------------------------------------


def ring_to_dict(r: FiniteRing) -> dict:
    out = {
        "basis_orders": list(r.basis_orders),
        "structure_constants": r.structure_constants.tolist(),
    }
    if r.labels is not None:
        out["labels"] = list(r.labels)
    return out


def ring_from_dict(data: dict) -> FiniteRing:
    try:
        orders = data["basis_orders"]
        consts = data["structure_constants"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ring document: missing {exc}") from None
    return make_ring(orders, consts, data.get("labels"))


def dumps(r: FiniteRing, **kwargs) -> str:
    return json.dumps(ring_to_dict(r), **kwargs)


def loads(text: str) -> FiniteRing:
    return ring_from_dict(json.loads(text))
