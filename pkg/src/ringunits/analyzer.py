"""Unit groups of finite rings and the structural checks run on them.

For a local ring ``(A, m)`` with residue field of size ``q = p^lam`` the report
records the type of ``A^*``, the type ``H`` of ``1 + m``, ``k`` with
``|m| = q^k``, and the exponents ``k_i`` with ``|m^i / m^{i+1}| = q^{k_i}``.
A non-local ring is split along its primitive idempotents and each local
factor is reported separately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .arith import exact_log
from .errors import NotGaloisRing, NotLocal, NotPrimePower, TheoremViolation, TooLarge
from .groups import (
    TRIVIAL,
    AbelianGroupType,
    BlackBoxGroup,
    blackbox_structure,
    cyclic,
    exponent,
    format_group,
    group_product,
    parse_group,
)
from .ring import (
    AdditiveSubgroup,
    FiniteRing,
    RingElement,
    factor_ring,
    ideal_power_chain,
    is_local,
    nilpotent_mask,
    primitive_idempotents,
    quotient,
    residue_field_params,
    units_mask,
)

DEFAULT_CAP = 1 << 20


def _check_size(r: FiniteRing, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if r.order > cap:
        raise TooLarge(f"ring of order {r.order} exceeds the cap {cap}")


def _group_of(r: FiniteRing, rows: np.ndarray) -> BlackBoxGroup:
    return BlackBoxGroup(rows, r.mul_many, r.one.array())


def unit_group(r: FiniteRing, cap: int | None = None) -> tuple[BlackBoxGroup, AbelianGroupType]:
    """All units of ``r`` as a black-box group under multiplication, and its type."""
    _check_size(r, cap)
    G = _group_of(r, r.elements()[units_mask(r)])
    return G, blackbox_structure(G)


def one_plus(r: FiniteRing, ideal: AdditiveSubgroup) -> BlackBoxGroup:
    return _group_of(r, r.add_many(ideal.coords(), r.one.array()))


def _local_parts(r: FiniteRing):
    local, m = is_local(r)
    if not local:
        raise NotLocal("ring is not local")
    p, lam = residue_field_params(r, m)
    return m, p, lam


def split_units(r: FiniteRing, cap: int | None = None) -> tuple[AbelianGroupType, AbelianGroupType, bool]:
    """``(C_{q-1}, type of 1+m, splitting holds)`` for a local ring.

    The splitting is confirmed at the level of isomorphism types: the unit
    group computed directly must equal the product of the two.
    """
    _check_size(r, cap)
    m, p, lam = _local_parts(r)
    residue = cyclic(p**lam - 1)
    h = blackbox_structure(one_plus(r, m))
    _, units = unit_group(r, cap)
    return residue, h, units == group_product(residue, h)


def filtration_report(r: FiniteRing, m: AdditiveSubgroup | None = None,
                      chain: list[AdditiveSubgroup] | None = None) -> list[int]:
    """``[k_1, ..., k_{r-1}]`` with ``|m^i / m^{i+1}| = q^{k_i}``, ``q = |A/m|``.

    Also checks that ``u^p`` lies in ``1 + m^{i+1}`` for every ``u`` in
    ``1 + m^i``, i.e. the quotients of the unit filtration have exponent ``p``.
    """
    if m is None:
        m, p, lam = _local_parts(r)
    else:
        p, lam = residue_field_params(r, m)
    q = p**lam
    if chain is None:
        chain = ideal_power_chain(r, m)
    ks = []
    one = r.one.array()
    for upper, lower in zip(chain, chain[1:]):
        ratio, rem = divmod(upper.order, lower.order)
        if rem:
            raise TheoremViolation("ideal power does not divide the previous one")
        try:
            ks.append(exact_log(ratio, q))
        except NotPrimePower:
            raise TheoremViolation(f"|m^i/m^(i+1)| = {ratio} is not a power of {q}") from None
        u = r.add_many(upper.coords(), one)
        up = r.pow_many(u, p)
        lower_mask = lower.mask()
        if not lower_mask[r.index_of(r.add_many(up, r.neg_many(one)))].all():
            raise TheoremViolation("(1+m^i)/(1+m^(i+1)) is not elementary abelian")
    if sum(ks) != exact_log(m.order, q):
        raise TheoremViolation("filtration exponents do not add up to k")
    return ks


@dataclass
class LemmaCheck:
    """Outcome of :func:`verify_power_lemma`; truthy iff no counterexample."""

    holds: bool
    checked: int
    counterexample: tuple[RingElement, int] | None = None

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return f"holds on {self.checked} cases"
        mu, l = self.counterexample
        return f"fails at mu = {mu.coeffs}, l = {l}"


def galois_parameters(R: FiniteRing) -> tuple[int, int, int]:
    """``(p, m, lam)`` if ``R`` is a Galois ring ``GR(p^m, lam)``, else raise NotGaloisRing."""
    orders = set(R.basis_orders)
    if len(orders) != 1:
        raise NotGaloisRing("basis orders differ")
    local, mideal = is_local(R)
    if not local:
        raise NotGaloisRing("ring is not local")
    p, lam = residue_field_params(R, mideal)
    m = exact_log(R.characteristic, p)
    if lam != R.dim:
        raise NotGaloisRing("residue degree differs from the rank")
    pR = np.unique(R.index_of(R.scale_many(R.elements(), p)))
    if not np.array_equal(pR, mideal.indices):
        raise NotGaloisRing("maximal ideal is not generated by p")
    return p, m, lam


def verify_power_lemma(R: FiniteRing, p: int, depth_start: int | None = None) -> LemmaCheck:
    """Check ``(1+mu)^(p^l) = 1  <=>  p^l mu = 0`` for all ``mu`` in ``p^depth_start R``.

    ``l`` runs from 0 to ``m`` where ``p^m`` is the characteristic. The first
    counterexample (enumeration order of ``mu``, then smallest ``l``) is kept.
    """
    gp, m, lam = galois_parameters(R)
    if gp != p:
        raise NotGaloisRing(f"ring has residue characteristic {gp}, not {p}")
    if depth_start is None:
        depth_start = 1 if p > 2 else 2
    mus_idx = np.unique(R.index_of(R.scale_many(R.elements(), p**depth_start)))
    mus = R.elements()[mus_idx]
    one = R.one.array()
    u = R.add_many(mus, one)
    bad = np.zeros((len(mus), m + 1), dtype=bool)
    for l in range(m + 1):
        lhs = np.all(R.pow_many(u, p**l) == one, axis=1)
        rhs = ~R.scale_many(mus, p**l).any(axis=1)
        bad[:, l] = lhs != rhs
    rows = np.flatnonzero(bad.any(axis=1))
    if len(rows) == 0:
        return LemmaCheck(True, bad.size)
    i = int(rows[0])
    l = int(np.argmax(bad[i]))
    return LemmaCheck(False, bad.size, (R.element(mus[i].tolist()), l))


@dataclass
class UnitGroupReport:
    ring_order: int
    char: int
    is_local: bool
    unit_count: int
    unit_group_type: AbelianGroupType
    residue: tuple[int, int] | None = None
    h_type: AbelianGroupType | None = None
    k: int | None = None
    filtration_ks: list[int] = field(default_factory=list)
    splitting_verified: bool = False
    local_factor_reports: list[UnitGroupReport] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "ring_order": self.ring_order,
            "char": self.char,
            "is_local": self.is_local,
            "unit_count": self.unit_count,
            "unit_group_type": format_group(self.unit_group_type),
            "residue": list(self.residue) if self.residue else None,
            "h_type": format_group(self.h_type) if self.h_type is not None else None,
            "k": self.k,
            "filtration_ks": list(self.filtration_ks),
            "splitting_verified": self.splitting_verified,
            "local_factor_reports": [f.to_dict() for f in self.local_factor_reports],
        }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> UnitGroupReport:
        return cls(
            ring_order=data["ring_order"],
            char=data["char"],
            is_local=data["is_local"],
            unit_count=data["unit_count"],
            unit_group_type=parse_group(data["unit_group_type"]),
            residue=tuple(data["residue"]) if data.get("residue") else None,
            h_type=parse_group(data["h_type"]) if data.get("h_type") is not None else None,
            k=data.get("k"),
            filtration_ks=list(data.get("filtration_ks", [])),
            splitting_verified=data.get("splitting_verified", False),
            local_factor_reports=[cls.from_dict(f) for f in data.get("local_factor_reports", [])],
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def table(self) -> str:
        """Human-readable summary."""
        lines = [
            f"ring order      {self.ring_order}",
            f"characteristic  {self.char}",
            f"local           {'yes' if self.is_local else 'no'}",
            f"units           {self.unit_count}",
            f"unit group      {format_group(self.unit_group_type)}",
        ]
        if self.is_local:
            p, lam = self.residue
            lines += [
                f"residue field   F_{p**lam} (p={p}, lambda={lam})",
                f"1+m             {format_group(self.h_type)}",
                f"k               {self.k}",
                f"filtration k_i  {self.filtration_ks}",
            ]
        lines.append(f"split verified  {'yes' if self.splitting_verified else 'no'}")
        for i, f in enumerate(self.local_factor_reports, 1):
            lines.append(f"-- local factor {i}")
            lines += ["   " + ln for ln in f.table().splitlines()]
        return "\n".join(lines)


def _analyze_local(r: FiniteRing, m: AdditiveSubgroup, units: AbelianGroupType, unit_count: int) -> UnitGroupReport:
    p, lam = residue_field_params(r, m)
    q = p**lam
    h = blackbox_structure(one_plus(r, m))
    k = exact_log(m.order, q)
    ks = filtration_report(r, m)
    if unit_count != (q - 1) * q**k:
        raise TheoremViolation(f"{unit_count} units, expected (q-1) q^k = {(q - 1) * q**k}")
    if exponent(h) > p**k:
        raise TheoremViolation(f"exponent of 1+m is {exponent(h)} > p^k = {p**k}")
    return UnitGroupReport(
        ring_order=r.order,
        char=r.characteristic,
        is_local=True,
        unit_count=unit_count,
        unit_group_type=units,
        residue=(p, lam),
        h_type=h,
        k=k,
        filtration_ks=ks,
        splitting_verified=units == group_product(cyclic(q - 1), h),
    )


def analyze(r: FiniteRing, cap: int | None = None) -> UnitGroupReport:
    """Full unit-group report; non-local rings are split into local factors."""
    _check_size(r, cap)
    G, units = unit_group(r, cap)
    local, m = is_local(r)
    if local:
        return _analyze_local(r, m, units, G.order)
    factors = [analyze(factor_ring(r, e), cap) for e in primitive_idempotents(r)]
    product = TRIVIAL
    for f in factors:
        product = group_product(product, f.unit_group_type)
    if product != units:
        raise TheoremViolation(f"units {units} differ from the product of local factors {product}")
    return UnitGroupReport(
        ring_order=r.order,
        char=r.characteristic,
        is_local=False,
        unit_count=G.order,
        unit_group_type=units,
        splitting_verified=all(f.splitting_verified for f in factors),
        local_factor_reports=factors,
    )


@dataclass(frozen=True)
class ExactSequenceCheck:
    """Counts in ``1 -> 1+I -> A^* -> (A/I)^* -> 1``."""

    units: int
    one_plus_ideal: int
    quotient_units: int

    @property
    def holds(self) -> bool:
        return self.units == self.one_plus_ideal * self.quotient_units

    def __bool__(self) -> bool:
        return self.holds


def exact_sequence_check(r: FiniteRing, ideal: AdditiveSubgroup) -> ExactSequenceCheck:
    """Compare ``|A^*|`` with ``|1+I| * |(A/I)^*|`` for an ideal ``I`` of nilpotents."""
    if not ideal.is_ideal:
        raise ValueError("expected an ideal")
    if not nilpotent_mask(r)[ideal.indices].all():
        raise ValueError("the ideal must consist of nilpotent elements")
    units = units_mask(r)
    ones = r.index_of(r.add_many(ideal.coords(), r.one.array()))
    if not units[ones].all():
        raise TheoremViolation("1 + I contains a non-unit")
    q = quotient(r, ideal)
    return ExactSequenceCheck(int(units.sum()), len(ones), len(q.units()))


def units_for_each_polynomial(p: int, m: int, lam: int, cap: int | None = None) -> dict[tuple[int, ...], AbelianGroupType]:
    """Unit-group type of ``(Z/p^m)[t]/(f)`` for every monic irreducible ``f`` of degree ``lam``."""
    from .builders import galois_ring, irreducible_polynomials

    return {tuple(f): unit_group(galois_ring(p, m, lam, f=f, cap=cap), cap)[1]
            for f in irreducible_polynomials(p, lam)}
