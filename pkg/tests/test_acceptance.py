"""The ten acceptance criteria, each checked with exact equality.

Run ``pytest tests/test_acceptance.py -v`` (the PASS/FAIL lines are repeated in
the terminal summary) or ``python tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import cyclic_realizable_orders, ditor_cardinalities  # noqa: E402
from ringunits.analyzer import analyze, filtration_report, one_plus, verify_power_lemma  # noqa: E402
from ringunits.arith import factor  # noqa: E402
from ringunits.builders import (  # noqa: E402
    BuildRecipe,
    build_example_2,
    build_example_p,
    build_from_recipe,
    galois_ring,
)
from ringunits.cli import main as cli_main  # noqa: E402
from ringunits.groups import AbelianGroupType, canonical_type, cyclic, format_group  # noqa: E402
from ringunits.realizability import (  # noqa: E402
    cyclic_realizable,
    enumerate_cardinalities,
    group_realizable,
    local_factor_necessary,
)
from ringunits.ring import ideal_power_chain, is_local  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, title: str):
    """Run a criterion, store and print its PASS/FAIL line, re-raise failures."""

    def wrap(fn):
        def run():
            start = time.perf_counter()
            try:
                detail = fn()
            except AssertionError as exc:
                line = f"criterion {number:>2} FAIL  {title}: {exc}"
                RESULTS[number] = (False, line)
                print(line)
                raise
            line = f"criterion {number:>2} PASS  {title} ({detail}; {time.perf_counter() - start:.1f}s)"
            RESULTS[number] = (True, line)
            print(line)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def power(g: AbelianGroupType, k: int) -> AbelianGroupType:
    return AbelianGroupType({p: list(e) * k for p, e in g.primary.items()})


def verify_via_cli(args: list[str]) -> None:
    import contextlib
    import io

    with contextlib.redirect_stdout(io.StringIO()):
        code = cli_main(["verify", *args])
    assert code == 0, f"verify {' '.join(args)} exited {code}"


# -- sweeps shared with criterion 9 ---------------------------------------------------


def galois_params():
    for p in (2, 3, 5):
        for lam in (1, 2, 3):
            for k in (0, 1, 2):
                if p ** (lam * (k + 1)) <= 1 << 18:
                    yield p, lam, k


def odd_params():
    for P in ([1], [2], [1, 1], [2, 1]):
        yield 1, P
    for P in ([1], [1, 1]):
        yield 2, P


def two_params():
    for lam in (1, 2):
        for a0 in (1, 2, 3):
            for P in ([], [1], [1, 1], [2]):
                if not P or a0 >= P[0] - 1:
                    yield lam, a0, P


@lru_cache(maxsize=None)
def galois_reports():
    return {(p, lam, k): analyze(galois_ring(p, k + 1, lam)) for p, lam, k in galois_params()}


@lru_cache(maxsize=None)
def odd_reports():
    return {(lam, tuple(P)): analyze(build_from_recipe(BuildRecipe.odd(3, lam, P))) for lam, P in odd_params()}


@lru_cache(maxsize=None)
def two_reports():
    return {(lam, a0, tuple(P)): analyze(build_from_recipe(BuildRecipe.two(lam, a0, P)))
            for lam, a0, P in two_params()}


@lru_cache(maxsize=None)
def example_reports():
    return {"p3": analyze(build_example_p(3)), "a3": analyze(build_example_2(3)), "a4": analyze(build_example_2(4))}


def exponent_count(ring, ideal, p: int) -> int:
    """Number of ``u`` in ``1 + ideal`` with ``u^p = 1``."""
    u = one_plus(ring, ideal).elements
    return int(np.all(ring.pow_many(u, p) == ring.one.array(), axis=1).sum())


# -- criteria ----------------------------------------------------------------------------


@record(1, "Galois rings: unit count, |1+m| and filtration quotients")
def test_criterion_01_galois_rings():
    reports = galois_reports()
    for (p, lam, k), rep in reports.items():
        q = p**lam
        assert rep.unit_count == (q - 1) * q**k, (p, lam, k, rep.unit_count)
        assert rep.h_type.order == q**k, (p, lam, k)
        r = galois_ring(p, k + 1, lam)
        chain = ideal_power_chain(r)
        ks = filtration_report(r)
        for upper, lower, ki in zip(chain, chain[1:], ks):
            assert upper.order == lower.order * q**ki
    return f"{len(reports)} rings"


@record(2, "odd family p=3 matches F_q^* x P^lambda")
def test_criterion_02_odd_family():
    for lam, P in odd_params():
        verify_via_cli(["--family", "odd", "--p", "3", "--lambda", str(lam), "--partition", ",".join(map(str, P))])
        expected = cyclic(3**lam - 1) * power(AbelianGroupType({3: P}), lam)
        got = odd_reports()[(lam, tuple(P))].unit_group_type
        assert got == expected, f"lambda={lam} P={P}: {got} != {expected}"
    return f"{len(list(odd_params()))} cases"


def two_family_expected(lam: int, a0: int, P: list[int]) -> AbelianGroupType:
    if a0 == 1:
        one_plus_2r = AbelianGroupType({2: [1] * lam})
    else:
        one_plus_2r = canonical_type([2, 2 ** (a0 - 1)] + [2**a0] * (lam - 1))
    return cyclic(2**lam - 1) * one_plus_2r * power(AbelianGroupType({2: P}), lam)


@record(3, "two family matches the predicted product")
def test_criterion_03_two_family():
    for lam, a0, P in two_params():
        verify_via_cli(["--family", "two", "--lambda", str(lam), "--a0", str(a0),
                        "--partition", ",".join(map(str, P))])
        got = two_reports()[(lam, a0, tuple(P))].unit_group_type
        assert got == two_family_expected(lam, a0, P), f"lambda={lam} a0={a0} P={P}: {got}"
    return f"{len(list(two_params()))} cases"


@record(4, "Example ring at p=3: units and exponent-3 count")
def test_criterion_04_example_p():
    rep = example_reports()["p3"]
    assert rep.ring_order == 6561
    assert rep.unit_group_type == canonical_type([8, 9, 3, 3, 3, 3]), str(rep.unit_group_type)
    r = build_example_p(3)
    _, m = is_local(r)
    count = exponent_count(r, m, 3)
    assert count == 3**5, count
    return f"units {format_group(rep.unit_group_type)}, {count} elements of exponent 3"


@record(5, "Example ring at p=2: 1+m types for a0=3,4 and exponent-2 count")
def test_criterion_05_example_2():
    reps = example_reports()
    assert reps["a3"].ring_order == 4096 and reps["a4"].ring_order == 16384
    assert reps["a3"].h_type == canonical_type([2, 2, 2, 4, 4, 8]), str(reps["a3"].h_type)
    assert reps["a4"].h_type == canonical_type([2, 2, 2, 4, 8, 16]), str(reps["a4"].h_type)
    r = build_example_2(3)
    _, m = is_local(r)
    count = exponent_count(r, m, 2)
    assert count == 2**6, count
    return f"1+m = {format_group(reps['a3'].h_type)} and {format_group(reps['a4'].h_type)}"


@record(6, "power lemmas on Galois rings and the depth-1 control case")
def test_criterion_06_lemmas():
    checked = 0
    for lam in (1, 2):
        for a0 in (1, 2, 3):
            res = verify_power_lemma(galois_ring(3, a0 + 1, lam), 3)
            assert res, f"p=3 lambda={lam} a0={a0}: {res.describe()}"
            checked += res.checked
        for a0 in (1, 2, 3, 4):
            res = verify_power_lemma(galois_ring(2, a0 + 1, lam), 2, 2)
            assert res, f"p=2 lambda={lam} a0={a0}: {res.describe()}"
            checked += res.checked
    control = verify_power_lemma(galois_ring(2, 3, 1), 2, 1)
    assert not control, "depth-1 control unexpectedly holds"
    mu, l = control.counterexample
    assert mu.coeffs == (2,) and l == 1, control.describe()
    return f"{checked} (mu, l) pairs; control {control.describe()}"


@record(7, "cyclic unit groups agree with the brute-force oracle")
def test_criterion_07_cyclic():
    oracle = cyclic_realizable_orders(200)
    ours = {n for n in range(1, 201) if cyclic_realizable(n).realizable}
    assert ours == oracle, f"differ at {sorted(ours ^ oracle)}"
    assert cyclic_realizable(8).witness == BuildRecipe.field(9)
    assert cyclic_realizable(16).witness == BuildRecipe.field(17)
    assert not cyclic_realizable(32).realizable
    assert cyclic_realizable(4).realizable
    for k in range(3, 15):
        assert not cyclic_realizable(2**k, {2}).realizable, k
    return f"{len(ours)} realizable n <= 200"


@record(8, "unit counts agree with the recursive divisor oracle")
def test_criterion_08_cardinalities():
    ours = enumerate_cardinalities(100)
    assert set(ours) == ditor_cardinalities(100)
    assert [n for n in ours if n % 2 and n <= 63] == [1, 3, 7, 9, 15, 21, 27, 31, 45, 49, 63]
    assert not {5, 11, 13, 25} & set(ours)
    return f"{len(ours)} values <= 100"


def _local_h_types():
    reports = [*galois_reports().values(), *odd_reports().values(), *two_reports().values(),
               *example_reports().values()]
    out = set()
    for rep in reports:
        stack = [rep]
        while stack:
            r = stack.pop()
            if r.is_local:
                out.add((r.residue[0], r.residue[1], r.h_type))
            stack.extend(r.local_factor_reports)
    return out


@record(9, "exponent bound rejects the counterexample type and no constructed ring")
def test_criterion_09_exponent_bound():
    for p in (2, 3, 5):
        h = canonical_type([p**3] + [p] * (2 * 2 - 3))
        assert not local_factor_necessary(p, 2, h), p
    sweep = _local_h_types()
    rejected = [(p, lam, format_group(h)) for p, lam, h in sweep if not local_factor_necessary(p, lam, h)]
    assert not rejected, f"false rejections: {rejected}"
    return f"{len(sweep)} distinct local types accepted"


def random_group(rng: random.Random, max_order: int) -> AbelianGroupType:
    n = rng.randint(1, max_order)
    parts = {}
    for p, e in factor(n):
        exps = []
        while e:
            a = rng.randint(1, e)
            exps.append(a)
            e -= a
        parts[p] = exps
    return AbelianGroupType(parts)


@record(10, "random Realizable verdicts rebuild to the queried group")
def test_criterion_10_end_to_end():
    rng = random.Random(20241019)
    seen = set()
    checked = 0
    attempts = 0
    while checked < 50:
        attempts += 1
        assert attempts < 20000, "too few Realizable verdicts sampled"
        g = random_group(rng, 1 << 14)
        if g in seen:
            continue
        seen.add(g)
        verdict = group_realizable(g)
        if not verdict.realizable:
            continue
        got = analyze(build_from_recipe(verdict.witness)).unit_group_type
        assert got == g, f"{format_group(g)}: witness {verdict.witness} gives {format_group(got)}"
        checked += 1
    return f"{checked} witnesses from {attempts} samples"


CRITERIA = [
    test_criterion_01_galois_rings, test_criterion_02_odd_family, test_criterion_03_two_family,
    test_criterion_04_example_p, test_criterion_05_example_2, test_criterion_06_lemmas,
    test_criterion_07_cyclic, test_criterion_08_cardinalities, test_criterion_09_exponent_bound,
    test_criterion_10_end_to_end,
]


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        try:
            crit()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
