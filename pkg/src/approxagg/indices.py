"""Inconsistency and dependency indices, exact and by Monte Carlo.

Exact values are Fractions obtained from full enumeration of the profile
space.  Conjunction-style agendas additionally get an O(m n 2^n) path
via zeta/Moebius transforms over the subset lattice, and xor-style
agendas one via integer Walsh-Hadamard sums; both are cross-checked
against plain enumeration in the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .agenda import Agenda
from .bitfn import BoolFn, popcount
from .fourier import transform
from .mechanism import (
    IndependentMechanism,
    Mechanism,
    Profile,
    TableMechanism,
    _outputs_for_samples,
    apply,
    hoeffding_halfwidth,
    output_vector,
    profile_column,
    sample_profiles,
)


@dataclass(frozen=True)
class IndexReport:
    value: Fraction | float
    mode: str                      # "exact" | "mc"
    samples: int | None = None
    ci: tuple[float, float] | None = None
    seed: int | None = None


# ---------------------------------------------------------------------------
# inconsistency index


def inconsistency_index(F: Mechanism, agenda: Agenda, voters: int,
                        mode: str = "exact", samples: int = 100_000,
                        seed: int | None = None) -> IndexReport:
    """Probability that the aggregate of a uniform consistent profile is
    inconsistent."""
    if mode == "exact":
        outputs = output_vector(F, agenda, voters)
        bad = sum(1 for out in outputs if not agenda.is_consistent(out))
        return IndexReport(Fraction(bad, len(outputs)), "exact")
    if mode == "mc":
        if seed is None:
            raise ValueError("mc mode requires a seed")
        import numpy as np

        rows = sample_profiles(agenda, voters, samples, seed)
        outs = _outputs_for_samples(F, agenda, rows)
        member = np.zeros(1 << agenda.issues, dtype=bool)
        member[list(agenda.consistent)] = True
        estimate = float((~member[outs]).mean())
        half = hoeffding_halfwidth(samples)
        return IndexReport(estimate, "mc", samples,
                           (max(0.0, estimate - half), min(1.0, estimate + half)), seed)
    raise ValueError(f"unknown mode {mode!r}")


def zeta_superset(values: list[int], n: int) -> list[int]:
    """In each entry z, accumulate the sum over all supersets of z."""
    out = list(values)
    for b in range(n):
        bit = 1 << b
        for z in range(1 << n):
            if not z & bit:
                out[z] += out[z | bit]
    return out


def moebius_superset(values: list[int], n: int) -> list[int]:
    out = list(values)
    for b in range(n):
        bit = 1 << b
        for z in range(1 << n):
            if not z & bit:
                out[z] -= out[z | bit]
    return out


def conjunction_counts(premise_fns: list[BoolFn]) -> tuple[list[int], list[int]]:
    """Per AND-column value z: number of premise-column tuples with that
    coordinatewise AND, and how many of them make every premise function 1.
    """
    n = premise_fns[0].arity
    m = len(premise_fns)
    size = 1 << n
    prod = [1] * size
    for f in premise_fns:
        ones = zeta_superset([(f.table >> x) & 1 for x in range(size)], n)
        prod = [p * c for p, c in zip(prod, ones)]
    all_one = moebius_superset(prod, n)
    totals = [(2**m - 1) ** (n - popcount(z)) for z in range(size)]
    return totals, all_one


def ic_conjunction(premise_fns: list[BoolFn], h: BoolFn) -> Fraction:
    """Exact inconsistency index of <f^1..f^m, h> on the conjunction agenda."""
    n = premise_fns[0].arity
    m = len(premise_fns)
    totals, all_one = conjunction_counts(premise_fns)
    bad = 0
    for z in range(1 << n):
        bad += totals[z] - all_one[z] if h.evaluate(z) else all_one[z]
    return Fraction(bad, 1 << (m * n))


def ic_xor(fns: list[BoolFn]) -> Fraction:
    """Exact inconsistency index of an independent mechanism on the xor
    agenda (m issues, conclusion = xor of the first m-1), via the spectral
    product sum."""
    n = fns[0].arity
    m = len(fns)
    weights = [transform(f).weights for f in fns]
    total = 0
    for mask in range(1 << n):
        prod = 1
        for w in weights:
            prod *= w[mask]
        total += prod
    return Fraction((1 << (m * n)) - total, 1 << (m * n + 1))


def min_ic_over_conclusion(premise_fns: list[BoolFn]) -> tuple[Fraction, BoolFn]:
    """Minimal conjunction-agenda inconsistency over the choice of the
    conclusion function, with the minimizing function (ties resolved to 1)."""
    n = premise_fns[0].arity
    m = len(premise_fns)
    totals, all_one = conjunction_counts(premise_fns)
    best = 0
    table = 0
    for z in range(1 << n):
        if 2 * all_one[z] >= totals[z]:
            table |= 1 << z
            best += totals[z] - all_one[z]
        else:
            best += all_one[z]
    return Fraction(best, 1 << (m * n)), BoolFn(n, table)


# ---------------------------------------------------------------------------
# dependency index


def _column_groups(agenda: Agenda, voters: int, j: int) -> dict[int, list[int]]:
    """Profile indices grouped by the issue-j column value."""
    from .mechanism import _profile_columns

    cols = _profile_columns(agenda, voters)
    groups: dict[int, list[int]] = {}
    for idx, tup in enumerate(cols):
        groups.setdefault(tup[j - 1], []).append(idx)
    return groups


def dependency_index(F: Mechanism, agenda: Agenda, voters: int, j: int,
                     mode: str = "exact", samples: int = 100_000,
                     seed: int | None = None) -> IndexReport:
    """E over X of Pr over Y of the issue-j aggregate changing, where Y is a
    fresh profile sharing X's issue-j column."""
    if not 1 <= j <= agenda.issues:
        raise ValueError(f"issue {j} out of range")
    if mode == "exact":
        outputs = output_vector(F, agenda, voters)
        total = len(outputs)
        acc = Fraction(0)
        for idxs in _column_groups(agenda, voters, j).values():
            ones = sum((outputs[i] >> (j - 1)) & 1 for i in idxs)
            zeros = len(idxs) - ones
            acc += Fraction(2 * ones * zeros, len(idxs))
        return IndexReport(acc / total, "exact")
    if mode == "mc":
        if seed is None:
            raise ValueError("mc mode requires a seed")
        by_bit = _opinions_by_issue_bit(agenda, j)
        rng = random.Random(seed)
        opinions = agenda.consistent
        hits = 0
        for _ in range(samples):
            x = [rng.randrange(len(opinions)) for _ in range(voters)]
            y = [rng.choice(by_bit[(opinions[r] >> (j - 1)) & 1]) for r in x]
            fx = apply(F, agenda, Profile(tuple(x)))
            fy = apply(F, agenda, Profile(tuple(y)))
            hits += ((fx ^ fy) >> (j - 1)) & 1
        estimate = hits / samples
        half = hoeffding_halfwidth(samples)
        return IndexReport(estimate, "mc", samples,
                           (max(0.0, estimate - half), min(1.0, estimate + half)), seed)
    raise ValueError(f"unknown mode {mode!r}")


def dependency_index_max(F: Mechanism, agenda: Agenda, voters: int,
                         mode: str = "exact", samples: int = 100_000,
                         seed: int | None = None) -> IndexReport:
    reports = [dependency_index(F, agenda, voters, j, mode, samples,
                                None if seed is None else seed + j)
               for j in range(1, agenda.issues + 1)]
    best = max(reports, key=lambda r: r.value)
    return best


def _opinions_by_issue_bit(agenda: Agenda, j: int) -> dict[int, list[int]]:
    by_bit: dict[int, list[int]] = {0: [], 1: []}
    for idx, op in enumerate(agenda.consistent):
        by_bit[(op >> (j - 1)) & 1].append(idx)
    return by_bit


# ---------------------------------------------------------------------------
# single-shot local tests


def consistency_test(F: Mechanism, agenda: Agenda, voters: int, seed: int) -> bool:
    """One-shot test: accept iff a random profile aggregates consistently."""
    rng = random.Random(seed)
    rows = tuple(rng.randrange(len(agenda.consistent)) for _ in range(voters))
    return agenda.is_consistent(apply(F, agenda, Profile(rows)))


def independence_test(F: Mechanism, agenda: Agenda, voters: int, j: int, seed: int) -> bool:
    """One-shot test: resample every voter without touching the issue-j bit
    and accept iff the issue-j aggregate is unchanged."""
    rng = random.Random(seed)
    by_bit = _opinions_by_issue_bit(agenda, j)
    opinions = agenda.consistent
    x = tuple(rng.randrange(len(opinions)) for _ in range(voters))
    y = tuple(rng.choice(by_bit[(opinions[r] >> (j - 1)) & 1]) for r in x)
    fx = apply(F, agenda, Profile(x))
    fy = apply(F, agenda, Profile(y))
    return ((fx ^ fy) >> (j - 1)) & 1 == 0


# ---------------------------------------------------------------------------
# proof constructions


def nearest_consistent(F: Mechanism, agenda: Agenda, voters: int) -> TableMechanism:
    """Redirect every inconsistent output to a nearest consistent opinion
    (Hamming distance, ties to the smallest opinion); the redirected
    mechanism is consistent and differs from F on exactly the inconsistent
    profiles."""
    outputs = []
    for out in output_vector(F, agenda, voters):
        if agenda.is_consistent(out):
            outputs.append(out)
        else:
            outputs.append(min(agenda.consistent,
                               key=lambda c: (popcount(c ^ out), c)))
    return TableMechanism(agenda, voters, tuple(outputs))


def fix_issue_dependency(F: Mechanism, agenda: Agenda, voters: int, j: int) -> TableMechanism:
    """Make issue j depend only on its own column: output bit j becomes the
    majority answer of F over profiles sharing the column (ties to 1)."""
    outputs = list(output_vector(F, agenda, voters))
    bit = 1 << (j - 1)
    for idxs in _column_groups(agenda, voters, j).values():
        ones = sum(1 for i in idxs if outputs[i] & bit)
        value = bit if 2 * ones >= len(idxs) else 0
        for i in idxs:
            outputs[i] = (outputs[i] & ~bit) | value
    return TableMechanism(agenda, voters, tuple(outputs))


def independent_approximation(F: Mechanism, agenda: Agenda, voters: int) -> IndependentMechanism:
    """Independent mechanism whose issue-j function answers the majority of
    F's issue-j outputs over profiles with a given column (ties to 1)."""
    outputs = output_vector(F, agenda, voters)
    fns = []
    for j in range(1, agenda.issues + 1):
        bit = 1 << (j - 1)
        table = 0
        for col, idxs in _column_groups(agenda, voters, j).items():
            ones = sum(1 for i in idxs if outputs[i] & bit)
            if 2 * ones >= len(idxs):
                table |= 1 << col
        fns.append(BoolFn(voters, table))
    return IndependentMechanism(tuple(fns))
