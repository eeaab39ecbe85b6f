"""Aggregation mechanisms over an agenda's consistent profiles.

A profile is one opinion per voter; profiles are indexed by treating the
voters' opinion indices as digits base |agenda| (voter 1 least
significant).  Independent mechanisms hold one boolean function per
issue; table mechanisms list an explicit m-bit output per profile.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .agenda import Agenda
from .bitfn import BoolFn, constant, linear, majority, oligarchy

EXACT_PROFILE_BUDGET = 1 << 26


@dataclass(frozen=True)
class Profile:
    """Row indices into the agenda's consistent-opinion list, one per voter."""

    rows: tuple[int, ...]


@dataclass(frozen=True)
class IndependentMechanism:
    fns: tuple[BoolFn, ...]

    def __post_init__(self):
        if not self.fns:
            raise ValueError("need at least one issue function")
        if any(f.arity != self.fns[0].arity for f in self.fns):
            raise ValueError("issue functions must share one arity")

    @property
    def voters(self) -> int:
        return self.fns[0].arity

    @property
    def issues(self) -> int:
        return len(self.fns)

    def serialize(self) -> str:
        lines = [f"independent n={self.voters} m={self.issues}"]
        lines += [f.serialize() for f in self.fns]
        return "\n".join(lines)


def systematic(f: BoolFn, issues: int) -> IndependentMechanism:
    """Aggregate every issue with the same function."""
    return IndependentMechanism((f,) * issues)


@dataclass(frozen=True)
class TableMechanism:
    agenda: Agenda
    voters: int
    outputs: tuple[int, ...]  # m-bit opinion per profile index

    def __post_init__(self):
        if len(self.outputs) != len(self.agenda.consistent) ** self.voters:
            raise ValueError("output table size does not match the profile space")

    @property
    def issues(self) -> int:
        return self.agenda.issues

    def serialize(self) -> str:
        from .agenda import opinion_to_str

        lines = [f"table n={self.voters}"]
        lines += [f"{i},{opinion_to_str(out, self.issues)}"
                  for i, out in enumerate(self.outputs)]
        return "\n".join(lines)


Mechanism = IndependentMechanism | TableMechanism


def parse_mechanism(text: str, agenda: Agenda | None = None) -> Mechanism:
    """Inverse of the serialize methods; table mechanisms need their agenda."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty mechanism text")
    head, *body = lines
    if head.startswith("independent"):
        return IndependentMechanism(tuple(BoolFn.parse(ln) for ln in body))
    if head.startswith("table"):
        if agenda is None:
            raise ValueError("table mechanisms need an agenda to parse against")
        kv = dict(tok.split("=", 1) for tok in head.split()[1:])
        voters = int(kv["n"])
        outputs = [0] * (len(agenda.consistent) ** voters)
        from .agenda import opinion_from_str

        for ln in body:
            idx, bits = ln.split(",")
            outputs[int(idx)] = opinion_from_str(bits)
        return TableMechanism(agenda, voters, tuple(outputs))
    raise ValueError(f"unknown mechanism header {head!r}")


def profile_index(agenda: Agenda, profile: Profile) -> int:
    base = len(agenda.consistent)
    idx = 0
    for r in reversed(profile.rows):
        idx = idx * base + r
    return idx


def profile_from_index(agenda: Agenda, voters: int, idx: int) -> Profile:
    base = len(agenda.consistent)
    rows = []
    for _ in range(voters):
        rows.append(idx % base)
        idx //= base
    return Profile(tuple(rows))


def profile_column(agenda: Agenda, profile: Profile, j: int) -> int:
    """Issue-j column of the profile as an n-bit integer (voter 1 = bit 0)."""
    col = 0
    for i, r in enumerate(profile.rows):
        col |= ((agenda.consistent[r] >> (j - 1)) & 1) << i
    return col


@lru_cache(maxsize=64)
def _profile_columns(agenda: Agenda, voters: int) -> list[tuple[int, ...]]:
    """Per profile index, the tuple of issue columns."""
    base = len(agenda.consistent)
    total = base**voters
    if total > EXACT_PROFILE_BUDGET:
        raise ValueError(f"profile space {total} exceeds the enumeration budget")
    out = []
    for idx in range(total):
        p = profile_from_index(agenda, voters, idx)
        out.append(tuple(profile_column(agenda, p, j) for j in range(1, agenda.issues + 1)))
    return out


def apply(F: Mechanism, agenda: Agenda, profile: Profile) -> int:
    """Aggregated m-bit opinion for a consistent profile."""
    for r in profile.rows:
        if not 0 <= r < len(agenda.consistent):
            raise ValueError("profile row is not a consistent-opinion index")
    if isinstance(F, TableMechanism):
        if F.agenda != agenda or len(profile.rows) != F.voters:
            raise ValueError("mechanism does not match agenda or voter count")
        return F.outputs[profile_index(agenda, profile)]
    if F.issues != agenda.issues or len(profile.rows) != F.voters:
        raise ValueError("dimension mismatch")
    out = 0
    for j in range(1, agenda.issues + 1):
        out |= F.fns[j - 1].evaluate(profile_column(agenda, profile, j)) << (j - 1)
    return out


def output_vector(F: Mechanism, agenda: Agenda, voters: int) -> tuple[int, ...]:
    """Outputs over the whole profile space, in profile-index order."""
    if isinstance(F, TableMechanism):
        if F.agenda != agenda or F.voters != voters:
            raise ValueError("mechanism does not match agenda or voter count")
        return F.outputs
    cols = _profile_columns(agenda, voters)
    fns = F.fns
    out = []
    for col_tuple in cols:
        bits = 0
        for j, col in enumerate(col_tuple):
            bits |= fns[j].evaluate(col) << j
        out.append(bits)
    return tuple(out)


def as_table(F: Mechanism, agenda: Agenda, voters: int) -> TableMechanism:
    if isinstance(F, TableMechanism):
        return F
    return TableMechanism(agenda, voters, output_vector(F, agenda, voters))


# ---------------------------------------------------------------------------
# distances


def mech_distance_exact(F: Mechanism, G: Mechanism, agenda: Agenda, voters: int) -> Fraction:
    """Pr[F(X) != G(X)] over uniform consistent profiles, exactly."""
    a = output_vector(F, agenda, voters)
    b = output_vector(G, agenda, voters)
    disagreements = sum(1 for x, y in zip(a, b) if x != y)
    return Fraction(disagreements, len(a))


def hoeffding_halfwidth(samples: int, confidence: float = 0.99) -> float:
    return math.sqrt(math.log(2 / (1 - confidence)) / (2 * samples))


def sample_profiles(agenda: Agenda, voters: int, samples: int, seed: int):
    """Uniform i.i.d. profiles as a (samples, voters) array of opinion indices."""
    import numpy as np

    rng = np.random.default_rng(seed)
    return rng.integers(0, len(agenda.consistent), size=(samples, voters))


def _outputs_for_samples(F: Mechanism, agenda: Agenda, rows):
    """Vectorized aggregation of sampled profiles (rows of opinion indices)."""
    import numpy as np

    samples, voters = rows.shape
    if isinstance(F, TableMechanism):
        base = len(agenda.consistent)
        idx = np.zeros(samples, dtype=np.int64)
        for i in range(voters - 1, -1, -1):
            idx = idx * base + rows[:, i]
        table = np.asarray(F.outputs, dtype=np.int64)
        return table[idx]
    opinions = np.asarray(agenda.consistent, dtype=np.int64)
    out = np.zeros(samples, dtype=np.int64)
    for j in range(agenda.issues):
        bits = (opinions[rows] >> j) & 1
        cols = np.zeros(samples, dtype=np.int64)
        for i in range(voters):
            cols |= bits[:, i] << i
        fn = F.fns[j]
        table = np.fromiter(((fn.table >> x) & 1 for x in range(fn.size)),
                            dtype=np.int64, count=fn.size)
        out |= table[cols] << j
    return out


def mech_distance_mc(F: Mechanism, G: Mechanism, agenda: Agenda, voters: int,
                     samples: int, seed: int):
    """Unbiased disagreement estimate with a 99% Hoeffding interval."""
    rows = sample_profiles(agenda, voters, samples, seed)
    hits = (_outputs_for_samples(F, agenda, rows) != _outputs_for_samples(G, agenda, rows))
    estimate = float(hits.mean())
    half = hoeffding_halfwidth(samples)
    return estimate, (max(0.0, estimate - half), min(1.0, estimate + half))


# ---------------------------------------------------------------------------
# perturbation


def perturb(F: Mechanism, agenda: Agenda, voters: int, flip_rate: float, seed: int) -> TableMechanism:
    """Rewrite each profile's output to a uniform random m-bit opinion with
    probability flip_rate (the replacement may be inconsistent)."""
    if not 0 <= flip_rate <= 1:
        raise ValueError("flip rate must lie in [0, 1]")
    base = output_vector(F, agenda, voters)
    rng = random.Random(seed)
    m = agenda.issues
    outputs = []
    for out in base:
        if rng.random() < flip_rate:
            outputs.append(rng.randrange(1 << m))
        else:
            outputs.append(out)
    return TableMechanism(agenda, voters, tuple(outputs))


def flip_profiles(F: Mechanism, agenda: Agenda, voters: int,
                  new_outputs: dict[int, int]) -> TableMechanism:
    """Override outputs at explicit profile indices."""
    outputs = list(output_vector(F, agenda, voters))
    for idx, out in new_outputs.items():
        outputs[idx] = out
    return TableMechanism(agenda, voters, tuple(outputs))


# ---------------------------------------------------------------------------
# closed consistent-independent families


def closed_families(kind: str, n: int) -> list[IndependentMechanism]:
    """Closed-form consistent independent mechanisms for a named agenda kind.

    kind is "conjunction:<k>", "xor:<k>" (k premises, one conclusion), or
    "id".  Members are deduplicated and sorted by serialization.
    """
    name, _, arg = kind.partition(":")
    members: set[tuple[BoolFn, ...]] = set()
    if name == "conjunction":
        k = int(arg)
        for mask in range(1 << n):
            g = oligarchy(mask, n)
            members.add((g,) * (k + 1))
        zero = constant(0, n)
        all_fns = [BoolFn(n, t) for t in range(1 << (1 << n))]
        for j in range(k):
            for others in _tuples(all_fns, k - 1):
                fns = list(others[:j]) + [zero] + list(others[j:]) + [zero]
                members.add(tuple(fns))
    elif name == "xor":
        k = int(arg)
        m = k + 1
        for mask in range(1 << n):
            chi = linear(mask, n)
            for signs in range(1 << (m - 1)):
                # last sign forced so the product of signs is +1
                negs = [(signs >> j) & 1 for j in range(m - 1)]
                negs.append(sum(negs) & 1)
                members.add(tuple(chi.negate() if s else chi for s in negs))
    elif name == "id":
        for t in range(1 << (1 << n)):
            f = BoolFn(n, t)
            members.add((f, f))
    else:
        raise ValueError(f"unsupported agenda kind {kind!r}")
    mechanisms = [IndependentMechanism(fns) for fns in members]
    mechanisms.sort(key=lambda mech: mech.serialize())
    return mechanisms


def _tuples(pool, length: int):
    import itertools

    return itertools.product(pool, repeat=length)


def maj_mechanism(n: int, issues: int) -> IndependentMechanism:
    return systematic(majority(n), issues)
