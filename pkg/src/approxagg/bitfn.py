"""Boolean functions on n voter bits stored as packed truth tables.

A function f:{0,1}^n -> {0,1} is stored as an integer whose bit x equals
f(x), where voter i occupies bit (i-1) of the input index (voter 1 is
least significant).  Coalitions are plain int masks with the same bit
layout.  All probabilities coming out of exhaustive counts are exact
``fractions.Fraction`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

MAX_ARITY = 24


def popcount(x: int) -> int:
    return bin(x).count("1")


def coalition_mask(members) -> int:
    """Mask for a coalition given as an iterable of 1-based voter indices."""
    mask = 0
    for i in members:
        if i < 1:
            raise ValueError(f"voter index must be >= 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def coalition_members(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1]


@dataclass(frozen=True)
class BoolFn:
    """Truth table of a boolean function on `arity` voter bits."""

    arity: int
    table: int

    def __post_init__(self):
        if not 1 <= self.arity <= MAX_ARITY:
            raise ValueError(f"arity must be in [1, {MAX_ARITY}], got {self.arity}")
        if not 0 <= self.table < 1 << (1 << self.arity):
            raise ValueError("truth table does not fit arity")

    @property
    def size(self) -> int:
        return 1 << self.arity

    def evaluate(self, x: int) -> int:
        if not 0 <= x < self.size:
            raise ValueError(f"input {x} out of range for arity {self.arity}")
        return (self.table >> x) & 1

    __call__ = evaluate

    def negate(self) -> "BoolFn":
        return BoolFn(self.arity, self.table ^ ((1 << self.size) - 1))

    def serialize(self) -> str:
        digits = max(1, (self.size + 3) // 4)
        return f"n={self.arity}:{self.table:0{digits}x}"

    @classmethod
    def parse(cls, text: str) -> "BoolFn":
        head, _, hexpart = text.strip().partition(":")
        if not head.startswith("n=") or not hexpart:
            raise ValueError(f"malformed truth table serialization: {text!r}")
        return cls(int(head[2:]), int(hexpart, 16))


# ---------------------------------------------------------------------------
# named families


def constant(bit: int, n: int) -> BoolFn:
    return BoolFn(n, ((1 << (1 << n)) - 1) if bit else 0)


def oligarchy(members: int, n: int) -> BoolFn:
    """f(x) = 1 iff every coalition member voted 1 (empty coalition -> constant 1)."""
    _check_coalition(members, n)
    table = 0
    for x in range(1 << n):
        if x & members == members:
            table |= 1 << x
    return BoolFn(n, table)


def linear(members: int, n: int) -> BoolFn:
    """Xor of the coalition members' bits (empty coalition -> constant 0)."""
    _check_coalition(members, n)
    table = 0
    for x in range(1 << n):
        if popcount(x & members) & 1:
            table |= 1 << x
    return BoolFn(n, table)


def dictator(i: int, n: int) -> BoolFn:
    return oligarchy(coalition_mask([i]), n)


def majority(n: int, support: int | None = None) -> BoolFn:
    """Strict majority over an odd-size support coalition (default: all voters)."""
    if support is None:
        support = (1 << n) - 1
    _check_coalition(support, n)
    k = popcount(support)
    if k % 2 == 0:
        raise ValueError("majority requires an odd number of supporting voters")
    table = 0
    for x in range(1 << n):
        if 2 * popcount(x & support) > k:
            table |= 1 << x
    return BoolFn(n, table)


def make_family(kind: str, support: int | None, n: int) -> BoolFn:
    if kind == "oligarchy":
        return oligarchy(support or 0, n)
    if kind == "linear":
        return linear(support or 0, n)
    if kind == "dictator":
        if support is None or popcount(support) != 1:
            raise ValueError("dictator needs a singleton coalition")
        return BoolFn(n, oligarchy(support, n).table)
    if kind == "constant":
        return constant(1 if support else 0, n)
    if kind == "majority":
        return majority(n, support)
    raise ValueError(f"unknown family kind {kind!r}")


def classify(f: BoolFn) -> dict[str, int | None]:
    """Detect membership in the oligarchy / linear families by exhaustive comparison.

    Returns a dict with keys "oligarchy" and "linear"; values are the
    coalition mask when f belongs to the family, else None.
    """
    tags: dict[str, int | None] = {"oligarchy": None, "linear": None}
    for mask in range(1 << f.arity):
        if tags["oligarchy"] is None and oligarchy(mask, f.arity) == f:
            tags["oligarchy"] = mask
        if tags["linear"] is None and linear(mask, f.arity) == f:
            tags["linear"] = mask
    return tags


# ---------------------------------------------------------------------------
# measures


def _check_voter(i: int, n: int):
    if not 1 <= i <= n:
        raise ValueError(f"voter {i} out of range for arity {n}")


def _check_coalition(mask: int, n: int):
    if mask >> n:
        raise ValueError(f"coalition mask {mask:#x} has voters above arity {n}")


def _low_half_mask(n: int, b: int) -> int:
    """Mask over table positions whose input index has bit b clear."""
    block = (1 << (1 << b)) - 1
    mask = 0
    for start in range(0, 1 << n, 1 << (b + 1)):
        mask |= block << start
    return mask


def distance_uniform(f: BoolFn, g: BoolFn) -> Fraction:
    """d(f, g) = fraction of inputs where the two functions differ."""
    if f.arity != g.arity:
        raise ValueError("arity mismatch")
    return Fraction(popcount(f.table ^ g.table), f.size)


def distance_biased(f: BoolFn, g: BoolFn, p: Fraction) -> Fraction:
    """Disagreement probability when each input bit is i.i.d. Bernoulli(p)."""
    if f.arity != g.arity:
        raise ValueError("arity mismatch")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("bias must lie in [0, 1]")
    diff = f.table ^ g.table
    total = Fraction(0)
    for x in range(f.size):
        if (diff >> x) & 1:
            ones = popcount(x)
            total += p**ones * (1 - p) ** (f.arity - ones)
    return total


def influence(i: int, f: BoolFn) -> Fraction:
    """Probability that voter i flips the output by flipping their bit."""
    _check_voter(i, f.arity)
    b = i - 1
    low = _low_half_mask(f.arity, b)
    shifted = (f.table >> (1 << b)) & low
    return Fraction(popcount((f.table & low) ^ shifted), f.size >> 1)


def ignorability(i: int, f: BoolFn) -> Fraction:
    """Probability that f returns 1 conditioned on voter i voting 0."""
    _check_voter(i, f.arity)
    low = _low_half_mask(f.arity, i - 1)
    return Fraction(popcount(f.table & low), f.size >> 1)


def expectation(f: BoolFn) -> Fraction:
    return Fraction(popcount(f.table), f.size)


def pareto_check(f: BoolFn) -> bool:
    """True iff unanimous inputs are echoed: f(all zeros)=0 and f(all ones)=1."""
    return f.evaluate(0) == 0 and f.evaluate(f.size - 1) == 1


def junta_projection(f: BoolFn, members: int) -> BoolFn:
    """Restrict f to a coalition: at each input take the more frequent value
    of f over all completions of the non-member bits (ties resolved to 1)."""
    _check_coalition(members, f.arity)
    positions = [b for b in range(f.arity) if (members >> b) & 1]
    completions = 1 << (f.arity - len(positions))
    ones = {}
    for x in range(f.size):
        key = tuple((x >> b) & 1 for b in positions)
        ones[key] = ones.get(key, 0) + ((f.table >> x) & 1)
    table = 0
    for x in range(f.size):
        key = tuple((x >> b) & 1 for b in positions)
        if 2 * ones[key] >= completions:
            table |= 1 << x
    return BoolFn(f.arity, table)


def depends_only_on(f: BoolFn, members: int) -> bool:
    """True iff every voter outside the coalition has zero influence."""
    for i in range(1, f.arity + 1):
        if not (members >> (i - 1)) & 1 and influence(i, f) != 0:
            return False
    return True
