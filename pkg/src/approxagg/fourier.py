"""Walsh-Hadamard spectra of boolean functions in the +-1 convention.

Logical 1 maps to -1 and logical 0 to +1, so the xor of bits equals the
product of signs and the characters chi_S multiply over coordinatewise
xor of inputs.  Coefficients are exact: a spectrum stores the integer
correlation sums, and coefficient(S) = weights[S] / 2^n.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .bitfn import BoolFn, distance_uniform, linear, popcount

EXACT_TRIPLE_BITS = 26  # enumeration cap for the exact product identity


def sign(bit: int) -> int:
    return 1 - 2 * bit


@dataclass(frozen=True)
class FourierSpectrum:
    """Dense spectrum; entry S is the correlation of f with the character chi_S."""

    arity: int
    weights: tuple[int, ...]

    def coefficient(self, mask: int) -> Fraction:
        return Fraction(self.weights[mask], 1 << self.arity)

    def coefficients(self) -> list[Fraction]:
        size = 1 << self.arity
        return [Fraction(w, size) for w in self.weights]

    def serialize_rows(self) -> list[tuple[int, int, int]]:
        """Spectrum as (mask, numerator, log2_denominator) CSV rows."""
        rows = []
        for mask, w in enumerate(self.weights):
            c = self.coefficient(mask)
            rows.append((mask, c.numerator, (c.denominator - 1).bit_length()))
        return rows


def _fwht(values: list[int]) -> list[int]:
    out = list(values)
    h = 1
    while h < len(out):
        for i in range(0, len(out), h * 2):
            for j in range(i, i + h):
                a, b = out[j], out[j + h]
                out[j], out[j + h] = a + b, a - b
        h *= 2
    return out


def transform(f: BoolFn) -> FourierSpectrum:
    signs = [sign((f.table >> x) & 1) for x in range(f.size)]
    return FourierSpectrum(f.arity, tuple(_fwht(signs)))


def inverse(spectrum: FourierSpectrum) -> BoolFn:
    values = _fwht(list(spectrum.weights))
    size = 1 << spectrum.arity
    table = 0
    for x, v in enumerate(values):
        if v not in (size, -size):
            raise ValueError("spectrum is not a +-1-valued function")
        if v == -size:
            table |= 1 << x
    return BoolFn(spectrum.arity, table)


def character(mask: int, n: int) -> BoolFn:
    """chi_S as a boolean function: the xor of the coalition's bits."""
    return linear(mask, n)


def coefficient_distance_relation(f: BoolFn, mask: int):
    """Return (f_hat(S), d(f, chi_S), d(f, -chi_S)) and check both identities."""
    coeff = transform(f).coefficient(mask)
    chi = character(mask, f.arity)
    d_plus = distance_uniform(f, chi)
    d_minus = distance_uniform(f, chi.negate())
    assert coeff == 1 - 2 * d_plus == 2 * d_minus - 1
    return coeff, d_plus, d_minus


def spectral_sum(fs: list[BoolFn]) -> Fraction:
    """sum_S prod_j f^j_hat(S), computed exactly from the spectra."""
    n = fs[0].arity
    specs = [transform(f).weights for f in fs]
    total = 0
    for mask in range(1 << n):
        prod = 1
        for w in specs:
            prod *= w[mask]
        total += prod
    return Fraction(total, 1 << (n * len(fs)))


def triple_product_identity(fs: list[BoolFn], mode: str = "exact",
                            samples: int = 100_000, seed: int | None = None):
    """Compare E[prod_{j<m} f^j(x^j) * f^m(prod x^j)] against sum_S prod f^j_hat(S).

    Inputs x^1..x^{m-1} are independent and uniform; products are in the
    +-1 semantics (coordinatewise xor on indices).  Exact mode enumerates
    all (m-1)*n input bits and asserts equality; mc mode returns a 99%
    Hoeffding confidence interval around the sampled left-hand side.
    """
    if len(fs) < 2:
        raise ValueError("need at least two functions")
    n = fs[0].arity
    if any(f.arity != n for f in fs):
        raise ValueError("arity mismatch")
    m = len(fs)
    rhs = spectral_sum(fs)
    signs = [[sign((f.table >> x) & 1) for x in range(f.size)] for f in fs]
    if mode == "exact":
        bits = (m - 1) * n
        if bits > EXACT_TRIPLE_BITS:
            raise ValueError(f"exact mode needs (m-1)*n <= {EXACT_TRIPLE_BITS}, got {bits}")
        total = 0
        for xs in itertools.product(range(1 << n), repeat=m - 1):
            prod = signs[m - 1][_xor_all(xs)]
            for j, x in enumerate(xs):
                prod *= signs[j][x]
            total += prod
        lhs = Fraction(total, 1 << bits)
        assert lhs == rhs
        return lhs, rhs
    if mode == "mc":
        if seed is None:
            raise ValueError("mc mode requires a seed")
        rng = random.Random(seed)
        total = 0
        for _ in range(samples):
            xs = [rng.randrange(1 << n) for _ in range(m - 1)]
            prod = signs[m - 1][_xor_all(xs)]
            for j, x in enumerate(xs):
                prod *= signs[j][x]
            total += prod
        estimate = total / samples
        half = math.sqrt(math.log(2 / 0.01) / (2 * samples)) * 2  # values in [-1, 1]
        return (estimate, (estimate - half, estimate + half)), rhs
    raise ValueError(f"unknown mode {mode!r}")


def _xor_all(xs) -> int:
    acc = 0
    for x in xs:
        acc ^= x
    return acc


def generalized_hoelder_holds(spectra: list[FourierSpectrum]) -> bool:
    """(sum_S prod_j |f^j_hat(S)|)^k <= prod_j sum_S |f^j_hat(S)|^k with k = len."""
    k = len(spectra)
    n = spectra[0].arity
    size = 1 << n
    lhs = Fraction(0)
    for mask in range(size):
        prod = Fraction(1)
        for s in spectra:
            prod *= abs(s.coefficient(mask))
        lhs += prod
    rhs = Fraction(1)
    for s in spectra:
        rhs *= sum(abs(s.coefficient(mask)) ** k for mask in range(size))
    return lhs**k <= rhs
