from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from approxagg.bitfn import BoolFn, constant, dictator, distance_uniform, linear, majority
from approxagg.fourier import (
    FourierSpectrum,
    character,
    coefficient_distance_relation,
    generalized_hoelder_holds,
    inverse,
    spectral_sum,
    transform,
    triple_product_identity,
)

MAJ3 = majority(3)


def fns(n_max=4):
    return st.integers(1, n_max).flatmap(
        lambda n: st.integers(0, (1 << (1 << n)) - 1).map(lambda t: BoolFn(n, t)))


def test_character_spectra():
    for mask in range(8):
        spec = transform(character(mask, 3))
        assert spec.coefficient(mask) == 1
        assert sum(w != 0 for w in spec.weights) == 1


def test_majority_spectrum():
    spec = transform(MAJ3)
    # degree-1 and the full parity carry all the weight
    coeffs = {mask: spec.coefficient(mask) for mask in range(8)}
    assert coeffs[0b001] == coeffs[0b010] == coeffs[0b100] == Fraction(1, 2)
    assert coeffs[0b111] == Fraction(-1, 2)
    assert coeffs[0] == coeffs[0b011] == coeffs[0b101] == coeffs[0b110] == 0


def test_serialize_rows():
    rows = transform(dictator(1, 2)).serialize_rows()
    assert rows == [(0, 0, 0), (1, 1, 0), (2, 0, 0), (3, 0, 0)]


@given(fns())
def test_parseval(f):
    spec = transform(f)
    assert sum(w * w for w in spec.weights) == (1 << f.arity) ** 2


@given(fns())
def test_inverse_round_trip(f):
    assert inverse(transform(f)) == f


def test_inverse_rejects_non_boolean():
    with pytest.raises(ValueError):
        inverse(FourierSpectrum(2, (1, 1, 1, 1)))


@given(fns(), st.integers(0, 15))
def test_coefficient_distance(f, mask):
    mask &= (1 << f.arity) - 1
    coeff, d_plus, d_minus = coefficient_distance_relation(f, mask)
    assert coeff == 1 - 2 * d_plus == 2 * d_minus - 1


def test_triple_product_exact_majority():
    lhs, rhs = triple_product_identity([MAJ3, MAJ3, MAJ3])
    assert lhs == rhs == Fraction(1, 4)


def test_triple_product_exact_pairs():
    # two functions: E[f(x) g(x)] in the sign semantics
    f, g = MAJ3, dictator(1, 3)
    lhs, rhs = triple_product_identity([f, g])
    assert lhs == rhs == 1 - 2 * distance_uniform(f, g)


def test_triple_product_mc_brackets_exact():
    (estimate, (lo, hi)), rhs = triple_product_identity(
        [MAJ3, MAJ3, MAJ3], mode="mc", samples=20_000, seed=11)
    assert lo <= float(rhs) <= hi
    assert lo <= estimate <= hi


def test_triple_product_requires_seed():
    with pytest.raises(ValueError):
        triple_product_identity([MAJ3, MAJ3], mode="mc")


def test_spectral_sum_constant():
    # all-zero functions: only the empty character contributes
    z = constant(0, 2)
    assert spectral_sum([z, z, z]) == 1


@given(st.lists(st.integers(0, 255).map(lambda t: BoolFn(3, t)), min_size=2, max_size=4))
def test_generalized_hoelder(fs):
    assert generalized_hoelder_holds([transform(f) for f in fs])


def test_sign_convention():
    # logical 1 maps to -1: a constant-1 function has coefficient -1 at S=0
    assert transform(constant(1, 3)).coefficient(0) == -1
    assert transform(constant(0, 3)).coefficient(0) == 1
    # xor of bits equals product of signs
    chi = linear(0b11, 2)
    spec = transform(chi)
    assert spec.coefficient(0b11) == 1
