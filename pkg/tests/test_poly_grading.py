import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from randpoly import brieskorn_pham, random_poly
from resform.errors import ExponentOverflowError, NotQuasihomogeneousError, PreconditionError
from resform.formlang import parse_poly
from resform.grading import (
    WeightMismatch,
    WeightSystem,
    infer_weights,
    is_quasihomogeneous,
    monomial_weight,
    weight_decompose,
)
from resform.poly import MAX_EXPONENT, GaussianRational, Poly

z0, z1, z2 = (Poly.variable(i, 3) for i in range(3))


class TestArithmetic:
    def test_square(self):
        assert (z0 + z1) ** 2 == z0**2 + z1 * z0 * 2 + z1**2

    def test_annihilator(self):
        assert (z0 * z1 + 3) * 0 == Poly.zero(3)

    def test_difference_of_squares(self):
        assert (z0**2 - z1**3) * (z0**2 + z1**3) == z0**4 - z1**6

    def test_pow_overflow(self):
        with pytest.raises(ExponentOverflowError):
            (z0**(2**20)) ** (2**12)
        assert MAX_EXPONENT == 2**31 - 1

    def test_mismatched_widths_pad(self):
        a = Poly.variable(0, 1)
        assert a + z2 == z0 + z2

    def test_divexact(self):
        prod = (z0 + z1) * (z0 - z2 * 2)
        assert prod.divexact(z0 + z1) == z0 - z2 * 2
        assert (prod + 1).divexact(z0 + z1) is None


def test_gaussian_arithmetic():
    a = GaussianRational(1, 2)
    assert a * a.conjugate() == 5
    assert a * a.inverse() == 1
    assert str(GaussianRational(0, 1)) == "i"
    assert str(GaussianRational(1, -2)) == "(1 - 2*i)"


class TestDerivative:
    def test_p8_partial(self, p8):
        assert p8.derivative(2) == parse_poly("-2*z0*z2")

    def test_constant(self):
        assert Poly.constant(7, 2).derivative(0).is_zero

    def test_cusp(self, cusp):
        assert cusp.derivative(1) == parse_poly("-3*z1^2", nvars=2)

    def test_out_of_range(self, cusp):
        with pytest.raises(PreconditionError):
            cusp.derivative(2)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz(seed):
    rng = random.Random(seed)
    f = random_poly(rng, 3, 4, 4)
    g = random_poly(rng, 3, 4, 4)
    for i in range(3):
        assert (f * g).derivative(i) == f.derivative(i) * g + f * g.derivative(i)


def test_evaluate(cusp, p8):
    assert cusp.evaluate((1, 1)) == 0
    assert Poly.constant(GaussianRational(2, 1), 2).evaluate((0.3, 9)) == 2 + 1j
    assert p8.evaluate((1, 1, 0)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_compiled_matches_horner(seed):
    import numpy as np

    rng = random.Random(seed)
    f = random_poly(rng, 3, 5, 5)
    pts = np.array([[complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(3)] for _ in range(4)])
    fast = f.compile()(pts)
    for z, v in zip(pts, fast):
        ref = f.evaluate(z)
        assert abs(v - ref) <= 1e-12 * (1 + f.monomial_magnitude_sum(z))


def test_monomial_weight():
    W = WeightSystem((3, 2), 6)
    assert monomial_weight((2, 0), W) == 6
    assert monomial_weight((0, 3), W) == 6
    assert monomial_weight((0, 0), W) == 0


def test_is_quasihomogeneous(cusp, p8):
    assert is_quasihomogeneous(cusp, (3, 2)) == 6
    assert is_quasihomogeneous(p8, (1, 1, 1)) == 3
    res = is_quasihomogeneous(parse_poly("z0^2 + z1^3 + z0*z1"), (3, 2))
    assert isinstance(res, WeightMismatch)
    assert set(res.weights) == {5, 6}
    with pytest.raises(PreconditionError):
        is_quasihomogeneous(Poly.zero(2), (3, 2))


def test_infer_weights(cusp):
    assert infer_weights(cusp) == WeightSystem((3, 2), 6)
    assert infer_weights(brieskorn_pham((2, 3, 4))) == WeightSystem((6, 4, 3), 12)
    assert infer_weights(parse_poly("z0 + z0^2")) is None


def test_infer_weights_underdetermined():
    # unused variable: several weight directions, the smallest coprime one wins
    W = infer_weights(parse_poly("z0^2 - z1^3", nvars=3))
    assert W.weights[:2] == (3, 2) and W.degree == 6 and W.weights[2] >= 1


def test_weight_decompose():
    W = WeightSystem((3, 2), 6)
    parts = weight_decompose(parse_poly("z1 + z0^2"), W)
    assert [(w, str(p)) for w, p in parts] == [(2, "z1"), (6, "z0^2")]
    assert len(weight_decompose(parse_poly("z0^2 - z1^3"), W)) == 1
    assert weight_decompose(Poly.zero(2), W) == []


def test_weight_system_validation(cusp):
    with pytest.raises(PreconditionError):
        WeightSystem((2, 4), 8)
    with pytest.raises(PreconditionError):
        WeightSystem((0, 1), 1)
    with pytest.raises(NotQuasihomogeneousError):
        WeightSystem.for_poly(cusp, (1, 1))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 9), min_size=2, max_size=4))
def test_brieskorn_pham_weights(b):
    W = infer_weights(brieskorn_pham(b))
    L = math.lcm(*b)
    a = [L // x for x in b]
    g = math.gcd(*a)
    assert W.weights == tuple(x // g for x in a)
    assert W.degree == L // g
