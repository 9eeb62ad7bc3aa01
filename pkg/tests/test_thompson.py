from fractions import Fraction

import pytest

import oracles
from commgraph.engine import commutes
from commgraph.thompson import (
    IDENTITY,
    X0,
    X1,
    PLMap,
    compose,
    dyadic,
    generator_x,
    inverse,
    slope_hom,
    x0_x1inv,
)

DYADICS = [Fraction(k, 64) for k in range(65)]


def test_x0_values():
    assert X0(Fraction(1, 2)) == Fraction(1, 4)
    assert (X0 * X0)(Fraction(1, 2)) == Fraction(1, 8)
    for t in DYADICS:
        assert X0(t) == oracles.pl_eval(oracles.X0_POINTS, t)
        assert X1(t) == oracles.pl_eval(oracles.X1_POINTS, t)


def test_product_applies_left_factor_first():
    for t in DYADICS:
        assert (X0 * X1)(t) == X1(X0(t))
        assert compose(X0, X1)(t) == X0(X1(t))


@pytest.mark.parametrize("i,j", [(i, j) for j in range(1, 10) for i in range(j)])
def test_presentation_relations(i, j):
    xi, xj = generator_x(i), generator_x(j)
    assert xi * xj * xi.inverse() == generator_x(j + 1)


def test_x2_against_points():
    # x_2 = x_0 x_1 x_0^-1 with the left factor applied first.
    x0inv = oracles.invert_points(oracles.X0_POINTS)
    for t in DYADICS:
        want = oracles.pl_eval(x0inv, oracles.pl_eval(oracles.X1_POINTS, oracles.pl_eval(oracles.X0_POINTS, t)))
        assert generator_x(2)(t) == want


def test_x0x1inv_is_identity_near_one():
    t = x0_x1inv()
    for q in DYADICS:
        if q >= Fraction(3, 4):
            assert t(q) == q
    assert not t.is_identity()


@pytest.mark.parametrize("j", range(2, 12))
def test_x0x1inv_commutes_with_xj(j):
    assert commutes(x0_x1inv(), generator_x(j))


def test_literal_left_first_product_misses_x2():
    # The left-first product x0 * x1^-1 is a different element: it fails to
    # commute with x_2 although it commutes with x_j for j >= 3.
    literal = X0 * X1.inverse()
    assert literal != x0_x1inv()
    assert not commutes(literal, generator_x(2))
    assert all(commutes(literal, generator_x(j)) for j in range(3, 10))
    assert slope_hom(literal) == slope_hom(x0_x1inv()) == (-1, 0)


def test_slope_hom():
    assert slope_hom(X0) == (-1, 1)
    assert slope_hom(X1) == (0, 1)
    assert slope_hom(generator_x(2)) == (0, 1)
    a, b = generator_x(3), x0_x1inv()
    assert slope_hom(a * b) == tuple(u + v for u, v in zip(slope_hom(a), slope_hom(b)))


def test_normalize_merges_collinear():
    f = PLMap([0, dyadic(1, 2), dyadic(1, 1), 1], [0, dyadic(1, 2), dyadic(1, 1), 1])
    assert f == IDENTITY and f.xs == (0, 1)


@pytest.mark.parametrize(
    "xs,ys",
    [
        ([0, Fraction(1, 3), 1], [0, Fraction(1, 3), 1]),
        ([0, Fraction(1, 2), 1], [0, Fraction(3, 4), 1]),
        ([0, 1], [0, Fraction(1, 2)]),
        ([0, Fraction(1, 2), Fraction(1, 2), 1], [0, Fraction(1, 2), Fraction(1, 2), 1]),
    ],
)
def test_invalid_pl_data(xs, ys):
    with pytest.raises(ValueError):
        PLMap(xs, ys)


def test_inverse_and_identity():
    g = generator_x(4) * X0
    assert (g * inverse(g)).is_identity()
    assert (g * IDENTITY) == g
