"""Principal part systems, class reduction, and rational lifts."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symplext import sampling
from symplext.bundles import RatHom
from symplext.errors import NotACoboundary
from symplext.prinparts import (
    CohClass,
    PrinHom,
    apply_prin,
    assembled_finite,
    cech_class,
    class_dim,
    cocycle_of,
    is_coboundary,
    lift_rational,
    local_condition_matrix,
    prin_length,
    prin_of,
    reduce_class,
    transpose_prin,
)
from symplext.ratfield import INFINITY, PointP1, Poly, RatFunc

P0 = PointP1.finite(0)
P1 = PointP1.finite(1)


def rank1(parts, src=(1,), dst=(-1,)):
    return PrinHom(src, dst, parts)


# ------------------------------------------------------------
# prin_of and friends
# ------------------------------------------------------------


def test_prin_of_simple_pole_with_twist():
    # 1/(z-1) in twist -2 has tails at 1 and at infinity
    beta = RatHom((1,), (-1,), [[RatFunc(Poly.one(), Poly([-1, 1]))]])
    p = prin_of(beta)
    assert p.support == (P1, INFINITY)
    assert p.entry(P1, 0, 0) == (Fraction(1),)
    assert p.entry(INFINITY, 0, 0) == (Fraction(1),)
    assert is_coboundary(p)


def test_prin_of_zero():
    assert prin_of(RatHom.zero((1,), (-1,))).is_zero
    assert is_coboundary(rank1({}))


def test_prin_length_counts_conditions():
    assert prin_length(rank1({})) == 0
    assert prin_length(rank1({P0: [[(1,)]]})) == 1
    # pure double pole: f(0) = f'(0) = 0, two conditions
    assert prin_length(rank1({P0: [[(0, 1)]]})) == 2


def test_local_condition_matrix_orders():
    q1 = rank1({P0: [[(1,)]]})
    m1 = local_condition_matrix(q1, P0)
    assert len(m1) == 1
    q2 = rank1({P0: [[(0, 1)]]})
    m2 = local_condition_matrix(q2, P0)
    assert len(m2) == 2


# ------------------------------------------------------------
# Class reduction
# ------------------------------------------------------------


def test_reduce_class_twist_minus2_generator():
    p = rank1({P1: [[(1,)]]})
    cls = reduce_class(p)
    assert class_dim((1,), (-1,)) == 1
    assert cls.vector() == [Fraction(-1)]
    assert not is_coboundary(p)


def test_reduce_class_twist_minus3_infinity_tail():
    a, b, c = Fraction(2), Fraction(-3), Fraction(5, 2)
    p = PrinHom((2,), (-1,), {INFINITY: [[(a, b, c)]]})
    cls = reduce_class(p)
    # the u^-3 coefficient is cancellable by a polynomial section
    assert cls.entry(0, 0) == (a, b)


def test_reduce_class_kills_coboundaries():
    rng = random.Random(23)
    for _ in range(20):
        p = sampling.prinhom(rng, (1, 2), (-1, -2), max_order=2)
        gamma = sampling.rathom(rng, (1, 2), (-1, -2), max_order=2)
        assert reduce_class(p + prin_of(gamma)) == reduce_class(p)


def test_reduce_class_additive():
    rng = random.Random(29)
    for _ in range(20):
        p = sampling.prinhom(rng, (1, 2), (-1, -2), max_order=2)
        q = sampling.prinhom(rng, (1, 2), (-1, -2), max_order=2)
        lhs = reduce_class(p + q).vector()
        rhs = [
            x + y
            for x, y in zip(reduce_class(p).vector(), reduce_class(q).vector())
        ]
        assert lhs == rhs


def test_cech_identity():
    rng = random.Random(31)
    for _ in range(20):
        p = sampling.prinhom(rng, (1, 2), (-1, -2), max_order=3)
        T = cocycle_of(p)
        assert cech_class(T, p.src, p.dst) == reduce_class(p)


# ------------------------------------------------------------
# Rational lifts
# ------------------------------------------------------------


def test_lift_rational_zero():
    assert lift_rational(rank1({})).is_zero


def test_lift_rational_round_trip():
    rng = random.Random(37)
    for _ in range(20):
        beta0 = sampling.rathom(rng, (1, 2), (-1, -2), max_order=2)
        p = prin_of(beta0)
        beta = lift_rational(p)
        assert prin_of(beta) == p
        assert (beta - beta0).is_global_hom()


def test_lift_rational_simple_pole_twist0():
    p = PrinHom((0,), (0,), {P0: [[(1,)]]})
    beta = lift_rational(p)
    assert prin_of(beta) == p
    # 1/z plus a polynomial correction regular at infinity for twist 0
    diff = beta[0, 0] - RatFunc(Poly.one(), Poly([0, 1]))
    assert diff.is_global(0)


def test_lift_rational_obstructed():
    with pytest.raises(NotACoboundary):
        lift_rational(rank1({P1: [[(1,)]]}))


# ------------------------------------------------------------
# Transpose
# ------------------------------------------------------------


def test_transpose_rank_one_fixed():
    p = rank1({P0: [[(1, 2)]]})
    assert transpose_prin(p) == p


def test_transpose_diagonal_fixed():
    p = PrinHom((1, 2), (-1, -2), {P0: [[(1,), ()], [(), (2,)]]})
    assert transpose_prin(p) == p


def test_transpose_swaps_offdiagonal():
    p = PrinHom((1, 2), (-1, -2), {P0: [[(), (3,)], [(), ()]]})
    t = transpose_prin(p)
    assert t.entry(P0, 1, 0) == (Fraction(3),)
    assert t.entry(P0, 0, 1) == ()
    assert transpose_prin(t) == p


# ------------------------------------------------------------
# Assembly helpers
# ------------------------------------------------------------


def test_assembled_finite_skips_point():
    p = PrinHom((1,), (-1,), {P0: [[(1,)]], P1: [[(2,)]]})
    f = assembled_finite(p, 0, 0)
    assert f == RatFunc(Poly.one(), Poly([0, 1])) + RatFunc(
        Poly([2]), Poly([-1, 1])
    )
    g = assembled_finite(p, 0, 0, skip=P0)
    assert g == RatFunc(Poly([2]), Poly([-1, 1]))


def test_apply_prin_single_entry():
    # p applied to a section vector keeps the tails of the product
    p = PrinHom((1,), (-1,), {P0: [[(1,)]]})
    out = apply_prin(p, [RatFunc(Poly([0, 1]))])
    # (1/z) * z = 1 has no pole at 0
    assert P0 not in out.support
    out2 = apply_prin(p, [RatFunc(Poly.one())])
    assert out2.entry(P0, 0, 0) == (Fraction(1),)


def test_cohclass_canonical_lengths():
    cls = CohClass((2,), (-1,), {(0, 0): (1, 2)})
    assert cls.entry(0, 0) == (Fraction(1), Fraction(2))
    assert class_dim((2,), (-1,)) == 2
    with pytest.raises(Exception):
        CohClass((2,), (-1,), {(0, 0): (1, 2, 3)})
