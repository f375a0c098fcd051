"""Split bundles, framed rational matrices, and the chart cochain check."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symplext import sampling
from symplext.bundles import (
    RatHom,
    SplitBundle,
    TransitionData,
    cocycle_transpose_check,
    dual_frame,
    dual_twisted,
    h0_hom,
    h0_line,
    h1_line,
    hom_bundle,
    transpose_hom,
)
from symplext.errors import FrameMismatch, NotACochain
from symplext.ratfield import Poly, RatFunc, zpow


def test_split_bundle_sorted():
    assert SplitBundle((-1, 2, 0)).degrees == (2, 0, -1)
    assert SplitBundle((0,)).rank == 1


def test_hom_bundle_degrees():
    assert hom_bundle((1, 1), (-1, -1)).degrees == (-2, -2, -2, -2)
    assert hom_bundle((0,), (0,)).degrees == (0,)
    # pairwise d_i - e_j enumeration
    assert hom_bundle((2, 0), (1, -1)).degrees == (1, -1, -1, -3)


def test_dual_twisted():
    assert dual_twisted((-1, -1), 0).degrees == (1, 1)
    assert dual_twisted((0,), 0).degrees == (0,)
    assert dual_twisted((3, -2), 1).degrees == (3, -2)
    # dual_frame keeps E's index order instead of sorting
    assert dual_frame((3, -2), 1) == (-2, 3)


def test_line_cohomology():
    assert (h0_line(0), h1_line(0)) == (1, 0)
    assert (h0_line(-1), h1_line(-1)) == (0, 0)
    assert h1_line(-3) == 2
    assert h0_line(3) == 4


@given(st.integers(min_value=-8, max_value=8))
def test_line_euler_characteristic(d):
    assert h0_line(d) - h1_line(d) == d + 1


def test_h0_hom_counts():
    assert h0_hom((1, 1), (-1, -1)) == 0
    assert h0_hom((0,), (0,)) == 1
    assert h0_hom((1, 0), (0, 0)) == 2


def test_is_global_entries():
    zero = RatHom.zero((1,), (-1,))
    assert zero.is_global_hom()
    # twist -2 admits no nonzero global section
    bad = RatHom((1,), (-1,), [[RatFunc(Poly([0, 1]))]])
    assert not bad.is_global_hom()
    ok = RatHom((0,), (2,), [[RatFunc(Poly([1, 0, 1]))]])
    assert ok.is_global_hom()


def test_rathom_shape_checked():
    with pytest.raises(FrameMismatch):
        RatHom((0, 0), (0,), [[RatFunc.one()]])


def test_transpose_swaps():
    f, g = RatFunc(Poly([1, 1])), RatFunc(Poly([2]))
    z = RatFunc.zero()
    phi = RatHom((1, 1), (-1, -1), [[z, f], [g, z]])
    assert transpose_hom(phi).entries == ((z, g), (f, z))


def test_transpose_rank_one_trivial():
    phi = RatHom((1,), (-1,), [[RatFunc(Poly.one(), Poly([0, 1]))]])
    assert transpose_hom(phi) == phi


def test_transpose_involution_random():
    rng = random.Random(5)
    for _ in range(25):
        phi = sampling.rathom(rng, (1, 2), (-1, -2), max_order=2, poly_deg=1)
        assert transpose_hom(transpose_hom(phi)) == phi


def test_transpose_needs_symmetric_twists():
    with pytest.raises(FrameMismatch):
        transpose_hom(RatHom((0, 1), (0, 0), [[RatFunc.one()] * 2] * 2))


def _valid_cochain(rng, degrees, ell):
    """Random cochain pair satisfying the overlap relation by construction."""
    n = len(degrees)
    a0 = sampling.rathom(
        rng, degrees, dual_frame(degrees, ell), max_order=2, poly_deg=1
    )
    rows0 = [list(r) for r in a0.entries]
    rowsinf = [
        [rows0[i][j] * zpow(degrees[i] + degrees[j] - ell) for j in range(n)]
        for i in range(n)
    ]
    return rows0, rowsinf


def test_cochain_constant_symmetric():
    one = RatFunc.one()
    frames = TransitionData((1, 1), 2)
    pair = ([[one, one], [one, one]], [[one, one], [one, one]])
    assert cocycle_transpose_check(pair, frames)


def test_cochain_rank_one_always():
    rng = random.Random(11)
    frames = TransitionData((-2,), 1)
    for _ in range(20):
        pair = _valid_cochain(rng, (-2,), 1)
        assert cocycle_transpose_check(pair, frames)


def test_cochain_two_by_two_randomized():
    rng = random.Random(12)
    degrees, ell = (-1, -2), 0
    frames = TransitionData(degrees, ell)
    for _ in range(20):
        rows0, rowsinf = _valid_cochain(rng, degrees, ell)
        assert cocycle_transpose_check((rows0, rowsinf), frames)
        # independent restatement of the transposed overlap relation
        n = len(degrees)
        for i in range(n):
            for j in range(n):
                lhs = rows0[j][i] * zpow(degrees[j])
                rhs = zpow(ell - degrees[i]) * rowsinf[j][i]
                assert lhs == rhs


def test_cochain_bad_pair_rejected():
    frames = TransitionData((-1,), 0)
    one = RatFunc.one()
    z = RatFunc(Poly([0, 1]))
    with pytest.raises(NotACochain):
        cocycle_transpose_check(([[one]], [[z]]), frames)


def test_transition_data_rejects_non_laurent():
    with pytest.raises(FrameMismatch):
        TransitionData((0,), 0, [[RatFunc(Poly.one(), Poly([-1, 1]))]])
