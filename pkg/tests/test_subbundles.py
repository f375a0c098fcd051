"""Graph subbundles, their invariants, isotropy, and the finite search."""

import dataclasses
import random
from fractions import Fraction

import pytest

from symplext import sampling
from symplext.bundles import RatHom, dual_frame, transpose_hom
from symplext.errors import (
    ClassMismatch,
    FrameMismatch,
    HypothesisUnmet,
    HypothesisUnmetWarning,
    VerticalIntersection,
)
from symplext.forms import ExtensionData, check_symplectic
from symplext.prinparts import PrinHom, prin_of, prin_length, reduce_class, transpose_prin
from symplext.ratfield import INFINITY, PointP1, Poly, RatFunc
from symplext.subbundles import (
    SearchBounds,
    beta_from_subbundle,
    cor6_backward,
    cor6_forward,
    graph_subbundle,
    h0_twisted,
    isotropy_direct,
    isotropy_linear,
    isotropy_prin,
    regularity_check,
    search_lagrangian,
    splitting_type,
    vertical_kernel,
)

P0 = PointP1.finite(0)
P1 = PointP1.finite(1)
P2 = PointP1.finite(2)
P3 = PointP1.finite(3)


def make_ext(degrees, ell=0, parts=None):
    src = dual_frame(degrees, ell)
    return ExtensionData(degrees, ell, PrinHom(src, degrees, parts or {}))


def rf(num, den=None):
    return RatFunc(Poly(num), Poly(den) if den is not None else Poly.one())


# ------------------------------------------------------------
# graph_subbundle on pinned cases
# ------------------------------------------------------------


def test_zero_graph_is_f_itself():
    ext = make_ext((-1, -1))
    G = graph_subbundle(ext, RatHom.zero((1, 1), (-1, -1)))
    assert G.conditions == ()
    assert G.degree == 2
    assert G.splitting == (1, 1)
    assert regularity_check(G)
    assert h0_twisted(G, 0) == 4
    assert h0_twisted(G, -2) == 0


def test_global_beta_graph_is_isomorphic_to_f():
    # E = (1), L of degree 0, so F = (-1) and Hom(F, E) = O(2) has sections
    ext = make_ext((1,))
    beta = RatHom((-1,), (1,), [[rf([1, 0, 1])]])
    G = graph_subbundle(ext, beta)
    assert prin_length(G.q) == 0
    assert G.degree == -1
    assert G.splitting == (-1,)
    assert regularity_check(G)


def test_rank_one_simple_pole_drops_degree_twice():
    # beta sits in O(-2): the finite tail forces a matching tail at infinity
    ext = make_ext((-1,))
    beta = RatHom((1,), (-1,), [[RatFunc(Poly([2]), Poly([-3, 1]))]])
    G = graph_subbundle(ext, beta)
    assert prin_length(G.q) == 2
    assert G.degree == -1
    assert G.splitting == (-1,)
    for m in range(4):
        assert h0_twisted(G, m) == max(0, m)
    assert regularity_check(G)


def test_two_independent_conditions_balanced_splitting():
    p = {
        P0: [[(1,), (1,)], [(), ()]],
        P1: [[(), ()], [(1,), (-1,)]],
    }
    ext = make_ext((-1, -1), parts=p)
    G = graph_subbundle(ext, RatHom.zero((1, 1), (-1, -1)))
    assert prin_length(G.q) == 2
    assert G.degree == 0
    assert G.splitting == (0, 0)


def test_infinity_tail_drops_one_summand():
    p = {INFINITY: [[(1,), ()], [(), ()]]}
    ext = make_ext((-1, -1), parts=p)
    G = graph_subbundle(ext, RatHom.zero((1, 1), (-1, -1)))
    assert prin_length(G.q) == 1
    assert G.degree == 1
    assert G.splitting == (1, 0)


def test_mixed_rank_two_case():
    p = {P2: [[(3,), ()], [(), (1, 2)]]}
    ext = make_ext((-1, -2), parts=p)
    beta = RatHom(
        (1, 2),
        (-1, -2),
        [
            [RatFunc(Poly.one(), Poly([-2, 1])), RatFunc(Poly([1, 1]), Poly([-1, 0, 1]))],
            [RatFunc.zero(), RatFunc(Poly([5]), Poly([4, -4, 1]))],
        ],
    )
    G = graph_subbundle(ext, beta)
    assert prin_length(G.q) == 7
    assert G.degree == -4
    assert G.splitting == (-1, -3)
    assert G.degree == sum(G.splitting)
    assert regularity_check(G)


def test_cancellation_at_shared_point():
    # p and prin_of(beta) share the tail at 0; the quotient tail moves to 1
    ext = make_ext((-1,), parts={P0: [[(1,)]]})
    beta = RatHom((1,), (-1,), [[RatFunc(Poly([-1]), Poly([0, -1, 1]))]])
    G = graph_subbundle(ext, beta)
    assert G.q == PrinHom((1,), (-1,), {P1: [[(1,)]]})
    assert prin_length(G.q) == 1
    assert G.degree == 0
    assert G.splitting == (0,)
    # beta itself still has the pole at 0, so pointwise regularity on the
    # lattice genuinely fails there
    assert not regularity_check(G)


# ------------------------------------------------------------
# Degree bookkeeping as a property
# ------------------------------------------------------------


def test_degree_formula_random():
    rng = random.Random(89)
    for _ in range(20):
        ext = sampling.extension(rng, (-1, -1), 0)
        beta = sampling.rathom(rng, (1, 1), (-1, -1), max_order=2)
        G = graph_subbundle(ext, beta)
        assert G.degree == 2 - prin_length(G.q)
        assert G.degree == sum(G.splitting)
        assert splitting_type(G) == G.splitting


# ------------------------------------------------------------
# beta_from_subbundle
# ------------------------------------------------------------


def test_beta_round_trip_random():
    rng = random.Random(97)
    ext = make_ext((-1, -1))
    for _ in range(20):
        beta = sampling.rathom(rng, (1, 1), (-1, -1), max_order=2)
        G = graph_subbundle(ext, beta)
        assert beta_from_subbundle(G.basis_0, G.basis_inf, ext) == beta


def test_zero_lift_recovers_zero():
    ext = make_ext((-1, -1))
    G = graph_subbundle(ext, RatHom.zero((1, 1), (-1, -1)))
    assert beta_from_subbundle(G.basis_0, G.basis_inf, ext) == RatHom.zero(
        (1, 1), (-1, -1)
    )


def test_vertical_lattice_rejected():
    ext = make_ext((-1,))
    col = (Poly.one(), Poly.zero())
    with pytest.raises(VerticalIntersection):
        beta_from_subbundle((col,), (col,), ext)


# ------------------------------------------------------------
# Regularity
# ------------------------------------------------------------


def test_corrupted_lattice_fails_regularity():
    ext = make_ext((-1,))
    beta = RatHom((1,), (-1,), [[RatFunc(Poly([2]), Poly([-3, 1]))]])
    G = graph_subbundle(ext, beta)
    assert regularity_check(G)
    # drop the jet condition: the constant section is not in the kernel
    bad = dataclasses.replace(G, basis_0=((Poly.zero(), Poly.one()),))
    assert not regularity_check(bad)


def test_regularity_with_overlapping_poles():
    rng = random.Random(101)
    pts = (P0, P2)
    for _ in range(10):
        ext = sampling.extension(rng, (-1, -1), 0, pts=pts)
        beta = sampling.rathom(rng, (1, 1), (-1, -1), pts=pts, max_order=1)
        G = graph_subbundle(ext, beta)
        if any(not c.point.is_infinity for c in G.conditions):
            assert regularity_check(G)


# ------------------------------------------------------------
# Isotropy tests
# ------------------------------------------------------------


def test_isotropy_prin_rank_one_always_true():
    rng = random.Random(103)
    for _ in range(15):
        q = sampling.prinhom(rng, (1,), (-1,), max_order=2)
        assert isotropy_prin(q, "symplectic")


def test_isotropy_prin_symmetry():
    q = PrinHom((1, 1), (-1, -1), {P0: [[(), (1,)], [(-1,), ()]]})
    assert isotropy_prin(q, "orthogonal")
    assert not isotropy_prin(q, "symplectic")
    s = PrinHom((1, 1), (-1, -1), {P0: [[(2,), (1,)], [(1,), ()]]})
    assert isotropy_prin(s, "symplectic")
    assert not isotropy_prin(s, "orthogonal")


def test_isotropy_prin_warns_when_hypothesis_fails():
    q = PrinHom((0,), (0,), {P0: [[(1,)]]})
    with pytest.warns(HypothesisUnmetWarning):
        isotropy_prin(q, "symplectic")


def test_isotropy_linear_cases():
    zero = RatHom.zero((1, 1), (-1, -1))
    sym = RatHom(
        (1, 1), (-1, -1),
        [[RatFunc(Poly.one(), Poly([0, 1])), RatFunc(Poly([2]), Poly([0, 1]))],
         [RatFunc(Poly([2]), Poly([0, 1])), RatFunc.zero()]],
    )
    assert isotropy_linear(sym, zero, "symplectic")
    b = RatFunc(Poly.one(), Poly([0, 1]))
    skew = RatHom(
        (1, 1), (-1, -1),
        [[RatFunc.zero(), b], [-b, RatFunc.zero()]],
    )
    assert not isotropy_linear(skew, zero, "symplectic")
    # orthogonal convention: t(beta) + beta must match alpha
    assert isotropy_linear(skew, zero, "orthogonal")


def test_isotropy_triple_agreement_random():
    rng = random.Random(107)
    hits = {True: 0, False: 0}
    for _ in range(25):
        ext = sampling.symmetric_class_extension(rng, (-1, -1), 0)
        se = check_symplectic(ext)
        assert se is not None
        if rng.random() < 0.5:
            beta = sampling.rathom(rng, (1, 1), (-1, -1), max_order=2)
        else:
            # built to satisfy t(beta) - beta = alpha exactly
            g = sampling.rathom(rng, (1, 1), (-1, -1), max_order=2)
            beta = (g + transpose_hom(g)) - se.alpha.scale(Fraction(1, 2))
        G = graph_subbundle(ext, beta)
        a = isotropy_prin(G.q, "symplectic")
        b = isotropy_linear(beta, se.alpha, "symplectic")
        c = isotropy_direct(se, G)
        assert a == b == c
        hits[a] += 1
    assert hits[True] > 0 and hits[False] > 0


def test_symmetric_class_with_asymmetric_tails_not_isotropic():
    rng = random.Random(109)
    ext = make_ext(
        (-1, -1), parts={P0: [[(1,), (2,)], [(2,), (-1,)]]}
    )
    se = check_symplectic(ext)
    assert se is not None
    done = False
    for _ in range(40):
        gamma = sampling.rathom(rng, (1, 1), (-1, -1), max_order=1)
        q = ext.p - prin_of(gamma)
        if transpose_prin(q) == q:
            continue
        # the class is still symmetric, only the tails are skewed
        assert reduce_class(transpose_prin(q)) == reduce_class(q)
        beta = gamma
        G = graph_subbundle(ext, beta)
        assert not isotropy_prin(q, "symplectic")
        assert not isotropy_direct(se, G)
        done = True
        break
    assert done


# ------------------------------------------------------------
# Vertical kernel
# ------------------------------------------------------------


def test_vertical_kernel_invertible_beta():
    ext = make_ext((-1, -1))
    b = RatFunc(Poly.one(), Poly([0, 1]))
    beta = RatHom((1, 1), (-1, -1), [[b, RatFunc.zero()], [RatFunc.zero(), b]])
    G = graph_subbundle(ext, beta)
    vk = vertical_kernel(G)
    assert vk.rank == 0
    assert vk.verified


def test_vertical_kernel_zero_beta_is_all_of_f():
    ext = make_ext((-1, -1))
    G = graph_subbundle(ext, RatHom.zero((1, 1), (-1, -1)))
    vk = vertical_kernel(G)
    assert vk.rank == 2
    assert vk.verified


def test_vertical_kernel_rank_one_beta():
    ext = make_ext((-1, -1))
    b = RatFunc(Poly.one(), Poly([0, 1]))
    beta = RatHom((1, 1), (-1, -1), [[b, b], [RatFunc.zero(), RatFunc.zero()]])
    G = graph_subbundle(ext, beta)
    vk = vertical_kernel(G)
    assert vk.rank == 1
    assert vk.verified
    # the kernel direction is f1 = -f2
    g1, g2 = vk.rational_basis[0]
    assert (RatFunc(g1) + RatFunc(g2)).is_zero


# ------------------------------------------------------------
# The defect-system bijection
# ------------------------------------------------------------


def test_cor6_identity_on_p():
    ext = make_ext((-1, -1), parts={P0: [[(1,), ()], [(), (2,)]]})
    G = cor6_forward(ext, ext.p)
    assert all(f.is_zero for row in G.beta.entries for f in row)
    assert cor6_backward(ext, G) == ext.p


def test_cor6_round_trip_random():
    rng = random.Random(113)
    for _ in range(15):
        ext = sampling.extension(rng, (-1, -1), 0)
        gamma = sampling.rathom(rng, (1, 1), (-1, -1), max_order=2)
        q = ext.p - prin_of(gamma)
        G = cor6_forward(ext, q)
        assert cor6_backward(ext, G) == q
        G2 = cor6_forward(ext, cor6_backward(ext, G))
        assert G2.beta == G.beta and G2.q == G.q


def test_cor6_class_mismatch():
    ext = make_ext((-1, -1), parts={P0: [[(1,), ()], [(), ()]]})
    bad = ext.p + PrinHom((1, 1), (-1, -1), {P1: [[(1,), ()], [(), ()]]})
    with pytest.raises(ClassMismatch):
        cor6_forward(ext, bad)


def test_cor6_hypothesis_unmet():
    ext = make_ext((0,))
    with pytest.raises(HypothesisUnmet):
        cor6_forward(ext, ext.p)


# ------------------------------------------------------------
# Finite search
# ------------------------------------------------------------


def test_search_bounds_validation():
    with pytest.raises(FrameMismatch):
        SearchBounds(points=(P0,), max_order=0)
    with pytest.raises(FrameMismatch):
        SearchBounds(points=(P0,), cap=0)


def test_search_rank_one_all_candidates_qualify():
    ext = make_ext((-1,), parts={P0: [[(1,)]]})
    se = check_symplectic(ext)
    bounds = SearchBounds(points=(P0, P1), max_order=1, values=(0, 1))
    out = search_lagrangian(se, bounds)
    # the class of a single simple pole does not depend on its position
    assert len(out) == 2
    for G in out:
        assert isotropy_direct(se, G)
    again = search_lagrangian(se, bounds)
    assert [g.q for g in again] == [g.q for g in out]
    assert [g.beta for g in again] == [g.beta for g in out]


def test_search_split_case_returns_f():
    ext = make_ext((-1, -1))
    se = check_symplectic(ext)
    bounds = SearchBounds(points=(P0,), max_order=1, values=(0,))
    out = search_lagrangian(se, bounds)
    assert len(out) == 1
    assert out[0].q.is_zero
    assert out[0].splitting == (1, 1)


def test_search_symmetric_class_nonempty():
    p = {P0: [[(1,), ()], [(), (-1,)]]}
    ext = make_ext((-1, -1), parts=p)
    se = check_symplectic(ext)
    assert se is not None
    bounds = SearchBounds(points=(P0, P1), max_order=1, values=(0, 1, -1))
    out = search_lagrangian(se, bounds)
    assert out
    for G in out:
        assert isotropy_direct(se, G)
        assert reduce_class(G.q) == ext.extension_class()


def test_search_respects_cap():
    ext = make_ext((-1,), parts={P0: [[(1,)]]})
    se = check_symplectic(ext)
    bounds = SearchBounds(points=(P0, P1), max_order=1, values=(0, 1), cap=1)
    assert len(search_lagrangian(se, bounds)) == 1
