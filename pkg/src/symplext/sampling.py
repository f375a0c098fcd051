"""Seeded random generators shared by the test suite and `selftest`.

Every function takes an explicit ``random.Random`` so runs are
reproducible; nothing here touches global RNG state.  Generators return
exact objects (Fractions throughout), never floats.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .bundles import RatHom, dual_frame
from .forms import ExtensionData, RatSectionW, wp_admissible_phi, wp_member
from .prinparts import PrinHom, prin_of, reduce_class, transpose_prin
from .ratfield import (
    INFINITY,
    PointP1,
    Poly,
    RatFunc,
    polar_coeffs_as_ratfunc,
)

__all__ = [
    "POINT_POOL",
    "fraction",
    "nonzero_fraction",
    "poly",
    "points",
    "tail",
    "prinhom",
    "rathom",
    "coboundary_prinhom",
    "extension",
    "symmetric_class_extension",
    "skew_obstructed_extension",
    "member",
    "member_pair",
]

# small rational points; kept small so pole collisions between independent
# draws are common enough to exercise shared-support code paths
POINT_POOL: tuple[PointP1, ...] = tuple(
    PointP1.finite(v) for v in (0, 1, -1, 2, -2, Fraction(1, 2), 3)
)


def fraction(rng: random.Random, span: int = 6, den: int = 4) -> Fraction:
    """Fraction with numerator in [-span, span] and denominator in [1, den]."""
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def nonzero_fraction(rng: random.Random, span: int = 6, den: int = 4) -> Fraction:
    while True:
        c = fraction(rng, span, den)
        if c:
            return c


def poly(rng: random.Random, max_deg: int = 2, span: int = 4) -> Poly:
    """Nonzero polynomial of degree <= max_deg with fractional coefficients."""
    deg = rng.randint(0, max_deg)
    coeffs = [fraction(rng, span) for _ in range(deg)]
    coeffs.append(nonzero_fraction(rng, span))
    return Poly(coeffs)


def points(
    rng: random.Random,
    count: int,
    allow_infinity: bool = False,
    pool: Sequence[PointP1] = POINT_POOL,
) -> list[PointP1]:
    """Distinct points drawn from the pool."""
    candidates = list(pool)
    if allow_infinity and INFINITY not in candidates:
        candidates.append(INFINITY)
    return rng.sample(candidates, count)


def tail(rng: random.Random, max_order: int = 2, span: int = 6) -> tuple:
    """Polar coefficient tuple (c_1 .. c_K), K <= max_order, top nonzero."""
    length = rng.randint(1, max_order)
    out = [fraction(rng, span) for _ in range(length - 1)]
    out.append(nonzero_fraction(rng, span))
    return tuple(out)


def prinhom(
    rng: random.Random,
    src,
    dst,
    pts: Optional[Sequence[PointP1]] = None,
    max_order: int = 2,
    density: float = 0.7,
    symmetry: Optional[str] = None,
    span: int = 6,
) -> PrinHom:
    """Random principal part system between the given frames.

    symmetry may be "sym" (mirror the upper triangle) or "antisym"
    (mirror negated, zero diagonal); both need a square matrix.
    """
    src, dst = tuple(src), tuple(dst)
    if pts is None:
        pts = points(rng, rng.randint(1, 2), allow_infinity=True)
    if symmetry not in (None, "sym", "antisym"):
        raise ValueError(f"unknown symmetry {symmetry!r}")
    if symmetry is not None and len(src) != len(dst):
        raise ValueError("symmetry needs a square matrix")
    parts = {}
    for pt in pts:
        rows = [[() for _ in src] for _ in dst]
        hit = False
        for i in range(len(dst)):
            cols = range(len(src)) if symmetry is None else range(i, len(src))
            for j in cols:
                if symmetry == "antisym" and i == j:
                    continue
                if rng.random() >= density:
                    continue
                t = tail(rng, max_order, span)
                rows[i][j] = t
                if symmetry == "sym":
                    rows[j][i] = t
                elif symmetry == "antisym":
                    rows[j][i] = tuple(-c for c in t)
                hit = True
        if hit:
            parts[pt] = rows
    return PrinHom(src, dst, parts)


def rathom(
    rng: random.Random,
    src,
    dst,
    pts: Optional[Sequence[PointP1]] = None,
    max_order: int = 2,
    density: float = 0.7,
    span: int = 6,
    poly_deg: int = -1,
) -> RatHom:
    """Random rational matrix with poles among the given finite points.

    poly_deg >= 0 also mixes in polynomial parts (poles at infinity,
    relative to the entry twist).
    """
    src, dst = tuple(src), tuple(dst)
    if pts is None:
        pts = points(rng, rng.randint(1, 3))
    finite = [p for p in pts if not p.is_infinity]
    entries = []
    for _ in dst:
        row = []
        for _ in src:
            f = RatFunc.zero()
            for pt in finite:
                if rng.random() < density:
                    f = f + polar_coeffs_as_ratfunc(
                        pt.value, tail(rng, max_order, span)
                    )
            if poly_deg >= 0 and rng.random() < density:
                f = f + RatFunc(poly(rng, poly_deg, span))
            row.append(f)
        entries.append(row)
    return RatHom(src, dst, entries)


def coboundary_prinhom(
    rng: random.Random,
    src,
    dst,
    pts: Optional[Sequence[PointP1]] = None,
    max_order: int = 2,
    span: int = 6,
) -> PrinHom:
    """Principal part system with vanishing class: tails of a rational map."""
    return prin_of(rathom(rng, src, dst, pts, max_order, span=span))


def extension(
    rng: random.Random,
    degrees,
    ell: int,
    pts: Optional[Sequence[PointP1]] = None,
    max_order: int = 2,
    density: float = 0.7,
    span: int = 6,
) -> ExtensionData:
    """Extension of the twisted dual by E glued along a random part system."""
    degrees = tuple(degrees)
    src = dual_frame(degrees, ell)
    p = prinhom(rng, src, degrees, pts, max_order, density, None, span)
    return ExtensionData(degrees, ell, p)


def symmetric_class_extension(
    rng: random.Random,
    degrees,
    ell: int,
    pts: Optional[Sequence[PointP1]] = None,
    max_order: int = 2,
    span: int = 6,
) -> ExtensionData:
    """Extension whose class is symmetric by construction.

    The representative is a symmetric system plus the tails of a random
    rational matrix, so the skew part of p is a coboundary without being
    zero on the nose.
    """
    degrees = tuple(degrees)
    src = dual_frame(degrees, ell)
    sym = prinhom(rng, src, degrees, pts, max_order, 0.7, "sym", span)
    gamma = rathom(rng, src, degrees, None, max_order, 0.5, span)
    return ExtensionData(degrees, ell, sym + prin_of(gamma))


def skew_obstructed_extension(
    rng: random.Random,
    degrees,
    ell: int,
    pts: Optional[Sequence[PointP1]] = None,
    max_order: int = 2,
    span: int = 6,
    tries: int = 400,
) -> ExtensionData:
    """Extension whose skew part t(p) - p has a nonzero class."""
    for _ in range(tries):
        ext = extension(rng, degrees, ell, pts, max_order, 0.8, span)
        skew = transpose_prin(ext.p) - ext.p
        if not reduce_class(skew).is_zero:
            return ext
    raise RuntimeError("no skew-obstructed extension found; widen the pool")


def member(rng: random.Random, ext: ExtensionData, span: int = 3) -> Optional[RatSectionW]:
    """Random global member of W over an admissible F-section.

    None when no admissible section exists.  The F-part is a nonzero
    rational combination of the admissible basis.
    """
    basis = wp_admissible_phi(ext)
    if not basis:
        return None
    n = ext.rank
    phi = [RatFunc.zero()] * n
    for vec in basis:
        c = RatFunc.constant(fraction(rng, span, 2))
        phi = [phi[k] + c * vec[k] for k in range(n)]
    if all(v.is_zero for v in phi):
        phi = [phi[k] + basis[0][k] for k in range(n)]
    return wp_member(ext, phi)


def member_pair(
    rng: random.Random, ext: ExtensionData, span: int = 3
) -> Optional[tuple[RatSectionW, RatSectionW]]:
    m1 = member(rng, ext, span)
    m2 = member(rng, ext, span)
    if m1 is None or m2 is None:
        return None
    return m1, m2
