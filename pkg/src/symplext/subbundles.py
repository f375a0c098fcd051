"""Rank-n subbundles of the extension from graphs of rational maps.

A rational map beta : F -> E has a graph inside the rational sections of
W; its closure G is the rank-n subbundle whose sheaf of sections is the
kernel of the defect system q = p - prin_of(beta) acting on F.  This
module builds G concretely: jet conditions at the support of q, module
bases of sections over both charts, splitting type and degree.  It also
inverts the construction (beta_from_subbundle), runs the regularity and
isotropy criteria, and enumerates isotropic graphs within finite bounds.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .bundles import RatHom, h0_hom, transpose_hom
from .errors import (
    ClassMismatch,
    FrameMismatch,
    HypothesisUnmet,
    HypothesisUnmetWarning,
    InternalLiftFailure,
    VerticalIntersection,
    WindowTooSmall,
)
from .forms import ExtensionData, RatSectionW, _StructuredExtension
from .prinparts import (
    PrinHom,
    assembled_finite,
    cocycle_of,
    lift_rational,
    local_condition_matrix,
    prin_length,
    prin_of,
    reduce_class,
    transpose_prin,
)
from .ratfield import (
    PointP1,
    Poly,
    RatFunc,
    as_fraction,
    polar_coeffs_as_ratfunc,
)

__all__ = [
    "JetCondition",
    "GraphSubbundle",
    "graph_subbundle",
    "splitting_type",
    "h0_twisted",
    "beta_from_subbundle",
    "regularity_check",
    "isotropy_prin",
    "isotropy_linear",
    "isotropy_direct",
    "VerticalKernel",
    "vertical_kernel",
    "cor6_forward",
    "cor6_backward",
    "SearchBounds",
    "search_lagrangian",
]


@dataclass(frozen=True)
class JetCondition:
    """Linear conditions on jets of F-sections at one point: full
    row-rank matrix over Q acting on the jet coordinates (j, s) with
    s = 0 .. order-1."""

    point: PointP1
    order: int
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class GraphSubbundle:
    """Graph closure of beta inside W.

    basis_0 spans the sections over the z-chart, basis_inf over the
    u-chart (u = 1/z).  Columns are 2n polynomial entries in the chart
    trivialization of W: the top n rows hold x = s(f) - e where s is the
    chart's rational splitting (s_zero on the z-chart, s_infinity on the
    other), the bottom n rows hold the F-part f; on the graph,
    x = (s - beta)(f).  The member coordinates are recovered as
    e = s(f) - x.  conditions carry the jet systems of q at its support
    (the point at infinity included, acting on u-jets)."""

    beta: RatHom
    q: PrinHom
    conditions: tuple[JetCondition, ...]
    basis_0: tuple[tuple[Poly, ...], ...]
    basis_inf: tuple[tuple[Poly, ...], ...]
    splitting: tuple[int, ...]
    degree: int

    @property
    def rank(self) -> int:
        return len(self.beta.dst)

    @property
    def f_frame(self) -> tuple[int, ...]:
        return self.beta.src

    @property
    def e_frame(self) -> tuple[int, ...]:
        return self.beta.dst


def _poly_jets(f: Poly, a: Fraction, K: int) -> list[Fraction]:
    # jet_s = f^(s)(a)/s!; row s of the Taylor expansion at a
    out = []
    cs = f.coeffs
    for s in range(K):
        acc = Fraction(0)
        for c in range(s, len(cs)):
            acc += math.comb(c, s) * cs[c] * a ** (c - s)
        out.append(acc)
    return out


def _jet_rows_on_coeffs(cond: JetCondition, n: int, degs: list[int]) -> list[list[Fraction]]:
    """Rewrite a finite-point jet condition as rows over the coefficient
    space of polynomial vectors with deg f_j <= degs[j] (entries < 0 mean
    the slot is empty)."""
    a = cond.point.value
    K = cond.order
    width = sum(d + 1 for d in degs if d >= 0)
    offsets = []
    pos = 0
    for d in degs:
        offsets.append(pos)
        pos += d + 1 if d >= 0 else 0
    out = []
    for row in cond.rows:
        new = [Fraction(0)] * width
        for j in range(n):
            if degs[j] < 0:
                continue
            for c in range(degs[j] + 1):
                acc = Fraction(0)
                for s in range(min(c, K - 1) + 1):
                    w = row[j * K + s]
                    if w:
                        acc += w * math.comb(c, s) * a ** (c - s)
                if acc:
                    new[offsets[j] + c] = acc
        out.append(new)
    return out


def _conditions_of(q: PrinHom) -> tuple[JetCondition, ...]:
    conds = []
    for pt in q.support:
        rows = local_condition_matrix(q, pt)
        rr, piv = la.rref(rows)
        nz = tuple(tuple(r) for r in rr if any(r))
        if nz:
            conds.append(JetCondition(pt, q.order_at(pt), nz))
    return tuple(conds)


def _module_basis(n: int, conds: Sequence[JetCondition]) -> list[list[Poly]]:
    """k[z]-module basis of polynomial n-vectors satisfying all the given
    finite-point jet conditions."""
    if not conds:
        return [
            [Poly.one() if i == j else Poly.zero() for i in range(n)]
            for j in range(n)
        ]
    degD = sum(c.order for c in conds)
    D = Poly.one()
    for c in conds:
        D = D * Poly((-c.point.value, Fraction(1))) ** c.order
    degs = [degD - 1] * n
    rows = []
    for c in conds:
        rows.extend(_jet_rows_on_coeffs(c, n, degs))
    width = n * degD
    kernel = la.nullspace(rows, width)
    cols = []
    for vec in kernel:
        col = []
        for j in range(n):
            col.append(Poly(tuple(vec[j * degD : (j + 1) * degD])))
        cols.append(col)
    for j in range(n):
        cols.append([D if i == j else Poly.zero() for i in range(n)])
    return la.poly_hnf(cols, n)


def _as_poly(f: RatFunc, what: str) -> Poly:
    if not f.is_polynomial:
        raise InternalLiftFailure(f"{what} kept a pole; this is a bug")
    return f.num


def _beta_inf_chart(beta: RatHom) -> list[list[RatFunc]]:
    # u-chart matrix of beta: entry (i, j) becomes u^twist * beta_ij(1/u)
    return [
        [beta[i, j].flip(beta.twist(i, j)) for j in range(beta.ncols)]
        for i in range(beta.nrows)
    ]


def _u_chart_conditions(q: PrinHom) -> tuple[JetCondition, ...]:
    """Jet conditions of q on the u-chart: the infinity tails act at
    u = 0, a finite tail at a != 0 moves to u = 1/a (a = 0 leaves the
    chart)."""
    parts: dict[PointP1, list[list[tuple[Fraction, ...]]]] = {}
    n, m = q.nrows, q.ncols
    for pt in q.support:
        if pt.is_infinity:
            parts[PointP1.finite(0)] = [
                [q.entry(pt, i, j) for j in range(m)] for i in range(n)
            ]
        elif pt.value != 0:
            b = Fraction(1) / pt.value
            mat = []
            for i in range(n):
                row = []
                for j in range(m):
                    coeffs = q.entry(pt, i, j)
                    if not coeffs:
                        row.append(())
                        continue
                    tail = (
                        polar_coeffs_as_ratfunc(pt.value, coeffs)
                        .flip(q.twist(i, j))
                        .translate(b)
                        .polar0()
                    )
                    row.append(tail)
                mat.append(row)
            parts[PointP1.finite(b)] = mat
    qhat = PrinHom(q.src, q.dst, parts)
    return _conditions_of(qhat)


def graph_subbundle(
    ext: ExtensionData, beta: RatHom, window: int = 0
) -> GraphSubbundle:
    """Graph closure of a rational map beta : F -> E inside W.

    Solves the jet systems of q = p - prin_of(beta) at each support
    point, assembles module bases of the kernel sheaf over both charts
    (lifted to W by f |-> (beta f, f), stored in the chart
    trivializations), and computes splitting type and degree.  window
    widens the twist range scanned when inverting the section-count
    profile; the default suffices for every subsheaf of F.
    """
    if beta.src != ext.f_frame or beta.dst != ext.e_frame:
        raise FrameMismatch("beta must map the dual frame to E")
    n = ext.rank
    q = ext.p - prin_of(beta)
    conditions = _conditions_of(q)
    fin = [c for c in conditions if not c.point.is_infinity]
    fbasis = _module_basis(n, fin)
    if len(fbasis) != n:
        raise InternalLiftFailure("chart-0 kernel lattice is not rank n")
    # x = (s_0 - beta) f has no finite tails on the kernel lattice
    a0 = ext.s_zero() - beta
    basis_0 = []
    for col in fbasis:
        fcol = [RatFunc(p) for p in col]
        xcol = a0.apply(fcol)
        basis_0.append(
            tuple(_as_poly(v, "graph chart-0 lift") for v in xcol)
            + tuple(col)
        )
    uconds = _u_chart_conditions(q)
    ubasis = _module_basis(n, uconds)
    if len(ubasis) != n:
        raise InternalLiftFailure("chart-infinity kernel lattice is not rank n")
    ahat = _beta_inf_chart(ext.s_infinity() - beta)
    basis_inf = []
    for col in ubasis:
        fcol = [RatFunc(p) for p in col]
        xcol = [
            sum((ahat[i][j] * fcol[j] for j in range(n)), RatFunc.zero())
            for i in range(n)
        ]
        basis_inf.append(
            tuple(_as_poly(v, "graph chart-infinity lift") for v in xcol)
            + tuple(col)
        )
    degree = sum(ext.f_frame) - prin_length(q)
    splitting = _invert_profile(ext.f_frame, conditions, degree, window)
    if sum(splitting) != degree:
        raise InternalLiftFailure("splitting type disagrees with degree")
    return GraphSubbundle(
        beta=beta,
        q=q,
        conditions=conditions,
        basis_0=tuple(basis_0),
        basis_inf=tuple(basis_inf),
        splitting=splitting,
        degree=degree,
    )


# ============================================================
# h^0 profile and splitting type
# ============================================================


def h0_twisted(G: GraphSubbundle, m: int) -> int:
    """dim H^0(G(m)) by exact linear algebra on bounded-degree
    polynomial vectors against all stored jet conditions."""
    return _h0_from_data(G.f_frame, G.conditions, m)


def _h0_from_data(
    f_frame: Sequence[int], conditions: Sequence[JetCondition], m: int
) -> int:
    n = len(f_frame)
    degs = [f_frame[j] + m for j in range(n)]
    width = sum(d + 1 for d in degs if d >= 0)
    if width == 0:
        return 0
    offsets = []
    pos = 0
    for d in degs:
        offsets.append(pos)
        pos += d + 1 if d >= 0 else 0
    rows = []
    for cond in conditions:
        if cond.point.is_infinity:
            K = cond.order
            for row in cond.rows:
                new = [Fraction(0)] * width
                for j in range(n):
                    if degs[j] < 0:
                        continue
                    for t in range(K):
                        w = row[j * K + t]
                        if not w:
                            continue
                        c = degs[j] - t
                        if 0 <= c <= degs[j]:
                            new[offsets[j] + c] += w
                rows.append(new)
        else:
            rows.extend(_jet_rows_on_coeffs(cond, n, degs))
    if not rows:
        return width
    return width - la.rank(rows)


def _invert_profile(
    f_frame: Sequence[int],
    conditions: Sequence[JetCondition],
    degree: int,
    window: int = 0,
) -> tuple[int, ...]:
    """Recover the splitting (a_1 >= ... >= a_n) from the h^0 profile:
    h(m) - h(m-1) counts the a_i >= -m."""
    n = len(f_frame)
    fmax = max(f_frame)
    for attempt in range(4):
        extra = window + 8 * attempt
        lo = -fmax - 1 - extra
        hi = -(degree - (n - 1) * fmax) + extra
        if hi < lo:
            hi = lo
        h_prev = _h0_from_data(f_frame, conditions, lo - 1)
        found: list[int] = []
        seen = len(found)
        for m in range(lo, hi + 1):
            h = _h0_from_data(f_frame, conditions, m)
            c = h - h_prev
            h_prev = h
            while len(found) < c:
                found.append(-m)
            if len(found) == n and sum(found) == degree:
                return tuple(found)
        if len(found) == n and sum(found) == degree:
            return tuple(found)
    raise WindowTooSmall(
        f"splitting profile did not stabilize in window [{lo}, {hi}]"
    )


def splitting_type(G: GraphSubbundle, window: int = 0) -> tuple[int, ...]:
    """Splitting type of G recomputed from its h^0 profile; `window`
    widens the scan range symmetrically."""
    return _invert_profile(G.f_frame, G.conditions, G.degree, window)


# ============================================================
# Recovering beta; regularity
# ============================================================


def beta_from_subbundle(basis_0, basis_inf, ext: ExtensionData) -> RatHom:
    """The unique rational map whose graph spans the given lattice.

    basis_0 columns are 2n polynomial entries in the chart-0
    trivialization (x over f, x = s_0(f) - beta(f) on the graph); the
    F-projection must be invertible over the function field, else
    VerticalIntersection.  The u-chart lattice, when given, is checked
    to span the same graph.
    """
    n = ext.rank
    cols0 = [list(c) for c in basis_0]
    if len(cols0) != n or any(len(c) != 2 * n for c in cols0):
        raise FrameMismatch("chart-0 lattice must have n columns of height 2n")
    P = [[_rf(cols0[k][i]) for k in range(n)] for i in range(n)]
    Q = [[_rf(cols0[k][n + i]) for k in range(n)] for i in range(n)]
    zero, one = RatFunc.zero(), RatFunc.one()
    if la.field_det(Q, zero, one).is_zero:
        raise VerticalIntersection(
            "the lattice projects degenerately to F"
        )
    # M Q = P with M = s_0 - beta; transposing, tQ (row i of M) = row i of P
    tQ = la.mat_transpose(Q)
    entries = []
    for i in range(n):
        sol = la.field_solve(tQ, list(P[i]), zero, one)
        if sol is None:
            raise VerticalIntersection("the lattice projects degenerately to F")
        entries.append(sol)
    beta = ext.s_zero() - RatHom(ext.f_frame, ext.e_frame, entries)
    if basis_inf is not None:
        ahat = _beta_inf_chart(ext.s_infinity() - beta)
        for col in basis_inf:
            x_part = [_rf(x) for x in col[:n]]
            f_part = [_rf(x) for x in col[n:]]
            for i in range(n):
                got = sum(
                    (ahat[i][j] * f_part[j] for j in range(n)), RatFunc.zero()
                )
                if got != x_part[i]:
                    raise FrameMismatch(
                        "the two chart lattices do not span the same graph"
                    )
    return beta


def _rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc.constant(x)


def _chart_splittings(G: GraphSubbundle) -> tuple[RatHom, RatHom]:
    """Rational splittings recovered from q and beta: s_0 realizes the
    finite tails of p = q + prin_of(beta), s_inf the tails on the other
    chart."""
    beta = G.beta
    n = G.rank
    p_sys = G.q + prin_of(beta)
    s0 = RatHom(
        beta.src,
        beta.dst,
        [[assembled_finite(p_sys, i, j) for j in range(n)] for i in range(n)],
    )
    T = cocycle_of(p_sys)
    sinf = RatHom(
        beta.src,
        beta.dst,
        [[s0[i, j] - T[i][j] for j in range(n)] for i in range(n)],
    )
    return s0, sinf


def regularity_check(G: GraphSubbundle) -> bool:
    """Everywhere-regularity of beta on the stored lattice.

    Verifies first that the lattice really lies on the graph inside W
    (stored x-parts equal (s - beta) applied to the F-parts on each
    chart), then that beta applied to every column is pole-free on that
    column's chart.  Returns False on any violation; a False on a
    faithfully built lattice means the tails of p and beta cancel at a
    shared point, where regularity genuinely fails.
    """
    n = G.rank
    beta = G.beta
    s0, sinf = _chart_splittings(G)
    a0 = s0 - beta
    for col in G.basis_0:
        fcol = [RatFunc(p) for p in col[n:]]
        xcol = a0.apply(fcol)
        for i in range(n):
            if not xcol[i].is_polynomial:
                return False
            if xcol[i] != RatFunc(col[i]):
                return False
        ecol = beta.apply(fcol)
        if any(not v.is_polynomial for v in ecol):
            return False
    ahat = _beta_inf_chart(sinf - beta)
    bhat = _beta_inf_chart(beta)
    for col in G.basis_inf:
        fcol = [RatFunc(p) for p in col[n:]]
        for i in range(n):
            xv = sum((ahat[i][j] * fcol[j] for j in range(n)), RatFunc.zero())
            if not xv.is_polynomial:
                return False
            if xv != RatFunc(col[i]):
                return False
            ev = sum((bhat[i][j] * fcol[j] for j in range(n)), RatFunc.zero())
            if not ev.is_polynomial:
                return False
    return True


# ============================================================
# Isotropy criteria
# ============================================================


def _check_kind(kind: str) -> int:
    if kind == "symplectic":
        return -1
    if kind == "orthogonal":
        return 1
    raise FrameMismatch(f"unknown kind {kind!r}")


def isotropy_prin(q: PrinHom, kind: str = "symplectic") -> bool:
    """Polar-coefficient isotropy test: q symmetric (symplectic) or
    antisymmetric (orthogonal), exactly.

    Equivalent to isotropy of the subbundle cut out by q when
    h^0(Hom(F, E)) = 0; otherwise a HypothesisUnmetWarning is issued and
    the test is still computed.  Note this is stronger than symmetry of
    the class of q.
    """
    sign = _check_kind(kind)
    if h0_hom(q.src, q.dst) != 0:
        warnings.warn(
            "h^0(Hom(F, E)) != 0: principal-part symmetry no longer "
            "characterizes isotropy",
            HypothesisUnmetWarning,
        )
    return transpose_prin(q) == q.scale(-sign)


def isotropy_linear(beta: RatHom, alpha: RatHom, kind: str = "symplectic") -> bool:
    """Exact matrix identity t(beta) - beta = alpha (symplectic) or
    t(beta) + beta = alpha (orthogonal)."""
    sign = _check_kind(kind)
    return transpose_hom(beta) + beta.scale(sign) == alpha


def isotropy_direct(se: _StructuredExtension, G: GraphSubbundle) -> bool:
    """Evaluate the form on the graph lift of a function-field basis of
    F; true iff every pairing vanishes."""
    n = G.rank
    beta = G.beta
    members = []
    for j in range(n):
        phi = [RatFunc.one() if k == j else RatFunc.zero() for k in range(n)]
        members.append(RatSectionW(e=tuple(beta.apply(phi)), phi=tuple(phi)))
    for m1 in members:
        for m2 in members:
            if not se.theta(m1, m2).is_zero:
                return False
    return True


# ============================================================
# Kernel of beta on G
# ============================================================


@dataclass(frozen=True)
class VerticalKernel:
    """Kernel sheaf of beta restricted to G: generic rank, a cleared
    function-field basis, a chart-0 module basis refined by the jet
    conditions, and the witness that each generator lands in
    {0} + F inside W."""

    rank: int
    rational_basis: tuple[tuple[Poly, ...], ...]
    basis_0: tuple[tuple[Poly, ...], ...]
    verified: bool


def vertical_kernel(G: GraphSubbundle) -> VerticalKernel:
    """Sections of G killed by beta, with the graph-intersection
    description verified on the generators."""
    n = G.rank
    beta = G.beta
    # clear denominators rowwise; row scaling preserves the kernel
    B = []
    for i in range(n):
        den = Poly.one()
        for j in range(n):
            den = den * beta[i, j].den // den.gcd(beta[i, j].den)
        B.append([(beta[i, j] * RatFunc(den)).num for j in range(n)])
    kern = la.poly_kernel(B, n)
    if not kern:
        return VerticalKernel(0, (), (), True)
    k = len(kern)
    fin = [c for c in G.conditions if not c.point.is_infinity]
    refined = _refine_by_conditions(kern, fin, n)
    verified = True
    p_sys = G.q + prin_of(beta)
    for col in refined:
        fcol = [RatFunc(p) for p in col]
        image = beta.apply(fcol)
        if any(not v.is_zero for v in image):
            verified = False
        for cond in fin:
            K = cond.order
            a = cond.point.value
            jets: list[Fraction] = []
            for j in range(n):
                jets.extend(_poly_jets(col[j], a, K))
            M = local_condition_matrix(p_sys, cond.point)
            for row in M:
                if sum(w * jv for w, jv in zip(row, jets)) != 0:
                    verified = False
    return VerticalKernel(
        rank=k,
        rational_basis=tuple(tuple(c) for c in kern),
        basis_0=tuple(tuple(c) for c in refined),
        verified=verified,
    )


def _refine_by_conditions(
    kern: list[list[Poly]], conds: Sequence[JetCondition], n: int
) -> list[list[Poly]]:
    """Module basis of {combinations of kern columns satisfying the jet
    conditions}, mapped back to F-coordinates."""
    if not conds:
        return [list(c) for c in kern]
    k = len(kern)
    degD = sum(c.order for c in conds)
    D = Poly.one()
    for c in conds:
        D = D * Poly((-c.point.value, Fraction(1))) ** c.order
    # coefficients of the combination vector c in k[z]^k, deg < degD
    width = k * degD
    rows = []
    for cond in conds:
        K = cond.order
        a = cond.point.value
        # jets of (kern . c)_j at a are bilinear in kern-jets and c-jets
        kjets = [
            [_poly_jets(kern[t][j], a, 2 * K) for j in range(n)]
            for t in range(k)
        ]
        for row in cond.rows:
            new = [Fraction(0)] * width
            for t in range(k):
                for c in range(degD):
                    cjets = _poly_jets(Poly.monomial(c), a, K)
                    acc = Fraction(0)
                    for j in range(n):
                        for s in range(K):
                            w = row[j * K + s]
                            if not w:
                                continue
                            # jet_s of product = sum of jet convolutions
                            conv = Fraction(0)
                            for s1 in range(s + 1):
                                conv += kjets[t][j][s1] * cjets[s - s1]
                            acc += w * conv
                    if acc:
                        new[t * degD + c] = acc
            rows.append(new)
    kernel = la.nullspace(rows, width)
    cols = []
    for vec in kernel:
        comb = [Poly(tuple(vec[t * degD : (t + 1) * degD])) for t in range(k)]
        cols.append(comb)
    for t in range(k):
        cols.append([D if s == t else Poly.zero() for s in range(k)])
    cbasis = la.poly_hnf(cols, k)
    out = []
    for comb in cbasis:
        col = [Poly.zero()] * n
        for t in range(k):
            if not comb[t].is_zero:
                col = [col[j] + comb[t] * kern[t][j] for j in range(n)]
        out.append(col)
    return out


# ============================================================
# The principal-parts <-> subbundle bijection
# ============================================================


def _require_h0_zero(ext: ExtensionData):
    if h0_hom(ext.f_frame, ext.e_frame) != 0:
        raise HypothesisUnmet(
            "Hom(F, E) has global sections; the bijection needs h^0 = 0"
        )


def cor6_forward(ext: ExtensionData, q: PrinHom) -> GraphSubbundle:
    """Graph subbundle attached to a defect system q with the same class
    as p; the witness beta is the unique rational map with
    prin_of(beta) = p - q."""
    _require_h0_zero(ext)
    if q.src != ext.f_frame or q.dst != ext.e_frame:
        raise FrameMismatch("q must share the frames of p")
    if reduce_class(q) != ext.extension_class():
        raise ClassMismatch("q does not represent the extension class")
    beta = lift_rational(ext.p - q)
    return graph_subbundle(ext, beta)


def cor6_backward(ext: ExtensionData, G: GraphSubbundle) -> PrinHom:
    """Defect system of a graph subbundle: q = p - prin_of(beta) with
    beta recovered from the lattice."""
    _require_h0_zero(ext)
    beta = beta_from_subbundle(G.basis_0, G.basis_inf, ext)
    return ext.p - prin_of(beta)


# ============================================================
# Finite search for isotropic graphs
# ============================================================


@dataclass(frozen=True)
class SearchBounds:
    """Finite enumeration space: support points, maximal polar order,
    the coefficient value set, and a cap on returned subbundles."""

    points: tuple[PointP1, ...]
    max_order: int = 1
    values: tuple[Fraction, ...] = (Fraction(0), Fraction(1))
    cap: int = 25

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(
            self, "values", tuple(as_fraction(v) for v in self.values)
        )
        if self.max_order < 1:
            raise FrameMismatch("max_order must be at least 1")
        if self.cap < 1:
            raise FrameMismatch("cap must be at least 1")


def _tails(bounds: SearchBounds):
    return list(
        itertools.product(bounds.values, repeat=bounds.max_order)
    )


def search_lagrangian(
    se: _StructuredExtension, bounds: SearchBounds
) -> list[GraphSubbundle]:
    """Enumerate defect systems q of the structure's symmetry type
    ([q] = [p], symmetric for symplectic, antisymmetric for orthogonal)
    over the finite bounds, and return the isotropic graph subbundles
    they cut out, in enumeration order, up to the cap."""
    ext = se.ext
    n = ext.rank
    sign = -1 if se.kind == "symplectic" else 1
    cls_p = ext.extension_class()
    slots = []
    for pt in bounds.points:
        for i in range(n):
            for j in range(i, n):
                if i == j and se.kind == "orthogonal":
                    continue
                slots.append((pt, i, j))
    tails = _tails(bounds)
    out: list[GraphSubbundle] = []
    for choice in itertools.product(range(len(tails)), repeat=len(slots)):
        parts: dict[PointP1, list[list[tuple[Fraction, ...]]]] = {}
        for (pt, i, j), t in zip(slots, choice):
            tail = tails[t]
            if not any(tail):
                continue
            if pt not in parts:
                parts[pt] = [[() for _ in range(n)] for _ in range(n)]
            parts[pt][i][j] = tail
            if i != j:
                parts[pt][j][i] = tail if sign == -1 else tuple(-x for x in tail)
        q = PrinHom(ext.f_frame, ext.e_frame, parts)
        if reduce_class(q) != cls_p:
            continue
        beta = lift_rational(ext.p - q)
        G = graph_subbundle(ext, beta)
        if not isotropy_direct(se, G):
            continue
        out.append(G)
        if len(out) >= bounds.cap:
            break
    return out
