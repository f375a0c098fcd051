"""Principal part systems for maps of split bundles, and the degree-one
cohomology calculus built on them.

A principal part system assigns polar tails at finitely many points of the
projective line to each entry of a matrix indexed by a source and a target
frame.  At a finite point a the tuple (c_1, ..., c_m) of entry (i, j)
stands for c_1/(z-a) + ... + c_m/(z-a)^m; at infinity it stands for
c_1 u^{-1} + ... + c_m u^{-m} in the coordinate u = 1/z, read against the
entry twist dst[i] - src[j] exactly as in :mod:`symplext.ratfield`.

Systems modulo the tails of honest rational maps form H^1 of the hom
bundle.  :func:`reduce_class` computes the canonical representative
supported at infinity, :func:`lift_rational` inverts it on coboundaries,
and :func:`cech_class` translates one-cocycles on the standard two-chart
cover into the same normal form, so transition-matrix and polar-tail
descriptions of an extension can be compared coefficient by coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _linalg as la
from .bundles import Frame, RatHom, as_frame
from .errors import FrameMismatch, NotACochain, NotACoboundary
from .ratfield import (
    INFINITY,
    PointP1,
    Poly,
    RatFunc,
    as_fraction,
    full_principal_part,
    polar_coeffs_as_ratfunc,
)

__all__ = [
    "PrinHom",
    "CohClass",
    "prin_of",
    "assembled_finite",
    "reduce_class",
    "is_coboundary",
    "lift_rational",
    "transpose_prin",
    "prin_length",
    "local_condition_matrix",
    "apply_prin",
    "cocycle_of",
    "cech_class",
    "class_dim",
]

Coeffs = tuple[Fraction, ...]


def _trim(coeffs: Iterable) -> Coeffs:
    out = [as_fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _zpow(k: int) -> RatFunc:
    if k >= 0:
        return RatFunc(Poly.monomial(k))
    return RatFunc(Poly.one(), Poly.monomial(-k))


class PrinHom:
    """Principal part system of a rational map between framed split
    bundles.

    ``parts`` maps points to matrices of polar coefficient tuples; zero
    tails and empty points are normalized away, so equality of systems is
    dict equality.
    """

    __slots__ = ("src", "dst", "parts")

    def __init__(self, src, dst, parts: Mapping[PointP1, Sequence[Sequence[Iterable]]]):
        src, dst = as_frame(src), as_frame(dst)
        norm: dict[PointP1, tuple[tuple[Coeffs, ...], ...]] = {}
        for pt, mat in parts.items():
            if not isinstance(pt, PointP1):
                raise FrameMismatch(f"not a point: {pt!r}")
            rows = tuple(tuple(_trim(c) for c in row) for row in mat)
            if len(rows) != len(dst) or any(len(r) != len(src) for r in rows):
                raise FrameMismatch(
                    f"part matrix at {pt} is not {len(dst)}x{len(src)}"
                )
            if any(c for row in rows for c in row):
                norm[pt] = rows
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "parts", norm)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(src, dst) -> "PrinHom":
        return PrinHom(src, dst, {})

    @staticmethod
    def single(src, dst, point: PointP1, i: int, j: int, coeffs) -> "PrinHom":
        """System with one nonzero tail, at ``point`` in entry (i, j)."""
        src, dst = as_frame(src), as_frame(dst)
        mat = [
            [(coeffs if (r, c) == (i, j) else ()) for c in range(len(src))]
            for r in range(len(dst))
        ]
        return PrinHom(src, dst, {point: mat})

    # -- structure ----------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.dst)

    @property
    def ncols(self) -> int:
        return len(self.src)

    def twist(self, i: int, j: int) -> int:
        return self.dst[i] - self.src[j]

    @property
    def support(self) -> tuple[PointP1, ...]:
        return tuple(sorted(self.parts, key=PointP1.sort_key))

    @property
    def is_zero(self) -> bool:
        return not self.parts

    def entry(self, point: PointP1, i: int, j: int) -> Coeffs:
        mat = self.parts.get(point)
        return mat[i][j] if mat is not None else ()

    def order_at(self, point: PointP1) -> int:
        mat = self.parts.get(point)
        if mat is None:
            return 0
        return max((len(c) for row in mat for c in row), default=0)

    def _key(self):
        items = tuple(
            (pt, self.parts[pt]) for pt in self.support
        )
        return (self.src, self.dst, items)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrinHom) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        bits = []
        for pt in self.support:
            mat = self.parts[pt]
            bits.append(f"{pt}: {[[list(map(str, c)) for c in row] for row in mat]}")
        return f"PrinHom[{self.src}->{self.dst}; " + "; ".join(bits) + "]"

    # -- linear operations ---------------------------------------------

    def _check_same_frame(self, other: "PrinHom"):
        if self.src != other.src or self.dst != other.dst:
            raise FrameMismatch("frames differ")

    def _combine(self, other: "PrinHom", op) -> "PrinHom":
        self._check_same_frame(other)
        pts = set(self.parts) | set(other.parts)
        parts = {}
        for pt in pts:
            mat = []
            for i in range(self.nrows):
                row = []
                for j in range(self.ncols):
                    a, b = self.entry(pt, i, j), other.entry(pt, i, j)
                    m = max(len(a), len(b))
                    row.append(
                        tuple(
                            op(
                                a[k] if k < len(a) else Fraction(0),
                                b[k] if k < len(b) else Fraction(0),
                            )
                            for k in range(m)
                        )
                    )
                mat.append(row)
            parts[pt] = mat
        return PrinHom(self.src, self.dst, parts)

    def __add__(self, other: "PrinHom") -> "PrinHom":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PrinHom") -> "PrinHom":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "PrinHom":
        return self.scale(-1)

    def scale(self, c) -> "PrinHom":
        c = as_fraction(c)
        parts = {
            pt: [[tuple(c * x for x in cf) for cf in row] for row in mat]
            for pt, mat in self.parts.items()
        }
        return PrinHom(self.src, self.dst, parts)

    def transpose(self) -> "PrinHom":
        return transpose_prin(self)


def prin_of(phi: RatHom) -> PrinHom:
    """All polar tails of a rational map, entry by entry in its twists."""
    parts: dict[PointP1, list[list[Coeffs]]] = {}

    def slot(pt: PointP1) -> list[list[Coeffs]]:
        if pt not in parts:
            parts[pt] = [[() for _ in range(phi.ncols)] for _ in range(phi.nrows)]
        return parts[pt]

    for i in range(phi.nrows):
        for j in range(phi.ncols):
            for pp in full_principal_part(phi[i, j], phi.twist(i, j)):
                slot(pp.point)[i][j] = pp.coeffs
    return PrinHom(phi.src, phi.dst, parts)


def assembled_finite(p: PrinHom, i: int, j: int, skip: PointP1 | None = None) -> RatFunc:
    """Sum of the finite polar tails of entry (i, j) as a rational
    function (optionally skipping one point)."""
    total = RatFunc.zero()
    for pt, mat in p.parts.items():
        if pt.is_infinity or pt == skip:
            continue
        coeffs = mat[i][j]
        if coeffs:
            total = total + polar_coeffs_as_ratfunc(pt.value, coeffs)
    return total


def transpose_prin(p: PrinHom) -> PrinHom:
    """Pointwise matrix transpose; frames must be self-dual so every
    entry keeps its twist."""
    if len(p.src) != len(p.dst):
        raise FrameMismatch("transpose needs a square self-dual frame")
    s = p.src[0] + p.dst[0]
    if any(a + b != s for a, b in zip(p.src, p.dst)):
        raise FrameMismatch("frame is not self-dual under transpose")
    parts = {
        pt: [[mat[j][i] for j in range(len(mat))] for i in range(len(mat[0]))]
        for pt, mat in p.parts.items()
    }
    return PrinHom(p.src, p.dst, parts)


# ============================================================
# Classes in H^1 of the hom bundle
# ============================================================


def class_dim(src, dst) -> int:
    """dim H^1 of the hom bundle between the two frames."""
    src, dst = as_frame(src), as_frame(dst)
    return sum(max(0, -(d - e) - 1) for d in dst for e in src)


class CohClass:
    """Canonical representative of a degree-one class: per entry the
    infinity tail coefficients c_1 .. c_{-t-1} that no rational map can
    absorb.  Entries that vanish identically are dropped, so dict
    equality decides equality of classes."""

    __slots__ = ("src", "dst", "data")

    def __init__(self, src, dst, data: Mapping[tuple[int, int], Iterable]):
        src, dst = as_frame(src), as_frame(dst)
        norm: dict[tuple[int, int], Coeffs] = {}
        for (i, j), coeffs in data.items():
            length = max(0, -(dst[i] - src[j]) - 1)
            vals = [as_fraction(c) for c in coeffs]
            if len(vals) > length:
                raise FrameMismatch(
                    f"class entry ({i}, {j}) longer than h^1 of its twist"
                )
            vals += [Fraction(0)] * (length - len(vals))
            if any(vals):
                norm[(i, j)] = tuple(vals)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "data", norm)

    @staticmethod
    def zero(src, dst) -> "CohClass":
        return CohClass(src, dst, {})

    @property
    def is_zero(self) -> bool:
        return not self.data

    def twist(self, i: int, j: int) -> int:
        return self.dst[i] - self.src[j]

    def entry(self, i: int, j: int) -> Coeffs:
        length = max(0, -self.twist(i, j) - 1)
        got = self.data.get((i, j))
        return got if got is not None else (Fraction(0),) * length

    def vector(self) -> list[Fraction]:
        """Flatten to the fixed slot order (i, j, k); length class_dim."""
        out: list[Fraction] = []
        for i in range(len(self.dst)):
            for j in range(len(self.src)):
                out.extend(self.entry(i, j))
        return out

    def _key(self):
        return (self.src, self.dst, tuple(sorted(self.data.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, CohClass) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        if self.is_zero:
            return f"CohClass[{self.src}->{self.dst}; 0]"
        bits = ", ".join(
            f"({i},{j}): {tuple(map(str, c))}" for (i, j), c in sorted(self.data.items())
        )
        return f"CohClass[{self.src}->{self.dst}; {bits}]"

    def __add__(self, other: "CohClass") -> "CohClass":
        if self.src != other.src or self.dst != other.dst:
            raise FrameMismatch("frames differ")
        keys = set(self.data) | set(other.data)
        return CohClass(
            self.src,
            self.dst,
            {
                k: tuple(a + b for a, b in zip(self.entry(*k), other.entry(*k)))
                for k in keys
            },
        )

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + other.scale(-1)

    def __neg__(self) -> "CohClass":
        return self.scale(-1)

    def scale(self, c) -> "CohClass":
        c = as_fraction(c)
        return CohClass(
            self.src,
            self.dst,
            {k: tuple(c * x for x in v) for k, v in self.data.items()},
        )

    def transpose(self) -> "CohClass":
        """Swap the entry indices; needs a self-dual frame so the twists
        (and so the slot lengths) match up."""
        if len(self.src) != len(self.dst):
            raise FrameMismatch("transpose needs a square self-dual frame")
        s = self.src[0] + self.dst[0]
        if any(a + b != s for a, b in zip(self.src, self.dst)):
            raise FrameMismatch("frame is not self-dual under transpose")
        return CohClass(
            self.src, self.dst, {(j, i): v for (i, j), v in self.data.items()}
        )


def _infinity_excess(g: RatFunc, twist: int) -> Coeffs:
    """Polar tail at infinity, in the given twist, of a rational
    function: the u-polar of u^twist g(1/u)."""
    if g.is_zero:
        return ()
    return g.flip(twist).polar0()


def reduce_class(p: PrinHom) -> CohClass:
    """Canonical representative of the class of a principal part system.

    Per entry subtract the tails of the assembled finite parts, leaving a
    tail at infinity alone; then discard the orders a polynomial can
    reach.  What is left are the coefficients c_k, 1 <= k <= -t - 1.

    >>> from .ratfield import PointP1
    >>> p = PrinHom((0,), (-2,), {PointP1.finite(1): [[(1,)]]})
    >>> reduce_class(p).entry(0, 0)
    (Fraction(-1, 1),)
    >>> q = PrinHom((0,), (-3,), {INFINITY: [[(5, 7, 9)]]})
    >>> reduce_class(q).entry(0, 0)
    (Fraction(5, 1), Fraction(7, 1))
    """
    data: dict[tuple[int, int], Coeffs] = {}
    for i in range(p.nrows):
        for j in range(p.ncols):
            t = p.twist(i, j)
            length = max(0, -t - 1)
            if length == 0:
                continue
            exc = _infinity_excess(assembled_finite(p, i, j), t)
            pinf = p.entry(INFINITY, i, j)
            vals = tuple(
                (pinf[k] if k < len(pinf) else Fraction(0))
                - (exc[k] if k < len(exc) else Fraction(0))
                for k in range(length)
            )
            if any(vals):
                data[(i, j)] = vals
    return CohClass(p.src, p.dst, data)


def is_coboundary(p: PrinHom) -> bool:
    """True iff some rational map has exactly these polar tails."""
    return reduce_class(p).is_zero


def _lift_entry(g: RatFunc, inf_target: Coeffs, twist: int, tag: str = "") -> RatFunc:
    """Canonical rational function with the finite tails of g (g must be
    a pure sum of finite tails) and the given tail at infinity.

    The residual at infinity order k is matched by the monomial z^(k+t);
    orders with k + t < 0 would need a pole at 0 and are obstructions.
    """
    exc = _infinity_excess(g, twist)
    kmax = max(len(inf_target), len(exc))
    out = g
    for k in range(1, kmax + 1):
        want = inf_target[k - 1] if k <= len(inf_target) else Fraction(0)
        have = exc[k - 1] if k <= len(exc) else Fraction(0)
        r = want - have
        if r == 0:
            continue
        if k + twist < 0:
            raise NotACoboundary(
                f"obstructed at infinity order {k} in twist {twist}{tag}"
            )
        out = out + _zpow(k + twist) * r
    return out


def lift_rational(p: PrinHom) -> RatHom:
    """The canonical rational map whose polar tails are exactly p.

    Raises NotACoboundary when the class of p is nonzero.  The lift is
    normalized: its polynomial part has no monomials below the first
    order needed at infinity.
    """
    entries = []
    for i in range(p.nrows):
        row = []
        for j in range(p.ncols):
            row.append(
                _lift_entry(
                    assembled_finite(p, i, j),
                    p.entry(INFINITY, i, j),
                    p.twist(i, j),
                    tag=f" of entry ({i}, {j})",
                )
            )
        entries.append(row)
    return RatHom(p.src, p.dst, entries)


# ============================================================
# Local condition matrices and length
# ============================================================


def local_condition_matrix(p: PrinHom, point: PointP1) -> list[list[Fraction]]:
    """Matrix of the linear conditions the tails of p at a point impose
    on jets of source vectors.

    Rows are ordered by (target row i, polar order r = 1..K); columns by
    (source column j, jet order s = 0..K-1); the entry is the tail
    coefficient c^{ij}_{r+s}.  The rank is the local length at the point;
    the row space cuts out the jets whose image has no tail there.
    """
    K = p.order_at(point)
    n, m = p.nrows, p.ncols
    rows: list[list[Fraction]] = []
    for i in range(n):
        for r in range(1, K + 1):
            row: list[Fraction] = []
            for j in range(m):
                c = p.entry(point, i, j)
                for s in range(K):
                    row.append(c[r + s - 1] if r + s <= len(c) else Fraction(0))
            rows.append(row)
    return rows


def prin_length(p: PrinHom) -> int:
    """Total length of the torsion the system generates: the sum over
    support points of the rank of the local condition matrix."""
    return sum(la.rank(local_condition_matrix(p, pt)) for pt in p.support)


# ============================================================
# Applying a system to sections
# ============================================================


def apply_prin(p: PrinHom, sections: Sequence[RatFunc]) -> PrinHom:
    """Polar tails of p applied to a tuple of global sections of the
    source frame: a column system in the target frame.

    sections[j] must be a global section of O(src[j]); the result row i
    collects, point by point, the tails of (tail of p_{ij} there) times
    sections[j].
    """
    secs = [s if isinstance(s, RatFunc) else RatFunc.constant(s) for s in sections]
    if len(secs) != p.ncols:
        raise FrameMismatch("section vector length differs from source rank")
    for j, s in enumerate(secs):
        if not s.is_global(p.src[j]):
            raise FrameMismatch(f"sections[{j}] is not global for twist {p.src[j]}")
    parts: dict[PointP1, list[list[Coeffs]]] = {}
    for pt in p.support:
        col: list[list[Coeffs]] = [[()] for _ in range(p.nrows)]
        hit = False
        for i in range(p.nrows):
            if pt.is_infinity:
                # work in u = 1/z; sections flip to their chart form
                total = RatFunc.zero()
                for j in range(p.ncols):
                    coeffs = p.entry(pt, i, j)
                    if coeffs:
                        total = total + polar_coeffs_as_ratfunc(
                            Fraction(0), coeffs
                        ) * secs[j].flip(p.src[j])
                tail = total.polar0() if not total.is_zero else ()
            else:
                total = RatFunc.zero()
                for j in range(p.ncols):
                    coeffs = p.entry(pt, i, j)
                    if coeffs:
                        total = total + polar_coeffs_as_ratfunc(
                            pt.value, coeffs
                        ) * secs[j]
                tail = (
                    total.translate(pt.value).polar0() if not total.is_zero else ()
                )
            if tail:
                hit = True
            col[i][0] = tail
        if hit:
            parts[pt] = col
    return PrinHom((0,), p.dst, parts)


# ============================================================
# Cech dictionary on the two-chart cover
# ============================================================


def cocycle_of(p: PrinHom) -> list[list[RatFunc]]:
    """Chart-0 matrix of the one-cocycle s_0 - s_inf attached to p.

    s_0 realizes the finite tails, s_inf realizes the tails on the chart
    at infinity (all a != 0, and infinity itself, where the monomial
    z^(k+t) absorbs the residual order k).  The difference is regular on
    the overlap: a Laurent matrix.
    """
    out: list[list[RatFunc]] = []
    origin = PointP1.finite(0)
    for i in range(p.nrows):
        row = []
        for j in range(p.ncols):
            t = p.twist(i, j)
            c0 = p.entry(origin, i, j)
            p0 = polar_coeffs_as_ratfunc(Fraction(0), c0) if c0 else RatFunc.zero()
            rest = assembled_finite(p, i, j, skip=origin)
            exc = _infinity_excess(rest, t)
            pinf = p.entry(INFINITY, i, j)
            T = p0
            for k in range(1, max(len(pinf), len(exc)) + 1):
                want = pinf[k - 1] if k <= len(pinf) else Fraction(0)
                have = exc[k - 1] if k <= len(exc) else Fraction(0)
                r = want - have
                if r != 0:
                    T = T - _zpow(k + t) * r
            row.append(T)
        out.append(row)
    return out


def cech_class(T: Sequence[Sequence[RatFunc]], src, dst) -> CohClass:
    """Class of a one-cocycle on the two-chart cover, given by its
    chart-0 matrix (entries Laurent in z, twist dst[i] - src[j]).

    The nonnegative powers are a chart-0 coboundary; the tail at 0 is a
    principal part system whose canonical representative is the class.
    """
    src, dst = as_frame(src), as_frame(dst)
    mats = [[x for x in row] for row in T]
    if len(mats) != len(dst) or any(len(r) != len(src) for r in mats):
        raise FrameMismatch("cocycle matrix does not fit the frames")
    parts: dict[PointP1, list[list[Coeffs]]] = {}
    origin = PointP1.finite(0)
    mat0: list[list[Coeffs]] = []
    for row in mats:
        out_row: list[Coeffs] = []
        for f in row:
            if not isinstance(f, RatFunc):
                f = RatFunc.constant(f) if not isinstance(f, Poly) else RatFunc(f)
            if not f.is_zero and any(c != 0 for c in f.den.coeffs[:-1]):
                raise NotACochain(
                    "cocycle entries must be regular on the overlap "
                    "(Laurent in z)"
                )
            out_row.append(f.polar0() if not f.is_zero else ())
        mat0.append(out_row)
    if any(c for row in mat0 for c in row):
        parts[origin] = mat0
    return reduce_class(PrinHom(src, dst, parts))
