"""Command line front end.

Each command reads one problem file (`-` for stdin) in the structured
text format of textio, runs the corresponding library operation, and
prints an exact, deterministic report.  With --machine the report is
replaced by a structured-text document that parses back through
parse_document.

Exit codes: 0 affirmative, 1 negative verdict, 2 input error,
3 unsupported input (poles outside the rational points).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from typing import Optional

from . import sampling
from .bundles import TransitionData, cocycle_transpose_check, h0_hom, transpose_hom
from .errors import (
    ClassMismatch,
    DegenerateB,
    FrameMismatch,
    HypothesisUnmet,
    NotACoboundary,
    NotACochain,
    NotAFormCochain,
    ParseError,
    UnsupportedPoleField,
    VerticalIntersection,
    WindowTooSmall,
    ZeroDenominator,
)
from .forms import (
    ExtensionData,
    check_orthogonal,
    check_symplectic,
    is_global_member,
)
from .prinparts import (
    cech_class,
    cocycle_of,
    lift_rational,
    prin_length,
    prin_of,
    reduce_class,
    transpose_prin,
)
from .ratfield import parse_frac, parse_point, parse_ratfunc, ratfunc_text, zpow
from .subbundles import (
    SearchBounds,
    cor6_backward,
    cor6_forward,
    graph_subbundle,
    isotropy_direct,
    isotropy_linear,
    isotropy_prin,
    regularity_check,
    search_lagrangian,
    splitting_type,
)
from .textio import (
    Document,
    ResultRecord,
    parse_document,
    serialize_document,
    _mat_lines,
    _prin_lines,
)

WINDOW_ENV = "SYMPLEXT_WINDOW"


# ============================================================
# Input plumbing
# ============================================================


def _read_document(path: str) -> Document:
    if path == "-":
        return parse_document(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as handle:
        return parse_document(handle.read())


def _extension_of(doc: Document) -> ExtensionData:
    if doc.e_frame is None or doc.ell is None or doc.p is None:
        raise ParseError("problem file needs E, L and p records")
    return ExtensionData(doc.e_frame, doc.ell, doc.p)


def _kind_of(args, doc: Document) -> str:
    kind = getattr(args, "kind", None) or doc.kind or "symplectic"
    return kind


def _window_of(args) -> int:
    if getattr(args, "window", None) is not None:
        return args.window
    raw = os.environ.get(WINDOW_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{WINDOW_ENV} must be an integer, got {raw!r}")


def _parse_bounds_flag(text: str) -> SearchBounds:
    """`points=0,1,inf;order=2;values=0,1,-1;cap=25` -> SearchBounds."""
    fields = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"bad bounds field {part!r}")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"points", "order", "values", "cap"}
    if unknown:
        raise ParseError(f"unknown bounds fields {sorted(unknown)}")
    if "points" not in fields:
        raise ParseError("bounds need at least points=...")
    points = tuple(
        parse_point(tok) for tok in fields["points"].split(",") if tok.strip()
    )
    if not points:
        raise ParseError("bounds need at least one point")
    order = 1
    values: tuple = (Fraction(0), Fraction(1))
    cap = 25
    try:
        if "order" in fields:
            order = int(fields["order"])
        if "cap" in fields:
            cap = int(fields["cap"])
    except ValueError as exc:
        raise ParseError(f"bad bounds integer: {exc}")
    if "values" in fields:
        values = tuple(
            parse_frac(tok) for tok in fields["values"].split(",") if tok.strip()
        )
    try:
        return SearchBounds(points, order, values, cap)
    except ValueError as exc:
        raise ParseError(f"invalid bounds: {exc}")


def _bounds_of(args, doc: Document) -> SearchBounds:
    if getattr(args, "bounds", None):
        return _parse_bounds_flag(args.bounds)
    if doc.bounds is not None:
        return doc.bounds
    raise ParseError("search needs bounds (file records or --bounds)")


def _structure_of(ext: ExtensionData, kind: str):
    return check_symplectic(ext) if kind == "symplectic" else check_orthogonal(ext)


def _beta_and_q(doc: Document, ext: ExtensionData):
    """Resolve the subbundle datum: beta wins, else derive it from q."""
    if doc.beta is not None:
        beta = doc.beta
        return beta, ext.p - prin_of(beta)
    if doc.q is not None:
        q = doc.q
        if reduce_class(q) != ext.extension_class():
            raise ClassMismatch(
                "q does not represent the class of the extension"
            )
        return lift_rational(ext.p - q), q
    raise ParseError("needs a beta or q record")


def _emit(args, doc: Document, human: list[str]) -> None:
    if getattr(args, "machine", False):
        sys.stdout.write(serialize_document(doc))
    else:
        for line in human:
            print(line)


# ============================================================
# Commands
# ============================================================


def cmd_reduce_class(args) -> int:
    doc = _read_document(args.file)
    ext = _extension_of(doc)
    cls = ext.extension_class()
    out = Document(
        e_frame=ext.e_frame,
        ell=ext.ell,
        cohomology_class=cls,
        coboundary=cls.is_zero,
    )
    if cls.is_zero:
        human = ["class: 0, coboundary: yes"]
    else:
        human = []
        for i in range(ext.rank):
            for j in range(ext.rank):
                coeffs = cls.entry(i, j)
                if any(coeffs):
                    body = " ".join(str(c) for c in coeffs)
                    human.append(f"class[{i + 1},{j + 1}]: {body}")
        human.append("coboundary: no")
    _emit(args, out, human)
    # a successful reduction is a report, not a verdict
    return 0


def cmd_check_structure(args) -> int:
    doc = _read_document(args.file)
    ext = _extension_of(doc)
    kind = _kind_of(args, doc)
    se = _structure_of(ext, kind)
    if se is None:
        _emit(
            args,
            Document(kind=kind, e_frame=ext.e_frame, ell=ext.ell, structure=False),
            ["no structure for this representative"],
        )
        return 1
    out = Document(
        kind=kind,
        e_frame=ext.e_frame,
        ell=ext.ell,
        alpha=se.alpha,
        structure=True,
    )
    human = ["structure: yes"] + _mat_lines("alpha", se.alpha)
    _emit(args, out, human)
    return 0


def cmd_subbundle(args) -> int:
    doc = _read_document(args.file)
    ext = _extension_of(doc)
    beta, q = _beta_and_q(doc, ext)
    G = graph_subbundle(ext, beta, _window_of(args))
    regular = regularity_check(G)
    out = Document(
        e_frame=ext.e_frame,
        ell=ext.ell,
        beta=beta,
        q=G.q,
        degree=G.degree,
        splitting=G.splitting,
        regular=regular,
    )
    human = []
    if G.q.is_zero:
        human.append("G = F")
    human += _prin_lines("q", G.q)
    human.append(f"degree: {G.degree}")
    human.append("splitting: " + " ".join(str(a) for a in G.splitting))
    human.append(f"regular: {'yes' if regular else 'no'}")
    _emit(args, out, human)
    return 0


def cmd_isotropy(args) -> int:
    doc = _read_document(args.file)
    ext = _extension_of(doc)
    kind = _kind_of(args, doc)
    se = _structure_of(ext, kind)
    if se is None:
        _emit(
            args,
            Document(kind=kind, e_frame=ext.e_frame, ell=ext.ell, structure=False),
            ["no structure for this representative"],
        )
        return 1
    beta, q = _beta_and_q(doc, ext)
    G = graph_subbundle(ext, beta, _window_of(args))
    tests = {
        "prin": isotropy_prin(q, kind),
        "linear": isotropy_linear(beta, se.alpha, kind),
        "direct": isotropy_direct(se, G),
    }
    verdict = tests["direct"]
    agree = len(set(tests.values())) == 1
    out = Document(
        kind=kind,
        e_frame=ext.e_frame,
        ell=ext.ell,
        beta=beta,
        q=q,
        tests=tests,
        isotropic=verdict,
    )
    human = [f"test.{name}: {'yes' if ok else 'no'}" for name, ok in tests.items()]
    word = "yes" if verdict else "no"
    if agree:
        human.append(f"isotropic: {word} (all three tests agree)")
    else:
        human.append(
            f"isotropic: {word} (tests disagree; direct evaluation decides)"
        )
    _emit(args, out, human)
    return 0 if verdict else 1


def cmd_search(args) -> int:
    doc = _read_document(args.file)
    ext = _extension_of(doc)
    kind = _kind_of(args, doc)
    se = _structure_of(ext, kind)
    if se is None:
        _emit(
            args,
            Document(kind=kind, e_frame=ext.e_frame, ell=ext.ell, structure=False),
            ["no structure for this representative"],
        )
        return 1
    bounds = _bounds_of(args, doc)
    found = search_lagrangian(se, bounds)
    found = sorted(found, key=lambda G: "\n".join(_prin_lines("q", G.q)))
    records = []
    for G in found:
        certs = tuple(
            name
            for name, ok in (
                ("prin", isotropy_prin(G.q, kind)),
                ("linear", isotropy_linear(G.beta, se.alpha, kind)),
                ("direct", isotropy_direct(se, G)),
            )
            if ok
        )
        records.append(
            ResultRecord(
                beta=G.beta,
                q=G.q,
                splitting=G.splitting,
                degree=G.degree,
                certificates=certs,
            )
        )
    out = Document(
        kind=kind,
        e_frame=ext.e_frame,
        ell=ext.ell,
        p=ext.p,
        bounds=bounds,
        results=records,
    )
    human = [f"results: {len(records)}"]
    for k, rec in enumerate(records, 1):
        qtext = "; ".join(_prin_lines("q", rec.q))
        human.append(
            f"G[{k}]: degree={rec.degree}"
            f" splitting={','.join(str(a) for a in rec.splitting)}"
            f" certificates={','.join(rec.certificates)} {qtext}"
        )
    if not records:
        human.append("no isotropic subbundles within the bounds")
    _emit(args, out, human)
    return 0 if records else 1


# ============================================================
# Self test
# ============================================================


def _suite_parser(rng) -> int:
    count = 0
    for _ in range(40):
        m = sampling.rathom(rng, (1, 2), (-1, -2), max_order=2, poly_deg=1)
        for row in m.entries:
            for f in row:
                assert parse_ratfunc(ratfunc_text(f)) == f
                count += 1
    return count


def _suite_classes(rng) -> int:
    for _ in range(40):
        p = sampling.prinhom(rng, (1, 2), (-1, -2), max_order=2)
        assert cech_class(cocycle_of(p), p.src, p.dst) == reduce_class(p)
        assert transpose_prin(transpose_prin(p)) == p
        cb = sampling.coboundary_prinhom(rng, (1, 2), (-1, -2))
        assert reduce_class(cb).is_zero
    return 40


def _suite_cochains(rng) -> int:
    frames = TransitionData((-1, -2), 0)
    n, ds, ell = frames.rank, frames.e_degrees, frames.ell
    for _ in range(30):
        a0 = sampling.rathom(rng, ds, frames.f_degrees, max_order=2, poly_deg=1)
        rows0 = [list(r) for r in a0.entries]
        rowsinf = [
            [rows0[i][j] * zpow(ds[i] + ds[j] - ell) for j in range(n)]
            for i in range(n)
        ]
        assert cocycle_transpose_check((rows0, rowsinf), frames)
    return 30


def _suite_forms(rng) -> int:
    done = 0
    while done < 10:
        ext = sampling.symmetric_class_extension(rng, (-1, -2), 0)
        se = check_symplectic(ext)
        assert se is not None, "symmetric class must carry a structure"
        assert prin_of(se.alpha) == transpose_prin(ext.p) - ext.p
        assert transpose_hom(se.alpha) == se.alpha.scale(-1)
        pair = sampling.member_pair(rng, ext)
        if pair is None:
            continue
        m1, m2 = pair
        assert is_global_member(ext, m1)
        v12, v21 = se.theta(m1, m2), se.theta(m2, m1)
        assert v12.is_polynomial and (v12 + v21).is_zero
        done += 1
    return done


def _suite_graphs(rng) -> int:
    for _ in range(10):
        ext = sampling.extension(rng, (-1, -1), 0, max_order=2)
        beta = sampling.rathom(rng, ext.f_frame, ext.e_frame, max_order=2)
        G = graph_subbundle(ext, beta)
        assert G.degree == sum(ext.f_frame) - prin_length(G.q)
        assert sum(G.splitting) == G.degree
        assert splitting_type(G) == G.splitting
        from .subbundles import beta_from_subbundle

        assert beta_from_subbundle(G.basis_0, G.basis_inf, ext) == beta
    return 10


def _suite_roundtrip(rng) -> int:
    for _ in range(8):
        ext = sampling.extension(rng, (-1, -1), 0, max_order=2)
        assert h0_hom(ext.f_frame, ext.e_frame) == 0
        q = sampling.coboundary_prinhom(rng, ext.f_frame, ext.e_frame) + ext.p
        G = cor6_forward(ext, q)
        assert cor6_backward(ext, G) == q
    return 8


def cmd_selftest(args) -> int:
    suites = (
        ("expression parser round trip", _suite_parser),
        ("class reduction identities", _suite_classes),
        ("chart cochain transposes", _suite_cochains),
        ("symplectic structures and forms", _suite_forms),
        ("graph subbundles", _suite_graphs),
        ("condition/graph bijection", _suite_roundtrip),
    )
    failed = False
    for name, suite in suites:
        rng = random.Random(20260817)
        try:
            cases = suite(rng)
        except AssertionError as exc:
            failed = True
            detail = f": {exc}" if str(exc) else ""
            print(f"FAIL {name}{detail}")
        else:
            print(f"ok   {name} ({cases} cases)")
    if failed:
        return 1
    print("all invariant suites passed")
    return 0


# ============================================================
# Entry point
# ============================================================


def _add_file(sp):
    sp.add_argument("file", help="problem file in structured text, - for stdin")


def _add_kind(sp):
    sp.add_argument(
        "--kind",
        choices=("symplectic", "orthogonal"),
        help="structure kind (default: file record, else symplectic)",
    )


def _add_machine(sp):
    sp.add_argument(
        "--machine",
        action="store_true",
        help="print a structured-text document instead of the summary",
    )


def _add_window(sp):
    sp.add_argument(
        "--window",
        type=int,
        help=f"extra twist range for splitting inversion (default ${WINDOW_ENV} or 0)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symplext",
        description=(
            "exact symplectic and orthogonal extensions of split bundles "
            "on the projective line"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser(
        "reduce-class", help="canonical cohomology class of the glue p"
    )
    _add_file(sp)
    _add_machine(sp)
    sp.set_defaults(func=cmd_reduce_class)

    sp = sub.add_parser(
        "check-structure",
        help="decide whether the extension carries the requested form",
    )
    _add_file(sp)
    _add_kind(sp)
    _add_machine(sp)
    sp.set_defaults(func=cmd_check_structure)

    sp = sub.add_parser(
        "subbundle", help="graph subbundle of a rational map (beta or q)"
    )
    _add_file(sp)
    _add_machine(sp)
    _add_window(sp)
    sp.set_defaults(func=cmd_subbundle)

    sp = sub.add_parser(
        "isotropy", help="three-way isotropy verdict for a graph subbundle"
    )
    _add_file(sp)
    _add_kind(sp)
    _add_machine(sp)
    _add_window(sp)
    sp.set_defaults(func=cmd_isotropy)

    sp = sub.add_parser(
        "search", help="enumerate isotropic graph subbundles within bounds"
    )
    _add_file(sp)
    _add_kind(sp)
    _add_machine(sp)
    sp.add_argument(
        "--bounds",
        help="points=0,1,inf;order=2;values=0,1;cap=25 (overrides the file)",
    )
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("selftest", help="run the seeded invariant suites")
    sp.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedPoleField as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 3
    except (
        ClassMismatch,
        DegenerateB,
        FrameMismatch,
        HypothesisUnmet,
        NotACoboundary,
        NotACochain,
        NotAFormCochain,
        VerticalIntersection,
        WindowTooSmall,
        ZeroDenominator,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
