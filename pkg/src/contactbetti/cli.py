"""Command-line front end.

Parses diagram and labelled-polytope documents (files or built-in
``corpus:<name>`` entries), dispatches the computation pipelines, and
emits deterministic reports as JSON or as a plain-text rendering of the
same JSON.

Exit codes: 0 success, 2 cross-check mismatch, 64 parse error,
65 validation error, 66 genericity failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ._jsonio import dumps, parse_point, point_json, rat_str
from .contact import (GenericityFailure, ReebVector, ToricDiagram,
                      contact_betti_direct, contact_betti_from_delta,
                      mean_euler_characteristic, minimal_discrepancy,
                      orbit_data, orbit_degree, validate_diagram)
from .corpus import corpus
from .ehrhart import delta_vector, is_reflexive, quasipolynomial
from .exactlat import basis_completion, primitive_vector
from .grading import GradedDimensions, default_window
from .polytope import (LabelledPolytope, convex_hull, count_points,
                       labelled_polytope, normalized_volume, triangulate_ids)
from .prequant import (diagram_from_labelled, fundamental_group_order,
                       gorenstein_r, hc_from_quotient, hc_quotient_rows,
                       is_good_cone, orbifold_cohomology_of_base,
                       quotient_polytope)
from .resolution import (Triangulation, fan_over, hc_from_resolution,
                         hc_sector_rows, orbifold_poincare, stapledon_check,
                         star_triangulation, triangulation_from_cells,
                         trivial_triangulation, validate_triangulation)

OK = 0
MISMATCH = 2
PARSE_ERROR = 64
VALIDATION_ERROR = 65
GENERICITY_ERROR = 66

CROSSCHECK_PERTURBATIONS = (Fraction(1, 101), Fraction(1, 97),
                            Fraction(1, 89))


class DocumentError(Exception):
    """Input document or option is structurally malformed."""


# ----------------------------------------------------------------------
# document loading


def _load_raw(source: str) -> dict:
    if source.startswith("corpus:"):
        name = source[len("corpus:"):]
        docs = corpus()
        if name not in docs:
            raise DocumentError(
                "unknown corpus document %r; available: %s"
                % (name, ", ".join(sorted(docs))))
        return docs[name]
    with open(source, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _int_entries(values, what: str) -> Tuple[int, ...]:
    if not isinstance(values, list) or not values:
        raise DocumentError("%s must be a non-empty list" % what)
    out = []
    for x in values:
        if isinstance(x, bool) or not isinstance(x, int):
            raise DocumentError("%s must contain integers only" % what)
        out.append(x)
    return tuple(out)


def _structured(raw) -> dict:
    """Shape-check a raw document; geometry is still unchecked."""
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    kind = raw.get("kind")
    if kind == "diagram":
        verts = raw.get("vertices")
        if not isinstance(verts, list) or not verts:
            raise DocumentError('diagram document needs a "vertices" list')
        try:
            points = [parse_point(v) for v in verts]
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise DocumentError("bad vertex coordinate: %s" % exc) from None
        if len({len(p) for p in points}) != 1:
            raise DocumentError("vertices have mixed dimensions")
        reeb = raw.get("reeb")
        if reeb is not None:
            reeb = _int_entries(reeb, '"reeb"')
            if len(reeb) != len(points[0]) + 1:
                raise DocumentError(
                    '"reeb" needs %d entries' % (len(points[0]) + 1))
        return {"kind": kind, "points": points, "reeb": reeb}
    if kind == "labelled":
        normals = raw.get("normals")
        if not isinstance(normals, list) or not normals:
            raise DocumentError('labelled document needs a "normals" list')
        rows = [_int_entries(a, "normal") for a in normals]
        if len({len(a) for a in rows}) != 1:
            raise DocumentError("normals have mixed dimensions")
        offsets = _int_entries(raw.get("offsets"), '"offsets"')
        if len(offsets) != len(rows):
            raise DocumentError("need one offset per normal")
        return {"kind": kind, "normals": rows, "offsets": offsets}
    raise DocumentError('document "kind" must be "diagram" or "labelled"')


def _document(args) -> dict:
    return _structured(_load_raw(args.input))


def _labelled_of(doc: dict) -> LabelledPolytope:
    return labelled_polytope(doc["normals"], doc["offsets"])


def _derived_direction(delta: LabelledPolytope) -> Tuple[int, ...]:
    """Quotient direction whose quotient reproduces the labelled base.

    In the basis used by diagram_from_labelled the direction is the last
    column of the change-of-basis matrix [completion; (w, r)].
    """
    found = gorenstein_r(delta)
    assert found is not None
    r, w = found
    A = basis_completion([w + (r,)])
    return tuple(row[-1] for row in A) + (r,)


def _diagram_of(doc: dict) -> Tuple[ToricDiagram, Optional[Tuple[int, ...]]]:
    """Validated diagram plus the document's quotient direction, if any.

    Labelled documents are lifted to their prequantization diagram; the
    derived direction quotients back to the original base.
    """
    if doc["kind"] == "diagram":
        return validate_diagram(convex_hull(doc["points"])), doc["reeb"]
    delta = _labelled_of(doc)
    return diagram_from_labelled(delta), _derived_direction(delta)


def _fallback_direction(D: ToricDiagram) -> Tuple[int, ...]:
    """Primitive integral lift of the vertex centroid; always interior."""
    verts = D.polytope.vertices
    centre = [sum(v[i] for v in verts) / len(verts)
              for i in range(D.dimension)]
    return tuple(primitive_vector(centre + [Fraction(1)]))


def _direction_for(D: ToricDiagram, doc_nu, args) -> Tuple[int, ...]:
    if getattr(args, "reeb", None) is not None:
        nu = args.reeb
        if len(nu) != D.dimension + 1:
            raise DocumentError(
                "--reeb needs %d comma-separated integers"
                % (D.dimension + 1))
        return nu
    if doc_nu is not None:
        return doc_nu
    return _fallback_direction(D)


def _reeb_field(D: ToricDiagram, args) -> ReebVector:
    perturb = getattr(args, "perturb", Fraction(1, 101))
    base = getattr(args, "reeb", None)
    if base is None:
        return ReebVector.default_for(D, perturb)
    if len(base) != D.dimension:
        raise DocumentError(
            "--reeb needs %d comma-separated rationals" % D.dimension)
    direction = tuple(perturb ** i for i in range(D.dimension))
    return ReebVector(tuple(Fraction(x) for x in base), direction)


def _window_for(D: ToricDiagram, args) -> Tuple[Fraction, Fraction]:
    if getattr(args, "window", None) is not None:
        return args.window
    return default_window(D.order, D.dimension)


def _triangulation_for(D: ToricDiagram, args) -> Triangulation:
    if getattr(args, "triangulation", None) is not None:
        with open(args.triangulation, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict) or "cells" not in raw:
            raise DocumentError('triangulation file needs a "cells" list')
        try:
            extra = [parse_point(p) for p in raw.get("points", [])]
            cells = [_int_entries(c, "cell") for c in raw["cells"]]
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise DocumentError("bad triangulation file: %s" % exc) from None
        points = list(D.polytope.vertices) + extra
        return triangulation_from_cells(D, points, cells)
    if getattr(args, "star", None) is not None:
        return star_triangulation(D, args.star)
    if getattr(args, "trivial", False):
        return trivial_triangulation(D)
    # default: vertices only, so the fan over it is always crepant
    P = D.polytope
    if len(P.vertices) == D.dimension + 1:
        return trivial_triangulation(D)
    return triangulation_from_cells(D, P.vertices, triangulate_ids(P))


# ----------------------------------------------------------------------
# option parsing helpers (argparse ``type=`` callables)


def _rat_arg(s: str) -> Fraction:
    return Fraction(s)


def _rat_point_arg(s: str) -> Tuple[Fraction, ...]:
    return tuple(Fraction(t) for t in s.split(","))


def _int_point_arg(s: str) -> Tuple[int, ...]:
    return tuple(int(t) for t in s.split(","))


def _window_arg(s: str) -> Tuple[Fraction, Fraction]:
    lo, sep, hi = s.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("window must be given as lo:hi")
    return Fraction(lo), Fraction(hi)


def _positive_int_arg(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# ----------------------------------------------------------------------
# report fragments


def _window_json(window) -> List[str]:
    return [rat_str(window[0]), rat_str(window[1])]


def _base_json(Q) -> dict:
    base = Q.base
    return {
        "normals": [list(a) for a in base.weighted_normals],
        "offsets": list(base.offsets),
        "labels": list(base.labels),
        "vertices": [point_json(v) for v in base.polytope.vertices],
        "smooth": Q.smooth,
    }


def _sectors_json(Q) -> List[dict]:
    return [{
        "T": rat_str(sector.period),
        "components": [{
            "face": list(comp.face),
            "cT": rat_str(comp.shift),
            "h": list(comp.h),
        } for comp in sector.components],
    } for sector in Q.sectors]


def _keyed_rows(rows: Dict[Fraction, GradedDimensions]) -> List[dict]:
    return [{"key": rat_str(k), "dims": rows[k].to_rows()}
            for k in sorted(rows)]


# ----------------------------------------------------------------------
# subcommand handlers; each returns (report, exit_code)


def _cmd_validate(args):
    doc = _document(args)
    if doc["kind"] == "diagram":
        D, nu = _diagram_of(doc)
        report = {
            "kind": "diagram",
            "ok": True,
            "m": D.order,
            "dimension": D.dimension,
            "normals": [list(u) for u in D.normals],
            "good_cone": is_good_cone(D.normals).good,
            "fundamental_group_order": fundamental_group_order(D),
            "reeb": list(nu) if nu is not None else None,
        }
        return report, OK
    delta = _labelled_of(doc)
    found = gorenstein_r(delta)
    report = {
        "kind": "labelled",
        "ok": True,
        "dimension": delta.dimension,
        "normals": [list(a) for a in delta.weighted_normals],
        "offsets": list(delta.offsets),
        "labels": list(delta.labels),
        "vertices": [point_json(v) for v in delta.polytope.vertices],
        "gorenstein": (None if found is None
                       else {"r": found[0], "w": list(found[1])}),
    }
    return report, OK


def _cmd_ehrhart(args):
    D, _ = _diagram_of(_document(args))
    qp = quasipolynomial(D.polytope)
    top = 2 * D.order * (D.dimension + 1)
    report = {
        "m": qp.period,
        "dimension": qp.dimension,
        "branches": [[rat_str(c) for c in br] for br in qp.branches],
        "counts": [1] + [count_points(D.polytope, t)
                         for t in range(1, top + 1)],
    }
    return report, OK


def _cmd_delta(args):
    D, _ = _diagram_of(_document(args))
    dv = delta_vector(D.polytope)
    report = {
        "m": dv.order,
        "dimension": dv.dimension,
        "delta": list(dv.entries),
        "top_index": dv.top_index,
        "normalized_volume": rat_str(normalized_volume(D.polytope)),
        "reflexive": is_reflexive(D.polytope).reflexive,
    }
    return report, OK


def _cmd_cb(args):
    D, _ = _diagram_of(_document(args))
    window = _window_for(D, args)
    tables = {}
    if args.pipeline in ("delta", "both"):
        tables["delta"] = contact_betti_from_delta(D, window)
    if args.pipeline in ("direct", "both"):
        tables["direct"] = contact_betti_direct(D, _reeb_field(D, args),
                                                window)
    shown = tables.get("delta", tables.get("direct"))
    report = {
        "m": D.order,
        "pipeline": args.pipeline,
        "window": _window_json(window),
        "cb": shown.to_rows(),
        "agreement": (tables["delta"] == tables["direct"]
                      if len(tables) == 2 else None),
        "mean_euler_characteristic": rat_str(mean_euler_characteristic(D)),
        "minimal_discrepancy": rat_str(minimal_discrepancy(D)),
    }
    return report, OK


def _cmd_orbits(args):
    D, _ = _diagram_of(_document(args))
    reeb = _reeb_field(D, args)
    families = []
    for fid in range(len(D.facet_vertex_ids)):
        fam = orbit_data(D, fid, reeb)
        degrees = []
        if not fam.diverges:
            degrees = [rat_str(orbit_degree(fam, N))
                       for N in range(1, args.iterates + 1)]
        families.append({
            "facet": fid,
            "eta": list(fam.eta),
            "k": fam.k,
            "b": rat_str(fam.b.value),
            "b_slope": rat_str(fam.b.slope),
            "diverges": fam.diverges,
            "degrees": degrees,
        })
    return {"m": D.order, "iterates": args.iterates,
            "families": families}, OK


def _cmd_resolve(args):
    D, _ = _diagram_of(_document(args))
    T = _triangulation_for(D, args)
    rep = validate_triangulation(D, T)
    F = fan_over(T)
    st = stapledon_check(D, T)
    report = {
        "m": D.order,
        "points": [point_json(p) for p in T.points],
        "cells": [list(c) for c in T.cells],
        "cell_volumes": [rat_str(v) for v in rep.cell_volumes],
        "unimodular": rep.unimodular,
        "crepant": F.crepant,
        "stapledon": {
            "ok": True,
            "delta": list(st.delta),
            "series_checked_to": st.series_checked_to,
        },
    }
    return report, OK


def _cmd_orbifold(args):
    D, _ = _diagram_of(_document(args))
    T = _triangulation_for(D, args)
    rep = validate_triangulation(D, T)
    F = fan_over(T)
    report = {
        "H_orb": orbifold_poincare(F).to_rows(),
        "crepant": F.crepant,
        "unimodular": rep.unimodular,
    }
    return report, OK


def _cmd_quotient(args):
    doc = _document(args)
    D, doc_nu = _diagram_of(doc)
    nu = _direction_for(D, doc_nu, args)
    Q = quotient_polytope(D, nu)
    hc = None
    if D.order == 1:
        hc = hc_from_quotient(Q, _window_for(D, args)).to_rows()
    report = {
        "r": Q.r,
        "m": D.order,
        "reeb": list(nu),
        "base": _base_json(Q),
        "sectors": _sectors_json(Q),
        "H_orb": orbifold_cohomology_of_base(Q).to_rows(),
        "HC": hc,
    }
    return report, OK


def _cmd_hc(args):
    doc = _document(args)
    D, doc_nu = _diagram_of(doc)
    window = _window_for(D, args)
    pipeline = args.pipeline
    if pipeline is None:
        pipeline = "quotient" if D.order == 1 else "resolution"
    if pipeline == "quotient":
        Q = quotient_polytope(D, _direction_for(D, doc_nu, args))
        table = hc_from_quotient(Q, window)
        rows = _keyed_rows(hc_quotient_rows(Q, window))
    else:
        T = _triangulation_for(D, args)
        validate_triangulation(D, T)
        table = hc_from_resolution(D, T, window)
        rows = _keyed_rows(hc_sector_rows(D, T, window))
    report = {
        "m": D.order,
        "pipeline": pipeline,
        "window": _window_json(window),
        "rows": rows,
        "HC": table.to_rows(),
    }
    return report, OK


def _cmd_crosscheck(args):
    doc = _document(args)
    D, doc_nu = _diagram_of(doc)
    window = _window_for(D, args)
    reference = contact_betti_from_delta(D, window)
    checks = []
    for eps in CROSSCHECK_PERTURBATIONS:
        table = contact_betti_direct(D, ReebVector.default_for(D, eps),
                                     window)
        checks.append(("direct-" + rat_str(eps), table == reference))
    T = _triangulation_for(D, args)
    validate_triangulation(D, T)
    stapledon_check(D, T)
    checks.append(("stapledon", True))
    checks.append(("resolution",
                   hc_from_resolution(D, T, window) == reference))
    if D.order == 1:
        Q = quotient_polytope(D, _direction_for(D, doc_nu, args))
        checks.append(("quotient", hc_from_quotient(Q, window) == reference))
    agreement = all(ok for _, ok in checks)
    report = {
        "m": D.order,
        "window": _window_json(window),
        "cb": reference.to_rows(),
        "checks": [{"name": name, "agrees": ok} for name, ok in checks],
        "agreement": agreement,
    }
    return report, OK if agreement else MISMATCH


_HANDLERS = {
    "validate": _cmd_validate,
    "ehrhart": _cmd_ehrhart,
    "delta": _cmd_delta,
    "cb": _cmd_cb,
    "orbits": _cmd_orbits,
    "resolve": _cmd_resolve,
    "orbifold": _cmd_orbifold,
    "quotient": _cmd_quotient,
    "hc": _cmd_hc,
    "crosscheck": _cmd_crosscheck,
}


# ----------------------------------------------------------------------
# table rendering: a pure function of the JSON report


def _scalar(v) -> bool:
    return v is None or isinstance(v, (bool, int, str))


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v)


def _table_lines(obj, indent: int):
    pad = "  " * indent
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if _scalar(val):
                yield "%s%s: %s" % (pad, key, _fmt(val))
            else:
                yield "%s%s:" % (pad, key)
                yield from _table_lines(val, indent + 1)
    else:
        for val in obj:
            if _scalar(val):
                yield "%s- %s" % (pad, _fmt(val))
            elif isinstance(val, list) and all(_scalar(x) for x in val):
                yield "%s- %s" % (pad, " ".join(_fmt(x) for x in val))
            else:
                yield "%s-" % pad
                yield from _table_lines(val, indent + 1)


def render_table(report: dict) -> str:
    normalized = json.loads(json.dumps(report))
    return "\n".join(_table_lines(normalized, 0)) + "\n"


# ----------------------------------------------------------------------
# argument parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(PARSE_ERROR, "%s: error: %s\n" % (self.prog, message))


def _add_common(sub):
    sub.add_argument("input",
                     help="document path, or corpus:<name> for a built-in")
    sub.add_argument("--format", choices=("json", "table"), default="json")


def _add_reeb_field(sub):
    sub.add_argument("--reeb", type=_rat_point_arg, metavar="P/Q,...",
                     help="interior base point of the Reeb field")
    sub.add_argument("--perturb", type=_rat_arg, default=Fraction(1, 101),
                     metavar="P/Q", help="perturbation parameter")


def _add_window(sub):
    sub.add_argument("--window", type=_window_arg, metavar="LO:HI",
                     help="degree window (rationals)")


def _add_triangulation(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--triangulation", metavar="FILE",
                       help="JSON file with extra points and cells")
    group.add_argument("--star", type=_rat_point_arg, metavar="P/Q,...",
                       help="star-triangulate at this interior point")
    group.add_argument("--trivial", action="store_true",
                       help="use the diagram itself as single cell")


def _build_parser() -> _Parser:
    parser = _Parser(prog="contactbetti",
                     description="Contact invariants of toric diagrams "
                                 "via exact cross-validating pipelines.")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    _add_common(subs.add_parser("validate",
                                help="check a document and report its data"))
    _add_common(subs.add_parser("ehrhart",
                                help="counting quasi-polynomial branches"))
    _add_common(subs.add_parser("delta",
                                help="numerator vector of the counting "
                                     "series"))

    cb = subs.add_parser("cb", help="graded orbit counts by degree")
    _add_common(cb)
    _add_reeb_field(cb)
    _add_window(cb)
    cb.add_argument("--pipeline", choices=("delta", "direct", "both"),
                    default="both")

    orbits = subs.add_parser("orbits", help="closed-orbit family data")
    _add_common(orbits)
    _add_reeb_field(orbits)
    orbits.add_argument("--iterates", type=_positive_int_arg, default=6,
                        metavar="N", help="degrees of the first N iterates")

    resolve = subs.add_parser("resolve",
                              help="triangulate and check the induced fan")
    _add_common(resolve)
    _add_triangulation(resolve)

    orbifold = subs.add_parser("orbifold",
                               help="graded sector cohomology of the fan")
    _add_common(orbifold)
    _add_triangulation(orbifold)

    quotient = subs.add_parser("quotient",
                               help="quotient base and twisted sectors")
    _add_common(quotient)
    quotient.add_argument("--reeb", type=_int_point_arg, metavar="W1,...,R",
                          help="integral quotient direction")
    _add_window(quotient)

    hc = subs.add_parser("hc", help="graded table with per-sector rows")
    _add_common(hc)
    hc.add_argument("--reeb", type=_int_point_arg, metavar="W1,...,R",
                    help="integral quotient direction (quotient pipeline)")
    _add_window(hc)
    _add_triangulation(hc)
    hc.add_argument("--pipeline", choices=("quotient", "resolution"),
                    help="default: quotient when integral, else resolution")

    crosscheck = subs.add_parser("crosscheck",
                                 help="run all applicable pipelines and "
                                      "compare")
    _add_common(crosscheck)
    crosscheck.add_argument("--reeb", type=_int_point_arg,
                            metavar="W1,...,R",
                            help="integral quotient direction")
    _add_window(crosscheck)
    _add_triangulation(crosscheck)

    return parser


def _thread_env_error() -> Optional[str]:
    raw = os.environ.get("CONTACTBETTI_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        return "CONTACTBETTI_THREADS must be a positive integer, got %r" % raw
    return None


def _fail(code: int, message: str) -> int:
    sys.stderr.write("contactbetti: %s\n" % message)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else PARSE_ERROR
    env_error = _thread_env_error()
    if env_error is not None:
        return _fail(PARSE_ERROR, env_error)
    try:
        report, code = _HANDLERS[args.command](args)
    except DocumentError as exc:
        return _fail(PARSE_ERROR, str(exc))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        return _fail(PARSE_ERROR, str(exc))
    except GenericityFailure as exc:
        return _fail(GENERICITY_ERROR, "genericity failure: %s" % exc)
    except AssertionError as exc:
        return _fail(MISMATCH, "cross-check mismatch: %s" % exc)
    except ValueError as exc:
        return _fail(VALIDATION_ERROR,
                     "%s: %s" % (type(exc).__name__, exc))
    out = dumps(report) if args.format == "json" else render_table(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
