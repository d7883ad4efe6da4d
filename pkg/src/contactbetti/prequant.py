"""Circle quotients of Gorenstein diagrams and their twisted sectors.

An integral diagram describes a contact manifold fibering over a labelled
symplectic base once an integral direction through the interior is fixed.
This module translates between the two descriptions (labelled polytope
with its Gorenstein period on one side, diagram plus quotient direction on
the other), enumerates the twisted sectors of the quotient, and assembles
the two column-graded tables that must agree: the base's orbifold
cohomology and the contact homology of the total space.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .contact import NotInterior, ToricDiagram, validate_diagram
from .exactlat import (basis_completion, det_int, mat_inverse, primitive_vector,
                       rat_kernel, rat_rank, rat_solve, smith_invariants,
                       transpose, vec_mat)
from .grading import GradedDimensions, default_window
from .polyarith import poly_add, poly_mul, poly_trim
from .polytope import LabelledPolytope, convex_hull, labelled_polytope
from .resolution import NotStrictlyConvex


class NotGorenstein(ValueError):
    """The labelled data admits no integral period-one functional."""


class NotPrimitive(ValueError):
    """The quotient direction is an integer multiple of a shorter vector."""


class BaseNotSmooth(ValueError):
    """An operation restricted to manifold bases met an orbifold one."""


# ----------------------------------------------------------------------
# good cones


@dataclass(frozen=True)
class ConeFace:
    """Face of a pointed cone, keyed by the full tight set of facet ids."""

    tight: Tuple[int, ...]
    dim: int


@dataclass(frozen=True)
class GoodCone:
    normals: Tuple[Tuple[int, ...], ...]
    rays: Tuple[Tuple[int, ...], ...]
    faces: Tuple[ConeFace, ...]     # dims 1 .. n+1; the apex is never used

    @property
    def dimension(self) -> int:
        return len(self.normals[0])


@dataclass(frozen=True)
class GoodConeReport:
    """Outcome of the per-face lattice-basis test.

    ``failing_face`` is the tight set of the first bad face; ``invariants``
    carries its Smith invariants, or None when the face is cut by the wrong
    number of facets.
    """

    good: bool
    cone: Optional[GoodCone]
    failing_face: Optional[Tuple[int, ...]]
    invariants: Optional[Tuple[int, ...]]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _cone_skeleton(normals):
    """Extreme rays and facet-intersection faces of {y : <nu_j, y> >= 0}."""
    nu = tuple(tuple(int(x) for x in row) for row in normals)
    d = len(nu)
    n1 = len(nu[0])
    if len(set(nu)) != d:
        raise ValueError("duplicate normals")
    for row in nu:
        if math.gcd(*[abs(x) for x in row]) != 1:
            raise ValueError("normals must be primitive, got %s" % (row,))
    if rat_rank(nu) < n1:
        raise NotStrictlyConvex("normals do not span, the cone has a line")
    rays = set()
    for subset in itertools.combinations(range(d), n1 - 1):
        sub = [nu[i] for i in subset]
        if rat_rank(sub) != n1 - 1:
            continue
        for kern in rat_kernel(sub):
            cand = primitive_vector(kern)
            for ray in (cand, tuple(-x for x in cand)):
                if all(_dot(row, ray) >= 0 for row in nu):
                    rays.add(ray)
    rays = tuple(sorted(rays))
    if rat_rank(rays) < n1:
        raise NotStrictlyConvex("cone is not full-dimensional")
    zero_sets = [frozenset(j for j in range(d) if _dot(nu[j], ray) == 0)
                 for ray in rays]
    seen: Dict[frozenset, ConeFace] = {}
    for size in range(d + 1):
        for J in itertools.combinations(range(d), size):
            members = frozenset(i for i, z in enumerate(zero_sets)
                                if set(J) <= z)
            if not members or members in seen:
                continue
            tight = sorted(set.intersection(*[set(zero_sets[i])
                                              for i in members]))
            dim = rat_rank([rays[i] for i in members])
            seen[members] = ConeFace(tuple(tight), dim)
    faces = tuple(sorted(seen.values(), key=lambda f: (len(f.tight), f.tight)))
    return rays, faces


def is_good_cone(normals) -> GoodConeReport:
    """Test every face of codim 1..n for being cut by exactly that many
    facets whose normals extend to a lattice basis."""
    rays, faces = _cone_skeleton(normals)
    nu = tuple(tuple(int(x) for x in row) for row in normals)
    n1 = len(nu[0])
    for face in faces:
        if not 1 <= face.dim <= n1 - 1:
            continue
        codim = n1 - face.dim
        if len(face.tight) != codim:
            return GoodConeReport(False, None, face.tight, None)
        inv = smith_invariants([list(nu[j]) for j in face.tight])
        if any(x != 1 for x in inv):
            return GoodConeReport(False, None, face.tight, inv)
    return GoodConeReport(True, GoodCone(nu, rays, faces), None, None)


def good_cone(normals) -> GoodCone:
    report = is_good_cone(normals)
    if not report.good:
        raise ValueError("cone is not good at face %s (invariants %s)"
                         % (report.failing_face, report.invariants))
    return report.cone


# ----------------------------------------------------------------------
# labelled polytope <-> diagram


def gorenstein_r(delta: LabelledPolytope):
    """Integral (r, w) with <(w, r), (v_j, b_j)> = 1 on every facet.

    The lifted facet rows span, so the solution is unique when it exists;
    returns None when it is non-integral, inconsistent, or has r < 1.
    """
    rows = [tuple(v) + (b,) for v, b in
            zip(delta.weighted_normals, delta.offsets)]
    n1 = delta.dimension + 1
    ones = [1] * n1
    for subset in itertools.combinations(range(len(rows)), n1):
        sub = [rows[i] for i in subset]
        if rat_rank(sub) == n1:
            sol = rat_solve(sub, ones)
            break
    else:
        return None
    if any(_dot(row, sol) != 1 for row in rows):
        return None
    if any(x.denominator != 1 for x in sol):
        return None
    r = int(sol[-1])
    if r < 1:
        return None
    return r, tuple(int(x) for x in sol[:-1])


def diagram_from_labelled(delta: LabelledPolytope) -> ToricDiagram:
    """Integral diagram of the prequantization of the labelled base.

    Completes the Gorenstein functional to a lattice basis and maps each
    lifted facet row to (v~_j, 1); the diagram is the hull of the v~_j.
    """
    found = gorenstein_r(delta)
    if found is None:
        raise NotGorenstein("labelled polytope has no integral period")
    r, w = found
    A = basis_completion([w + (r,)])
    rows = [tuple(v) + (b,) for v, b in
            zip(delta.weighted_normals, delta.offsets)]
    images = [tuple(_dot(a, row) for a in A) for row in rows]
    P = convex_hull(images)
    assert len(P.vertices) == len(images), "a facet row failed to survive"
    return validate_diagram(P)


# ----------------------------------------------------------------------
# quotients and twisted sectors


@dataclass(frozen=True)
class SectorComponent:
    """One fixed-point component: a face of the cone with its fractional
    membership coefficients and their doubled sum as degree shift."""

    face: Tuple[int, ...]
    coefficients: Tuple[Fraction, ...]
    shift: Fraction
    h: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return 2 * (len(self.h) - 1)


@dataclass(frozen=True)
class TwistedSector:
    period: Fraction
    components: Tuple[SectorComponent, ...]


@dataclass(frozen=True)
class QuotientData:
    r: int
    base: LabelledPolytope
    sectors: Tuple[TwistedSector, ...]
    smooth: bool
    cone: GoodCone
    reeb: Tuple[int, ...]
    transform: Tuple[Tuple[int, ...], ...]
    order: int


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _face_h(C: GoodCone, J: Sequence[int]) -> Tuple[int, ...]:
    """h-vector of the base face cut out by the facets in J (J may be
    empty for the whole base); computed inside the cone's face lattice."""
    target = set(J)
    n = C.dimension - 1
    fdim = n - len(J)
    total: Tuple[int, ...] = (0,)
    for cf in C.faces:
        if not target <= set(cf.tight):
            continue
        gdim = cf.dim - 1
        term = [0] * (fdim - gdim) + [1]
        for _ in range(gdim):
            term = list(poly_mul(term, (1, -1)))
        total = poly_add(total, term)
    total = poly_trim(total)
    assert len(total) == fdim + 1 and all(c >= 0 for c in total)
    return tuple(total)


def twisted_sectors(C: GoodCone, nu) -> Tuple[TwistedSector, ...]:
    """All sectors of the period-one action generated by the direction nu.

    Per face J the direction is reduced modulo the span of the face's
    normals; the gcd g of the reduced coordinates bounds the periods to
    s/g, and a candidate survives at J only when every coefficient is
    fractional (integral ones belong to a smaller face).
    """
    nu = tuple(int(x) for x in nu)
    assert math.gcd(*[abs(x) for x in nu]) == 1, "direction must be primitive"
    assert all(_dot(nu, ray) > 0 for ray in C.rays), "direction not interior"
    by_period: Dict[Fraction, List[SectorComponent]] = {}
    for face in C.faces:
        J = face.tight
        if J:
            sub = [list(C.normals[j]) for j in J]
            B = sub + [list(row) for row in basis_completion(sub)]
            y = vec_mat(nu, mat_inverse(B))
            g = math.gcd(*[abs(x) for x in y[len(J):]])
            assert g >= 1, "direction lies in a face span"
        else:
            y = nu
            g = 1
        h = _face_h(C, J)
        for s in range(1, g + 1):
            T = Fraction(s, g)
            coeffs = tuple(_frac(-T * y[i]) for i in range(len(J)))
            if any(c == 0 for c in coeffs):
                continue
            comp = SectorComponent(tuple(J), coeffs,
                                   2 * sum(coeffs, Fraction(0)), h)
            by_period.setdefault(T, []).append(comp)
    return tuple(
        TwistedSector(T, tuple(sorted(by_period[T],
                                      key=lambda c: (len(c.face), c.face))))
        for T in sorted(by_period))


def quotient_polytope(D: ToricDiagram, nu, transform=None) -> QuotientData:
    """Labelled base of the quotient of D along nu = (w, r), plus sectors.

    The lattice map G with G nu = e_(n+1) is read off a basis completion
    unless a caller-supplied unimodular ``transform`` with the same
    property is given; the base is basis-independent either way.
    """
    nu = tuple(int(x) for x in nu)
    n1 = D.dimension + 1
    assert len(nu) == n1
    if math.gcd(*[abs(x) for x in nu]) != 1:
        raise NotPrimitive("quotient direction %s is not primitive" % (nu,))
    r = nu[-1]
    if r < 1:
        raise NotInterior("quotient direction needs a positive last entry")
    point = tuple(Fraction(x, r) for x in nu[:-1])
    if not D.polytope.contains(point, strict=True):
        raise NotInterior("direction %s does not point into the diagram"
                          % (nu,))
    if transform is None:
        cols = list(basis_completion([nu])) + [nu]
        G = mat_inverse(transpose(cols))
    else:
        G = tuple(tuple(int(x) for x in row) for row in transform)
        assert abs(det_int(G)) == 1, "transform must be unimodular"
        image = tuple(_dot(row, nu) for row in G)
        assert image == (0,) * (n1 - 1) + (1,), "transform must map nu to e"
    images = [tuple(_dot(row, v) for row in G) for v in D.normals]
    base = labelled_polytope([u[:-1] for u in images],
                             [u[-1] for u in images])
    smooth = all(
        abs(det_int([list(base.weighted_normals[i]) for i in tight])) == 1
        for tight in base.vertex_facets)
    cone = good_cone(D.normals)
    return QuotientData(r, base, twisted_sectors(cone, nu), smooth,
                        cone, nu, G, D.order)


# ----------------------------------------------------------------------
# graded tables


def orbifold_cohomology_of_base(Q: QuotientData) -> GradedDimensions:
    """Sector cohomology of the base, each component shifted by its
    doubled coefficient sum; rational degrees appear at singular faces."""
    n = Q.base.dimension
    items = [(comp.shift + 2 * i, c)
             for sector in Q.sectors
             for comp in sector.components
             for i, c in enumerate(comp.h)]
    return GradedDimensions.from_items(items, (Fraction(0), Fraction(2 * n)))


def _sector_items(sector: TwistedSector, r: int, hi: Fraction):
    for comp in sector.components:
        offset = comp.shift + 2 * r * sector.period - 2
        k = 0
        while offset + 2 * r * k <= hi:
            for i, c in enumerate(comp.h):
                yield 2 * i + offset + 2 * r * k, c
            k += 1


def _hc_window(Q, window):
    if Q.order != 1:
        raise NotGorenstein(
            "sector contact homology needs an integral diagram")
    if window is None:
        window = default_window(1, Q.base.dimension)
    return Fraction(window[0]), Fraction(window[1])


def hc_quotient_rows(Q: QuotientData,
                     window: Optional[Tuple[Fraction, Fraction]] = None
                     ) -> Dict[Fraction, GradedDimensions]:
    """Per-period contribution rows of the table summed by hc_from_quotient."""
    lo, hi = _hc_window(Q, window)
    return {sector.period:
            GradedDimensions.from_items(_sector_items(sector, Q.r, hi),
                                        (lo, hi))
            for sector in Q.sectors}


def hc_from_quotient(Q: QuotientData,
                     window: Optional[Tuple[Fraction, Fraction]] = None
                     ) -> GradedDimensions:
    """Contact homology of the total space from the base's sectors:

        HC_d += h_i(S)  at  d = 2 i + |S| + 2 r k,   |S| = c_T + 2 r T - 2,

    summed over periods T, components S, and windings k >= 0."""
    lo, hi = _hc_window(Q, window)
    items = [item for sector in Q.sectors
             for item in _sector_items(sector, Q.r, hi)]
    return GradedDimensions.from_items(items, (lo, hi))


def hc_smooth_base(Q: QuotientData,
                   window: Optional[Tuple[Fraction, Fraction]] = None
                   ) -> GradedDimensions:
    """Manifold-base specialization, h_i(B) at degrees 2i + 2r k + 2(r-1);
    checked against the sector formula before returning."""
    if not Q.smooth:
        raise BaseNotSmooth("base has an orbifold vertex")
    if Q.order != 1:
        raise NotGorenstein(
            "sector contact homology needs an integral diagram")
    n = Q.base.dimension
    if window is None:
        window = default_window(1, n)
    lo, hi = Fraction(window[0]), Fraction(window[1])
    base_h = next(comp.h for sector in Q.sectors if sector.period == 1
                  for comp in sector.components if not comp.face)
    items = []
    k = 0
    while 2 * (Q.r - 1) + 2 * Q.r * k <= hi:
        for i, c in enumerate(base_h):
            items.append((2 * i + 2 * (Q.r - 1) + 2 * Q.r * k, c))
        k += 1
    out = GradedDimensions.from_items(items, (lo, hi))
    assert out == hc_from_quotient(Q, (lo, hi))
    return out


# ----------------------------------------------------------------------
# global invariants


def _minor_gcd(rows, n1: int) -> int:
    g = 0
    for subset in itertools.combinations(range(len(rows)), n1):
        g = math.gcd(g, abs(det_int([list(rows[i]) for i in subset])))
    return g


def fundamental_group_order(D: ToricDiagram) -> int:
    """gcd of the maximal minors of the lifted vertex matrix."""
    p = _minor_gcd(D.normals, D.dimension + 1)
    assert p >= 1
    return p


def minimal_chern(Q: QuotientData) -> int:
    """r times the total-space fundamental group order; manifold bases only."""
    if not Q.smooth:
        raise BaseNotSmooth("minimal Chern number formula needs a "
                            "manifold base")
    return Q.r * _minor_gcd(Q.cone.normals, Q.cone.dimension)
