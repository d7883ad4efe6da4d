"""Rational convex polytopes with exact arithmetic.

Vertex and halfspace representations, face lattices, lattice point counting,
normalized volumes, polar duals, and labelled (weighted normal) polytopes.
Halfspaces are stored as (normal a, offset c) meaning <a, x> + c >= 0 with a
a primitive inward integer normal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .exactlat import (
    LinearlyDependent,
    primitive_vector,
    rat_kernel,
    rat_rank,
    rat_solve,
)

RatPoint = tuple[Fraction, ...]


class DegenerateInput(ValueError):
    """Points do not affinely span the ambient space."""


class OriginNotInterior(ValueError):
    """Polar dual requested for a polytope without the origin inside."""


class NotSimple(ValueError):
    """A labelled polytope vertex meets more facets than the dimension."""


class UnboundedInput(ValueError):
    """Halfspace data describes an unbounded polyhedron."""


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: Fraction
    vertex_ids: tuple[int, ...]


@dataclass(frozen=True)
class Face:
    dim: int
    vertex_ids: tuple[int, ...]
    facet_ids: tuple[int, ...]


class RationalPolytope:
    """Immutable full-dimensional rational polytope."""

    def __init__(self, dimension: int, vertices: tuple[RatPoint, ...],
                 facets: tuple[Facet, ...]):
        self.dimension = dimension
        self.vertices = vertices
        self.facets = facets
        self._lattice: dict[int, tuple[Face, ...]] | None = None

    def __repr__(self):
        return "RationalPolytope(dim=%d, vertices=%s)" % (
            self.dimension, [tuple(map(str, v)) for v in self.vertices])

    def __eq__(self, other):
        return (isinstance(other, RationalPolytope)
                and self.dimension == other.dimension
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.dimension, self.vertices))

    def contains(self, point, strict: bool = False) -> bool:
        pt = tuple(Fraction(x) for x in point)
        for f in self.facets:
            val = sum(a * x for a, x in zip(f.normal, pt)) + f.offset
            if val < 0 or (strict and val == 0):
                return False
        return True

    def face_lattice(self) -> dict[int, tuple[Face, ...]]:
        if self._lattice is None:
            self._lattice = _build_face_lattice(self)
        return self._lattice


def _as_points(points) -> list[RatPoint]:
    out = [tuple(Fraction(x) for x in p) for p in points]
    if not out or len({len(p) for p in out}) != 1:
        raise DegenerateInput("need a nonempty list of equal-length points")
    return out


def affine_dim(points) -> int:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    diffs = [[x - b for x, b in zip(p, base)] for p in pts[1:]]
    if not diffs:
        return 0
    return rat_rank(diffs)


def _hyperplane(points):
    """Primitive integer (normal, offset) through the given points.

    Returns None unless the points affinely span exactly a hyperplane.
    """
    base = points[0]
    diffs = [[x - b for x, b in zip(p, base)] for p in points[1:]]
    n = len(base)
    if diffs and rat_rank(diffs) != n - 1:
        return None
    if not diffs and n != 1:
        return None
    kern = rat_kernel(diffs) if diffs else [(Fraction(1),)]
    if len(kern) != 1:
        return None
    normal = primitive_vector(kern[0])
    offset = -sum(a * x for a, x in zip(normal, base))
    return normal, offset


def convex_hull(points) -> RationalPolytope:
    """Exact convex hull by supporting-hyperplane enumeration.

    Brute force over n-subsets of the input; fine at desk scale (n <= 4,
    a few dozen points).
    """
    pts = []
    for p in _as_points(points):
        if p not in pts:
            pts.append(p)
    n = len(pts[0])
    if affine_dim(pts) != n:
        raise DegenerateInput("points do not span the ambient space")

    halfspaces: dict[tuple, tuple] = {}
    for subset in itertools.combinations(range(len(pts)), n):
        hp = _hyperplane([pts[i] for i in subset])
        if hp is None:
            continue
        normal, offset = hp
        vals = [sum(a * x for a, x in zip(normal, p)) + offset for p in pts]
        if all(v >= 0 for v in vals):
            halfspaces[normal, offset] = tuple(vals)
        elif all(v <= 0 for v in vals):
            neg = tuple(-a for a in normal)
            halfspaces[neg, -offset] = tuple(-v for v in vals)

    assert halfspaces, "full-dimensional input must have supporting facets"

    # vertices: points whose tight facet normals span the whole space
    vertex_list = []
    for idx, p in enumerate(pts):
        tight = [hs[0] for hs, vals in halfspaces.items() if vals[idx] == 0]
        if tight and rat_rank(tight) == n:
            vertex_list.append(p)
    vertex_list.sort()
    vertices = tuple(vertex_list)

    facets = []
    for (normal, offset), vals in sorted(halfspaces.items()):
        vertex_ids = tuple(i for i, v in enumerate(vertices)
                           if sum(a * x for a, x in zip(normal, v)) + offset == 0)
        assert affine_dim([vertices[i] for i in vertex_ids]) == n - 1
        facets.append(Facet(normal, offset, vertex_ids))

    return RationalPolytope(n, vertices, tuple(facets))


def _build_face_lattice(P: RationalPolytope) -> dict[int, tuple[Face, ...]]:
    n = P.dimension

    def facet_ids_of(vertex_ids: tuple[int, ...]) -> tuple[int, ...]:
        vs = set(vertex_ids)
        return tuple(i for i, f in enumerate(P.facets)
                     if vs.issubset(f.vertex_ids))

    lattice: dict[int, tuple[Face, ...]] = {
        n: (Face(n, tuple(range(len(P.vertices))), ()),)
    }
    current = {f.vertex_ids for f in P.facets}
    for d in range(n - 1, -1, -1):
        faces = tuple(Face(d, vids, facet_ids_of(vids))
                      for vids in sorted(current))
        for face in faces:
            assert affine_dim([P.vertices[i] for i in face.vertex_ids]) == d
        lattice[d] = faces
        if d == 0:
            break
        nxt = set()
        for vids in current:
            vset = set(vids)
            for f in P.facets:
                inter = tuple(sorted(vset & set(f.vertex_ids)))
                if not inter or inter == vids:
                    continue
                if affine_dim([P.vertices[i] for i in inter]) == d - 1:
                    nxt.add(inter)
        current = nxt
    assert {f.vertex_ids for f in lattice[0]} == {
        (i,) for i in range(len(P.vertices))}
    return lattice


def faces(P: RationalPolytope, d: int) -> tuple[Face, ...]:
    """All d-dimensional faces, 0 <= d <= n (d = n is the polytope itself)."""
    assert 0 <= d <= P.dimension
    return P.face_lattice()[d]


def order(P: RationalPolytope) -> int:
    """Least m >= 1 with all vertices in (1/m)Z^n."""
    return math.lcm(*[x.denominator for v in P.vertices for x in v])


def translate(P: RationalPolytope, shift) -> RationalPolytope:
    sh = tuple(Fraction(x) for x in shift)
    return convex_hull([tuple(x + s for x, s in zip(v, sh))
                        for v in P.vertices])


def _coordinate_box(P: RationalPolytope, t: int):
    lo, hi = [], []
    for i in range(P.dimension):
        vals = [t * v[i] for v in P.vertices]
        lo.append(math.ceil(min(vals)))
        hi.append(math.floor(max(vals)))
    return lo, hi


def count_points(P: RationalPolytope, t: int, interior: bool = False) -> int:
    """Number of points of (1/t)Z^n in P, equivalently Z^n points of t*P.

    Row scan: the first n-1 coordinates run over the integer bounding box,
    the last coordinate range is solved from the facet inequalities.
    """
    assert t >= 1 and t == int(t)
    n = P.dimension
    scaled = [(f.normal, t * f.offset) for f in P.facets]
    lo, hi = _coordinate_box(P, t)

    def last_coord_count(prefix):
        lo_b, hi_b = None, None
        for normal, offset in scaled:
            partial = sum(a * x for a, x in zip(normal, prefix)) + offset
            an = normal[-1]
            if an == 0:
                if partial < 0 or (interior and partial == 0):
                    return 0
                continue
            bound = Fraction(-partial, an)
            if an > 0:
                b = math.floor(bound) + 1 if interior else math.ceil(bound)
                lo_b = b if lo_b is None else max(lo_b, b)
            else:
                b = math.ceil(bound) - 1 if interior else math.floor(bound)
                hi_b = b if hi_b is None else min(hi_b, b)
        assert lo_b is not None and hi_b is not None
        return max(0, hi_b - lo_b + 1)

    total = 0
    for prefix in itertools.product(*[range(lo[i], hi[i] + 1)
                                      for i in range(n - 1)]):
        total += last_coord_count(prefix)
    return total


def count_points_naive(P: RationalPolytope, t: int,
                       interior: bool = False) -> int:
    """Bounding-box scan testing every facet; oracle for count_points."""
    assert t >= 1
    n = P.dimension
    scaled = [(f.normal, t * f.offset) for f in P.facets]
    lo, hi = _coordinate_box(P, t)
    total = 0
    for pt in itertools.product(*[range(lo[i], hi[i] + 1) for i in range(n)]):
        ok = True
        for normal, offset in scaled:
            val = sum(a * x for a, x in zip(normal, pt)) + offset
            if val < 0 or (interior and val == 0):
                ok = False
                break
        if ok:
            total += 1
    return total


def enumerate_lattice_points(P: RationalPolytope, t: int,
                             interior: bool = False):
    """Sorted list of lattice points of tP (strict facet test if interior)."""
    assert t >= 1
    n = P.dimension
    scaled = [(f.normal, t * f.offset) for f in P.facets]
    lo, hi = _coordinate_box(P, t)
    found = []
    for pt in itertools.product(*[range(lo[i], hi[i] + 1) for i in range(n)]):
        ok = True
        for normal, offset in scaled:
            val = sum(a * x for a, x in zip(normal, pt)) + offset
            if val < 0 or (interior and val == 0):
                ok = False
                break
        if ok:
            found.append(pt)
    return sorted(found)


def _frac_det(rows) -> Fraction:
    A = [[Fraction(x) for x in row] for row in rows]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [v - f * w for v, w in zip(A[i], A[c])]
    return det


def simplex_normalized_volume(points) -> Fraction:
    """n! times the volume of the simplex on n+1 affinely independent points."""
    base = points[0]
    rows = [[x - b for x, b in zip(p, base)] for p in points[1:]]
    return abs(_frac_det(rows))


def triangulate_ids(P: RationalPolytope, pull_last: bool = False):
    """Pulling triangulation of P into vertex-id simplices.

    Every face is pulled from its lexicographically least vertex (greatest
    when pull_last, which yields a genuinely different triangulation for
    non-simplex polytopes).
    """
    lattice = P.face_lattice()

    def key(i):
        return P.vertices[i]

    def tri(face: Face):
        if len(face.vertex_ids) == face.dim + 1:
            return [face.vertex_ids]
        anchor = (max if pull_last else min)(face.vertex_ids, key=key)
        out = []
        for sub in lattice[face.dim - 1]:
            if anchor in sub.vertex_ids:
                continue
            if not set(sub.vertex_ids) <= set(face.vertex_ids):
                continue
            for s in tri(sub):
                out.append(tuple(sorted(s + (anchor,))))
        return out

    top = lattice[P.dimension][0]
    simplices = tri(top)
    assert all(len(s) == P.dimension + 1 for s in simplices)
    return simplices


def normalized_volume(P: RationalPolytope, pull_last: bool = False) -> Fraction:
    """n! times the Euclidean volume, by summing simplex determinants."""
    total = Fraction(0)
    for s in triangulate_ids(P, pull_last=pull_last):
        total += simplex_normalized_volume([P.vertices[i] for i in s])
    return total


def dual_polytope(P: RationalPolytope) -> RationalPolytope:
    """Polar dual {y : <x, y> >= -1 for all x in P}; needs 0 in the interior."""
    if any(f.offset <= 0 for f in P.facets):
        raise OriginNotInterior("dual needs the origin strictly inside")
    duals = [tuple(Fraction(a) / f.offset for a in f.normal) for f in P.facets]
    return convex_hull(duals)


def enumerate_halfspace_vertices(normals, offsets):
    """Vertices of {x : <a_i, x> + c_i >= 0}; raises when unbounded.

    The normals may be any exact scalars; brute force over n-subsets.
    """
    rows = [tuple(Fraction(x) for x in a) for a in normals]
    offs = [Fraction(c) for c in offsets]
    n = len(rows[0])
    if rat_rank(rows) < n:
        raise UnboundedInput("normals do not span, polyhedron has a line")
    # a nonzero recession direction must be tight on n-1 independent normals
    for subset in itertools.combinations(range(len(rows)), n - 1):
        sub = [rows[i] for i in subset]
        if sub and rat_rank(sub) != n - 1:
            continue
        kern = rat_kernel(sub) if sub else rat_kernel([[Fraction(0)] * n])
        for k in kern:
            for cand in (k, tuple(-x for x in k)):
                if any(cand) and all(
                        sum(a * x for a, x in zip(row, cand)) >= 0
                        for row in rows):
                    raise UnboundedInput("recession direction %s" % (cand,))
    vertices = []
    for subset in itertools.combinations(range(len(rows)), n):
        sub = [rows[i] for i in subset]
        try:
            pt = rat_solve(sub, [-offs[i] for i in subset])
        except LinearlyDependent:
            continue
        if all(sum(a * x for a, x in zip(row, pt)) + c >= 0
               for row, c in zip(rows, offs)) and pt not in vertices:
            vertices.append(pt)
    return sorted(vertices)


@dataclass(frozen=True)
class LabelledPolytope:
    """Simple polytope with weighted inward normals <x, v_i> + b_i >= 0."""

    weighted_normals: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]
    labels: tuple[int, ...]
    primitive_normals: tuple[tuple[int, ...], ...]
    polytope: RationalPolytope
    # per polytope vertex, the sorted ids of its tight labelled halfspaces
    vertex_facets: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return self.polytope.dimension


def labelled_polytope(normals, offsets) -> LabelledPolytope:
    ns = tuple(tuple(int(x) for x in a) for a in normals)
    offs = tuple(int(c) for c in offsets)
    assert len(ns) == len(offs) and ns, "need matching normals and offsets"
    n = len(ns[0])
    verts = enumerate_halfspace_vertices(ns, offs)
    if not verts:
        raise DegenerateInput("halfspaces have empty intersection")
    P = convex_hull(verts)
    if P.dimension != n:
        raise DegenerateInput("labelled polytope is not full-dimensional")

    vertex_facets = []
    for v in P.vertices:
        tight = tuple(i for i, (a, c) in enumerate(zip(ns, offs))
                      if sum(x * y for x, y in zip(a, v)) + c == 0)
        if len(tight) != n:
            raise NotSimple("vertex %s lies on %d halfspaces, expected %d"
                            % (v, len(tight), n))
        vertex_facets.append(tight)
    touched = set(itertools.chain.from_iterable(vertex_facets))
    if touched != set(range(len(ns))):
        raise DegenerateInput("halfspace without a tight vertex (redundant)")

    labels = tuple(math.gcd(*a) for a in ns)
    assert all(l >= 1 for l in labels)
    prim = tuple(tuple(x // l for x in a) for a, l in zip(ns, labels))
    return LabelledPolytope(ns, offs, labels, prim, P, tuple(vertex_facets))
