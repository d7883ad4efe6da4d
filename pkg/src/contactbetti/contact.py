"""Toric diagrams, Reeb orbit gradings, and contact Betti numbers.

A toric diagram is a full-dimensional rational simplicial polytope D in
R^n whose facet vertex systems are unimodular after lifting each vertex
v to the integer normal (m*v, m), m the order of D.  A choice of
interior point and perturbation direction determines a Reeb vector whose
closed orbits come in one family per facet; their Conley-Zehnder indices
are computed exactly with first-order jets.

Two independent pipelines produce the graded dimension table cb:
``contact_betti_direct`` enumerates orbit degrees facet by facet, and
``contact_betti_from_delta`` reads the same table off the delta vector
of D.  Their agreement on every input is the central cross-check of the
package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .ehrhart import DeltaVector, delta_vector
from .exactlat import (
    DegenerateJet,
    Jet,
    basis_completion,
    jet_floor,
    mat_inverse,
    smith_invariants,
    vec_mat,
)
from .grading import GradedDimensions, default_window
from .polytope import RationalPolytope, count_points, normalized_volume, order


class NotSimplicial(ValueError):
    """A facet has more vertices than the dimension allows."""


class FacetNotUnimodular(ValueError):
    def __init__(self, facet_id: int, invariants):
        self.facet_id = facet_id
        self.invariants = tuple(invariants)
        super().__init__(
            f"facet {facet_id} has normal system with Smith invariants "
            f"{self.invariants}")


class GenericityFailure(ValueError):
    """A perturbed quantity landed exactly on an integer with no slope."""

    def __init__(self, N: int, j: Optional[int] = None):
        self.N = N
        self.j = j
        where = f" in coefficient {j}" if j is not None else ""
        super().__init__(f"degenerate jet at iterate N={N}{where}")


class NotInterior(ValueError):
    """Reeb base point is not (jet-)interior to the diagram."""


@dataclass(frozen=True)
class ToricDiagram:
    polytope: RationalPolytope
    order: int
    normals: Tuple[Tuple[int, ...], ...]        # (m*v, m) per vertex
    facet_vertex_ids: Tuple[Tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return self.polytope.dimension

    def facet_normals(self, facet_id: int) -> Tuple[Tuple[int, ...], ...]:
        return tuple(self.normals[i] for i in self.facet_vertex_ids[facet_id])


def validate_diagram(P: RationalPolytope) -> ToricDiagram:
    """Check simpliciality and per-facet unimodularity of the lifted normals.

    Each facet must have exactly n vertices, and the n lifted normals of
    any facet must extend to a basis of Z^(n+1) (all Smith invariants 1);
    this also forces every individual normal to be primitive.
    """
    n = P.dimension
    m = order(P)
    normals = tuple(tuple(int(m * c) for c in v) + (m,) for v in P.vertices)
    facet_ids = []
    for fid, facet in enumerate(P.facets):
        if len(facet.vertex_ids) != n:
            raise NotSimplicial(
                f"facet {fid} has {len(facet.vertex_ids)} vertices")
        facet_ids.append(tuple(facet.vertex_ids))
    for fid, ids in enumerate(facet_ids):
        inv = smith_invariants([list(normals[i]) for i in ids])
        if any(d != 1 for d in inv):
            raise FacetNotUnimodular(fid, inv)
    return ToricDiagram(P, m, normals, tuple(facet_ids))


def c1_order(normals: Sequence[Sequence[int]]) -> Optional[int]:
    """Least m >= 1 with an integral functional taking value m on every normal.

    Returns None when no multiple of the all-ones vector is hit by an
    integer functional (the non-torsion case).
    """
    from .exactlat import smith_normal_form
    A = [list(map(int, row)) for row in normals]
    S, U, V = smith_normal_form(A)
    rows, cols = len(A), len(A[0])
    # we need x with A x = m * 1; in Smith coordinates S y = m * (U 1)
    u1 = [sum(U[i][j] for j in range(rows)) for i in range(rows)]
    r = sum(1 for i in range(min(rows, cols)) if S[i][i] != 0)
    if any(u1[i] != 0 for i in range(r, rows)):
        return None
    mult = 1
    for i in range(r):
        d = S[i][i]
        g = math.gcd(d, u1[i])
        mult = mult * (d // g) // math.gcd(mult, d // g)
    return mult


@dataclass(frozen=True)
class ReebVector:
    """Interior base point plus perturbation direction.

    Represents the lifted vector (m(v + eps*d), m) with eps an
    infinitesimal; coordinates become first-order jets downstream.
    """

    base: Tuple[Fraction, ...]
    direction: Tuple[Fraction, ...]

    @staticmethod
    def default_for(D: ToricDiagram,
                    perturb: Fraction = Fraction(1, 101)) -> "ReebVector":
        verts = D.polytope.vertices
        k = len(verts)
        base = tuple(sum(v[i] for v in verts) / k
                     for i in range(D.dimension))
        direction = tuple(perturb ** i for i in range(D.dimension))
        return ReebVector(base, direction)

    def lifted_jets(self, m: int) -> Tuple[Jet, ...]:
        coords = tuple(Jet(m * self.base[i], m * self.direction[i])
                       for i in range(len(self.base)))
        return coords + (Jet(m, 0),)


def _check_interior(D: ToricDiagram, reeb: ReebVector) -> None:
    # jet-interior: equality on a facet is allowed when the direction
    # moves strictly inward there
    for f in D.polytope.facets:
        val = sum(a * x for a, x in zip(f.normal, reeb.base)) + f.offset
        if val < 0:
            raise NotInterior(f"base point violates facet {f.normal}")
        if val == 0:
            drift = sum(a * x for a, x in zip(f.normal, reeb.direction))
            if drift <= 0:
                raise NotInterior(
                    f"base point sits on facet {f.normal} and the "
                    f"perturbation does not move inward")


@dataclass(frozen=True)
class OrbitFamily:
    """One closed-orbit family: facet data plus exact jet coefficients.

    The decomposition reads  nu = sum_j b_coeffs[j] * nu_j  +  b * eta
    over the facet's lifted normals nu_j, with b > 0 as a jet.
    """

    facet_id: int
    order: int
    eta: Tuple[int, ...]
    k: int
    b_coeffs: Tuple[Jet, ...]
    b: Jet

    @property
    def diverges(self) -> bool:
        """Base point on this facet: degrees grow without bound."""
        return self.b.value == 0


def orbit_data(D: ToricDiagram, facet_id: int, reeb: ReebVector,
               eta: Optional[Sequence[int]] = None) -> OrbitFamily:
    """Solve for the orbit family coefficients on one facet.

    ``eta`` may be supplied explicitly (any completion of the facet
    normals to a lattice basis); by default the canonical completion is
    used.  The sign of eta is flipped if needed so that b > 0.
    """
    _check_interior(D, reeb)
    m, n = D.order, D.dimension
    facet_normals = [list(v) for v in D.facet_normals(facet_id)]
    if eta is None:
        eta = basis_completion(facet_normals)[0]
    eta = tuple(int(c) for c in eta)

    nu = reeb.lifted_jets(m)
    B = facet_normals + [list(eta)]
    coeffs = vec_mat(nu, mat_inverse(B))
    b_coeffs = tuple(c if isinstance(c, Jet) else Jet(c, 0)
                     for c in coeffs[:n])
    b = coeffs[n] if isinstance(coeffs[n], Jet) else Jet(coeffs[n], 0)
    k = eta[-1]
    if b.is_zero():
        raise GenericityFailure(0, facet_id)
    if b < Jet(0, 0):
        eta = tuple(-c for c in eta)
        k, b = -k, -b

    # defining identities, checked as exact jets
    recon = [sum((bj * fn[i] for bj, fn in zip(b_coeffs, facet_normals)),
                 start=b * eta[i]) for i in range(n + 1)]
    assert all(r == nu_i for r, nu_i in zip(recon, nu))
    assert sum(b_coeffs, start=b * Fraction(k, m)) == 1
    return OrbitFamily(facet_id, m, eta, k, b_coeffs, b)


def cz_index(family: OrbitFamily, N: int) -> Fraction:
    """Conley-Zehnder index of the N-th iterate, an exact rational."""
    if N < 1:
        raise ValueError("iterate N must be >= 1")
    if family.diverges:
        raise ValueError("index diverges: base point lies on this facet")
    n = len(family.b_coeffs)
    total = Fraction(0)
    for j, bj in enumerate(family.b_coeffs):
        if bj.is_zero():
            continue  # structural zero: no floor contribution
        try:
            total += jet_floor(N * bj / family.b)
        except DegenerateJet:
            raise GenericityFailure(N, j) from None
    total += Fraction(N * family.k, family.order)
    return 2 * total + n


def orbit_degree(family: OrbitFamily, N: int) -> Fraction:
    n = len(family.b_coeffs)
    return cz_index(family, N) + n - 2


def _iterate_bound(family: OrbitFamily, d_max: Fraction) -> int:
    # deg(gamma^N) > 2 (N / b_value - 1), so iterates beyond this bound
    # exceed d_max; +1 margin keeps the boundary case inside
    return math.ceil(family.b.value * (d_max / 2 + 1)) + 1


def contact_betti_direct(D: ToricDiagram, reeb: Optional[ReebVector] = None,
                         window: Optional[Tuple[Fraction, Fraction]] = None,
                         ) -> GradedDimensions:
    """Histogram of orbit degrees over all facets and iterates.

    Facets containing the base point itself are skipped: their families'
    degrees exceed any finite window.  The per-facet iterate bound makes
    the returned window complete.
    """
    if reeb is None:
        reeb = ReebVector.default_for(D)
    if window is None:
        window = default_window(D.order, D.dimension)
    d_min, d_max = Fraction(window[0]), Fraction(window[1])
    if d_min <= -2:
        raise ValueError("window must start above degree -2")
    items = []
    for fid in range(len(D.facet_vertex_ids)):
        family = orbit_data(D, fid, reeb)
        if family.diverges:
            continue
        for N in range(1, _iterate_bound(family, d_max) + 1):
            deg = orbit_degree(family, N)
            assert deg * D.order % 2 == 0, "degree outside (2/m)Z"
            if d_min <= deg <= d_max:
                items.append((deg, 1))
    return GradedDimensions.from_items(items, (d_min, d_max))


def contact_betti_from_delta(D: ToricDiagram,
                             window: Optional[Tuple[Fraction, Fraction]]
                             = None) -> GradedDimensions:
    """The same table computed from the delta vector:

        cb_{2j} = sum_{i >= 0} delta_{m(n-j) + m i}.
    """
    if window is None:
        window = default_window(D.order, D.dimension)
    d_min, d_max = Fraction(window[0]), Fraction(window[1])
    if d_min <= -2:
        raise ValueError("window must start above degree -2")
    dv = delta_vector(D.polytope)
    m, n = D.order, D.dimension
    items = []
    for mj in range(math.ceil(m * d_min / 2), math.floor(m * d_max / 2) + 1):
        j = Fraction(mj, m)
        start = m * n - mj
        total = sum(dv[idx] for idx in range(start, m * (n + 1), m))
        items.append((2 * j, total))
    return GradedDimensions.from_items(items, (d_min, d_max))


def mean_euler_characteristic(D: ToricDiagram) -> Fraction:
    """Average of the graded dimensions: m^(n+1) vol-normalized mass / 2."""
    m, n = D.order, D.dimension
    chi = Fraction(m ** (n + 1) * normalized_volume(D.polytope), 2)
    assert chi == Fraction(sum(delta_vector(D.polytope).entries), 2)
    return chi


def minimal_discrepancy(D: ToricDiagram) -> Fraction:
    """Smallest r with an integral point in (r+1) int(mD), r in (1/m)Z.

    Found by scanning dilates s*D for the first interior lattice point
    (r = s/m - 1) and cross-checked against two delta-vector identities:
    r = n - top/m for the top nonzero delta index, and 2r = first degree
    with a nonzero graded dimension.
    """
    m, n = D.order, D.dimension
    dv = delta_vector(D.polytope)
    r = None
    for s in range(1, m * (n + 1) + 1):
        if count_points(D.polytope, s, interior=True) > 0:
            r = Fraction(s, m) - 1
            break
    assert r is not None, "no interior point up to dilate m(n+1)"
    assert r == n - Fraction(dv.top_index, m)
    cb = contact_betti_from_delta(D)
    assert 2 * r == min(cb.degrees())
    return r
