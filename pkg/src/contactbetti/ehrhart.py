"""Lattice point counting in dilates: quasi-polynomials and delta vectors.

For a full-dimensional rational polytope P of order m in R^n, the counting
function L(t) = #(tP cap Z^n) agrees with a quasi-polynomial of period m
and degree n.  Its generating series has the closed form

    sum_t L(t) z^t = (sum_j delta_j z^j) / (1 - z^m)^(n+1)

with non-negative integer coefficients delta_j supported on
0 <= j <= m(n+1) - 1.  Everything downstream (contact Betti numbers,
orbifold Poincare series, discrepancy bounds) is read off this vector,
so this module computes it from exact counts and cross-checks every
derived identity it exposes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .polyarith import poly_eval, poly_mul, poly_scale
from .polytope import (
    RationalPolytope,
    convex_hull,
    count_points,
    dual_polytope,
    enumerate_lattice_points,
    normalized_volume,
    order,
    translate,
)


def general_binomial(a: int, k: int) -> int:
    """Binomial coefficient C(a, k) for any integer a and k >= 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if a >= 0:
        return math.comb(a, k)
    return (-1) ** k * math.comb(k - 1 - a, k)


@dataclass(frozen=True)
class DeltaVector:
    """Numerator coefficients of the lattice point generating series.

    ``entries[j]`` is the coefficient of z^j; indices outside
    [0, m(n+1)-1] are implicitly zero (see ``__getitem__``).
    """

    entries: Tuple[int, ...]
    order: int
    dimension: int

    def __post_init__(self) -> None:
        m, n = self.order, self.dimension
        if len(self.entries) != m * (n + 1):
            raise ValueError("delta vector has wrong length")
        if self.entries[0] != 1:
            raise ValueError("delta_0 must be 1")
        if any(d < 0 for d in self.entries):
            raise ValueError("delta entries must be non-negative")

    def __getitem__(self, j: int) -> int:
        if 0 <= j < len(self.entries):
            return self.entries[j]
        return 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def top_index(self) -> int:
        """Largest j with a nonzero entry."""
        return max(j for j, d in enumerate(self.entries) if d)

    def is_palindromic(self) -> bool:
        """Entry symmetry delta_j == delta_(n-j); only sensible for order 1."""
        n = self.dimension
        return all(self[j] == self[n - j] for j in range(len(self.entries)))


@dataclass(frozen=True)
class QuasiPolynomial:
    """Counting quasi-polynomial: one degree-n branch per residue class.

    ``branches[r]`` holds monomial coefficients (c_0 .. c_n) of the
    polynomial giving L(t) for t == r (mod period).  All branches share
    the leading coefficient vol(P).
    """

    period: int
    dimension: int
    branches: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.branches) != self.period:
            raise ValueError("need one branch per residue class")
        lead = {b[self.dimension] for b in self.branches}
        if len(lead) != 1:
            raise ValueError("branch leading coefficients must agree")

    @property
    def leading_coefficient(self) -> Fraction:
        return self.branches[0][self.dimension]

    def evaluate(self, t: int) -> int:
        val = poly_eval(self.branches[t % self.period], Fraction(t))
        if val.denominator != 1:
            raise ValueError(f"non-integral count at t={t}")
        return val.numerator

    def evaluate_interior(self, t: int) -> int:
        """Interior count via reciprocity: L_int(t) = (-1)^n L(-t)."""
        if t < 1:
            raise ValueError("interior counts need t >= 1")
        return (-1) ** self.dimension * self.evaluate(-t)


def delta_vector(P: RationalPolytope) -> DeltaVector:
    """Numerator of the counting series, from exact counts.

    delta_j = sum_i (-1)^i C(n+1, i) L(j - i*m) for 0 <= j < m(n+1),
    i.e. the convolution of the count sequence with (1 - z^m)^(n+1).
    """
    n = P.dimension
    m = order(P)
    top = m * (n + 1)
    counts = [1] + [count_points(P, t) for t in range(1, top)]
    entries = []
    for j in range(top):
        acc = 0
        for i in range(j // m + 1):
            acc += (-1) ** i * math.comb(n + 1, i) * counts[j - i * m]
        entries.append(acc)
    dv = DeltaVector(tuple(entries), m, n)
    # mass check: sum delta_j = m * (normalized volume of mP)
    assert sum(entries) == m ** (n + 1) * normalized_volume(P)
    return dv


def _branch_polynomial(dv: DeltaVector, residue: int) -> Tuple[Fraction, ...]:
    m, n = dv.order, dv.dimension
    scale = Fraction(1, m ** n * math.factorial(n))
    total = [Fraction(0)] * (n + 1)
    for j in range(residue % m, m * (n + 1), m):
        if dv[j] == 0:
            continue
        # C((t-j)/m + n, n) = prod_{i=1..n} (t - j + i*m) / (m^n n!)
        poly: Sequence[Fraction] = (Fraction(1),)
        for i in range(1, n + 1):
            poly = poly_mul(poly, (Fraction(i * m - j), Fraction(1)))
        poly = poly_scale(poly, scale * dv[j])
        for k, c in enumerate(poly):
            total[k] += c
    return tuple(total)


def quasipolynomial(P: RationalPolytope) -> QuasiPolynomial:
    """Branch polynomials recovered from the delta vector.

    Validated against raw counts for t = 1 .. 3m(n+1) before returning.
    """
    dv = delta_vector(P)
    m, n = dv.order, dv.dimension
    qp = QuasiPolynomial(m, n, tuple(_branch_polynomial(dv, r)
                                     for r in range(m)))
    assert qp.evaluate(0) == 1
    for t in range(1, 3 * m * (n + 1) + 1):
        assert qp.evaluate(t) == count_points(P, t), f"count mismatch at t={t}"
    return qp


def interior_series_coeffs(P: RationalPolytope) -> Tuple[int, ...]:
    """Coefficient list (delta_{mn-j})_j of the interior counting series.

    Index j runs over 0 .. m(n+1)-1 with out-of-range delta read as zero.
    The full reciprocity identity

        L_int(t+m) = sum_{j == t mod m, -m < j <= mn}
                     delta_{mn-j} C((t-j)/m + n, n)

    also needs the terms with j < 0 (they carry the delta entries above
    index mn); the returned truncation is the conventional numerator, and
    validation below always uses the untruncated sum.
    """
    dv = delta_vector(P)
    m, n = dv.order, dv.dimension
    coeffs = tuple(dv[m * n - j] for j in range(m * (n + 1)))

    for t in range(0, 3 * m + 1):
        acc = 0
        j = -m + 1 + ((t - (-m + 1)) % m)  # smallest j > -m with j == t (m)
        while j <= m * n:
            acc += dv[m * n - j] * general_binomial((t - j) // m + n, n)
            j += m
        assert acc == count_points(P, t + m, interior=True), \
            f"interior count mismatch at t={t + m}"
    return coeffs


@dataclass(frozen=True)
class ReflexivityReport:
    reflexive: bool
    palindromic: Optional[bool] = None
    dual_integral: Optional[bool] = None
    reason: Optional[str] = None
    interior_point: Optional[Tuple[Fraction, ...]] = None


def is_reflexive(P: RationalPolytope) -> ReflexivityReport:
    """Check reflexivity of an integral polytope by two independent routes.

    Route one: the delta vector is palindromic.  Route two: after
    translating the unique interior lattice point to the origin, the polar
    dual is again integral.  The two answers must agree; a rational
    (non-integral) polytope reports NotIntegral without further checks.
    """
    if order(P) != 1:
        return ReflexivityReport(False, reason="NotIntegral")
    dv = delta_vector(P)
    palindromic = dv.is_palindromic()

    interior = enumerate_lattice_points(P, 1, interior=True)
    if len(interior) != 1:
        dual_integral = False
        centre = None
    else:
        centre = interior[0]
        shifted = translate(P, tuple(-c for c in centre))
        dual = dual_polytope(shifted)
        dual_integral = all(c.denominator == 1 for v in dual.vertices
                            for c in v)
    assert palindromic == dual_integral, "reflexivity criteria disagree"
    return ReflexivityReport(palindromic, palindromic, dual_integral,
                             None, centre)
