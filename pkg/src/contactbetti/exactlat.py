"""Exact lattice linear algebra: normal forms, basis completion, jets.

Integer matrices are tuples of row tuples of Python ints; vectors are plain
tuples.  Everything in this package is exact, there is no floating point
anywhere.  First-order jets (value + slope*eps for an infinitesimal eps > 0)
carry symbolic perturbations through floor computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


class NotUnimodularSystem(ValueError):
    """Row system does not extend to a Z-basis of the ambient lattice."""

    def __init__(self, invariants: tuple[int, ...]):
        super().__init__(
            "system has Smith invariants %s, expected all 1" % (invariants,))
        self.invariants = tuple(invariants)


class LinearlyDependent(ValueError):
    """Vectors required to be linearly independent are not."""


class DegenerateJet(ArithmeticError):
    """Floor of a jet that sits exactly on an integer with zero slope."""


def intmat(rows) -> Mat:
    M = tuple(tuple(int(x) for x in row) for row in rows)
    if not M or len({len(r) for r in M}) != 1 or len(M[0]) == 0:
        raise ValueError("matrix must be rectangular and nonempty")
    return M


def identity(k: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def transpose(M) -> Mat:
    return tuple(zip(*[tuple(r) for r in M]))


def mat_mul(A, B) -> Mat:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                 for row in A)


def vec_mat(v, M):
    """Row vector times matrix.  Entries of v may be ints, Fractions or Jets."""
    cols = list(zip(*M))
    return tuple(sum(x * c for x, c in zip(v, col)) for col in cols)


def det_int(M) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    A = [list(r) for r in M]
    k = len(A)
    assert all(len(r) == k for r in A), "determinant needs a square matrix"
    sign, prev = 1, 1
    for p in range(k - 1):
        if A[p][p] == 0:
            for i in range(p + 1, k):
                if A[i][p]:
                    A[p], A[i] = A[i], A[p]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                A[i][j] = (A[i][j] * A[p][p] - A[i][p] * A[p][j]) // prev
            A[i][p] = 0
        prev = A[p][p]
    return sign * A[-1][-1]


def hermite_normal_form(M) -> tuple[Mat, Mat]:
    """Row-style Hermite normal form with transform.

    Returns (H, U) with U unimodular and U*M = H.  Pivots are positive,
    entries below a pivot are zero, entries above are reduced into
    [0, pivot), and zero rows sink to the bottom.
    """
    A = [list(r) for r in intmat(M)]
    nr, nc = len(A), len(A[0])
    U = [list(r) for r in identity(nr)]
    r = 0
    for c in range(nc):
        for i in range(r + 1, nr):
            # euclidean elimination in column c between rows r and i
            while A[i][c]:
                if A[r][c]:
                    q = A[r][c] // A[i][c]
                    for t in range(nc):
                        A[r][t] -= q * A[i][t]
                    for t in range(nr):
                        U[r][t] -= q * U[i][t]
                A[r], A[i] = A[i], A[r]
                U[r], U[i] = U[i], U[r]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                for t in range(nc):
                    A[i][t] -= q * A[r][t]
                for t in range(nr):
                    U[i][t] -= q * U[r][t]
        r += 1
        if r == nr:
            break
    H = tuple(tuple(row) for row in A)
    Ut = tuple(tuple(row) for row in U)
    assert mat_mul(Ut, intmat(M)) == H
    assert abs(det_int(Ut)) == 1
    return H, Ut


def smith_normal_form(M) -> tuple[Mat, Mat, Mat]:
    """Smith normal form with transforms: U*M*V = S.

    S is diagonal with non-negative entries forming a divisibility chain
    d1 | d2 | ...; U and V are unimodular.
    """
    A = [list(r) for r in intmat(M)]
    nr, nc = len(A), len(A[0])
    U = [list(r) for r in identity(nr)]
    V = [list(r) for r in identity(nc)]

    def row_sub(i, j, q):  # row i -= q * row j
        for t in range(nc):
            A[i][t] -= q * A[j][t]
        for t in range(nr):
            U[i][t] -= q * U[j][t]

    def col_sub(i, j, q):  # col i -= q * col j
        for t in range(nr):
            A[t][i] -= q * A[t][j]
        for t in range(nc):
            V[t][i] -= q * V[t][j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for t in range(nr):
            A[t][i], A[t][j] = A[t][j], A[t][i]
        for t in range(nc):
            V[t][i], V[t][j] = V[t][j], V[t][i]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if A[i][j] and (best is None
                                or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_sub(i, t, q)
                    if A[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_sub(j, t, q)
                    if A[t][j]:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                # enforce divisibility of the remaining block by the pivot
                found = False
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if A[i][j] % A[t][t]:
                            row_sub(t, i, -1)
                            dirty = found = True
                            break
                    if found:
                        break
        if A[t][t] < 0:
            for j in range(nc):
                A[t][j] = -A[t][j]
            for j in range(nr):
                U[t][j] = -U[t][j]
        t += 1

    S = tuple(tuple(row) for row in A)
    Ut = tuple(tuple(row) for row in U)
    Vt = tuple(tuple(row) for row in V)
    assert mat_mul(mat_mul(Ut, intmat(M)), Vt) == S
    assert abs(det_int(Ut)) == 1 and abs(det_int(Vt)) == 1
    diag = [S[i][i] for i in range(min(nr, nc))]
    for i in range(len(diag) - 1):
        assert diag[i + 1] == 0 or (diag[i] != 0 and diag[i + 1] % diag[i] == 0)
    assert all(S[i][j] == 0 for i in range(nr) for j in range(nc) if i != j)
    return S, Ut, Vt


def smith_invariants(M) -> tuple[int, ...]:
    """The nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    S, _, _ = smith_normal_form(M)
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    return tuple(d for d in diag if d != 0)


def lattice_index(vectors) -> int:
    """Index of the Z-span of the vectors inside its saturation.

    Equals the product of Smith invariants; |det| for square systems.
    """
    M = intmat(vectors)
    inv = smith_invariants(M)
    if len(inv) < len(M):
        raise LinearlyDependent("vectors are linearly dependent")
    return math.prod(inv)


def basis_completion(vectors) -> Mat:
    """Rows extending the given independent rows to a Z-basis of Z^d.

    The stacked matrix [vectors; completion] has determinant +-1.  The
    choice is the canonical one read off the Hermite transform of the
    transposed system, so repeated calls agree.
    """
    M = intmat(vectors)
    k, d = len(M), len(M[0])
    if k > d:
        raise LinearlyDependent("more vectors than ambient dimension")
    inv = smith_invariants(M)
    if len(inv) < k:
        raise LinearlyDependent("vectors are linearly dependent")
    if any(x != 1 for x in inv):
        raise NotUnimodularSystem(inv)
    _, W = hermite_normal_form(transpose(M))
    Winv = mat_inverse(W)
    completion = tuple(tuple(Winv[i][j] for i in range(d))
                       for j in range(k, d))
    assert abs(det_int(M + completion)) == 1
    return completion


def complete_to_basis(vectors) -> Vec:
    """The single vector completing d-1 rows of Z^d to a Z-basis."""
    completion = basis_completion(vectors)
    assert len(completion) == 1, "need exactly one missing basis vector"
    return completion[0]


def solve_left(A, b):
    """All integer solutions x of x*A = b.

    Returns (particular, kernel_basis_rows) or None when no integral
    solution exists.  A has one row per unknown.
    """
    M = intmat(A)
    nr, nc = len(M), len(M[0])
    target = tuple(int(x) for x in b)
    assert len(target) == nc
    H, U = hermite_normal_form(M)
    residual = list(target)
    y = [0] * nr
    for i in range(nr):
        pivot_col = next((c for c in range(nc) if H[i][c]), None)
        if pivot_col is None:
            continue
        if residual[pivot_col] % H[i][pivot_col]:
            return None
        y[i] = residual[pivot_col] // H[i][pivot_col]
        for c in range(nc):
            residual[c] -= y[i] * H[i][c]
    if any(residual):
        return None
    particular = vec_mat(tuple(y), U)
    kernel = tuple(U[i] for i in range(nr) if not any(H[i]))
    return particular, kernel


# ----------------------------------------------------------------------
# rational (Fraction) helpers


def rat_rank(rows) -> int:
    """Rank of a matrix with Fraction/int entries."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return 0
    nr, nc = len(A), len(A[0])
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = 1 / A[rank][c]
        A[rank] = [v * inv for v in A[rank]]
        for i in range(nr):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [v - f * w for v, w in zip(A[i], A[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def rat_solve(A, b):
    """Solve the square system A*x = b over Fractions; raises if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bv)]
         for row, bv in zip(A, b)]
    assert all(len(row) == n + 1 for row in M)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise LinearlyDependent("singular system")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [v - f * w for v, w in zip(M[i], M[c])]
    return tuple(M[i][n] for i in range(n))


def rat_kernel(A):
    """Basis of the right kernel {x : A*x = 0} over Fractions."""
    rows = [[Fraction(x) for x in row] for row in A]
    nc = len(rows[0]) if rows else 0
    reduced = []
    pivots = []
    for row in rows:
        r = row[:]
        for prow, pc in zip(reduced, pivots):
            if r[pc]:
                f = r[pc]
                r = [v - f * w for v, w in zip(r, prow)]
        pc = next((c for c in range(nc) if r[c]), None)
        if pc is None:
            continue
        inv = 1 / r[pc]
        r = [v * inv for v in r]
        for i, prow in enumerate(reduced):
            if prow[pc]:
                f = prow[pc]
                reduced[i] = [v - f * w for v, w in zip(prow, r)]
        reduced.append(r)
        pivots.append(pc)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * nc
        vec[fc] = Fraction(1)
        for prow, pc in zip(reduced, pivots):
            vec[pc] = -prow[fc]
        basis.append(tuple(vec))
    return basis


def mat_inverse(M) -> Mat:
    """Inverse of a unimodular integer matrix (integral again)."""
    n = len(M)
    A = [[Fraction(x) for x in row] +
         [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    assert all(len(row) == 2 * n for row in A)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise LinearlyDependent("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [v - f * w for v, w in zip(A[i], A[c])]
    out = []
    for i in range(n):
        row = A[i][n:]
        if any(v.denominator != 1 for v in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(v) for v in row))
    return tuple(out)


def primitive_vector(v) -> Vec:
    """Scale a nonzero rational vector to its primitive integer multiple."""
    fracs = [Fraction(x) for x in v]
    if not any(fracs):
        raise ValueError("zero vector has no primitive multiple")
    scale = math.lcm(*[f.denominator for f in fracs])
    ints = [int(f * scale) for f in fracs]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


# ----------------------------------------------------------------------
# first-order jets


@dataclass(frozen=True, eq=False)
class Jet:
    """value + slope*eps with eps an infinitesimal positive quantity.

    Products drop the eps^2 term; comparisons are lexicographic in
    (value, slope), matching the eps -> 0+ limit.
    """

    value: Fraction
    slope: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "slope", Fraction(self.slope))

    @staticmethod
    def _coerce(x):
        if isinstance(x, Jet):
            return x
        if isinstance(x, (int, Fraction)):
            return Jet(Fraction(x))
        return None

    def _key(self):
        return (self.value, self.slope)

    def __repr__(self):
        return f"Jet({self.value!s}, {self.slope!s})"

    def __eq__(self, other):
        o = Jet._coerce(other)
        return NotImplemented if o is None else self._key() == o._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        o = Jet._coerce(other)
        return NotImplemented if o is None else self._key() < o._key()

    def __le__(self, other):
        o = Jet._coerce(other)
        return NotImplemented if o is None else self._key() <= o._key()

    def __gt__(self, other):
        o = Jet._coerce(other)
        return NotImplemented if o is None else self._key() > o._key()

    def __ge__(self, other):
        o = Jet._coerce(other)
        return NotImplemented if o is None else self._key() >= o._key()

    def __neg__(self):
        return Jet(-self.value, -self.slope)

    def __add__(self, other):
        o = Jet._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.value + o.value, self.slope + o.slope)

    __radd__ = __add__

    def __sub__(self, other):
        o = Jet._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.value - o.value, self.slope - o.slope)

    def __rsub__(self, other):
        o = Jet._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(o.value - self.value, o.slope - self.slope)

    def __mul__(self, other):
        o = Jet._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.value * o.value,
                   self.value * o.slope + self.slope * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Jet._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError("division by a jet with zero value part")
        return Jet(self.value / o.value,
                   (self.slope * o.value - self.value * o.slope)
                   / (o.value * o.value))

    def __rtruediv__(self, other):
        o = Jet._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def is_zero(self) -> bool:
        return self.value == 0 and self.slope == 0


def jet_floor(x: Jet) -> int:
    """Floor of a jet, resolving integer values by the sign of the slope."""
    v = x.value
    if v.denominator != 1:
        return math.floor(v)
    if x.slope > 0:
        return int(v)
    if x.slope < 0:
        return int(v) - 1
    raise DegenerateJet("floor of exact integer %s with zero slope" % v)
