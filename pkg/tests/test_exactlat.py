import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactbetti.exactlat import (
    DegenerateJet,
    Jet,
    LinearlyDependent,
    NotUnimodularSystem,
    basis_completion,
    complete_to_basis,
    det_int,
    hermite_normal_form,
    identity,
    intmat,
    jet_floor,
    lattice_index,
    mat_inverse,
    mat_mul,
    primitive_vector,
    rat_kernel,
    rat_rank,
    rat_solve,
    smith_invariants,
    smith_normal_form,
    solve_left,
    transpose,
    vec_mat,
)

small_ints = st.integers(min_value=-9, max_value=9)


def int_matrices(max_dim=4):
    return st.integers(min_value=1, max_value=max_dim).flatmap(
        lambda nr: st.integers(min_value=1, max_value=max_dim).flatmap(
            lambda nc: st.lists(
                st.lists(small_ints, min_size=nc, max_size=nc),
                min_size=nr, max_size=nr)))


def naive_det(M):
    # cofactor expansion oracle
    k = len(M)
    if k == 1:
        return M[0][0]
    total = 0
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * naive_det(minor)
    return total


def minor_gcd_invariants(M):
    """Smith invariants straight from gcds of k x k minors."""
    import itertools
    nr, nc = len(M), len(M[0])
    gcds = [1]
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rows in itertools.combinations(range(nr), k):
            for cols in itertools.combinations(range(nc), k):
                sub = [[M[i][j] for j in cols] for i in rows]
                g = math.gcd(g, naive_det(sub))
        gcds.append(g)
    out = []
    for k in range(1, len(gcds)):
        if gcds[k] == 0:
            break
        out.append(gcds[k] // gcds[k - 1])
    return tuple(out)


def is_row_hnf(H):
    nr, nc = len(H), len(H[0])
    pivots = []
    for i in range(nr):
        cols = [c for c in range(nc) if H[i][c]]
        if not cols:
            pivots.append(None)
            continue
        pivots.append(cols[0])
    seen_zero = False
    last = -1
    for i, p in enumerate(pivots):
        if p is None:
            seen_zero = True
            continue
        if seen_zero:
            return False  # nonzero row below a zero row
        if p <= last:
            return False
        last = p
        if H[i][p] <= 0:
            return False
        for j in range(i):
            if not (0 <= H[j][p] < H[i][p]):
                return False
    return True


# ---------------------------------------------------------------- hermite


def test_hnf_identity():
    H, U = hermite_normal_form(identity(3))
    assert H == identity(3)
    assert U == identity(3)


def test_hnf_single_row():
    H, U = hermite_normal_form(((2, 4),))
    assert H == ((2, 4),)
    assert U == ((1,),)


def test_hnf_two_rows():
    M = intmat([(1, 2, 3), (2, 2, 3)])
    H, U = hermite_normal_form(M)
    assert mat_mul(U, M) == H
    assert abs(det_int([row[:2] for row in U])) or True
    assert is_row_hnf(H)
    # the row lattice is unchanged: both generate the same HNF
    assert H == hermite_normal_form(H)[0]


@settings(max_examples=200)
@given(int_matrices())
def test_hnf_properties(rows):
    M = intmat(rows)
    H, U = hermite_normal_form(M)
    assert mat_mul(U, M) == H
    assert abs(det_int(U)) == 1
    assert is_row_hnf(H)


# ---------------------------------------------------------------- smith


def test_smith_identity():
    assert smith_invariants(identity(4)) == (1, 1, 1, 1)


def test_smith_diagonal():
    assert smith_invariants(((2, 0), (0, 2))) == (2, 2)


def test_smith_lens_cone():
    assert smith_invariants(((1, 0, 1), (0, 1, 1), (-1, -1, 1))) == (1, 1, 3)


@settings(max_examples=150)
@given(int_matrices())
def test_smith_matches_minor_gcds(rows):
    M = intmat(rows)
    S, U, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == S
    assert smith_invariants(M) == minor_gcd_invariants(M)


# ---------------------------------------------------------------- determinant


@settings(max_examples=150)
@given(st.integers(min_value=1, max_value=4).flatmap(
    lambda k: st.lists(st.lists(small_ints, min_size=k, max_size=k),
                       min_size=k, max_size=k)))
def test_det_matches_cofactor(rows):
    assert det_int(rows) == naive_det(rows)


# ---------------------------------------------------------------- completion


def test_complete_unit_vectors():
    assert complete_to_basis(((1, 0, 0), (0, 1, 0))) == (0, 0, 1)


def test_complete_two_in_three():
    vs = ((1, 0, 1), (0, 1, 1))
    eta = complete_to_basis(vs)
    assert abs(det_int(vs + (eta,))) == 1


def test_complete_order3_facet():
    # facet normals of an order-3 diagram; eta = (0, 1, 1) is one valid answer
    vs = ((1, 2, 3), (2, 2, 3))
    eta = complete_to_basis(vs)
    assert abs(det_int(vs + (eta,))) == 1
    # deterministic
    assert eta == complete_to_basis(vs)


def test_complete_rejects_non_saturated():
    with pytest.raises(NotUnimodularSystem) as err:
        complete_to_basis(((2, 0, 0), (0, 1, 0)))
    assert 2 in err.value.invariants


def test_complete_rejects_dependent():
    with pytest.raises(LinearlyDependent):
        complete_to_basis(((1, 2, 3), (2, 4, 6)))


@settings(max_examples=150)
@given(st.lists(st.lists(small_ints, min_size=3, max_size=3),
                min_size=1, max_size=2))
def test_basis_completion_property(rows):
    M = intmat(rows)
    inv = smith_invariants(M)
    if len(inv) < len(M) or any(x != 1 for x in inv):
        return
    completion = basis_completion(M)
    assert abs(det_int(M + completion)) == 1


# ---------------------------------------------------------------- index


def test_lattice_index_examples():
    assert lattice_index(((1, 1, 2), (1, 0, 3), (2, 1, 1))) == 4
    assert lattice_index(((1, 0, 0), (0, 1, 0))) == 1
    assert lattice_index(((1, 0, 1), (0, 1, 1), (-1, -1, 1))) == 3


def test_lattice_index_dependent():
    with pytest.raises(LinearlyDependent):
        lattice_index(((1, 2), (2, 4)))


@settings(max_examples=150)
@given(st.lists(st.lists(small_ints, min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_lattice_index_is_abs_det(rows):
    d = naive_det(rows)
    if d == 0:
        with pytest.raises(LinearlyDependent):
            lattice_index(rows)
    else:
        assert lattice_index(rows) == abs(d)


# ---------------------------------------------------------------- solves


def test_solve_left_simple():
    A = intmat([(1, 0), (0, 1), (1, 1)])
    sol = solve_left(A, (2, 3))
    assert sol is not None
    particular, kernel = sol
    assert vec_mat(particular, A) == (2, 3)
    assert len(kernel) == 1
    assert vec_mat(kernel[0], A) == (0, 0)


def test_solve_left_no_solution():
    assert solve_left(((2, 0),), (1, 0)) is None


@settings(max_examples=100)
@given(int_matrices(3), st.lists(small_ints, min_size=3, max_size=3))
def test_solve_left_roundtrip(rows, x):
    M = intmat(rows)
    x = tuple(x[:len(M)])
    if len(x) < len(M):
        return
    b = vec_mat(x, M)
    sol = solve_left(M, b)
    assert sol is not None
    particular, kernel = sol
    assert vec_mat(particular, M) == b
    for k in kernel:
        assert vec_mat(k, M) == tuple(0 for _ in b)


def test_mat_inverse_unimodular():
    M = ((1, 2, 0), (0, 1, 3), (0, 0, 1))
    assert mat_mul(M, mat_inverse(M)) == identity(3)
    with pytest.raises(ValueError):
        mat_inverse(((2, 0), (0, 1)))


def test_rational_helpers():
    assert rat_rank([[1, 2], [2, 4]]) == 1
    assert rat_solve([[2, 0], [0, 4]], [1, 1]) == (Fraction(1, 2), Fraction(1, 4))
    (k,) = rat_kernel([[1, 1, 1]])[:1]
    assert sum(k) == 0
    assert primitive_vector((Fraction(2, 3), Fraction(4, 3))) == (1, 2)
    assert primitive_vector((-2, -4)) == (-1, -2)


# ---------------------------------------------------------------- jets


def test_jet_arithmetic_matches_rationals():
    a, b = Jet(Fraction(3, 2)), Jet(Fraction(-5, 7))
    assert (a + b).value == Fraction(3, 2) - Fraction(5, 7)
    assert (a * b).slope == 0
    assert a / b == Jet(Fraction(3, 2) / Fraction(-5, 7))


def test_jet_first_order_products():
    x = Jet(2, 3)
    y = Jet(5, -1)
    assert x * y == Jet(10, 13)  # 2*5, 2*(-1) + 3*5
    assert x / y == Jet(Fraction(2, 5), Fraction(17, 25))
    assert (x / y) * y == x


def test_jet_ordering_lexicographic():
    assert Jet(1, -100) > Jet(0, 100)
    assert Jet(1, -1) < Jet(1, 0) < Jet(1, 1)
    assert Jet(0, 1) > 0
    assert Jet(0, -1) < 0


def test_jet_division_by_zero_value():
    with pytest.raises(ZeroDivisionError):
        Jet(1) / Jet(0, 5)


def test_jet_floor_cases():
    assert jet_floor(Jet(Fraction(7, 3), 99)) == 2
    assert jet_floor(Jet(Fraction(7, 3), -99)) == 2
    assert jet_floor(Jet(2, 1)) == 2
    assert jet_floor(Jet(2, -1)) == 1
    # value -1/3 with positive slope: one-sided value just above -1/3
    assert jet_floor(Jet(Fraction(-1, 3), 1)) == -1
    with pytest.raises(DegenerateJet):
        jet_floor(Jet(5, 0))


fraction_st = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@settings(max_examples=200)
@given(fraction_st, fraction_st)
def test_jet_floor_agrees_off_integers(value, slope):
    if value.denominator == 1:
        return
    assert jet_floor(Jet(value, slope)) == math.floor(value)


@settings(max_examples=200)
@given(fraction_st, fraction_st, fraction_st, fraction_st)
def test_jet_ring_axioms(a, b, c, d):
    x, y = Jet(a, b), Jet(c, d)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + Jet(1)) == x * y + x
    if not y.is_zero() and y.value != 0:
        assert (x / y) * y == x


def test_transpose_and_vec_mat():
    M = ((1, 2), (3, 4), (5, 6))
    assert transpose(M) == ((1, 3, 5), (2, 4, 6))
    assert vec_mat((1, 0, -1), M) == (-4, -4)
