import pytest
from hypothesis import given, settings, strategies as st

from kmdecomp.errors import DomainError, Inconsistent
from kmdecomp.laurent import RONE, RZERO, LaurentPoly, as_rational, qint
from kmdecomp.linalg import (ExactMatrix, determinant, identity, inverse, kernel, mat_mul, mat_vec,
                             rank, row_space_basis, solve_exact, solve_matrix)


def r(x):
    return as_rational(x)


def vp(k):
    return r(LaurentPoly.monomial(k))


entries = st.integers(-3, 3).flatmap(
    lambda e: st.integers(-3, 3).map(lambda c: r(LaurentPoly.monomial(e, c))))


def test_identity_system():
    rhs = [vp(1), vp(-2), RONE]
    sol = solve_exact(identity(3), rhs)
    assert sol.unique and sol.particular == rhs


def test_one_by_one_division():
    sol = solve_exact([[vp(1) - vp(-1)]], [vp(2) - vp(-2)])
    assert sol.particular == [vp(1) + vp(-1)]


def test_rank_of_proportional_rows():
    q = r(qint(2))
    assert rank([[q], [q]]) == 1


def test_inconsistent():
    with pytest.raises(Inconsistent):
        solve_exact([[RONE], [RONE]], [RONE, RZERO])


def test_kernel_and_underdetermined():
    m = [[RONE, vp(1)]]
    sol = solve_exact(m, [RONE])
    assert not sol.unique
    (k,) = sol.kernel
    assert mat_vec(m, k) == [RZERO]
    assert mat_vec(m, sol.particular) == [RONE]
    assert kernel(m, 2) and len(kernel(m, 2)) == 1


def test_solve_matrix_needs_full_rank():
    with pytest.raises(DomainError):
        solve_matrix([[RONE, RONE], [RONE, RONE]], identity(2))


def test_row_space_basis():
    rows = [[RONE, RZERO], [vp(1), RZERO], [RZERO, RONE]]
    assert row_space_basis(rows) == [0, 2]


@settings(max_examples=25, deadline=None)
@given(st.lists(entries, min_size=9, max_size=9), st.lists(entries, min_size=3, max_size=3))
def test_solution_is_exact(flat, rhs):
    m = [flat[0:3], flat[3:6], flat[6:9]]
    try:
        sol = solve_exact(m, rhs)
    except Inconsistent:
        assert rank(m) < 3
        return
    assert mat_vec(m, sol.particular) == rhs
    for k in sol.kernel:
        assert mat_vec(m, k) == [RZERO] * 3


@settings(max_examples=20, deadline=None)
@given(st.lists(entries, min_size=4, max_size=4))
def test_inverse_and_determinant(flat):
    m = [flat[0:2], flat[2:4]]
    det = determinant(m)
    assert det == m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det:
        assert mat_mul(m, inverse(m)) == identity(2)


def test_exact_matrix_wrapper():
    a = ExactMatrix([[vp(1), RZERO], [RZERO, RONE]])
    assert (a @ a.bar()) == ExactMatrix(identity(2))
    assert a.shape == (2, 2) and a.rank() == 2
