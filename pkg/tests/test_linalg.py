from fractions import Fraction

from hypothesis import given, settings, strategies as st

from koszulity.linalg import Matrix


def M(rows):
    return Matrix.from_rows(rows)


def test_rref_identity():
    R, piv = Matrix.identity(2).rref()
    assert R == Matrix.identity(2)
    assert piv == [0, 1]


def test_rref_rank_one():
    R, piv = M([[1, 2], [2, 4]]).rref()
    assert R.data[0] == [Fraction(1), Fraction(2)]
    assert R.data[1] == [Fraction(0), Fraction(0)]
    assert piv == [0]


def test_rref_permutation():
    R, piv = M([[0, 1], [1, 0]]).rref()
    assert R == Matrix.identity(2)
    assert piv == [0, 1]


def test_kernel_identity_empty():
    assert Matrix.identity(3).kernel_basis() == []


def test_kernel_zero_matrix():
    assert len(Matrix.zero(2, 3).kernel_basis()) == 3


def test_kernel_rank_one_row():
    (v,) = M([[1, 1]]).kernel_basis()
    assert v[0] == -v[1] != 0


def test_solve_identity():
    assert Matrix.identity(2).solve([3, 5]) == [Fraction(3), Fraction(5)]


def test_solve_consistent_rank_one():
    x = M([[1, 2], [2, 4]]).solve([1, 2])
    assert x is not None and x[0] + 2 * x[1] == 1


def test_solve_inconsistent():
    assert M([[1, 2], [2, 4]]).solve([1, 0]) is None


def test_inverse():
    a = M([[1, 2], [3, 5]])
    assert a * a.inverse() == Matrix.identity(2)
    assert M([[1, 2], [2, 4]]).inverse() is None


small_entries = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(min_value=1, max_value=max_dim))
    c = draw(st.integers(min_value=1, max_value=max_dim))
    data = draw(st.lists(st.lists(small_entries, min_size=c, max_size=c),
                         min_size=r, max_size=r))
    return Matrix.from_rows(data)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    assert m.rank() + len(m.kernel_basis()) == m.cols


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_annihilate(m):
    for v in m.kernel_basis():
        assert all(x == 0 for x in m.apply(v))


@given(matrices(), st.data())
@settings(max_examples=60, deadline=None)
def test_solve_exact(m, data):
    x = data.draw(st.lists(small_entries, min_size=m.cols, max_size=m.cols))
    b = m.apply([Fraction(v) for v in x])
    sol = m.solve(b)
    assert sol is not None
    assert m.apply(sol) == b


@given(matrices())
@settings(max_examples=40, deadline=None)
def test_rref_preserves_row_space(m):
    R, piv = m.rref()
    assert R.rank() == m.rank() == len(piv)
    # every original row is in the row space of the reduced matrix
    from koszulity.linalg import row_space_contains

    for row in m.data:
        assert row_space_contains(R, row)
