import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llvkit.linalg import (DimensionError, IntSpan, Matrix, Span, Subspace,
                           congruence_diagonalize, integer_eigenspaces,
                           inverse, kernel, rref, solve, symmetric_signature)
from llvkit.scalars import Gauss, I


def test_kernel_zero_map():
    assert kernel(Matrix.zeros(2, 2)).dim == 2


def test_kernel_identity():
    assert kernel(Matrix.identity(3)).dim == 0


def test_kernel_rank_one_nilpotent():
    ker = kernel(Matrix([[0, 1], [0, 0]]))
    assert ker.basis == ((Fraction(1), Fraction(0)),)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                min_size=1, max_size=5))
def test_rank_nullity(rows):
    m = Matrix(rows)
    assert m.rank() + kernel(m).dim == m.ncols


def test_subspace_disjoint_pair():
    a = Subspace.from_rows(2, [[1, 0]])
    b = Subspace.from_rows(2, [[0, 1]])
    assert a.intersect(b).dim == 0
    assert a.sum(b).dim == 2


def test_subspace_idempotence():
    a = Subspace.from_rows(3, [[1, 2, 0], [0, 0, 1]])
    assert a.intersect(a) == a
    assert a.sum(a) == a


def test_subspace_modular_law_random():
    rng = random.Random(11)
    for _ in range(25):
        a = Subspace.from_rows(4, [[rng.randint(-2, 2) for _ in range(4)]
                                   for _ in range(3)])
        b = Subspace.from_rows(4, [[rng.randint(-2, 2) for _ in range(4)]
                                   for _ in range(2)])
        inter, total = a.intersect(b), a.sum(b)
        assert inter.dim + total.dim == a.dim + b.dim
        assert inter <= a and inter <= b and a <= total and b <= total


def test_subspace_equality_representation_independent():
    a = Subspace.from_rows(3, [[2, 4, 0], [0, 2, 2]])
    b = Subspace.from_rows(3, [[1, 2, 0], [1, 3, 1]])
    assert a == b
    assert hash(a) == hash(b)


def test_subspace_ambient_mismatch():
    with pytest.raises(DimensionError):
        Subspace.from_rows(2, [[1, 0]]).sum(Subspace.from_rows(3, [[1, 0, 0]]))


def test_signature_three_two():
    q = Matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0],
                [0, 0, 0, -1, 0], [0, 0, 0, 0, -1]])
    assert symmetric_signature(q) == (3, 2, 0)


def test_signature_zero_form():
    assert symmetric_signature(Matrix.zeros(2, 2)) == (0, 0, 2)


def test_signature_hyperbolic_plane():
    # diagonalizes by hand to x^2 - y^2
    assert symmetric_signature(Matrix([[0, 1], [1, 0]])) == (1, 1, 0)


def test_signature_rejects_asymmetric():
    with pytest.raises(ValueError):
        symmetric_signature(Matrix([[0, 1], [2, 0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_signature_congruence_invariant(n, seed):
    rng = random.Random(seed)
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            grid[i][j] = grid[j][i] = rng.randint(-3, 3)
    q = Matrix(grid)
    sig = symmetric_signature(q)
    while True:
        p = Matrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if p.rank() == n:
            break
    assert symmetric_signature(p * q * p.transpose()) == sig


def test_congruence_diagonalize_transform():
    q = Matrix([[0, 1, 2], [1, -2, 0], [2, 0, 3]])
    p, diag = congruence_diagonalize(q)
    d = p * q * p.transpose()
    for i in range(3):
        for j in range(3):
            assert d[i, j] == (diag[i] if i == j else 0)


def test_integer_eigenspaces_diagonal():
    spaces = integer_eigenspaces(Matrix([[-2, 0, 0], [0, 0, 0], [0, 0, 2]]),
                                 [-2, 0, 2])
    assert sorted(spaces) == [-2, 0, 2]
    assert all(s.dim == 1 for s in spaces.values())


def test_integer_eigenspaces_k3_weights(k3):
    from llvkit.lefschetz import classical_weights, weight_operator_matrix
    h = weight_operator_matrix(k3, classical_weights(k3))
    spaces = integer_eigenspaces(h, [-2, 0, 2])
    assert {lam: s.dim for lam, s in spaces.items()} == {-2: 1, 0: 22, 2: 1}


def test_integer_eigenspaces_identity():
    assert integer_eigenspaces(Matrix.identity(4), [1])[1].dim == 4


def test_integer_eigenspaces_rejects_wrong_spectrum():
    with pytest.raises(ValueError, match="not diagonalizable"):
        integer_eigenspaces(Matrix([[0, 1], [0, 0]]), [0, 1])


def test_solve_and_inverse():
    m = Matrix([[2, 1], [1, 1]])
    assert solve(m, (3, 2)) == (Fraction(1), Fraction(1))
    assert inverse(m) * m == Matrix.identity(2)
    assert solve(Matrix([[1, 1], [1, 1]]), (0, 1)) is None


def test_spans_agree_with_subspace():
    rng = random.Random(3)
    for _ in range(10):
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                 for _ in range(5)] for _ in range(4)]
        si, sp = IntSpan(5), Span(5)
        for r in rows:
            assert si.add(list(r)) == sp.add(list(r))
        expected = Subspace.from_rows(5, rows)
        assert si.to_subspace() == expected
        assert sp.to_subspace() == expected


def test_gaussian_matrix_kernel():
    m = Matrix([[Gauss(1), I], [I, Gauss(-1)]])
    ker = kernel(m)
    assert ker.dim == 1
    v = ker.basis[0]
    assert all(not x for x in m.matvec(v))


def test_rref_canonical():
    rows1, piv1 = rref([[2, 4], [1, 3]])
    rows2, piv2 = rref([[1, 2], [0, 1]])
    assert rows1 == rows2 and piv1 == piv2
