import itertools

import numpy as np
import pytest

from mooreca.boundary import named_spec
from mooreca.errors import CAError
from mooreca.errors import CAErrorCode
from mooreca.gfp import make_field
from mooreca.gfp import matmul_mod
from mooreca.grid import LatticeDims
from mooreca.linalg import DenseMatrix
from mooreca.linalg import a1_minus_identity
from mooreca.linalg import b1_matrix
from mooreca.linalg import block_rank_lower
from mooreca.linalg import block_rank_upper
from mooreca.linalg import column_space_complement
from mooreca.linalg import delta
from mooreca.linalg import det_A1_minus_I
from mooreca.linalg import det_A1_minus_I_closed
from mooreca.linalg import det_B1_closed
from mooreca.linalg import eliminate
from mooreca.linalg import invert
from mooreca.linalg import rank
from mooreca.linalg import solve
from mooreca.rulematrix import build_from_resolver
from mooreca.rulematrix import build_theorem_matrix
from mooreca.stepper import RuleCoefficients

F3 = make_field(3)
F5 = make_field(5)


def test_eliminate_small():
    mat = DenseMatrix.from_rows(F5, [[1, 2], [3, 4]])
    result = eliminate(mat)
    assert result.rank == 2
    assert result.nullity == 0
    assert result.pivots == (0, 1)
    assert int(result.det) == (4 - 6) % 5


def test_determinant_of_known_matrix():
    mat = DenseMatrix.from_rows(make_field(7), [[2, 1], [1, 3]])
    assert int(eliminate(mat).det) == 5


def test_singular_matrix():
    # third row is the sum of the first two
    mat = DenseMatrix.from_rows(F5, [[1, 2, 3], [0, 1, 4], [1, 3, 2]])
    result = eliminate(mat)
    assert result.rank == 2
    assert int(result.det) == 0
    assert len(result.nullspace_basis) == 1
    for v in result.nullspace_basis:
        assert not matmul_mod(mat.entries, v, 5).any()
    with pytest.raises(CAError) as exc:
        invert(mat)
    assert exc.value.code is CAErrorCode.SINGULAR


def test_invert_example_b1():
    b1 = DenseMatrix.from_rows(F3, [[1, 1, 0], [1, 1, 1], [0, 2, 1]])
    inverse = invert(b1)
    assert inverse.entries.tolist() == [[2, 2, 1], [2, 1, 2], [2, 1, 0]]
    assert b1 @ inverse == DenseMatrix.identity(F3, 3)


def test_invert_rejects_rectangular():
    with pytest.raises(CAError) as exc:
        invert(DenseMatrix.zeros(F3, 2, 3))
    assert exc.value.code is CAErrorCode.DIMENSION_MISMATCH


def test_random_inverses():
    rng = np.random.default_rng(5)
    p = 7
    fld = make_field(p)
    ident = DenseMatrix.identity(fld, 6)
    found = 0
    for _ in range(20):
        mat = DenseMatrix(fld, rng.integers(0, p, size=(6, 6)))
        if rank(mat) < 6:
            continue
        found += 1
        assert mat @ invert(mat) == ident
        assert invert(mat) @ mat == ident
    assert found > 0


def test_solve():
    mat = DenseMatrix.from_rows(F5, [[1, 2, 3], [2, 4, 1], [3, 1, 4]])
    rhs = matmul_mod(mat.entries, np.array([1, 2, 3]), 5)
    x = solve(mat, rhs)
    assert x is not None
    assert matmul_mod(mat.entries, x, 5).tolist() == rhs.tolist()
    assert solve(DenseMatrix.zeros(F5, 3, 3), np.array([0, 1, 0])) is None


def test_column_space_complement():
    mat = DenseMatrix.from_rows(F5, [[1, 0, 0], [0, 0, 0], [0, 0, 1]])
    assert column_space_complement(mat) == [1]
    assert column_space_complement(DenseMatrix.identity(F5, 3)) == []


def test_example_block_elimination():
    T = build_theorem_matrix("phi", LatticeDims(4, 3), RuleCoefficients.uniform(F3, 1))
    trace = block_rank_lower(T)
    assert trace.orientation == "lower"
    assert trace.P_sequence[0].tolist() == T.block(4, 4).tolist()
    assert trace.P_sequence[1].tolist() == [[1, 0, 2], [2, 2, 2], [1, 1, 0]]
    assert len(trace.P_sequence) == 4
    assert trace.pm_rank == 3
    assert trace.final_rank == 12 == rank(T)


@pytest.mark.parametrize("name", ["φ", "τ", "NB", "AB"])
def test_lower_block_rank_matches_dense(name):
    rng = np.random.default_rng(17)
    checked = 0
    for p, m, n in itertools.product((3, 5, 7), (3, 4, 5), (3, 4)):
        dims = LatticeDims(m, n)
        k = RuleCoefficients.random(make_field(p), rng)
        T = build_from_resolver(named_spec(name), dims, k)
        try:
            trace = block_rank_lower(T)
        except CAError as e:
            assert e.code is CAErrorCode.SINGULAR_X
            continue
        checked += 1
        assert trace.final_rank == rank(T)
    assert checked > 0


@pytest.mark.parametrize("name", ["φ180", "σ", "AB"])
def test_upper_block_rank_matches_dense(name):
    rng = np.random.default_rng(23)
    checked = 0
    for p, m, n in itertools.product((3, 5, 7), (3, 4, 5), (3, 4)):
        dims = LatticeDims(m, n)
        k = RuleCoefficients.random(make_field(p), rng)
        T = build_from_resolver(named_spec(name), dims, k)
        try:
            trace = block_rank_upper(T)
        except CAError as e:
            assert e.code is CAErrorCode.SINGULAR_X
            continue
        checked += 1
        assert trace.orientation == "upper"
        assert trace.final_rank == rank(T)
    assert checked > 0


def test_block_rank_rejects_corner_blocks():
    T = build_theorem_matrix("PB", LatticeDims(4, 3), RuleCoefficients.uniform(F3, 1))
    with pytest.raises(CAError) as exc:
        block_rank_lower(T)
    assert exc.value.code is CAErrorCode.SHAPE_MISMATCH


def test_block_rank_singular_x():
    # f = e = g = 0 makes the superdiagonal block zero
    k = RuleCoefficients(F5, a=1, b=2, c=3, d=4, h=1)
    T = build_theorem_matrix("NB", LatticeDims(3, 3), k)
    with pytest.raises(CAError) as exc:
        block_rank_lower(T)
    assert exc.value.code is CAErrorCode.SINGULAR_X


def _tridiagonal(field, k, d, h):
    mat = -np.eye(k, dtype=np.int64) + d * np.eye(k, k=1, dtype=np.int64)
    mat += h * np.eye(k, k=-1, dtype=np.int64)
    return DenseMatrix(field, mat)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_delta_matches_dense(p):
    fld = make_field(p)
    for k, d, h in itertools.product(range(1, 6), range(p), range(p)):
        assert delta(fld, k, d, h) == eliminate(_tridiagonal(fld, k, d, h)).det


def test_delta_even_characteristic():
    with pytest.raises(CAError) as exc:
        delta(make_field(2), 3, 1, 1)
    assert exc.value.code is CAErrorCode.EVEN_CHARACTERISTIC


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", range(3, 11))
def test_det_a1_minus_identity_closed_form(p, n):
    fld = make_field(p)
    for d, h in itertools.product(range(p), range(p)):
        dense = eliminate(a1_minus_identity(fld, n, d, h)).det
        assert det_A1_minus_I_closed(fld, n, d, h) == dense, (d, h)


def test_det_a1_minus_identity_cases():
    assert int(det_A1_minus_I_closed(F5, 5, 0, 3)) == 4
    assert int(det_A1_minus_I_closed(F5, 4, 2, 0)) == 2
    # d + h = -1
    assert int(det_A1_minus_I_closed(F5, 3, 1, 3)) == (-9) % 5


def test_det_a1_minus_identity_falls_back_over_z2():
    f2 = make_field(2)
    for n in (3, 4, 5):
        dense = eliminate(a1_minus_identity(f2, n, 1, 1)).det
        assert det_A1_minus_I(f2, n, 1, 1) == dense


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("n", range(3, 11))
def test_det_b1_closed_form(p, n):
    fld = make_field(p)
    covered = 0
    for e, f, g in itertools.product(range(p), repeat=3):
        try:
            closed = det_B1_closed(fld, n, e, f, g)
        except CAError as exc:
            assert exc.code is CAErrorCode.CASE_NOT_COVERED
            continue
        covered += 1
        assert closed == eliminate(b1_matrix(fld, n, e, f, g)).det, (e, f, g)
    assert covered > 0


def test_det_b1_cases():
    assert int(det_B1_closed(F5, 3, 0, 2, 1)) == 3
    assert int(det_B1_closed(F3, 4, 1, 1, 0)) == 0
    assert int(det_B1_closed(make_field(13), 3, 1, 3, 2)) == 12
    with pytest.raises(CAError) as exc:
        det_B1_closed(F3, 3, 1, 1, 1)
    assert exc.value.code is CAErrorCode.CASE_NOT_COVERED


def test_identity_and_zero():
    result = eliminate(DenseMatrix.identity(F3, 4))
    assert (result.rank, int(result.det), result.nullity) == (4, 1, 0)
    result = eliminate(DenseMatrix.zeros(F3, 3, 3))
    assert (result.rank, int(result.det), result.nullity) == (0, 0, 3)
    assert invert(DenseMatrix.identity(F3, 4)) == DenseMatrix.identity(F3, 4)


def test_rank_of_transpose_and_det_product():
    rng = np.random.default_rng(77)
    for p in (2, 3, 5):
        fld = make_field(p)
        for _ in range(10):
            a = DenseMatrix(fld, rng.integers(0, p, size=(5, 5)))
            b = DenseMatrix(fld, rng.integers(0, p, size=(5, 5)))
            assert rank(a) == rank(a.transpose())
            assert eliminate(a @ b).det == eliminate(a).det * eliminate(b).det


def test_upper_block_rank_of_transposed_example():
    T = build_theorem_matrix("phi", LatticeDims(4, 3), RuleCoefficients.uniform(F3, 1))
    trace = block_rank_upper(T.transpose())
    assert trace.final_rank == 12
