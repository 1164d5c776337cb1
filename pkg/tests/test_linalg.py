"""Dense-kernel checks against numpy.linalg as the reference."""

import numpy as np
import numpy.linalg as npl
import pytest

from multicentric.config import DEFAULT_TOL
from multicentric.errors import DimensionTooLarge, SingularMatrix
from multicentric.linalg import (
    EIG_DIM_CAP,
    char_poly,
    condition_2,
    eigenvalues,
    inverse,
    mat_poly_eval,
    nullspace,
    operator_norm_2,
    solve,
)
from multicentric.polynomials import Polynomial


def _rand_matrix(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n))
                    + 1j * rng.standard_normal((n, n)))


def _match_multisets(a, b, tol):
    a = list(np.asarray(a, dtype=np.complex128))
    b = list(np.asarray(b, dtype=np.complex128))
    assert len(a) == len(b)
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        assert abs(x - b[j]) <= tol
        b.pop(j)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_solve_matches_numpy(seed, n):
    rng = np.random.default_rng(100 * n + seed)
    a = _rand_matrix(rng, n)
    b = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    x = solve(a, b)
    ref = npl.solve(a, b)
    assert np.abs(x - ref).max() < 1e-10 * max(1.0, np.abs(ref).max())


def test_solve_vector_rhs():
    rng = np.random.default_rng(0)
    a = _rand_matrix(rng, 3)
    b = rng.standard_normal(3) + 0j
    x = solve(a, b)
    assert np.abs(a @ x - b).max() < 1e-12


def test_solve_singular_raises():
    a = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=np.complex128)
    with pytest.raises(SingularMatrix):
        solve(a, np.ones(2, dtype=np.complex128))


@pytest.mark.parametrize("seed", range(4))
def test_inverse_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    a = _rand_matrix(rng, 5)
    inv = inverse(a)
    assert np.abs(inv - npl.inv(a)).max() < 1e-10
    assert np.abs(a @ inv - np.eye(5)).max() < 1e-11


def test_mat_poly_eval_horner():
    rng = np.random.default_rng(3)
    a = _rand_matrix(rng, 4)
    q = Polynomial([2.0, -1.0, 0.0, 3.0])
    got = mat_poly_eval(q, a)
    want = 2.0 * np.eye(4) - a + 3.0 * a @ a @ a
    assert np.abs(got - want).max() < 1e-10 * max(1.0, np.abs(want).max())


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("n", [2, 3, 6, 8])
def test_char_poly_matches_numpy(seed, n):
    rng = np.random.default_rng(7 * n + seed)
    a = _rand_matrix(rng, n)
    ours = char_poly(a).coeffs
    ref = np.poly(a)[::-1]  # np.poly is descending; ours ascending
    scale = np.abs(ref).max()
    assert np.abs(ours - ref).max() < 1e-9 * scale


def test_char_poly_cayley_hamilton():
    rng = np.random.default_rng(11)
    a = _rand_matrix(rng, 5)
    q = char_poly(a)
    res = mat_poly_eval(q, a)
    assert np.abs(res).max() < 1e-8 * max(1.0, npl.norm(a) ** 5)


@pytest.mark.parametrize("seed", range(6))
def test_eigenvalues_match_numpy(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    a = _rand_matrix(rng, n)
    ours = eigenvalues(a)
    ref = npl.eigvals(a)
    _match_multisets(ours, ref, 1e-7 * max(1.0, np.abs(ref).max()))


def test_eigenvalues_diagonal_exactish():
    a = np.diag([1.0, -2.0, 3.5]).astype(np.complex128)
    _match_multisets(eigenvalues(a), [1.0, -2.0, 3.5], 1e-10)


def test_eigenvalue_dimension_cap():
    n = EIG_DIM_CAP + 1
    with pytest.raises(DimensionTooLarge):
        eigenvalues(np.eye(n, dtype=np.complex128))


@pytest.mark.parametrize("seed", range(6))
def test_operator_norm_2_matches_numpy(seed):
    rng = np.random.default_rng(seed + 40)
    n = int(rng.integers(2, 8))
    a = _rand_matrix(rng, n)
    assert operator_norm_2(a) == pytest.approx(npl.norm(a, 2), rel=1e-6)


def test_condition_2_matches_numpy():
    rng = np.random.default_rng(2)
    a = _rand_matrix(rng, 4)
    assert condition_2(a) == pytest.approx(npl.cond(a, 2), rel=1e-5)


class TestNullspace:
    def test_full_rank_empty(self):
        rng = np.random.default_rng(1)
        a = _rand_matrix(rng, 4)
        assert nullspace(a, 1e-10).shape == (0, 4)

    def test_known_kernel(self):
        # rows (1, 1, 0) and (0, 0, 1): kernel spanned by (1, -1, 0)
        a = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]], dtype=np.complex128)
        basis = nullspace(a, 1e-12)
        assert basis.shape == (1, 3)
        v = basis[0]
        assert np.abs(a @ v).max() < 1e-12
        w = np.array([1.0, -1.0, 0.0]) / np.sqrt(2)
        proj = v - (np.conj(w) @ v) * w
        assert np.abs(proj).max() < 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_span_matches_svd(self, seed):
        rng = np.random.default_rng(seed + 9)
        # random rank-2 4x4 matrix
        b = _rand_matrix(rng, 4)[:, :2]
        c = _rand_matrix(rng, 4)[:2, :]
        a = b @ c
        basis = nullspace(a, 1e-9 * np.abs(a).max())
        assert basis.shape[0] == 2
        assert np.abs(a @ basis.T).max() < 1e-8
        # compare spans via SVD projector
        _, s, vh = npl.svd(a)
        ref = vh[2:].conj().T  # columns span the kernel
        pr = ref @ ref.conj().T
        for v in basis:
            assert np.abs(pr @ v - v).max() < 1e-8
