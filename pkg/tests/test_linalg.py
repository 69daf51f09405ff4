import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strichartz.linalg import (EigenError, SparseSymMatrix, Spectrum, block2x2_eigenvalues,
                               compositions, decode_multiindex, eigen_residual,
                               encode_multiindex, multiindices, symmetric_eigenvalues)


@pytest.mark.parametrize("k, N, expected", [((0, 0), 3, 0), ((2, 1), 3, 9), ((1, 2, 3), 3, 27)])
def test_encode_examples(k, N, expected):
    assert encode_multiindex(k, N) == expected


def test_encode_out_of_range():
    with pytest.raises(ValueError):
        encode_multiindex((4, 0), 3)
    with pytest.raises(ValueError):
        decode_multiindex(16, 2, 3)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("N", [2, 5, 8])
def test_encode_decode_inverse(d, N):
    rng = np.random.default_rng(d * 10 + N)
    for k in rng.integers(0, N + 1, size=(2500, d)):
        k = tuple(int(v) for v in k)
        assert decode_multiindex(encode_multiindex(k, N), d, N) == k
    idx = multiindices(d, N)
    assert [encode_multiindex(k, N) for k in idx] == list(range((N + 1) ** d))


def test_compositions():
    got = sorted(compositions(3, 2))
    assert got == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert all(sum(c) == 4 and max(c) <= 2 for c in compositions(4, 3, bound=2))
    assert len(list(compositions(4, 3, bound=2))) == 6


def test_sparse_matrix_storage():
    S = SparseSymMatrix(3)
    S[2, 0] = 1.5
    S[1, 1] = -2.0
    S[0, 1] = 0.0
    assert S[0, 2] == 1.5 and S.nnz == 2
    S[0, 2] = 0.0
    assert S.nnz == 1
    np.testing.assert_array_equal(S.to_dense(), np.diag([0.0, -2.0, 0.0]))
    assert S.trace() == -2.0


def test_examples():
    assert symmetric_eigenvalues(np.eye(2)).eigenvalues.tolist() == [1.0, 1.0]
    np.testing.assert_allclose(symmetric_eigenvalues(np.diag([3.0, -1.0, 0.0])).eigenvalues,
                               [-1, 0, 3], atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_2x2_quadratic_formula(a, b, c):
    ev = symmetric_eigenvalues(np.array([[a, b], [b, c]])).eigenvalues
    disc = math.sqrt((a - c) ** 2 + 4 * b * b)
    np.testing.assert_allclose(ev, [(a + c - disc) / 2, (a + c + disc) / 2], atol=1e-12 * (1 + abs(a) + abs(b) + abs(c)))


@pytest.mark.parametrize("n", [1, 2, 7, 40, 150])
def test_methods_agree(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    A = A + A.T
    ql = symmetric_eigenvalues(A).eigenvalues
    lapack = symmetric_eigenvalues(A, method="lapack").eigenvalues
    np.testing.assert_allclose(ql, lapack, atol=1e-11 * max(1, np.abs(lapack).max()))
    if n <= 40:
        jac = symmetric_eigenvalues(A, method="jacobi").eigenvalues
        np.testing.assert_allclose(jac, lapack, atol=1e-11 * max(1, np.abs(lapack).max()))
    assert ql.sum() == pytest.approx(np.trace(A), abs=1e-9 * max(1, np.abs(A).sum()))
    assert np.sqrt((ql**2).sum()) == pytest.approx(np.linalg.norm(A), rel=1e-9)


def test_degenerate_and_graded_spectra():
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((30, 30)))
    lam = np.array([0.0] * 5 + [1.0] * 10 + list(np.logspace(-6, 3, 15)))
    A = Q @ np.diag(lam) @ Q.T
    A = 0.5 * (A + A.T)
    np.testing.assert_allclose(symmetric_eigenvalues(A).eigenvalues, np.sort(lam), atol=1e-11)


def test_residual_spot_check():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((60, 60))
    A = A + A.T
    spec = symmetric_eigenvalues(A)
    for lam in spec.eigenvalues[::6]:
        assert eigen_residual(A, lam) < 1e-9


def test_input_validation():
    with pytest.raises(ValueError, match="symmetric"):
        symmetric_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="square"):
        symmetric_eigenvalues(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="cap"):
        symmetric_eigenvalues(np.eye(5), cap=4)
    with pytest.raises(ValueError, match="method"):
        symmetric_eigenvalues(np.eye(2), method="power")
    assert issubclass(EigenError, RuntimeError)


def test_sparse_input():
    S = SparseSymMatrix(3)
    S[0, 1] = 1.0
    np.testing.assert_allclose(symmetric_eigenvalues(S).eigenvalues, [-1, 0, 1], atol=1e-15)


def test_spectrum_counts_and_export():
    s = Spectrum([3.0, -1.0, 2e-9, -0.5], tolerance=1e-8)
    assert s.counts == (2, 1, 1)
    assert s.gap() == 0.5
    assert s.to_csv().splitlines() == ["eigenvalue", "-1", "-0.5", "2.0000000000000001e-09", "3"]
    assert '"schema_version": 1' in s.to_json()
    assert Spectrum([0.0, 1.0]).gap() == math.inf


@pytest.mark.parametrize("args, expected", [
    ((2.0, 2.0, 0.0, 0.0), (2.0, 2.0)),
    ((0.0, 0.0, 1.5, 1.5), (-1.5, 1.5)),
    ((1.0, 2.0, 1.0, 1.0), ((3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2)),
])
def test_block2x2_examples(args, expected):
    assert block2x2_eigenvalues(*args) == pytest.approx(expected, abs=1e-15)


def test_block2x2_matches_solver():
    rng = np.random.default_rng(1)
    for _ in range(100):
        ai, aj, b = rng.standard_normal(3)
        ev = symmetric_eigenvalues(np.array([[ai, b], [b, aj]])).eigenvalues
        np.testing.assert_allclose(block2x2_eigenvalues(ai, aj, b, b), ev, atol=1e-10)


def test_block2x2_rejects_complex_roots():
    with pytest.raises(ValueError):
        block2x2_eigenvalues(0.0, 0.0, 1.0, -1.0)
