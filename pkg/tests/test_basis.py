import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasiband.basis import (
    BasisSpec,
    HermitianKind,
    OperatorMatrix,
    basis_parity,
    build_cosine_matrix,
    build_first_derivative_matrix,
    build_second_derivative_matrix,
    evaluate_basis_function,
)

Z = np.linspace(0.0, np.pi, 4097)
W = np.full(Z.size, Z[1] - Z[0])
W[[0, -1]] *= 0.5


def quad(f):
    return float(f @ W)


def test_second_derivative_diagonal():
    assert np.array_equal(build_second_derivative_matrix(BasisSpec(3)).entries, np.diag([0.0, 4.0, 4.0]))
    assert build_second_derivative_matrix(BasisSpec(1)).entries.tolist() == [[0.0]]
    d = build_second_derivative_matrix(BasisSpec(5)).entries
    assert d[3, 3] == 16 and d[4, 4] == 16


def test_first_derivative_entries():
    d = build_first_derivative_matrix(BasisSpec(6)).entries
    assert d[1, 2] == -2 and d[2, 1] == 2 and d[3, 4] == -4 and d[4, 3] == 4
    assert not d[0].any() and not d[:, 0].any()
    assert not (d + d.T).any()


def test_cosine_entries():
    c = build_cosine_matrix(BasisSpec(8)).entries
    assert c[0, 2] == pytest.approx(0.70711, abs=1e-5)
    assert c[1, 3] == 0.5
    assert np.array_equal(c, c.T)


def test_parity_and_values():
    assert [basis_parity(m) for m in range(3)] == [1, -1, 1]
    assert evaluate_basis_function(0, 1.3) == pytest.approx(0.56419, abs=1e-5)
    assert evaluate_basis_function(1, np.pi / 4) == pytest.approx(np.sqrt(2 / np.pi), abs=1e-15)
    assert evaluate_basis_function(2, 0.0) == pytest.approx(np.sqrt(2 / np.pi), abs=1e-15)


def test_orthonormality_by_quadrature():
    phi = np.array([evaluate_basis_function(m, Z) for m in range(16)])
    gram = (phi * W) @ phi.T
    assert np.max(np.abs(gram - np.eye(16))) < 1e-10


def test_matrices_match_quadrature():
    n = 8
    phi = np.array([evaluate_basis_function(m, Z) for m in range(n)])
    h = 1e-5
    dphi = np.array([(evaluate_basis_function(m, Z + h) - evaluate_basis_function(m, Z - h)) / (2 * h) for m in range(n)])
    d1 = (phi * W) @ dphi.T
    assert np.max(np.abs(d1 - build_first_derivative_matrix(BasisSpec(n)).entries)) < 1e-8
    c = (phi * W * np.cos(2 * Z)) @ phi.T
    assert np.max(np.abs(c - build_cosine_matrix(BasisSpec(n)).entries[:n, :n])) < 1e-10


def test_invalid_inputs():
    with pytest.raises(ValueError):
        BasisSpec(0)
    with pytest.raises(ValueError):
        basis_parity(-1)
    with pytest.raises(ValueError):
        OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), HermitianKind.HERMITIAN)


@given(st.integers(min_value=1, max_value=60))
def test_builders_deterministic_and_kinds(n):
    spec = BasisSpec(n)
    for build in (build_second_derivative_matrix, build_first_derivative_matrix, build_cosine_matrix):
        a, b = build(spec), build(spec)
        assert a.dim == n
        assert np.array_equal(a.entries, b.entries)
    assert build_first_derivative_matrix(spec).hermitian_kind is HermitianKind.ANTI_HERMITIAN
