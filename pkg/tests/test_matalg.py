import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pertsemi.matalg import (
    J_HAT,
    Quaternion,
    adjoint,
    embed_quaternion,
    hermitian_eigenvalues,
    is_quaternionic,
    kron,
    quaternion_matrix,
)
from pertsemi.oracle import eigenvalues_by_bisection

from conftest import random_hermitian

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quats = st.tuples(finite, finite, finite, finite).map(lambda t: Quaternion(*t))


def cmat(shape):
    return st.tuples(arrays(float, shape, elements=finite), arrays(float, shape, elements=finite)).map(
        lambda p: p[0] + 1j * p[1]
    )


@given(cmat((3, 4)), cmat((4, 2)))
def test_adjoint_reverses_products(a, b):
    assert np.allclose(adjoint(a @ b), adjoint(b) @ adjoint(a))


def test_kron_index_convention():
    a = np.arange(4).reshape(2, 2) + 1.0
    b = np.array([[0, 1, 2], [3, 4, 5]], dtype=float)
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            for p in range(2):
                for q in range(3):
                    assert k[i * 2 + p, j * 3 + q] == a[i, j] * b[p, q]


def test_kron_mixed_product(rng):
    for _ in range(20):
        a, b, c, d = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4))
        lhs = kron(a, b) @ kron(c, d)
        rhs = kron(a @ c, b @ d)
        assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(rhs).max()


def test_embed_units():
    assert np.array_equal(embed_quaternion(Quaternion(1)), np.eye(2))
    assert np.array_equal(embed_quaternion(Quaternion(0, 0, 1, 0)), J_HAT)
    assert np.array_equal(embed_quaternion([0, 0, 1, 0]), [[0, 1], [-1, 0]])


def test_hamilton_relations():
    i, j, k = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    minus_one = Quaternion(-1)
    assert i * i == minus_one and j * j == minus_one and k * k == minus_one
    assert i * j == k and j * k == i and k * i == j
    assert j * i == Quaternion(0, 0, 0, -1)


@given(quats, quats)
def test_embedding_is_multiplicative(p, q):
    lhs = embed_quaternion(p * q)
    rhs = embed_quaternion(p) @ embed_quaternion(q)
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(rhs).max()))


@given(quats)
def test_embedding_respects_conjugation_and_norm(q):
    m = embed_quaternion(q)
    assert np.allclose(embed_quaternion(q.conj()), adjoint(m))
    assert np.isclose(np.linalg.det(m).real, q.norm2(), rtol=1e-9, atol=1e-9)


@given(quats)
def test_embedding_commutes_with_j_hat_exactly(q):
    m = embed_quaternion(q)
    assert np.array_equal(J_HAT @ np.conj(m), m @ J_HAT)


def test_quaternion_matrix_blocks(rng):
    coeffs = rng.normal(size=(3, 3, 4))
    m = quaternion_matrix(coeffs)
    assert m.shape == (6, 6)
    for i in range(3):
        for j in range(3):
            assert np.array_equal(m[2 * i:2 * i + 2, 2 * j:2 * j + 2], embed_quaternion(coeffs[i, j]))
    assert is_quaternionic(m)
    assert not is_quaternionic(m + 1e-3j * np.eye(6))


def test_quaternion_matrix_product_stays_quaternionic(rng):
    a = quaternion_matrix(rng.normal(size=(2, 2, 4)))
    b = quaternion_matrix(rng.normal(size=(2, 2, 4)))
    assert is_quaternionic(a @ b, 1e-12)


def test_eigenvalue_examples():
    assert np.allclose(hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])
    assert np.allclose(hermitian_eigenvalues([[0, 1], [1, 0]]), [-1, 1])


def test_non_hermitian_rejected():
    with pytest.raises(ValueError, match="not hermitian"):
        hermitian_eigenvalues([[0, 1], [0, 0]])
    with pytest.raises(ValueError, match="not hermitian"):
        hermitian_eigenvalues(np.ones((2, 3)))


def test_eigenvalues_agree_with_bisection(rng):
    for _ in range(5):
        h = random_hermitian(rng, 5)
        assert np.allclose(hermitian_eigenvalues(h), eigenvalues_by_bisection(h), atol=1e-9)


@given(cmat((4, 4)))
def test_eigenvalue_identities(x):
    h = (x + adjoint(x)) / 2
    lam = hermitian_eigenvalues(h)
    assert np.all(np.diff(lam) >= 0)
    scale = max(1.0, np.abs(h).max())
    assert abs(lam.sum() - np.trace(h).real) <= 1e-9 * scale
    assert abs((lam**2).sum() - np.linalg.norm(h) ** 2) <= 1e-9 * scale**2
