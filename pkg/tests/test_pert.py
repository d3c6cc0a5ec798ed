import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pertsemi import (
    Algebra,
    MembershipError,
    PertMatrix,
    TensorElement,
    identity_element,
    is_member,
    is_normalized,
    is_self_adjoint,
    merge_direct_sum,
    multiply,
    realize,
    sample_member,
    split_direct_sum,
    star_image,
    to_tensor,
)
from pertsemi.matalg import adjoint
from pertsemi.pert import (
    CrossTerm,
    membership_residual,
    pert_cn_coordinates,
    pert_cn_from_coordinates,
    random_tensor,
    shuffle_permutation,
    structure_data,
    swap_matrix,
)
from pertsemi.unitary import embed_unitary, random_unitary

from conftest import SINGLE, SUMS, algebra

M2C = Algebra.parse("M2(C)")
seeds = st.integers(0, 2**32 - 1)


def unit(i, j, n=2):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


def diag_projectors():
    return TensorElement.from_terms(M2C, [(unit(0, 0), unit(0, 0)), (unit(1, 1), unit(1, 1))])


def v_identity(d):
    return np.eye(d).reshape(-1)


# identity and realization


def test_identity_element():
    e = identity_element(M2C)
    assert len(e) == 1
    assert np.array_equal(e.left[0], np.eye(2)) and np.array_equal(e.right[0], np.eye(2))
    assert np.array_equal(realize(e).mat, np.eye(4))
    assert is_member(realize(e))


def test_identity_of_c2():
    e = identity_element(Algebra.parse("C^2"))
    assert np.array_equal(realize(e).mat, np.eye(4))
    assert np.allclose(pert_cn_coordinates(realize(e)), [1.0])


def test_realize_single_unit():
    mat = realize(TensorElement.from_terms(M2C, [(unit(0, 0), unit(0, 0))])).mat
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    assert np.array_equal(mat, expected)


def test_realize_is_kron_with_transpose(rng):
    a, b = M2C.random_element(rng), M2C.random_element(rng)
    assert np.allclose(realize(TensorElement(M2C, a[None], b[None])).mat, np.kron(a, b.T))


@pytest.mark.parametrize("text", SINGLE + SUMS)
def test_realize_is_multiplicative(text, rng):
    a = algebra(text)
    x, y = random_tensor(a, rng, 2), random_tensor(a, rng, 2)
    lhs = realize(multiply(x, y)).mat
    rhs = realize(x).mat @ realize(y).mat
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


# the two defining conditions


def test_is_normalized_examples():
    assert is_normalized(identity_element(M2C))
    assert is_normalized(diag_projectors())
    assert not is_normalized(TensorElement(M2C, 2 * np.eye(2)[None], np.eye(2)[None]))


def test_is_self_adjoint_examples():
    assert is_self_adjoint(identity_element(M2C))
    u = random_unitary("C", 2, seed=1)
    assert is_self_adjoint(TensorElement(M2C, u.u[None], adjoint(u.u)[None]))
    # a (x) b^o -> b^* (x) a^*o sends (e12, e21) to itself
    assert is_self_adjoint(TensorElement.from_terms(M2C, [(unit(0, 1), unit(1, 0))]))
    assert not is_self_adjoint(TensorElement.from_terms(M2C, [(unit(0, 1), unit(0, 1))]))


def test_star_image_is_involutive(rng):
    e = random_tensor(M2C, rng, 3)
    twice = star_image(star_image(e))
    assert np.allclose(twice.left, e.left) and np.allclose(twice.right, e.right)


@pytest.mark.parametrize("text", SINGLE + SUMS)
@given(seed=seeds, normalized=st.booleans(), self_adjoint=st.booleans())
def test_conditions_match_realized_form(text, seed, normalized, self_adjoint):
    a = algebra(text)
    rng = np.random.default_rng(seed)
    e = random_tensor(a, rng, 2, normalized=normalized, self_adjoint=self_adjoint)
    m = realize(e).mat
    sd = structure_data(a)
    v = v_identity(a.dim)
    fixed = np.linalg.norm(m @ v - v) <= 1e-9
    omega = sd.constraint("omega").S
    commutes = np.linalg.norm(omega @ np.conj(m) - m @ omega) <= 1e-9
    assert is_normalized(e) == fixed
    assert is_self_adjoint(e) == commutes
    assert is_member(realize(e)) == (fixed and commutes)
    if normalized:
        assert fixed
    if self_adjoint:
        assert commutes
    if a.dim > 1:
        # generic random tensors violate whichever condition was not imposed
        assert fixed == normalized and commutes == self_adjoint


# structure data


def test_swap_for_m2c_matches_display():
    expected = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert np.array_equal(structure_data(M2C).constraint("omega").S, expected)
    units = sum(np.kron(unit(i, j), unit(i, j).T) for i in range(2) for j in range(2))
    assert np.array_equal(swap_matrix(2), units)


def test_quaternion_constraints():
    sd = structure_data(Algebra.parse("H"))
    assert {c.name for c in sd.constraints} == {"omega", "field"}
    j_tilde = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))
    assert np.array_equal(sd.constraint("field").S, j_tilde)
    assert np.array_equal(sd.constraint("omega").S, swap_matrix(2))


def test_structure_constraints_are_involutions_or_projectors():
    for text in SINGLE + SUMS:
        sd = structure_data(algebra(text))
        for c in sd.constraints:
            s2 = c.S @ c.S
            if c.kind == "conj" and c.name == "omega":
                assert np.allclose(s2, np.eye(len(s2)))
            elif c.kind == "commute":
                assert np.allclose(s2, c.S)


def test_cn_fixed_vector_and_diagonal_swap():
    a = Algebra.parse("C^3")
    sd = structure_data(a)
    assert np.array_equal(sd.fixed_vector, v_identity(3))
    omega = sd.constraint("omega").S
    for i in range(3):
        p = i * 3 + i
        assert omega[p, p] == 1.0


def test_quaternionic_constraint_is_shuffled_blockwise_j_tilde():
    n = 2
    p = shuffle_permutation(n)
    j_tilde = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))
    field = structure_data(Algebra.matrix("H", n)).constraint("field").S
    assert np.array_equal(p.T @ np.kron(np.eye(n * n), j_tilde) @ p, field)


# membership


def test_membership_examples():
    assert is_member(PertMatrix(M2C, np.eye(4)))
    assert is_member(realize(diag_projectors()))


def test_general_4x4_form_is_member(rng):
    for _ in range(20):
        z = rng.normal(size=5) + 1j * rng.normal(size=5)
        x1, x2 = rng.normal(size=2)
        c = np.conj
        a = np.array([
            [x1, z[2], c(z[2]), 1 - x1],
            [z[0], z[1], c(z[4]), -z[0]],
            [c(z[0]), z[4], c(z[1]), -c(z[0])],
            [x2, z[3], c(z[3]), 1 - x2],
        ])
        assert is_member(PertMatrix(M2C, a))
        b = a.copy()
        b[1, 1] += 0.01
        assert not is_member(PertMatrix(M2C, b))


def test_pert_matrix_shape_checked():
    with pytest.raises(ValueError):
        PertMatrix(M2C, np.eye(3))


def test_is_member_rejects_tensor():
    with pytest.raises(TypeError):
        is_member(identity_element(M2C))


def test_tensor_factors_must_lie_in_algebra():
    with pytest.raises(ValueError):
        TensorElement(Algebra.parse("M2(R)"), (1j * np.eye(2))[None], np.eye(2)[None])


def test_multiply_algebra_mismatch():
    with pytest.raises(ValueError):
        multiply(identity_element(M2C), identity_element(Algebra.parse("M2(R)")))


# multiplication


def test_identity_is_neutral(rng):
    x = random_tensor(M2C, rng, 3, normalized=True, self_adjoint=True)
    one = identity_element(M2C)
    assert np.allclose(realize(x * one).mat, realize(x).mat)
    assert np.allclose(realize(one * x).mat, realize(x).mat)


def test_unitary_products():
    u, v = random_unitary("C", 2, 3), random_unitary("C", 2, 4)
    lhs = realize(embed_unitary(u) * embed_unitary(v)).mat
    assert np.allclose(lhs, realize(embed_unitary(u @ v)).mat, atol=1e-12)


@pytest.mark.parametrize("text", SINGLE + SUMS)
@given(seed=seeds)
def test_closure_of_tensor_members(text, seed):
    a = algebra(text)
    rng = np.random.default_rng(seed)
    x = random_tensor(a, rng, 2, normalized=True, self_adjoint=True)
    y = random_tensor(a, rng, 2, normalized=True, self_adjoint=True)
    m = realize(x * y)
    assert membership_residual(m) <= 1e-9 * max(1.0, np.abs(m.mat).max())


@pytest.mark.parametrize("text", SINGLE + SUMS)
def test_to_tensor_round_trip(text):
    a = algebra(text)
    m = sample_member(a, seed=5)
    e = to_tensor(m)
    assert len(e) <= a.dim**2 * (1 if a.is_complex else 4)
    assert np.allclose(realize(e).mat, m.mat, atol=1e-10)
    assert is_normalized(e, 1e-8) and is_self_adjoint(e, 1e-8)


def test_to_tensor_rejects_outside_span():
    bad = np.eye(16, dtype=complex)
    bad[0, 5] = 1.0
    with pytest.raises(ValueError):
        to_tensor(PertMatrix(Algebra.parse("M2(R)"), 1j * bad))


# coefficient laws for M_N(C)


def coefficients(mat, n):
    """``C[i,j,k,l]`` with ``A = sum C_{ij,kl} e_ij (x) e_kl^o``."""
    t = mat.reshape(n, n, n, n)  # t[i, l, j, k]
    return t.transpose(0, 2, 3, 1)


@pytest.mark.parametrize("n", [2, 3])
def test_coefficient_laws(n):
    a = Algebra.matrix("C", n)
    for seed in range(5):
        c = coefficients(sample_member(a, seed).mat, n)
        norm = np.einsum("ijjl->il", c)
        assert np.allclose(norm, np.eye(n))
        assert np.allclose(c, np.conj(c.transpose(3, 2, 1, 0)))


# direct sums


def test_split_identity_of_c_plus_c():
    a = Algebra.parse("C^2")
    parts, cross = split_direct_sum(PertMatrix(a, np.eye(4)))
    assert [p.mat.tolist() for p in parts] == [[[1]], [[1]]]
    assert len(cross) == 1
    # cross part of the identity is C_12 = 1 (1 = e_1 + e_2, so 1 (x) 1 has all C_ij = 1)
    assert cross[0].forward[0, 0] == 1


def test_split_c2_cross_carries_conjugate_pair():
    z = 0.3 - 1.2j
    m = pert_cn_from_coordinates([z], 2)
    parts, cross = split_direct_sum(m)
    assert all(np.array_equal(p.mat, [[1]]) for p in parts)
    assert cross[0].forward[0, 0] == z and cross[0].backward[0, 0] == np.conj(z)


def test_merge_identity_parts_zero_cross():
    a = Algebra.parse("C^2")
    one = PertMatrix(Algebra.parse("C"), np.eye(1))
    m = merge_direct_sum([one, one], [], a)
    assert is_member(m)
    assert np.array_equal(m.mat, np.diag([1, 0, 0, 1]))


def test_merge_c2_cross_value():
    a = Algebra.parse("C^2")
    one = PertMatrix(Algebra.parse("C"), np.eye(1))
    z = 0.5 + 0.5j
    m = merge_direct_sum([one, one], [CrossTerm(0, 1, np.array([[z]]), None)], a)
    assert np.isclose(pert_cn_coordinates(m)[0], z)


def test_merge_rejects_broken_linkage():
    a = Algebra.parse("C^2")
    one = PertMatrix(Algebra.parse("C"), np.eye(1))
    with pytest.raises(ValueError, match="linkage"):
        merge_direct_sum([one, one], [CrossTerm(0, 1, np.array([[1j]]), np.array([[1j]]))], a)


def test_split_rejects_non_member():
    with pytest.raises(MembershipError):
        split_direct_sum(PertMatrix(Algebra.parse("C^2"), 2 * np.eye(4)))


@pytest.mark.parametrize("text", SUMS)
def test_split_merge_round_trip(text):
    a = algebra(text)
    for seed in range(5):
        m = sample_member(a, seed)
        parts, cross = split_direct_sum(m)
        assert all(is_member(p, 1e-9) for p in parts)
        back = merge_direct_sum(parts, cross, a)
        assert np.abs(back.mat - m.mat).max() <= 1e-12


# Pert(C^N)


def test_cn_unitary_coordinates():
    lam = np.exp(1j * np.array([0.3, 1.1, -2.0]))
    a = Algebra.parse("C^3")
    e = TensorElement(a, np.diag(lam)[None], np.diag(np.conj(lam))[None])
    coords = pert_cn_coordinates(realize(e))
    expected = [lam[i] * np.conj(lam[j]) for i in range(3) for j in range(i + 1, 3)]
    assert np.allclose(coords, expected)


@given(seed=seeds)
def test_cn_product_is_componentwise(seed):
    a = Algebra.parse("C^4")
    x, y = sample_member(a, seed), sample_member(a, seed + 1)
    lhs = pert_cn_coordinates(x @ y)
    assert np.allclose(lhs, pert_cn_coordinates(x) * pert_cn_coordinates(y))


def test_cn_coordinates_round_trip():
    coords = np.array([1 + 2j, -0.5j, 3.0])
    m = pert_cn_from_coordinates(coords, 3)
    assert is_member(m)
    assert np.allclose(pert_cn_coordinates(m), coords)
    with pytest.raises(ValueError):
        pert_cn_from_coordinates(coords, 4)
    with pytest.raises(ValueError):
        pert_cn_coordinates(PertMatrix(M2C, np.eye(4)))
