"""Elements of A (x) A^o, the perturbation semigroup Pert(A), and direct sums.

A tensor ``sum_j a_j (x) b_j^o`` is realized as the ``d^2 x d^2`` matrix
``sum_j kron(a_j, b_j.T)`` acting on C^d (x) C^d with row-major pair index
``(p, q) -> p*d + q``. Realization is multiplicative, and the two defining
conditions of Pert(A) become

* normalization: the matrix fixes ``v_I = sum_p e_p (x) e_p``;
* self-adjointness: ``swap @ conj(A) == A @ swap``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import Algebra

__all__ = [
    "TensorElement",
    "PertMatrix",
    "Constraint",
    "StructureData",
    "CrossTerm",
    "MembershipError",
    "identity_element",
    "multiply",
    "realize",
    "star_image",
    "is_normalized",
    "is_self_adjoint",
    "structure_data",
    "swap_matrix",
    "shuffle_permutation",
    "is_member",
    "membership_residual",
    "to_tensor",
    "random_tensor",
    "split_direct_sum",
    "merge_direct_sum",
    "pert_cn_coordinates",
    "pert_cn_from_coordinates",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9


class MembershipError(ValueError):
    """Raised when an operation requires an element of Pert(A)."""


@dataclass(frozen=True, eq=False)
class TensorElement:
    """Finite sum ``sum_j left[j] (x) right[j]^o`` of algebra elements."""

    algebra: Algebra
    left: np.ndarray
    right: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        d = self.algebra.dim
        left = np.asarray(self.left, dtype=complex).reshape(-1, d, d)
        right = np.asarray(self.right, dtype=complex).reshape(-1, d, d)
        if left.shape != right.shape:
            raise ValueError("left and right factors must pair up")
        if self.check:
            for a in (*left, *right):
                if not self.algebra.contains(a):
                    raise ValueError(f"tensor factor is not an element of {self.algebra}")
        left.setflags(write=False)
        right.setflags(write=False)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def from_terms(cls, algebra, terms):
        terms = list(terms)
        return cls(algebra, np.array([a for a, _ in terms]), np.array([b for _, b in terms]))

    @property
    def terms(self):
        return list(zip(self.left, self.right))

    def __len__(self):
        return self.left.shape[0]

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return multiply(self, other)

    def realize(self):
        return realize(self)


@dataclass(frozen=True, eq=False)
class PertMatrix:
    """A realized element of A (x) A^o as a ``d^2 x d^2`` matrix."""

    algebra: Algebra
    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        d2 = self.algebra.dim**2
        if mat.shape != (d2, d2):
            raise ValueError(f"expected a {d2}x{d2} matrix for {self.algebra}, got {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    def __matmul__(self, other):
        if not isinstance(other, PertMatrix):
            return NotImplemented
        _same_algebra(self.algebra, other.algebra)
        return PertMatrix(self.algebra, self.mat @ other.mat)


def _same_algebra(x, y):
    if x != y:
        raise ValueError(f"algebra mismatch: {x} vs {y}")


def identity_element(algebra):
    eye = np.eye(algebra.dim, dtype=complex)
    return TensorElement(algebra, eye[None], eye[None])


def multiply(x, y):
    """``(sum a_j (x) a~_j^o)(sum b_k (x) b~_k^o) = sum a_j b_k (x) (b~_k a~_j)^o``."""
    _same_algebra(x.algebra, y.algebra)
    d = x.algebra.dim
    left = np.einsum("jab,kbc->jkac", x.left, y.left).reshape(-1, d, d)
    right = np.einsum("kab,jbc->jkac", y.right, x.right).reshape(-1, d, d)
    return TensorElement(x.algebra, left, right, check=False)


def realize(e):
    """``sum_j kron(a_j, b_j.T)`` wrapped as a :class:`PertMatrix`."""
    d = e.algebra.dim
    mat = np.einsum("tij,tlk->ikjl", e.left, e.right).reshape(d * d, d * d)
    return PertMatrix(e.algebra, mat)


def star_image(e):
    """``sum_j b_j^* (x) a_j^{*o}``."""
    left = np.conj(np.swapaxes(e.right, 1, 2))
    right = np.conj(np.swapaxes(e.left, 1, 2))
    return TensorElement(e.algebra, left, right, check=False)


def is_normalized(e, tol=DEFAULT_TOL):
    """``sum_j a_j b_j == 1`` in Frobenius norm."""
    total = np.einsum("tij,tjk->ik", e.left, e.right)
    return bool(np.linalg.norm(total - np.eye(e.algebra.dim)) <= tol)


def is_self_adjoint(e, tol=DEFAULT_TOL):
    # Sum representations are not unique, so compare realizations.
    diff = realize(e).mat - realize(star_image(e)).mat
    return bool(np.linalg.norm(diff) <= tol)


def swap_matrix(d):
    """Flip ``e_p (x) e_q -> e_q (x) e_p``; the realization of ``sum e_ij (x) e_ij^o``."""
    idx = np.arange(d * d).reshape(d, d)
    out = np.zeros((d * d, d * d))
    out[idx.T.ravel(), idx.ravel()] = 1.0
    return out


def shuffle_permutation(n):
    """Permutation matrix taking (C^n (x) C^2) (x) (C^n (x) C^2) to (C^n (x) C^n) (x) (C^2 (x) C^2).

    Natural index ``(2i+a)*2n + 2j+b`` maps to ``(i*n + j)*4 + 2a + b``.
    """
    size = 4 * n * n
    natural = np.arange(size).reshape(n, 2, n, 2)
    shuffled = natural.transpose(0, 2, 1, 3).ravel()
    out = np.zeros((size, size))
    out[np.arange(size), shuffled] = 1.0
    return out


@dataclass(frozen=True)
class Constraint:
    """``S conj(A) == A S`` (``kind="conj"``) or ``S A == A S`` (``kind="commute"``)."""

    S: np.ndarray
    kind: str
    name: str

    def residual(self, mat):
        lhs = self.S @ (np.conj(mat) if self.kind == "conj" else mat)
        return float(np.linalg.norm(lhs - mat @ self.S))


@dataclass(frozen=True)
class StructureData:
    algebra: Algebra
    fixed_vector: np.ndarray
    constraints: tuple[Constraint, ...]

    def constraint(self, name):
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)


def _pair_blocks(algebra):
    """Index arrays of the pair blocks ``C^{d_i} (x) C^{d_j}`` inside C^d (x) C^d."""
    d = algebra.dim
    out = {}
    for i in range(len(algebra.blocks)):
        for j in range(len(algebra.blocks)):
            rows = np.arange(d)[algebra.block_slice(i)]
            cols = np.arange(d)[algebra.block_slice(j)]
            out[i, j] = (rows[:, None] * d + cols[None, :]).ravel()
    return out


@lru_cache(maxsize=None)
def structure_data(algebra):
    """Fixed vector and commutation constraints cutting out realized Pert(A).

    Constraints, in order:

    * ``omega``: the swap, encoding self-adjointness;
    * ``field`` (if some block is real or quaternionic): ``kron(S, S.T)`` with
      ``S`` from :attr:`Algebra.real_structure`. For ``M_n(H)`` this is the
      natural-order form of ``I_{n^2} (x) J~``;
    * ``pair(i,j)`` (direct sums only): projectors onto the pair blocks,
      forcing the realized matrix to be block diagonal.
    """
    d = algebra.dim
    fixed = np.eye(d).ravel().astype(complex)
    constraints = [Constraint(swap_matrix(d), "conj", "omega")]
    if not algebra.is_complex:
        s = algebra.real_structure
        constraints.append(Constraint(np.kron(s, s.T).real + 0.0, "conj", "field"))
    if len(algebra.blocks) > 1:
        for (i, j), idx in _pair_blocks(algebra).items():
            p = np.zeros((d * d, d * d))
            p[idx, idx] = 1.0
            constraints.append(Constraint(p, "commute", f"pair({i},{j})"))
    for c in constraints:
        c.S.setflags(write=False)
    fixed.setflags(write=False)
    return StructureData(algebra, fixed, tuple(constraints))


def membership_residual(m):
    """Largest violation among the fixed-vector and structure conditions."""
    sd = structure_data(m.algebra)
    worst = float(np.linalg.norm(m.mat @ sd.fixed_vector - sd.fixed_vector))
    for c in sd.constraints:
        worst = max(worst, c.residual(m.mat))
    return worst


def is_member(m, tol=DEFAULT_TOL):
    if not isinstance(m, PertMatrix):
        raise TypeError("is_member expects a PertMatrix")
    return membership_residual(m) <= tol


@lru_cache(maxsize=None)
def _tensor_solver(algebra):
    """Realized basis tensors and their pseudo-inverse for :func:`to_tensor`."""
    basis = algebra.basis()
    k = len(basis)
    d = algebra.dim
    real = not algebra.is_complex
    cols = np.einsum("pij,qlk->pqikjl", basis, basis).reshape(k * k, d**4)
    if real:
        design = np.concatenate([cols.real, cols.imag], axis=1).T
    else:
        design = cols.T
    return basis, np.linalg.pinv(design, rcond=1e-10)


def to_tensor(m, tol=1e-8):
    """Write a realized element as a short sum of algebra tensors.

    Coefficients on the product basis are recovered by least squares and
    compressed with an SVD, giving at most ``dim(A)`` terms (over R for real
    algebras, over C for complex ones).
    """
    basis, pinv = _tensor_solver(m.algebra)
    k = len(basis)
    flat = m.mat.reshape(-1)
    if m.algebra.is_complex:
        coeff = pinv @ flat
    else:
        coeff = pinv @ np.concatenate([flat.real, flat.imag])
    u, s, vh = np.linalg.svd(coeff.reshape(k, k))
    keep = s > 1e-13 * max(1.0, s.max(initial=0.0))
    left = np.einsum("pt,pij->tij", u[:, keep] * s[keep], basis)
    right = np.einsum("tq,qij->tij", vh[keep], basis)
    e = TensorElement(m.algebra, left, right, check=False)
    if np.linalg.norm(realize(e).mat - m.mat) > tol * max(1.0, np.abs(m.mat).max()):
        raise ValueError(f"matrix is not in the realization of {m.algebra} (x) its opposite")
    return e


def random_tensor(algebra, rng, terms=3, normalized=False, self_adjoint=False, scale=1.0):
    """Random element of A (x) A^o, optionally forced to satisfy either condition.

    Self-adjointness is imposed by adding the star image. Normalization adds
    ``r (x) 1`` with ``r = 1 - sum a_j b_j``, or ``r/2 (x) 1 + 1 (x) (r/2)^o``
    when the element is self-adjoint (``r`` is hermitian then).
    """
    left = np.array([algebra.random_element(rng, scale) for _ in range(terms)])
    right = np.array([algebra.random_element(rng, scale) for _ in range(terms)])
    e = TensorElement(algebra, left, right, check=False)
    if self_adjoint:
        s = star_image(e)
        e = TensorElement(
            algebra,
            np.concatenate([e.left, s.left]) / np.sqrt(2),
            np.concatenate([e.right, s.right]) / np.sqrt(2),
            check=False,
        )
    if normalized:
        eye = np.eye(algebra.dim, dtype=complex)
        # For self-adjoint e, sum a_j b_j is hermitian and the correction
        # r/2 (x) 1 + 1 (x) r/2 is self-adjoint again.
        r = eye - np.einsum("tij,tjk->ik", e.left, e.right)
        if self_adjoint:
            extra_left = np.array([r / 2, eye])
            extra_right = np.array([eye, r / 2])
        else:
            extra_left, extra_right = r[None], eye[None]
        e = TensorElement(
            algebra,
            np.concatenate([e.left, extra_left]),
            np.concatenate([e.right, extra_right]),
            check=False,
        )
    return e


@dataclass(frozen=True, eq=False)
class CrossTerm:
    """Off-diagonal pair blocks ``A_i (x) A_j^o`` and ``A_j (x) A_i^o`` of a direct sum."""

    i: int
    j: int
    forward: np.ndarray
    backward: np.ndarray


def _linked(forward, di, dj):
    """The block of ``A_j (x) A_i^o`` forced by self-adjointness of ``forward``."""
    t = np.asarray(forward).reshape(di, dj, di, dj)
    return np.conj(t.transpose(1, 0, 3, 2)).reshape(di * dj, di * dj)


def split_direct_sum(m, tol=DEFAULT_TOL):
    """Split ``Pert(A_1 + ... + A_k)`` into per-block members and cross terms.

    Returns ``(parts, cross)``: ``parts[i]`` is a :class:`PertMatrix` of
    ``Pert(A_i)`` and ``cross`` lists a :class:`CrossTerm` for each ``i < j``.
    """
    algebra = m.algebra
    if len(algebra.blocks) < 2:
        raise ValueError("split_direct_sum needs at least two blocks")
    if not is_member(m, tol):
        raise MembershipError("element is not in the perturbation semigroup")
    pairs = _pair_blocks(algebra)
    parts, cross = [], []
    k = len(algebra.blocks)
    for i in range(k):
        idx = pairs[i, i]
        parts.append(PertMatrix(algebra.sub_algebra(i), m.mat[np.ix_(idx, idx)]))
    for i in range(k):
        for j in range(i + 1, k):
            fwd, bwd = pairs[i, j], pairs[j, i]
            cross.append(CrossTerm(i, j, m.mat[np.ix_(fwd, fwd)], m.mat[np.ix_(bwd, bwd)]))
    return parts, cross


def merge_direct_sum(parts, cross, algebra, tol=DEFAULT_TOL):
    """Inverse of :func:`split_direct_sum`.

    ``cross`` may be a list of :class:`CrossTerm`; missing pairs are zero. A
    ``CrossTerm`` with ``backward=None`` gets its linked block filled in.
    """
    k = len(algebra.blocks)
    if len(parts) != k:
        raise ValueError(f"expected {k} parts, got {len(parts)}")
    d = algebra.dim
    pairs = _pair_blocks(algebra)
    mat = np.zeros((d * d, d * d), dtype=complex)
    for i, part in enumerate(parts):
        _same_algebra(part.algebra, algebra.sub_algebra(i))
        if not is_member(part, tol):
            raise MembershipError(f"part {i} is not in Pert({part.algebra})")
        idx = pairs[i, i]
        mat[np.ix_(idx, idx)] = part.mat
    for term in cross:
        i, j = term.i, term.j
        di, dj = algebra.blocks[i].dim, algebra.blocks[j].dim
        linked = _linked(term.forward, di, dj)
        backward = linked if term.backward is None else np.asarray(term.backward)
        scale = max(1.0, np.abs(linked).max(initial=0.0))
        if np.abs(backward - linked).max(initial=0.0) > tol * scale:
            raise ValueError(f"cross term ({i},{j}) violates the self-adjointness linkage")
        mat[np.ix_(pairs[i, j], pairs[i, j])] = term.forward
        mat[np.ix_(pairs[j, i], pairs[j, i])] = backward
    out = PertMatrix(algebra, mat)
    if not is_member(out, tol * max(1.0, np.abs(mat).max())):
        raise MembershipError("cross terms violate the field constraints")
    return out


def _check_cn(algebra):
    if not all(b.field == "C" and b.n == 1 for b in algebra.blocks):
        raise ValueError(f"{algebra} is not of the form C^N")


def pert_cn_coordinates(m, tol=DEFAULT_TOL):
    """Coordinates ``C_ij`` (``i < j``, lexicographic) of an element of Pert(C^N)."""
    _check_cn(m.algebra)
    if not is_member(m, tol):
        raise MembershipError("element is not in Pert(C^N)")
    n = m.algebra.dim
    diag = np.diag(m.mat).reshape(n, n)
    iu = np.triu_indices(n, 1)
    return diag[iu].copy()


def pert_cn_from_coordinates(coords, n):
    """Element of Pert(C^n) with ``C_ii = 1``, ``C_ij = coords``, ``C_ji = conj(C_ij)``."""
    coords = np.asarray(coords, dtype=complex)
    if coords.shape != (n * (n - 1) // 2,):
        raise ValueError(f"Pert(C^{n}) has {n * (n - 1) // 2} coordinates")
    c = np.ones((n, n), dtype=complex)
    iu = np.triu_indices(n, 1)
    c[iu] = coords
    c[iu[1], iu[0]] = np.conj(coords)
    return PertMatrix(Algebra.diagonal(n), np.diag(c.ravel()))
