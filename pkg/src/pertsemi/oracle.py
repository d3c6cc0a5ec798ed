"""Brute-force dimension and membership oracle.

Works directly from the definition: a general element of A (x) A^o is
``sum_pq c_pq alpha_p (x) alpha_q^o`` over a real basis ``alpha`` of A, and
both defining conditions are real-linear in the coefficients ``c``. Nothing
here uses the swap/structure matrices of :mod:`pertsemi.pert`; the basis of
A is built from scratch as well.

The realized set ``{realize(c) : c satisfies the conditions}`` is an affine
space. Its dimension is ``rank([H; R]) - rank(H)``, where ``H`` stacks the
homogeneous conditions and ``R`` is the realization map, because realization
need not be injective (e.g. for complex blocks of a real algebra).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ConstraintSystem",
    "OracleCostError",
    "constraint_system",
    "affine_dimension",
    "residual",
    "rank",
    "count_below",
    "eigenvalues_by_bisection",
    "MAX_DIM",
]

MAX_DIM = 8
RANK_TOL = 1e-8


class OracleCostError(ValueError):
    pass


def rank(m, tol=RANK_TOL):
    """Numerical rank by Gaussian elimination with partial pivoting.

    Rows are scaled to unit max-norm first; a column whose best remaining
    pivot is below ``tol`` is skipped.
    """
    a = np.array(m, dtype=float)
    norms = np.abs(a).max(axis=1, initial=0.0)
    a = a[norms > 0] / norms[norms > 0, None]
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[pivot, c]) < tol:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        below = a[r + 1:, c] / a[r, c]
        a[r + 1:, c:] -= np.outer(below, a[r, c:])
        r += 1
    return r


def _unit(d, i, j, value=1.0):
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = value
    return m


def _algebra_basis(algebra):
    """Real spanning basis of A, built independently of :meth:`Algebra.basis`."""
    d = algebra.dim
    quat = [
        np.array([[1, 0], [0, 1]], dtype=complex),
        np.array([[1j, 0], [0, -1j]]),
        np.array([[0, 1], [-1, 0]], dtype=complex),
        np.array([[0, 1j], [1j, 0]]),
    ]
    out = []
    off = 0
    for block in algebra.blocks:
        if block.field == "H":
            for i in range(block.n):
                for j in range(block.n):
                    for q in quat:
                        m = np.zeros((d, d), dtype=complex)
                        r, c = off + 2 * i, off + 2 * j
                        m[r:r + 2, c:c + 2] = q
                        out.append(m)
            off += 2 * block.n
            continue
        for i in range(block.n):
            for j in range(block.n):
                out.append(_unit(d, off + i, off + j))
                if block.field == "C":
                    out.append(_unit(d, off + i, off + j, 1j))
        off += block.n
    return out


def _as_real(z):
    z = np.asarray(z).reshape(-1)
    return np.concatenate([z.real, z.imag])


def _realized(a, b):
    """Entries ``[(i,k),(j,l)] = a_ij b_lk`` of the realization of ``a (x) b^o``."""
    d = a.shape[0]
    return np.einsum("ij,lk->ikjl", a, b).reshape(d * d, d * d)


def _star(x, d):
    """Realization of the star image: ``[(i,k),(j,l)] -> conj(x[(k,i),(l,j)])``."""
    t = np.asarray(x).reshape(d, d, d, d)
    return np.conj(t.transpose(1, 0, 3, 2)).reshape(d * d, d * d)


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Real-linear conditions on the coefficients ``c_pq``.

    ``normalization @ c == rhs`` (sum a_j b_j = 1), ``self_adjoint @ c == 0``,
    and ``realization @ c`` gives the realized matrix as real coordinates.
    """

    algebra: object
    normalization: np.ndarray
    rhs: np.ndarray
    self_adjoint: np.ndarray
    realization: np.ndarray

    @property
    def homogeneous(self):
        return np.vstack([self.normalization, self.self_adjoint])


@lru_cache(maxsize=None)
def constraint_system(algebra):
    d = algebra.dim
    if d > MAX_DIM:
        raise OracleCostError(f"oracle is limited to d <= {MAX_DIM}, got d = {d}")
    basis = _algebra_basis(algebra)
    norm_cols, sa_cols, real_cols = [], [], []
    for a in basis:
        for b in basis:
            x = _realized(a, b)
            norm_cols.append(_as_real(a @ b))
            sa_cols.append(_as_real(x - _star(x, d)))
            real_cols.append(_as_real(x))
    return ConstraintSystem(
        algebra,
        np.array(norm_cols).T,
        _as_real(np.eye(d)),
        np.array(sa_cols).T,
        np.array(real_cols).T,
    )


def affine_dimension(algebra):
    """Real dimension of realized Pert(A), computed by elimination."""
    system = constraint_system(algebra)
    h = system.homogeneous
    return rank(np.vstack([h, system.realization])) - rank(h)


@lru_cache(maxsize=None)
def _span_projector(algebra):
    """Orthonormal basis of the realized image of A (x) A^o (real coordinates)."""
    r = constraint_system(algebra).realization
    u, s, _ = np.linalg.svd(r, full_matrices=False)
    return u[:, s > 1e-10 * s.max()]


def residual(m):
    """Largest violation of the defining conditions at a realized matrix.

    The max of: distance to the realized image of A (x) A^o, failure to fix
    ``sum_p e_p (x) e_p`` and failure to equal the star image (all max-norm).
    """
    algebra = m.algebra
    d = algebra.dim
    x = np.asarray(m.mat)
    u = _span_projector(algebra)
    flat = _as_real(x)
    outside = flat - u @ (u.T @ flat)
    v = np.eye(d).reshape(-1)
    return float(max(
        np.abs(outside).max(initial=0.0),
        np.abs(x @ v - v).max(initial=0.0),
        np.abs(x - _star(x, d)).max(initial=0.0),
    ))


def count_below(h, x):
    """Number of eigenvalues of hermitian ``h`` strictly below ``x``.

    By Sylvester's law of inertia this is the number of negative pivots of
    ``h - x I`` under symmetric elimination. A vanishing pivot is nudged to
    a tiny positive value, which only matters when ``x`` is an eigenvalue.
    """
    a = np.array(h, dtype=complex) - x * np.eye(len(h))
    tiny = 1e-300 + np.finfo(float).eps * max(1.0, np.abs(a).max(initial=0.0)) * 1e-6
    negatives = 0
    for k in range(len(a)):
        pivot = a[k, k].real
        if abs(pivot) < tiny:
            pivot = tiny
        if pivot < 0:
            negatives += 1
        col = a[k + 1:, k] / pivot
        a[k + 1:, k + 1:] -= np.outer(col, a[k, k + 1:])
    return negatives


def eigenvalues_by_bisection(h, tol=1e-12):
    """Ascending eigenvalues of hermitian ``h`` by bisecting the inertia count."""
    h = np.asarray(h, dtype=complex)
    n = len(h)
    if n == 0:
        return []
    radius = np.abs(h).sum(axis=1).max()
    lo, hi = -radius - 1.0, radius + 1.0
    out = []
    for k in range(n):
        a, b = lo, hi
        while b - a > tol * max(1.0, abs(a), abs(b)):
            mid = 0.5 * (a + b)
            if count_below(h, mid) > k:
                b = mid
            else:
                a = mid
        out.append(float(0.5 * (a + b)))
    return out
