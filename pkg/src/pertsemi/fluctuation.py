"""Inner fluctuations ``D -> sum_j a_j D b_j`` of finite Dirac operators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matalg import adjoint
from .pert import (
    DEFAULT_TOL,
    MembershipError,
    PertMatrix,
    is_member,
    multiply,
    realize,
)

__all__ = ["DiracOperator", "fluctuate", "action_composition_check", "random_dirac"]


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """Hermitian ``D`` on C^d (x) C^m, where the algebra acts on the first factor."""

    D: np.ndarray

    def __post_init__(self):
        D = np.array(self.D, dtype=complex)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError("Dirac operator must be square")
        if np.linalg.norm(D - adjoint(D)) > 1e-10 * max(1.0, np.abs(D).max(initial=0.0)):
            raise ValueError("Dirac operator must be hermitian")
        D.setflags(write=False)
        object.__setattr__(self, "D", D)

    @property
    def dim(self):
        return self.D.shape[0]

    def spectrum(self):
        return np.linalg.eigvalsh(self.D)


def random_dirac(dim, rng, scale=1.0):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return DiracOperator(scale * (x + adjoint(x)) / 2)


def _operator(D, check):
    if isinstance(D, DiracOperator):
        return D.D
    D = np.asarray(D, dtype=complex)
    if check:
        DiracOperator(D)
    return D


def fluctuate(e, D, tol=DEFAULT_TOL, force=False):
    """Return ``sum_j a_j D b_j`` as an array.

    ``e`` is a :class:`TensorElement` (or a :class:`PertMatrix`, acting on
    the row-major ``vec(D)``). When ``D`` has size ``d*m`` the algebra acts
    as ``a (x) 1_m``. Non-members are rejected unless ``force`` is set, since
    the result is only guaranteed hermitian for members of Pert.
    """
    mat = _operator(D, check=not force)
    m = e if isinstance(e, PertMatrix) else realize(e)
    if not force and not is_member(m, tol * max(1.0, np.abs(m.mat).max())):
        raise MembershipError("element is not in the perturbation semigroup")
    d = e.algebra.dim
    if mat.shape[0] % d:
        raise ValueError(f"Dirac operator size {mat.shape[0]} is not a multiple of {d}")
    mult = mat.shape[0] // d
    if isinstance(e, PertMatrix):
        if mult != 1:
            raise ValueError("matrix form acts only without multiplicity; pass a TensorElement")
        return (m.mat @ mat.reshape(-1)).reshape(d, d)
    eye = np.eye(mult)
    left = np.einsum("tij,kl->tikjl", e.left, eye).reshape(len(e), d * mult, d * mult)
    right = np.einsum("tij,kl->tikjl", e.right, eye).reshape(len(e), d * mult, d * mult)
    return np.einsum("tij,jk,tkl->il", left, mat, right)


def action_composition_check(x, y, D, tol=DEFAULT_TOL):
    """``fluctuate(x*y, D) == fluctuate(x, fluctuate(y, D))`` within ``tol``."""
    lhs = fluctuate(multiply(x, y), D, tol)
    rhs = fluctuate(x, fluctuate(y, D, tol), tol)
    scale = max(1.0, np.abs(lhs).max())
    return bool(np.abs(lhs - rhs).max() <= tol * scale)
