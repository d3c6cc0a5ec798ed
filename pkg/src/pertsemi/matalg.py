"""Matrix arithmetic over R, C and H.

All matrices are plain complex ``numpy`` arrays. Real matrices are complex
arrays whose imaginary part is zero, and quaternionic matrices are stored
through their 2x2 complex image, so that every condition can be phrased
inside complex matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FIELDS",
    "J_HAT",
    "Quaternion",
    "adjoint",
    "kron",
    "embed_quaternion",
    "quaternion_matrix",
    "quaternion_structure",
    "is_quaternionic",
    "hermitian_eigenvalues",
]

FIELDS = ("R", "C", "H")

#: Image of the quaternion unit j; H = {A in M_2(C) : J_HAT conj(A) = A J_HAT}.
J_HAT = np.array([[0, 1], [-1, 0]], dtype=complex)
J_HAT.setflags(write=False)


def adjoint(m):
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def kron(a, b):
    """Kronecker product with row-major pair index.

    ``kron(a, b)[i*p + k, j*q + l] == a[i, j] * b[k, l]`` where ``b`` has
    shape ``(p, q)``.
    """
    return np.kron(np.asarray(a), np.asarray(b))


@dataclass(frozen=True)
class Quaternion:
    """Quaternion ``a + b i + c j + d k``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a1, b1, c1, d1 = self
            a2, b2, c2, d2 = other
            return Quaternion(
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        if isinstance(other, (int, float)):
            return Quaternion(*(other * x for x in self))
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(*(x + y for x, y in zip(self, other)))

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    def conj(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def as_matrix(self):
        return embed_quaternion(self)


def embed_quaternion(q):
    """Return ``[[alpha, beta], [-conj(beta), conj(alpha)]]``.

    Here ``alpha = a + b i`` and ``beta = c + d i``; accepts a
    :class:`Quaternion` or any length-4 sequence.
    """
    a, b, c, d = (float(x) for x in q)
    alpha = complex(a, b)
    beta = complex(c, d)
    return np.array([[alpha, beta], [-beta.conjugate(), alpha.conjugate()]])


def quaternion_matrix(coeffs):
    """Embed an ``(n, n, 4)`` array of quaternion coefficients into M_2n(C).

    Entry ``(i, j)`` occupies rows ``2i, 2i+1`` and columns ``2j, 2j+1``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.shape[0]
    alpha = coeffs[..., 0] + 1j * coeffs[..., 1]
    beta = coeffs[..., 2] + 1j * coeffs[..., 3]
    out = np.empty((n, 2, n, 2), dtype=complex)
    out[:, 0, :, 0] = alpha
    out[:, 0, :, 1] = beta
    out[:, 1, :, 0] = -np.conj(beta)
    out[:, 1, :, 1] = np.conj(alpha)
    return out.reshape(2 * n, 2 * n)


def quaternion_structure(n):
    """``I_n (x) J_HAT``, the antiunitary structure of M_n(H) inside M_2n(C)."""
    return np.kron(np.eye(n), J_HAT)


def is_quaternionic(m, tol=1e-10):
    """True if ``m`` (of even size) lies in the image of M_n(H)."""
    m = np.asarray(m)
    if m.shape[0] % 2 or m.shape[0] != m.shape[1]:
        return False
    s = quaternion_structure(m.shape[0] // 2)
    return bool(np.linalg.norm(s @ np.conj(m) - m @ s) <= tol)


def hermitian_eigenvalues(m, tol=1e-10):
    """Sorted eigenvalues of a hermitian matrix.

    Raises
    ------
    ValueError
        If ``m`` is not hermitian to within ``tol`` (scaled by its size).
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("not hermitian: matrix is not square")
    scale = max(1.0, np.abs(m).max(initial=0.0))
    if np.linalg.norm(m - adjoint(m)) > tol * scale:
        raise ValueError("not hermitian")
    return np.linalg.eigvalsh((m + adjoint(m)) / 2)
