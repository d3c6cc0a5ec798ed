"""Unitary groups U(n), O(n), Sp(n) and their image ``u -> u (x) u^{*o}`` in Pert."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra
from .canonical import block_dimensions, build_basis, canonicalize, is_invertible
from .matalg import adjoint, quaternion_matrix
from .pert import TensorElement, realize

__all__ = [
    "UnitaryElement",
    "random_unitary",
    "embed_unitary",
    "verify_rep_decomposition",
    "predicted_blocks",
]


@dataclass(frozen=True, eq=False)
class UnitaryElement:
    """A unitary element ``u`` of ``algebra`` in its defining representation."""

    algebra: Algebra
    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=complex)
        d = self.algebra.dim
        if u.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix")
        if np.linalg.norm(u @ adjoint(u) - np.eye(d)) > 1e-10:
            raise ValueError("matrix is not unitary")
        if not self.algebra.contains(u, 1e-10):
            raise ValueError(f"matrix is not in {self.algebra}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def __matmul__(self, other):
        return UnitaryElement(self.algebra, self.u @ other.u)


def _haar_qr(z):
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _quaternionic_gram_schmidt(z):
    """Orthonormalize the 2x2 block columns of an embedded quaternionic matrix.

    Inner products ``x^* y`` of block columns are themselves quaternions, so
    the projections stay inside M_n(H).
    """
    n = z.shape[0] // 2
    cols = [z[:, 2 * k:2 * k + 2].copy() for k in range(n)]
    out = []
    for y in cols:
        for x in out:
            y = y - x @ (adjoint(x) @ y)
        norm = np.sqrt((adjoint(y) @ y)[0, 0].real)
        out.append(y / norm)
    return np.hstack(out)


def random_unitary(field, n, seed=None):
    """Haar-random element of U(n), O(n) or Sp(n) (``field`` = C, R, H).

    Gaussian matrices are orthonormalized column by column; for O(n) both
    determinant components occur.
    """
    rng = np.random.default_rng(seed)
    if field == "C":
        u = _haar_qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    elif field == "R":
        u = _haar_qr(rng.normal(size=(n, n)))
    elif field == "H":
        u = _quaternionic_gram_schmidt(quaternion_matrix(rng.normal(size=(n, n, 4))))
    else:
        raise ValueError(f"unknown field {field!r}")
    return UnitaryElement(Algebra.matrix(field, n), u)


def embed_unitary(u):
    """``u (x) u^{*o}`` as a one-term tensor."""
    return TensorElement(u.algebra, u.u[None], adjoint(u.u)[None])


def predicted_blocks(field, n):
    """Sizes of the invariant blocks of ``u (x) conj(u)`` in the canonical basis."""
    dims = block_dimensions(field, n)
    sizes = [1] + [dims[k] for k in list(dims)[1:]]
    return tuple(s for s in sizes if s)


def verify_rep_decomposition(field, n, samples=10, seed=None):
    """Check that embedded unitaries are block diagonal in the canonical basis.

    For each sample the canonical form must fix the trivial direction (first
    row and column ``e_1``) and vanish outside the diagonal blocks predicted
    for ``u (x) conj(u)``: ``(1, n^2-1)`` for U(n), ``(1, (n+2)(n-1)/2,
    n(n-1)/2)`` for O(n) and ``(1, (2n+1)(n-1), n(2n+1))`` for Sp(n).
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    sizes = predicted_blocks(field, n)
    edges = np.cumsum((0,) + sizes)
    total = int(edges[-1])
    mask = np.zeros((total, total), dtype=bool)
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask[lo:hi, lo:hi] = True
    rng = np.random.default_rng(seed)
    off_block = 0.0
    structure = 0.0
    invertible = True
    for _ in range(samples):
        u = random_unitary(field, n, rng.integers(2**63))
        c = canonicalize(realize(embed_unitary(u)))
        off_block = max(off_block, float(np.abs(c.matrix[~mask]).max(initial=0.0)))
        structure = max(structure, c.residual)
        invertible = invertible and is_invertible(c)
    report = {
        "field": field,
        "n": n,
        "group": {"C": "U", "R": "O", "H": "Sp"}[field] + f"({n})",
        "samples": samples,
        "blocks": list(sizes),
        "max_off_block_residual": off_block,
        "max_structure_residual": structure,
        "all_invertible": invertible,
    }
    basis = build_basis(Algebra.matrix(field, n))
    if basis.joint_sizes is not None:
        report["joint_blocks"] = list(basis.joint_sizes)
    return report
