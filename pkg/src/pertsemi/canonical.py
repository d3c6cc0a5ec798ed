"""Canonical block forms of Pert(M_n(F)) for F = C, R, H.

A real orthonormal eigenbasis ``Q`` of the swap (jointly with the
quaternionic structure ``L~`` for F = H) turns the membership conditions
into commutation with diagonal sign matrices. In that basis every member
has the shape

* ``F = C``: ``[[1, v], [0, B]]``, ``conj(v) = v W``, ``W conj(B) = B W``
  with ``W = diag(I_{(n+2)(n-1)/2}, -I_{n(n-1)/2})``;
* ``F = R``: ``[[1, v1, 0], [0, B1, 0], [0, 0, B2]]``, all real;
* ``F = H``: ``[[1, v, 0], [0, B, 0], [0, 0, C]]`` with sign matrices
  ``Psi = diag(I_{n^2-1}, -I_{n(n-1)})`` for ``v, B`` and
  ``Theta = diag(-I_{n^2}, I_{n(n+1)})`` for ``C``.

Each admissible entry is either real or purely imaginary, so members are
parametrized by real vectors; :func:`sample_member` and
:func:`block_parameters` are mutually inverse on that parametrization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import Algebra
from .pert import (
    DEFAULT_TOL,
    CrossTerm,
    MembershipError,
    PertMatrix,
    is_member,
    merge_direct_sum,
    split_direct_sum,
    structure_data,
)

__all__ = [
    "CanonicalBasis",
    "CanonicalForm",
    "CanonicalStructureError",
    "build_basis",
    "canonicalize",
    "canonicalize_parts",
    "block_parameters",
    "assemble",
    "block_dimensions",
    "closed_form_dimensions",
    "decomposition_report",
    "semidirect_multiply",
    "semidirect_law_residuals",
    "is_invertible",
    "sample_member",
    "structure_signatures",
    "basis_residuals",
    "SEMIDIRECT_LAW",
]

SEMIDIRECT_LAW = "(v, B)(v', B') = (v' + v B', B B')"


class CanonicalStructureError(ValueError):
    pass


def _single_block(algebra):
    if len(algebra.blocks) != 1:
        raise ValueError(f"{algebra} is a direct sum; treat its blocks separately")
    return algebra.blocks[0]


@dataclass(frozen=True, eq=False)
class CanonicalBasis:
    """Ordered real eigenbasis; column 0 is ``v_I / sqrt(d)``."""

    algebra: Algebra
    Q: np.ndarray
    omega: np.ndarray
    L: np.ndarray | None = None
    joint_sizes: tuple[int, ...] | None = None

    @property
    def case(self):
        return _single_block(self.algebra).field


def _mn_basis(n):
    """Eigenvectors of the swap on C^n (x) C^n as ``n x n`` arrays.

    Returns ``(symmetric, antisymmetric)``; the symmetric list starts with
    the normalized identity followed by Helmert vectors on the diagonal.
    """
    sym = [np.eye(n) / np.sqrt(n)]
    for k in range(1, n):
        x = np.zeros((n, n))
        x[np.arange(k), np.arange(k)] = 1.0
        x[k, k] = -k
        sym.append(x / np.sqrt(k * (k + 1)))
    anti = []
    for i in range(n):
        for j in range(i + 1, n):
            x = np.zeros((n, n))
            x[i, j] = x[j, i] = 1 / np.sqrt(2)
            sym.append(x)
            y = np.zeros((n, n))
            y[i, j], y[j, i] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            anti.append(y)
    return sym, anti


_Y = {
    "y1": np.array([[1.0, 0.0], [0.0, 1.0]]) / np.sqrt(2),  # (omega, L) = (+, -)
    "y2": np.array([[1.0, 0.0], [0.0, -1.0]]) / np.sqrt(2),  # (+, +)
    "y3": np.array([[0.0, 1.0], [1.0, 0.0]]) / np.sqrt(2),  # (+, +)
    "y4": np.array([[0.0, 1.0], [-1.0, 0.0]]) / np.sqrt(2),  # (-, -)
}


def _natural(x, y):
    """Vector of ``x (x) y`` (shuffled order) re-indexed to (C^n (x) C^2)^(x)2."""
    return np.einsum("ij,ab->iajb", x, y).ravel()


@lru_cache(maxsize=None)
def build_basis(algebra):
    """Eigenbasis of the swap (and of ``L~`` for quaternionic blocks).

    For ``M_n(C)`` and ``M_n(R)`` the columns are: the normalized fixed
    vector, Helmert vectors, symmetric off-diagonal, antisymmetric
    off-diagonal tensors. For ``M_n(H)`` columns are grouped by joint
    (swap, L) eigenvalue in the order (+,-), (-,+), (-,-), (+,+), with the
    fixed vector first.
    """
    block = _single_block(algebra)
    n = block.n
    sym, anti = _mn_basis(n)
    if block.field in "CR":
        cols = [x.ravel() for x in sym + anti]
        omega = np.r_[np.ones(len(sym)), -np.ones(len(anti))]
        basis = CanonicalBasis(algebra, np.array(cols).T, omega)
    else:
        groups = [
            [_natural(x, _Y["y1"]) for x in sym] + [_natural(x, _Y["y4"]) for x in anti],
            [_natural(x, _Y[y]) for y in ("y2", "y3") for x in anti],
            [_natural(x, _Y["y4"]) for x in sym] + [_natural(x, _Y["y1"]) for x in anti],
            [_natural(x, _Y[y]) for y in ("y2", "y3") for x in sym],
        ]
        signs = [(1, -1), (-1, 1), (-1, -1), (1, 1)]
        cols = [c for g in groups for c in g]
        omega = np.concatenate([np.full(len(g), s[0]) for g, s in zip(groups, signs)])
        L = np.concatenate([np.full(len(g), s[1]) for g, s in zip(groups, signs)])
        basis = CanonicalBasis(
            algebra, np.array(cols).T, omega.astype(float), L.astype(float),
            tuple(len(g) for g in groups),
        )
    for arr in (basis.Q, basis.omega, basis.L):
        if arr is not None:
            arr.setflags(write=False)
    return basis


def block_dimensions(field_tag, n):
    """Sizes of the vector part and square blocks of the canonical form."""
    if field_tag == "C":
        m = n * n - 1
        return {"v": m, "B": m}
    if field_tag == "R":
        p, q = (n - 1) * (n + 2) // 2, n * (n - 1) // 2
        return {"v1": p, "B1": p, "B2": q}
    r, s = (2 * n + 1) * (n - 1), n * (2 * n + 1)
    return {"v": r, "B": r, "C": s}


def _signatures(basis):
    """Sign vectors governing the vector part and each square block."""
    case = basis.case
    n = _single_block(basis.algebra).n
    dims = block_dimensions(case, n)
    if case == "C":
        w = basis.omega[1:]
        return {"v": w, "B": w}
    if case == "R":
        return {"v1": np.ones(dims["v1"]), "B1": np.ones(dims["B1"]), "B2": np.ones(dims["B2"])}
    psi = ((basis.omega - basis.L) / 2)[1:1 + dims["v"]]
    theta = ((basis.omega + basis.L) / 2)[1 + dims["v"]:]
    return {"v": psi, "B": psi, "C": theta}


def _layout(basis):
    """``(name, rows, cols, phase)`` for each free piece of the canonical form."""
    case = basis.case
    dims = block_dimensions(case, _single_block(basis.algebra).n)
    sig = _signatures(basis)
    names = list(dims)
    vec_name, square = names[0], names[1:]
    pieces = []
    start = 1
    sl = slice(1, 1 + dims[vec_name])
    pieces.append((vec_name, 0, sl, np.where(sig[vec_name] > 0, 1.0, 1j)))
    for name in square:
        sl = slice(start, start + dims[name])
        s = sig[name]
        pieces.append((name, sl, sl, np.where(np.outer(s, s) > 0, 1.0, 1j)))
        start += dims[name]
    return pieces


def assemble(algebra, params):
    """Canonical-basis matrix with the given real block parameters."""
    basis = build_basis(algebra)
    size = basis.Q.shape[0]
    a = np.zeros((size, size), dtype=complex)
    a[0, 0] = 1.0
    params = np.asarray(params, dtype=float)
    pos = 0
    for _, rows, cols, phase in _layout(basis):
        k = phase.size
        a[rows, cols] = params[pos:pos + k].reshape(phase.shape) * phase
        pos += k
    if pos != params.size:
        raise ValueError(f"expected {pos} parameters for {algebra}, got {params.size}")
    return a


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    algebra: Algebra
    case: str
    matrix: np.ndarray
    blocks: dict = field(default_factory=dict)
    dims: dict = field(default_factory=dict)
    residual: float = 0.0


def canonicalize(m, tol=DEFAULT_TOL):
    """Change ``m`` to the canonical basis and extract its blocks.

    Raises
    ------
    MembershipError
        If ``m`` is not a member.
    CanonicalStructureError
        If the transformed matrix leaves the predicted pattern by more than
        ``tol`` (relative to its largest entry).
    """
    block = _single_block(m.algebra)
    if not is_member(m, tol * max(1.0, np.abs(m.mat).max())):
        raise MembershipError("element is not in the perturbation semigroup")
    basis = build_basis(m.algebra)
    a = basis.Q.T @ m.mat @ basis.Q
    blocks = {}
    for name, rows, cols, phase in _layout(basis):
        blocks[name] = a[rows, cols].copy()
    residual = float(np.abs(a - assemble(m.algebra, _params_of(a, basis))).max())
    if residual > tol * max(1.0, np.abs(a).max()):
        raise CanonicalStructureError(f"canonical structure violated (residual {residual:.3g})")
    dims = closed_form_dimensions(m.algebra)
    return CanonicalForm(m.algebra, block.field, a, blocks, dims, residual)


def _params_of(a, basis):
    out = [(a[rows, cols] / phase).real.ravel() for _, rows, cols, phase in _layout(basis)]
    return np.concatenate(out) if out else np.zeros(0)


def block_parameters(c):
    """The real parameters of a canonical form (inverse of :func:`assemble`)."""
    return _params_of(c.matrix, build_basis(c.algebra))


def canonicalize_parts(m, tol=DEFAULT_TOL):
    """Per-block canonical forms of a direct-sum member, plus raw cross terms."""
    if len(m.algebra.blocks) == 1:
        return [canonicalize(m, tol)], []
    parts, cross = split_direct_sum(m, tol)
    return [canonicalize(p, tol) for p in parts], cross


def closed_form_dimensions(algebra):
    """Real dimension of Pert(A) from the structure theorems.

    Single blocks report the factors ``V`` (vector part) and the square
    blocks ``S`` (and ``T``); direct sums add, for every pair ``i < j``, the
    self-adjoint cross part, which is one copy of ``A_i (x) A_j^o``.
    """
    if len(algebra.blocks) == 1:
        block = algebra.blocks[0]
        dims = block_dimensions(block.field, block.n)
        names = list(dims)
        out = {"V": dims[names[0]]}
        for label, name in zip(("S", "T"), names[1:]):
            out[label] = dims[name] ** 2
        if block.field == "C":
            out["V_real"] = (block.n + 2) * (block.n - 1) // 2
            out["V_imag"] = block.n * (block.n - 1) // 2
        out["total"] = sum(v for k, v in out.items() if k in ("V", "S", "T"))
        return out
    blocks = [closed_form_dimensions(algebra.sub_algebra(i)) for i in range(len(algebra.blocks))]
    cross = []
    for i, bi in enumerate(algebra.blocks):
        for j in range(i + 1, len(algebra.blocks)):
            bj = algebra.blocks[j]
            size = (bi.dim * bj.dim) ** 2
            real_type = bi.field != "C" and bj.field != "C"
            cross.append({"pair": [i, j], "dim": size if real_type else 2 * size})
    total = sum(b["total"] for b in blocks) + sum(c["dim"] for c in cross)
    return {"blocks": blocks, "cross": cross, "total": total}


def semidirect_multiply(p1, p2):
    """Product in ``V x| S``: ``(v, B)(v', B') = (v' + v B', B B')``."""
    v, b = p1
    v2, b2 = p2
    return np.asarray(v2) + np.asarray(v) @ b2, np.asarray(b) @ b2


def semidirect_law_residuals(m1, m2, tol=DEFAULT_TOL):
    """Compare both candidate vector laws against the realized product.

    Returns the max deviation of ``v' + v B'`` and of ``v' + v B`` from the
    vector part of ``canonicalize(m1 @ m2)``.
    """
    c1, c2, c12 = (canonicalize(x, tol) for x in (m1, m2, m1 @ m2))
    vec = list(c1.blocks)[0]
    sq = list(c1.blocks)[1]
    v, b = c1.blocks[vec], c1.blocks[sq]
    v2, b2 = c2.blocks[vec], c2.blocks[sq]
    target = c12.blocks[vec]
    return {
        "v' + v B'": float(np.abs(v2 + v @ b2 - target).max(initial=0.0)),
        "v' + v B": float(np.abs(v2 + v @ b - target).max(initial=0.0)),
    }


def is_invertible(c, tol=1e-9):
    """True iff every square block has ``|det| > tol * scale^size``.

    ``scale`` is the max-norm of the whole canonical matrix (at least 1, from
    the fixed entry), so tiny blocks are not rescued by their own size.
    """
    scale = np.abs(c.matrix).max()
    for name in list(c.blocks)[1:]:
        b = c.blocks[name]
        if b.size and abs(np.linalg.det(b)) <= tol * scale ** b.shape[0]:
            return False
    return True


def decomposition_report(c, tol=1e-9):
    """JSON-ready summary of the semidirect-product structure."""
    factors = {
        "C": "V x| S",
        "R": "(V x| S) x T",
        "H": "(V x| S) x T",
    }[c.case]
    return {
        "case": c.case,
        "algebra": str(c.algebra),
        "structure": factors,
        "semidirect_law": SEMIDIRECT_LAW,
        "dims": c.dims,
        "blocks": {k: list(v.shape) for k, v in c.blocks.items()},
        "invertible": is_invertible(c, tol),
    }


def _random_cross(algebra, i, j, rng, scale):
    bi, bj = algebra.blocks[i], algebra.blocks[j]
    size = bi.dim * bj.dim
    x = scale * (rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size)))
    if bi.field != "C" and bj.field != "C":
        s = algebra.real_structure
        si = s[algebra.block_slice(i), algebra.block_slice(i)]
        sj = s[algebra.block_slice(j), algebra.block_slice(j)]
        k = np.kron(si, sj.T).real
        x = (x + k @ np.conj(x) @ k.T) / 2
    return CrossTerm(i, j, x, None)


def sample_member(algebra, seed=None, scale=1.0):
    """Random member drawn in block coordinates and mapped back.

    Free real parameters are ``Normal(0, scale**2)``; cross terms of direct
    sums are complex Gaussian, projected onto the field constraint.
    """
    rng = np.random.default_rng(seed)
    return _sample(algebra, rng, scale)


def _sample(algebra, rng, scale):
    if len(algebra.blocks) == 1:
        basis = build_basis(algebra)
        npar = closed_form_dimensions(algebra)["total"]
        a = assemble(algebra, scale * rng.normal(size=npar))
        return PertMatrix(algebra, basis.Q @ a @ basis.Q.T)
    parts = [_sample(algebra.sub_algebra(i), rng, scale) for i in range(len(algebra.blocks))]
    cross = [
        _random_cross(algebra, i, j, rng, scale)
        for i in range(len(algebra.blocks))
        for j in range(i + 1, len(algebra.blocks))
    ]
    return merge_direct_sum(parts, cross, algebra, tol=1e-8)


def structure_signatures(algebra):
    """Diagonal sign matrices of the canonical basis, keyed by block name."""
    return {k: np.diag(v) for k, v in _signatures(build_basis(algebra)).items()}


def basis_residuals(algebra):
    """How far ``Q`` is from orthogonal and from diagonalizing the constraints."""
    basis = build_basis(algebra)
    sd = structure_data(algebra)
    q = basis.Q
    out = {
        "orthogonality": float(np.linalg.norm(q.T @ q - np.eye(q.shape[1]))),
        "omega": float(np.abs(q.T @ sd.constraint("omega").S @ q - np.diag(basis.omega)).max()),
        "fixed": float(np.abs(q[:, 0] - sd.fixed_vector.real / np.sqrt(algebra.dim)).max()),
    }
    if basis.L is not None:
        L = sd.constraint("field").S
        out["L"] = float(np.abs(q.T @ L @ q - np.diag(basis.L)).max())
    return out
