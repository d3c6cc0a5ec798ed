"""Finite-dimensional matrix *-algebras as direct sums of M_n(F) blocks."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .matalg import FIELDS, embed_quaternion, quaternion_matrix, quaternion_structure

__all__ = ["Block", "Algebra"]

_QUATERNION_UNITS = tuple(embed_quaternion(u) for u in np.eye(4))


@dataclass(frozen=True)
class Block:
    field: str
    n: int

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValueError(f"unknown field {self.field!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"block size must be a positive integer, got {self.n!r}")

    @property
    def dim(self):
        """Size of the block in the complex defining representation."""
        return 2 * self.n if self.field == "H" else self.n

    def __str__(self):
        return f"M{self.n}({self.field})"


_TOKEN = re.compile(r"^(?:M(\d+)\((R|C|H)\)|(R|C|H)(?:\^(\d+))?)$")


@dataclass(frozen=True)
class Algebra:
    """The algebra ``M_{n_1}(F_1) + ... + M_{n_k}(F_k)``.

    Elements are block-diagonal ``d x d`` complex matrices, where ``d`` sums
    the block sizes and every quaternionic block of size ``n`` contributes
    ``2n``.
    """

    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(b if isinstance(b, Block) else Block(*b) for b in self.blocks)
        if not blocks:
            raise ValueError("an algebra needs at least one block")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def matrix(cls, field, n):
        return cls((Block(field, n),))

    @classmethod
    def diagonal(cls, n, field="C"):
        """``F^n``, i.e. ``n`` one-dimensional blocks."""
        return cls(tuple(Block(field, 1) for _ in range(n)))

    @classmethod
    def parse(cls, text):
        """Parse shorthand such as ``"M2(C)"``, ``"C^3"``, ``"M2(R)+H"``."""
        blocks = []
        for token in text.replace(" ", "").split("+"):
            match = _TOKEN.match(token)
            if not match:
                raise ValueError(f"cannot parse algebra token {token!r}")
            n, field, bare, power = match.groups()
            if field:
                blocks.append(Block(field, int(n)))
            else:
                blocks.extend(Block(bare, 1) for _ in range(int(power or 1)))
        return cls(tuple(blocks))

    def __str__(self):
        return "+".join(str(b) for b in self.blocks)

    @property
    def dim(self):
        return sum(b.dim for b in self.blocks)

    @property
    def is_complex(self):
        """True when every block is complex, so tensors are taken over C."""
        return all(b.field == "C" for b in self.blocks)

    @cached_property
    def offsets(self):
        out, start = [], 0
        for b in self.blocks:
            out.append(start)
            start += b.dim
        return tuple(out)

    def block_slice(self, i):
        return slice(self.offsets[i], self.offsets[i] + self.blocks[i].dim)

    def sub_algebra(self, i):
        return Algebra((self.blocks[i],))

    @cached_property
    def real_structure(self):
        """Block-diagonal S with ``S conj(a) = a S`` on every real/quaternionic block.

        ``I`` on real blocks, ``I (x) J_HAT`` on quaternionic blocks and ``0``
        on complex blocks (which carry no such constraint).
        """
        d = self.dim
        s = np.zeros((d, d), dtype=complex)
        for i, b in enumerate(self.blocks):
            sl = self.block_slice(i)
            if b.field == "R":
                s[sl, sl] = np.eye(b.n)
            elif b.field == "H":
                s[sl, sl] = quaternion_structure(b.n)
        s.setflags(write=False)
        return s

    def contains(self, a, tol=1e-9):
        """Membership of a ``d x d`` matrix in the algebra."""
        a = np.asarray(a)
        d = self.dim
        if a.shape != (d, d):
            return False
        scale = tol * max(1.0, np.abs(a).max(initial=0.0))
        mask = np.zeros((d, d), dtype=bool)
        for i in range(len(self.blocks)):
            sl = self.block_slice(i)
            mask[sl, sl] = True
        if np.abs(a[~mask]).max(initial=0.0) > scale:
            return False
        s = self.real_structure
        r = s @ np.conj(a) - a @ s
        return bool(np.abs(r).max(initial=0.0) <= scale)

    def basis(self, over=None):
        """Basis of the algebra as a stack of ``d x d`` matrices.

        ``over="C"`` (only for complex algebras) returns the matrix units; the
        default is a real basis: matrix units, ``i`` times matrix units for
        complex blocks, and the four quaternion units for each entry of a
        quaternionic block. All members are mutually orthogonal.
        """
        over = over or ("C" if self.is_complex else "R")
        if over == "C" and not self.is_complex:
            raise ValueError("complex basis only exists for complex algebras")
        d = self.dim
        mats = []
        for i, b in enumerate(self.blocks):
            off = self.offsets[i]
            for r in range(b.n):
                for c in range(b.n):
                    if b.field == "H":
                        for unit in _QUATERNION_UNITS:
                            m = np.zeros((d, d), dtype=complex)
                            m[off + 2 * r:off + 2 * r + 2, off + 2 * c:off + 2 * c + 2] = unit
                            mats.append(m)
                        continue
                    m = np.zeros((d, d), dtype=complex)
                    m[off + r, off + c] = 1
                    mats.append(m)
                    if b.field == "C" and over == "R":
                        mats.append(1j * m)
        return np.array(mats)

    def random_element(self, rng, scale=1.0):
        """Gaussian random element of the algebra."""
        d = self.dim
        a = np.zeros((d, d), dtype=complex)
        for i, b in enumerate(self.blocks):
            sl = self.block_slice(i)
            if b.field == "R":
                a[sl, sl] = rng.normal(size=(b.n, b.n))
            elif b.field == "C":
                a[sl, sl] = rng.normal(size=(b.n, b.n)) + 1j * rng.normal(size=(b.n, b.n))
            else:
                a[sl, sl] = quaternion_matrix(rng.normal(size=(b.n, b.n, 4)))
        return scale * a

    def to_json(self):
        return [{"field": b.field, "n": b.n} for b in self.blocks]

    @classmethod
    def from_json(cls, data):
        return cls(tuple(Block(item["field"], int(item["n"])) for item in data))
