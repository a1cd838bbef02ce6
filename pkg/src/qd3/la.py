"""Dense tensor-leg toolkit.

Operators on a multi-factor space are plain complex arrays paired with a
layout ``dims`` (leftmost factor is slot 0, row-major Kronecker order).  The
``*_array`` functions work on raw arrays; the LabeledOperator wrappers carry
the layout along for callers that prefer it.
"""
from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (BadSlot, DimensionMismatch, DuplicateSlot,
                     IllConditionedBasis, NotCommuting)

_LETTERS = string.ascii_letters


@dataclass(frozen=True)
class SpaceLayout:
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d < 1 for d in self.dims):
            raise DimensionMismatch(f"non-positive dimension in {self.dims}")

    @property
    def total(self) -> int:
        return int(np.prod(self.dims, dtype=int))

    def __len__(self):
        return len(self.dims)


@dataclass(frozen=True)
class LabeledOperator:
    matrix: np.ndarray
    layout: SpaceLayout

    def __post_init__(self):
        if not isinstance(self.layout, SpaceLayout):
            object.__setattr__(self, "layout", SpaceLayout(self.layout))
        m = np.asarray(self.matrix)
        if m.shape != (self.layout.total, self.layout.total):
            raise DimensionMismatch(f"matrix {m.shape} does not fit layout {self.layout.dims}")
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self):
        return self.layout.dims


def _check_slot(dims, slot):
    if not 0 <= slot < len(dims):
        raise BadSlot(f"slot {slot} outside layout {tuple(dims)}")


def kron_array(*ops):
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def embed_array(op, op_dims, slots, dims):
    """Act with ``op`` (layout ``op_dims``) on ``slots`` of ``dims``, identity elsewhere."""
    dims = tuple(dims)
    op_dims = tuple(op_dims)
    slots = tuple(slots)
    if len(set(slots)) != len(slots):
        raise DuplicateSlot(f"repeated slot in {slots}")
    if len(slots) != len(op_dims):
        raise DimensionMismatch(f"{len(slots)} slots for an operator on {len(op_dims)} factors")
    for s, d in zip(slots, op_dims):
        _check_slot(dims, s)
        if dims[s] != d:
            raise DimensionMismatch(f"slot {s} has dimension {dims[s]}, operator expects {d}")
    n = len(dims)
    rows, cols = _LETTERS[:n], _LETTERS[n:2 * n]
    op_t = np.asarray(op).reshape(op_dims * 2)
    rest = [i for i in range(n) if i not in slots]
    sub_op = "".join(rows[s] for s in slots) + "".join(cols[s] for s in slots)
    if rest:
        rd = [dims[i] for i in rest]
        eye = np.eye(int(np.prod(rd))).reshape(rd * 2)
        sub_eye = "".join(rows[i] for i in rest) + "".join(cols[i] for i in rest)
        out = np.einsum(f"{sub_op},{sub_eye}->{rows}{cols}", op_t, eye)
    else:
        out = np.einsum(f"{sub_op}->{rows}{cols}", op_t)
    total = int(np.prod(dims))
    return out.reshape(total, total)


def apply_array(op, op_dims, slots, dims, m):
    """``embed_array(op, op_dims, slots, dims) @ m`` without forming the embedding."""
    dims, op_dims, slots = tuple(dims), tuple(op_dims), tuple(slots)
    m = np.asarray(m)
    k = len(slots)
    t = np.asarray(op).reshape(op_dims * 2)
    mt = m.reshape(dims + (m.shape[1],))
    out = np.tensordot(t, mt, axes=(list(range(k, 2 * k)), list(slots)))
    # the op row legs come out first; move them back to their slots
    rest = [i for i in range(len(dims)) if i not in slots]
    out = np.moveaxis(out, range(len(dims) + 1), list(slots) + rest + [len(dims)])
    return out.reshape(m.shape)


def partial_transpose_array(m, dims, slot):
    dims = tuple(dims)
    _check_slot(dims, slot)
    n = len(dims)
    axes = list(range(2 * n))
    axes[slot], axes[slot + n] = axes[slot + n], axes[slot]
    return np.asarray(m).reshape(dims * 2).transpose(axes).reshape(np.shape(m))


def partial_trace_array(m, dims, slot):
    dims = tuple(dims)
    _check_slot(dims, slot)
    n = len(dims)
    t = np.trace(np.asarray(m).reshape(dims * 2), axis1=slot, axis2=slot + n)
    rest = int(np.prod([d for i, d in enumerate(dims) if i != slot]))
    return t.reshape(rest, rest)


def swap_array(d1, d2):
    """Operator sending |i>|j> in d1 x d2 to |j>|i> in d2 x d1."""
    p = np.zeros((d1 * d2, d1 * d2))
    for i in range(d1):
        for j in range(d2):
            p[j * d1 + i, i * d2 + j] = 1.0
    return p


# --- LabeledOperator API ----------------------------------------------------

def kron(a: LabeledOperator, b: LabeledOperator) -> LabeledOperator:
    return LabeledOperator(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def embed(op: LabeledOperator, slots, target) -> LabeledOperator:
    dims = target.dims if isinstance(target, SpaceLayout) else tuple(target)
    return LabeledOperator(embed_array(op.matrix, op.dims, slots, dims), dims)


def partial_transpose(m: LabeledOperator, slot: int) -> LabeledOperator:
    return LabeledOperator(partial_transpose_array(m.matrix, m.dims, slot), m.dims)


def partial_trace(m: LabeledOperator, slot: int) -> LabeledOperator:
    rest = tuple(d for i, d in enumerate(m.dims) if i != slot)
    out = partial_trace_array(m.matrix, m.dims, slot)
    return LabeledOperator(out, rest if rest else (1,))


def permutation_op(layout, i: int, j: int) -> LabeledOperator:
    dims = layout.dims if isinstance(layout, SpaceLayout) else tuple(layout)
    _check_slot(dims, i)
    _check_slot(dims, j)
    if i == j:
        raise DuplicateSlot("permutation needs two distinct legs")
    if dims[i] != dims[j]:
        raise DimensionMismatch(f"legs {i} and {j} differ in dimension")
    d = dims[i]
    return LabeledOperator(embed_array(swap_array(d, d), (d, d), (i, j), dims), dims)


# --- numerics ---------------------------------------------------------------

def relative_residual(lhs, rhs) -> float:
    """||lhs - rhs||_F / max(||lhs||_F, 1e-300)."""
    lhs = np.asarray(lhs)
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(lhs), 1e-300))


def numerical_rank(m, tol: float = 1e-8) -> int:
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def column_space(m, tol: float = 1e-8):
    """Orthonormal basis of the numerical range of ``m``."""
    return sla.orth(np.asarray(m), rcond=tol)


def max_subspace_angle(a, b) -> float:
    return float(np.max(sla.subspace_angles(np.asarray(a), np.asarray(b))))


@dataclass(frozen=True)
class Projector:
    """Projector built from basis columns with the bilinear pairing ``v v^T``."""

    basis: np.ndarray
    matrix: np.ndarray
    rank: int

    @classmethod
    def from_basis(cls, basis) -> "Projector":
        b = np.asarray(basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        return cls(b, b @ b.T, b.shape[1])

    def gram_residual(self) -> float:
        return relative_residual(self.basis.T @ self.basis, np.eye(self.rank))


def simultaneous_eigenbasis(family, tol: float = 1e-9, rng=None, retries: int = 5):
    """Common eigenbasis of a commuting family of square matrices.

    Diagonalizes a random complex combination of the members, then reads each
    member's eigenvalues off the diagonal of ``B^-1 M B``.

    Returns
    -------
    basis : ndarray, columns are the common eigenvectors
    table : ndarray of shape (len(family), dim)
    """
    mats = [np.asarray(m.matrix if isinstance(m, LabeledOperator) else m, dtype=complex) for m in family]
    for i in range(len(mats)):
        for j in range(i):
            a, b = mats[i], mats[j]
            c = np.linalg.norm(a @ b - b @ a) / max(np.linalg.norm(a) * np.linalg.norm(b), 1e-300)
            if c > tol:
                raise NotCommuting(f"members {j} and {i} fail to commute (relative {c:.2e})")
    rng = np.random.default_rng(0) if rng is None else rng
    last = None
    for _ in range(retries):
        coef = rng.normal(size=len(mats)) + 1j * rng.normal(size=len(mats))
        mix = sum(c * m / max(np.linalg.norm(m), 1e-300) for c, m in zip(coef, mats))
        _, basis = np.linalg.eig(mix)
        cond = np.linalg.cond(basis)
        if cond > 1e8:
            last = IllConditionedBasis(f"eigenbasis condition number {cond:.2e}")
            continue
        inv = np.linalg.inv(basis)
        table = np.array([np.diag(inv @ m @ basis) for m in mats])
        ok = all(
            np.linalg.norm(m - basis @ np.diag(t) @ inv) <= 100 * tol * max(np.linalg.norm(m), 1e-300)
            for m, t in zip(mats, table)
        )
        if ok:
            return basis, table
        last = IllConditionedBasis("reconstruction error above 100*tol")
    raise last
