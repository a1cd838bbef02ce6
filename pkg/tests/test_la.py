import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qd3.errors import (BadSlot, DimensionMismatch, DuplicateSlot,
                        IllConditionedBasis, NotCommuting)
from qd3.la import (LabeledOperator, Projector, SpaceLayout, apply_array, column_space, embed,
                    embed_array, kron, kron_array, max_subspace_angle, numerical_rank,
                    partial_trace, partial_trace_array, partial_transpose,
                    partial_transpose_array, permutation_op, relative_residual,
                    simultaneous_eigenbasis, swap_array)


def crand(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def embed_by_loops(op, op_dims, slots, dims):
    """Entry-by-entry oracle: <i|E|j> = <i_S|op|j_S> * delta(i_rest, j_rest)."""
    idx = list(itertools.product(*[range(d) for d in dims]))
    out = np.zeros((len(idx), len(idx)), dtype=complex)
    t = op.reshape(tuple(op_dims) * 2)
    rest = [k for k in range(len(dims)) if k not in slots]
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            if all(i[k] == j[k] for k in rest):
                out[a, b] = t[tuple(i[s] for s in slots) + tuple(j[s] for s in slots)]
    return out


def test_kron_order():
    a = np.array([[1, 2], [3, 4]])
    b = np.eye(3)
    assert np.allclose(kron_array(a, b), np.kron(a, b))
    k = kron(LabeledOperator(a, (2,)), LabeledOperator(b, (3,)))
    assert k.dims == (2, 3)
    # |kl> sits at (k-1) d2 + (l-1)
    v = np.zeros(6)
    v[1 * 3 + 2] = 1
    assert np.allclose(k.matrix @ v, np.kron(a[:, 1], b[:, 2]))


@pytest.mark.parametrize("slots,dims", [((0,), (2, 3)), ((1,), (2, 3, 2)), ((2, 0), (2, 3, 2)),
                                        ((1, 2), (3, 2, 2)), ((0, 1, 2), (2, 2, 2))])
def test_embed_matches_loops(rng, slots, dims):
    od = tuple(dims[s] for s in slots)
    op = crand(rng, int(np.prod(od)), int(np.prod(od)))
    assert np.allclose(embed_array(op, od, slots, dims), embed_by_loops(op, od, slots, dims))


def test_embed_adjacent_is_kron(rng):
    op = crand(rng, 6, 6)
    assert np.allclose(embed_array(op, (2, 3), (1, 2), (4, 2, 3)), np.kron(np.eye(4), op))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_apply_array_matches_embed(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(rng.integers(1, 4, size=rng.integers(2, 4)))
    k = int(rng.integers(1, len(dims) + 1))
    slots = tuple(int(s) for s in rng.permutation(len(dims))[:k])
    od = tuple(dims[s] for s in slots)
    op = crand(rng, int(np.prod(od)), int(np.prod(od)))
    m = crand(rng, int(np.prod(dims)), 3)
    assert np.allclose(apply_array(op, od, slots, dims, m), embed_array(op, od, slots, dims) @ m, atol=1e-12)


def test_embed_errors():
    op = np.eye(2)
    with pytest.raises(DimensionMismatch):
        embed_array(op, (2,), (0,), (3, 2))
    with pytest.raises(BadSlot):
        embed_array(op, (2,), (5,), (2, 2))
    with pytest.raises(DuplicateSlot):
        embed_array(np.eye(4), (2, 2), (1, 1), (2, 2))
    with pytest.raises(DimensionMismatch):
        LabeledOperator(np.eye(3), (2,))
    with pytest.raises(DimensionMismatch):
        SpaceLayout((2, 0))


def test_partial_transpose_oracle(rng):
    a, b = crand(rng, 2, 2), crand(rng, 3, 3)
    m = np.kron(a, b)
    assert np.allclose(partial_transpose_array(m, (2, 3), 0), np.kron(a.T, b))
    assert np.allclose(partial_transpose_array(m, (2, 3), 1), np.kron(a, b.T))
    lo = partial_transpose(LabeledOperator(m, (2, 3)), 1)
    assert np.allclose(lo.matrix, np.kron(a, b.T))


def test_partial_trace_oracle(rng):
    a, b, c = crand(rng, 2, 2), crand(rng, 3, 3), crand(rng, 2, 2)
    m = np.kron(np.kron(a, b), c)
    assert np.allclose(partial_trace_array(m, (2, 3, 2), 1), np.trace(b) * np.kron(a, c))
    tr = partial_trace(LabeledOperator(np.kron(a, b), (2, 3)), 0)
    assert tr.dims == (3,) and np.allclose(tr.matrix, np.trace(a) * b)
    assert partial_trace(LabeledOperator(a, (2,)), 0).matrix[0, 0] == pytest.approx(np.trace(a))


def test_swap(rng):
    a, b = crand(rng, 2, 2), crand(rng, 3, 3)
    p = swap_array(2, 3)
    assert np.allclose(p @ np.kron(a, b) @ p.T, np.kron(b, a))
    pp = permutation_op((3, 3), 0, 1).matrix
    assert np.allclose(pp @ pp, np.eye(9))
    with pytest.raises(DimensionMismatch):
        permutation_op((2, 3), 0, 1)
    with pytest.raises(DuplicateSlot):
        permutation_op((2, 2), 1, 1)


def test_embed_labeled(rng):
    op = LabeledOperator(crand(rng, 2, 2), (2,))
    e = embed(op, (1,), SpaceLayout((3, 2)))
    assert np.allclose(e.matrix, np.kron(np.eye(3), op.matrix))


def test_rank_and_column_space(rng):
    u, v = crand(rng, 6, 2), crand(rng, 2, 6)
    m = u @ v
    assert numerical_rank(m) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0
    cs = column_space(m)
    assert cs.shape == (6, 2)
    assert max_subspace_angle(cs, u) < 1e-10
    assert relative_residual(m, m) == 0


def test_projector_bilinear(rng):
    q, _ = np.linalg.qr(rng.normal(size=(5, 2)))
    pr = Projector.from_basis(q)
    assert pr.rank == 2
    assert np.allclose(pr.matrix @ pr.matrix, pr.matrix)
    assert pr.gram_residual() < 1e-14


def test_simultaneous_identity_and_diagonal():
    basis, table = simultaneous_eigenbasis([np.eye(3), np.diag([1.0, 2, 3])])
    assert np.allclose(np.sort(table[1].real), [1, 2, 3])
    assert np.allclose(table[0], 1)


def test_simultaneous_polynomials(rng):
    a = crand(rng, 20, 20)
    fam = [a, a @ a, a @ a @ a - 2 * a + np.eye(20)]
    basis, table = simultaneous_eigenbasis(fam, rng=np.random.default_rng(1))
    inv = np.linalg.inv(basis)
    for m, t in zip(fam, table):
        assert relative_residual(m, basis @ np.diag(t) @ inv) < 1e-9
    assert np.allclose(table[1], table[0] ** 2)


def test_simultaneous_degenerate_member_resolved():
    # the identity alone cannot fix a basis, a second member can
    b = np.diag([1.0, 1, 2])
    basis, table = simultaneous_eigenbasis([np.eye(3), b])
    assert np.allclose(sorted(table[1].real), [1, 1, 2])


def test_simultaneous_not_commuting():
    with pytest.raises(NotCommuting):
        simultaneous_eigenbasis([np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])])


def test_simultaneous_defective():
    with pytest.raises(IllConditionedBasis):
        simultaneous_eigenbasis([np.array([[1.0, 1], [0, 1]])])
