import numpy as np
import pytest

from qd3.chain import Chain, finite_difference_order, hamiltonian, transfer_derivative_at_zero
from qd3.errors import SingularT0
from qd3.la import swap_array
from qd3.local_ops import LocalOps
from qd3.params import default_params

from conftest import rel


def transfer_by_index_sum(p, u):
    """N = 1: t_ij = sum Kbar_ab T_(b i),(c k) K_cd That_(d k),(a j) by explicit contraction."""
    ops = LocalOps(p)
    th = p.theta[0]
    T = ops.r_vector(u - th).reshape(6, 6, 6, 6)          # [aux, site, aux', site']
    R = ops.r_vector(u + th).reshape(6, 6, 6, 6)          # R_{10}: [site, aux, site', aux']
    K, Kb = ops.k_minus(u), ops.k_bar(u)
    t = np.zeros((6, 6), dtype=complex)
    for i in range(6):
        for j in range(6):
            acc = 0j
            for a in range(6):
                for b in range(6):
                    if Kb[a, b] == 0:
                        continue
                    for c in range(6):
                        for d in range(6):
                            if K[c, d] == 0:
                                continue
                            acc += Kb[a, b] * K[c, d] * np.dot(T[b, i, c, :], R[:, d, j, a])
            t[i, j] = acc
    return t


def test_transfer_index_sum(p1):
    u = 0.31 + 0.17j
    assert rel(Chain(p1).transfer(u), transfer_by_index_sum(p1, u)) < 1e-12


def test_monodromy_regular_point():
    p = default_params(1, theta=(0.0,))
    m, dims = Chain(p).monodromy(0.0)
    ops = LocalOps(p)
    assert dims == (6, 6)
    assert rel(m, ops.w.vector(0.0)["a"] * swap_array(6, 6)) < 1e-13


def test_monodromy_product_order(p2):
    ops = LocalOps(p2)
    u = 0.2 + 0.3j
    r01 = np.kron(ops.r_vector(u - p2.theta[0]), np.eye(6))
    p12 = np.kron(np.eye(6), swap_array(6, 6))
    r02 = p12 @ np.kron(ops.r_vector(u - p2.theta[1]), np.eye(6)) @ p12
    m, _ = Chain(p2).monodromy(u)
    # T_0(u) = R_{01} R_{02} ... R_{0N}
    assert rel(m, r01 @ r02) < 1e-13


def test_transfer_crossing(p1):
    ch = Chain(p1)
    u = 0.4 - 0.25j
    assert rel(ch.transfer(u), ch.transfer(-u + 8 * p1.eta)) < 1e-10


def test_fused_crossing_link(p1):
    ch = Chain(p1)
    u = -0.3 + 0.2j
    w = ch.w_string()
    lhs = ch.transfer_fused(-u + 8 * p1.eta, 1)
    assert rel(lhs, np.exp(8 * p1.eta) * w @ ch.transfer_fused(u, -1) @ w) < 1e-10


@pytest.mark.parametrize("kinds", [("transfer", "transfer"), ("transfer", "transfer_plus"),
                                   ("transfer_plus", "transfer_minus"), ("transfer_minus", "transfer_minus")])
def test_commutation(p1, kinds):
    ch = Chain(p1)
    a = ch.transfer_op(0.21 + 0.4j, kinds[0]).matrix
    b = ch.transfer_op(-0.5 + 0.1j, kinds[1]).matrix
    assert np.linalg.norm(a @ b - b @ a) < 1e-10 * np.linalg.norm(a) * np.linalg.norm(b)


def test_transfer_op_meta(p1):
    op = Chain(p1).transfer_op(0.5, "transfer_plus")
    assert op.kind == "transfer_plus" and op.meta["u"] == 0.5
    with pytest.raises(ValueError):
        Chain(p1).transfer_op(0.5, "bogus")


def test_hamiltonian_commutes(p1):
    h = hamiltonian(p1)
    ch = Chain(p1.homogeneous())
    t = ch.transfer(0.33 - 0.12j)
    assert np.linalg.norm(h.matrix @ t - t @ h.matrix) < 1e-7 * np.linalg.norm(h.matrix) * np.linalg.norm(t)
    assert h.meta["extrapolation_error"] < 1e-6


def test_derivative_matches_analytic_scale(p1):
    ch = Chain(p1.homogeneous())
    d, err = transfer_derivative_at_zero(ch, 1e-3)
    fine, _ = transfer_derivative_at_zero(ch, 1e-4)
    assert rel(d, fine) < 1e-8


def test_finite_difference_order(p1):
    assert finite_difference_order(p1) >= 1.8


def test_singular_t0(p1, monkeypatch):
    monkeypatch.setattr(Chain, "transfer", lambda self, u: np.diag([1.0, 1, 1, 1, 1, 1e-12]))
    with pytest.raises(SingularT0):
        hamiltonian(p1)
