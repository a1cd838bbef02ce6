"""Monodromy and transfer matrices of the open chain, and its Hamiltonian."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SingularT0
from .la import apply_array
from .local_ops import LocalOps
from .params import ModelParams

FAMILIES = ("vector", "plus", "minus")


@dataclass(frozen=True)
class ChainOperator:
    matrix: np.ndarray
    params: ModelParams
    kind: str
    meta: dict = field(default_factory=dict)


class Chain:
    """Transfer-matrix builder for one parameter set."""

    def __init__(self, params: ModelParams):
        self.params = params
        self.ops = LocalOps(params)
        self.n = params.n_sites
        self.dim = 6 ** self.n

    def _family(self, family):
        ops = self.ops
        if family == "vector":
            return 6, ops.r_vector, ops.k_minus, ops.k_bar
        if family in ("plus", "minus"):
            s = 1 if family == "plus" else -1
            return (4, lambda u: ops.r_fused(s, u), lambda u: ops.k_fused(s, u),
                    lambda u: ops.k_bar_fused(s, u))
        raise ValueError(f"unknown family {family!r}")

    def _factors(self, u, family, direction):
        """Ordered (op, op_dims, slots) factors of the monodromy, left to right."""
        d_aux, rmat, _, _ = self._family(family)
        th = self.params.theta
        if direction == "forward":
            return [(rmat(u - th[j]), (d_aux, 6), (0, j + 1)) for j in range(self.n)]
        if direction == "hat":
            out = []
            for j in reversed(range(self.n)):
                r = rmat(u + th[j])
                if family == "vector":
                    # R_{j0}: the site leg comes first
                    out.append((r, (6, 6), (j + 1, 0)))
                else:
                    # mixed layout: R_{j0'} is the full transpose on [4, 6]
                    out.append((r.T, (d_aux, 6), (0, j + 1)))
            return out
        raise ValueError(f"unknown direction {direction!r}")

    def _apply(self, factors, dims, m):
        for op, od, sl in reversed(factors):
            m = apply_array(op, od, sl, dims, m)
        return m

    def monodromy(self, u, family: str = "vector", direction: str = "forward"):
        """Ordered product on layout [d_aux, 6, ..., 6]; returns (matrix, dims)."""
        d_aux = self._family(family)[0]
        dims = (d_aux,) + (6,) * self.n
        eye = np.eye(d_aux * self.dim, dtype=complex)
        return self._apply(self._factors(u, family, direction), dims, eye), dims

    def _transfer(self, u, family):
        d_aux, _, kmat, kbar = self._family(family)
        dims = (d_aux,) + (6,) * self.n
        a, _ = self.monodromy(u, family, "hat")
        a = apply_array(kmat(u), (d_aux,), (0,), dims, a)
        a = self._apply(self._factors(u, family, "forward"), dims, a)
        a = apply_array(kbar(u), (d_aux,), (0,), dims, a)
        return np.einsum("aiaj->ij", a.reshape(d_aux, self.dim, d_aux, self.dim))

    def transfer(self, u) -> np.ndarray:
        return self._transfer(u, "vector")

    def transfer_fused(self, u, sign: int) -> np.ndarray:
        return self._transfer(u, "plus" if sign > 0 else "minus")

    def transfer_op(self, u, kind: str = "transfer") -> ChainOperator:
        if kind == "transfer":
            m = self.transfer(u)
        elif kind == "transfer_plus":
            m = self.transfer_fused(u, 1)
        elif kind == "transfer_minus":
            m = self.transfer_fused(u, -1)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        return ChainOperator(m, self.params, kind, {"u": complex(u)})

    def w_string(self) -> np.ndarray:
        """The product of W over all sites."""
        w = self.ops.twists()["W"]
        out = np.ones((1, 1), dtype=complex)
        for _ in range(self.n):
            out = np.kron(out, w)
        return out


def _central(chain, h):
    return (chain.transfer(h) - chain.transfer(-h)) / (2 * h)


def transfer_derivative_at_zero(chain: Chain, h: float = 1e-4):
    """Richardson-extrapolated central difference of t at u = 0.

    Returns the derivative and an error estimate.
    """
    d1 = _central(chain, h)
    d2 = _central(chain, h / 2)
    d = (4 * d2 - d1) / 3
    return d, float(np.linalg.norm(d - d2) / max(np.linalg.norm(d), 1e-300))


def hamiltonian(params: ModelParams, h: float = 1e-4) -> ChainOperator:
    """H = 1/2 t'(0) t(0)^-1 at the homogeneous point (all theta set to zero)."""
    chain = Chain(params.homogeneous())
    t0 = chain.transfer(0.0)
    cond = np.linalg.cond(t0)
    if cond > 1e10:
        raise SingularT0(f"t(0) condition number {cond:.2e}")
    d, err = transfer_derivative_at_zero(chain, h)
    m = 0.5 * d @ np.linalg.inv(t0)
    return ChainOperator(m, chain.params, "hamiltonian",
                         {"step": h, "extrapolation_error": err, "t0_condition": float(cond)})


def finite_difference_order(params: ModelParams, h: float = 1e-2) -> float:
    """Observed order of the plain central difference of t at 0 under step halving."""
    chain = Chain(params.homogeneous())
    d = [_central(chain, h / 2 ** k) for k in range(3)]
    e1 = np.linalg.norm(d[0] - d[1])
    e2 = np.linalg.norm(d[1] - d[2])
    return float(np.log2(e1 / e2))
