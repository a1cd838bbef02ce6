"""Local matrices of the model: weights, R and K matrices, twists, projectors.

Layouts (slot order, row-major):

* vector R ........................ [6, 6]
* fused R^(+), R^(-) .............. [4, 6]
* R^(+-), R^(-+), spinorial R ..... [4, 4]
* K, Kbar ......................... [6];  fused K^(+-), Kbar^(+-) ... [4]

Projector bases list basis vector ``i`` at lexicographic index ``i - 1`` of
the two-factor layout.
"""
from __future__ import annotations

import numpy as np
from numpy import cosh, exp, sinh

from . import _tables
from .errors import BranchCut, Singular
from .la import Projector, swap_array
from .params import BoundaryParams, ModelParams


def _sqrt(x):
    x = complex(x)
    if abs(x.imag) <= 1e-15 * max(abs(x.real), 1.0) and x.real < 0:
        raise BranchCut(f"square root of negative real {x.real:.6g}")
    return np.sqrt(x)


def _build(table, n, w):
    m = np.zeros((n, n), dtype=complex)
    for i, j, s, k in table:
        m[i, j] = s * w[k]
    return m


def h_functions(u, b: BoundaryParams, eta) -> dict:
    """Boundary functions h0..h4 for one boundary quadruple."""
    c = b.c
    return {
        "h0": exp(2 * eta) * sinh(u),
        "h1": exp(-u / 2) * sinh(u / 2 - b.c2) + c * exp(-u) * sinh(u),
        "h2": exp(u / 2) * sinh(u / 2 + b.c2) + c * exp(u) * sinh(u),
        "h3": exp(-u / 2) * sinh(u / 2 - b.c2) - c * exp(2 * eta) * sinh(2 * eta),
        "h4": exp(u / 2) * sinh(u / 2 + b.c2) + c * exp(2 * eta) * sinh(2 * eta),
    }


class ScalarWeights:
    """Every scalar function of u used by the local matrices and prefactors."""

    def __init__(self, params: ModelParams):
        self.eta = complex(params.eta)
        self.left = params.left
        self.right = params.right

    # R-matrix weights
    def vector(self, u) -> dict:
        eta = self.eta
        a = 2 * sinh(u / 2 - 2 * eta) * sinh(u / 2 - 4 * eta)
        b = 2 * sinh(u / 2) * sinh(u / 2 - 4 * eta)
        e = 2 * sinh(u / 2) * sinh(u / 2 - 2 * eta)
        g = -2 * exp(-u / 2) * sinh(2 * eta) * sinh(u / 2 - 4 * eta)
        d = 2 * exp(-u / 2 + 2 * eta) * sinh(2 * eta) * sinh(u / 2)
        bard = exp(u - 4 * eta) * d
        g1 = 2 * exp(-u) * sinh(2 * eta) * sinh(4 * eta)
        g2 = 4 * exp(-u / 2) * sinh(2 * eta) ** 2 * cosh(u / 2 - 2 * eta)
        return {
            "a": a, "b": b, "e": e, "g": g, "barg": exp(u) * g,
            "d": d, "d1": exp(-2 * eta) * d, "d2": exp(-4 * eta) * d,
            "bard": bard, "bard1": exp(2 * eta) * bard, "bard2": exp(4 * eta) * bard,
            "g1": g1, "g2": g2, "g3": exp(u) * g1,
            "barg1": exp(2 * u) * g1, "barg2": exp(u) * g2, "barg3": exp(u) * g1,
        }

    def fused(self, u) -> dict:
        eta = self.eta
        s2 = sinh(2 * eta)
        return {
            "a1": sinh((u - 6 * eta) / 2), "b1": sinh((u - 2 * eta) / 2),
            "e1": exp(-u / 2 + eta) * s2, "e2": exp(-u / 2 - eta) * s2,
            "e3": exp(u / 2 - eta) * s2, "e4": exp(u / 2 + eta) * s2,
        }

    def pm(self, u) -> dict:
        eta = self.eta
        s2 = sinh(2 * eta)
        return {
            "r1": sinh((u - 8 * eta) / 2), "r2": sinh((u - 4 * eta) / 2),
            "r3": -exp(-u / 2 + 2 * eta) * s2, "r4": -exp(-u / 2) * s2,
            "r5": -exp(-u / 2 - 2 * eta) * s2,
            "barr3": -exp(u / 2 - 2 * eta) * s2, "barr4": -exp(u / 2) * s2,
            "barr5": -exp(u / 2 + 2 * eta) * s2,
        }

    def spinorial(self, u) -> dict:
        eta = self.eta
        return {
            "a2": sinh(u / 2 - 2 * eta), "b2": sinh(u / 2),
            "e5": -exp(-u / 2) * sinh(2 * eta), "e6": -exp(u / 2) * sinh(2 * eta),
        }

    def similarity(self) -> dict:
        eta = self.eta
        e = lambda k: exp(k * eta)
        s = {"s0": 2 * _sqrt(cosh(2 * eta) * cosh(4 * eta) * cosh(6 * eta))}
        s["s1"] = -e(5) * _sqrt(cosh(6 * eta))
        s["s2"] = -e(-2) * s["s1"]
        s["s3"] = e(-8) * s["s1"]
        s["s4"] = e(-10) * s["s1"]
        s["s5"] = -e(5) * _sqrt(cosh(2 * eta))
        s["s6"] = e(-10) * s["s5"]
        s["s7"] = -e(-6) * s["s5"]
        s["s8"] = -2 * e(1) * cosh(4 * eta) * _sqrt(cosh(2 * eta))
        s["s9"] = e(-2) * s["s8"]
        s["s10"] = e(-4) * s["s5"]
        s["s11"] = e(-1) * _sqrt(sinh(12 * eta) / (2 * sinh(2 * eta)))
        s["s12"] = -e(2) * s["s11"]
        return s

    # boundary functions
    def h(self, u) -> dict:
        return h_functions(u, self.left, self.eta)

    def h_tilde(self, u) -> dict:
        """h functions of the right boundary, with the overall minus sign."""
        return {k: -v for k, v in h_functions(u, self.right, self.eta).items()}

    def k1(self, u, b: BoundaryParams | None = None):
        b = self.left if b is None else b
        eta = self.eta
        return exp(-u / 2 - 2 * eta) * sinh(b.c2 - u / 2 + 2 * eta) + b.c * sinh(4 * eta)

    def k2(self, u, b: BoundaryParams | None = None):
        b = self.left if b is None else b
        eta = self.eta
        return exp(u / 2 - 2 * eta) * sinh(b.c2 + u / 2 + 2 * eta) + b.c * sinh(4 * eta)

    # prefactors
    def rho1(self, u):
        return self.vector(u)["a"] * self.vector(-u)["a"]

    def rho_s(self, u):
        return self.fused(u)["a1"] * self.fused(-u)["a1"]

    def rho_ss(self, u):
        eta = self.eta
        return -sinh((u - 4 * eta) / 2) * sinh((u - 12 * eta) / 2)

    def rho_t0(self, u):
        eta = self.eta
        return sinh((u + 4 * eta) / 2) * sinh((u - 8 * eta) / 2)

    def f(self, u):
        eta = self.eta
        return 4 * sinh(2 * eta) * sinh(4 * eta) * sinh(u - 6 * eta) * sinh(u - 8 * eta)

    def fbar(self, u):
        eta = self.eta
        return -sinh(2 * eta) * sinh(u - 8 * eta)


def _ket(pairs, d1, d2):
    v = np.zeros(d1 * d2, dtype=complex)
    for (k, l), c in pairs:
        v[(k - 1) * d2 + (l - 1)] += c
    return v


class LocalOps:
    """Constructors for all local matrices of one parameter set."""

    def __init__(self, params: ModelParams):
        self.params = params
        self.eta = complex(params.eta)
        self.w = ScalarWeights(params)
        self._twists = None

    # R matrices
    def r_vector(self, u):
        return _build(_tables.VECTOR, 36, self.w.vector(u))

    def r_plus(self, u):
        return _build(_tables.PLUS, 24, self.w.fused(u))

    def r_minus(self, u):
        return _build(_tables.MINUS, 24, self.w.fused(u))

    def r_fused(self, sign, u):
        return self.r_plus(u) if sign > 0 else self.r_minus(u)

    def r_pm(self, u):
        return _build(_tables.PLUS_MINUS, 16, self.w.pm(u))

    def r_mp(self, u):
        return self.r_pm(u).T

    def r_spinorial(self, u):
        return _build(_tables.SPINORIAL, 16, self.w.spinorial(u))

    # K matrices
    def _k6(self, u, b: BoundaryParams):
        eta = self.eta
        h = lambda name, x: h_functions(x, b, eta)[name]
        k = np.zeros((6, 6), dtype=complex)
        k[0, 0] = h("h1", u - 2 * eta)
        k[1, 1] = k[2, 2] = h("h3", u - 2 * eta)
        k[3, 3] = k[4, 4] = -h("h4", u + 2 * eta)
        k[5, 5] = -h("h2", u + 2 * eta)
        h0 = h("h0", u)
        k[1, 3], k[3, 1] = -b.c1 * h0, -b.c3 * h0
        k[2, 4], k[4, 2] = b.c1 * h0, b.c3 * h0
        return k

    def k_minus(self, u):
        return self._k6(u, self.params.left)

    def k_bar(self, u):
        return self.twists()["M"] @ self._k6(-u + 8 * self.eta, self.params.right)

    def _kp4(self, u, b: BoundaryParams):
        h2 = h_functions(u, b, self.eta)["h2"]
        return np.array([
            [exp(-u / 2) * sinh(b.c2 - u / 2), b.c1 * sinh(u), 0, 0],
            [b.c3 * sinh(u), exp(u / 2) * sinh(b.c2 + u / 2), 0, 0],
            [0, 0, h2, 0],
            [0, 0, 0, h2],
        ], dtype=complex)

    def _km4(self, u, b: BoundaryParams):
        eta = self.eta
        h1 = h_functions(u - 4 * eta, b, eta)["h1"]
        return np.array([
            [-exp(-4 * eta) * h1, 0, 0, 0],
            [0, -exp(-4 * eta) * h1, 0, 0],
            [0, 0, self.w.k1(u, b), b.c1 * sinh(u)],
            [0, 0, b.c3 * sinh(u), self.w.k2(u, b)],
        ], dtype=complex)

    def k_plus_fused(self, u):
        return self._kp4(u, self.params.left)

    def k_minus_fused(self, u):
        return self._km4(u, self.params.left)

    def k_fused(self, sign, u):
        return self.k_plus_fused(u) if sign > 0 else self.k_minus_fused(u)

    def k_bar_fused(self, sign, u):
        make = self._kp4 if sign > 0 else self._km4
        return self.twists()["Mbar"] @ make(-u + 8 * self.eta, self.params.right)

    # constant matrices
    def twists(self) -> dict:
        if self._twists is None:
            eta = self.eta
            m = np.diag(exp(np.array([8, 4, 0, 0, -4, -8]) * eta))
            v = np.zeros((6, 6), dtype=complex)
            for i, k in enumerate((-4, -2, 0, 0, 2, 4)):
                v[i, 5 - i] = exp(k * eta)
            mbar = np.diag(exp(np.array([6, 2, -2, -6]) * eta))
            vbar = np.zeros((4, 4), dtype=complex)
            vbar[0, 3] = -exp(-3 * eta)
            vbar[1, 2] = exp(-eta)
            vbar[2, 1] = -exp(eta)
            vbar[3, 0] = exp(3 * eta)
            self._twists = {
                "M": m, "V": v, "Mbar": mbar, "Vbar": vbar,
                "W": np.diag([1.0, -1, 1, -1, 1, -1]).astype(complex),
                "St": np.diag([1.0, -1, 1, -1]).astype(complex),
            }
        return self._twists

    def s_transform(self):
        m = _build(_tables.SIMILARITY, 16, self.w.similarity())
        if np.linalg.cond(m) > 1e12:
            raise Singular("S is numerically singular")
        return m

    def s_bar_transform(self):
        m = -self.s_transform() @ self.r_mp(0.0) / sinh(4 * self.eta)
        if np.linalg.cond(m) > 1e12:
            raise Singular("Sbar is numerically singular")
        return m

    # projector bases
    def basis_p1(self, eta=None):
        eta = self.eta if eta is None else eta
        n = _sqrt(sinh(2 * eta) / (2 * cosh(4 * eta) * sinh(6 * eta)))
        e = lambda k: exp(k * eta)
        return n * _ket([((1, 6), e(-4)), ((2, 5), e(-2)), ((3, 4), 1), ((4, 3), 1),
                         ((5, 2), e(2)), ((6, 1), e(4))], 6, 6)[:, None]

    def basis_p16(self):
        eta = self.eta
        e = lambda k: exp(k * eta)
        p = 1 / _sqrt(2 * cosh(2 * eta))
        pb = _sqrt(sinh(2 * eta) / (2 * cosh(6 * eta) * sinh(8 * eta)))
        pt = _sqrt(2 * cosh(4 * eta) * sinh(2 * eta) / sinh(6 * eta))

        def anti(k, l, s=1):
            return p * _ket([((k, l), e(-s)), ((l, k), -e(s))], 6, 6)

        b = {1: anti(1, 2), 2: anti(1, 3), 3: anti(1, 4), 4: anti(1, 5),
             5: anti(1, 6, 2) * _sqrt(cosh(2 * eta) / cosh(4 * eta)),
             6: anti(2, 3), 7: anti(2, 4), 9: anti(2, 6), 11: anti(3, 5), 12: anti(3, 6),
             14: anti(4, 5), 15: anti(4, 6), 16: anti(5, 6)}
        b[8] = 2 * pb * (cosh(4 * eta) * _ket([((2, 5), e(-2)), ((5, 2), -e(2))], 6, 6)
                         - sinh(2 * eta) * _ket([((1, 6), e(2)), ((6, 1), e(-2))], 6, 6))
        b[10] = pb * _ket([((2, 5), e(4)), ((5, 2), e(-4)), ((1, 6), e(2)), ((6, 1), e(-2)),
                           ((3, 4), 2 * cosh(6 * eta))], 6, 6)
        b[13] = pt * (sinh(2 * eta) / sinh(8 * eta)
                      * _ket([((2, 5), e(4)), ((5, 2), e(-4)), ((1, 6), e(2)), ((6, 1), e(-2))], 6, 6)
                      - _ket([((3, 4), 1 / (2 * cosh(4 * eta)))], 6, 6)
                      + _ket([((4, 3), 1)], 6, 6))
        return np.array([b[i] for i in range(1, 17)]).T

    def basis_pfused(self, sign, eta=None):
        eta = self.eta if eta is None else eta
        e = lambda k: exp(k * eta)
        p0 = _sqrt(sinh(2 * eta) / sinh(6 * eta))
        k = lambda pairs: p0 * _ket(pairs, 4, 6)
        if sign > 0:
            cols = [k([((1, 4), e(-2)), ((2, 2), -1), ((3, 1), e(2))]),
                    k([((1, 5), e(-2)), ((2, 3), 1), ((4, 1), -e(2))]),
                    k([((1, 6), e(-2)), ((3, 3), -1), ((4, 2), e(2))]),
                    k([((2, 6), e(-2)), ((3, 5), 1), ((4, 4), e(2))])]
        else:
            cols = [k([((1, 3), e(-2)), ((2, 2), 1), ((3, 1), e(2))]),
                    k([((1, 5), e(-2)), ((2, 4), -1), ((4, 1), -e(2))]),
                    k([((1, 6), e(-2)), ((3, 4), -1), ((4, 2), e(2))]),
                    k([((2, 6), e(-2)), ((3, 5), -1), ((4, 3), -e(2))])]
        return np.array(cols).T

    def basis_p6(self):
        eta = self.eta
        e = lambda k: exp(k * eta)
        n = 1 / _sqrt(2 * cosh(2 * eta))

        def anti(k, l, s=1):
            return s * n * _ket([((k, l), e(-1)), ((l, k), -e(1))], 4, 4)

        return np.array([anti(1, 2), anti(1, 3), anti(1, 4), anti(2, 3), anti(2, 4, -1),
                         anti(3, 4)]).T

    def projector(self, name: str, side: str = "12") -> Projector:
        """Projector ``name`` in {P1, P16, Pplus, Pminus, P6} on side 12 or 21.

        Side 21 of P1, P16 and P6 is the swap conjugate.  The fused P(+-) act on
        the mixed [4, 6] layout, where side 21 flips the sign of eta.
        """
        if side not in ("12", "21"):
            raise ValueError(f"side must be '12' or '21', got {side!r}")
        if name == "P1":
            b = self.basis_p1()
            b = swap_array(6, 6) @ b if side == "21" else b
        elif name == "P16":
            b = self.basis_p16()
            b = swap_array(6, 6) @ b if side == "21" else b
        elif name in ("Pplus", "Pminus"):
            sign = 1 if name == "Pplus" else -1
            b = self.basis_pfused(sign, -self.eta if side == "21" else self.eta)
        elif name == "P6":
            b = self.basis_p6()
            b = swap_array(4, 4) @ b if side == "21" else b
        else:
            raise ValueError(f"unknown projector {name!r}")
        return Projector.from_basis(b)


def matrix_to_json(m) -> list:
    """Dump a matrix as nested [[re, im], ...] rows."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]
