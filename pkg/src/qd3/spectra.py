"""Spectral layer: common eigenbasis of the transfer family, eigenvalue
relations, the inhomogeneous T-Q relation and its Bethe equations."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np
from numpy import exp, sinh

from .chain import Chain
from .errors import CoincidentRoots, CountingViolation, NearPole
from .la import simultaneous_eigenbasis
from .local_ops import ScalarWeights
from .params import ModelParams, params_digest
from .verify import ResidualRecord

ANCHORS = (0.37 + 0.11j, -0.21 + 0.45j)
POLE_DISTANCE = 1e-8
ROOT_DISTANCE = 1e-6


# --- diagonalization -----------------------------------------------------------

def default_grid(params: ModelParams, n_points: int = 24) -> list:
    """Points on the boundary of the rectangle [-1.5, 1.5] x [-1, 1] (shifted off axis)."""
    per = max(n_points // 4, 1)
    s = np.linspace(0, 1, per, endpoint=False) + 0.5 / per
    pts = [complex(-1.5 + 3 * t, -1) for t in s] + [complex(1.5, -1 + 2 * t) for t in s]
    pts += [complex(1.5 - 3 * t, 1) for t in s] + [complex(-1.5, 1 - 2 * t) for t in s]
    return [p + 0.013 + 0.007j for p in pts[:n_points]]


def special_points(params: ModelParams) -> list:
    eta = complex(params.eta)
    pts = [0.0, 2 * eta, 4 * eta, 8 * eta]
    for t in params.theta:
        pts += [t, -t, t + 4 * eta, -t + 4 * eta, t + 2 * eta, -t + 2 * eta, t + 6 * eta, -t + 6 * eta]
    return [complex(p) for p in pts]


@dataclass
class SpectralFamily:
    u_grid: list
    lam: np.ndarray
    lam_plus: np.ndarray
    basis_condition: float
    params: ModelParams
    basis: np.ndarray = field(repr=False)
    basis_inv: np.ndarray = field(repr=False)
    chain: Chain = field(repr=False)

    @property
    def n_states(self) -> int:
        return self.lam.shape[0]

    def _project(self, m):
        return np.diag(self.basis_inv @ m @ self.basis)

    def lambda_at(self, u):
        return self._project(self.chain.transfer(u))

    def lambda_plus_at(self, u):
        return self._project(self.chain.transfer_fused(u, 1))

    def lambda_minus_at(self, u):
        return self._project(self.chain.transfer_fused(u, -1))

    def eigen_residual(self) -> float:
        """Worst relative off-diagonal weight of B^-1 t B over the grid."""
        worst = 0.0
        for u in self.u_grid[:4]:
            for m in (self.chain.transfer(u), self.chain.transfer_fused(u, 1)):
                d = self.basis_inv @ m @ self.basis
                off = d - np.diag(np.diag(d))
                worst = max(worst, float(np.linalg.norm(off) / max(np.linalg.norm(d), 1e-300)))
        return worst

    def to_json(self) -> dict:
        return {
            "u_grid": [[u.real, u.imag] for u in self.u_grid],
            "lambda": [[[z.real, z.imag] for z in row] for row in self.lam],
            "lambda_plus": [[[z.real, z.imag] for z in row] for row in self.lam_plus],
            "basis_condition": self.basis_condition,
        }


def diagonalize_family(params: ModelParams, u_grid=None, seed: int = 0) -> SpectralFamily:
    if params.n_sites > 3:
        raise ValueError("spectral layer supports N <= 3")
    chain = Chain(params)
    grid = [complex(u) for u in (default_grid(params) if u_grid is None else u_grid)]
    fam = [chain.transfer(ANCHORS[0]), chain.transfer_fused(ANCHORS[1], 1),
           chain.transfer(ANCHORS[1]), chain.transfer_fused(ANCHORS[0], 1)]
    basis, _ = simultaneous_eigenbasis(fam, tol=params.tol_identity, rng=np.random.default_rng(seed))
    inv = np.linalg.inv(basis)
    lam = np.array([np.diag(inv @ chain.transfer(u) @ basis) for u in grid]).T
    lamp = np.array([np.diag(inv @ chain.transfer_fused(u, 1) @ basis) for u in grid]).T
    # canonical state order, independent of the eig ordering
    key = np.round(lam[:, 0], 8)
    order = sorted(range(len(key)), key=lambda i: (key[i].real, key[i].imag))
    basis, inv = basis[:, order], inv[order, :]
    return SpectralFamily(grid, lam[order], lamp[order], float(np.linalg.cond(basis)),
                          params, basis, inv, chain)


# --- eigenvalue relations --------------------------------------------------------

def _rel(lhs, rhs):
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    return np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)


def brace_lambda(params: ModelParams, m1: int, m2: int, side: int) -> complex:
    """Leading coefficient of Lambda at u -> +inf (side=1) or -inf (side=-1).

    Tilded boundary constants are the right-boundary (primed) parameters.
    """
    eta, N = complex(params.eta), params.n_sites
    L, R = params.left, params.right
    e = lambda k: cmath.exp(k * eta)
    X = L.c1 * R.c3 * e(-2) + R.c1 * L.c3 * e(2)
    cc = L.c * (R.c + cmath.exp(-R.c2))
    tc = R.c * (L.c + cmath.exp(-L.c2))
    d = m1 - m2 if side > 0 else m2 - m1
    br = cc * e(4 * d) + tc * e(-4 * d) + (e(2 * (m1 + m2 - N - 1)) + e(-2 * (m1 + m2 - N - 1))) * X
    pref = e(-(8 * N + 4)) if side > 0 else e(8 * N + 12)
    return -pref * br / 4 ** (N + 1)


def brace_lambda_plus(params: ModelParams, m1: int, m2: int, side: int) -> complex:
    eta, N = complex(params.eta), params.n_sites
    L, R = params.left, params.right
    e = lambda k: cmath.exp(k * eta)
    X = L.c1 * R.c3 * e(-2) + R.c1 * L.c3 * e(2)
    if side > 0:
        br = L.c * (R.c + cmath.exp(-R.c2)) * (e(2 * (2 * m1 - N - 1)) + e(2 * (N + 1 - 2 * m2))) + e(2 * (m2 - m1)) * X
        return -e(-4 * (N + 1)) * br / 4 ** (N + 1)
    br = R.c * (L.c + cmath.exp(-L.c2)) * (e(2 * (2 * m2 - N - 1)) + e(2 * (N + 1 - 2 * m1))) + e(2 * (m1 - m2)) * X
    return -e(4 * (N + 3)) * br / 4 ** (N + 1)


def quantum_number_pairs(n_sites: int) -> list:
    return [(a, b) for a in range(n_sites + 1) for b in range(n_sites + 1 - a)]


def _asymptotic_records(fam, rec, umax):
    p = fam.params
    N = p.n_sites
    out = []
    for name, fn, expo, brace in (("Lambda", fam.lambda_at, 2 * (N + 1), brace_lambda),
                                  ("Lambda_plus", fam.lambda_plus_at, N + 2, brace_lambda_plus)):
        for side, tag in ((1, "+inf"), (-1, "-inf")):
            u0, u1 = side * umax, side * (umax + 1)
            v0, v1 = fn(u0), fn(u1)
            slope = np.log(np.abs(v1)) - np.log(np.abs(v0))
            slope_err = np.abs(slope - expo) / expo
            lead = v0 / np.exp(expo * umax)
            pairs, const_err = [], []
            for i in range(fam.n_states):
                best = min(((float(_rel(lead[i], brace(p, a, b, side))), (a, b))
                            for a, b in quantum_number_pairs(N)), key=lambda t: t[0])
                const_err.append(best[0])
                pairs.append(list(best[1]))
            out.append(rec(f"EIG.asymptotic.{name}.exponent.{tag}", [(u0,), (u1,)], slope_err, 0.01,
                           expected_exponent=expo, fitted=[float(s) for s in slope]))
            out.append(rec(f"EIG.asymptotic.{name}.constant.{tag}", [(u0,)], const_err, 1e-4,
                           matched_pairs=pairs, tilde_identification="tilde = right boundary parameters"))
    return out


def laurent_degree(fam: SpectralFamily, n_samples: int | None = None) -> dict:
    """Fit Lambda on u = i*phi, phi in [0, 4 pi), as a Laurent polynomial in exp(u/2)."""
    bound = 2 * (4 * fam.params.n_sites + 4)
    n_samples = 2 * bound + 8 if n_samples is None else n_samples
    phi = 4 * np.pi * np.arange(n_samples) / n_samples
    vals = np.array([fam.lambda_at(1j * f) for f in phi])
    coef = np.fft.fft(vals, axis=0) / n_samples
    k = np.fft.fftfreq(n_samples, 1 / n_samples).astype(int)
    scale = np.max(np.abs(coef))
    live = np.any(np.abs(coef) > 1e-10 * scale, axis=1)
    powers = sorted(int(x) for x in k[live])
    return {"powers_of_exp_half_u": powers, "max_abs_power": max(abs(x) for x in powers),
            "degree_bound": bound, "odd_powers_present": any(x % 2 for x in powers),
            "within_bound": max(abs(x) for x in powers) <= bound}


def check_eigen_relations(fam: SpectralFamily, umax: float = 40.0) -> list:
    p = fam.params
    w = ScalarWeights(p)
    eta, N, th = complex(p.eta), p.n_sites, p.theta
    dig = params_digest(p)
    tol = p.tol_spectral
    h = lambda x, k: w.h(x)[k]
    ht = lambda x, k: w.h_tilde(x)[k]
    a = lambda x: w.vector(x)["a"]
    e = lambda x: w.vector(x)["e"]

    def rec(cid, pts, res, thr, **diag):
        res = np.atleast_1d(np.asarray(res, dtype=float))
        return ResidualRecord(cid, dig, list(pts), float(np.max(res)), thr,
                              diagnostics={"per_state": [float(r) for r in res], **diag})

    L, Lp, Lm = fam.lambda_at, fam.lambda_plus_at, fam.lambda_minus_at
    out = []
    grid = fam.u_grid
    out.append(rec("EIG.crossing", [(u,) for u in grid],
                   np.max([_rel(L(u), L(-u + 8 * eta)) for u in grid], axis=0), tol))
    out.append(rec("EIG.crossing_fused", [(u,) for u in grid],
                   np.max([_rel(Lp(-u + 8 * eta), exp(8 * eta) * Lm(u)) for u in grid], axis=0), tol))

    pr = lambda x: np.prod([w.rho_t0(x - q) * w.rho_t0(x + q) for q in th])
    for j, x in enumerate(th, start=1):
        sf = (sinh(x - 6 * eta) * sinh(x - 8 * eta) * sinh(x + 6 * eta) * sinh(x + 8 * eta)
              / (sinh(x - 2 * eta) * sinh(x - 4 * eta) * sinh(x + 2 * eta) * sinh(x + 4 * eta)))
        dq = (h(x - 2 * eta, "h1") * h(x + 2 * eta, "h2") * ht(x - 2 * eta, "h1") * ht(x + 2 * eta, "h2")
              * np.prod([a(x - q) * e(x - q + 8 * eta) * a(x + q) * e(x + q + 8 * eta) for q in th]))
        out.append(rec(f"EIG.qdet.j{j}", [(x,), (-x,)], _rel(L(x) * L(-x), sf * dq), tol))
        for sg, tag in ((1, "plus"), (-1, "minus")):
            y = sg * x
            rhs = (sinh(y + 4 * eta) * sinh(y - 8 * eta) / (sinh(y + 2 * eta) * sinh(y - 6 * eta))
                   * pr(y) * 4 ** (2 * N) * Lp(y + 2 * eta) * Lp(-y + 6 * eta))
            out.append(rec(f"EIG.fusion16.j{j}.{tag}", [(y,), (-y + 4 * eta,)], _rel(L(y) * L(-y + 4 * eta), rhs), tol))
        rhs = (sinh(x + 6 * eta) * sinh(x - 8 * eta) / (sinh(x + 2 * eta) * sinh(x - 4 * eta)) * pr(x)
               * h(x + 2 * eta, "h2") * ht(x - 2 * eta, "h1") * 2 ** (2 * N) * Lp(-x + 6 * eta))
        out.append(rec(f"EIG.fusion_plus.j{j}", [(x,), (x + 6 * eta,)], _rel(L(x) * Lp(x + 6 * eta), rhs), tol))

    rho1 = np.prod([w.rho1(q) for q in th])
    rhos = np.prod([w.rho_s(q) for q in th])
    out.append(rec("EIG.special.Lambda.0", [(0.0,)], _rel(
        L(0.0), -sinh(6 * eta) * sinh(8 * eta) / (sinh(2 * eta) * sinh(4 * eta))
        * h(2 * eta, "h2") * ht(2 * eta, "h2") * rho1), tol))
    out.append(rec("EIG.special.Lambda.2eta", [(2 * eta,), (4 * eta,)], _rel(
        L(2 * eta), 2 ** (2 * N) * sinh(6 * eta) / sinh(4 * eta) * rhos * Lp(4 * eta)), tol))
    out.append(rec("EIG.special.Lambda_plus.0", [(0.0,)], _rel(
        Lp(0.0), -sinh(8 * eta) / sinh(2 * eta) * h(0.0, "h2") * ht(4 * eta, "h2") * rhos), tol))
    out.append(rec("EIG.special.Lambda_plus.8eta", [(8 * eta,)], _rel(
        Lp(8 * eta), sinh(8 * eta) / sinh(2 * eta) * h(4 * eta, "h2") * ht(0.0, "h1") * rhos), tol))

    out += _asymptotic_records(fam, rec, umax)
    deg = laurent_degree(fam)
    out.append(ResidualRecord("EIG.laurent_degree", dig, [], 0.0 if deg["within_bound"] else 1.0, 0.5,
                              diagnostics=deg))
    return out


# --- T-Q relation ----------------------------------------------------------------

@dataclass(frozen=True)
class BetheState:
    mu1: tuple
    mu2: tuple
    mu3: tuple
    x: complex
    n_sites: int

    def __post_init__(self):
        for name in ("mu1", "mu2", "mu3"):
            object.__setattr__(self, name, tuple(complex(z) for z in getattr(self, name)))
        object.__setattr__(self, "x", complex(self.x))
        L1, L2, L3, N = len(self.mu1), len(self.mu2), len(self.mu3), self.n_sites
        if L1 != L2 + L3 + N:
            raise CountingViolation(f"L1={L1} but L2+L3+N={L2 + L3 + N}")
        if not (0 <= L1 <= 2 * N and L2 + L3 <= N):
            raise CountingViolation(f"root numbers ({L1},{L2},{L3}) out of range for N={N}")

    @property
    def m1(self) -> int:
        return len(self.mu2)

    @property
    def m2(self) -> int:
        return len(self.mu3)

    @property
    def sector(self):
        return (len(self.mu1), len(self.mu2), len(self.mu3))

    def canonical(self) -> tuple:
        return tuple(tuple(sorted(canonical_root(z) for z in g)) for g in (self.mu1, self.mu2, self.mu3))

    def to_json(self) -> dict:
        c = lambda g: [[z.real, z.imag] for z in g]
        can = self.canonical()
        return {"mu1": [list(z) for z in can[0]], "mu2": [list(z) for z in can[1]], "mu3": [list(z) for z in can[2]],
                "x": [self.x.real, self.x.imag], "m1": self.m1, "m2": self.m2}


def canonical_root(z: complex) -> tuple:
    """Representative of z modulo 2*pi*i and z -> -z, rounded for comparison."""
    z = complex(z)
    z = complex(z.real, (z.imag + np.pi) % (2 * np.pi) - np.pi)
    if z.real < -1e-12 or (abs(z.real) <= 1e-12 and z.imag < 0):
        z = -z
        z = complex(z.real, (z.imag + np.pi) % (2 * np.pi) - np.pi)
    return (round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0)


def x_parameter(L1: int, params: ModelParams) -> complex:
    eta = complex(params.eta)
    L, R = params.left, params.right
    e = lambda k: cmath.exp(k * eta)
    return (-e(4) * (L.c1 * R.c3 * e(-2) + R.c1 * L.c3 * e(2))
            + L.c * (R.c + cmath.exp(-R.c2)) * e(4 + 2 * (L1 + 1))
            + R.c * (L.c + cmath.exp(-L.c2)) * e(4 - 2 * (L1 + 1)))


def make_state(mu1, mu2, mu3, params: ModelParams) -> BetheState:
    return BetheState(tuple(mu1), tuple(mu2), tuple(mu3), x_parameter(len(mu1), params), params.n_sites)


def _q(u, roots, shift, guard=None):
    out = 1.0 + 0j
    for m in roots:
        for f in (sinh((u - m - shift) / 2), sinh((u + m - shift) / 2)):
            if guard is not None and abs(f) < POLE_DISTANCE:
                raise NearPole(f"{guard} vanishes at u={complex(u)}")
            out *= f
    return out


class _TQ:
    def __init__(self, state: BetheState, params: ModelParams):
        self.s, self.p = state, params
        self.w = ScalarWeights(params)
        self.eta = complex(params.eta)

    def Q1(self, v, g=None):
        return _q(v, self.s.mu1, 2 * self.eta, g)

    def Q2(self, v, g=None):
        return _q(v, self.s.mu2, 4 * self.eta, g)

    def Q3(self, v, g=None):
        return _q(v, self.s.mu3, 4 * self.eta, g)

    def h(self, x, k):
        return self.w.h(x)[k]

    def ht(self, x, k):
        return self.w.h_tilde(x)[k]

    def _guard_sinh(self, u, shifts):
        for k in shifts:
            if abs(sinh(u - k * self.eta)) < POLE_DISTANCE:
                raise NearPole(f"sinh(u - {k} eta) vanishes at u={complex(u)}")

    def terms(self, u):
        eta, th, w = self.eta, self.p.theta, self.w
        self._guard_sinh(u, (2, 4, 6))
        a = lambda x: w.vector(x)["a"]
        b = lambda x: w.vector(x)["b"]
        e = lambda x: w.vector(x)["e"]
        h, ht = self.h, self.ht
        Q1, Q2, Q3 = self.Q1, self.Q2, self.Q3
        q1u, q1m = Q1(u, "Q1(u)"), Q1(u - 4 * eta, "Q1(u-4eta)")
        q2u, q3u = Q2(u, "Q2(u)"), Q3(u, "Q3(u)")
        A = np.prod([a(u - q) * a(u + q) for q in th])
        C = np.prod([e(u - q) * e(u + q) for q in th])
        B = sinh(u) * sinh(u - 8 * eta) / sinh(u - 4 * eta) ** 2 * np.prod([b(u - q) * b(u + q) for q in th])
        F = (sinh(u) * sinh(u - 8 * eta) / sinh(u - 4 * eta)
             * np.prod([a(u - q) * a(u + q) * sinh((u - q) / 2) * sinh((u + q) / 2) for q in th]))
        x = self.s.x
        q2p, q3p = Q2(u + 4 * eta), Q3(u + 4 * eta)
        q2n, q3n = Q2(u - 4 * eta), Q3(u - 4 * eta)
        z1 = (sinh(u - 6 * eta) * sinh(u - 8 * eta) / (sinh(u - 2 * eta) * sinh(u - 4 * eta)) * A
              * h(u + 2 * eta, "h2") * ht(u - 2 * eta, "h1") * Q1(u + 4 * eta) / q1u)
        z2 = (sinh(u - 6 * eta) / sinh(u - 2 * eta) * B * h(u - 6 * eta, "h1") * ht(u - 2 * eta, "h2")
              * q1m * q2p * q3p / (q1u * q2u * q3u))
        z3 = B * h(u - 2 * eta, "h2") * ht(u - 6 * eta, "h1") * q2p * q3n / (q2u * q3u)
        z4 = B * h(u - 6 * eta, "h1") * ht(u - 2 * eta, "h2") * q2n * q3p / (q2u * q3u)
        z5 = (sinh(u - 2 * eta) / sinh(u - 6 * eta) * B * h(u - 2 * eta, "h2") * ht(u - 6 * eta, "h1")
              * q1u * q2n * q3n / (q1m * q2u * q3u))
        z6 = (sinh(u) * sinh(u - 2 * eta) / (sinh(u - 4 * eta) * sinh(u - 6 * eta)) * C
              * h(u - 10 * eta, "h1") * ht(u - 6 * eta, "h2") * Q1(u - 8 * eta) / q1m)
        f1 = x * sinh(u - 6 * eta) * q2p * q3p / q1u * F
        f2 = x * sinh(u - 2 * eta) * q2n * q3n / q1m * F
        return (z1, z2, z3, z4, z5, z6, f1, f2)

    def terms_plus(self, u):
        eta, th, w = self.eta, self.p.theta, self.w
        self._guard_sinh(u, (2, 4, 6))
        h, ht = self.h, self.ht
        Q1, Q2, Q3 = self.Q1, self.Q2, self.Q3
        a1 = lambda x: w.fused(x)["a1"]
        b1 = lambda x: w.fused(x)["b1"]
        q1 = Q1(u - 2 * eta, "Q1(u-2eta)")
        q2 = Q2(u + 2 * eta, "Q2(u+2eta)")
        q3 = Q3(u - 2 * eta, "Q3(u-2eta)")
        A1 = np.prod([a1(u - q) * a1(u + q) for q in th])
        B1 = np.prod([b1(u - q) * b1(u + q) for q in th])
        pre1 = A1 * h(u, "h2") * ht(u - 4 * eta, "h1") * sinh(u - 8 * eta) / sinh(u - 2 * eta)
        t1 = pre1 * Q2(u + 6 * eta) / q2
        t2 = pre1 * sinh(u) / sinh(u - 4 * eta) * Q1(u + 2 * eta) * Q2(u - 2 * eta) / (q1 * q2)
        pre2 = B1 * sinh(u) / sinh(u - 6 * eta)
        t3 = pre2 * h(u - 4 * eta, "h2") * ht(u - 8 * eta, "h1") * Q3(u - 6 * eta) / q3
        t4 = (pre2 * sinh(u - 8 * eta) / sinh(u - 4 * eta) * h(u - 8 * eta, "h1") * ht(u - 4 * eta, "h2")
              * Q1(u - 6 * eta) * Q3(u + 2 * eta) / (q1 * q3))
        t5 = self.s.x * sinh(u) * sinh(u - 8 * eta) * A1 * B1 * Q2(u - 2 * eta) * Q3(u + 2 * eta) / q1
        return (t1, t2, t3, t4, t5)


def tq_lambda(u, state: BetheState, params: ModelParams) -> complex:
    return complex(sum(_TQ(state, params).terms(complex(u))))


def tq_lambda_plus(u, state: BetheState, params: ModelParams) -> complex:
    return complex(sum(_TQ(state, params).terms_plus(complex(u))))


def _check_coincident(state: BetheState):
    for g in (state.mu1, state.mu2, state.mu3):
        for i in range(len(g)):
            for j in range(i):
                for s in (1, -1):
                    if abs(cmath.exp(g[i]) - cmath.exp(s * g[j])) < ROOT_DISTANCE:
                        raise CoincidentRoots(f"roots {g[j]} and {g[i]} coincide")


def _bae_raw(mu1, mu2, mu3, x, params, w):
    eta, th = complex(params.eta), params.theta
    Q1 = lambda v: _q(v, mu1, 2 * eta)
    Q2 = lambda v: _q(v, mu2, 4 * eta)
    Q3 = lambda v: _q(v, mu3, 4 * eta)
    h = lambda v, k: w.h(v)[k]
    ht = lambda v, k: w.h_tilde(v)[k]
    out = []
    for m in mu1:
        d1 = np.prod([sinh((m + 2 * eta - q) / 2) * sinh((m + 2 * eta + q) / 2) for q in th])
        d2 = np.prod([sinh((m - 2 * eta - q) / 2) * sinh((m - 2 * eta + q) / 2) for q in th])
        t1 = sinh(m - 2 * eta) * h(m + 4 * eta, "h2") * ht(m, "h1") / d1 * Q1(m + 6 * eta) / (Q2(m + 6 * eta) * Q3(m + 6 * eta))
        t2 = sinh(m + 2 * eta) * h(m - 4 * eta, "h1") * ht(m, "h2") / d2 * Q1(m - 2 * eta) / (Q2(m + 2 * eta) * Q3(m + 2 * eta))
        out.append(t1 + t2 + x * sinh(m) * sinh(m + 2 * eta) * sinh(m - 2 * eta))
    for m in mu2:
        out.append(Q1(m) * Q2(m + 8 * eta) * sinh(m - 2 * eta) + sinh(m + 2 * eta) * Q1(m + 4 * eta) * Q2(m))
    for m in mu3:
        out.append(Q1(m) * Q3(m + 8 * eta) * sinh(m - 2 * eta) * h(m - 2 * eta, "h1") * ht(m + 2 * eta, "h2")
                   + sinh(m + 2 * eta) * h(m + 2 * eta, "h2") * ht(m - 2 * eta, "h1") * Q1(m + 4 * eta) * Q3(m))
    return np.array(out, dtype=complex)


def bae_residuals(state: BetheState, params: ModelParams) -> np.ndarray:
    """One cleared-form residual per root, ordered mu1, mu2, mu3."""
    _check_coincident(state)
    return _bae_raw(state.mu1, state.mu2, state.mu3, state.x, params, ScalarWeights(params))


def newton(fun, z, maxit: int = 200, tol: float = 1e-13):
    """Damped Newton with a finite-difference Jacobian and backtracking."""
    z = np.asarray(z, dtype=complex)
    r = fun(z)
    for _ in range(maxit):
        if not np.all(np.isfinite(r)):
            return z, np.inf
        nr = np.linalg.norm(r)
        if nr < tol:
            break
        J = np.empty((len(z), len(z)), dtype=complex)
        for k in range(len(z)):
            hk = 1e-7 * max(1.0, abs(z[k]))
            dz = np.zeros(len(z), dtype=complex)
            dz[k] = hk
            J[:, k] = (fun(z + dz) - fun(z - dz)) / (2 * hk)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return z, np.inf
        lam = 1.0
        while lam > 1e-4:
            zn = z + lam * step
            rn = fun(zn)
            if np.all(np.isfinite(rn)) and np.linalg.norm(rn) < (1 - 1e-4 * lam) * nr:
                break
            lam /= 2
        z, r = zn, rn
    return z, float(np.max(np.abs(r))) if len(r) else 0.0


class StateList(list):
    """List of BetheState with solver diagnostics attached."""

    diagnostics: dict


def solve_bae(L1: int, L2: int, L3: int, params: ModelParams, n_starts: int = 64, seed: int = 0) -> StateList:
    N = params.n_sites
    if L1 != L2 + L3 + N:
        raise CountingViolation(f"L1={L1} but L2+L3+N={L2 + L3 + N}")
    if not (0 <= L1 <= 2 * N and L2 + L3 <= N):
        raise CountingViolation(f"root numbers ({L1},{L2},{L3}) out of range for N={N}")
    eta = complex(params.eta)
    w = ScalarWeights(params)
    x = x_parameter(L1, params)
    n = L1 + L2 + L3
    rng = np.random.default_rng(seed)
    th = list(params.theta)

    def split(z):
        return list(z[:L1]), list(z[L1:L1 + L2]), list(z[L1 + L2:])

    def fun(z):
        # every equation vanishes identically at mu in {0, +-2 eta} (mod i pi); divide those out
        with np.errstate(all="ignore"):
            return _bae_raw(*split(z), x, params, w) / (np.sinh(z) * np.sinh(z - 2 * eta) * np.sinh(z + 2 * eta))

    found = {}
    stats = {"starts": n_starts, "converged": 0, "rejected_coincident": 0, "rejected_trivial": 0}
    trivial = [0.0, 2 * eta, -2 * eta]
    for _ in range(n_starts):
        centers = [rng.choice([1, -1]) * th[rng.integers(N)] + rng.integers(-3, 4) * eta for _ in range(n)]
        z0 = np.array(centers) + 0.1 * (rng.normal(size=n) + 1j * rng.normal(size=n))
        with np.errstate(all="ignore"):
            z, res = newton(fun, z0)
        if not res <= 1e-9:
            continue
        if any(abs(np.sinh(zz - b)) < 1e-5 or abs(np.sinh(zz + b)) < 1e-5 for zz in z for b in trivial):
            stats["rejected_trivial"] += 1
            continue
        st = make_state(*split(z), params)
        try:
            r = bae_residuals(st, params)
        except CoincidentRoots:
            stats["rejected_coincident"] += 1
            continue
        if np.max(np.abs(r), initial=0.0) > 1e-9:
            continue
        stats["converged"] += 1
        key = st.canonical()
        dup = next((k for k in found if _key_distance(k, key) < ROOT_DISTANCE), None)
        if dup is None:
            found[key] = st
    out = StateList(found[k] for k in sorted(found))
    stats["distinct"] = len(out)
    out.diagnostics = stats
    return out


def _key_distance(a, b) -> float:
    d = 0.0
    for ga, gb in zip(a, b):
        for za, zb in zip(ga, gb):
            d = max(d, abs(complex(*za) - complex(*zb)))
    return d


# --- matching and energies ------------------------------------------------------

def tq_curve(state: BetheState, params: ModelParams, grid) -> np.ndarray:
    """tq_lambda over the grid; NaN where a pole guard fires."""
    out = []
    for u in grid:
        try:
            out.append(tq_lambda(u, state, params))
        except NearPole:
            out.append(np.nan)
    return np.array(out)


def match_tq_to_spectrum(fam: SpectralFamily, states) -> dict:
    """Greedy sup-norm matching of T-Q curves to family rows."""
    scale = float(np.max(np.abs(fam.lam))) if fam.lam.size else 1.0
    dev = np.full((len(states), fam.n_states), np.inf)
    for s, st in enumerate(states):
        c = tq_curve(st, fam.params, fam.u_grid)
        ok = np.isfinite(c)
        if ok.any():
            dev[s] = np.max(np.abs(fam.lam[:, ok] - c[ok]), axis=1) / scale
    matches, used_rows, used_states = [], set(), set()
    pairs = sorted((dev[s, r], s, r) for s in range(len(states)) for r in range(fam.n_states))
    for d, s, r in pairs:
        if s in used_states or r in used_rows or not np.isfinite(d):
            continue
        matches.append({"state": s, "row": r, "deviation": float(d)})
        used_states.add(s)
        used_rows.add(r)
    clashes = []
    for s in range(len(states)):
        if len(states) and fam.n_states:
            best = int(np.argmin(dev[s]))
            others = [t for t in range(len(states)) if t != s and int(np.argmin(dev[t])) == best]
            if others and dev[s, best] < 1e-6:
                clashes.append({"state": s, "row": best, "also_best_for": others})
    matches.sort(key=lambda m: m["state"])
    return {"matches": matches,
            "unmatched_rows": [r for r in range(fam.n_states) if r not in used_rows],
            "shared_best_row": clashes}


def _log_derivative_at_zero(fn, h: float):
    """Richardson-extrapolated d/du ln f at 0 via log(f(h)/f(-h)) / 2h."""
    def central(s):
        return np.log(fn(s) / fn(-s)) / (2 * s)

    d1, d2 = central(h), central(h / 2)
    return (4 * d2 - d1) / 3


def _require_homogeneous(params):
    if any(abs(t) > 0 for t in params.theta):
        raise ValueError("energy needs the homogeneous point (all theta = 0)")


def energy_tq(state: BetheState, params: ModelParams, h: float = 1e-3) -> complex:
    _require_homogeneous(params)
    return complex(_log_derivative_at_zero(lambda u: tq_lambda(u, state, params), h))


def energy_spectral(fam: SpectralFamily, h: float = 1e-3) -> np.ndarray:
    _require_homogeneous(fam.params)
    return _log_derivative_at_zero(fam.lambda_at, h)


def energy(obj, params: ModelParams | None = None, h: float = 1e-3):
    """Energy of a BetheState (T-Q route) or of every row of a SpectralFamily."""
    if isinstance(obj, SpectralFamily):
        return energy_spectral(obj, h)
    return energy_tq(obj, params, h)


def residue_check(state: BetheState, params: ModelParams, radius: float = 1e-3, n: int = 64) -> float:
    """Largest |contour residue| of Lambda and Lambda_+ at the Q-zeros, relative to the term residues."""
    eta = complex(params.eta)
    tq = _TQ(state, params)
    phi = 2 * np.pi * np.arange(n) / n
    centers = []
    for m in state.mu1:
        centers += [("L", s * m + k * eta) for s in (1, -1) for k in (2, 6)]
        centers += [("P", s * m + 4 * eta) for s in (1, -1)]
    for m in state.mu2:
        centers += [("L", s * m + 4 * eta) for s in (1, -1)] + [("P", s * m + 2 * eta) for s in (1, -1)]
    for m in state.mu3:
        centers += [("L", s * m + 4 * eta) for s in (1, -1)] + [("P", s * m + 6 * eta) for s in (1, -1)]
    worst = 0.0
    for kind, c in centers:
        fn = tq.terms if kind == "L" else tq.terms_plus
        pts = c + radius * np.exp(1j * phi)
        try:
            terms = np.array([fn(u) for u in pts])
        except NearPole:
            continue
        dz = 1j * radius * np.exp(1j * phi)
        term_res = np.abs(np.mean(terms * dz[:, None], axis=0))
        total = abs(np.mean(terms.sum(axis=1) * dz))
        scale = max(float(np.max(term_res)), 1e-300)
        # regular points yield term residues at roundoff level; skip them
        if np.max(term_res) < 1e-10 * np.max(np.abs(terms)) * radius:
            continue
        worst = max(worst, total / scale)
    return worst
