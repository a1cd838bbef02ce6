"""Identity catalog.

Every identity is a named check producing a :class:`ResidualRecord`.  Fusion
identities are evaluated through isometries: with basis-column matrices U_L,
U_R of the relevant projectors, the check compares ``U_L^T X U_R`` with the
fused object.
"""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy import exp, sinh

from .chain import Chain
from .la import (column_space, embed_array, kron_array, max_subspace_angle,
                 numerical_rank, partial_trace_array, partial_transpose_array,
                 relative_residual, swap_array)
from .local_ops import LocalOps
from .params import ModelParams, params_digest, sample_generic_point

ISOMETRY_NOTE = "U_L^T X U_R with bilinear-orthonormal basis columns"

CATALOG = {
    "local": [
        "REG.vector",
        "TRANS.vector", "TRANS.spinorial",
        "UNIT.vector", "UNIT.fused_plus", "UNIT.fused_minus", "UNIT.pm", "UNIT.spinorial",
        "CU.vector.t1", "CU.vector.t2", "CU.fused_plus", "CU.fused_minus", "CU.pm", "CU.spinorial",
        "CROSS.vector.V1", "CROSS.vector.V2", "CROSS.fused.plus", "CROSS.fused.minus",
        "MCOMM.vector", "TWIST.identities",
        "YBE.vector", "YBE.fused_plus", "YBE.fused_minus", "YBE.pm",
        "YBE.spinorial", "YBE.spinorial_fused_plus", "YBE.spinorial_fused_minus",
        "RE.vector", "RE.fused_plus", "RE.fused_minus", "RE.pm", "RE.spinorial_plus", "RE.spinorial_minus",
        "DRE.vector", "DRE.fused_plus", "DRE.fused_minus", "DRE.pm", "DRE.spinorial_plus", "DRE.spinorial_minus",
        "KTRACE.vector_bar", "KTRACE.vector", "KTRACE.spinorial_bar", "KTRACE.spinorial",
    ],
    "degenerations": [
        "DEGEN.R.8eta", "DEGEN.R.4eta", "DEGEN.R.-4eta", "DEGEN.R.-8eta",
        "DEGEN.Rplus.6eta", "DEGEN.Rminus.6eta", "DEGEN.Rspinorial.4eta",
        "PROJ.P1", "PROJ.P16", "PROJ.Pplus", "PROJ.Pminus", "PROJ.P6",
    ],
    "fusion_r": [
        "FUSE.R.P1.12", "FUSE.R.P1.21",
        "FUSE.R.P16.12", "FUSE.R.P16.21", "FUSE.R.P16.21bar", "FUSE.S.recovered",
        "FUSE.R.Pplus.12", "FUSE.R.Pplus.21", "FUSE.R.Pminus.12", "FUSE.R.Pminus.21",
        "FUSE.R.P6.spinorial", "FUSE.R.P6.vector",
    ],
    "fusion_k": [
        "FUSE.K.P1", "FUSE.KBAR.P1", "FUSE.K.P16", "FUSE.KBAR.P16",
        "FUSE.K.Pplus", "FUSE.KBAR.Pplus", "FUSE.K.Pminus", "FUSE.KBAR.Pminus",
        "FUSE.K.P6", "FUSE.KBAR.P6",
    ],
    "transfer": [
        "YBR.monodromy", "CROSS.monodromy",
        "COMM.t.t", "COMM.t.tplus", "COMM.t.tminus", "COMM.tplus.tplus",
        "COMM.tminus.tminus", "COMM.tplus.tminus",
        "CROSS.transfer", "CROSS.fused_transfer",
        "QDET", "FUSE.T.P16", "FUSE.T.Pplus", "FUSE.T.Pminus",
    ],
}

# ids produced by the spectral layer and the bae command; {j} is a site index,
# {k} a state index, {side} one of +inf/-inf
CATALOG_TEMPLATES = {
    "spectral": [
        "EIG.crossing", "EIG.crossing_fused", "EIG.qdet.j{j}",
        "EIG.fusion16.j{j}.plus", "EIG.fusion16.j{j}.minus", "EIG.fusion_plus.j{j}",
        "EIG.special.Lambda.0", "EIG.special.Lambda.2eta",
        "EIG.special.Lambda_plus.0", "EIG.special.Lambda_plus.8eta",
        "EIG.asymptotic.Lambda.exponent.{side}", "EIG.asymptotic.Lambda.constant.{side}",
        "EIG.asymptotic.Lambda_plus.exponent.{side}", "EIG.asymptotic.Lambda_plus.constant.{side}",
        "EIG.laurent_degree",
    ],
    "bae": ["BAE.state{k}.residual", "BAE.state{k}.residue_free", "BAE.state{k}.match"],
}

SCOPES = {
    "local": ("local", "degenerations"),
    "fusion": ("fusion_r", "fusion_k"),
    "transfer": ("transfer",),
    "all": ("local", "degenerations", "fusion_r", "fusion_k", "transfer"),
}

LOCAL_THRESHOLD = 1e-10
FUSION_THRESHOLD = 1e-9
TRANSFER_THRESHOLD = 1e-8
ANGLE_THRESHOLD = 1e-8


def all_check_ids() -> list:
    return [c for group in CATALOG.values() for c in group]


def _template_regex(t):
    out = re.escape(t)
    for key, pat in (("j", r"[1-9]\d*"), ("k", r"\d+"), ("side", r"[+-]inf")):
        out = out.replace(re.escape("{" + key + "}"), pat)
    return re.compile(out + r"\Z")


_TEMPLATE_RES = [_template_regex(t) for g in CATALOG_TEMPLATES.values() for t in g]


def known_check_id(check_id: str) -> bool:
    """True when ``check_id`` is in the static catalog or matches a catalog template."""
    return check_id in set(all_check_ids()) or any(r.match(check_id) for r in _TEMPLATE_RES)


@dataclass
class ResidualRecord:
    check_id: str
    params_digest: str
    sample_points: list
    residual: float
    threshold: float
    passed: bool = field(init=False)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual <= self.threshold)

    def to_json(self) -> dict:
        d = asdict(self)
        d["sample_points"] = [[[complex(z).real, complex(z).imag] for z in pt] for pt in self.sample_points]
        return d


def _res(lhs, rhs) -> float:
    return relative_residual(lhs, rhs)


class _Context:
    def __init__(self, params: ModelParams, seed: int):
        self.p = params
        self.ops = LocalOps(params)
        self.w = self.ops.w
        self.eta = complex(params.eta)
        self.digest = params_digest(params)
        self.rng = np.random.default_rng(seed)
        eta = self.eta
        self.excl = [0.0] + [k * eta for k in (2, -2, 4, -4, 6, -6, 8, -8, 10, -10, 12, -12, 16, -16)]

    def points(self, n, k=1):
        return [tuple(sample_generic_point(self.rng, self.excl) for _ in range(k)) for _ in range(n)]

    def record(self, cid, pts, residuals, threshold, **diag):
        return ResidualRecord(cid, self.digest, list(pts), max(residuals), threshold, diagnostics=diag)


# --- local identities --------------------------------------------------------

def _r21_equal(r, d):
    s = swap_array(d, d)
    return s @ r @ s


def check_local(params: ModelParams, n_samples: int = 10, seed: int = 0) -> list:
    """Unitarity, crossing, YBE, reflection equations and related local identities."""
    cx = _Context(params, seed)
    ops, w, eta = cx.ops, cx.w, cx.eta
    tw = ops.twists()
    M, V, Mb, Vb, W = tw["M"], tw["V"], tw["Mbar"], tw["Vbar"], tw["W"]
    I4, I6 = np.eye(4), np.eye(6)
    R, Rt, Rpm = ops.r_vector, ops.r_spinorial, ops.r_pm
    Rp, Rm = ops.r_plus, ops.r_minus
    P66 = swap_array(6, 6)
    out = []
    one = cx.points(n_samples)
    two = cx.points(n_samples, 2)
    three = cx.points(n_samples, 3)

    out.append(cx.record("REG.vector", [(0.0,)], [_res(R(0.0), w.vector(0.0)["a"] * P66)], LOCAL_THRESHOLD))
    out.append(cx.record("TRANS.vector", one, [_res(P66 @ R(u) @ P66, R(u).T) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("TRANS.spinorial", one,
                         [_res(_r21_equal(Rt(u), 4), Rt(u).T) for (u,) in one], LOCAL_THRESHOLD))

    # unitarity
    a = lambda x: w.vector(x)["a"]
    out.append(cx.record("UNIT.vector", one,
                         [_res(R(u) @ R(-u).T, a(u) * a(-u) * np.eye(36)) for (u,) in one], LOCAL_THRESHOLD))
    for name, F in (("plus", Rp), ("minus", Rm)):
        out.append(cx.record(f"UNIT.fused_{name}", one,
                             [_res(F(u) @ F(-u).T, w.rho_s(u) * np.eye(24)) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("UNIT.pm", one, [
        _res(Rpm(u) @ ops.r_mp(-u), -sinh((u - 8 * eta) / 2) * sinh((u + 8 * eta) / 2) * np.eye(16))
        for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("UNIT.spinorial", one, [
        _res(Rt(u) @ _r21_equal(Rt(-u), 4), -sinh(u / 2 - 2 * eta) * sinh(u / 2 + 2 * eta) * np.eye(16))
        for (u,) in one], LOCAL_THRESHOLD))

    # crossing unitarity
    M1, M2 = np.kron(M, I6), np.kron(I6, M)
    pt = partial_transpose_array
    out.append(cx.record("CU.vector.t1", one, [
        _res(pt(R(u), (6, 6), 0) @ M1 @ pt(R(-u + 16 * eta).T, (6, 6), 0) @ np.linalg.inv(M1),
             w.rho1(u - 8 * eta) * np.eye(36)) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("CU.vector.t2", one, [
        _res(pt(R(u), (6, 6), 1) @ np.linalg.inv(M2) @ pt(R(-u + 16 * eta).T, (6, 6), 1) @ M2,
             w.rho1(u - 8 * eta) * np.eye(36)) for (u,) in one], LOCAL_THRESHOLD))
    M2f = np.kron(I4, M)
    for name, F in (("plus", Rp), ("minus", Rm)):
        out.append(cx.record(f"CU.fused_{name}", one, [
            _res(pt(F(u), (4, 6), 1) @ np.linalg.inv(M2f) @ pt(F(-u + 16 * eta).T, (4, 6), 1) @ M2f,
                 w.rho_s(u - 8 * eta) * np.eye(24)) for (u,) in one], LOCAL_THRESHOLD))
    Mb2 = np.kron(I4, Mb)
    out.append(cx.record("CU.pm", one, [
        _res(pt(Rpm(u), (4, 4), 1) @ np.linalg.inv(Mb2) @ pt(ops.r_mp(-u + 16 * eta), (4, 4), 1) @ Mb2,
             w.rho_ss(u) * np.eye(16)) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("CU.spinorial", one, [
        _res(pt(Rt(u), (4, 4), 1) @ np.linalg.inv(Mb2) @ pt(_r21_equal(Rt(-u + 16 * eta), 4), (4, 4), 1) @ Mb2,
             -sinh(u / 2) * sinh(u / 2 - 8 * eta) * np.eye(16)) for (u,) in one], LOCAL_THRESHOLD))

    # crossing relations
    V1, V2 = np.kron(V, I6), np.kron(I6, V)
    V2t = pt(V2, (6, 6), 1)
    out.append(cx.record("CROSS.vector.V1", one, [
        _res(R(u), V1 @ pt(R(-u + 8 * eta), (6, 6), 1) @ V1) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("CROSS.vector.V2", one, [
        _res(R(u), V2t @ pt(R(-u + 8 * eta), (6, 6), 0) @ V2t) for (u,) in one], LOCAL_THRESHOLD))
    X = np.kron(Vb, W)
    out.append(cx.record("CROSS.fused.plus", one, [
        _res(Rp(u), X @ pt(Rm(-u + 8 * eta), (4, 6), 1) @ X) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("CROSS.fused.minus", one, [
        _res(Rm(u), X @ pt(Rp(-u + 8 * eta), (4, 6), 1) @ X) for (u,) in one], LOCAL_THRESHOLD))
    MM = np.kron(M, M)
    out.append(cx.record("MCOMM.vector", one, [_res(MM @ R(u), R(u) @ MM) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("TWIST.identities", [], [
        _res(V @ V, I6), _res(V.T @ V, M), _res(Vb.T @ Vb, Mb), _res(Vb @ Vb, -I4)], LOCAL_THRESHOLD))

    # Yang-Baxter equations: A(u1-u2) B(u1-u3) C(u2-u3) = C B A
    def ybe(cid, A, da, B, db, C, dc, dims):
        res = []
        for u1, u2, u3 in three:
            x = embed_array(A(u1 - u2), da, (0, 1), dims)
            y = embed_array(B(u1 - u3), db, (0, 2), dims)
            z = embed_array(C(u2 - u3), dc, (1, 2), dims)
            res.append(_res(x @ y @ z, z @ y @ x))
        out.append(cx.record(cid, three, res, LOCAL_THRESHOLD))

    ybe("YBE.vector", R, (6, 6), R, (6, 6), R, (6, 6), (6, 6, 6))
    # fused legs sit in slot 0 and R acts on the two vector legs
    ybe("YBE.fused_plus", Rp, (4, 6), Rp, (4, 6), R, (6, 6), (4, 6, 6))
    ybe("YBE.fused_minus", Rm, (4, 6), Rm, (4, 6), R, (6, 6), (4, 6, 6))
    ybe("YBE.pm", Rpm, (4, 4), Rp, (4, 6), Rm, (4, 6), (4, 4, 6))
    ybe("YBE.spinorial", Rt, (4, 4), Rt, (4, 4), Rt, (4, 4), (4, 4, 4))
    ybe("YBE.spinorial_fused_plus", Rt, (4, 4), Rp, (4, 6), Rp, (4, 6), (4, 4, 6))
    ybe("YBE.spinorial_fused_minus", Rt, (4, 4), Rm, (4, 6), Rm, (4, 6), (4, 4, 6))

    # reflection equations
    def re(cid, Rf, Rb, K1, K2, d1, d2):
        res = []
        for u, v in two:
            A1, A2 = np.kron(K1(u), np.eye(d2)), np.kron(np.eye(d1), K2(v))
            res.append(_res(Rf(u - v) @ A1 @ Rb(u + v) @ A2, A2 @ Rf(u + v) @ A1 @ Rb(u - v)))
        out.append(cx.record(cid, two, res, LOCAL_THRESHOLD))

    def dre(cid, Rf, Rb, Kb1, Kb2, d1, d2, mbar1, **diag):
        res = []
        m1 = np.kron(mbar1, np.eye(d2))
        mi = np.linalg.inv(m1)
        for u, v in two:
            A1, A2 = np.kron(Kb1(u), np.eye(d2)), np.kron(np.eye(d1), Kb2(v))
            res.append(_res(Rf(-u + v) @ A1 @ mi @ Rb(-u - v + 16 * eta) @ m1 @ A2,
                            A2 @ m1 @ Rf(-u - v + 16 * eta) @ mi @ A1 @ Rb(-u + v)))
        out.append(cx.record(cid, two, res, LOCAL_THRESHOLD, **diag))

    T = lambda F: (lambda x: F(x).T)
    R21 = lambda x: _r21_equal(R(x), 6)
    Rt21 = lambda x: _r21_equal(Rt(x), 4)
    Kp, Km = ops.k_plus_fused, ops.k_minus_fused
    Kpb, Kmb = (lambda x: ops.k_bar_fused(1, x)), (lambda x: ops.k_bar_fused(-1, x))
    re("RE.vector", R, R21, ops.k_minus, ops.k_minus, 6, 6)
    re("RE.fused_plus", Rp, T(Rp), Kp, ops.k_minus, 4, 6)
    re("RE.fused_minus", Rm, T(Rm), Km, ops.k_minus, 4, 6)
    re("RE.pm", Rpm, ops.r_mp, Kp, Km, 4, 4)
    re("RE.spinorial_plus", Rt, Rt21, Kp, Kp, 4, 4)
    re("RE.spinorial_minus", Rt, Rt21, Km, Km, 4, 4)
    dre("DRE.vector", R, R21, ops.k_bar, ops.k_bar, 6, 6, M)
    dre("DRE.fused_plus", Rp, T(Rp), Kpb, ops.k_bar, 4, 6, Mb)
    dre("DRE.fused_minus", Rm, T(Rm), Kmb, ops.k_bar, 4, 6, Mb)
    dre("DRE.pm", Rpm, ops.r_mp, Kpb, Kmb, 4, 4, Mb)
    # the spinorial dual equation closes with the spinorial R on both ends;
    # the variant ending in R^(-+) is reported for comparison
    lit = []
    m1 = np.kron(Mb, I4)
    for u, v in two:
        A1, A2 = np.kron(Kpb(u), I4), np.kron(I4, Kpb(v))
        lit.append(_res(Rt(-u + v) @ A1 @ np.linalg.inv(m1) @ Rt21(-u - v + 16 * eta) @ m1 @ A2,
                        A2 @ m1 @ Rt(-u - v + 16 * eta) @ np.linalg.inv(m1) @ A1 @ ops.r_mp(-u + v)))
    dre("DRE.spinorial_plus", Rt, Rt21, Kpb, Kpb, 4, 4, Mb, variant_with_r_mp_residual=max(lit))
    dre("DRE.spinorial_minus", Rt, Rt21, Kmb, Kmb, 4, 4, Mb)

    # trace identities linking K and Kbar through crossing
    ptr = partial_trace_array
    out.append(cx.record("KTRACE.vector_bar", one, [
        _res(ptr(R(0.0) @ R(2 * u) @ np.kron(I6, ops.k_bar(u)), (6, 6), 1),
             w.f(u) * V.T @ ops.k_bar(-u + 8 * eta).T @ V) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("KTRACE.vector", one, [
        _res(ptr(R(0.0) @ R(2 * u) @ np.kron(I6, M @ ops.k_minus(-u + 8 * eta).T), (6, 6), 1),
             w.f(u) * V.T @ ops.k_minus(u) @ V.T) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("KTRACE.spinorial_bar", one, [
        _res(ptr(Rt(0.0) @ Rt(2 * u) @ np.kron(I4, Kmb(u)), (4, 4), 1),
             exp(-4 * eta) * w.fbar(u) * Vb.T @ Kpb(-u + 8 * eta).T @ Vb) for (u,) in one], LOCAL_THRESHOLD))
    out.append(cx.record("KTRACE.spinorial", one, [
        _res(ptr(Rt(0.0) @ Rt(2 * u) @ np.kron(I4, Mb @ Kp(-u + 8 * eta).T), (4, 4), 1),
             exp(4 * eta) * w.fbar(u) * Vb.T @ Km(u) @ np.linalg.inv(Vb.T)) for (u,) in one], LOCAL_THRESHOLD))
    return out


# --- degeneration points -------------------------------------------------------

def check_degenerations(params: ModelParams) -> list:
    """Ranks at the degeneration points and equality of images with projector spans."""
    cx = _Context(params, 0)
    ops, eta = cx.ops, cx.eta
    out = []

    def rec(cid, m, expected, basis=None, **diag):
        r = numerical_rank(m)
        res = float(abs(r - expected))
        if basis is not None:
            ang = max_subspace_angle(column_space(m), basis)
            res = max(res, ang)
            diag["max_subspace_angle"] = ang
        out.append(cx.record(cid, [], [res], ANGLE_THRESHOLD, rank=r, expected_rank=expected, **diag))

    rec("DEGEN.R.8eta", ops.r_vector(8 * eta), 1, ops.basis_p1())
    rec("DEGEN.R.4eta", ops.r_vector(4 * eta), 16, ops.basis_p16())
    rec("DEGEN.R.-4eta", ops.r_vector(-4 * eta), 20)
    rec("DEGEN.R.-8eta", ops.r_vector(-8 * eta), 35)
    rec("DEGEN.Rplus.6eta", ops.r_plus(6 * eta), 4, ops.basis_pfused(1))
    rec("DEGEN.Rminus.6eta", ops.r_minus(6 * eta), 4, ops.basis_pfused(-1))
    rec("DEGEN.Rspinorial.4eta", ops.r_spinorial(4 * eta), 6, ops.basis_p6())

    for name in ("P1", "P16", "Pplus", "Pminus", "P6"):
        res = []
        for side in ("12", "21"):
            pr = ops.projector(name, side)
            m = pr.matrix
            res += [_res(m @ m, m), _res(m.T, m), pr.gram_residual(),
                    abs(numerical_rank(m) - pr.rank)]
        out.append(cx.record(f"PROJ.{name}", [], res, 1e-12, rank=int(pr.rank)))
    return out


# --- R fusion ------------------------------------------------------------------

def _recover_similarity(ops, lhs_fn, rhs_fn, points):
    """Null vector S (16x16) of L (S x I) = (S x I) Y over several points."""
    rows = []
    basis = np.eye(256)
    for u in points:
        L, Y = lhs_fn(u), rhs_fn(u)
        cols = []
        for k in range(256):
            sk = np.kron(basis[k].reshape(16, 16), np.eye(6))
            cols.append((L @ sk - sk @ Y).ravel())
        rows.append(np.array(cols).T)
    a = np.vstack(rows)
    _, s, vh = np.linalg.svd(a, full_matrices=False)
    return vh[-1].conj().reshape(16, 16), s


def check_fusion_r(params: ModelParams, n_samples: int = 10, seed: int = 0) -> list:
    cx = _Context(params, seed)
    ops, w, eta = cx.ops, cx.w, cx.eta
    R, Rp, Rm, Rt = ops.r_vector, ops.r_plus, ops.r_minus, ops.r_spinorial
    I6, I4 = np.eye(6), np.eye(4)
    P66, P44 = swap_array(6, 6), swap_array(4, 4)
    St = ops.twists()["St"]
    d3, dd = (6, 6, 6), (4, 4, 6)
    one = cx.points(n_samples)
    out = []
    a = lambda x: w.vector(x)["a"]
    e = lambda x: w.vector(x)["e"]
    rt0 = w.rho_t0

    # rank-one projector: both candidate labels on the right are tried
    p = ops.basis_p1()
    p21 = P66 @ p
    P12e, P21e = np.kron(p @ p.T, I6), np.kron(p21 @ p21.T, I6)
    for cid, proj, legs in (("FUSE.R.P1.12", P12e, ((1, 2), (0, 2))),
                            ("FUSE.R.P1.21", P21e, ((2, 1), (2, 0)))):
        r12, r21 = [], []
        for (u,) in one:
            x = embed_array(R(u), (6, 6), legs[0], d3) @ embed_array(R(u + 8 * eta), (6, 6), legs[1], d3)
            lhs = proj @ x @ proj
            c = a(u) * e(u + 8 * eta)
            r12.append(_res(lhs, c * P12e))
            r21.append(_res(lhs, c * P21e))
        m12, m21 = max(r12), max(r21)
        label = "P12" if m12 < m21 else "P21"
        out.append(cx.record(cid, one, [min(m12, m21)], FUSION_THRESHOLD, matched_right_label=label,
                             residual_vs_P12=m12, residual_vs_P21=m21))

    # 16-dimensional projector
    U = ops.basis_p16()
    Ue, U21e = np.kron(U, I6), np.kron(P66 @ U, I6)
    S, Sb = ops.s_transform(), ops.s_bar_transform()
    SS, SB = np.kron(S, I6), np.kron(Sb, I6)
    SSi, SBi = np.linalg.inv(SS), np.linalg.inv(SB)

    def lhs16(u):
        return Ue.T @ embed_array(R(u), (6, 6), (1, 2), d3) @ embed_array(R(u + 4 * eta), (6, 6), (0, 2), d3) @ Ue

    def y16(u):
        return (embed_array(Rp(u + 2 * eta), (4, 6), (0, 2), dd)
                @ embed_array(Rm(u + 2 * eta), (4, 6), (1, 2), dd))

    res_a, res_b, res_c = [], [], []
    for (u,) in one:
        res_a.append(_res(lhs16(u), 4 * rt0(u) * SS @ y16(u) @ SSi))
        l2 = U21e.T @ embed_array(R(u), (6, 6), (2, 1), d3) @ embed_array(R(u + 4 * eta), (6, 6), (2, 0), d3) @ U21e
        y2 = (embed_array(Rm(u + 2 * eta).T, (4, 6), (1, 2), dd)
              @ embed_array(Rp(u + 2 * eta).T, (4, 6), (0, 2), dd))
        y3 = (embed_array(Rp(u + 2 * eta).T, (4, 6), (0, 2), dd)
              @ embed_array(Rm(u + 2 * eta).T, (4, 6), (1, 2), dd))
        res_b.append(_res(l2, 4 * rt0(u) * SS @ y2 @ SSi))
        res_c.append(_res(l2, 4 * rt0(u) * SB @ y3 @ SBi))
    note = {"isometry": ISOMETRY_NOTE, "basis_index": "phi_i -> lexicographic index i-1 of 4x4"}
    out.append(cx.record("FUSE.R.P16.12", one, res_a, FUSION_THRESHOLD, **note))
    out.append(cx.record("FUSE.R.P16.21", one, res_b, FUSION_THRESHOLD, **note))
    out.append(cx.record("FUSE.R.P16.21bar", one, res_c, FUSION_THRESHOLD, **note))

    # the tabulated S against the numerically recovered intertwiner
    pts = [u for (u,) in one[:3]]
    s_num, sv = _recover_similarity(ops, lhs16, lambda u: 4 * rt0(u) * y16(u), pts)
    scale = np.vdot(s_num.ravel(), S.ravel()) / np.vdot(s_num.ravel(), s_num.ravel())
    out.append(cx.record("FUSE.S.recovered", [(u,) for u in pts], [_res(S, scale * s_num)], FUSION_THRESHOLD,
                         null_space_gap=float(sv[-2] / max(sv[-1], 1e-300)),
                         smallest_singular_value=float(sv[-1] / sv[0])))

    # four-dimensional projectors
    d46 = (4, 6, 6)
    for sign, name in ((1, "Pplus"), (-1, "Pminus")):
        F, G = (Rp, Rm) if sign > 0 else (Rm, Rp)
        Ue_ = np.kron(ops.basis_pfused(sign), I6)
        U21_ = np.kron(ops.basis_pfused(sign, -eta), I6)
        tt = np.kron(St, I6) if sign < 0 else np.eye(24)
        ra, rb = [], []
        for (u,) in one:
            x = embed_array(R(u), (6, 6), (1, 2), d46) @ embed_array(F(u + 6 * eta), (4, 6), (0, 2), d46)
            ra.append(_res(Ue_.T @ x @ Ue_, 2 * rt0(u) * tt @ G(u + 2 * eta) @ tt))
            x = embed_array(R(u), (6, 6), (2, 1), d46) @ embed_array(F(u + 6 * eta).T, (4, 6), (0, 2), d46)
            rb.append(_res(U21_.T @ x @ U21_, 2 * rt0(u) * tt @ G(u + 2 * eta).T @ tt))
        diag = {"isometry": ISOMETRY_NOTE, "sign_transform": "diag(1,-1,1,-1)" if sign < 0 else "none"}
        out.append(cx.record(f"FUSE.R.{name}.12", one, ra, FUSION_THRESHOLD, **diag))
        out.append(cx.record(f"FUSE.R.{name}.21", one, rb, FUSION_THRESHOLD, **diag))

    # six-dimensional spinorial projector
    C = ops.basis_p6()
    ra, rb = [], []
    for (u,) in one:
        x = embed_array(Rt(u - 2 * eta), (4, 4), (0, 1), (4, 4, 4)) @ embed_array(Rt(u + 2 * eta), (4, 4), (0, 2), (4, 4, 4))
        ce = np.kron(I4, C)
        ra.append(_res(ce.T @ x @ ce, sinh(u / 2 + eta) * Rp(u)))
        x = embed_array(Rp(u - 2 * eta), (4, 6), (1, 2), dd) @ embed_array(Rp(u + 2 * eta), (4, 6), (0, 2), dd)
        ce = np.kron(C, I6)
        rb.append(_res(ce.T @ x @ ce, 0.5 * R(u)))
    out.append(cx.record("FUSE.R.P6.spinorial", one, ra, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))
    out.append(cx.record("FUSE.R.P6.vector", one, rb, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))
    return out


# --- K fusion ------------------------------------------------------------------

def check_fusion_k(params: ModelParams, n_samples: int = 10, seed: int = 0) -> list:
    cx = _Context(params, seed)
    ops, w, eta = cx.ops, cx.w, cx.eta
    R, Rt = ops.r_vector, ops.r_spinorial
    K, Kb = ops.k_minus, ops.k_bar
    Kp, Km = ops.k_plus_fused, ops.k_minus_fused
    Kpb, Kmb = (lambda x: ops.k_bar_fused(1, x)), (lambda x: ops.k_bar_fused(-1, x))
    tw = ops.twists()
    M, Mb, St = tw["M"], tw["Mbar"], tw["St"]
    I6, I4 = np.eye(6), np.eye(4)
    P66, P44 = swap_array(6, 6), swap_array(4, 4)
    h = lambda x, k: w.h(x)[k]
    ht = lambda x, k: w.h_tilde(x)[k]
    one = cx.points(n_samples)
    out = []
    M1 = np.kron(M, I6)
    M1i = np.linalg.inv(M1)

    # rank-one projector: scalar identities
    p = ops.basis_p1()[:, 0]
    p21 = P66 @ p
    ra, rb = [], []
    for (u,) in one:
        x = np.kron(I6, K(u)) @ R(2 * u + 8 * eta) @ np.kron(K(u + 8 * eta), I6)
        ra.append(_res(np.atleast_1d(p @ x @ p21),
                       np.atleast_1d(-2 * sinh(u + 6 * eta) * sinh(u + 8 * eta) * h(u - 2 * eta, "h1") * h(u + 2 * eta, "h2"))))
        x = np.kron(Kb(u + 8 * eta), I6) @ M1i @ P66 @ R(-2 * u + 8 * eta) @ P66 @ M1 @ np.kron(I6, Kb(u))
        rb.append(_res(np.atleast_1d(p21 @ x @ p),
                       np.atleast_1d(-2 * sinh(u - 6 * eta) * sinh(u - 8 * eta) * ht(u - 2 * eta, "h1") * ht(u + 2 * eta, "h2"))))
    out.append(cx.record("FUSE.K.P1", one, ra, FUSION_THRESHOLD))
    out.append(cx.record("FUSE.KBAR.P1", one, rb, FUSION_THRESHOLD, h_tilde_sign="h_tilde = -h(right boundary)"))

    # 16-dimensional projector
    U = ops.basis_p16()
    U21 = P66 @ U
    S, Sb = ops.s_transform(), ops.s_bar_transform()
    Si, Sbi = np.linalg.inv(S), np.linalg.inv(Sb)
    Mb2 = np.kron(I4, Mb)
    ra, rb = [], []
    for (u,) in one:
        x = np.kron(I6, K(u)) @ R(2 * u + 4 * eta) @ np.kron(K(u + 4 * eta), I6)
        rhs = (-2 * exp(4 * eta) * sinh(u + 4 * eta) * S @ np.kron(Kp(u + 2 * eta), I4)
               @ ops.r_mp(2 * u + 4 * eta) @ np.kron(I4, Km(u + 2 * eta)) @ Sbi)
        ra.append(_res(U.T @ x @ U21, rhs))
        x = np.kron(Kb(u + 4 * eta), I6) @ M1i @ P66 @ R(-2 * u + 12 * eta) @ P66 @ M1 @ np.kron(I6, Kb(u))
        rhs = (2 * exp(4 * eta) * sinh(u - 8 * eta) * Sb @ np.kron(I4, Kmb(u + 2 * eta)) @ np.linalg.inv(Mb2)
               @ ops.r_pm(-2 * u + 12 * eta) @ Mb2 @ np.kron(Kpb(u + 2 * eta), I4) @ Si)
        rb.append(_res(U21.T @ x @ U, rhs))
    out.append(cx.record("FUSE.K.P16", one, ra, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))
    out.append(cx.record("FUSE.KBAR.P16", one, rb, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))

    # four-dimensional projectors
    Mbf = np.kron(Mb, I6)
    for sign, name in ((1, "Pplus"), (-1, "Pminus")):
        F = ops.r_plus if sign > 0 else ops.r_minus
        Kf = Kp if sign > 0 else Km
        Kfb = Kpb if sign > 0 else Kmb
        Uf, U21f = ops.basis_pfused(sign), ops.basis_pfused(sign, -eta)
        ra, rb = [], []
        for (u,) in one:
            x = np.kron(I4, K(u)) @ F(2 * u + 6 * eta) @ np.kron(Kf(u + 6 * eta), I6)
            if sign > 0:
                rhs = -exp(4 * eta) * sinh(u + 6 * eta) * h(u + 2 * eta, "h2") * Km(u + 2 * eta)
            else:
                rhs = exp(-4 * eta) * sinh(u + 6 * eta) * h(u - 2 * eta, "h1") * St @ Kp(u + 2 * eta) @ St
            ra.append(_res(Uf.T @ x @ U21f, rhs))
            x = np.kron(Kfb(u + 6 * eta), I6) @ np.linalg.inv(Mbf) @ F(-2 * u + 10 * eta).T @ Mbf @ np.kron(I4, Kb(u))
            if sign > 0:
                rhs = exp(4 * eta) * sinh(u - 8 * eta) * ht(u - 2 * eta, "h1") * Kmb(u + 2 * eta)
            else:
                rhs = -exp(-4 * eta) * sinh(u - 8 * eta) * ht(u + 2 * eta, "h2") * St @ Kpb(u + 2 * eta) @ St
            rb.append(_res(U21f.T @ x @ Uf, rhs))
        out.append(cx.record(f"FUSE.K.{name}", one, ra, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))
        out.append(cx.record(f"FUSE.KBAR.{name}", one, rb, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))

    # six-dimensional spinorial projector
    C = ops.basis_p6()
    C21 = P44 @ C
    Mb1 = np.kron(Mb, I4)
    ra, rb = [], []
    for (u,) in one:
        x = np.kron(I4, Kp(u - 2 * eta)) @ Rt(2 * u) @ np.kron(Kp(u + 2 * eta), I4)
        ra.append(_res(C.T @ x @ C21, sinh(u + 2 * eta) * h(u - 2 * eta, "h2") * K(u)))
        x = (np.kron(Kpb(u + 2 * eta), I4) @ np.linalg.inv(Mb1) @ P44 @ Rt(-2 * u + 16 * eta) @ P44
             @ Mb1 @ np.kron(I4, Kpb(u - 2 * eta)))
        rb.append(_res(C21.T @ x @ C, -sinh(u - 10 * eta) * ht(u - 6 * eta, "h1") * Kb(u)))
    out.append(cx.record("FUSE.K.P6", one, ra, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))
    out.append(cx.record("FUSE.KBAR.P6", one, rb, FUSION_THRESHOLD, isometry=ISOMETRY_NOTE))
    return out


# --- transfer-level identities -------------------------------------------------

def _aux_monodromy(ops, u, theta, aux_slot, n_aux):
    n = len(theta)
    dims = (6,) * (n_aux + n)
    out = np.eye(6 ** (n_aux + n), dtype=complex)
    for j in range(n):
        out = out @ embed_array(ops.r_vector(u - theta[j]), (6, 6), (aux_slot, n_aux + j), dims)
    return out


def check_transfer(params: ModelParams, n_points: int = 5, seed: int = 0) -> list:
    cx = _Context(params, seed)
    ops, w, eta = cx.ops, cx.w, cx.eta
    chain = Chain(params)
    N = params.n_sites
    th = params.theta
    h = lambda x, k: w.h(x)[k]
    ht = lambda x, k: w.h_tilde(x)[k]
    a = lambda x: w.vector(x)["a"]
    e = lambda x: w.vector(x)["e"]
    out = []
    pts = cx.points(n_points)
    pair = cx.points(1, 2)

    # monodromy level
    u, v = pair[0]
    dims = (6, 6) + (6,) * N
    r21 = embed_array(_r21_equal(ops.r_vector(u - v), 6), (6, 6), (0, 1), dims)
    T1, T2 = _aux_monodromy(ops, v, th, 0, 2), _aux_monodromy(ops, u, th, 1, 2)
    out.append(cx.record("YBR.monodromy", pair, [_res(r21 @ T2 @ T1, T1 @ T2 @ r21)], TRANSFER_THRESHOLD))
    tf, dm = chain.monodromy(-u + 8 * eta, "vector", "forward")
    th_hat, _ = chain.monodromy(u, "vector", "hat")
    Vt = np.kron(ops.twists()["V"].T, np.eye(chain.dim))
    out.append(cx.record("CROSS.monodromy", [(u,)], [
        _res(partial_transpose_array(tf, dm, 0), Vt @ th_hat @ Vt)], TRANSFER_THRESHOLD))

    # commutativity
    fam = {
        "t": [chain.transfer(u) for (u,) in pts],
        "tplus": [chain.transfer_fused(u, 1) for (u,) in pts],
        "tminus": [chain.transfer_fused(u, -1) for (u,) in pts],
    }

    def comm(x, y):
        return float(np.linalg.norm(x @ y - y @ x) / max(np.linalg.norm(x) * np.linalg.norm(y), 1e-300))

    for a_, b_ in (("t", "t"), ("t", "tplus"), ("t", "tminus"), ("tplus", "tplus"),
                   ("tminus", "tminus"), ("tplus", "tminus")):
        res = [comm(x, y) for i, x in enumerate(fam[a_]) for j, y in enumerate(fam[b_]) if a_ != b_ or i < j]
        out.append(cx.record(f"COMM.{a_}.{b_}", pts, res, params.tol_identity))

    out.append(cx.record("CROSS.transfer", pts, [
        _res(fam["t"][k], chain.transfer(-pts[k][0] + 8 * eta)) for k in range(len(pts))], params.tol_identity))
    Wn = chain.w_string()
    out.append(cx.record("CROSS.fused_transfer", pts, [
        _res(chain.transfer_fused(-pts[k][0] + 8 * eta, 1), exp(8 * eta) * Wn @ fam["tminus"][k] @ Wn)
        for k in range(len(pts))], params.tol_identity))

    # fusion hierarchy at the inhomogeneities
    eye = np.eye(chain.dim)
    qd, qd_off, f16, fp, fm, spts = [], [], [], [], [], []
    branch = {}
    for j in range(N):
        for sg in (1, -1):
            x = sg * th[j]
            spts.append((x,))
            lhs = chain.transfer(x) @ chain.transfer(x + 8 * eta)
            sf = (sinh(x - 6 * eta) * sinh(x - 8 * eta) * sinh(x + 6 * eta) * sinh(x + 8 * eta)
                  / (sinh(x - 2 * eta) * sinh(x - 4 * eta) * sinh(x + 2 * eta) * sinh(x + 4 * eta)))
            dq = (h(x - 2 * eta, "h1") * h(x + 2 * eta, "h2") * ht(x - 2 * eta, "h1") * ht(x + 2 * eta, "h2")
                  * np.prod([a(x - q) * e(x - q + 8 * eta) * a(x + q) * e(x + q + 8 * eta) for q in th]))
            qd.append(_res(lhs, sf * dq * eye))
            qd_off.append(_res(lhs, np.trace(lhs) / chain.dim * eye))
            branch.setdefault(j, []).append(lhs)
            pr = np.prod([w.rho_t0(x - q) * w.rho_t0(x + q) for q in th])
            tp2, tm2 = chain.transfer_fused(x + 2 * eta, 1), chain.transfer_fused(x + 2 * eta, -1)
            f16.append(_res(chain.transfer(x) @ chain.transfer(x + 4 * eta),
                            exp(8 * eta) * sinh(x + 4 * eta) * sinh(x - 8 * eta)
                            / (sinh(x + 2 * eta) * sinh(x - 6 * eta)) * pr * 4 ** (2 * N) * tp2 @ tm2))
            ratio = sinh(x + 6 * eta) * sinh(x - 8 * eta) / (sinh(x + 2 * eta) * sinh(x - 4 * eta)) * pr * 2 ** (2 * N)
            fp.append(_res(chain.transfer(x) @ chain.transfer_fused(x + 6 * eta, 1),
                           exp(8 * eta) * ratio * h(x + 2 * eta, "h2") * ht(x - 2 * eta, "h1") * tm2))
            fm.append(_res(chain.transfer(x) @ chain.transfer_fused(x + 6 * eta, -1),
                           exp(-8 * eta) * ratio * h(x - 2 * eta, "h1") * ht(x + 2 * eta, "h2") * tp2))
    gap = max(_res(v[0], v[1]) for v in branch.values())
    out.append(cx.record("QDET", spts, [max(a_, b_) for a_, b_ in zip(qd, qd_off)], TRANSFER_THRESHOLD,
                         scalar_residual=max(qd), off_scalar_component=max(qd_off), branch_gap=gap,
                         independent_points="u = theta_j only" if gap < TRANSFER_THRESHOLD
                         else "+theta_j and -theta_j branches differ"))
    out.append(cx.record("FUSE.T.P16", spts, f16, TRANSFER_THRESHOLD))
    out.append(cx.record("FUSE.T.Pplus", spts, fp, TRANSFER_THRESHOLD))
    out.append(cx.record("FUSE.T.Pminus", spts, fm, TRANSFER_THRESHOLD))
    return out


def run_scope(params: ModelParams, scope: str = "all", seed: int = 0, n_samples: int = 10) -> list:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    groups = SCOPES[scope]
    out = []
    if "local" in groups:
        out += check_local(params, n_samples, seed)
    if "degenerations" in groups:
        out += check_degenerations(params)
    if "fusion_r" in groups:
        out += check_fusion_r(params, n_samples, seed)
    if "fusion_k" in groups:
        out += check_fusion_k(params, n_samples, seed)
    if "transfer" in groups:
        out += check_transfer(params, seed=seed)
    return out
