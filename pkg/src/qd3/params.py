"""Model parameters, their validation and JSON round trip.

Everything is complex.  The constrained boundary parameter ``c3`` is always
derived from ``(c, c1, c2)`` and never read from a config.
"""
from __future__ import annotations

import cmath
import hashlib
import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import ExhaustedRetries, InvalidParams, ZeroDivisor

EXCLUSION_DISTANCE = 1e-3
DEFAULT_THETA = {1: (0.97,), 2: (0.93, 1.07), 3: (0.91, 0.98, 1.09)}


def derive_c3(c: complex, c1: complex, c2: complex) -> complex:
    """Solve ``c1 * c3 = c * (c + exp(-c2))`` for ``c3``."""
    if c1 == 0:
        raise ZeroDivisor("c1 must be nonzero to derive c3")
    return complex(c * (c + cmath.exp(-c2)) / c1)


@dataclass(frozen=True)
class BoundaryParams:
    c: complex
    c1: complex
    c2: complex
    c3: complex

    @classmethod
    def from_free(cls, c, c1, c2) -> "BoundaryParams":
        c, c1, c2 = complex(c), complex(c1), complex(c2)
        return cls(c, c1, c2, derive_c3(c, c1, c2))

    def constraint_residual(self) -> float:
        lhs = self.c1 * self.c3
        rhs = self.c * (self.c + cmath.exp(-self.c2))
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


@dataclass(frozen=True)
class ModelParams:
    eta: complex
    n_sites: int
    theta: tuple
    left: BoundaryParams
    right: BoundaryParams
    tol_identity: float = 1e-9
    tol_spectral: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "theta", tuple(complex(t) for t in self.theta))

    def with_theta(self, theta) -> "ModelParams":
        """Plain (unvalidated) copy with new inhomogeneities."""
        kw = {f.name: getattr(self, f.name) for f in fields(ModelParams)}
        kw["theta"] = tuple(theta)
        kw["n_sites"] = len(kw["theta"])
        return ModelParams(**kw)

    def homogeneous(self) -> "ModelParams":
        return self.with_theta([0.0] * self.n_sites)


@dataclass(frozen=True)
class ValidatedParams(ModelParams):
    """Marker type: a ModelParams that passed :func:`validate`."""


def default_params(n_sites: int = 1, eta: complex = 0.1, **kw) -> ModelParams:
    theta = kw.pop("theta", DEFAULT_THETA.get(n_sites))
    if theta is None:
        theta = tuple(np.linspace(0.9, 1.1, n_sites) + 0.013)
    return ModelParams(
        eta=eta,
        n_sites=n_sites,
        theta=tuple(theta),
        left=kw.pop("left", BoundaryParams.from_free(0.3, 0.7, 0.2)),
        right=kw.pop("right", BoundaryParams.from_free(-0.4, 0.5, 0.35)),
        **kw,
    )


def periodic_distance(z: complex, w: complex) -> float:
    """|z - w| with the imaginary part reduced modulo 2*pi."""
    d = complex(z) - complex(w)
    im = (d.imag + math.pi) % (2 * math.pi) - math.pi
    return abs(complex(d.real, im))


def _near(z, points, tol=EXCLUSION_DISTANCE):
    return any(periodic_distance(z, p) < tol for p in points)


def violations(p: ModelParams) -> list:
    out = []
    eta = complex(p.eta)
    q2 = cmath.exp(2 * eta)
    if abs(eta) < EXCLUSION_DISTANCE or abs(q2 - 1) < EXCLUSION_DISTANCE or abs(q2 + 1) < EXCLUSION_DISTANCE:
        out.append("eta is degenerate (eta = 0 or exp(2 eta) = +-1)")
    if not isinstance(p.n_sites, (int, np.integer)) or p.n_sites < 1:
        out.append("n_sites must be a positive integer")
    elif len(p.theta) != p.n_sites:
        out.append(f"theta has {len(p.theta)} entries for n_sites={p.n_sites}")
    for name, b in (("left", p.left), ("right", p.right)):
        if b.constraint_residual() > 1e-12:
            out.append(f"{name} boundary constraint c1*c3 = c*(c+exp(-c2)) violated")
        if b.c1 == 0:
            out.append(f"{name} boundary has c1 = 0")
    single = [k * eta for k in (2, -2, 4, -4, 6, -6, 8, -8)]
    pair = [0.0] + single
    th = list(p.theta)
    for j, tj in enumerate(th):
        if _near(tj, single):
            out.append(f"theta_{j + 1} hits degeneration point")
        for k in range(j):
            for s in (1, -1):
                if _near(tj + s * th[k], pair):
                    out.append(f"theta_{j + 1} {'+' if s > 0 else '-'} theta_{k + 1} hits degeneration point")
    if not (p.tol_identity > 0 and p.tol_spectral > 0):
        out.append("tolerances must be positive")
    return out


def validate(p: ModelParams):
    """Return a :class:`ValidatedParams` copy, or the full list of violations."""
    bad = violations(p)
    if bad:
        return bad
    if isinstance(p, ValidatedParams):
        return p
    return ValidatedParams(**{f.name: getattr(p, f.name) for f in fields(ModelParams)})


def require_valid(p: ModelParams) -> ValidatedParams:
    v = validate(p)
    if isinstance(v, list):
        raise InvalidParams(v)
    return v


def sample_generic_point(rng: np.random.Generator, exclusions, scale: float = 1.5) -> complex:
    """Random complex u at least 1e-3 away (mod 2*pi*i) from every exclusion."""
    excl = [complex(e) for e in exclusions]
    for _ in range(1000):
        u = complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
        if not _near(u, excl):
            return u
    raise ExhaustedRetries("no admissible point after 1000 draws")


# --- JSON ------------------------------------------------------------------

def _c2json(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _json2c(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, bool):
        raise ValueError("boolean where a number was expected")
    if isinstance(v, complex):
        return v
    return complex(float(v))


def to_config(p: ModelParams) -> dict:
    def side(b):
        return {"c": _c2json(b.c), "c1": _c2json(b.c1), "c2": _c2json(b.c2)}

    return {
        "eta": _c2json(p.eta),
        "n_sites": int(p.n_sites),
        "theta": [_c2json(t) for t in p.theta],
        "left": side(p.left),
        "right": side(p.right),
        "tol_identity": float(p.tol_identity),
        "tol_spectral": float(p.tol_spectral),
        "seed": int(p.rng_seed),
    }


def from_config(cfg: dict) -> ModelParams:
    """Build ModelParams from a config dict; missing keys take the defaults."""
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    known = {"eta", "n_sites", "theta", "left", "right", "tol_identity", "tol_spectral", "seed"}
    extra = set(cfg) - known
    if extra:
        raise ValueError(f"unknown config keys: {sorted(extra)}")
    n = int(cfg.get("n_sites", len(cfg["theta"]) if "theta" in cfg else 1))
    base = default_params(n) if n in DEFAULT_THETA else default_params(n, theta=[1.0] * n)

    def side(key, fallback):
        if key not in cfg:
            return fallback
        d = cfg[key]
        if not isinstance(d, dict) or not {"c", "c1", "c2"} <= set(d):
            raise ValueError(f"'{key}' needs keys c, c1, c2")
        if "c3" in d:
            raise ValueError(f"'{key}.c3' is derived and must not be given")
        return BoundaryParams.from_free(_json2c(d["c"]), _json2c(d["c1"]), _json2c(d["c2"]))

    theta = tuple(_json2c(t) for t in cfg["theta"]) if "theta" in cfg else base.theta
    return ModelParams(
        eta=_json2c(cfg.get("eta", base.eta)),
        n_sites=n,
        theta=theta,
        left=side("left", base.left),
        right=side("right", base.right),
        tol_identity=float(cfg.get("tol_identity", base.tol_identity)),
        tol_spectral=float(cfg.get("tol_spectral", base.tol_spectral)),
        rng_seed=int(cfg.get("seed", base.rng_seed)),
    )


def params_digest(p: ModelParams) -> str:
    blob = json.dumps(to_config(p), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
