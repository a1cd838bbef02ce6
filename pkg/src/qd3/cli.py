"""Command-line front end: ``qd3 verify | spectrum | bae | schema``.

Reports are JSON (schema tag "qd3/1") and contain no wall-clock data, so a
rerun with the same config and seed reproduces the file byte for byte.  Phase
timings go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, spectra, verify
from .errors import CountingViolation, InvalidParams, Qd3Error
from .params import default_params, from_config, params_digest, require_valid, to_config

SCHEMA_TAG = "qd3/1"

_RECORD_SCHEMA = {
    "type": "object",
    "required": ["check_id", "params_digest", "sample_points", "residual", "threshold", "passed", "diagnostics"],
    "properties": {
        "check_id": {"type": "string"},
        "params_digest": {"type": "string"},
        "sample_points": {"type": "array"},
        "residual": {"type": ["number", "string"]},
        "threshold": {"type": "number"},
        "passed": {"type": "boolean"},
        "diagnostics": {"type": "object"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qd3 run report",
    "type": "object",
    "required": ["schema", "version", "command", "seed", "config", "records", "summary"],
    "properties": {
        "schema": {"const": SCHEMA_TAG},
        "version": {"type": "string"},
        "command": {"enum": ["verify", "spectrum", "bae"]},
        "seed": {"type": "integer"},
        "config": {"type": "object"},
        "records": {"type": "array", "items": _RECORD_SCHEMA},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed"],
            "properties": {k: {"type": "integer"} for k in ("total", "passed", "failed")},
        },
        "spectrum": {"type": "object"},
        "states": {"type": "array"},
        "matching": {"type": "object"},
        "energies": {"type": ["array", "null"]},
        "solver": {"type": "object"},
    },
}


class ConfigError(Exception):
    pass


def _clean(obj):
    """Make the report strict JSON: complex -> [re, im], non-finite -> string."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"


def load_params(path, seed_flag=None):
    """Config file (or defaults) -> (validated params, effective seed)."""
    if path is None:
        cfg = to_config(default_params())
    else:
        try:
            with open(path) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        p = from_config(cfg)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    seed = p.rng_seed
    env = os.environ.get("QD3_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError as exc:
            raise ConfigError(f"QD3_SEED must be an integer, got {env!r}") from exc
    if seed_flag is not None:
        seed = seed_flag
    try:
        p = require_valid(p)
    except InvalidParams as exc:
        raise ConfigError("; ".join(exc.violations)) from exc
    return p, seed


def _summary(records):
    n_pass = sum(r.passed for r in records)
    return {"total": len(records), "passed": n_pass, "failed": len(records) - n_pass}


def _base(command, p, seed, records):
    return {"schema": SCHEMA_TAG, "version": __version__, "command": command, "seed": seed,
            "config": to_config(p), "records": [r.to_json() for r in records], "summary": _summary(records)}


def _write(report, out):
    text = dumps_report(report)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _phase(name, t0):
    print(f"[qd3] {name}: {time.perf_counter() - t0:.2f} s", file=sys.stderr)


def cmd_verify(args) -> int:
    p, seed = load_params(args.config, args.seed)
    t0 = time.perf_counter()
    records = verify.run_scope(p, args.scope, seed=seed, n_samples=args.samples)
    _phase(f"verify {args.scope}", t0)
    _write(_base("verify", p, seed, records), args.out)
    return 0 if all(r.passed for r in records) else 1


def _write_csv(path, fam):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["state", "u_re", "u_im", "lambda_re", "lambda_im", "lambda_plus_re", "lambda_plus_im"])
        for i in range(fam.n_states):
            for k, u in enumerate(fam.u_grid):
                a, b = fam.lam[i, k], fam.lam_plus[i, k]
                w.writerow([i, repr(u.real), repr(u.imag), repr(a.real), repr(a.imag), repr(b.real), repr(b.imag)])


def cmd_spectrum(args) -> int:
    p, seed = load_params(args.config, args.seed)
    if p.n_sites > 3:
        print("qd3: spectrum supports N <= 3", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    grid = spectra.default_grid(p, args.grid_points) + spectra.special_points(p)
    fam = spectra.diagonalize_family(p, grid, seed=seed)
    records = spectra.check_eigen_relations(fam, umax=args.umax)
    _phase("spectrum", t0)
    rep = _base("spectrum", p, seed, records)
    rep["spectrum"] = {**fam.to_json(), "n_states": fam.n_states, "eigen_residual": fam.eigen_residual()}
    if args.csv:
        _write_csv(args.csv, fam)
    _write(rep, args.out)
    return 0 if all(r.passed for r in records) else 1


def cmd_bae(args) -> int:
    p, seed = load_params(args.config, args.seed)
    if p.n_sites > 3:
        print("qd3: bae supports N <= 3", file=sys.stderr)
        return 2
    L1, L2, L3 = args.sector
    t0 = time.perf_counter()
    try:
        states = spectra.solve_bae(L1, L2, L3, p, args.starts, seed=seed)
    except CountingViolation as exc:
        print(f"qd3: {exc}", file=sys.stderr)
        return 2
    _phase("solve", t0)
    grid = spectra.default_grid(p, args.grid_points)
    fam = spectra.diagonalize_family(p, grid, seed=seed)
    match = spectra.match_tq_to_spectrum(fam, states)
    records = []
    dig = params_digest(p)
    for k, st in enumerate(states):
        res = float(np.max(np.abs(spectra.bae_residuals(st, p)), initial=0.0))
        records.append(verify.ResidualRecord(f"BAE.state{k}.residual", dig, [], res, 1e-9))
        records.append(verify.ResidualRecord(f"BAE.state{k}.residue_free", dig, [],
                                             spectra.residue_check(st, p), 1e-6))
    for m in match["matches"]:
        records.append(verify.ResidualRecord(f"BAE.state{m['state']}.match", dig, [], m["deviation"], 1e-6,
                                             diagnostics={"row": m["row"]}))
    energies = None
    if all(t == 0 for t in p.theta):
        e_fam = spectra.energy(fam)
        energies = [{"state": m["state"], "row": m["row"], "tq": spectra.energy(states[m["state"]], p),
                     "spectral": e_fam[m["row"]]} for m in match["matches"]]
    _phase("bae total", t0)
    rep = _base("bae", p, seed, records)
    rep["states"] = [st.to_json() for st in states]
    rep["matching"] = match
    rep["energies"] = energies
    rep["solver"] = {"sector": [L1, L2, L3], **states.diagnostics}
    _write(rep, args.out)
    # an empty catalog is only a hard failure with enough starts
    return 1 if not states and args.starts >= 32 else 0


def cmd_schema(args) -> int:
    _write(REPORT_SCHEMA, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qd3", description="Numerical workbench for the open D3(1) vertex model.")
    ap.add_argument("--version", action="version", version=f"qd3 {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config (defaults used when omitted)")
        sp.add_argument("--out", help="report path (stdout when omitted)")
        sp.add_argument("--seed", type=int, help="overrides QD3_SEED and the config seed")

    v = sub.add_parser("verify", help="run the identity catalog")
    common(v)
    v.add_argument("--scope", choices=sorted(verify.SCOPES), default="all")
    v.add_argument("--samples", type=int, default=10, help="random points per identity")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="diagonalize the transfer family and check eigenvalue relations")
    common(s)
    s.add_argument("--grid-points", type=int, default=24)
    s.add_argument("--umax", type=float, default=40.0)
    s.add_argument("--csv", help="also write the eigenvalue curves as CSV")
    s.set_defaults(func=cmd_spectrum)

    b = sub.add_parser("bae", help="solve Bethe equations in one sector and match to the spectrum")
    common(b)
    b.add_argument("sector", type=int, nargs=3, metavar=("L1", "L2", "L3"))
    b.add_argument("--starts", type=int, default=64)
    b.add_argument("--grid-points", type=int, default=24)
    b.set_defaults(func=cmd_bae)

    sc = sub.add_parser("schema", help="print the report JSON schema")
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_schema)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"qd3: config error: {exc}", file=sys.stderr)
        return 2
    except Qd3Error as exc:
        print(f"qd3: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
