import cmath
import json
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qd3.errors import ExhaustedRetries, InvalidParams, ZeroDivisor
from qd3.params import (BoundaryParams, ModelParams, ValidatedParams, default_params, derive_c3,
                        from_config, params_digest, periodic_distance, require_valid,
                        sample_generic_point, to_config, validate, violations)


def _c3_decimal(c, c1, c2):
    # independent high-precision evaluation of c (c + e^{-c2}) / c1 for real inputs
    getcontext().prec = 40
    c, c1, c2 = Decimal(c), Decimal(c1), Decimal(c2)
    return float(c * (c + (-c2).exp()) / c1)


@pytest.mark.parametrize("c,c1,c2", [(0.0, 0.7, 0.2), (1.0, 1.0, 0.0), ("0.3", "0.7", "0.2"), ("-0.4", "0.5", "0.35")])
def test_derive_c3_against_decimal(c, c1, c2):
    got = derive_c3(float(c), float(c1), float(c2))
    assert abs(got.imag) < 1e-15
    assert got.real == pytest.approx(_c3_decimal(c, c1, c2), rel=1e-14)


def test_derive_c3_known_values():
    assert derive_c3(0, 0.7, 0.2) == 0
    assert derive_c3(1, 1, 0) == pytest.approx(2)
    assert derive_c3(0.3, 0.7, 0.2).real == pytest.approx(0.479456037, rel=1e-9)


def test_derive_c3_zero_c1():
    with pytest.raises(ZeroDivisor):
        derive_c3(0.3, 0, 0.2)


finite = st.floats(-2, 2, allow_nan=False)
nonzero = st.floats(0.1, 2) | st.floats(-2, -0.1)


@given(finite, finite, nonzero, finite, finite)
def test_constraint_holds_for_complex_inputs(cr, ci, c1, c2r, c2i):
    b = BoundaryParams.from_free(complex(cr, ci), c1, complex(c2r, c2i))
    assert b.constraint_residual() < 1e-13


def test_default_is_valid():
    for n in (1, 2, 3):
        assert isinstance(validate(default_params(n)), ValidatedParams)


def test_validate_idempotent(p1):
    v = require_valid(p1)
    assert require_valid(v) is v


def test_violations_are_collected():
    p = default_params(2)
    bad_b = BoundaryParams(0.3, 0.7, 0.2, 5.0)
    q = ModelParams(eta=0.0, n_sites=2, theta=(0.2, 0.2), left=bad_b, right=p.right, tol_identity=-1)
    msgs = violations(q)
    assert any("eta" in m for m in msgs)
    assert any("left boundary constraint" in m for m in msgs)
    assert any("tolerances" in m for m in msgs)
    with pytest.raises(InvalidParams) as exc:
        require_valid(q)
    assert exc.value.violations == msgs


@pytest.mark.parametrize("k", [2, -2, 4, -4, 6, -6, 8, -8])
def test_theta_on_degeneration_point(k):
    p = default_params(1, theta=(k * 0.1,))
    assert any("theta_1 hits" in m for m in violations(p))


def test_theta_pair_rules():
    assert any("theta_2 - theta_1" in m for m in violations(default_params(2, theta=(0.5, 0.5))))
    assert any("theta_2 + theta_1" in m for m in violations(default_params(2, theta=(0.5, -0.1))))


def test_theta_periodic_exclusion():
    p = default_params(1, theta=(0.2 + 2j * np.pi,))
    assert violations(p)


def test_theta_count_mismatch():
    p = ModelParams(0.1, 2, (0.9,), default_params().left, default_params().right)
    assert any("theta has 1" in m for m in violations(p))


def test_eta_root_of_unity():
    assert violations(default_params(1, eta=1j * np.pi / 2))


def test_json_round_trip(p2):
    cfg = json.loads(json.dumps(to_config(p2)))
    q = from_config(cfg)
    assert q == p2
    assert params_digest(q) == params_digest(p2)


@given(st.floats(0.05, 0.3), st.floats(0.5, 1.5), st.integers(0, 2 ** 31))
@settings(max_examples=30)
def test_round_trip_property(eta, th, seed):
    p = default_params(1, eta=complex(eta, 0.01), theta=(th,), rng_seed=seed)
    assert from_config(json.loads(json.dumps(to_config(p)))) == p


def test_config_rejects_c3():
    cfg = to_config(default_params())
    cfg["left"]["c3"] = 1.0
    with pytest.raises(ValueError, match="derived"):
        from_config(cfg)


@pytest.mark.parametrize("cfg", [{"bogus": 1}, {"eta": [1, 2, 3]}, {"left": {"c": 1}}, {"eta": True}, []])
def test_config_rejections(cfg):
    with pytest.raises((ValueError, TypeError)):
        from_config(cfg)


def test_config_missing_keys_take_defaults():
    assert from_config({}) == default_params(1)
    assert from_config({"n_sites": 2}).theta == default_params(2).theta


def test_digest_changes_with_params(p1):
    assert params_digest(p1) != params_digest(default_params(1, eta=0.11))


def test_homogeneous(p2):
    h = p2.homogeneous()
    assert h.theta == (0j, 0j) and h.left == p2.left


def test_periodic_distance():
    assert periodic_distance(0.3 + 2j * np.pi, 0.3) == pytest.approx(0, abs=1e-12)
    assert periodic_distance(1, 0) == pytest.approx(1)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=50)
def test_sample_generic_point_avoids_exclusions(seed):
    excl = [k * 0.1 for k in range(-8, 9)]
    u = sample_generic_point(np.random.default_rng(seed), excl)
    assert all(periodic_distance(u, e) >= 1e-3 for e in excl)


def test_sample_generic_point_exhausts():
    grid = [complex(x, y) for x in np.arange(-1.6, 1.61, 1e-3) for y in (0.0,)]
    with pytest.raises(ExhaustedRetries):
        sample_generic_point(np.random.default_rng(0), grid, scale=1e-4)
