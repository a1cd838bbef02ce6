import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qd3 import verify
from qd3.params import default_params


@pytest.fixture(scope="module")
def all_n1():
    return verify.run_scope(default_params(1), "all", seed=3)


def test_catalog_matches_run(all_n1):
    assert [r.check_id for r in all_n1] == verify.all_check_ids()
    assert len(set(verify.all_check_ids())) == len(verify.all_check_ids())


def test_everything_passes_n1(all_n1):
    bad = [(r.check_id, r.residual) for r in all_n1 if not r.passed]
    assert bad == []


@pytest.mark.parametrize("scope", ["local", "fusion", "transfer"])
def test_scope_partition(scope, all_n1):
    ids = [c for g in verify.SCOPES[scope] for c in verify.CATALOG[g]]
    assert set(ids) <= {r.check_id for r in all_n1}


def test_deterministic():
    p = default_params(1)
    a = [json.dumps(r.to_json(), sort_keys=True) for r in verify.run_scope(p, "local", seed=7)]
    b = [json.dumps(r.to_json(), sort_keys=True) for r in verify.run_scope(p, "local", seed=7)]
    assert a == b


def test_seed_changes_sample_points():
    p = default_params(1)
    a = verify.check_local(p, n_samples=2, seed=1)
    b = verify.check_local(p, n_samples=2, seed=2)
    assert a[1].sample_points != b[1].sample_points


@given(st.floats(0, 1) | st.just(float("nan")), st.floats(1e-12, 1))
def test_passed_invariant(res, thr):
    r = verify.ResidualRecord("X", "d", [], res, thr)
    assert r.passed == (res <= thr)
    if math.isnan(res):
        assert not r.passed


def test_record_json_shape():
    r = verify.ResidualRecord("UNIT.vector", "abc", [(0.1 + 0.2j,)], 1e-15, 1e-10, {"k": 1})
    d = r.to_json()
    assert d["sample_points"] == [[[0.1, 0.2]]]
    assert d["passed"] is True and d["diagnostics"] == {"k": 1}


def test_p1_side_labels(all_n1):
    by = {r.check_id: r for r in all_n1}
    assert by["FUSE.R.P1.12"].diagnostics["matched_right_label"] == "P12"
    assert by["FUSE.R.P1.21"].diagnostics["matched_right_label"] == "P21"


def test_degeneration_records(all_n1):
    by = {r.check_id: r for r in all_n1}
    degen = [c for c in verify.CATALOG["degenerations"] if c.startswith("DEGEN")]
    assert degen and all(by[c].passed for c in degen)


@pytest.mark.parametrize("cid,ok", [("EIG.qdet.j2", True), ("EIG.qdet.j0", False),
                                    ("EIG.asymptotic.Lambda.exponent.-inf", True),
                                    ("BAE.state12.match", True), ("YBE.vector", None), ("NOPE", False)])
def test_known_check_id(cid, ok):
    if ok is None:
        ok = cid in verify.all_check_ids()
    assert verify.known_check_id(cid) == ok


def test_unknown_scope():
    with pytest.raises((KeyError, ValueError)):
        verify.run_scope(default_params(1), "bogus")
