"""Smoke test for the supercalc_py extension.

Build first:  pip install --no-build-isolation -e crates/python
Run:          python3 python/smoke_test.py   (or pytest python/)
"""

import json

import pytest

import supercalc_py as sc


def test_ids():
    ids = sc.identity_ids()
    assert "duality" in ids and "theorem4" in ids


def test_check_report():
    rep = json.loads(sc.run_check("theorem1", json.dumps({"beta": 2, "a": 2, "c": 1, "d": 1, "f": "str"})))
    assert rep["summary"] == {"pass": 1, "fail": 0}
    assert rep["checks"][0]["spec"]["a"] == 2


def test_criterion_report_is_deterministic():
    assert sc.report(9, 3) == sc.report(9, 3)
    assert json.loads(sc.report(2))["summary"]["fail"] == 0


def test_constants():
    num, den = sc.kappa(2, 2, 1, 1)
    assert int(den) > 0
    re, im = sc.constant_ratio(2, 2, 1, 1)
    assert isinstance(re, float) and isinstance(im, float)


def test_errors():
    with pytest.raises(ValueError):
        sc.run_check("no_such_identity")
    with pytest.raises(ValueError):
        sc.run_check("theorem1", json.dumps({"gamma": 1}))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
