import json

import numpy as np
import pytest

import mollerscat as ms


def test_preset_catalogue():
    names = ms.preset_names()
    assert names == ["free-identity", "well1d", "h3"]
    for name in names:
        cfg = json.loads(ms.preset(name))
        assert cfg["experiment"] == name
        assert ms.validate(ms.preset(name)) == []


def test_validate_reports_violations():
    cfg = json.loads(ms.preset("well1d"))
    cfg["n"] = 300
    out = ms.validate(json.dumps(cfg))
    assert any("power of two" in v for v in out)


def test_unknown_key_raises():
    with pytest.raises(ms.ConfigError):
        ms.validate('{"experiment": "well1d", "grid_points": 64}')


def test_free_identity_run():
    r = ms.run(ms.preset("free-identity"))
    assert r["tau0"] == 0.0
    mask = np.asarray(r["mask"])
    s = np.asarray(r["s"])[mask]
    assert s.size > 100
    assert np.max(np.abs(s - 1.0)) < 1e-6
    # correlation of the identical Moller pair peaks at full overlap near t = 0
    c = np.abs(np.asarray(r["corr"]))
    assert c.max() <= 1.0 + 1e-10
    assert c.max() > 1.0 - 1e-3


def test_run_and_export(tmp_path):
    cfg = json.loads(ms.preset("free-identity"))
    cfg["n_energies"] = 50
    r = ms.run_and_export(json.dumps(cfg), str(tmp_path))
    assert (tmp_path / "corr.csv").exists()
    assert (tmp_path / "smatrix.csv").exists()
    assert (tmp_path / "run.json").exists()
    assert len(np.asarray(r["energy"])) == 50


def test_shot_plan():
    assert ms.shot_plan(0.01, 0.05) == int(np.ceil(2 * np.log(40) / 1e-4))
