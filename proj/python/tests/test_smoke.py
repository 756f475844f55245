import json
import math

import numpy as np
import pytest

import rbe_slab

SMALL = {
    "n_x": 9,
    "pmax": 8,
    "n_radial": 8,
    "n_polar": 4,
    "n_azimuth": 8,
    "sphere_polar": 6,
    "sphere_azimuth": 12,
    "n_normals": 16,
    "plane_radial": 16,
    "plane_angular": 24,
    "A_L": 0.02,
    "T_R": 1.25,
    "balance_A_R": True,
    "c1": 4,
}


def test_invariants():
    s, g = rbe_slab.invariants([1, 0, 0], [-1, 0, 0])
    assert s == pytest.approx(8.0, rel=1e-14)
    assert g == pytest.approx(2.0, rel=1e-14)
    assert rbe_slab.moller_velocity([1, 2, 3], [1, 2, 3]) == 0.0


def test_post_collision_conserves_momentum():
    p, q = np.array([0.3, -1.0, 0.2]), np.array([1.5, 0.4, -0.7])
    pp, qq = rbe_slab.post_collision(p, q, [0.0, 0.6, 0.8])
    assert np.allclose(pp + qq, p + q, atol=1e-12)
    e = math.sqrt(1 + p @ p) + math.sqrt(1 + q @ q)
    assert math.sqrt(1 + pp @ pp) + math.sqrt(1 + qq @ qq) == pytest.approx(e, rel=1e-12)


def test_config_errors():
    with pytest.raises(rbe_slab.ConfigError, match="tol"):
        rbe_slab.validate_config(["tol=-1"])
    with pytest.raises(ValueError):
        rbe_slab.validate_config(["no_such_key=1"])
    assert "interp_theta" in rbe_slab.config_keys()
    assert rbe_slab.run("solve", {"tol": -1}, out="unused").exit_code == 2


def test_solve_and_field(tmp_path):
    r = rbe_slab.run("solve", SMALL, out=tmp_path)
    assert r.ok, r.message
    assert r.report["trace"]["converged"]
    assert r.report["trace"]["fixed_point_residual"] < 2e-6
    with open(tmp_path / "report.json") as fh:
        assert json.load(fh) == r.report
    field = rbe_slab.read_field(str(tmp_path / "field.bin"))
    values = field["values"]
    assert values.shape == (len(field["nodes"]), len(field["x"]))
    assert (values >= 0).all()
    # ‖f‖_{L¹L∞} with k = 0 from the raw arrays
    p0 = np.sqrt(1 + (field["nodes"] ** 2).sum(axis=1))
    l1linf = float(np.sum(np.asarray(field["weights"]) * np.sqrt(p0) * values.max(axis=1)))
    assert l1linf == pytest.approx(r.report["norms"]["norm_L1Linf"], rel=1e-12)


def test_oracle_mode(tmp_path):
    r = rbe_slab.run("oracle", {"oracle_samples": 1000}, out=tmp_path)
    assert r.ok
    assert r.report["all_pass"]


def test_loaded_from_stage():
    # under ctest the staged build must win over any installed copy
    import os

    if os.environ.get("RBE_SLAB_STAGED"):
        stage = os.environ["PYTHONPATH"].split(os.pathsep)[0]
        assert rbe_slab.__file__.startswith(stage)
