import numpy as np
import pytest

import netmtl


def config(kind="noncooperative", **strategy):
    return {
        "schema": 1,
        "graph": {"kind": "ring", "n": 10},
        "model": {"kind": "mse", "M": 2, "Ru": 1.0, "noise": 0.1},
        "tasks": {"kind": "random", "seed": 1},
        "strategy": {"kind": kind, "mu": 0.01, **strategy},
        "iters": 300,
        "runs": 3,
    }


def test_theory_noncooperative():
    t = netmtl.theory(config())
    assert t["msd_nc"] == pytest.approx(0.01 * 2 / 2 * 0.1, rel=1e-12)
    assert t["variance"]["total"] == pytest.approx(t["msd_nc"], rel=1e-12)


def test_run_is_deterministic():
    a = netmtl.run(config("laplacian_reg", eta=1.0), seed=5)
    b = netmtl.run(config("laplacian_reg", eta=1.0), seed=5, parallel=3)
    assert a["csv"] == b["csv"]
    assert a["msd_wo"].shape == (300,)
    assert np.all(np.isfinite(a["msd_wo"]))
    assert a["msd_wo"][-1] < a["msd_wo"][0]


def test_errors_map_to_python():
    with pytest.raises(netmtl.ConfigError):
        netmtl.run(config("laplacian_reg", eta=1e4))
    with pytest.raises(netmtl.DivergenceError):
        netmtl.run({**config(), "strategy": {"kind": "noncooperative", "mu": 3.0}})


def test_check_passes():
    checks = netmtl.check(config("spectral_reg", eta=0.5, payload={"kernel": [0, 1]}))
    assert checks and all(c["passed"] for c in checks)


def test_numeric_helpers():
    adj = np.array([[0.0, 1.0], [1.0, 0.0]])
    vals, _ = netmtl.laplacian_spectrum(adj)
    assert vals == pytest.approx([0.0, 2.0], abs=1e-14)
    assert netmtl.metropolis_weights(adj) == pytest.approx(np.full((2, 2), 0.5))
    out = netmtl.social_spectral(np.array([[1.0], [0.0]]), adj, [0, 0, 0, 1], 0.01)
    assert out.ravel() == pytest.approx([0.96, 0.04], abs=1e-15)
    assert netmtl.prox_l1_scalar(3.0, [0.0], [1.0], 1.0) == pytest.approx(2.0)
    agents, network = netmtl.msd_noncooperative(0.01, 2, [0.1, 0.3])
    assert network == pytest.approx(2e-3)
    assert agents == pytest.approx([1e-3, 3e-3])
