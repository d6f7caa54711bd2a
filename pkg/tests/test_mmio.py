import json

import numpy as np

from jspursuit.harness import ExperimentConfig, make_problem
from jspursuit.matmodel import Seed, gen_gaussian_phi, gen_partial_dft
from jspursuit.mmio import load_matrix, load_problem, save_matrix, save_problem, save_result
from jspursuit.pursuit import tsmp1


def test_matrix_round_trip_real(tmp_path):
    a = gen_gaussian_phi(6, 9, 1.0, "real", Seed(4))
    p = tmp_path / "a.mtx"
    save_matrix(p, a)
    header = p.read_text().splitlines()[0]
    assert header.startswith("%%MatrixMarket matrix array real general")
    b = load_matrix(p)
    np.testing.assert_allclose(a, b, rtol=0, atol=0)


def test_matrix_round_trip_complex(tmp_path):
    a = gen_partial_dft(3, 8, Seed(6))
    p = tmp_path / "c.mtx"
    save_matrix(p, a)
    assert "complex" in p.read_text().splitlines()[0]
    np.testing.assert_allclose(a, load_matrix(p), rtol=0, atol=0)


def test_problem_manifest_round_trip(tmp_path):
    cfg = ExperimentConfig(m=8, n=16, l=2, r=2, k_grid=(3,), trials=1, seed=1,
                           algos=("tsmp1",))
    prob, _ = make_problem(cfg, 3, 0)
    manifest = tmp_path / "prob.json"
    entry = save_problem(manifest, prob)
    assert entry["omega"] == list(prob.omega)
    raw = json.loads(manifest.read_text())
    assert raw["k"] == 3
    assert all(not raw[key].startswith("/") for key in ("phi", "y", "x0"))
    back = load_problem(manifest)
    np.testing.assert_allclose(back.phi, prob.phi)
    np.testing.assert_allclose(back.y, prob.y)
    np.testing.assert_allclose(back.x0, prob.x0)
    assert back.omega == prob.omega
    assert back.k == 3


def test_result_serialization(tmp_path):
    cfg = ExperimentConfig(m=8, n=16, l=2, r=2, k_grid=(3,), trials=1, seed=2,
                           algos=("tsmp1",))
    prob, _ = make_problem(cfg, 3, 0)
    res = tsmp1(prob, 3)
    out = tmp_path / "res.json"
    entry = save_result(out, res)
    raw = json.loads(out.read_text())
    assert raw["algo"] == "tsmp1"
    assert raw["omega_hat"] == list(res.omega_hat)
    assert raw["omega_c"] == list(res.omega_c)
    assert len(raw["zeta"]) == len(res.omega_c)
    x_hat = load_matrix(tmp_path / raw["x_hat"])
    np.testing.assert_allclose(x_hat, res.x_hat)
    assert entry["runtime_ms"] >= 0
