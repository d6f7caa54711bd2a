import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import (
    coherence_oracle,
    krank_oracle,
    lcp_oracle,
    rip_oracle,
    theorem3_oracle,
    wrip_oracle,
)

from jspursuit.diagnostics import (
    BoundInputs,
    BudgetExceededError,
    coherence_level,
    coherence_level_inverse,
    eval_bound_functions,
    gram_gershgorin_radius,
    krank,
    lcp,
    mutual_coherence,
    osmp_theorem4_check,
    pool_failure_prob,
    projected_normalized_columns,
    rip_constant,
    row_nondegenerate,
    sample_bounds,
    theorem3_quantities,
    tsmp_theorem7_check,
    uniqueness_oracles,
    wrip_constant,
)
from jspursuit.matmodel import Seed, gen_gaussian_phi


def test_krank_small_cases():
    assert krank(np.eye(3)) == 3
    assert krank(np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])) == 2
    z = np.eye(3)
    z[:, 1] = 0.0
    assert krank(z) == 0


def test_krank_matches_oracle(rng):
    for _ in range(20):
        a = rng.standard_normal((rng.integers(2, 6), rng.integers(2, 8)))
        if rng.random() < 0.3:  # plant a dependency
            a[:, -1] = a[:, 0] * 2.0
        assert krank(a) == krank_oracle(a)


def test_krank_budget_guard():
    a = np.random.default_rng(0).standard_normal((30, 30))
    with pytest.raises(BudgetExceededError):
        krank(a, max_subsets=1000)


def test_krank_le_rank(rng):
    for _ in range(10):
        a = rng.standard_normal((4, 6))
        assert krank(a) <= np.linalg.matrix_rank(a) <= min(a.shape)


def test_mutual_coherence_cases():
    assert mutual_coherence(np.eye(4)) < 1e-15
    a = np.array([[1.0, 1 / math.sqrt(2)], [0.0, 1 / math.sqrt(2)]])
    assert abs(mutual_coherence(a) - 1 / math.sqrt(2)) < 1e-12
    dup = np.column_stack([np.ones(3), np.ones(3)])
    assert abs(mutual_coherence(dup) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        mutual_coherence(np.zeros((2, 2)))


def test_mutual_coherence_matches_oracle(rng):
    for _ in range(10):
        a = rng.standard_normal((5, 7))
        assert abs(mutual_coherence(a) - coherence_oracle(a)) < 1e-10


def test_lcp_special_cases():
    a = np.random.default_rng(1).standard_normal((6, 8))
    assert lcp(a, range(8), ()) == mutual_coherence(a)
    assert lcp(np.eye(3), (1, 2), (0,)) < 1e-12
    with pytest.raises(ValueError):
        lcp(a, (1,), ())


def test_lcp_matches_projector_oracle(rng):
    for _ in range(15):
        a = rng.standard_normal((6, 8))
        delta = tuple(rng.choice(8, size=5, replace=False))
        gamma = tuple(rng.choice(8, size=2, replace=False))
        if len(set(delta) - set(gamma)) < 2:
            continue
        assert abs(lcp(a, delta, gamma) - lcp_oracle(a, delta, gamma)) < 1e-10


def test_wrip_orthonormal_and_b0():
    q = np.linalg.qr(np.random.default_rng(2).standard_normal((8, 5)))[0]
    assert wrip_constant(q, (0, 2), 2).delta < 1e-12
    a = np.random.default_rng(3).standard_normal((6, 6))
    got = wrip_constant(a, (1, 3), 0).delta
    sv = np.linalg.svd(a[:, [1, 3]], compute_uv=False)
    kappa = sv[-1] ** 2 / sv[0] ** 2
    assert abs(got - (1 - kappa) / (1 + kappa)) < 1e-12


def test_wrip_matches_oracle_and_rip_dominance(rng):
    for _ in range(10):
        a = rng.standard_normal((8, 12))
        j = tuple(sorted(rng.choice(12, size=2, replace=False)))
        got = wrip_constant(a, j, 1).delta
        assert abs(got - wrip_oracle(a, j, 1)) < 1e-10
        assert got <= rip_constant(a, 3) + 1e-12
        assert abs(rip_constant(a, 3) - rip_oracle(a, 3)) < 1e-10


def test_row_nondegenerate():
    assert row_nondegenerate(np.array([[1.0, 2.0]]))
    x = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])  # two equal rows, rank 2
    assert not row_nondegenerate(x)
    good = sum(
        row_nondegenerate(np.random.default_rng(t).standard_normal((4, 6)))
        for t in range(100)
    )
    assert good == 100


def test_uniqueness_oracles():
    out = uniqueness_oracles(np.eye(6), k=4, rank_x=1)
    assert out["krank"] == 6
    assert not out["l0_ok"]  # needs krank > 7
    phi = gen_gaussian_phi(8, 16, 1.0, "real", Seed(5))
    out = uniqueness_oracles(phi, k=7, rank_x=7)
    assert out["k1_ok"]
    boundary = uniqueness_oracles(np.eye(5), k=3, rank_x=2)
    assert boundary["l0_ok"] == (5 > 2 * 3 - 2)


def test_theorem3_orthonormal_values():
    # orthonormal columns: perfectly conditioned everywhere
    a1, a2, a3 = theorem3_quantities(np.eye(8)[:, :6], (0, 1), 1)
    assert a1 < 1e-12
    assert abs(a2 - 1.0) < 1e-12
    assert abs(a3 - 1.0) < 1e-12


def test_theorem3_matches_oracle(rng):
    for _ in range(8):
        phi = rng.standard_normal((7, 10))
        omega = tuple(sorted(rng.choice(10, size=3, replace=False)))
        got = theorem3_quantities(phi, omega, 1)
        want = theorem3_oracle(phi, omega, 1)
        np.testing.assert_allclose(got, want, atol=1e-10)


def test_theorem3_v1_zero_reduces_to_single_additions(rng):
    phi = rng.standard_normal((7, 10))
    omega = (0, 4, 7)
    _, a2, _ = theorem3_quantities(phi, omega, 0)
    off = [i for i in range(10) if i not in omega]
    num = min(np.linalg.svd(phi[:, list(omega) + [i]], compute_uv=False)[-1] ** 2 for i in off)
    den = max(np.linalg.svd(phi[:, list(omega) + [j]], compute_uv=False)[0] ** 2 for j in off)
    assert abs(a2 - num / den) < 1e-12


def test_theorem4_orthonormal_all_pass():
    out = osmp_theorem4_check(np.eye(8), (0, 1, 2), eta=0.0, r=2)
    assert out["alpha"] == pytest.approx(1.0)
    assert out["beta"] == pytest.approx(1.0)
    assert out["cond36"] and out["cond37"]


def test_theorem4_eta_half_saturates():
    out = osmp_theorem4_check(np.eye(8), (0, 1, 2), eta=0.5, r=2)
    assert not out["cond37"]  # requires min sigma^2 > 1, impossible at unit norms


def test_theorem4_matches_enumeration(rng):
    phi = rng.standard_normal((8, 12))
    omega = (1, 5, 9)
    out = osmp_theorem4_check(phi, omega, eta=0.05, r=2)
    # independent recomputation with dense projectors
    k, r = 3, 2
    alpha = beta = 1.0
    off = [i for i in range(12) if i not in omega]
    for q in range(0, k - r):
        from itertools import combinations

        for gamma in combinations(omega, q):
            dotted = projected_normalized_columns(phi, gamma)
            keep = [i for i in omega if i not in gamma]
            alpha = min(alpha, np.linalg.svd(dotted[:, keep], compute_uv=False)[-1])
            for i in off:
                beta = min(beta, np.linalg.svd(dotted[:, keep + [i]], compute_uv=False)[-1])
    assert out["alpha"] == pytest.approx(alpha, abs=1e-10)
    assert out["beta"] == pytest.approx(beta, abs=1e-10)
    margin = math.sqrt(r / k) * alpha - math.sqrt(1 - beta**2) - 0.1
    assert out["cond36"] == (margin > 0)


def test_theorem7_noiseless_and_kappa():
    phi = gen_gaussian_phi(10, 20, 1.0, "real", Seed(8))
    omega = (1, 4)
    omega_c = tuple(sorted(set(omega) | {0, 6, 9, 12, 15, 17, 19}))
    x0 = np.zeros((20, 2))
    x0[1] = [1.0, 1.0]
    x0[4] = [0.5, -0.5]
    out = tsmp_theorem7_check(phi, omega, omega_c, x0, None)
    assert out.eq44
    assert out.noise_level == 0.0
    kap = out.min_row_norm / 2
    out2 = tsmp_theorem7_check(phi, omega, omega_c, x0, np.zeros((10, 2)), kappa=kap)
    assert out2.eq45
    with pytest.raises(ValueError):
        tsmp_theorem7_check(phi, omega, (1, 2), x0, None)


def test_theorem7_flip_scale_matches_prediction(rng):
    phi = gen_gaussian_phi(12, 24, 1.0, "real", Seed(9))
    omega = (2, 7, 11)
    extra = [i for i in range(24) if i not in omega][:8]
    omega_c = tuple(sorted(set(omega) | set(extra)))
    x0 = np.zeros((24, 3))
    x0[list(omega)] = rng.standard_normal((3, 3))
    w0 = rng.standard_normal((12, 3))
    smin = np.linalg.svd(phi[:, list(omega_c)], compute_uv=False)[-1]
    min_row = min(np.linalg.norm(x0[list(omega)], axis=1))
    t_star = min_row * smin / (2 * max(np.linalg.norm(w0, axis=1)))
    assert tsmp_theorem7_check(phi, omega, omega_c, x0, w0 * (0.99 * t_star)).eq44
    assert not tsmp_theorem7_check(phi, omega, omega_c, x0, w0 * (1.01 * t_star)).eq44


def test_gershgorin_interval(rng):
    for _ in range(50):
        cols = rng.integers(2, 6)
        a = rng.standard_normal((8, cols))
        a /= np.linalg.norm(a, axis=0)
        radius = gram_gershgorin_radius(a)
        sq = np.linalg.svd(a, compute_uv=False) ** 2
        assert np.all(sq <= 1 + radius + 1e-12)
        assert np.all(sq >= 1 - radius - 1e-12)


def test_bound_functions_noiseless():
    for k in (2, 5, 10, 20):
        for r in (1, 2, k):
            fs = eval_bound_functions(0.0, k, r)
            assert fs["f1"] == pytest.approx(k / (k + r), abs=1e-12)
    assert eval_bound_functions(0.0, 7, 7)["f1"] == pytest.approx(0.5, abs=1e-12)


def test_bound_functions_symbolic_point():
    # eta=0.25, k=10, r=3: recompute the printed closed forms directly
    eta, k, r = 0.25, 10, 3
    f1 = ((k / (k + r)) * (2 * eta * math.sqrt(r / k) + math.sqrt((k + r) / k - 4 * eta**2))) ** 2
    f2 = 1.0 / (math.sqrt((k / r) * eta**2 + 2) - math.sqrt(k / r) * eta) ** 2
    fs = eval_bound_functions(eta, k, r)
    assert fs["f1"] == pytest.approx(f1, rel=1e-15)
    assert fs["f2"] == pytest.approx(f2, rel=1e-15)
    assert fs["f"] == min(f1, f2)
    with pytest.raises(ValueError):
        eval_bound_functions(0.6, 3, 1)


def test_threshold_map_round_trip_and_monotone():
    for y in (0.01, 0.1, 1.0):
        x = coherence_level_inverse(y)
        assert 0 < x < 0.25
        assert coherence_level(x) == pytest.approx(y, abs=1e-9)
    xs = np.linspace(1e-4, 0.2499, 1000)
    vals = [coherence_level(x) for x in xs]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert coherence_level_inverse(1 / 40) > 0
    with pytest.raises(ValueError):
        coherence_level(0.3)
    with pytest.raises(ValueError):
        coherence_level_inverse(-1.0)


def test_pool_failure_prob_matches_exact_rational():
    for t, k in ((6, 5), (12, 8), (30, 20)):
        eps = Fraction(1, 100)
        exact = float(sum(math.comb(t, i) * eps**i for i in range(t - k + 1, t + 1)))
        got = pool_failure_prob(t, k, 0.01)
        assert got == pytest.approx(exact, rel=1e-12)


def test_sample_bounds_noiseless_z_and_shape():
    out = sample_bounds(BoundInputs(k=5, n=100, r=5, eta=0.0, epsilon=0.01, t=6))
    assert out["z"] == pytest.approx(1 / 10, abs=1e-12)  # z = 1/(2k) when f=1/2
    assert out["tsmp_fail_prob"] == pytest.approx(pool_failure_prob(6, 5, 0.01), rel=1e-12)
    assert out["osmp_m"] > 5
    assert out["gauss_m"] > 0 and out["dft_m"] > 0


def test_sample_bounds_monotone_in_k_and_eps():
    prev = None
    for k in (2, 4, 8, 16):
        out = sample_bounds(BoundInputs(k=k, n=256, r=k, eta=0.0, epsilon=0.01))
        if prev is not None:
            assert out["osmp_m"] >= prev
        prev = out["osmp_m"]
    loose = sample_bounds(BoundInputs(k=4, n=256, r=2, eta=0.0, epsilon=0.1))
    tight = sample_bounds(BoundInputs(k=4, n=256, r=2, eta=0.0, epsilon=0.001))
    assert tight["osmp_m"] >= loose["osmp_m"]
    assert tight["gauss_m"] >= loose["gauss_m"]
    assert tight["dft_m"] >= loose["dft_m"]


def test_sample_bounds_c_value():
    out = sample_bounds(
        BoundInputs(k=3, n=64, r=3, eta=0.0, epsilon=0.05, sigma=0.1),
        kappa=0.5,
        smin_pool=2.0,
        pool_size=9,
    )
    assert out["c_value"] == pytest.approx(0.5 * 2.0 / 0.2 - 3 - 1)
