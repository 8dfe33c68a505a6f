"""Smoke tests for the compiled Python module."""

import math

import numpy as np

import lcmclust


def test_generate_and_fit():
    r, labels, theta = lcmclust.generate_instance(200, 60, 3, beta_a=1.0, beta_b=8.0, seed=7)
    assert r.shape == (200, 60)
    assert theta.shape == (60, 3)
    assert set(np.unique(labels)) <= {1, 2, 3}
    assert set(np.unique(r)) <= {0.0, 1.0}

    rep = lcmclust.sola(r, 3, seed=7)
    assert rep.failure == "none"
    assert len(rep.loglik_trace) == 1
    assert rep.loglik_trace[0] >= rep.loglik_init - 1e-9
    loss = lcmclust.hamming_loss(rep.labels, labels, 3)
    assert 0.0 <= loss <= 0.5

    rep10 = lcmclust.sola_plus(r, 3, steps=10, seed=7)
    assert len(rep10.loglik_trace) <= 10
    assert all(b >= a - 1e-9 for a, b in zip(rep10.loglik_trace, rep10.loglik_trace[1:]))

    rep_cem = lcmclust.cem(r, 3, steps=10, seed=7)
    assert rep_cem.proportions is not None
    assert abs(rep_cem.proportions.sum() - 1.0) < 1e-12


def test_noiseless_exact_recovery():
    theta = np.zeros((12, 3))
    for j in range(12):
        theta[j, j % 3] = 1.0
    labels = np.array([i % 3 + 1 for i in range(60)])
    r = theta[:, labels - 1].T.copy()

    spec_labels, embedding, objective = lcmclust.spec(r, 3, seed=1)
    assert lcmclust.hamming_loss(spec_labels, labels, 3) == 0.0
    assert embedding.shape == (60, 3)
    assert objective < 1e-16

    rep = lcmclust.sola_split(r, 3, seed=1)
    assert lcmclust.hamming_loss(rep.labels, labels, 3) == 0.0

    oracle = lcmclust.oracle_classify(r, np.clip(theta, 1e-6, 1 - 1e-6))
    assert lcmclust.hamming_loss(oracle, labels, 3) == 0.0


def test_information_quantities():
    assert math.isclose(lcmclust.renyi_half(0.9, 0.1), 1.0216512475319814, rel_tol=1e-12)
    assert lcmclust.sigma_theta_sq(0.5) == 0.25
    assert math.isclose(lcmclust.beta_b_constant(5, 5), 0.4772727272727273, rel_tol=1e-12)
    assert math.isclose(lcmclust.tau(0.5), 1.0)

    theta = np.column_stack([np.full(4, 0.9), np.full(4, 0.1)])
    d = lcmclust.diagnose(theta)
    assert d.oracle_exponent > d.spectral_exponent
    assert d.istar > 0


def test_estimate_k_senate_values():
    assert lcmclust.estimate_k([148.1, 64.4, 16.6], 94, 486) == 2
    r, _, _ = lcmclust.generate_instance(100, 50, 2, 5.0, 5.0, seed=3)
    khat = lcmclust.estimate_k_from_data(r)
    assert khat >= 0


def test_svd_and_kmeans():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((40, 25))
    u, s, v = lcmclust.truncated_svd(m, 5)
    ref = np.linalg.svd(m, compute_uv=False)[:5]
    assert np.allclose(s, ref, rtol=1e-8)
    assert np.allclose(u.T @ u, np.eye(5), atol=1e-8)

    pts = np.vstack([np.zeros((5, 2)), np.ones((5, 2)) * 9])
    assign, centers, obj = lcmclust.kmeans(pts, 2, seed=4)
    assert obj < 1e-12
    assert len(set(assign[:5])) == 1
    assert len(set(assign[5:])) == 1


def main():
    test_generate_and_fit()
    test_noiseless_exact_recovery()
    test_information_quantities()
    test_estimate_k_senate_values()
    test_svd_and_kmeans()
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
