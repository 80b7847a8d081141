import math

import numpy as np
import pytest
from scipy import stats

from conftest import P_THRESHOLD
from knoise import (
    CountBall,
    EllipseSpec,
    EllipticGaussianMechanism,
    KNormMechanism,
    SumBall,
    VoteBall,
    count_min_ellipse,
    ellipse_expected_sq_norm,
    elliptic_gaussian_noise,
    knorm_noise,
    parallel_elliptic_noise,
    sphere_expected_sq_norm,
    vote_min_ellipse,
)
from knoise import geometry as geo


def test_knorm_one_dimensional_is_laplace():
    # Gamma(2, 1/eps) radius times U(-1, 1) is exactly Laplace(1/eps).
    rng = np.random.default_rng(0)
    eps = 1.7
    ball = SumBall(1, 1)
    radii = rng.gamma(shape=2, scale=1 / eps, size=100_000)
    z = ball.sample(100_000, rng)[:, 0]
    noise = radii * z
    p = stats.kstest(noise, stats.laplace(scale=1 / eps).cdf).pvalue
    assert p > P_THRESHOLD
    # The mechanism path applies the same construction around the statistic.
    mech = KNormMechanism(ball, epsilon=eps)
    out = np.array([mech.randomize([3.0], np.random.default_rng(i))[0] for i in range(8000)])
    p = stats.kstest(out - 3.0, stats.laplace(scale=1 / eps).cdf).pvalue
    assert p > P_THRESHOLD


def test_knorm_epsilon_scaling():
    rng = np.random.default_rng(1)
    ball = SumBall(3, 2)
    n1 = np.array([knorm_noise(ball, 1.0, rng) for _ in range(4000)])
    n2 = np.array([knorm_noise(ball, 2.0, rng) for _ in range(4000)])
    q1 = np.quantile(np.linalg.norm(n1, axis=1), 0.5)
    q2 = np.quantile(np.linalg.norm(n2, axis=1), 0.5)
    assert abs(q2 / q1 - 0.5) < 0.02


def test_knorm_radius_mean():
    rng = np.random.default_rng(2)
    d, eps = 6, 0.8
    radii = rng.gamma(shape=d + 1, scale=1 / eps, size=200_000)
    assert abs(radii.mean() - (d + 1) / eps) < 0.01 * (d + 1) / eps


def test_knorm_sensitivity_scales_noise():
    ball = SumBall(2, 1)
    a = KNormMechanism(ball, 1.0, sensitivity=1.0).randomize([0.0, 0.0], 7)
    b = KNormMechanism(ball, 1.0, sensitivity=3.0).randomize([0.0, 0.0], 7)
    assert np.allclose(3.0 * a, b)


def test_knorm_validation():
    ball = SumBall(2, 1)
    with pytest.raises(ValueError):
        KNormMechanism(ball, 0.0).randomize([0.0, 0.0], 0)
    with pytest.raises(ValueError):
        KNormMechanism(ball, 1.0).randomize([0.0, 0.0, 0.0], 0)


def test_count_ellipse_closed_form():
    e = count_min_ellipse(4, 2)
    lam = 4 + 2 * math.sqrt(3)
    assert e.a1 == pytest.approx(lam**0.25, rel=1e-10)
    assert e.a2 == pytest.approx((lam / 3) ** 0.25, rel=1e-10)
    assert e.a1 == pytest.approx(1.6529, abs=1e-4)
    assert e.a2 == pytest.approx(1.2559, abs=1e-4)
    # Contact identity at the k-ones vertex.
    contact = (2 / math.sqrt(4)) ** 2 / e.a1**2 + (2 * 2 / 4) / e.a2**2
    assert contact == pytest.approx(1.0, abs=1e-12)


def test_count_ellipse_unit_sphere_cases():
    e = count_min_ellipse(2, 1)
    assert e.a1 == pytest.approx(1.0) and e.a2 == pytest.approx(1.0)
    for d in (2, 5, 17, 400):
        e = count_min_ellipse(d, 1)
        assert e.a1 == pytest.approx(1.0, rel=1e-12)
        assert e.a2 == pytest.approx(1.0, rel=1e-12)


def test_count_ellipse_rejects_dense_regime():
    with pytest.raises(ValueError, match="unsupported regime"):
        count_min_ellipse(4, 3)
    with pytest.raises(ValueError, match="unsupported regime"):
        count_min_ellipse(5, 3)
    count_min_ellipse(6, 3)


def test_vote_ellipse_closed_form():
    e = vote_min_ellipse(3)
    lam = (math.sqrt(3) + 2) ** 2
    assert e.a1 == pytest.approx((3 * lam) ** 0.25, rel=1e-10)
    assert e.a2 == pytest.approx(lam**0.25, rel=1e-10)
    assert e.a1 == pytest.approx(2.5425, abs=1e-4)
    assert e.a2 == pytest.approx(1.9319, abs=1e-4)
    # Every rank vertex sits on the ellipse.
    assert e.quadratic_form([0.0, 1.0, 2.0]) == pytest.approx(1.0, abs=1e-12)
    e2 = vote_min_ellipse(2)
    assert e2.a1 == pytest.approx(1.0) and e2.a2 == pytest.approx(1.0)


@pytest.mark.parametrize("d", list(range(2, 51)))
def test_vote_ellipse_contact_identity(d):
    e = vote_min_ellipse(d)
    w1 = (d - 1) * math.sqrt(d) / 2
    w2 = math.sqrt(d * (d * d - 1) / 12)
    assert w1**2 / e.a1**2 + w2**2 / e.a2**2 == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("d", [2, 4, 6])
def test_count_ellipse_containment_and_contact(d):
    for k in range(1, d // 2 + 1):
        e = count_min_ellipse(d, k)
        verts = geo.count_ball_vertices(d, k)
        vals = e.quadratic_form(verts)
        assert np.all(vals <= 1 + 1e-9)
        n_ones = np.count_nonzero(verts, axis=1)
        assert np.allclose(vals[n_ones == k], 1.0, atol=1e-9)


@pytest.mark.parametrize("d", [2, 4, 6])
def test_vote_ellipse_containment_and_contact(d):
    e = vote_min_ellipse(d)
    verts = geo.vote_ball_vertices(d)
    vals = e.quadratic_form(verts)
    assert np.all(vals <= 1 + 1e-9)
    assert np.allclose(vals, 1.0, atol=1e-9)


def test_ellipse_beats_enclosing_sphere():
    for d, k in ((4, 2), (10, 3), (50, 10)):
        e = count_min_ellipse(d, k)
        sphere = sphere_expected_sq_norm(d, math.sqrt(k))
        assert ellipse_expected_sq_norm(e) <= sphere
        if k >= 2 and d >= 4:
            assert ellipse_expected_sq_norm(e) < sphere
    for d in (3, 10, 50):
        e = vote_min_ellipse(d)
        radius = VoteBall(d).enclosing_radius(2)
        assert ellipse_expected_sq_norm(e) < sphere_expected_sq_norm(d, radius)


def test_expected_sq_norm_values():
    assert ellipse_expected_sq_norm(EllipseSpec(3, 1, 1)) == pytest.approx(3 / 5)
    assert ellipse_expected_sq_norm(EllipseSpec(2, 1, 1)) == pytest.approx(1 / 2)
    e = count_min_ellipse(4, 2)
    expected = (e.a1**2 + 3 * e.a2**2) / 6
    assert ellipse_expected_sq_norm(e) == pytest.approx(expected)


def test_elliptic_noise_spherical_case():
    rng = np.random.default_rng(3)
    rho = 0.5
    e = EllipseSpec(3, 2.0, 2.0)
    draws = np.array([elliptic_gaussian_noise(e, rho, rng) for _ in range(30_000)])
    sigma = 2.0 / math.sqrt(2 * rho)
    for axis in range(3):
        p = stats.kstest(draws[:, axis], stats.norm(scale=sigma).cdf).pvalue
        assert p > P_THRESHOLD


def test_elliptic_noise_covariance_spectrum():
    rng = np.random.default_rng(4)
    d = 10
    e = count_min_ellipse(d, 3)
    x = rng.standard_normal((200_000, d))
    z = e.a2 * x + (e.a1 - e.a2) * x.mean(axis=1, keepdims=True)
    cov = z.T @ z / len(z)
    eigvals, eigvecs = np.linalg.eigh(cov)
    ones = np.ones(d) / math.sqrt(d)
    assert abs(eigvals[-1] - e.a1**2) < 0.05 * e.a1**2
    assert abs(np.mean(eigvals[:-1]) - e.a2**2) < 0.05 * e.a2**2
    assert abs(abs(eigvecs[:, -1] @ ones) - 1.0) < 1e-3


def test_elliptic_noise_rho_scaling():
    e = EllipseSpec(4, 2.0, 1.0)
    a = np.array([elliptic_gaussian_noise(e, 1.0, np.random.default_rng(i)) for i in range(4000)])
    b = np.array([elliptic_gaussian_noise(e, 4.0, np.random.default_rng(i)) for i in range(4000)])
    assert np.allclose(b, a / 2.0)


def test_mechanism_randomize_reproducible():
    e = count_min_ellipse(6, 2)
    mech = EllipticGaussianMechanism(e, rho=0.3)
    stat = np.arange(6, dtype=float)
    assert np.array_equal(mech.randomize(stat, 42), mech.randomize(stat, 42))
    with pytest.raises(ValueError):
        EllipticGaussianMechanism(e, rho=-1.0).randomize(stat, 0)


def test_parallel_single_worker_matches_serial():
    e = count_min_ellipse(8, 2)
    serial = elliptic_gaussian_noise(e, 0.7, np.random.default_rng(11))
    parallel = parallel_elliptic_noise(e, 0.7, [np.random.default_rng(11)])
    assert np.array_equal(serial, parallel)


def test_parallel_worker_count_never_changes_values():
    e = vote_min_ellipse(16)
    outs = []
    for workers in (1, 2, 5):
        rngs = [np.random.default_rng([9, i]) for i in range(4)]
        outs.append(parallel_elliptic_noise(e, 0.7, rngs, worker_count=workers))
    assert np.array_equal(outs[0], outs[1])
    assert np.array_equal(outs[0], outs[2])


def test_parallel_trace_matches_spectrum():
    # Trace of the noise covariance is (a1^2 + (d-1) a2^2) / (2 rho).
    d, rho = 1000, 0.5
    e = count_min_ellipse(d, 100)
    rngs = [np.random.default_rng([13, i]) for i in range(8)]
    total = 0.0
    n = 2000
    for _ in range(n):
        z = parallel_elliptic_noise(e, rho, rngs, worker_count=4)
        total += z @ z
    expected = (e.a1**2 + (d - 1) * e.a2**2) / (2 * rho)
    assert abs(total / n - expected) < 0.02 * expected


def test_chi_scaling_of_whitened_noise():
    # Undoing the axis scalings turns the noise into an isotropic normal,
    # whose norm is Chi(d)-distributed.
    rng = np.random.default_rng(5)
    d, rho = 6, 0.5
    e = count_min_ellipse(d, 2)
    draws = np.array(
        [elliptic_gaussian_noise(e, rho, rng) for _ in range(30_000)]
    ) * math.sqrt(2 * rho)
    ones = np.ones(d) / math.sqrt(d)
    axial = draws @ ones
    radial = draws - axial[:, None] * ones
    whitened_sq = (axial / e.a1) ** 2 + np.sum(radial**2, axis=1) / e.a2**2
    p = stats.kstest(np.sqrt(whitened_sq), stats.chi(d).cdf).pvalue
    assert p > P_THRESHOLD


def test_knorm_density_shape_2d():
    # 2-D histogram of K-norm outputs should follow exp(-eps * gauge) after
    # normalization; compare via the induced-norm gauge of the sum ball.
    rng = np.random.default_rng(6)
    eps = 2.0
    ball = SumBall(2, 1)
    mech_noise = np.array([knorm_noise(ball, eps, rng) for _ in range(60_000)])
    bins = np.linspace(-4, 4, 21)
    counts, _, _ = np.histogram2d(mech_noise[:, 0], mech_noise[:, 1], bins=(bins, bins))
    centers = (bins[:-1] + bins[1:]) / 2
    cx, cy = np.meshgrid(centers, centers, indexing="ij")
    gauge = np.abs(cx) + np.abs(cy)  # l1 gauge for the k=1 sum ball
    density = np.exp(-eps * gauge)
    expected = density / density.sum() * counts.sum()
    keep = expected > 15
    chi2 = np.sum((counts[keep] - expected[keep]) ** 2 / expected[keep])
    p = stats.chi2.sf(chi2, keep.sum() - 1)
    assert p > P_THRESHOLD
