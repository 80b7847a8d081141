from fractions import Fraction

import numpy as np
import pytest
from scipy import stats
from scipy.spatial import ConvexHull

from conftest import P_THRESHOLD, chi_square_p, tv_distance
from knoise import CountBall
from knoise import geometry as geo
from knoise.count_ball import (
    _batch_classes,
    _batch_mixed,
    _shell_branch_weights,
    orthant_class_weights,
    sample_count_ball,
    sample_cross_section,
    sample_orthant,
    sample_orthant_class,
)


def test_class_weight_examples(tables):
    w = orthant_class_weights(tables(2), 2, 1)
    assert w == [Fraction(1, 2), Fraction(1, 1), Fraction(1, 2)]
    assert sum(w) == 2  # cross-polytope area
    assert sum(orthant_class_weights(tables(3), 3, 1)) == Fraction(4, 3)


def test_full_contribution_ball_is_not_the_cube(tables):
    # At k = d the hull of the two unit-cube cones has volume d + 1 (it is a
    # proper subset of the cube): hull of the 2D unit squares is a hexagon
    # of area 3.
    assert sum(orthant_class_weights(tables(2), 2, 2)) == 3
    hull = ConvexHull(geo.count_ball_vertices(2, 2))
    assert abs(hull.volume - 3.0) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_exact_volume_matches_hull_oracle(tables, d):
    table = tables(d)
    for k in range(1, d + 1):
        exact = sum(orthant_class_weights(table, d, k))
        hull = ConvexHull(geo.count_ball_vertices(d, k))
        assert abs(float(exact) - hull.volume) < 1e-9 * hull.volume


def test_class_distribution(tables):
    rng = np.random.default_rng(0)
    draws = _batch_classes(tables(2), 2, 1, 40_000, rng)
    assert abs(np.mean(draws == 1) - 0.5) < 0.01

    draws = _batch_classes(tables(1), 1, 1, 40_000, rng)
    assert chi_square_p(np.bincount(draws, minlength=2), [1, 1]) > P_THRESHOLD

    draws = _batch_classes(tables(3), 3, 1, 80_000, rng)
    counts = np.bincount(draws, minlength=4)
    assert chi_square_p(counts, [1, 3, 3, 1]) > P_THRESHOLD


def test_scalar_class_sampler_agrees(tables):
    table = tables(3)
    rng = np.random.default_rng(1)
    draws = [sample_orthant_class(table, 3, 2, rng) for _ in range(40_000)]
    weights = [float(w) for w in orthant_class_weights(table, 3, 2)]
    assert chi_square_p(np.bincount(draws, minlength=4), weights) > P_THRESHOLD


def test_sample_orthant_sign_patterns(tables):
    table = tables(3)
    rng = np.random.default_rng(2)
    signs = np.array([sample_orthant(table, 3, 1, rng) for _ in range(20_000)])
    assert set(np.unique(signs)) == {-1, 1}
    # Within class j=1, the three patterns are equally likely.
    ones = signs.sum(axis=1)
    mixed = signs[ones == -1]  # one positive, two negative
    idx = np.argmax(mixed == 1, axis=1)
    assert chi_square_p(np.bincount(idx, minlength=3), np.ones(3)) > P_THRESHOLD


def test_shell_branch_weights(tables):
    table = tables(4)
    # k >= j: no cut face.
    assert _shell_branch_weights(table, 3, 3)[1] == 0
    assert _shell_branch_weights(table, 3, 4)[1] == 0
    # k < j: cut face weight k * A[j-1][k-1].
    face, cut = _shell_branch_weights(table, 3, 2)
    assert cut == 2 * table[2][1]
    assert face == 3 * table[2][0]
    # k = 1: all shell mass on the cut face.
    face, cut = _shell_branch_weights(table, 3, 1)
    assert face == 0 and cut == 1


def test_cross_section_triangle_centroid(tables):
    rng = np.random.default_rng(3)
    pts = _batch_mixed(tables(2), 2, 1, 1, 100_000, rng)
    assert np.allclose(pts.mean(axis=0), [1 / 3, -1 / 3], atol=0.01)
    assert np.all(pts[:, 0] >= 0) and np.all(pts[:, 1] <= 0)
    assert np.all(pts[:, 0] - pts[:, 1] <= 1 + 1e-9)


def test_cross_section_canonical_layout(tables):
    table = tables(4)
    rng = np.random.default_rng(4)
    for _ in range(500):
        y = sample_cross_section(table, 4, 2, 2, rng)
        assert np.all(y[:2] >= 0) and np.all(y[2:] <= 0)


def test_cross_section_rejects_pure_orthants(tables):
    rng = np.random.default_rng(5)
    with pytest.raises(ValueError):
        sample_cross_section(tables(3), 3, 1, 3, rng)


def test_beta_marginal_of_positive_gauge(tables):
    # Conditioned on the orthant class, the positive part's gauge follows
    # Beta(j, d - j + 1); with d=3, k=1, j=1 the gauge is the l1 norm.
    rng = np.random.default_rng(6)
    x = CountBall(3, 1).sample(200_000, rng)
    npos = np.count_nonzero(x > 0, axis=1)
    sel = x[npos == 1]
    t = np.clip(sel, 0, None).sum(axis=1)
    p = stats.kstest(t, stats.beta(1, 3).cdf).pvalue
    assert p > P_THRESHOLD


def test_membership_every_draw(tables):
    ball = CountBall(6, 2)
    x = ball.sample(10_000, np.random.default_rng(7))
    assert np.all(ball.contains_batch(x))


def test_central_symmetry(tables):
    rng = np.random.default_rng(8)
    x = CountBall(4, 2).sample(100_000, rng)
    proj = x @ np.array([0.9, -0.2, 0.5, 1.3])
    p = stats.ks_2samp(proj[:50_000], -proj[50_000:]).pvalue
    assert p > P_THRESHOLD


def test_class_occupancy_of_samples(tables):
    table = tables(3)
    rng = np.random.default_rng(9)
    x = CountBall(3, 2).sample(100_000, rng)
    npos = np.count_nonzero(x > 0, axis=1)
    weights = [float(w) for w in orthant_class_weights(table, 3, 2)]
    counts = np.bincount(npos, minlength=4)
    assert chi_square_p(counts, weights) > P_THRESHOLD


def test_matches_rejection_oracle_small(tables):
    rng = np.random.default_rng(10)
    ball = CountBall(2, 1)
    direct = ball.sample(100_000, rng)
    proposals = rng.uniform(-1, 1, size=(800_000, 2))
    accepted = proposals[ball.contains_batch(proposals)][:100_000]
    assert tv_distance(direct, accepted, -1, 1, 8) < 0.05


def test_scalar_path_matches_batch_distribution(tables):
    table = tables(3)
    rng = np.random.default_rng(11)
    n = 50_000
    scalar = np.array([sample_count_ball(table, 3, 2, rng) for _ in range(n)])
    batch = CountBall(3, 2).sample(n, np.random.default_rng(12))
    assert tv_distance(scalar, batch, -1, 1, 6) < 0.05


def test_large_dimension_fallback(tables):
    ball = CountBall(22, 4)
    x = ball.sample(40, np.random.default_rng(13))
    assert x.shape == (40, 22)
    assert np.all(ball.contains_batch(x))


def test_estimator_api():
    ball = CountBall(4, 2)
    assert ball.get_params() == {"d": 4, "k": 2}
    assert ball.enclosing_radius(2) == pytest.approx(np.sqrt(2))
    assert ball.volume() == sum(orthant_class_weights(ball._table(), 4, 2))
    with pytest.raises(ValueError):
        CountBall(3, 0).sample(1, 0)
