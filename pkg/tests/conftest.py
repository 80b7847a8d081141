import itertools

import numpy as np
import pytest
from scipy import stats

from knoise.eulerian import eulerian_table

P_THRESHOLD = 0.001


@pytest.fixture(scope="session")
def tables():
    """Eulerian tables keyed by d_max, built once per session."""
    cache = {}

    def get(d_max):
        if d_max not in cache:
            cache[d_max] = eulerian_table(d_max)
        return cache[d_max]

    return get


def enumerate_ascent_classes(d):
    """Brute-force map ascent count -> list of permutations of {1..d}."""
    classes = {}
    for perm in itertools.permutations(range(1, d + 1)):
        asc = sum(perm[i] < perm[i + 1] for i in range(d - 1))
        classes.setdefault(asc, []).append(perm)
    return classes


def chi_square_p(observed_counts, expected_weights):
    """p-value of a goodness-of-fit test against (unnormalized) weights."""
    observed = np.asarray(observed_counts, dtype=float)
    expected = np.asarray(expected_weights, dtype=float)
    expected = expected / expected.sum() * observed.sum()
    keep = expected > 0
    assert np.all(observed[~keep] == 0), "draws landed on zero-weight cells"
    return stats.chisquare(observed[keep], expected[keep]).pvalue


def histogram_counts(points, lo, hi, bins):
    """Flat cell counts of points on a uniform grid over [lo, hi]^d."""
    points = np.asarray(points)
    d = points.shape[1]
    edges = [np.linspace(lo, hi, bins + 1)] * d
    counts, _ = np.histogramdd(points, bins=edges)
    return counts.ravel()


def tv_distance(points_a, points_b, lo, hi, bins):
    """Total variation distance between histogrammed empirical laws."""
    ha = histogram_counts(points_a, lo, hi, bins)
    hb = histogram_counts(points_b, lo, hi, bins)
    return 0.5 * np.sum(np.abs(ha / ha.sum() - hb / hb.sum()))
