"""Uniform sampling of the sum ball, the l1(k)-capped unit cube.

The ball is the intersection of the l_infinity unit ball with the l1 ball of
radius k. Its positive-orthant part splits into unit-cube slices indexed by
the integer part of the coordinate sum; slice j carries exactly the volume of
the permutations with j - 1 ascents, which is what makes an exact two-stage
sampler possible: pick a slice by Eulerian weight, pick a permutation with
the matching ascent count, push a sorted-uniform point through the slice
bijection, and flip signs.

Two code paths produce the same distribution: a scalar path that works for
any dimension using arbitrary-precision weights, and a vectorized batch path
for d <= 20 where every discrete weight fits in int64 and the coin flips stay
exact. Insert-position choices in the batch path consume pre-drawn uniforms
(granularity 2^-53, far below detectability).
"""

import math

import numpy as np
from sklearn.base import BaseEstimator

from . import geometry
from ._validation import as_generator, check_contribution_bound
from .eulerian import (
    eulerian_table,
    randbelow,
    sample_fixed_ascent_permutation,
)

# Largest dimension whose Eulerian row values (<= d!) fit in int64.
_INT64_DMAX = 20

__all__ = [
    "sample_slice_index",
    "sample_slice",
    "sample_positive_orthant",
    "sample_sum_ball",
    "SumBall",
]


def sample_slice_index(table, d, k, rng):
    """Draws slice index j in [1, k] with exact probability A[d][j-1] / total.

    Uses integer cumulative weights against one exact bounded draw; no float
    normalization is involved.
    """
    check_contribution_bound(d, k)
    weights = table[d][:k]
    r = randbelow(rng, sum(weights))
    acc = 0
    for j, w in enumerate(weights, start=1):
        acc += w
        if r < acc:
            return j
    raise AssertionError("unreachable: cumulative weights exhausted")


def sample_slice(table, d, j, rng):
    """Uniform point of the cube slice with coordinate sum in (j-1, j)."""
    sigma = sample_fixed_ascent_permutation(table, d, j - 1, rng)
    x = geometry.sample_fundamental_simplex(d, rng)
    return geometry.phi_map(geometry.apply_permutation(sigma, x))


def sample_positive_orthant(table, d, k, rng):
    """Uniform point of the positive-orthant part of the sum ball."""
    if d == 0:
        return np.zeros(0)
    j = sample_slice_index(table, d, k, rng)
    return sample_slice(table, d, j, rng)


def sample_sum_ball(table, d, k, rng):
    """Uniform point of the sum ball."""
    check_contribution_bound(d, k)
    if k == d:
        # The l1 constraint is slack: the ball is the cube itself.
        return rng.uniform(-1.0, 1.0, size=d)
    y = sample_positive_orthant(table, d, k, rng)
    return y * (rng.integers(0, 2, size=d) * 2 - 1)


def _table_int64(table, d):
    """Square int64 copy of rows 0..d, zero-padded; requires d <= 20."""
    out = np.zeros((d + 1, d + 1), dtype=np.int64)
    for x in range(d + 1):
        row = table[x]
        out[x, : len(row)] = row
    return out


def _gather(row, idx):
    # row is zero-padded on the right; only idx = -1 needs masking.
    return np.where(idx >= 0, row[np.clip(idx, 0, len(row) - 1)], 0)


def _batch_slice_indices(table, d, k, n, rng):
    weights = table[d][:k]
    total = sum(weights)
    if total <= 1 << 63:
        cum = np.cumsum(np.array(weights, dtype=np.uint64))
        r = rng.integers(0, total, size=n, dtype=np.uint64)
        return np.searchsorted(cum, r, side="right").astype(np.int64) + 1
    return np.array([sample_slice_index(table, d, k, rng) for _ in range(n)])


def _batch_coins(table64, d, ascents, rng):
    """Exact vectorized coin flips for all samples; ascents is modified."""
    n = len(ascents)
    coins = np.zeros((n, max(d - 1, 0)), dtype=bool)
    for m in range(d, 1, -1):
        row = table64[m - 1]
        heads_w = (m - ascents) * _gather(row, ascents - 1)
        total = heads_w + (ascents + 1) * _gather(row, ascents)
        heads = rng.integers(0, total) < heads_w
        coins[:, m - 2] = heads
        ascents -= heads
    return coins


def _sorted_uniform_rows(d, n, rng):
    """Row-sorted uniforms with degenerate rows (zeros or ties) redrawn."""
    x = np.sort(rng.random((n, d)), axis=1)
    while True:
        bad = x[:, 0] <= 0.0
        if d > 1:
            bad |= np.any(np.diff(x, axis=1) <= 0.0, axis=1)
        if not np.any(bad):
            return x
        x[bad] = np.sort(rng.random((int(np.count_nonzero(bad)), d)), axis=1)


def _batch_phi(x):
    shifted = np.hstack([np.zeros((len(x), 1)), x])
    return shifted[:, :-1] - shifted[:, 1:] + (shifted[:, :-1] < shifted[:, 1:])


def _batch_slice(table, d, slice_indices, rng):
    """Uniform points of per-row slices R_{d, j}; j given per sample."""
    n = len(slice_indices)
    if d == 0:
        return np.zeros((n, 0))
    if d > _INT64_DMAX:
        return np.array(
            [sample_slice(table, d, int(j), rng) for j in slice_indices]
        )
    table64 = _table_int64(table, d)
    coins = _batch_coins(table64, d, np.asarray(slice_indices) - 1, rng)
    sorted_u = _sorted_uniform_rows(d, n, rng)
    pos_u = rng.random((n, max(d - 1, 0)))

    seqs = np.empty((n, d))
    u_rows = sorted_u.tolist()
    coin_rows = coins.tolist()
    pos_rows = pos_u.tolist()
    for i in range(n):
        u = u_rows[i]
        coin = coin_rows[i]
        pos = pos_rows[i]
        seq = [u[0]]
        for m in range(2, d + 1):
            if coin[m - 2]:
                gaps = [g for g in range(1, m - 1) if seq[g - 1] > seq[g]]
                gaps.append(m - 1)
            else:
                gaps = [0]
                gaps += [g for g in range(1, m - 1) if seq[g - 1] < seq[g]]
            seq.insert(gaps[int(pos[m - 2] * len(gaps))], u[m - 1])
        seqs[i] = seq
    return _batch_phi(seqs)


def _batch_positive_orthant(table, d, k, n, rng):
    if d == 0:
        return np.zeros((n, 0))
    return _batch_slice(table, d, _batch_slice_indices(table, d, k, n, rng), rng)


def _batch_sum_ball(table, d, k, n, rng):
    if k == d:
        return rng.uniform(-1.0, 1.0, size=(n, d))
    y = _batch_positive_orthant(table, d, k, n, rng)
    return y * (rng.integers(0, 2, size=(n, d)) * 2 - 1)


class SumBall(BaseEstimator):
    """Sum sensitivity-space ball with a uniform sampler.

    Parameters
    ----------
    d : int
        Ambient dimension.
    k : int
        Contribution bound, 1 <= k <= d. Per-coordinate magnitudes are
        normalized to 1; rescaling belongs to the mechanism layer.
    """

    def __init__(self, d, k):
        self.d = d
        self.k = k

    @property
    def dim(self):
        return self.d

    def _table(self):
        check_contribution_bound(self.d, self.k)
        if getattr(self, "_table_cache", None) is None:
            self._table_cache = eulerian_table(self.d)
        return self._table_cache

    def sample(self, n_samples=1, random_state=None):
        """Draws uniform samples, returned as an (n_samples, d) array."""
        rng = as_generator(random_state)
        return _batch_sum_ball(self._table(), self.d, self.k, n_samples, rng)

    def contains(self, x, tol=geometry.DEFAULT_TOL):
        return geometry.sum_ball_contains(x, self.k, tol=tol)

    def contains_batch(self, points, tol=geometry.DEFAULT_TOL):
        return geometry.sum_ball_contains_batch(points, self.k, tol=tol)

    def enclosing_radius(self, p):
        """Radius of the smallest enclosing lp ball."""
        return 1.0 if np.isinf(p) else float(self.k) ** (1.0 / p)

    def log_volume(self):
        """log volume from the exact Eulerian slice sums: 2^d sum(A) / d!."""
        table = self._table()
        slice_total = sum(table[self.d][: self.k])
        return self.d * math.log(2.0) + math.log(slice_total) - math.lgamma(self.d + 1)

    def vertices(self):
        return geometry.sum_ball_vertices(self.d, self.k)
