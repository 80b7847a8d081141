"""Uniform sampling of the count ball, the same-sign variant of the sum ball.

The ball is the convex hull of the positive-orthant sum shape and its
negation. Orthants fall into d + 1 congruence classes by their number of
positive coordinates j; each class has exact rational volume
C(d, j) * S_j * S_{d-j} / d! where S_x sums the first k Eulerian numbers of
row x. Inside a mixed orthant, the point decomposes into a Beta(j, d-j+1)
cross-section index t, a point on the outer shell of the j-dimensional
positive part (a cube face or, when k < j, the diagonal cut face), and a
point of the (d-j)-dimensional positive part, scaled by t and -(1 - t).

Shell-face weights use the exact integer forms with the common t^(j-1)
factor cancelled analytically, so no underflow occurs at large d.
"""

import bisect
import itertools
import math
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator

from . import geometry
from ._validation import as_generator, check_contribution_bound
from .eulerian import eulerian_table, randbelow, truncated_row_sum
from .sum_ball import (
    _batch_positive_orthant,
    _batch_slice,
    sample_positive_orthant,
    sample_slice,
)

__all__ = [
    "orthant_class_weights",
    "sample_orthant_class",
    "sample_orthant",
    "sample_cross_section",
    "sample_count_ball",
    "CountBall",
]


def _class_int_weights(table, d, k):
    """Integer class weights d! * |class j| for j = 0..d."""
    sums = [truncated_row_sum(table, x, k) for x in range(d + 1)]
    return [
        math.comb(d, j) * sums[j] * sums[d - j] for j in range(d + 1)
    ]


def orthant_class_weights(table, d, k):
    """Exact per-class volumes of the count ball, indexed j = 0..d.

    weight[j] is the total volume of the C(d, j) orthants whose positive
    support has size j; the weights sum to the ball volume.
    """
    check_contribution_bound(d, k)
    fact = math.factorial(d)
    return [Fraction(w, fact) for w in _class_int_weights(table, d, k)]


def sample_orthant_class(table, d, k, rng):
    """Draws the positive-support size j proportionally to class volume."""
    weights = _class_int_weights(table, d, k)
    r = randbelow(rng, sum(weights))
    acc = 0
    for j, w in enumerate(weights):
        acc += w
        if r < acc:
            return j
    raise AssertionError("unreachable: cumulative weights exhausted")


def sample_orthant(table, d, k, rng):
    """Draws an orthant sign vector: class by volume, pattern uniformly."""
    j = sample_orthant_class(table, d, k, rng)
    signs = np.full(d, -1, dtype=np.int64)
    signs[rng.permutation(d)[:j]] = 1
    return signs


def _shell_branch_weights(table, j, k):
    """Integer weights (all cube faces together, cut face) within one shell."""
    face_total = j * truncated_row_sum(table, j - 1, k - 1)
    cut = k * table[j - 1][k - 1] if k < j else 0
    return face_total, cut


def _sample_shell(table, j, k, rng):
    """Point on the outer shell of the j-dim positive part, distinguished
    coordinate (the face's fixed 1, or the cut-face remainder) placed last."""
    face_total, cut = _shell_branch_weights(table, j, k)
    if randbelow(rng, face_total + cut) < face_total:
        q = sample_positive_orthant(table, j - 1, min(k - 1, j - 1), rng)
        return np.append(q, 1.0)
    q = sample_slice(table, j - 1, k, rng)
    return np.append(q, k - np.sum(q))


def sample_cross_section(table, d, k, j, rng):
    """Samples the mixed-orthant piece in canonical layout.

    Returns a vector whose first j coordinates are the positive block
    t * p1 and whose last d - j coordinates are -(1 - t) * p2. Caller
    scatters the blocks onto the drawn orthant.
    """
    if not 1 <= j <= d - 1:
        raise ValueError(f"mixed orthant needs 1 <= j <= d-1, got j={j}")
    t = rng.beta(j, d - j + 1)
    p1 = _sample_shell(table, j, k, rng)
    p2 = sample_positive_orthant(table, d - j, min(k, d - j), rng)
    return np.concatenate([t * p1, -(1.0 - t) * p2])


def sample_count_ball(table, d, k, rng):
    """Uniform point of the count ball."""
    check_contribution_bound(d, k)
    j = sample_orthant_class(table, d, k, rng)
    if j == 0:
        return -sample_positive_orthant(table, d, k, rng)
    if j == d:
        return sample_positive_orthant(table, d, k, rng)
    canonical = sample_cross_section(table, d, k, j, rng)
    out = np.empty(d)
    out[rng.permutation(d)] = canonical
    return out


def _batch_classes(table, d, k, n, rng):
    weights = _class_int_weights(table, d, k)
    total = sum(weights)
    if total <= 1 << 63:
        cum = np.cumsum(np.array(weights, dtype=np.uint64))
        r = rng.integers(0, total, size=n, dtype=np.uint64)
        return np.searchsorted(cum, r, side="right").astype(np.int64)
    cums = list(itertools.accumulate(weights))
    return np.array(
        [bisect.bisect_right(cums, randbelow(rng, total)) for _ in range(n)]
    )


def _batch_mixed(table, d, k, j, n, rng):
    """n canonical mixed-orthant samples for a fixed class j."""
    t = rng.beta(j, d - j + 1, size=n)
    face_total, cut = _shell_branch_weights(table, j, k)
    if cut == 0:
        on_cut = np.zeros(n, dtype=bool)
    elif face_total == 0:
        on_cut = np.ones(n, dtype=bool)
    elif face_total + cut <= 1 << 63:
        on_cut = rng.integers(0, face_total + cut, size=n) >= face_total
    else:
        total = face_total + cut
        on_cut = np.array(
            [randbelow(rng, total) >= face_total for _ in range(n)]
        )

    p1 = np.empty((n, j))
    p1[:, -1] = 1.0
    n_face = int(np.count_nonzero(~on_cut))
    if n_face:
        p1[~on_cut, : j - 1] = _batch_positive_orthant(
            table, j - 1, min(k - 1, j - 1), n_face, rng
        )
    n_cut = n - n_face
    if n_cut:
        q = _batch_slice(table, j - 1, np.full(n_cut, k), rng)
        p1[on_cut, : j - 1] = q
        p1[on_cut, -1] = k - np.sum(q, axis=1)

    p2 = _batch_positive_orthant(table, d - j, min(k, d - j), n, rng)
    return np.hstack([t[:, None] * p1, -(1.0 - t[:, None]) * p2])


def _batch_count_ball(table, d, k, n, rng):
    classes = _batch_classes(table, d, k, n, rng)
    out = np.empty((n, d))
    for j in range(d + 1):
        rows = np.flatnonzero(classes == j)
        if len(rows) == 0:
            continue
        if j == 0:
            out[rows] = -_batch_positive_orthant(table, d, k, len(rows), rng)
        elif j == d:
            out[rows] = _batch_positive_orthant(table, d, k, len(rows), rng)
        else:
            canonical = _batch_mixed(table, d, k, j, len(rows), rng)
            scatter = np.argsort(rng.random((len(rows), d)), axis=1)
            out[rows[:, None], scatter] = canonical
    return out


class CountBall(BaseEstimator):
    """Count sensitivity-space ball (nonnegative contributions) with sampler.

    Parameters
    ----------
    d : int
        Ambient dimension.
    k : int
        Contribution bound, 1 <= k <= d.
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
        rng = as_generator(random_state)
        return _batch_count_ball(self._table(), self.d, self.k, n_samples, rng)

    def contains(self, x, tol=geometry.DEFAULT_TOL):
        return geometry.count_ball_contains(x, self.k, tol=tol)

    def contains_batch(self, points, tol=geometry.DEFAULT_TOL):
        return geometry.count_ball_contains_batch(points, self.k, tol=tol)

    def enclosing_radius(self, p):
        """Same extreme vertices as the sum ball: k^(1/p), or 1 at p = inf."""
        return 1.0 if np.isinf(p) else float(self.k) ** (1.0 / p)

    def volume(self):
        """Exact ball volume as a Fraction."""
        return sum(orthant_class_weights(self._table(), self.d, self.k))

    def log_volume(self):
        total = sum(_class_int_weights(self._table(), self.d, self.k))
        return math.log(total) - math.lgamma(self.d + 1)

    def vertices(self):
        return geometry.count_ball_vertices(self.d, self.k)
