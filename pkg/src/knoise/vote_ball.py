"""Uniform sampling of the rank-sum ball, a cylinder over the permutohedron.

The ball is the convex hull of all permutations of (0, ..., d-1) and their
negations: a prism whose bases are the permutohedron and its reflection
through the origin. Sampling reduces to drawing a uniform point of the
permutohedron base and sliding it a uniform distance down the cylinder axis.

The base is triangulated recursively: a star decomposition coned at the
center splits it into pyramids over its codimension-one faces, each face is
a direct sum of two smaller permutohedra, and a direct sum of simplices
splits into equal-volume "staircase" simplices indexed by interleavings.
Face-class weights combine the face count C(d, j), the face volume
j^(j-3/2) (d-j)^(d-j-3/2), and the pyramid height sqrt(j (d-j) d) / 2; they
are evaluated in log space so the d^d growth never overflows.

The point sampler never materializes simplex vertices: it threads the
convex-combination weights down the recursion, aggregating them through each
interleaving, which keeps a draw at O(d^2) arithmetic. A separate
materializing routine exposes the sampled simplex itself for validation.
"""

import bisect
import math

import numpy as np
from scipy.special import gammaln
from sklearn.base import BaseEstimator

from . import geometry
from ._validation import as_generator, check_dimension

__all__ = [
    "face_class_weights",
    "interleaving_simplex",
    "sample_permutohedron_simplex",
    "sample_permutohedron_point",
    "sample_vote_ball",
    "VoteBall",
]

_LOG_WEIGHT_CACHE = {}
_CLASS_CUM_CACHE = {}


def _face_class_log_weights(m):
    """log of (count * volume * height) for face classes j = 1..m-1."""
    cached = _LOG_WEIGHT_CACHE.get(m)
    if cached is None:
        j = np.arange(1, m)
        log_count = gammaln(m + 1) - gammaln(j + 1) - gammaln(m - j + 1)
        # volume * height collapses to j^(j-1) (m-j)^(m-j-1) sqrt(m) / 2.
        cached = (
            log_count
            + (j - 1) * np.log(j)
            + (m - j - 1) * np.log(m - j)
            + 0.5 * math.log(m)
            - math.log(2.0)
        )
        _LOG_WEIGHT_CACHE[m] = cached
    return cached


def face_class_weights(d):
    """Raw star-decomposition class weights M_j V_j H_j for j = 1..d-1.

    Symmetric in j <-> d-j. Overflows float range past d around 140; the
    samplers use the log form internally and have no such limit.
    """
    if d < 2:
        raise ValueError(f"face classes need d >= 2, got {d}")
    return np.exp(_face_class_log_weights(d))


def _sample_face_class(m, rng):
    cum = _CLASS_CUM_CACHE.get(m)
    if cum is None:
        logw = _face_class_log_weights(m)
        w = np.exp(logw - np.max(logw))
        cum = np.cumsum(w)
        cum /= cum[-1]
        cum = cum.tolist()
        _CLASS_CUM_CACHE[m] = cum
    return bisect.bisect_right(cum, rng.random()) + 1


def _sample_type_vector(m, j, rng):
    """Uniform interleaving mask: which of the m-2 staircase steps advance
    the first block's simplex (exactly j-1 of them)."""
    mask = np.zeros(m - 2, dtype=bool)
    if j - 1 > 0:
        mask[rng.choice(m - 2, size=j - 1, replace=False)] = True
    return mask


def _staircase_indices(mask):
    # Vertex i of the interleaved simplex pairs block-1 vertex f[i] with
    # block-2 vertex i - f[i].
    return np.concatenate(([0], np.cumsum(mask, dtype=np.int64)))


def interleaving_simplex(verts1, verts2, offset, type_vector):
    """Staircase simplex of a direct sum of two simplices.

    Args:
      verts1: (n + 1, D) vertices of an n-simplex, ambient dimension D.
      verts2: (m + 1, D) vertices of an m-simplex on a coordinate support
        disjoint from verts1 (each is zero wherever the other is nonzero).
      offset: Length-D translation applied to the result.
      type_vector: Boolean array of length n + m, True where the walk
        advances through verts1; must hold exactly n True entries.

    Returns:
      (n + m + 1, D) vertices of one equal-volume piece of the product
      triangulation, starting at verts1[0] + verts2[0].
    """
    verts1 = np.asarray(verts1, dtype=float)
    verts2 = np.asarray(verts2, dtype=float)
    if np.any(np.any(verts1 != 0, axis=0) & np.any(verts2 != 0, axis=0)):
        raise ValueError("simplex supports overlap")
    type_vector = np.asarray(type_vector, dtype=bool)
    n, m = len(verts1) - 1, len(verts2) - 1
    if len(type_vector) != n + m or int(np.count_nonzero(type_vector)) != n:
        raise ValueError("type vector does not match the simplex sizes")
    f = _staircase_indices(type_vector)
    g = np.arange(n + m + 1) - f
    return verts1[f] + verts2[g] + np.asarray(offset, dtype=float)


def sample_permutohedron_simplex(d, rng=None, random_state=None):
    """Draws a simplex from a triangulation of the permutohedron,
    with probability proportional to its volume.

    The returned (d, d) array holds the d vertices of a (d-1)-simplex lying
    in the hyperplane of coordinate sum d(d-1)/2; the star-decomposition
    apex (the permutohedron center) is the last row.
    """
    rng = rng if rng is not None else as_generator(random_state)
    check_dimension(d)
    return _simplex_vertices(d, rng)


def _simplex_vertices(m, rng):
    if m == 1:
        return np.zeros((1, 1))
    j = _sample_face_class(m, rng)
    perm = rng.permutation(m)
    block1, block2 = perm[:j], perm[j:]
    v1 = _simplex_vertices(j, rng)
    v2 = _simplex_vertices(m - j, rng)
    f = _staircase_indices(_sample_type_vector(m, j, rng))
    g = np.arange(m - 1) - f
    verts = np.empty((m, m))
    base = verts[: m - 1]
    base[:, block1] = v1[f] + (m - j)
    base[:, block2] = v2[g]
    verts[m - 1] = (m - 1) / 2.0
    return verts


def _point_recursive(m, weights, rng):
    """Convex combination of a sampled triangulation simplex's vertices.

    weights[:-1] (a plain Python list) attach to the staircase vertices in
    order, weights[-1] to the apex; only the weight vector is threaded
    through the recursion, so no vertex matrix is ever built. Python lists
    keep the per-node overhead small; the work per node is O(m).
    """
    if m == 1:
        return [0.0]
    apex = weights[m - 1] * (m - 1) / 2.0
    if m == 2:
        out = [apex, apex]
        out[int(rng.integers(0, 2))] += weights[0]
        return out
    j = _sample_face_class(m, rng)
    perm = rng.permutation(m).tolist()
    base = weights[: m - 1]
    if j == 1:
        w1 = [sum(base)]
        w2 = list(base)
    elif j == m - 1:
        w1 = list(base)
        w2 = [sum(base)]
    else:
        advance_first = bytearray(m - 2)
        for idx in rng.permutation(m - 2)[: j - 1].tolist():
            advance_first[idx] = 1
        w1 = [0.0] * j
        w2 = [0.0] * (m - j)
        w1[0] = w2[0] = base[0]
        a = b = 0
        for i in range(1, m - 1):
            if advance_first[i - 1]:
                a += 1
            else:
                b += 1
            w1[a] += base[i]
            w2[b] += base[i]
    offset = sum(w1) * (m - j) + apex
    sub1 = _point_recursive(j, w1, rng)
    sub2 = _point_recursive(m - j, w2, rng)
    out = [0.0] * m
    for i in range(j):
        out[perm[i]] = sub1[i] + offset
    for i in range(m - j):
        out[perm[j + i]] = sub2[i] + apex
    return out


def sample_permutohedron_point(d, rng):
    """Uniform point of the permutohedron on values {0, ..., d-1}."""
    if d == 1:
        return np.zeros(1)
    cuts = np.empty(d + 1)
    cuts[0] = 0.0
    cuts[-1] = 1.0
    cuts[1:-1] = np.sort(rng.random(d - 1))
    return np.asarray(_point_recursive(d, np.diff(cuts).tolist(), rng))


def sample_vote_ball(d, rng):
    """Uniform point of the cylinder between the permutohedron and its
    negation: a base point minus a uniform multiple of (d-1)(1, ..., 1)."""
    if d < 2:
        raise ValueError(f"vote ball needs d >= 2, got {d}")
    return sample_permutohedron_point(d, rng) - rng.random() * (d - 1)


class VoteBall(BaseEstimator):
    """Rank-sum sensitivity-space ball with a uniform sampler.

    Parameters
    ----------
    d : int
        Number of ranked options; the ball lives in R^d.
    """

    def __init__(self, d):
        self.d = d

    @property
    def dim(self):
        return self.d

    def sample(self, n_samples=1, random_state=None):
        rng = as_generator(random_state)
        if self.d < 2:
            raise ValueError(f"vote ball needs d >= 2, got {self.d}")
        return np.array([sample_vote_ball(self.d, rng) for _ in range(n_samples)])

    def contains(self, x, tol=geometry.DEFAULT_TOL):
        return geometry.vote_ball_contains(x, tol=tol)

    def contains_batch(self, points, tol=geometry.DEFAULT_TOL):
        return geometry.vote_ball_contains_batch(points, tol=tol)

    def enclosing_radius(self, p):
        """Largest lp norm over the rank vertices."""
        if np.isinf(p):
            return float(self.d - 1)
        return float(np.sum(np.arange(self.d) ** float(p)) ** (1.0 / p))

    def log_volume(self):
        """log of base volume d^(d-3/2) times height (d-1) sqrt(d)."""
        return (self.d - 1) * math.log(self.d) + math.log(self.d - 1)

    def vertices(self):
        return geometry.vote_ball_vertices(self.d)
