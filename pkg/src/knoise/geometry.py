"""Continuous geometry: simplex sampling, cube slices, and ball membership.

Membership tests use a small absolute tolerance (default 1e-9) and are meant
for validation and rejection baselines; the direct samplers never consult
them, so the tolerance cannot bias sampled distributions.
"""

import itertools
import math

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "sample_simplex",
    "sample_fundamental_simplex",
    "fundamental_simplex",
    "simplex_volume",
    "apply_permutation",
    "phi_map",
    "sum_ball_contains",
    "count_ball_contains",
    "vote_ball_contains",
    "sum_ball_contains_batch",
    "count_ball_contains_batch",
    "vote_ball_contains_batch",
    "sum_ball_vertices",
    "count_ball_vertices",
    "vote_ball_vertices",
    "hull_equations",
    "hull_contains",
    "hull_contains_lp",
]


def _check_affinely_independent(vertices):
    diffs = vertices[1:] - vertices[0]
    rank = np.linalg.matrix_rank(diffs) if len(diffs) else 0
    if rank != len(diffs):
        raise ValueError(
            f"degenerate simplex: {len(vertices)} vertices span rank {rank}"
        )


def sample_simplex(vertices, rng, validate=True):
    """Uniform sample from the simplex spanned by the given vertices.

    Draws m uniforms for m + 1 vertices, sorts them together with 0 and 1,
    and uses the gaps between neighbors as convex-combination weights.

    Args:
      vertices: Array of shape (m + 1, n), affinely independent rows.
      rng: ``numpy.random.Generator``.
      validate: Check affine independence (rank of the difference matrix).

    Returns:
      A point of dimension n.
    """
    vertices = np.asarray(vertices, dtype=float)
    if validate:
        _check_affinely_independent(vertices)
    m = len(vertices) - 1
    cuts = np.empty(m + 2)
    cuts[0] = 0.0
    cuts[-1] = 1.0
    cuts[1:-1] = np.sort(rng.random(m))
    weights = np.diff(cuts)
    return weights @ vertices


def sample_fundamental_simplex(d, rng):
    """Uniform point of {x in (0,1)^d : x_1 < ... < x_d} (sorted uniforms).

    Draws with a coordinate exactly 0 or tied neighbors are resampled; they
    occur with probability ~2^-53 per draw and carry no measure.
    """
    while True:
        x = np.sort(rng.random(d))
        if x[0] > 0.0 and (d == 1 or np.all(np.diff(x) > 0.0)):
            return x


def fundamental_simplex(d):
    """Vertices f_0, ..., f_d where f_i has i trailing ones, shape (d+1, d)."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    vertices = np.zeros((d + 1, d))
    for i in range(1, d + 1):
        vertices[i, d - i :] = 1.0
    return vertices


def simplex_volume(vertices):
    """m-volume of an m-simplex given as m + 1 vertex rows (Gram determinant)."""
    diffs = np.asarray(vertices, dtype=float)[1:] - vertices[0]
    gram = diffs @ diffs.T
    m = len(diffs)
    return math.sqrt(max(np.linalg.det(gram), 0.0)) / math.factorial(m)


def apply_permutation(perm, x):
    """Coordinate action y_i = x[perm[i]] for a 1-based permutation."""
    perm = np.asarray(perm)
    x = np.asarray(x)
    if len(perm) != len(x):
        raise ValueError(f"length mismatch: perm {len(perm)}, point {len(x)}")
    return x[perm - 1]


def phi_map(x):
    """Volume-preserving bijection from ascent classes to cube slices.

    Maps y_j = x_{j-1} - x_j + 1[x_{j-1} < x_j] with x_0 = 0. A point with
    exactly j ascents lands in the slice with coordinate sum in (j, j+1).

    Args:
      x: Point in the open unit cube with pairwise-distinct coordinates.

    Returns:
      The image point y in the open unit cube.

    Raises:
      ValueError: A coordinate is 0 or 1, or coordinates are tied; the
        caller should resample (the bad set has measure zero).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or np.any(x >= 1.0) or len(np.unique(x)) != len(x):
        raise ValueError("point has a 0/1 coordinate or a tie; resample")
    shifted = np.concatenate(([0.0], x))
    return shifted[:-1] - shifted[1:] + (shifted[:-1] < shifted[1:])


def sum_ball_contains(x, k, tol=DEFAULT_TOL):
    """Membership in the sum ball: max norm <= 1 and l1 norm <= k."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    return bool(np.max(ax, initial=0.0) <= 1.0 + tol and np.sum(ax) <= k + tol)


def _orthant_gauge(u, k):
    # Gauge of {0 <= x <= 1, sum x <= k} evaluated at u >= 0.
    return max(np.max(u, initial=0.0), np.sum(u) / k)


def count_ball_contains(x, k, tol=DEFAULT_TOL):
    """Membership in the count ball via the split-sign gauge.

    Splits x into positive and negative parts and sums their one-orthant
    gauges max(max norm, l1 norm / k); the point is inside iff the total is
    at most 1. Exactness of this decision rule against the vertex-hull
    oracle is enforced by the geometry test suite.
    """
    x = np.asarray(x, dtype=float)
    pos = np.clip(x, 0.0, None)
    neg = np.clip(-x, 0.0, None)
    return bool(_orthant_gauge(pos, k) + _orthant_gauge(neg, k) <= 1.0 + tol)


def vote_ball_contains(x, tol=DEFAULT_TOL):
    """Membership in the rank-sum cylinder with permutohedron bases.

    Shifts x along (1, ..., 1) back onto the base hyperplane and tests the
    shifted point against the permutohedron by majorization: every m largest
    coordinates must sum to at most (d-1) + ... + (d-m), with equality for
    the full sum.
    """
    x = np.asarray(x, dtype=float)
    d = len(x)
    total = d * (d - 1) / 2.0
    c = (total - np.sum(x)) / d
    if c < -tol or c > (d - 1) + tol:
        return False
    p = np.sort(x + c)[::-1]
    prefix = np.cumsum(p[:-1])
    # The full-sum majorization constraint holds with equality by the choice
    # of c, so only the first d-1 prefixes are real constraints.
    m = np.arange(1, d)
    caps = m * (2 * d - m - 1) / 2.0
    return bool(np.all(prefix <= caps + tol))


def sum_ball_contains_batch(points, k, tol=DEFAULT_TOL):
    """Row-wise sum-ball membership for an (n, d) array."""
    ax = np.abs(np.atleast_2d(points))
    return (np.max(ax, axis=1) <= 1.0 + tol) & (np.sum(ax, axis=1) <= k + tol)


def count_ball_contains_batch(points, k, tol=DEFAULT_TOL):
    """Row-wise count-ball membership for an (n, d) array."""
    points = np.atleast_2d(points)
    pos = np.clip(points, 0.0, None)
    neg = np.clip(-points, 0.0, None)
    gauge = np.maximum(np.max(pos, axis=1), np.sum(pos, axis=1) / k)
    gauge += np.maximum(np.max(neg, axis=1), np.sum(neg, axis=1) / k)
    return gauge <= 1.0 + tol


def vote_ball_contains_batch(points, tol=DEFAULT_TOL):
    """Row-wise vote-ball membership for an (n, d) array."""
    points = np.atleast_2d(points)
    d = points.shape[1]
    total = d * (d - 1) / 2.0
    c = (total - np.sum(points, axis=1)) / d
    ok = (c >= -tol) & (c <= (d - 1) + tol)
    shifted = np.sort(points + c[:, None], axis=1)[:, ::-1]
    prefix = np.cumsum(shifted[:, :-1], axis=1)
    m = np.arange(1, d)
    caps = m * (2 * d - m - 1) / 2.0
    return ok & np.all(prefix <= caps + tol, axis=1)


def sum_ball_vertices(d, k):
    """All sum-ball vertices: 1..k coordinates set to +-1, the rest 0."""
    rows = []
    for j in range(1, k + 1):
        for support in itertools.combinations(range(d), j):
            for signs in itertools.product((-1.0, 1.0), repeat=j):
                v = np.zeros(d)
                v[list(support)] = signs
                rows.append(v)
    return np.array(rows)


def count_ball_vertices(d, k):
    """All count-ball vertices: 1..k same-sign unit coordinates."""
    rows = []
    for j in range(1, k + 1):
        for support in itertools.combinations(range(d), j):
            v = np.zeros(d)
            v[list(support)] = 1.0
            rows.append(v)
            rows.append(-v)
    return np.array(rows)


def vote_ball_vertices(d):
    """Vertices of the rank-sum cylinder: permutations of 0..d-1 and negations."""
    base = np.array(list(itertools.permutations(range(d))), dtype=float)
    return np.vstack([base, -base])


def hull_equations(vertices):
    """Facet inequalities (A, b) with Ax <= b inside, from a Qhull hull."""
    hull = ConvexHull(vertices)
    return hull.equations[:, :-1], -hull.equations[:, -1]


def hull_contains(equations, points, tol=DEFAULT_TOL):
    """Vectorized membership for precomputed facet inequalities."""
    a, b = equations
    points = np.atleast_2d(points)
    return np.all(points @ a.T <= b + tol, axis=1)


def hull_contains_lp(vertices, x, tol=DEFAULT_TOL):
    """Single-point hull membership by linear feasibility over the vertices.

    Solves for convex-combination weights directly, so it is independent of
    both the gauge formulas and the Qhull facet route.
    """
    vertices = np.asarray(vertices, dtype=float)
    n = len(vertices)
    a_eq = np.vstack([vertices.T, np.ones(n)])
    b_eq = np.append(np.asarray(x, dtype=float), 1.0)
    res = linprog(
        np.zeros(n),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0.0, None),
        method="highs",
        options={"primal_feasibility_tolerance": max(tol, 1e-10)},
    )
    return res.status == 0
