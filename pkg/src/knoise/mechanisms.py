"""Additive-noise privacy mechanisms around the ball samplers.

Two families: the K-norm mechanism for pure epsilon-DP, which scales a
uniform ball sample by a Gamma(d + 1, 1/epsilon) radius, and elliptic
Gaussian noise for rho-concentrated DP, which draws N(0, M M^T / (2 rho))
for an ellipse M B_2 enclosing the sensitivity hull.

The minimum-enclosing ellipses for the count and vote balls have closed
forms. Both have one axis along (1, ..., 1) and d - 1 equal axes, so an
ellipse is just the pair (a1, a2) and noise generation works in O(d) per
draw without ever materializing a matrix: M x = a2 x + (a1 - a2) mean(x) 1.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_generator, check_positive, check_vector

__all__ = [
    "EllipseSpec",
    "count_min_ellipse",
    "vote_min_ellipse",
    "ellipse_expected_sq_norm",
    "sphere_expected_sq_norm",
    "knorm_noise",
    "elliptic_gaussian_noise",
    "parallel_elliptic_noise",
    "KNormMechanism",
    "EllipticGaussianMechanism",
]


class EllipseSpec:
    """Origin-centered ellipse with principal axis along (1, ..., 1).

    Axis length a1 applies along (1, ..., 1)/sqrt(d); the remaining d - 1
    axes share length a2.
    """

    def __init__(self, d, a1, a2):
        self.d = int(d)
        self.a1 = check_positive(a1, "a1")
        self.a2 = check_positive(a2, "a2")

    def __repr__(self):
        return f"EllipseSpec(d={self.d}, a1={self.a1!r}, a2={self.a2!r})"

    def transform(self, x):
        """Applies M (the sphere-to-ellipse map) to points, rows of x."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.squeeze(
            self.a2 * x + (self.a1 - self.a2) * np.mean(x, axis=1, keepdims=True)
        )

    def quadratic_form(self, x):
        """x^T A x for the ellipse matrix A; 1 on the boundary, <= 1 inside."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        axial_sq = np.sum(x, axis=1) ** 2 / self.d
        radial_sq = np.maximum(np.sum(x * x, axis=1) - axial_sq, 0.0)
        return np.squeeze(axial_sq / self.a1**2 + radial_sq / self.a2**2)

    def expected_sq_norm(self):
        return ellipse_expected_sq_norm(self)


def count_min_ellipse(d, k):
    """Minimum enclosing ellipse of the count ball, for k <= d/2.

    The Lagrange solution contacts the vertices with k ones: with
    lam = (k/d)(sqrt(k) + sqrt((d-k)(d-1)))^2, the axes are
    a1 = (lam k^2 / d)^(1/4) and a2 = (lam k (d-k) / (d (d-1)))^(1/4).

    Raises:
      ValueError: k > d/2, the unsupported dense-contribution regime where
        the contact analysis breaks down.
    """
    if d < 2 or k < 1:
        raise ValueError(f"need d >= 2 and k >= 1, got d={d}, k={k}")
    if 2 * k > d:
        raise ValueError(
            f"unsupported regime: count ellipse requires k <= d/2, got k={k}, d={d}"
        )
    lam = (k / d) * (math.sqrt(k) + math.sqrt((d - k) * (d - 1))) ** 2
    a1 = (lam * k * k / d) ** 0.25
    a2 = (lam * k * (d - k) / (d * (d - 1))) ** 0.25
    return EllipseSpec(d, a1, a2)


def vote_min_ellipse(d):
    """Minimum enclosing ellipse of the vote ball, contacting every rank
    vertex: lam = (|w1| + |w2| sqrt(d-1))^2 for the axial and radial vertex
    components |w1| = (d-1) sqrt(d) / 2 and |w2| = sqrt(d (d^2-1) / 12)."""
    if d < 2:
        raise ValueError(f"vote ellipse needs d >= 2, got {d}")
    w1 = (d - 1) * math.sqrt(d) / 2.0
    w2 = math.sqrt(d * (d * d - 1) / 12.0)
    lam = (w1 + w2 * math.sqrt(d - 1)) ** 2
    a1 = (lam * w1 * w1) ** 0.25
    a2 = (lam * w2 * w2 / (d - 1)) ** 0.25
    return EllipseSpec(d, a1, a2)


def ellipse_expected_sq_norm(ellipse):
    """Expected squared l2 norm of a uniform sample from the enclosed body:
    (sum of squared axis lengths) / (d + 2)."""
    d = ellipse.d
    return (ellipse.a1**2 + (d - 1) * ellipse.a2**2) / (d + 2)


def sphere_expected_sq_norm(d, radius):
    """Same law specialized to a ball of the given radius."""
    return d * radius**2 / (d + 2)


def knorm_noise(ball, epsilon, rng, sensitivity=1.0):
    """K-norm mechanism noise: Gamma(d + 1, 1/epsilon) radius times a
    uniform ball point, scaled by the sensitivity."""
    d = ball.dim
    radius = rng.gamma(shape=d + 1, scale=1.0 / epsilon)
    return sensitivity * radius * ball.sample(1, random_state=rng)[0]


def elliptic_gaussian_noise(ellipse, rho, rng):
    """One draw of N(0, M M^T / (2 rho)) for the ellipse map M.

    Scales a standard normal vector by a2 and corrects the component along
    (1, ..., 1) to length a1, all in O(d).
    """
    x = rng.standard_normal(ellipse.d)
    s = ellipse.a2 * np.mean(x)
    z = ellipse.a2 * x + s * (ellipse.a1 / ellipse.a2 - 1.0)
    return z / math.sqrt(2.0 * rho)


def parallel_elliptic_noise(ellipse, rho, rngs, worker_count=None):
    """Fork-join version of ``elliptic_gaussian_noise``.

    Coordinates are split into ``len(rngs)`` contiguous blocks, one
    generator per block; the block-to-stream assignment is fixed, so the
    output depends only on ``rngs`` and never on ``worker_count`` (the
    thread-pool size). With a single generator the draws coincide exactly
    with the serial sampler on the same stream. The mean reduction and its
    broadcast are the only synchronization point.

    Args:
      ellipse: EllipseSpec.
      rho: Concentrated-DP parameter.
      rngs: Sequence of ``numpy.random.Generator``, one per block.
      worker_count: Thread-pool size; defaults to len(rngs).

    Returns:
      One noise vector of dimension ellipse.d.
    """
    rho = check_positive(rho, "rho")
    d = ellipse.d
    blocks = np.array_split(np.arange(d), len(rngs))
    x = np.empty(d)
    z = np.empty(d)
    workers = worker_count if worker_count is not None else len(rngs)

    def draw(i):
        blk = blocks[i]
        x[blk] = rngs[i].standard_normal(len(blk))

    def correct(i, s):
        blk = blocks[i]
        z[blk] = ellipse.a2 * x[blk] + s * (ellipse.a1 / ellipse.a2 - 1.0)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(draw, range(len(blocks))))
        s = ellipse.a2 * np.mean(x)
        list(pool.map(correct, range(len(blocks)), [s] * len(blocks)))
    return z / math.sqrt(2.0 * rho)


class KNormMechanism(BaseEstimator):
    """Pure-DP additive mechanism with density exp(-eps ||y - T(X)|| / delta)
    in the norm induced by the given ball.

    Parameters
    ----------
    ball : object
        Ball sampler exposing ``dim`` and ``sample`` (SumBall, CountBall,
        VoteBall, or anything duck-compatible).
    epsilon : float
        Privacy parameter, > 0.
    sensitivity : float, default 1.0
        Statistic sensitivity in the induced norm; rescales the noise (a
        per-coordinate contribution bound b enters here as a factor).
    """

    def __init__(self, ball, epsilon, sensitivity=1.0):
        self.ball = ball
        self.epsilon = epsilon
        self.sensitivity = sensitivity

    def randomize(self, statistic, random_state=None):
        """Returns the privatized statistic."""
        epsilon = check_positive(self.epsilon, "epsilon")
        sensitivity = check_positive(self.sensitivity, "sensitivity")
        statistic = check_vector(statistic, self.ball.dim)
        rng = as_generator(random_state)
        return statistic + knorm_noise(self.ball, epsilon, rng, sensitivity)


class EllipticGaussianMechanism(BaseEstimator):
    """rho-concentrated-DP mechanism adding N(0, M M^T / (2 rho)) noise.

    Parameters
    ----------
    ellipse : EllipseSpec
        Enclosing ellipse of the statistic's sensitivity hull.
    rho : float
        Concentrated-DP parameter, > 0.
    """

    def __init__(self, ellipse, rho):
        self.ellipse = ellipse
        self.rho = rho

    def randomize(self, statistic, random_state=None):
        """Returns the privatized statistic."""
        rho = check_positive(self.rho, "rho")
        statistic = check_vector(statistic, self.ellipse.d)
        rng = as_generator(random_state)
        return statistic + elliptic_gaussian_noise(self.ellipse, rho, rng)
