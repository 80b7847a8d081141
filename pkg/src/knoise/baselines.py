"""lp-ball baselines: exact samplers, enclosing radii, and rejection runs.

These are the comparison and cross-validation tools: uniform lp-ball
sampling via the generalized-Gamma construction, minimum enclosing lp radii
for each ball, and a rejection-sampling harness whose acceptance rate can be
checked against exact volume ratios computed in log space.
"""

import math

import numpy as np
from scipy.special import gammaln

__all__ = [
    "sample_lp_ball",
    "min_enclosing_radius",
    "lp_ball_log_volume",
    "predicted_log_acceptance",
    "RejectionBudgetError",
    "rejection_sample",
    "rejection_sample_many",
    "measure_acceptance",
]


def _check_p(p):
    p = float(p)
    if not p >= 1.0:
        raise ValueError(f"lp order must satisfy p >= 1, got {p}")
    return p


def sample_lp_ball(d, p, rng, radius=1.0, size=None):
    """Uniform samples from the d-dimensional lp ball.

    For finite p, draws coordinates with density proportional to
    exp(-|t|^p) (a signed Gamma(1/p) power), adds an independent Exp(1) to
    the p-th-power sum, and normalizes; p = inf is a coordinate-wise
    uniform cube.

    Args:
      d: Dimension.
      p: Norm order in [1, inf].
      rng: ``numpy.random.Generator``.
      radius: Ball radius.
      size: None for a single point, else the number of rows.

    Returns:
      Array of shape (d,) or (size, d).
    """
    p = _check_p(p)
    n = 1 if size is None else int(size)
    if math.isinf(p):
        out = rng.uniform(-radius, radius, size=(n, d))
        return out[0] if size is None else out
    g = rng.gamma(1.0 / p, 1.0, size=(n, d))
    signs = rng.integers(0, 2, size=(n, d)) * 2 - 1
    coords = signs * g ** (1.0 / p)
    e = rng.exponential(1.0, size=n)
    denom = (np.sum(g, axis=1) + e) ** (1.0 / p)
    out = radius * coords / denom[:, None]
    return out[0] if size is None else out


def min_enclosing_radius(ball, p):
    """Radius of the smallest lp ball containing the given ball."""
    return ball.enclosing_radius(_check_p(p))


def lp_ball_log_volume(d, p, radius=1.0):
    """log volume of the lp ball: d log(2 r Gamma(1 + 1/p)) - log Gamma(1 + d/p)."""
    p = _check_p(p)
    if math.isinf(p):
        return d * math.log(2.0 * radius)
    return d * (math.log(2.0 * radius) + gammaln(1.0 + 1.0 / p)) - gammaln(
        1.0 + d / p
    )


def predicted_log_acceptance(ball, p):
    """Exact log acceptance rate of lp-ball rejection: log(vol ball / vol lp)."""
    radius = ball.enclosing_radius(_check_p(p))
    return ball.log_volume() - lp_ball_log_volume(ball.dim, p, radius)


class RejectionBudgetError(RuntimeError):
    """Raised when rejection sampling exhausts its attempt budget."""

    def __init__(self, attempts):
        super().__init__(
            f"rejection sampling failed to accept within {attempts} attempts"
        )
        self.attempts = attempts


def rejection_sample(ball, p, rng, max_attempts=1_000_000):
    """Samples the ball by rejection from its minimum enclosing lp ball.

    Returns:
      (point, attempts) where attempts counts all proposals including the
      accepted one.

    Raises:
      RejectionBudgetError: No proposal landed inside within max_attempts.
    """
    radius = ball.enclosing_radius(_check_p(p))
    d = ball.dim
    for attempt in range(1, max_attempts + 1):
        y = sample_lp_ball(d, p, rng, radius=radius)
        if ball.contains(y):
            return y, attempt
    raise RejectionBudgetError(max_attempts)


def rejection_sample_many(ball, p, n, rng, chunk=200_000, max_proposals=None):
    """Collects n accepted rejection samples with vectorized proposals.

    Returns:
      (samples, proposals): an (n, d) array and the total proposal count.
    """
    radius = ball.enclosing_radius(_check_p(p))
    d = ball.dim
    rows = []
    got = 0
    proposals = 0
    while got < n:
        if max_proposals is not None and proposals >= max_proposals:
            raise RejectionBudgetError(proposals)
        y = sample_lp_ball(d, p, rng, radius=radius, size=chunk)
        keep = y[ball.contains_batch(y)]
        proposals += chunk
        rows.append(keep[: n - got])
        got += len(rows[-1])
    return np.vstack(rows), proposals


def measure_acceptance(ball, p, n_proposals, rng, chunk=200_000):
    """Empirical acceptance rate of lp rejection over n_proposals draws."""
    radius = ball.enclosing_radius(_check_p(p))
    d = ball.dim
    accepted = 0
    left = int(n_proposals)
    while left > 0:
        m = min(chunk, left)
        y = sample_lp_ball(d, p, rng, radius=radius, size=m)
        accepted += int(np.count_nonzero(ball.contains_batch(y)))
        left -= m
    return accepted / n_proposals
