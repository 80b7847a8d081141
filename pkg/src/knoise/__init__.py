"""Noise geometry for private sums, counts, and rank aggregation.

Exact uniform samplers for the three induced-norm sensitivity balls, the
K-norm and elliptic Gaussian mechanisms built on them, closed-form minimum
enclosing ellipses, and lp-ball baselines for benchmarking.
"""

from .count_ball import CountBall
from .mechanisms import (
    EllipseSpec,
    EllipticGaussianMechanism,
    KNormMechanism,
    count_min_ellipse,
    ellipse_expected_sq_norm,
    elliptic_gaussian_noise,
    knorm_noise,
    parallel_elliptic_noise,
    sphere_expected_sq_norm,
    vote_min_ellipse,
)
from .sum_ball import SumBall
from .vote_ball import VoteBall

__version__ = "0.1.0"

__all__ = [
    "SumBall",
    "CountBall",
    "VoteBall",
    "EllipseSpec",
    "KNormMechanism",
    "EllipticGaussianMechanism",
    "count_min_ellipse",
    "vote_min_ellipse",
    "ellipse_expected_sq_norm",
    "sphere_expected_sq_norm",
    "knorm_noise",
    "elliptic_gaussian_noise",
    "parallel_elliptic_noise",
]
