"""Input-validation helpers shared across samplers and mechanisms."""

import numpy as np


def as_generator(random_state):
    """Coerces None, an int seed, a SeedSequence, or a Generator to a Generator.

    Mirrors scikit-learn's ``check_random_state`` but targets the modern
    ``numpy.random.Generator`` API used throughout this package.
    """
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)


def check_dimension(d):
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ValueError(f"dimension d must be a positive integer, got {d!r}")
    return int(d)


def check_contribution_bound(d, k):
    d = check_dimension(d)
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= d:
        raise ValueError(f"contribution bound k must satisfy 1 <= k <= d={d}, got {k!r}")
    return int(k)


def check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")
    return value


def check_vector(x, d, name="statistic"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != d:
        raise ValueError(f"{name} must be a length-{d} vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite")
    return x
