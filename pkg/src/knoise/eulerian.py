"""Exact combinatorics for ascent-structured permutation sampling.

Eulerian numbers A[x][y] count permutations of {1, ..., x} with exactly y
ascents. They are kept as arbitrary-precision Python integers: the values
overflow 64-bit floats around x = 20, and the sampling routines below need
exact weight ratios to stay uniform. All randomized routines take an explicit
``numpy.random.Generator`` and draw integer weights through an exact
rejection scheme, so no float normalization enters the discrete choices.

Permutations are 1-based value arrays, i.e. ``perm[i]`` is the value at
position ``i`` and an ascent is a position with ``perm[i] < perm[i + 1]``.
"""

import math
from fractions import Fraction

import numpy as np

__all__ = [
    "eulerian_table",
    "eulerian_number",
    "truncated_row_sum",
    "slice_volume",
    "randbelow",
    "ascent_count",
    "sample_fixed_ascent_permutation",
    "sample_random_permutation",
]


def eulerian_table(d_max):
    """Builds the triangular table of Eulerian numbers up to row d_max.

    Uses the recurrence A[x][y] = (x - y) * A[x-1][y-1] + (y + 1) * A[x-1][y]
    with A[0][0] = 1, evaluated in exact integer arithmetic.

    Args:
      d_max: Largest row index, at least 1.

    Returns:
      A list of lists of Python ints. Row 0 is [1]; row x >= 1 holds the x
      values A[x][0], ..., A[x][x-1]. The table is immutable by convention
      and safe to share across threads.
    """
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    rows = [[1]]
    for x in range(1, d_max + 1):
        prev = rows[x - 1]
        width = max(x - 1, 1)

        def at(y, _prev=prev, _width=width):
            return _prev[y] if 0 <= y < _width else 0

        rows.append(
            [(x - y) * at(y - 1) + (y + 1) * at(y) for y in range(x)]
        )
    return rows


def eulerian_number(table, x, y):
    """A[x][y] with out-of-range y mapped to 0."""
    row = table[x]
    return row[y] if 0 <= y < len(row) else 0


def truncated_row_sum(table, x, k):
    """Sum of A[x][0..k-1], i.e. d! times the volume of the first k slices.

    Row x = 0 returns 1 for any k >= 0: a zero-dimensional block carries unit
    measure. For x >= 1 and k = 0 the sum is empty.
    """
    if x == 0:
        return 1
    return sum(table[x][: min(k, x)])


def slice_volume(table, d, j):
    """Volume of the j-th unit-cube slice {x in (0,1)^d : j-1 < sum x < j}.

    Args:
      table: Eulerian table covering row d.
      d: Ambient dimension, 1 <= d <= len(table) - 1.
      j: Slice index in [1, d].

    Returns:
      The exact rational A[d][j-1] / d! as a ``fractions.Fraction``.
    """
    if not 1 <= j <= d:
        raise ValueError(f"slice index j={j} outside [1, {d}]")
    if d >= len(table):
        raise ValueError(f"table only covers rows up to {len(table) - 1}")
    return Fraction(table[d][j - 1], math.factorial(d))


def randbelow(rng, n):
    """Exact uniform integer in [0, n) for arbitrary-precision n."""
    if n <= 0:
        raise ValueError(f"randbelow needs n >= 1, got {n}")
    if n <= 1 << 63:
        return int(rng.integers(0, n))
    bits = n.bit_length()
    nbytes = (bits + 7) // 8
    shift = 8 * nbytes - bits
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") >> shift
        if r < n:
            return r


def ascent_count(perm):
    """Number of positions i with perm[i] < perm[i+1]."""
    p = np.asarray(perm)
    return int(np.count_nonzero(p[:-1] < p[1:]))


def _ascent_coin_path(table, d, j, rng):
    """Flips the d-1 weighted coins that drive fixed-ascent sampling.

    Walking subproblems (m, a) from (d, j) down to (1, 0), a heads at stage m
    means the value m will be inserted so that it creates a new ascent.

    Returns:
      Boolean list ``coins`` indexed so coins[m] is the flip for stage m,
      m = 2..d (coins[0], coins[1] unused).
    """
    coins = [False] * (d + 1)
    a = j
    for m in range(d, 1, -1):
        heads_w = (m - a) * eulerian_number(table, m - 1, a - 1)
        tails_w = (a + 1) * eulerian_number(table, m - 1, a)
        heads = randbelow(rng, heads_w + tails_w) < heads_w
        coins[m] = heads
        if heads:
            a -= 1
    return coins


def sample_fixed_ascent_permutation(table, d, j, rng):
    """Uniformly samples a permutation of {1, ..., d} with exactly j ascents.

    Flips the stage coins with exact integer weights
    (m - a) * A[m-1][a-1] vs (a + 1) * A[m-1][a], then builds the permutation
    by inserting values 2, ..., d one at a time: after a heads the value goes
    into a current descent or the end (creating an ascent), after a tails
    into a current ascent or the beginning (preserving the count), with the
    position chosen uniformly among the valid ones.

    Args:
      table: Eulerian table covering row d.
      d: Permutation length, >= 1.
      j: Required ascent count, 0 <= j <= d - 1.
      rng: ``numpy.random.Generator``.

    Returns:
      Int array of length d holding a 1-based permutation.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if not 0 <= j <= d - 1:
        raise ValueError(f"ascent count j={j} outside [0, {d - 1}]")
    coins = _ascent_coin_path(table, d, j, rng)
    perm = np.empty(d, dtype=np.int64)
    perm[0] = 1
    for m in range(2, d + 1):
        cur = perm[: m - 1]
        asc = cur[:-1] < cur[1:]
        if coins[m]:
            # Interior descent gaps are at index i+1 for each descent i.
            gaps = np.append(np.flatnonzero(~asc) + 1, m - 1)
        else:
            gaps = np.append(0, np.flatnonzero(asc) + 1)
        g = gaps[rng.integers(0, len(gaps))]
        perm[g + 1 : m] = perm[g : m - 1].copy()
        perm[g] = m
    return perm


def sample_random_permutation(d, rng):
    """Uniform 1-based permutation of {1, ..., d}."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return rng.permutation(d) + 1
