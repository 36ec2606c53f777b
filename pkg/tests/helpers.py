"""Random comparison matrices shared by the solver and acceptance tests."""
import itertools

import numpy as np

from fuzzyprio.judgments import build_matrix


def dominant_band(ratio, half_width):
    """Band of the given half-width, stated in the direction where the ratio is >= 1.

    Returns ``(band, flipped)``; ``flipped`` means the band is on the inverse ratio.
    """
    flipped = ratio < 1
    r = 1.0 / ratio if flipped else ratio
    lower = r - half_width if r - half_width > 0 else r / 2
    return (lower, r, r + half_width), flipped


def matrix_from_ratios(ratios, n, half_width=1.0):
    ids = [f"x{k}" for k in range(n)]
    entries = []
    for (i, j), r in zip(itertools.combinations(range(n), 2), ratios):
        band, flipped = dominant_band(r, half_width)
        entries.append((ids[j], ids[i], band) if flipped else (ids[i], ids[j], band))
    return build_matrix(ids, entries)


def consistent_matrix(rng, n, half_width=1.0, alpha=3.0):
    """Matrix whose modal values are exactly ``w_i / w_j`` for a random ``w``."""
    w = rng.dirichlet(np.full(n, alpha))
    ratios = [w[i] / w[j] for i, j in itertools.combinations(range(n), 2)]
    return matrix_from_ratios(ratios, n, half_width), w


def mixed_matrix(rng, n, half_width=1.0):
    """Half the time modally consistent, otherwise independent modal ratios in [1/3, 3]."""
    if rng.random() < 0.5:
        return consistent_matrix(rng, n, half_width)[0]
    k = n * (n - 1) // 2
    ratios = np.exp(rng.uniform(np.log(1 / 3), np.log(3), size=k))
    return matrix_from_ratios(ratios, n, half_width)


def inconsistent_3x3():
    return build_matrix("ABC", [("A", "B", (1, 2, 3)), ("B", "C", (1, 2, 3)), ("A", "C", (1, 2, 3))])


def consistent_3x3():
    return build_matrix("ABC", [("A", "B", (1, 2, 3)), ("B", "C", (1, 2, 3)), ("A", "C", (3, 4, 5))])


def compatible_3x3():
    """Modal values inconsistent (2 * 2 != 3) but every band contains ratios of (4, 2, 1)/7."""
    return build_matrix("ABC", [("A", "B", (1.5, 2, 3)), ("B", "C", (1.5, 2, 3)), ("A", "C", (2, 3, 5))])


def incompatible_3x3():
    """A/B forced to at least 4 while A/C and C/B each stay at most 1."""
    return build_matrix("ABC", [("A", "B", (4, 5, 6)), ("A", "C", (0.5, 0.75, 1)), ("C", "B", (0.5, 0.75, 1))])
