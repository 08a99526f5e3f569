"""Independent reference computations used to check the engines.

Nothing here imports the metric or uncertainty engines. Random draws use
numpy's PCG64 bit generator seeded through ``SeedSequence``, so every
number is reproducible bit-for-bit for a given seed.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def brute_force_roam(additional, roots, beta0, betas) -> float:
    """Direct transcription of the root/additional formula.

    ``additional`` and ``betas`` are parallel sequences; ``roots`` is a
    sequence of root values. Summation is naive but carried out on exact
    rationals, then rounded once to a float.
    """
    total = Fraction(beta0)
    for b, x in zip(betas, additional):
        total = total + Fraction(b) * Fraction(x)
    prod = Fraction(1)
    for x in roots:
        prod = prod * Fraction(x)
    return float(total * prod)


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def simulate_aggregate(true_p: float, n: int, seed: int = 0):
    """Draw ``n`` binary replicate outcomes; return ``(outcomes, mean)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    outcomes = (_rng(seed).random(n) < true_p).astype(np.int8)
    return outcomes, float(outcomes.mean())


def empirical_se(true_p: float, n: int, trials: int = 10_000, seed: int = 0) -> float:
    """Standard deviation of the replicate mean across seeded trials.

    Each trial aggregates ``n`` Bernoulli(``true_p``) outcomes; trial
    means are binomial counts over ``n``.
    """
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    counts = _rng(seed).binomial(n, true_p, size=trials)
    return float(np.std(counts / n, ddof=1))
