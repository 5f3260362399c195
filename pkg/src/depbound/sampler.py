"""Seedable Monte Carlo oracle for the three canonical couplings.

The dependent couplings ride a single uniform stream: comonotonic draws
are (qx(u), qy(u)), countermonotonic (qx(u), qy(1 - u)), so runs that
share a seed are antithetic by construction.  Independence uses two
streams spawned from the root seed.  Moments accumulate in one pass
with exact pairwise merging, so the estimate is stable out to n = 1e8
and independent of the batch partition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "COUPLINGS",
    "McEstimate",
    "NonFiniteCostError",
    "mc_expectation",
    "empirical_correlation",
]

COUPLINGS = ("comonotonic", "countermonotonic", "independent")

# rng.random() emits multiples of 2^-53 in [0, 1); pinning exact zeros to
# 2^-53 keeps both u and 1-u strictly inside (0, 1) with no other change.
_U_MIN = 2.0**-53

DEFAULT_BATCH = 1 << 20


class NonFiniteCostError(Exception):
    """A cost evaluation produced NaN/inf during sampling."""


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    n: int
    seed: int


class _Moments:
    """Streaming count/mean/M2 with the exact pairwise-merge update."""

    __slots__ = ("n", "mean", "m2")

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, values):
        nb = values.size
        if nb == 0:
            return
        mb = float(values.mean())
        m2b = float(np.sum((values - mb) ** 2))
        na = self.n
        total = na + nb
        delta = mb - self.mean
        self.mean += delta * nb / total
        self.m2 += m2b + delta * delta * na * nb / total
        self.n = total


def _check_finite(cost, x, y):
    # Draws can overflow before the cost ever runs (heavy-tailed
    # quantiles); both cases are numerical failures, not usage errors.
    bad = ~(np.isfinite(x) & np.isfinite(y))
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteCostError(
            f"marginal draw overflowed: (x={float(x[i])!r}, y={float(y[i])!r}) before cost {cost.name!r}"
        )
    values = np.asarray(cost(x, y), dtype=float)
    if not np.all(np.isfinite(values)):
        i = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFiniteCostError(
            f"cost {cost.name!r} returned {float(values[i])!r} at (x={float(x[i])!r}, y={float(y[i])!r})"
        )
    return values


def mc_expectation(cost, fx, fy, coupling, n, seed, batch_size=DEFAULT_BATCH):
    """Estimate E[c(X, Y)] under one canonical coupling.

    Returns an ``McEstimate``; identical (seed, n, coupling) reproduce
    it bit for bit.  ``n`` must be at least 100, small enough samples
    say nothing and hide stderr bugs.
    """
    if coupling not in COUPLINGS:
        raise ValueError(f"unknown coupling {coupling!r} (known: {', '.join(COUPLINGS)})")
    n = int(n)
    if n < 100:
        raise ValueError(f"need n >= 100, got {n}")
    seed = int(seed)

    root = np.random.SeedSequence(seed)
    if coupling == "independent":
        seq_x, seq_y = root.spawn(2)
        rng_x = np.random.default_rng(seq_x)
        rng_y = np.random.default_rng(seq_y)
    else:
        rng = np.random.default_rng(root)

    acc = _Moments()
    remaining = n
    # Overflow here is not an anomaly to warn about, it is a checked
    # failure mode: _check_finite turns it into a diagnostic.
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        while remaining:
            m = min(remaining, batch_size)
            if coupling == "independent":
                x = fx.quantile(np.maximum(rng_x.random(m), _U_MIN))
                y = fy.quantile(np.maximum(rng_y.random(m), _U_MIN))
            else:
                u = np.maximum(rng.random(m), _U_MIN)
                x = fx.quantile(u)
                y = fy.quantile(u if coupling == "comonotonic" else 1.0 - u)
            acc.add(_check_finite(cost, x, y))
            remaining -= m

    stderr = float(np.sqrt(acc.m2 / (acc.n - 1) / acc.n))
    return McEstimate(value=acc.mean, stderr=stderr, n=acc.n, seed=seed)


def empirical_correlation(x, y):
    """Pearson correlation of two equally long samples.

    Degenerate input (fewer than two points, or zero variance in either
    coordinate) raises rather than returning NaN.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("need at least two pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = float(dx @ dx)
    vy = float(dy @ dy)
    if vx == 0.0 or vy == 0.0:
        raise ValueError("degenerate sample: zero variance in a coordinate")
    r = float(dx @ dy) / np.sqrt(vx * vy)
    return float(np.clip(r, -1.0, 1.0))
