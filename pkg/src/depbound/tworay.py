"""Two-path (line-of-sight plus ground reflection) envelope model.

Two receive antennas sit on a mast at heights h1 and h1 + dh; the
reflected path comes from mirroring the transmitter below the ground
plane, so both path lengths are plain hypotenuses.  The squared
envelope at each antenna is a1^2 + a2^2 + 2 a1 a2 cos(omega dtau) with
dtau the path delay difference; amplitudes stay constant and the
reflection adds no phase, so all distance dependence enters through
dtau.  A few centimeters of antenna spacing already decide whether the
two envelopes swing together or against each other, which is the whole
point: the dependence between the antennas is a free parameter of the
environment, not of the marginals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampler import empirical_correlation

__all__ = ["SPEED_OF_LIGHT", "TwoRayGeometry", "path_lengths", "envelope", "envelope_trace", "envelope_correlation"]

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class TwoRayGeometry:
    """Mast geometry and carrier: amplitudes a1 (direct), a2 (reflected),
    carrier frequency f in Hz, transmitter height h_tx, lower antenna
    height h1, antenna spacing dh (antenna 2 sits at h1 + dh), all in
    meters."""

    a1: float
    a2: float
    f: float
    h_tx: float
    h1: float
    dh: float
    propagation_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not (self.a1 >= 0.0 and self.a2 >= 0.0):
            raise ValueError("amplitudes must be nonnegative")
        if not self.f > 0.0:
            raise ValueError(f"carrier frequency must be positive, got {self.f!r}")
        if not (self.h_tx > 0.0 and self.h1 > 0.0):
            raise ValueError("antenna heights must be positive")
        if not self.h1 + self.dh > 0.0:
            raise ValueError(f"upper antenna height h1+dh must be positive, got {self.h1 + self.dh!r}")
        if not self.propagation_speed > 0.0:
            raise ValueError("propagation speed must be positive")

    def antenna_height(self, antenna):
        if antenna not in (1, 2):
            raise ValueError(f"antenna must be 1 or 2, got {antenna!r}")
        return self.h1 + (antenna - 1) * self.dh

    def envelope_range(self):
        """Attainable [min, max] of the squared envelope (cosine extremes)."""
        return ((self.a1 - self.a2) ** 2, (self.a1 + self.a2) ** 2)


def _check_distance(d):
    arr = np.asarray(d, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("ground distance must be positive and finite")
    return arr


def path_lengths(geom, d, antenna):
    """Direct and reflected path lengths at ground distance ``d``.

    The reflected length is the straight line to the transmitter's
    mirror image below the ground, so it always exceeds the direct one.
    """
    arr = _check_distance(d)
    h = geom.antenna_height(antenna)
    s_los = np.hypot(arr, geom.h_tx - h)
    s_nlos = np.hypot(arr, geom.h_tx + h)
    if np.ndim(d) == 0:
        return float(s_los), float(s_nlos)
    return s_los, s_nlos


def envelope(geom, d, antenna):
    """Squared envelope X_antenna(d) = a1^2 + a2^2 + 2 a1 a2 cos(omega dtau)."""
    s_los, s_nlos = path_lengths(geom, d, antenna)
    omega = 2.0 * math.pi * geom.f
    dtau = (np.asarray(s_los) - np.asarray(s_nlos)) / geom.propagation_speed
    x = geom.a1**2 + geom.a2**2 + 2.0 * geom.a1 * geom.a2 * np.cos(omega * dtau)
    return float(x) if np.ndim(d) == 0 else x


def envelope_trace(geom, d_grid):
    """Envelopes at both antennas over an increasing grid of distances.

    Returns (d, x1, x2) as parallel arrays, one row per grid point.
    """
    d = _check_distance(d_grid)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("distance grid must be a nonempty 1-D array")
    if d.size > 1 and not np.all(np.diff(d) > 0.0):
        raise ValueError("distance grid must be strictly increasing")
    return d, envelope(geom, d, 1), envelope(geom, d, 2)


def envelope_correlation(geom, d_low, d_high, n):
    """Pearson correlation of the two envelopes for d uniform on [d_low, d_high].

    Evaluated on a deterministic n-point uniform grid (a Riemann
    estimate of the uniform-distribution correlation), so identical
    inputs give identical output with no sampling noise.
    """
    if not (0.0 < d_low < d_high):
        raise ValueError(f"need 0 < d_low < d_high, got [{d_low!r}, {d_high!r}]")
    n = int(n)
    if n < 100:
        raise ValueError(f"need at least 100 grid points, got {n}")
    _, x1, x2 = envelope_trace(geom, np.linspace(d_low, d_high, n))
    return empirical_correlation(x1, x2)
