"""Bivariate performance functions c(x, y) on the nonnegative quadrant.

Each builtin carries its analytic mixed partial d2c/dxdy where one
exists; the lattice checks use it to cross-validate the finite
difference route.  Arguments must be nonnegative (channel gains or
envelopes); negative input raises rather than clamps, since a negative
gain always means a caller bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CostFunction", "builtin", "parse_cost", "BUILTIN_COSTS"]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class CostFunction:
    """A named c(x, y) with optional analytic mixed partial.

    ``fn`` and ``mixed_partial`` must accept scalars or broadcastable
    arrays of nonnegative floats.  Call the instance directly; the call
    validates the domain once and delegates.
    """

    name: str
    fn: object
    mixed_partial: object = None
    params: dict = field(default_factory=dict)

    def __call__(self, x, y):
        _check_domain(self.name, x, y)
        return self.fn(x, y)

    def cross_partial(self, x, y):
        """Analytic d2c/dxdy.  Raises if this cost does not define one."""
        if self.mixed_partial is None:
            raise ValueError(f"cost {self.name!r} has no analytic mixed partial")
        _check_domain(self.name, x, y)
        return self.mixed_partial(x, y)

    def __repr__(self):
        if self.params:
            inner = ", ".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
            return f"CostFunction({self.name}: {inner})"
        return f"CostFunction({self.name})"


def _check_domain(name, x, y):
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise ValueError(f"cost {name!r}: arguments must be finite")
    if np.any(xa < 0.0) or np.any(ya < 0.0):
        raise ValueError(f"cost {name!r}: arguments must be nonnegative")


def _const_field(value):
    def mp(x, y):
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, value)

    return mp


def _make_sinr():
    # Signal power x against interference power y on unit noise.
    return CostFunction(
        name="sinr",
        fn=lambda x, y: x / (1.0 + y),
        mixed_partial=lambda x, y: -1.0 / (1.0 + y) ** 2 + 0.0 * x,
    )


def _make_mac_rate1(s=None, snr_db=None):
    """Rate of user 1 in a two-user multiple-access channel.

    c(x, y) = log2(1 + x / (s + y)) with ``s`` the inverse signal-to-noise
    ratio, s > 0.  Pass either ``s`` directly or ``snr_db`` with
    s = 10**(-snr_db/10).
    """
    if (s is None) == (snr_db is None):
        raise ValueError("mac_rate1: pass exactly one of s or snr_db")
    if snr_db is not None:
        s = 10.0 ** (-float(snr_db) / 10.0)
    s = float(s)
    if not (s > 0.0 and math.isfinite(s)):
        raise ValueError(f"mac_rate1: s must be positive, got {s!r}")

    def fn(x, y):
        # log2(1 + x/(s+y)) written as a log difference; log1p(x/(s+y))
        # loses nothing here and avoids a huge intermediate for tiny s.
        return np.log1p(x / (s + y)) / _LN2

    def mp(x, y):
        return -1.0 / ((s + x + y) ** 2 * _LN2)

    return CostFunction(name="mac_rate1", fn=fn, mixed_partial=mp, params={"s": s})


def _make_sum_rate():
    return CostFunction(
        name="sum_rate",
        fn=lambda x, y: np.log1p(x + y) / _LN2,
        mixed_partial=lambda x, y: -1.0 / ((1.0 + x + y) ** 2 * _LN2),
    )


def _make_secret_key():
    # log2((1+x+y)/(1+y)): what the pair can agree on minus what the
    # second channel leaks.  Same mixed partial as sum_rate.
    def fn(x, y):
        return (np.log1p(x + y) - np.log1p(y)) / _LN2

    return CostFunction(
        name="secret_key",
        fn=fn,
        mixed_partial=lambda x, y: -1.0 / ((1.0 + x + y) ** 2 * _LN2),
    )


def _make_prop_fair():
    # Proportional-fair style utility; the only supermodular builtin.
    return CostFunction(
        name="prop_fair",
        fn=lambda x, y: np.log1p(x) * np.log1p(y),
        mixed_partial=lambda x, y: 1.0 / ((1.0 + x) * (1.0 + y)),
    )


def _make_product():
    return CostFunction(name="product", fn=lambda x, y: x * y, mixed_partial=_const_field(1.0))


def _make_additive():
    return CostFunction(name="additive", fn=lambda x, y: x + y, mixed_partial=_const_field(0.0))


BUILTIN_COSTS = {
    "sinr": _make_sinr,
    "mac_rate1": _make_mac_rate1,
    "sum_rate": _make_sum_rate,
    "secret_key": _make_secret_key,
    "prop_fair": _make_prop_fair,
    "product": _make_product,
    "additive": _make_additive,
}


def builtin(name, **params):
    """Construct a builtin cost by name; see ``BUILTIN_COSTS`` for the set."""
    try:
        factory = BUILTIN_COSTS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_COSTS))
        raise ValueError(f"unknown cost {name!r} (known: {known})") from None
    try:
        return factory(**params)
    except TypeError:
        raise ValueError(f"cost {name!r} does not take parameters {sorted(params)}") from None


def parse_cost(text):
    """Build a cost from a spec string like ``"mac_rate1:s=0.5"``.

    Format is ``name[:key=value,...]``; keys are the factory keyword
    arguments (currently only ``mac_rate1`` takes any).
    """
    name, sep, rest = text.partition(":")
    name = name.strip().lower()
    params = {}
    if sep and rest.strip():
        for piece in rest.split(","):
            key, eq, value = piece.partition("=")
            if not eq:
                raise ValueError(f"cost parameter {piece!r} is not of the form key=value")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise ValueError(f"cost parameter {key.strip()!r} has non-numeric value {value!r}") from None
    return builtin(name, **params)
