"""Two-user, two-resource collision channel in closed form.

Each user picks resource one with its own probability p_i; a slot
succeeds when the users pick different resources.  With marginals
fixed, the whole joint law has one free parameter, the probability p11
that both pick resource two; the feasible p11 interval follows from the
marginal constraints, and both the success probability and the
correlation between the two choices are monotone in p11.  Dependence
therefore moves the success probability across a sharp closed-form
range rather than a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CollisionSpec",
    "CollisionResult",
    "success_independent",
    "success_from_p11",
    "rho_from_p11",
    "analyze",
]

_P11_SLACK = 1e-12


@dataclass(frozen=True)
class CollisionSpec:
    """Marginal activity probabilities: p_i = P(user i on resource one)."""

    p1: float
    p2: float

    def __post_init__(self):
        for label, p in (("p1", self.p1), ("p2", self.p2)):
            if not (0.0 <= p <= 1.0) or not math.isfinite(p):
                raise ValueError(f"{label} must be a probability in [0, 1], got {p!r}")

    def p11_range(self):
        """Feasible interval for p11 = P(both pick resource two)."""
        q1 = 1.0 - self.p1
        q2 = 1.0 - self.p2
        return (max(0.0, q1 + q2 - 1.0), min(q1, q2))

    def degenerate(self):
        return self.p1 in (0.0, 1.0) or self.p2 in (0.0, 1.0)


@dataclass(frozen=True)
class CollisionResult:
    u_independent: float
    p11_range: tuple
    u_range: tuple
    rho_range: tuple | None  # None when a marginal is degenerate


def _check_p11(spec, p11):
    lo, hi = spec.p11_range()
    if not (lo - _P11_SLACK <= p11 <= hi + _P11_SLACK):
        raise ValueError(f"p11={p11!r} outside the feasible range [{lo!r}, {hi!r}]")


def success_independent(spec):
    """Success probability when the users choose independently."""
    return spec.p1 * (1.0 - spec.p2) + (1.0 - spec.p1) * spec.p2


def success_from_p11(spec, p11):
    """Success probability of the joint law with the given p11.

    Strictly decreasing in p11: more probability on "both on resource
    two" forces equally more on "both on resource one".
    """
    _check_p11(spec, p11)
    return min(max(2.0 - spec.p1 - spec.p2 - 2.0 * p11, 0.0), 1.0)


def rho_from_p11(spec, p11):
    """Correlation of the two choice indicators; strictly increasing in p11."""
    _check_p11(spec, p11)
    if spec.degenerate():
        raise ValueError("correlation undefined: a degenerate marginal has zero variance")
    q1 = 1.0 - spec.p1
    q2 = 1.0 - spec.p2
    denom = math.sqrt(spec.p1 * q1 * spec.p2 * q2)
    return (p11 - q1 * q2) / denom


def analyze(spec):
    """Full dependence analysis: feasible p11, success, and correlation ranges.

    Success is decreasing and correlation increasing in p11, so the
    extremes sit at the interval endpoints: u_max pairs with p11_lo
    (rho_min), u_min with p11_hi (rho_max).
    """
    lo, hi = spec.p11_range()
    u_range = (success_from_p11(spec, hi), success_from_p11(spec, lo))
    rho_range = None if spec.degenerate() else (rho_from_p11(spec, lo), rho_from_p11(spec, hi))
    return CollisionResult(
        u_independent=success_independent(spec),
        p11_range=(lo, hi),
        u_range=u_range,
        rho_range=rho_range,
    )
