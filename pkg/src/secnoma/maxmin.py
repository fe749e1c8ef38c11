"""Max-min confidential rate under a total power budget.

The common rate floor is feasible at some level iff the minimum-power problem
at that level fits the budget, and required power is increasing in the floor,
so a bisection on the floor is exact. For two users the optimum also has a
closed form, which doubles as an independent check on the bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelRealization
from .power_min import InfeasibleReason, InfeasibleVerdict, _recursion
from .secrecy import PowerAllocation

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class MaxMinSolution:
    """Certified common confidential rate, the allocation achieving it, and
    how many bisection steps produced it (0 for closed forms)."""

    rate: float
    allocation: PowerAllocation
    iterations_used: int

    def __post_init__(self):
        if not (self.rate > 0):
            raise ValueError("max-min rate must be positive")


def check_positive_rate_feasibility(channel: ChannelRealization, eps: float) -> bool:
    """A positive common rate exists iff every gain clears the stringency."""
    if not (0.0 < eps < 1.0):
        raise ValueError("outage bound must lie in (0, 1)")
    phi = channel.eaves_avg_gain * math.log(1.0 / eps)
    return channel.user_gains[0] > phi


def _positive_rate_verdict(channel, eps):
    phi = channel.eaves_avg_gain * math.log(1.0 / eps)
    failing = frozenset(
        k for k in range(1, channel.num_users + 1) if channel.user_gains[k - 1] <= phi
    )
    return InfeasibleVerdict(failing, InfeasibleReason.POSITIVE_RATE)


def solve_maxmin_bisection(
    channel: ChannelRealization,
    eps: float,
    power_budget_mw: float,
    tol: float = DEFAULT_TOL,
) -> MaxMinSolution | InfeasibleVerdict:
    """Bisect the common rate floor; accept a floor when the minimum-power
    solution exists and fits the budget, and keep the last accepted pair.

    The bracket starts at [0, log2(1 + gamma_1 * P)]: the weakest user could
    never exceed that rate even alone, unprotected.
    """
    if not (power_budget_mw > 0 and math.isfinite(power_budget_mw)):
        raise ValueError("power budget must be positive and finite")
    if not (tol > 0):
        raise ValueError("tolerance must be positive")
    if not check_positive_rate_feasibility(channel, eps):
        return _positive_rate_verdict(channel, eps)

    gains = channel.user_gains
    phi = channel.eaves_avg_gain * math.log(1.0 / eps)
    lo = 0.0
    hi = math.log2(1.0 + gains[0] * power_budget_mw)
    best = None
    iterations = 0
    while hi - lo >= tol:
        iterations += 1
        q = 0.5 * (lo + hi)
        powers, _, _ = _recursion(gains, phi, 2.0 ** q)
        if powers is not None and sum(powers) <= power_budget_mw:
            lo = q
            best = (q, powers)
        else:
            hi = q
    if best is None:
        raise ValueError("tolerance too coarse to certify a positive rate at this budget")
    return MaxMinSolution(best[0], PowerAllocation(tuple(best[1])), iterations)


def _psi(g1, g2, phi, p):
    return math.sqrt(
        (1.0 + phi * p)
        * (4.0 * (1.0 + g1 * p) * (g1 - phi) * (g2 - phi) + (1.0 + phi * p) * (g2 - g1) ** 2)
    )


def solve_maxmin_two_user(
    channel: ChannelRealization, eps: float, power_budget_mw: float
) -> MaxMinSolution | InfeasibleVerdict:
    """Closed-form two-user optimum: the budget and both outage constraints
    are simultaneously tight, leaving one quadratic in the split."""
    if channel.num_users != 2:
        raise ValueError("closed form is specific to two users")
    if not (power_budget_mw > 0 and math.isfinite(power_budget_mw)):
        raise ValueError("power budget must be positive and finite")
    if not check_positive_rate_feasibility(channel, eps):
        return _positive_rate_verdict(channel, eps)

    g1, g2 = channel.user_gains
    phi = channel.eaves_avg_gain * math.log(1.0 / eps)
    p = power_budget_mw
    psi = _psi(g1, g2, phi, p)
    den = 2.0 * ((1.0 + phi * p) * g1 * g2 - phi * phi * (1.0 + g1 * p))
    p1 = ((1.0 + phi * p) * (g2 + g1 * (1.0 + 2.0 * g2 * p) - 2.0 * phi * (1.0 + g1 * p)) - psi) / den
    p2 = (psi - (g1 + g2) - phi * (g2 * p - g1 * p - 2.0)) / den
    rate = math.log2(rate_ceiling_two_user(g1, g2, phi, p))
    return MaxMinSolution(rate, PowerAllocation((p1, p2)), 0)


def rate_ceiling_two_user(g1, g2, phi, p):
    """2^rate at the two-user optimum (the budget-limited ceiling b3)."""
    return (_psi(g1, g2, phi, p) - (1.0 + phi * p) * (g2 - g1)) / (
        2.0 * (1.0 + phi * p) * (g1 - phi)
    )


def bound_triple(g1: float, g2: float, phi: float, p: float) -> tuple[float, float, float]:
    """The three 2^rate upper bounds that govern the two-user problem:

    b1: the strong user's outage constraint alone (budget-free),
    b2: both outage constraints jointly as the budget grows without limit,
    b3: all constraints plus the finite budget (always the binding one).
    """
    if not (g2 >= g1 > phi > 0.0):
        raise ValueError("need gains above stringency, ascending")
    b1 = g2 / phi
    inner = 4.0 * phi * phi * g1 - 3.0 * phi * g1 * g1 - 6.0 * phi * g1 * g2 + 4.0 * g1 * g1 * g2 + phi * g2 * g2
    b2 = (math.sqrt(inner / phi) - (g2 - g1)) / (2.0 * (g1 - phi))
    b3 = rate_ceiling_two_user(g1, g2, phi, p)
    return b1, b2, b3


def optimal_power_ratio_user1(g1: float, g2: float, phi: float, p: float) -> float:
    """Fraction of the budget the weak user receives at the two-user optimum.

    Strictly increasing in phi: a harder secrecy target shifts power toward
    the weak user.
    """
    if not (g2 >= g1 > phi > 0.0):
        raise ValueError("need gains above stringency, ascending")
    if not (p > 0):
        raise ValueError("budget must be positive")
    psi = _psi(g1, g2, phi, p)
    den = 2.0 * p * ((1.0 + phi * p) * g1 * g2 - phi * phi * (1.0 + g1 * p))
    return ((1.0 + phi * p) * (g2 + g1 * (1.0 + 2.0 * g2 * p) - 2.0 * phi * (1.0 + g1 * p)) - psi) / den
