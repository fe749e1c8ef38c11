"""Minimum-power allocation meeting a per-user confidential QoS floor.

Every outage constraint is active at the optimum, which collapses the problem
to a backward recursion from the strongest user: each power is a closed-form
function of the total already assigned to stronger users. Feasibility is a
set of strict denominator conditions checked as the recursion proceeds.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .secrecy import PowerAllocation, RatePair, SecrecyRequirement, max_codeword_rate

# denominators this close to zero mean the required power diverges
DENOM_TOL = 1e-12


class InfeasibleReason(enum.Enum):
    USER_CONDITION_INNER = "user_condition_k"
    USER_CONDITION_LAST = "user_condition_K"
    POSITIVE_RATE = "positive_rate"
    TDMA_QOS = "tdma_qos"


@dataclass(frozen=True)
class InfeasibleVerdict:
    """No finite power satisfies the constraints; names the users that fail."""

    failing_user_indices: frozenset[int]
    reason: InfeasibleReason

    def __post_init__(self):
        if not self.failing_user_indices:
            raise ValueError("an infeasibility verdict must name at least one user")


@dataclass(frozen=True)
class PowerMinSolution:
    allocation: PowerAllocation
    rate_pairs: tuple[RatePair, ...]
    total_power_mw: float


def constraint_ratio(gain: float, q: float, own_power: float, interference_power: float) -> float:
    """Largest stringency phi for which (own_power, interference_power) still
    meets the outage constraint of one user with the given gain and QoS q.

    Increasing in own_power and decreasing in interference_power on the
    region where the QoS itself is met.
    """
    rho = 2.0 ** q
    s_here = own_power + interference_power
    ratio = (1.0 + gain * s_here) / (1.0 + gain * interference_power)
    den = rho * s_here - ratio * interference_power
    if den <= 0.0:
        raise ValueError("degenerate constraint: no positive stringency bound")
    return (ratio - rho) / den


def _recursion(gains, phi, rho):
    """Backward power recursion. Returns (powers, None, None) on success or
    (None, failing_user, reason) at the first denominator failure."""
    num = len(gains)
    powers = [0.0] * num
    den_last = gains[num - 1] - phi * rho
    if den_last <= DENOM_TOL:
        return None, num, InfeasibleReason.USER_CONDITION_LAST
    powers[num - 1] = (rho - 1.0) / den_last
    suffix = powers[num - 1]
    for k in range(num - 1, 0, -1):
        g = gains[k - 1]
        den = g * (1.0 - phi * (rho - 1.0) * suffix) - phi * rho
        if den <= DENOM_TOL:
            return None, k, InfeasibleReason.USER_CONDITION_INNER
        powers[k - 1] = (rho - 1.0) * (1.0 + phi * suffix) * (1.0 + g * suffix) / den
        suffix += powers[k - 1]
    return powers, None, None


def solve_min_power(
    channel: ChannelRealization, req: SecrecyRequirement
) -> PowerMinSolution | InfeasibleVerdict:
    """Closed-form minimum total power under per-user (QoS, outage) constraints.

    Recursion runs from the strongest user down; the verdict on infeasibility
    names the first user whose denominator condition fails (every weaker user
    would fail as well).
    """
    phi = req.stringency(channel)
    rho = 2.0 ** req.qos_rate
    powers, failing, reason = _recursion(channel.user_gains, phi, rho)
    if powers is None:
        return InfeasibleVerdict(frozenset({failing}), reason)

    alloc = PowerAllocation(tuple(powers))
    pairs = tuple(
        RatePair(max_codeword_rate(channel, alloc, k), req.qos_rate)
        for k in range(1, channel.num_users + 1)
    )
    return PowerMinSolution(alloc, pairs, alloc.total_mw)


@dataclass(frozen=True)
class UserSelection:
    """Greedy admissible subset (original 1-based indices, ascending gain) and
    the minimum-power solution on that subset; empty means suspend."""

    selected_users: tuple[int, ...]
    solution: PowerMinSolution | None


def select_users(channel: ChannelRealization, req: SecrecyRequirement) -> UserSelection:
    """Drop users that can never meet the constraints, then admit the rest
    best-gain first while the joint problem stays feasible."""
    phi = req.stringency(channel)
    threshold = phi * 2.0 ** req.qos_rate
    eligible = [k for k in range(1, channel.num_users + 1) if channel.user_gains[k - 1] > threshold]
    if not eligible:
        return UserSelection((), None)

    selected: list[int] = []
    solution = None
    for k in reversed(eligible):  # gains ascend with index, so strongest first
        trial = sorted(selected + [k])
        sub = ChannelRealization(
            tuple(channel.user_gains[i - 1] for i in trial), channel.eaves_avg_gain
        )
        candidate = solve_min_power(sub, req)
        if isinstance(candidate, InfeasibleVerdict):
            break
        selected = trial
        solution = candidate
    return UserSelection(tuple(selected), solution)


def bruteforce_min_power(
    channel: ChannelRealization,
    req: SecrecyRequirement,
    grid_step: float,
    grid_max: float = 2.0,
):
    """Exhaustive grid search over positive power vectors (step-spaced up to
    grid_max per user) meeting every outage constraint. Returns (total, point)
    of the cheapest feasible grid point, or (None, None). K <= 3 only.
    """
    if channel.num_users > 3:
        raise ValueError("grid oracle supports at most 3 users")
    if not (grid_step > 0 and grid_max > grid_step):
        raise ValueError("need 0 < grid_step < grid_max")
    gains = channel.user_gains
    num = channel.num_users
    phi = req.stringency(channel)
    rho = 2.0 ** req.qos_rate
    axis = np.arange(1, int(round(grid_max / grid_step)) + 1) * grid_step

    def last_user_ok(p):
        # no interference left after full SIC
        return 1.0 + gains[num - 1] * p - rho >= phi * rho * p

    def inner_ok(k, own, interf):
        g = gains[k - 1]
        s_here = own + interf
        ratio = (1.0 + g * s_here) / (1.0 + g * interf)
        den = rho * s_here - ratio * interf
        return (den > 0.0) & (ratio - rho >= phi * den)

    best_total = None
    best_point = None

    if num == 1:
        ok = last_user_ok(axis)
        if np.any(ok):
            i = int(np.argmax(ok))  # axis ascending, first hit is cheapest
            best_total, best_point = float(axis[i]), (float(axis[i]),)
        return best_total, best_point

    ok_last = last_user_ok(axis)
    if num == 2:
        for p2 in axis[ok_last]:
            if best_total is not None and p2 >= best_total:
                break  # axis ascends; no cheaper total can follow
            ok = inner_ok(1, axis, p2)
            if not np.any(ok):
                continue
            total = axis[ok][0] + p2  # cheapest feasible p1 for this p2
            if best_total is None or total < best_total:
                best_total = float(total)
                best_point = (float(axis[ok][0]), float(p2))
        return best_total, best_point

    for p3 in axis[ok_last]:
        if best_total is not None and p3 >= best_total:
            break
        for p2 in axis:
            if best_total is not None and p2 + p3 >= best_total:
                break
            if not bool(inner_ok(2, p2, p3)):
                continue
            ok = inner_ok(1, axis, p2 + p3)
            if not np.any(ok):
                continue
            total = axis[ok][0] + p2 + p3
            if best_total is None or total < best_total:
                best_total = float(total)
                best_point = (float(axis[ok][0]), float(p2), float(p3))
    return best_total, best_point


def verify_optimality_bruteforce(
    channel: ChannelRealization,
    req: SecrecyRequirement,
    grid_step: float,
    grid_max: float = 2.0,
) -> float:
    """Relative gap (grid optimum - closed form) / closed form.

    Nonnegative up to grid quantization when the recursion is truly optimal;
    raises on instances the closed form declares infeasible.
    """
    solution = solve_min_power(channel, req)
    if isinstance(solution, InfeasibleVerdict):
        raise ValueError("instance is infeasible; nothing to verify")
    grid_total, _ = bruteforce_min_power(channel, req, grid_step, grid_max)
    if grid_total is None:
        raise ValueError("grid too small or too coarse: no feasible grid point found")
    return (grid_total - solution.total_power_mw) / solution.total_power_mw
