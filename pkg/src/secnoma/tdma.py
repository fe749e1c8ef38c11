"""Orthogonal (time-division) benchmark under the same secrecy model.

Each user gets a time fraction and the full power budget inside its slot, so
per-slot rates carry the same stringency penalty and scale by the fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .maxmin import (
    check_positive_rate_feasibility,
    solve_maxmin_bisection,
    solve_maxmin_two_user,
)
from .power_min import InfeasibleReason, InfeasibleVerdict


@dataclass(frozen=True)
class TimeAllocation:
    """Slot fractions, one per user; they may not exceed a unit frame."""

    fractions: tuple[float, ...]

    def __post_init__(self):
        if len(self.fractions) == 0:
            raise ValueError("need at least one slot")
        for t in self.fractions:
            if not (t >= 0 and math.isfinite(t)):
                raise ValueError("slot fractions must be nonnegative and finite")
        if sum(self.fractions) > 1.0 + 1e-12:
            raise ValueError("slot fractions must fit in a unit frame")


@dataclass(frozen=True)
class TdmaMaxMin:
    rate: float
    time: TimeAllocation


@dataclass(frozen=True)
class TdmaMinPower:
    """Per-slot powers plus the two honest summaries of 'how much power':
    averaged over the frame and the worst single slot."""

    per_user_mw: tuple[float, ...]
    avg_power_mw: float
    peak_power_mw: float


def _stringency(channel, eps):
    if not (0.0 < eps < 1.0):
        raise ValueError("outage bound must lie in (0, 1)")
    return channel.eaves_avg_gain * math.log(1.0 / eps)


def _slot_rate_full(gain, phi, p):
    # per-slot confidential rate before time scaling, clipped at zero
    return max(0.0, math.log2((1.0 + p * gain) / (1.0 + p * phi)))


def tdma_user_rate(gain: float, eaves_avg_gain: float, eps: float, p_mw: float, t: float) -> float:
    """Confidential rate of one user given its slot fraction and full-budget
    transmission inside the slot."""
    if not (gain > 0 and eaves_avg_gain > 0 and p_mw > 0):
        raise ValueError("gain, eavesdropper gain and power must be positive")
    if not (0.0 <= t <= 1.0):
        raise ValueError("slot fraction must lie in [0, 1]")
    if not (0.0 < eps < 1.0):
        raise ValueError("outage bound must lie in (0, 1)")
    phi = eaves_avg_gain * math.log(1.0 / eps)
    return t * _slot_rate_full(gain, phi, p_mw)


def tdma_maxmin(channel: ChannelRealization, eps: float, p_mw: float, mode: str) -> TdmaMaxMin:
    """Best common rate under TDMA.

    mode 'equal_time': fixed 1/K slots, the weakest user binds.
    mode 'optimal_time': slots chosen to equalize the per-user rates
    (inverse per-slot-rate weighting), which is optimal because each rate is
    linear and increasing in its own fraction.

    If any user cannot sustain a positive per-slot rate the common rate is 0;
    equal slots are reported in that case.
    """
    if mode not in ("equal_time", "optimal_time"):
        raise ValueError("mode must be 'equal_time' or 'optimal_time'")
    if not (p_mw > 0 and math.isfinite(p_mw)):
        raise ValueError("power budget must be positive and finite")
    phi = _stringency(channel, eps)
    num = channel.num_users
    full = [_slot_rate_full(g, phi, p_mw) for g in channel.user_gains]
    equal = TimeAllocation(tuple(1.0 / num for _ in range(num)))
    if mode == "equal_time":
        return TdmaMaxMin(min(full) / num, equal)
    if min(full) <= 0.0:
        return TdmaMaxMin(0.0, equal)
    weights = [1.0 / c for c in full]
    total = sum(weights)
    fractions = tuple(w / total for w in weights)
    return TdmaMaxMin(1.0 / total, TimeAllocation(fractions))


def tdma_min_power(
    channel: ChannelRealization, q: float, eps: float
) -> TdmaMinPower | InfeasibleVerdict:
    """Cheapest equal-slot TDMA meeting the same per-user QoS floor.

    With a 1/K slot each user must hit K*q per slot; the per-slot power then
    has the same single-user closed form as the superposition scheme's
    strongest user.
    """
    if not (q > 0 and math.isfinite(q)):
        raise ValueError("QoS rate must be positive and finite")
    phi = _stringency(channel, eps)
    num = channel.num_users
    rho = 2.0 ** (num * q)
    failing = frozenset(
        k for k in range(1, num + 1) if channel.user_gains[k - 1] - phi * rho <= 1e-12
    )
    if failing:
        return InfeasibleVerdict(failing, InfeasibleReason.TDMA_QOS)
    per_user = tuple((rho - 1.0) / (g - phi * rho) for g in channel.user_gains)
    return TdmaMinPower(per_user, sum(per_user) / num, max(per_user))


@dataclass(frozen=True)
class MaxMinComparison:
    rate_noma: float
    rate_tdma_optimal: float
    rate_tdma_equal: float
    ratio: float


def compare_maxmin(channel: ChannelRealization, eps: float, p_mw: float) -> MaxMinComparison:
    """Max-min rates of superposition vs TDMA on one feasible instance.

    Raises if the instance cannot carry a positive rate, or if the expected
    ordering (superposition strictly ahead unless all gains are equal) fails,
    since that would mean a solver bug rather than a modelling outcome.
    """
    if channel.num_users == 2:
        noma = solve_maxmin_two_user(channel, eps, p_mw)
    else:
        noma = solve_maxmin_bisection(channel, eps, p_mw)
    if isinstance(noma, InfeasibleVerdict):
        raise ValueError("instance infeasible: no positive common rate exists")
    opt = tdma_maxmin(channel, eps, p_mw, "optimal_time")
    equal = tdma_maxmin(channel, eps, p_mw, "equal_time")

    lo, hi = channel.user_gains[0], channel.user_gains[-1]
    if (hi - lo) / lo > 1e-6 and not (noma.rate > opt.rate):
        raise RuntimeError("superposition failed to beat optimal TDMA on unequal gains")
    if hi == lo and abs(noma.rate - opt.rate) > 1e-8:
        raise RuntimeError("equal gains must equalize superposition and optimal TDMA")
    return MaxMinComparison(noma.rate, opt.rate, equal.rate, noma.rate / opt.rate)


@dataclass(frozen=True)
class RateRegionBoundary:
    """Sampled two-user boundaries: rows are (R1, R2) with R2 swept upward."""

    noma: np.ndarray
    tdma: np.ndarray


def noma_rate_region_boundary(
    channel: ChannelRealization, eps: float, p_mw: float, samples: int = 201
) -> RateRegionBoundary:
    """Two-user achievable boundaries at a fixed budget.

    Superposition sweeps the strong user's power share from 0 to the full
    budget; TDMA sweeps the strong user's slot fraction over [0, 1]. The
    endpoints of the two curves coincide (single-user operation either way).
    """
    if channel.num_users != 2:
        raise ValueError("rate region is specific to two users")
    if samples < 3:
        raise ValueError("need at least 3 samples")
    if not check_positive_rate_feasibility(channel, eps):
        raise ValueError("instance infeasible: the region degenerates to the origin")
    phi = _stringency(channel, eps)
    g1, g2 = channel.user_gains
    p = float(p_mw)

    p2 = np.linspace(0.0, p, samples)
    r1 = np.log2((1.0 + g1 * p) * (1.0 + phi * p2) / ((1.0 + g1 * p2) * (1.0 + phi * p)))
    r2 = np.log2((1.0 + g2 * p2) / (1.0 + phi * p2))
    noma = np.column_stack([r1, r2])

    c1 = _slot_rate_full(g1, phi, p)
    c2 = _slot_rate_full(g2, phi, p)
    t2 = np.linspace(0.0, 1.0, samples)
    tdma = np.column_stack([(1.0 - t2) * c1, t2 * c2])
    return RateRegionBoundary(noma, tdma)
