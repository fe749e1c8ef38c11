"""Secrecy-rate core for superposition coding with SIC.

Users are indexed 1..K in decoding order. Under the canonical order (gains
ascending) message k is decoded by users k..K, each stronger than the last,
so the rate of message k is limited by user k itself. The eavesdropper is
treated pessimistically: she runs the same SIC chain, and only her average
gain is known, so secrecy is handled through an outage probability on the
wiretap rate pair (codeword rate, confidential rate).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, _exp_draws


@dataclass(frozen=True)
class PowerAllocation:
    """Per-message transmit powers, linear mW, indexed by decoding position."""

    powers_mw: tuple[float, ...]

    def __post_init__(self):
        if len(self.powers_mw) == 0:
            raise ValueError("need at least one power")
        for p in self.powers_mw:
            if not (p > 0 and math.isfinite(p)):
                raise ValueError("powers must be positive and finite")

    @property
    def num_users(self):
        return len(self.powers_mw)

    @property
    def total_mw(self):
        return float(sum(self.powers_mw))


@dataclass(frozen=True)
class RatePair:
    """Wiretap code pair: transmitted codeword rate and confidential rate, bits/use."""

    codeword_rate: float
    confidential_rate: float

    def __post_init__(self):
        if not (0.0 <= self.confidential_rate <= self.codeword_rate):
            raise ValueError("need 0 <= confidential rate <= codeword rate")


@dataclass(frozen=True)
class SecrecyRequirement:
    """QoS floor on the confidential rate plus the tolerated secrecy outage."""

    qos_rate: float
    outage_bound: float

    def __post_init__(self):
        if not (self.qos_rate > 0 and math.isfinite(self.qos_rate)):
            raise ValueError("QoS rate must be positive and finite")
        if not (0.0 < self.outage_bound < 1.0):
            raise ValueError("outage bound must lie in (0, 1)")

    def stringency(self, channel: ChannelRealization) -> float:
        """Composite stringency gamma_e_bar * ln(1/eps); rates are achievable
        only above this effective eavesdropper gain."""
        return channel.eaves_avg_gain * math.log(1.0 / self.outage_bound)


def _check_user_index(k, num_users):
    if not (1 <= k <= num_users):
        raise ValueError(f"user index {k} out of range 1..{num_users}")


def _suffix_power(alloc: PowerAllocation, k: int) -> float:
    # interference seen while decoding message k: all not-yet-cancelled messages
    return float(sum(alloc.powers_mw[k:]))


def optimal_decoding_order(channel: ChannelRealization) -> tuple[int, ...]:
    """Decoding order that maximizes every message's rate simultaneously:
    ascending normalized gain, ties broken by original index (stable)."""
    order = np.argsort(np.asarray(channel.user_gains), kind="stable")
    return tuple(int(i) + 1 for i in order)


def sinr_own_message(channel: ChannelRealization, alloc: PowerAllocation, k: int) -> float:
    """SINR at user k for its own message after cancelling messages 1..k-1."""
    _check_user_index(k, channel.num_users)
    if alloc.num_users != channel.num_users:
        raise ValueError("allocation size must match user count")
    g = channel.user_gains[k - 1]
    return g * alloc.powers_mw[k - 1] / (1.0 + g * _suffix_power(alloc, k))


def sinr_cross_message(channel: ChannelRealization, alloc: PowerAllocation, m: int, k: int) -> float:
    """SINR at user m while it decodes (to cancel) message k, k < m."""
    _check_user_index(m, channel.num_users)
    _check_user_index(k, channel.num_users)
    if not k < m:
        raise ValueError("cross decoding needs k < m")
    g = channel.user_gains[m - 1]
    return g * alloc.powers_mw[k - 1] / (1.0 + g * _suffix_power(alloc, k))


def eaves_sinr(eaves_gain: float, alloc: PowerAllocation, k: int) -> float:
    """Eavesdropper SINR on message k for one realized gain, assuming she has
    already stripped messages 1..k-1 (worst case for secrecy)."""
    _check_user_index(k, alloc.num_users)
    if not (eaves_gain > 0):
        raise ValueError("eavesdropper gain must be positive")
    return eaves_gain * alloc.powers_mw[k - 1] / (1.0 + eaves_gain * _suffix_power(alloc, k))


def max_codeword_rate(channel: ChannelRealization, alloc: PowerAllocation, k: int) -> float:
    """Largest codeword rate of message k decodable by every assigned user.

    The binding receiver is the one with the smallest gain among users k..K;
    under the canonical order that is user k itself.
    """
    _check_user_index(k, channel.num_users)
    g = min(channel.user_gains[k - 1 :])
    s_next = _suffix_power(alloc, k)
    s_here = s_next + alloc.powers_mw[k - 1]
    return math.log2((1.0 + g * s_here) / (1.0 + g * s_next))


def _outage_closed_form(g_t, p_k, s_next, eaves_avg_gain, q):
    """Outage of the pair (max codeword rate at effective gain g_t, rate q).

    Exponential eavesdropper gain integrates in closed form. A nonpositive
    rate margin makes the exponent nonnegative and the clamp returns 1. The
    denominator is provably positive for this rate pair whenever q > 0
    (the SIC residue s_next is below the full suffix s_here); the den <= 0
    branch is a conservative guard only.
    """
    if q <= 0:
        raise ValueError("confidential rate must be positive")
    s_here = s_next + p_k
    rho = 2.0 ** q
    ratio = (1.0 + g_t * s_here) / (1.0 + g_t * s_next)
    num = ratio - rho
    den = rho * s_here - ratio * s_next
    if den <= 0.0:
        return 1.0
    p = math.exp(-num / (eaves_avg_gain * den))
    return min(1.0, max(0.0, p))


def secrecy_outage_closed_form(channel: ChannelRealization, alloc: PowerAllocation, q: float, k: int) -> float:
    """P(codeword rate - q < eavesdropper rate on message k), canonical order."""
    _check_user_index(k, channel.num_users)
    g_t = min(channel.user_gains[k - 1 :])
    return _outage_closed_form(
        g_t, alloc.powers_mw[k - 1], _suffix_power(alloc, k), channel.eaves_avg_gain, q
    )


def secrecy_outage_for_order(
    gains_by_position: tuple[float, ...],
    eaves_avg_gain: float,
    alloc: PowerAllocation,
    q: float,
    position: int,
) -> float:
    """Same outage, but for an arbitrary decoding order.

    gains_by_position[j] is the gain of whichever user sits at decode
    position j+1; powers stay attached to positions. The codeword rate of the
    message at `position` is set by the weakest gain among positions >= it.
    """
    if len(gains_by_position) != alloc.num_users:
        raise ValueError("one gain per decode position required")
    _check_user_index(position, alloc.num_users)
    g_t = min(gains_by_position[position - 1 :])
    if not (g_t > 0):
        raise ValueError("gains must be positive")
    return _outage_closed_form(
        g_t, alloc.powers_mw[position - 1], _suffix_power(alloc, position), eaves_avg_gain, q
    )


_CHUNK = 1 << 17


def empirical_outage(
    channel: ChannelRealization,
    alloc: PowerAllocation,
    rate_pairs: list[RatePair],
    k: int,
    trials: int,
    seed: int,
) -> float:
    """Monte Carlo estimate of the secrecy outage of message k.

    Draws eavesdropper gains by analytic inversion of the exponential CDF on
    splittable sub-streams (one per fixed-size chunk), so the estimate is
    deterministic in (trials, seed) no matter how chunks would be scheduled.
    """
    _check_user_index(k, channel.num_users)
    if len(rate_pairs) != channel.num_users:
        raise ValueError("one rate pair per user required")
    if trials <= 0:
        raise ValueError("trials must be positive")
    pair = rate_pairs[k - 1]
    margin = pair.codeword_rate - pair.confidential_rate
    threshold = 2.0 ** margin - 1.0
    p_k = alloc.powers_mw[k - 1]
    s_next = _suffix_power(alloc, k)

    n_chunks = (trials + _CHUNK - 1) // _CHUNK
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    hits = 0
    left = trials
    for child in children:
        n = min(_CHUNK, left)
        left -= n
        rng = np.random.Generator(np.random.Philox(child))
        ge = _exp_draws(rng, channel.eaves_avg_gain, n)
        sinr = ge * p_k / (1.0 + ge * s_next)
        hits += int(np.count_nonzero(sinr > threshold))
    return hits / trials
