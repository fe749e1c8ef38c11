"""Reproducible parameter sweeps and their CSV serialization.

A sweep is a declarative spec: what to vary, what stays fixed, how many
fading trials, which seed. Running it yields one aggregate row per
(axis point, scheme, metric); writing the table twice from the same spec
produces byte-identical files.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    ChannelRealization,
    NetworkGeometry,
    db_to_linear,
    dbm_to_mw,
    sample_realization,
    trial_seeds,
)
from .maxmin import (
    MaxMinSolution,
    check_positive_rate_feasibility,
    optimal_power_ratio_user1,
    solve_maxmin_bisection,
)
from .power_min import PowerMinSolution, solve_min_power
from .secrecy import SecrecyRequirement
from .tdma import TdmaMinPower, tdma_maxmin, tdma_min_power

SWEEP_KINDS = ("power_vs_Q", "rate_vs_P", "beta_vs_eps", "avg_rate_vs_eps", "gain_vs_K")

_AXIS_FOR_KIND = {
    "power_vs_Q": "q",
    "rate_vs_P": "p_dbm",
    "beta_vs_eps": "eps",
    "avg_rate_vs_eps": "eps",
    "gain_vs_K": "k",
}

CSV_HEADER = ("x", "scheme", "metric", "value", "stderr", "feasible_frac", "trials", "seed")

# keys that are whole numbers by nature
_INT_KEYS = {"k"}


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("axis needs at least one step")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("axis endpoints must be finite")

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    axis: SweepAxis
    fixed: dict[str, float] = field(default_factory=dict)
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; choose from {SWEEP_KINDS}")
        if self.axis.name != _AXIS_FOR_KIND[self.kind]:
            raise ValueError(
                f"sweep kind {self.kind!r} varies {_AXIS_FOR_KIND[self.kind]!r}, "
                f"not {self.axis.name!r}"
            )
        if self.trials < 1:
            raise ValueError("trials must be positive")

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> "SweepSpec":
        """Build a spec from flat string key-value pairs (the CLI config form)."""
        data = dict(mapping)
        try:
            kind = data.pop("kind")
            axis = SweepAxis(
                data.pop("axis"),
                float(data.pop("axis_start")),
                float(data.pop("axis_stop")),
                int(data.pop("axis_steps")),
            )
        except KeyError as missing:
            raise ValueError(f"sweep config is missing required key {missing}") from None
        trials = int(data.pop("trials", 1))
        seed = int(data.pop("seed", 0))
        fixed = {}
        for key, raw in data.items():
            fixed[key] = int(raw) if key in _INT_KEYS else float(raw)
        return cls(kind, axis, fixed, trials, seed)


@dataclass(frozen=True)
class AggregateResult:
    x: float
    scheme: str
    metric: str
    value: float
    stderr: float
    feasible_frac: float
    trials: int
    seed: int

    def __post_init__(self):
        if not (self.stderr >= 0.0):
            raise ValueError("standard error must be nonnegative")
        if not (0.0 <= self.feasible_frac <= 1.0):
            raise ValueError("feasible fraction must lie in [0, 1]")


def _fixed_gains_db(fixed, num):
    base = fixed.get("gain_base_db", 23.0)
    slope = fixed.get("gain_slope_db", 2.0)
    return [base + slope * (k + 1) for k in range(num)]


def _fixed_channel(fixed) -> ChannelRealization:
    num = int(fixed.get("k", 2))
    gains = sorted(db_to_linear(g) for g in _fixed_gains_db(fixed, num))
    return ChannelRealization(tuple(gains), db_to_linear(fixed["gamma_e_db"]))


def _geometry(fixed, num) -> NetworkGeometry:
    return NetworkGeometry(
        distances_user=(fixed["d_user"],) * num,
        distance_eaves=fixed["d_eave"],
        path_loss_exponent=fixed.get("alpha", 4.0),
        noise_user_mw=dbm_to_mw(fixed.get("noise_dbm", -70.0)),
        noise_eaves_mw=dbm_to_mw(fixed.get("eaves_noise_dbm", fixed.get("noise_dbm", -70.0))),
    )


def _mean_stderr(values):
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


def _run_power_vs_q(spec):
    channel = _fixed_channel(spec.fixed)
    eps = spec.fixed["eps"]
    rows = []
    for q in spec.axis.values():
        q = float(q)
        sol = solve_min_power(channel, SecrecyRequirement(q, eps))
        ok = isinstance(sol, PowerMinSolution)
        rows.append(
            AggregateResult(
                q, "noma", "total_power",
                sol.total_power_mw if ok else math.nan,
                0.0, 1.0 if ok else 0.0, 1, spec.seed,
            )
        )
        bench = tdma_min_power(channel, q, eps)
        ok = isinstance(bench, TdmaMinPower)
        for metric, value in (
            ("avg_power", bench.avg_power_mw if ok else math.nan),
            ("peak_power", bench.peak_power_mw if ok else math.nan),
        ):
            rows.append(
                AggregateResult(q, "tdma_eq", metric, value, 0.0, 1.0 if ok else 0.0, 1, spec.seed)
            )
    return rows


def _run_rate_vs_p(spec):
    channel = _fixed_channel(spec.fixed)
    eps = spec.fixed["eps"]
    tol = spec.fixed.get("tol", 1e-10)
    rows = []
    for p_dbm in spec.axis.values():
        p_dbm = float(p_dbm)
        p = dbm_to_mw(p_dbm)
        sol = solve_maxmin_bisection(channel, eps, p, tol)
        ok = isinstance(sol, MaxMinSolution)
        rows.append(
            AggregateResult(
                p_dbm, "noma", "min_rate",
                sol.rate if ok else 0.0, 0.0, 1.0 if ok else 0.0, 1, spec.seed,
            )
        )
        for scheme, mode in (("tdma_opt", "optimal_time"), ("tdma_eq", "equal_time")):
            bench = tdma_maxmin(channel, eps, p, mode)
            rows.append(
                AggregateResult(
                    p_dbm, scheme, "min_rate", bench.rate, 0.0, 1.0 if ok else 0.0, 1, spec.seed
                )
            )
    return rows


def _run_beta_vs_eps(spec):
    channel = _fixed_channel(spec.fixed)
    if channel.num_users != 2:
        raise ValueError("the power-split study is specific to two users")
    g1, g2 = channel.user_gains
    p = dbm_to_mw(spec.fixed["p_dbm"])
    rows = []
    for eps in spec.axis.values():
        eps = float(eps)
        phi = channel.eaves_avg_gain * math.log(1.0 / eps)
        if g1 <= phi:
            rows.append(AggregateResult(eps, "noma", "beta1", math.nan, 0.0, 0.0, 1, spec.seed))
        else:
            beta = optimal_power_ratio_user1(g1, g2, phi, p)
            rows.append(AggregateResult(eps, "noma", "beta1", beta, 0.0, 1.0, 1, spec.seed))
    return rows


def _maxmin_rates_per_trial(channels, eps, p, tol):
    """Zero-filled per-trial rates for the three schemes plus feasibility flags."""
    rate_noma = np.zeros(len(channels))
    rate_opt = np.zeros(len(channels))
    rate_eq = np.zeros(len(channels))
    feasible = np.zeros(len(channels), dtype=bool)
    for i, channel in enumerate(channels):
        if not check_positive_rate_feasibility(channel, eps):
            continue  # infeasible realizations contribute zero rate
        feasible[i] = True
        sol = solve_maxmin_bisection(channel, eps, p, tol)
        rate_noma[i] = sol.rate
        rate_opt[i] = tdma_maxmin(channel, eps, p, "optimal_time").rate
        rate_eq[i] = tdma_maxmin(channel, eps, p, "equal_time").rate
    return rate_noma, rate_opt, rate_eq, feasible


def _run_avg_rate_vs_eps(spec):
    num = int(spec.fixed.get("k", 2))
    geometry = _geometry(spec.fixed, num)
    p = dbm_to_mw(spec.fixed["p_dbm"])
    tol = spec.fixed.get("tol", 1e-10)
    # one realization per trial, shared across axis points: the eps trend is
    # then a per-trial monotone map and the average inherits it
    channels = [sample_realization(geometry, int(s)) for s in trial_seeds(spec.seed, spec.trials)]
    rows = []
    for eps in spec.axis.values():
        eps = float(eps)
        rate_noma, rate_opt, rate_eq, feasible = _maxmin_rates_per_trial(channels, eps, p, tol)
        frac = float(feasible.mean())
        for scheme, rates in (("noma", rate_noma), ("tdma_opt", rate_opt), ("tdma_eq", rate_eq)):
            mean, stderr = _mean_stderr(rates)
            rows.append(
                AggregateResult(eps, scheme, "avg_min_rate", mean, stderr, frac, spec.trials, spec.seed)
            )
    return rows


def _run_gain_vs_k(spec):
    eps = spec.fixed["eps"]
    p = dbm_to_mw(spec.fixed["p_dbm"])
    tol = spec.fixed.get("tol", 1e-10)
    seeds = trial_seeds(spec.seed, spec.trials)
    rows = []
    for x in spec.axis.values():
        num = int(round(float(x)))
        if abs(num - float(x)) > 1e-9 or num < 1:
            raise ValueError("user-count axis must hold positive integers")
        geometry = _geometry(spec.fixed, num)
        # same per-trial seed for every K: draws nest, so adjacent K share noise
        channels = [sample_realization(geometry, int(s)) for s in seeds]
        rate_noma, rate_opt, rate_eq, feasible = _maxmin_rates_per_trial(channels, eps, p, tol)
        frac = float(feasible.mean())
        for scheme, rates in (("noma", rate_noma), ("tdma_opt", rate_opt), ("tdma_eq", rate_eq)):
            mean, stderr = _mean_stderr(rates)
            rows.append(
                AggregateResult(float(num), scheme, "avg_min_rate", mean, stderr, frac, spec.trials, spec.seed)
            )
        mean_noma, se_noma = _mean_stderr(rate_noma)
        mean_opt, se_opt = _mean_stderr(rate_opt)
        if mean_opt > 0.0:
            ratio = mean_noma / mean_opt
            # first-order error propagation; the trial-level correlation is
            # ignored, which only overstates the spread
            stderr = ratio * math.hypot(
                se_noma / mean_noma if mean_noma > 0 else 0.0, se_opt / mean_opt
            )
        else:
            ratio, stderr = math.nan, 0.0
        rows.append(
            AggregateResult(float(num), "noma", "rate_ratio", ratio, stderr, frac, spec.trials, spec.seed)
        )
    return rows


_RUNNERS = {
    "power_vs_Q": _run_power_vs_q,
    "rate_vs_P": _run_rate_vs_p,
    "beta_vs_eps": _run_beta_vs_eps,
    "avg_rate_vs_eps": _run_avg_rate_vs_eps,
    "gain_vs_K": _run_gain_vs_k,
}


def run_sweep(spec: SweepSpec) -> list[AggregateResult]:
    """Execute a sweep; rows come back in deterministic axis-then-scheme order."""
    return _RUNNERS[spec.kind](spec)


def _fmt(value):
    return format(float(value), ".12g")


def write_results(rows: list[AggregateResult], path) -> None:
    """Serialize aggregate rows as CSV with a fixed header and fixed float
    formatting (12 significant digits), so reruns are byte-identical."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for r in rows:
            fh.write(
                f"{_fmt(r.x)},{r.scheme},{r.metric},{_fmt(r.value)},{_fmt(r.stderr)},"
                f"{_fmt(r.feasible_frac)},{r.trials},{r.seed}\n"
            )


def read_results(path) -> list[AggregateResult]:
    """Parse a results CSV back into aggregate rows."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}")
        for rec in reader:
            rows.append(
                AggregateResult(
                    float(rec["x"]), rec["scheme"], rec["metric"], float(rec["value"]),
                    float(rec["stderr"]), float(rec["feasible_frac"]),
                    int(rec["trials"]), int(rec["seed"]),
                )
            )
    return rows
