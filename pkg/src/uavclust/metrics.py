"""Trace aggregation: re-selection counts, CH-member SNR and the
clustering robustness likelihood.

The likelihood combines a Poisson log-score of the normalized
re-selection count with a Gaussian log-score of the normalized SNR.
Gamma(R+1) stands in for R! because the normalized count is not an
integer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .trace import RESELECTION_KINDS, SimEvent


@dataclass(frozen=True)
class LikelihoodParams:
    weight_reselect: float = 0.6
    weight_snr: float = 0.4
    poisson_rate: float = 0.5
    gauss_mean: float = 1.0
    gauss_var: float = 0.1


@dataclass(frozen=True)
class RunMetrics:
    """Everything one trace contributes to the evaluation."""

    per_cluster: Dict[int, int]
    total_reselections: int
    cumulative: Tuple[Tuple[float, int], ...]  # (time, running total)
    mean_snr: float  # nan when no samples were recorded
    degraded_selections: int


@dataclass(frozen=True)
class AggregateMetrics:
    runs: int
    mean_total: float
    mean_per_cluster: Dict[int, float]
    mean_snr: float
    mean_degraded: float
    totals: Tuple[int, ...]
    snrs: Tuple[float, ...]


def normalize(values: Sequence[float]) -> List[float]:
    """Divide by the maximum so the largest value maps to 1.0."""
    if not values:
        raise ValueError("normalize: empty input")
    peak = max(values)
    if peak <= 0.0:
        raise ValueError("normalize: need at least one positive value")
    return [v / peak for v in values]


def lambda_r(r: float, poisson_rate: float) -> float:
    """Poisson negative log-score of the normalized re-selection count."""
    if r < 0.0:
        raise ValueError(f"lambda_r: count must be >= 0, got {r}")
    if poisson_rate <= 0.0:
        raise ValueError(f"lambda_r: rate must be positive, got {poisson_rate}")
    return poisson_rate - r * math.log(poisson_rate) + math.lgamma(r + 1.0)


def lambda_s(s: float, mean: float, var: float) -> float:
    """Gaussian negative log-score of the normalized SNR."""
    if var <= 0.0:
        raise ValueError(f"lambda_s: variance must be positive, got {var}")
    return 0.5 * math.log(2.0 * math.pi * var) + (s - mean) ** 2 / (2.0 * var)


def robustness_likelihood(r: float, s: float,
                          params: LikelihoodParams = LikelihoodParams()) -> float:
    """exp(-(w_R * lambda_R + w_S * lambda_S))."""
    return math.exp(-(params.weight_reselect * lambda_r(r, params.poisson_rate)
                      + params.weight_snr * lambda_s(s, params.gauss_mean,
                                                     params.gauss_var)))


def run_metrics(events: Sequence[SimEvent]) -> RunMetrics:
    """Fold one event trace into its per-run metrics.

    The CH-member SNR is averaged per CH tenure first, then across
    tenures, so long and short tenures weigh equally.
    """
    per_cluster: Dict[int, int] = {}
    cumulative: List[Tuple[float, int]] = []
    total = 0
    degraded = 0
    tenure_samples: Dict[Tuple[int, int], List[float]] = {}
    for ev in events:
        if ev.kind in RESELECTION_KINDS:
            total += 1
            per_cluster[ev.ids[0]] = per_cluster.get(ev.ids[0], 0) + 1
            cumulative.append((ev.time, total))
        if ev.kind in ("ch_selected", "ch_reselected_full") and ev.payload.get("degraded"):
            degraded += 1
        if ev.kind == "cam_batch" and "snr" in ev.payload:
            key = (ev.ids[0], ev.payload["tenure"])
            tenure_samples.setdefault(key, []).append(ev.payload["snr"])
    tenure_means = [sum(v) / len(v) for v in tenure_samples.values()]
    mean_snr = sum(tenure_means) / len(tenure_means) if tenure_means else math.nan
    return RunMetrics(per_cluster=per_cluster, total_reselections=total,
                      cumulative=tuple(cumulative), mean_snr=mean_snr,
                      degraded_selections=degraded)


def cumulative_at(metrics: RunMetrics, times: Sequence[float]) -> List[int]:
    """Running re-selection total evaluated at the given times."""
    out = []
    idx = 0
    current = 0
    for t in times:
        while idx < len(metrics.cumulative) and metrics.cumulative[idx][0] <= t:
            current = metrics.cumulative[idx][1]
            idx += 1
        out.append(current)
    return out


def aggregate(runs: Sequence[RunMetrics]) -> AggregateMetrics:
    """Mean metrics across runs of one (scheme, config) family."""
    if not runs:
        raise ValueError("aggregate: no runs")
    n = len(runs)
    cluster_ids = sorted({cid for r in runs for cid in r.per_cluster})
    mean_per_cluster = {cid: sum(r.per_cluster.get(cid, 0) for r in runs) / n
                        for cid in cluster_ids}
    snrs = [r.mean_snr for r in runs if not math.isnan(r.mean_snr)]
    return AggregateMetrics(
        runs=n,
        mean_total=sum(r.total_reselections for r in runs) / n,
        mean_per_cluster=mean_per_cluster,
        mean_snr=sum(snrs) / len(snrs) if snrs else math.nan,
        mean_degraded=sum(r.degraded_selections for r in runs) / n,
        totals=tuple(r.total_reselections for r in runs),
        snrs=tuple(r.mean_snr for r in runs),
    )


def aggregate_traces(traces: Sequence[Tuple[Dict[str, str], Sequence[SimEvent]]]) -> AggregateMetrics:
    """Aggregate parsed trace files, refusing mixed-config input."""
    if not traces:
        raise ValueError("aggregate_traces: no traces")
    digests = {h.get("config") for h, _ in traces}
    if len(digests) > 1:
        raise ValueError(f"aggregate_traces: mixed config digests {sorted(digests)}")
    return aggregate([run_metrics(events) for _, events in traces])


@dataclass(frozen=True)
class SchemeScore:
    mean_total: float
    mean_snr: float
    normalized_reselections: float
    normalized_snr: float
    likelihood: float


def compare_schemes(per_scheme: Dict[str, AggregateMetrics],
                    params: LikelihoodParams = LikelihoodParams()) -> Dict[str, SchemeScore]:
    """Cross-scheme comparison: normalize re-selections and SNR by the
    maximum across schemes, then score each scheme's likelihood."""
    if not per_scheme:
        raise ValueError("compare_schemes: no schemes")
    max_total = max(m.mean_total for m in per_scheme.values())
    max_snr = max(m.mean_snr for m in per_scheme.values())
    scores = {}
    for name, m in per_scheme.items():
        r = m.mean_total / max_total if max_total > 0 else 0.0
        s = m.mean_snr / max_snr if max_snr > 0 else 0.0
        scores[name] = SchemeScore(
            mean_total=m.mean_total, mean_snr=m.mean_snr,
            normalized_reselections=r, normalized_snr=s,
            likelihood=robustness_likelihood(r, s, params))
    return scores
