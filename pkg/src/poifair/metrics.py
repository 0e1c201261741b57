"""Ranking metrics and group-fairness aggregation."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .temporal import GroupAssignment


@dataclass(frozen=True)
class RankingMetrics:
    precision: float
    recall: float
    ndcg: float


@dataclass(frozen=True)
class GroupMetrics:
    ndcg_all: float
    ndcg_leisure: float
    ndcg_working: float
    delta_ndcg: float  # |ndcg_leisure - ndcg_working|
    delta_ndcg_signed: float
    acc_unf: float | None  # None when delta is exactly 0
    pct_delta: float | None  # None when no baseline supplied


def ranking_metrics(recommended: list[str], relevant: set[str], n: int) -> RankingMetrics:
    """Precision/recall/nDCG at cutoff n with binary gains.

    DCG discount is 1/log2(rank+1) with 1-indexed ranks; IDCG assumes
    min(n, |relevant|) hits at the top.
    """
    if n < 1:
        raise ValueError("cutoff must be >= 1")
    top = recommended[:n]
    hits = [i for i, p in enumerate(top, start=1) if p in relevant]
    precision = len(hits) / n
    recall = len(hits) / len(relevant) if relevant else 0.0
    dcg = sum(1.0 / math.log2(rank + 1) for rank in hits)
    ideal = min(n, len(relevant))
    idcg = sum(1.0 / math.log2(rank + 1) for rank in range(1, ideal + 1))
    ndcg = dcg / idcg if idcg > 0 else 0.0
    return RankingMetrics(precision=precision, recall=recall, ndcg=ndcg)


def fairness_summary(
    ndcg_all: float,
    ndcg_leisure: float,
    ndcg_working: float,
    baseline_delta: float | None = None,
) -> GroupMetrics:
    """Fairness columns from already-aggregated group nDCG values."""
    signed = ndcg_leisure - ndcg_working
    delta = abs(signed)
    acc_unf = ndcg_all / delta if delta > 0 else None
    if baseline_delta is None:
        pct = None
    elif baseline_delta == 0:
        pct = 0.0
    else:
        pct = (baseline_delta - delta) / baseline_delta
    return GroupMetrics(
        ndcg_all=ndcg_all,
        ndcg_leisure=ndcg_leisure,
        ndcg_working=ndcg_working,
        delta_ndcg=delta,
        delta_ndcg_signed=signed,
        acc_unf=acc_unf,
        pct_delta=pct,
    )


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def group_metrics(
    per_user_ndcg: dict[str, float],
    assignment: GroupAssignment,
    baseline_delta: float | None = None,
) -> GroupMetrics:
    """Macro-averaged nDCG overall and per fairness group."""
    leisure = [v for u, v in per_user_ndcg.items() if u in assignment.leisure_focused]
    working = [v for u, v in per_user_ndcg.items() if u in assignment.working_focused]
    if not leisure or not working:
        raise ValueError("both fairness groups must be nonempty")
    return fairness_summary(
        ndcg_all=_mean(list(per_user_ndcg.values())),
        ndcg_leisure=_mean(leisure),
        ndcg_working=_mean(working),
        baseline_delta=baseline_delta,
    )


@dataclass(frozen=True)
class EvalReport:
    model: str
    fusion: str
    cutoff: int
    precision: float
    recall: float
    ndcg: float
    ndcg_leisure: float
    ndcg_working: float
    delta_ndcg: float
    pct_delta: float | None
    acc_unf: float | None
    n_users_evaluated: int
    n_users_skipped: int


def evaluate_run(
    recommendations: dict[str, list[str]],
    test_relevant: dict[str, set[str]],
    assignment: GroupAssignment,
    cutoff: int,
    model: str,
    fusion: str,
    baseline_delta: float | None = None,
) -> EvalReport:
    """One report row: metrics macro-averaged over users with nonempty test sets.

    Users recommended-for but absent from the test split (or with an empty
    relevant set) are excluded and counted.
    """
    per_user: dict[str, RankingMetrics] = {}
    skipped = 0
    for u, recs in recommendations.items():
        relevant = test_relevant.get(u)
        if not relevant:
            skipped += 1
            continue
        per_user[u] = ranking_metrics(recs, relevant, cutoff)
    if not per_user:
        raise ValueError("no users with nonempty test sets")
    gm = group_metrics(
        {u: m.ndcg for u, m in per_user.items()}, assignment, baseline_delta
    )
    return EvalReport(
        model=model,
        fusion=fusion,
        cutoff=cutoff,
        precision=_mean([m.precision for m in per_user.values()]),
        recall=_mean([m.recall for m in per_user.values()]),
        ndcg=gm.ndcg_all,
        ndcg_leisure=gm.ndcg_leisure,
        ndcg_working=gm.ndcg_working,
        delta_ndcg=gm.delta_ndcg,
        pct_delta=gm.pct_delta,
        acc_unf=gm.acc_unf,
        n_users_evaluated=len(per_user),
        n_users_skipped=skipped,
    )
