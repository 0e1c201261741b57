"""Working/leisure period labelling, user temporal profiles, and fairness groups."""
from __future__ import annotations

import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .data import CheckIn, SplitDataset

log = logging.getLogger(__name__)

WORK_START_HOUR = 8
WORK_END_HOUR = 18


class PeriodLabel(enum.Enum):
    WORKING = "working"
    LEISURE = "leisure"


def hour_of(timestamp: int) -> int:
    # timestamps are stored as already-local epoch seconds
    return (timestamp // 3600) % 24


def label_period(
    timestamp: int, work_start: int = WORK_START_HOUR, work_end: int = WORK_END_HOUR
) -> PeriodLabel:
    """Working iff the local hour falls in the half-open [work_start, work_end)."""
    h = hour_of(timestamp)
    return PeriodLabel.WORKING if work_start <= h < work_end else PeriodLabel.LEISURE


@dataclass(frozen=True)
class UserTemporalProfile:
    user_id: str
    n_checkins: int
    n_working: int
    n_leisure: int
    leisure_ratio: float
    avg_popularity_consumption: float


@dataclass
class GroupAssignment:
    leisure_focused: set[str]
    working_focused: set[str]
    unassigned: set[str]


@dataclass(frozen=True)
class GroupStats:
    group: str
    n_checkins: int
    avg_popularity_consumption: float
    avg_activity_level: float
    n_users: int


def poi_popularity(train: dict[str, list[CheckIn]], n_users: int) -> dict[str, float]:
    """Fraction of users that visited each POI in the training split."""
    visitors: dict[str, set[str]] = {}
    for u, seq in train.items():
        for c in seq:
            visitors.setdefault(c.poi_id, set()).add(u)
    return {p: len(us) / n_users for p, us in visitors.items()}


def build_profiles(
    train: dict[str, list[CheckIn]],
    popularity: dict[str, float],
    work_window: tuple[int, int] = (WORK_START_HOUR, WORK_END_HOUR),
) -> list[UserTemporalProfile]:
    """One temporal profile per user, computed on training check-ins only."""
    start, end = work_window
    profiles = []
    for u in sorted(train):
        seq = train[u]
        if not seq:
            log.warning("user %s has no training check-ins; excluded", u)
            continue
        n_work = sum(
            1 for c in seq if label_period(c.timestamp, start, end) is PeriodLabel.WORKING
        )
        n = len(seq)
        distinct = sorted({c.poi_id for c in seq})
        pop = sum(popularity.get(p, 0.0) for p in distinct) / len(distinct)
        profiles.append(
            UserTemporalProfile(
                user_id=u,
                n_checkins=n,
                n_working=n_work,
                n_leisure=n - n_work,
                leisure_ratio=(n - n_work) / n,
                avg_popularity_consumption=pop,
            )
        )
    return profiles


def assign_groups(
    profiles: list[UserTemporalProfile], quantile: float = 0.2
) -> GroupAssignment:
    """Top/bottom quantile of users ranked by leisure-check-in ratio."""
    if len(profiles) < 5:
        raise ValueError("need at least 5 users to assign groups")
    if quantile > 0.5:
        raise ValueError("quantile > 0.5 makes the groups overlap")
    ranked = sorted(profiles, key=lambda p: (-p.leisure_ratio, p.user_id))
    k = int(quantile * len(ranked))
    leisure = {p.user_id for p in ranked[:k]}
    working = {p.user_id for p in ranked[len(ranked) - k :]}
    rest = {p.user_id for p in ranked} - leisure - working
    return GroupAssignment(leisure, working, rest)


def group_stats(
    assignment: GroupAssignment,
    profiles: list[UserTemporalProfile],
    train: dict[str, list[CheckIn]],
) -> list[GroupStats]:
    by_id = {p.user_id: p for p in profiles}
    out = []
    for name, members in (
        ("leisure-focused", assignment.leisure_focused),
        ("working-focused", assignment.working_focused),
    ):
        if not members:
            raise ValueError(f"empty group: {name}")
        ps = [by_id[u] for u in sorted(members)]
        out.append(
            GroupStats(
                group=name,
                n_checkins=sum(len(train[u]) for u in members),
                avg_popularity_consumption=float(
                    np.mean([p.avg_popularity_consumption for p in ps])
                ),
                avg_activity_level=float(np.mean([p.n_checkins for p in ps])),
                n_users=len(members),
            )
        )
    return out


def temporal_histogram(checkins: list[CheckIn]) -> np.ndarray:
    """24-bin hour-of-day check-in counts."""
    bins = np.zeros(24, dtype=np.int64)
    for c in checkins:
        bins[hour_of(c.timestamp)] += 1
    return bins


def ols_fit(x, y) -> dict[str, float]:
    """Ordinary least squares of y on x plus Pearson correlation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or len(set(x.tolist())) < 2:
        raise ValueError("need >= 2 distinct x values")
    sx = x - x.mean()
    sy = y - y.mean()
    sxx = float(sx @ sx)
    slope = float(sx @ sy) / sxx
    intercept = float(y.mean() - slope * x.mean())
    syy = float(sy @ sy)
    r = float(sx @ sy) / math.sqrt(sxx * syy) if syy > 0 else 0.0
    return {"slope": slope, "intercept": intercept, "pearson_r": r}


def correlation_analysis(profiles: list[UserTemporalProfile]) -> dict[str, dict]:
    """The three scatter relations behind the observational analysis:
    leisure vs working counts, and each period's ratio vs profile size."""
    n_work = [p.n_working for p in profiles]
    n_leis = [p.n_leisure for p in profiles]
    size = [p.n_checkins for p in profiles]
    leis_ratio = [p.leisure_ratio for p in profiles]
    work_ratio = [1.0 - p.leisure_ratio for p in profiles]
    return {
        "leisure_vs_working": ols_fit(n_work, n_leis),
        "leisure_ratio_vs_size": ols_fit(size, leis_ratio),
        "working_ratio_vs_size": ols_fit(size, work_ratio),
    }
