"""Social influence: power-law friend check-in frequency and friend-based CF."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

from .data import CheckIn, SocialGraph
from .geo import distance_km

log = logging.getLogger(__name__)

BETA_MAX = 10.0
MIN_FIT_OBSERVATIONS = 10


@dataclass(frozen=True)
class PowerLawFit:
    beta: float
    x_min: float = 1.0


def visit_counts(train: dict[str, list[CheckIn]]) -> dict[str, Counter]:
    """Per-user training check-in counts keyed by POI."""
    return {u: Counter(c.poi_id for c in seq) for u, seq in train.items()}


def social_frequency(
    u: str, p: str, counts: dict[str, Counter], social: SocialGraph
) -> int:
    """Total training check-ins of u's friends at POI p."""
    return sum(counts.get(v, Counter()).get(p, 0) for v in social.friends(u))


def fit_power_law(frequencies) -> PowerLawFit:
    """Continuous-approximation MLE with x_min = 1, exponent clamped to (1, 10]."""
    xs = [float(x) for x in frequencies]
    if len(xs) < MIN_FIT_OBSERVATIONS:
        raise ValueError(
            f"need >= {MIN_FIT_OBSERVATIONS} positive observations, got {len(xs)}"
        )
    if any(x < 1.0 for x in xs):
        raise ValueError("frequencies must be >= x_min = 1")
    log_sum = sum(math.log(x) for x in xs)
    if log_sum <= 0.0:
        log.warning("all observations at x_min; exponent clamped to %s", BETA_MAX)
        return PowerLawFit(beta=BETA_MAX)
    beta = 1.0 + len(xs) / log_sum
    return PowerLawFit(beta=min(beta, BETA_MAX))


def power_law_score(fit: PowerLawFit, x: float) -> float:
    """CDF-as-relevance: 0 below x_min, else 1 - (x/x_min)^(1-beta)."""
    if x < fit.x_min:
        return 0.0
    return 1.0 - (x / fit.x_min) ** (1.0 - fit.beta)


def residence(u: str, counts: dict[str, Counter]) -> str:
    """Most frequent training POI; ties broken by smallest poi_id."""
    profile = counts.get(u)
    if not profile:
        raise ValueError(f"user {u!r} has no training check-ins")
    return min(profile, key=lambda p: (-profile[p], p))


def fcf_score(
    u: str,
    p: str,
    counts: dict[str, Counter],
    social: SocialGraph,
    residences: dict[str, str],
    poi_coords: dict[str, tuple[float, float]],
) -> float:
    """Similarity-weighted mean of friends' check-in counts at p.

    sim(u, v) = 1 / (1 + km distance between residences).
    """
    friends = [v for v in social.friends(u) if v in residences]
    if not friends or u not in residences:
        return 0.0
    ru = poi_coords[residences[u]]
    num = 0.0
    den = 0.0
    for v in friends:
        rv = poi_coords[residences[v]]
        sim = 1.0 / (1.0 + distance_km(ru[0], ru[1], rv[0], rv[1]))
        num += sim * counts.get(v, Counter()).get(p, 0)
        den += sim
    return num / den if den > 0 else 0.0
