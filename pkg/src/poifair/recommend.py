"""Compose context components into GeoSoCa- and LORE-style scorers and
produce top-N recommendations."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import geo, sequential, social
from .categorical import CategoricalModel
from .data import Dataset, SplitDataset
from .fusion import (
    PRODUCT,
    SUM,
    WEIGHTED_SUM,
    FusionWeights,
    fuse_arrays,
    normalize_scores,
    renormalize_weighted_sum,
    rule_weights,
)

log = logging.getLogger(__name__)

GEOSOCA = "geosoca"
LORE = "lore"
MODEL_NAMES = (GEOSOCA, LORE)


@dataclass(frozen=True)
class ModelSpec:
    name: str
    fusion_rule: str = PRODUCT
    lambdas: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class RankedList:
    user_id: str
    poi_ids: list[str]
    scores: list[float]


@dataclass
class CandidateScores:
    """Raw (c1, c2, c3) context scores for one user's unvisited candidates."""

    user_id: str
    poi_ids: list[str]
    raw: np.ndarray  # (n_candidates, 3)
    enabled: tuple[bool, bool, bool]


class FittedModel:
    """Context components fitted on the training split.

    GeoSoCa binds (per-user KDE, friends' power-law frequency, categorical
    power-law frequency); LORE binds (global KDE, friend-based CF, additive
    Markov chain).
    """

    def __init__(self, name: str, dataset: Dataset, split: SplitDataset,
                 session_gap_hours: float = sequential.SESSION_GAP_HOURS,
                 amc_alpha: float = sequential.AMC_DECAY,
                 amc_memory: int = sequential.AMC_MEMORY):
        if name not in MODEL_NAMES:
            raise ValueError(f"unknown model {name!r}")
        self.name = name
        self.dataset = dataset
        self.split = split
        self.counts = social.visit_counts(split.train)
        self.poi_ids = sorted(dataset.pois)
        self.poi_coords = {
            p: (poi.latitude, poi.longitude) for p, poi in dataset.pois.items()
        }

        if name == GEOSOCA:
            self.user_kdes = geo.fit_user_kdes(split.train)
            freqs = self._positive_social_frequencies()
            self.social_fit = _fit_or_default(freqs)
            self.cat_model = CategoricalModel(split.train, dataset.pois)
            if self.cat_model.has_categories:
                cat_freqs = self._positive_categorical_frequencies()
                self.cat_fit = _fit_or_default(cat_freqs)
            else:
                self.cat_fit = None
            self.enabled = (True, True, self.cat_model.has_categories)
        else:
            self.global_kde = geo.fit_global_kde(split.train)
            self.residences = {
                u: social.residence(u, self.counts)
                for u in sorted(split.train)
                if self.counts.get(u)
            }
            self.l2tg = sequential.build_l2tg(split.train, session_gap_hours)
            self.amc_alpha = amc_alpha
            self.amc_memory = amc_memory
            self.enabled = (True, True, True)

    def _positive_social_frequencies(self) -> list[int]:
        freqs = []
        for u in sorted(self.split.train):
            friend_counts = [
                self.counts.get(v)
                for v in self.dataset.social.friends(u)
                if self.counts.get(v)
            ]
            if not friend_counts:
                continue
            merged: dict[str, int] = {}
            for fc in friend_counts:
                for p, n in fc.items():
                    merged[p] = merged.get(p, 0) + n
            freqs.extend(n for n in merged.values() if n >= 1)
        return freqs

    def _positive_categorical_frequencies(self) -> list[float]:
        freqs = []
        for u in sorted(self.split.train):
            seen_cats = {
                c
                for c in (
                    self.cat_model.poi_category.get(p) for p in self.counts[u]
                )
                if c is not None
            }
            for p in self.poi_ids:
                if self.cat_model.poi_category.get(p) in seen_cats:
                    y = self.cat_model.frequency(u, p)
                    if y >= 1.0:
                        freqs.append(y)
        return freqs

    def candidates_for(self, u: str) -> list[str]:
        visited = set(self.counts.get(u, ()))
        return [p for p in self.poi_ids if p not in visited]

    def score_candidates(self, u: str) -> CandidateScores:
        """Raw (c1, c2, c3) for every POI the user has not visited in train."""
        if u not in self.split.train or not self.split.train[u]:
            raise ValueError(f"user {u!r} absent from the training split")
        cands = self.candidates_for(u)
        if not cands:
            log.warning("user %s visited every POI; no candidates", u)
            return CandidateScores(u, [], np.zeros((0, 3)), self.enabled)
        lats = [self.poi_coords[p][0] for p in cands]
        lons = [self.poi_coords[p][1] for p in cands]
        if self.name == GEOSOCA:
            c1 = geo.geo_scores(self.user_kdes[u], lats, lons)
            c2 = np.array(
                [
                    social.power_law_score(
                        self.social_fit,
                        social.social_frequency(u, p, self.counts, self.dataset.social),
                    )
                    for p in cands
                ]
            )
            if self.cat_fit is not None:
                c3 = np.array(
                    [
                        social.power_law_score(self.cat_fit, self.cat_model.frequency(u, p))
                        for p in cands
                    ]
                )
            else:
                c3 = np.zeros(len(cands))
        else:
            c1 = geo.geo_scores(self.global_kde, lats, lons)
            c2 = np.array(
                [
                    social.fcf_score(
                        u, p, self.counts, self.dataset.social,
                        self.residences, self.poi_coords,
                    )
                    for p in cands
                ]
            )
            history = [c.poi_id for c in self.split.train[u]]
            c3 = np.array(
                sequential.amc_scores(
                    self.l2tg, history, cands, self.amc_alpha, self.amc_memory
                )
            )
        return CandidateScores(u, cands, np.stack([c1, c2, c3], axis=1), self.enabled)


def _fit_or_default(freqs) -> social.PowerLawFit:
    if len(freqs) < social.MIN_FIT_OBSERVATIONS:
        log.warning("too few positive frequencies (%d); using beta=2", len(freqs))
        return social.PowerLawFit(beta=2.0)
    return social.fit_power_law(freqs)


def fusion_weights_for(
    rule: str,
    enabled: tuple[bool, bool, bool],
    lambdas: tuple[float, float, float] | None = None,
) -> FusionWeights:
    if rule == WEIGHTED_SUM and lambdas is not None:
        lambdas = renormalize_weighted_sum(lambdas, enabled)
    return rule_weights(rule, lambdas)


def fused_scores(cs: CandidateScores, rule: str, w: FusionWeights) -> np.ndarray:
    """Fuse candidate context scores: product on raw scores, additive rules on
    per-user min-max-normalized scores."""
    if len(cs.poi_ids) == 0:
        return np.zeros(0)
    mat = cs.raw if rule == PRODUCT else normalize_scores(cs.raw)
    return fuse_arrays(mat, w, cs.enabled)


def recommend_topn(
    poi_ids: list[str], scores: np.ndarray, n: int
) -> tuple[list[str], list[float]]:
    """Sort descending by fused score, ties by poi_id ascending, truncate."""
    if n < 1:
        raise ValueError("N must be >= 1")
    order = sorted(range(len(poi_ids)), key=lambda i: (-scores[i], poi_ids[i]))[:n]
    return [poi_ids[i] for i in order], [float(scores[i]) for i in order]


def recommend(
    model: FittedModel, u: str, spec_rule: str, n: int,
    lambdas: tuple[float, float, float] | None = None,
    cached: CandidateScores | None = None,
) -> RankedList:
    cs = cached if cached is not None else model.score_candidates(u)
    w = fusion_weights_for(spec_rule, cs.enabled, lambdas)
    scores = fused_scores(cs, spec_rule, w)
    pois, vals = recommend_topn(cs.poi_ids, scores, n) if len(cs.poi_ids) else ([], [])
    return RankedList(user_id=u, poi_ids=pois, scores=vals)
