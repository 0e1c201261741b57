"""End-to-end orchestration: raw TSV files to evaluation reports and
plot-ready CSV artifacts."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .config import ExperimentConfig
from .data import (
    Dataset,
    SplitDataset,
    dataset_stats,
    parse_dataset,
    preprocess_filter,
    temporal_split,
)
from .fusion import (
    OBJECTIVE_MAX_ACC_UNF,
    OBJECTIVE_MIN_DELTA,
    PRODUCT,
    WEIGHTED_SUM,
    weight_sweep,
)
from .metrics import evaluate_run, group_metrics, ranking_metrics
from .recommend import FittedModel, fused_scores, fusion_weights_for, recommend_topn
from .temporal import (
    assign_groups,
    build_profiles,
    correlation_analysis,
    group_stats,
    poi_popularity,
    temporal_histogram,
)

log = logging.getLogger(__name__)


class StageFailure(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def relevant_sets(
    split_part: dict, train_visited: dict[str, set[str]]
) -> dict[str, set[str]]:
    """Per-user ground-truth POI sets: held-out POIs not already visited in
    train (train-visited POIs are never candidates)."""
    out = {}
    for u, seq in split_part.items():
        out[u] = {c.poi_id for c in seq} - train_visited.get(u, set())
    return out


class Pipeline:
    def __init__(self, config: ExperimentConfig):
        self.cfg = config
        self.out = Path(config.out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.timings: dict[str, float] = {}
        self._stage_files: list[Path] = []

    # -- stages ------------------------------------------------------------

    def _stage(self, name: str):
        return _StageContext(self, name)

    def parse(self) -> Dataset:
        with self._stage("parse"):
            d = parse_dataset(
                self.cfg.checkin_path, self.cfg.poi_path, self.cfg.social_path
            )
            if d.load_report is not None:
                self._write(self.out / "load_report.json", d.load_report.to_json())
            return d

    def preprocess(self, d: Dataset) -> Dataset:
        with self._stage("preprocess"):
            filtered, report = preprocess_filter(
                d, self.cfg.min_user_checkins, self.cfg.min_poi_checkins
            )
            stats = dataset_stats(filtered)
            payload = {"filter": asdict(report), "stats": asdict(stats)}
            self._write(
                self.out / "dataset_stats.json",
                json.dumps(payload, indent=2, sort_keys=True),
            )
            return filtered

    def split(self, d: Dataset) -> SplitDataset:
        with self._stage("split"):
            return temporal_split(
                d, self.cfg.train_frac, self.cfg.val_frac, self.cfg.test_frac
            )

    def analyze(self, d: Dataset, split: SplitDataset):
        with self._stage("analyze"):
            popularity = poi_popularity(split.train, len(split.train))
            profiles = build_profiles(
                split.train,
                popularity,
                (self.cfg.work_start_hour, self.cfg.work_end_hour),
            )
            assignment = assign_groups(profiles, self.cfg.group_quantile)
            gstats = group_stats(assignment, profiles, split.train)
            hist = temporal_histogram(d.checkins)

            self._write_csv_artifact(
                "histogram.csv",
                ["hour", "count"],
                [[h, int(n)] for h, n in enumerate(hist)],
            )
            self._write_csv_artifact(
                "profiles.csv",
                [
                    "user_id", "n_checkins", "n_working", "n_leisure",
                    "leisure_ratio", "avg_popularity_consumption",
                ],
                [
                    [
                        p.user_id, p.n_checkins, p.n_working, p.n_leisure,
                        p.leisure_ratio, p.avg_popularity_consumption,
                    ]
                    for p in profiles
                ],
            )
            self._write_csv_artifact(
                "groups.csv",
                [
                    "group", "n_checkins", "avg_popularity_consumption",
                    "avg_activity_level", "n_users",
                ],
                [
                    [
                        g.group, g.n_checkins, g.avg_popularity_consumption,
                        g.avg_activity_level, g.n_users,
                    ]
                    for g in gstats
                ],
            )
            try:
                corr = correlation_analysis(profiles)
            except ValueError as e:
                corr = {"error": str(e)}
            self._write(
                self.out / "correlations.json",
                json.dumps(corr, indent=2, sort_keys=True),
            )
            return profiles, assignment

    def fit_and_recommend(self, d: Dataset, split: SplitDataset):
        """Fit each model once and cache raw candidate context scores."""
        with self._stage("recommend"):
            fitted = {}
            caches = {}
            for name in self.cfg.models:
                model = FittedModel(
                    name, d, split,
                    session_gap_hours=self.cfg.session_gap_hours,
                    amc_alpha=self.cfg.amc_alpha,
                    amc_memory=self.cfg.amc_memory,
                )
                cache = {
                    u: model.score_candidates(u) for u in sorted(split.train)
                }
                fitted[name] = model
                caches[name] = cache
            return fitted, caches

    def sweep(self, caches, assignment, split: SplitDataset):
        """Tune weighted-sum lambdas on the validation split."""
        with self._stage("sweep"):
            train_visited = {u: set() for u in split.train}
            for u, seq in split.train.items():
                train_visited[u] = {c.poi_id for c in seq}
            val_relevant = relevant_sets(split.validation, train_visited)
            cutoff = 10 if 10 in self.cfg.cutoffs else self.cfg.cutoffs[0]
            objective = (
                OBJECTIVE_MIN_DELTA
                if self.cfg.sweep_objective == "min_delta"
                else OBJECTIVE_MAX_ACC_UNF
            )
            best_lambdas = {}
            all_rows = []
            for name, cache in sorted(caches.items()):
                def evaluate(lambdas):
                    per_user = {}
                    for u, cs in cache.items():
                        relevant = val_relevant.get(u)
                        if not relevant or not cs.poi_ids:
                            continue
                        w = fusion_weights_for(WEIGHTED_SUM, cs.enabled, lambdas)
                        scores = fused_scores(cs, WEIGHTED_SUM, w)
                        pois, _ = recommend_topn(cs.poi_ids, scores, cutoff)
                        per_user[u] = ranking_metrics(pois, relevant, cutoff).ndcg
                    gm = group_metrics(per_user, assignment)
                    return {
                        "ndcg": gm.ndcg_all,
                        "ndcg_leisure": gm.ndcg_leisure,
                        "ndcg_working": gm.ndcg_working,
                        "delta_ndcg": gm.delta_ndcg,
                        "acc_unf": gm.acc_unf if gm.acc_unf is not None else float("inf"),
                    }

                best, table = weight_sweep(evaluate, self.cfg.sweep_step, objective)
                best_lambdas[name] = best.lambdas
                for p in table:
                    all_rows.append(
                        [
                            name, p.lambdas[0], p.lambdas[1], p.lambdas[2],
                            p.ndcg, p.ndcg_leisure, p.ndcg_working,
                            p.delta_ndcg,
                            p.acc_unf if p.acc_unf != float("inf") else None,
                        ]
                    )
            self._write_csv_artifact(
                "sweep.csv",
                [
                    "model", "lambda1", "lambda2", "lambda3",
                    "nDCG", "nDCG_L", "nDCG_W", "dnDCG", "acc_unf",
                ],
                all_rows,
            )
            return best_lambdas

    def evaluate(self, caches, assignment, split: SplitDataset, best_lambdas):
        with self._stage("evaluate"):
            train_visited = {
                u: {c.poi_id for c in seq} for u, seq in split.train.items()
            }
            test_relevant = relevant_sets(split.test, train_visited)
            max_n = max(self.cfg.cutoffs)
            rows = []
            reports = []
            for name in self.cfg.models:
                cache = caches[name]
                recs_by_rule = {}
                for rule in self.cfg.fusion_rules:
                    lambdas = best_lambdas.get(name) if rule == WEIGHTED_SUM else None
                    recs = {}
                    rec_rows = []
                    for u in sorted(cache):
                        cs = cache[u]
                        if not cs.poi_ids:
                            continue
                        w = fusion_weights_for(rule, cs.enabled, lambdas)
                        scores = fused_scores(cs, rule, w)
                        pois, vals = recommend_topn(cs.poi_ids, scores, max_n)
                        recs[u] = pois
                        for rank, (p, v) in enumerate(zip(pois, vals), start=1):
                            rec_rows.append(f"{u}\t{rank}\t{p}\t{_fmt(v)}\n")
                    recs_by_rule[rule] = recs
                    self._write(
                        self.out / f"recommendations_{name}_{rule}.tsv",
                        "".join(rec_rows),
                    )
                for n in self.cfg.cutoffs:
                    baseline_delta = None
                    if PRODUCT in recs_by_rule:
                        baseline = evaluate_run(
                            recs_by_rule[PRODUCT], test_relevant, assignment,
                            n, name, PRODUCT,
                        )
                        baseline_delta = baseline.delta_ndcg
                    for rule in self.cfg.fusion_rules:
                        rep = evaluate_run(
                            recs_by_rule[rule], test_relevant, assignment, n,
                            name, rule,
                            baseline_delta=baseline_delta,
                        )
                        reports.append(rep)
                        rows.append(
                            [
                                rep.model, rep.fusion, rep.cutoff,
                                rep.precision, rep.recall, rep.ndcg,
                                rep.ndcg_leisure, rep.ndcg_working,
                                rep.delta_ndcg, rep.pct_delta, rep.acc_unf,
                            ]
                        )
            self._write_csv_artifact(
                "table3.csv",
                [
                    "model", "fusion", "N", "Pre", "Rec", "nDCG",
                    "nDCG_L", "nDCG_W", "dnDCG", "pct_delta", "acc_unf",
                ],
                rows,
            )
            self._write(
                self.out / "table3.json",
                json.dumps(
                    [asdict(r) for r in reports], indent=2, sort_keys=True
                ),
            )
            return reports

    def write_manifest(self) -> None:
        cfg_json = self.cfg.to_json()
        manifest = {
            "config": json.loads(cfg_json),
            "config_sha256": hashlib.sha256(cfg_json.encode()).hexdigest(),
            "version": __version__,
            "timings_s": {k: round(v, 4) for k, v in self.timings.items()},
        }
        self._write(
            self.out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True)
        )

    # -- helpers -----------------------------------------------------------

    def _write(self, path: Path, text: str) -> None:
        path.write_text(text, encoding="utf-8")
        self._stage_files.append(path)

    def _write_csv_artifact(self, name: str, header, rows) -> None:
        path = self.out / name
        _write_csv(path, header, rows)
        self._stage_files.append(path)

    def _mark_partial(self) -> None:
        for path in self._stage_files:
            if path.exists():
                path.rename(path.with_suffix(path.suffix + ".partial"))


class _StageContext:
    def __init__(self, pipeline: Pipeline, name: str):
        self.p = pipeline
        self.name = name

    def __enter__(self):
        self.p._stage_files = []
        self.t0 = time.perf_counter()
        log.info("stage %s started", self.name)
        return self

    def __exit__(self, exc_type, exc, tb):
        self.p.timings[self.name] = time.perf_counter() - self.t0
        if exc is not None:
            self.p._mark_partial()
            raise StageFailure(self.name, exc) from exc
        log.info("stage %s done in %.2fs", self.name, self.p.timings[self.name])
        return False


def run_pipeline(config: ExperimentConfig):
    """Execute every stage and return the emitted evaluation reports."""
    p = Pipeline(config)
    d = p.parse()
    d = p.preprocess(d)
    split = p.split(d)
    profiles, assignment = p.analyze(d, split)
    fitted, caches = p.fit_and_recommend(d, split)
    need_sweep = config.run_sweep or WEIGHTED_SUM in config.fusion_rules
    best_lambdas = (
        p.sweep(caches, assignment, split) if need_sweep else {}
    )
    reports = p.evaluate(caches, assignment, split, best_lambdas)
    p.write_manifest()
    return reports
