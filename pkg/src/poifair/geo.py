"""Kernel-density geographical influence with per-user or global bandwidth."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .data import CheckIn

KM_PER_DEG_LAT = 110.574
KM_PER_DEG_LON_EQUATOR = 111.320
BANDWIDTH_FLOOR_KM = 0.01

PER_USER = "per_user"
GLOBAL = "global"


def project_km(lats, lons, lat_ref: float) -> np.ndarray:
    """Equirectangular local projection of degree coordinates to km."""
    lats = np.asarray(lats, dtype=float)
    lons = np.asarray(lons, dtype=float)
    x = KM_PER_DEG_LAT * lats
    y = KM_PER_DEG_LON_EQUATOR * math.cos(math.radians(lat_ref)) * lons
    return np.stack([x, y], axis=-1)


def distance_km(lat1, lon1, lat2, lon2) -> float:
    """Equirectangular distance using the midpoint latitude as reference."""
    lat_ref = (lat1 + lat2) / 2.0
    p = project_km([lat1, lat2], [lon1, lon2], lat_ref)
    return float(np.hypot(*(p[0] - p[1])))


@dataclass(frozen=True)
class KdeModel:
    points_km: np.ndarray  # (n, 2)
    bandwidth: tuple[float, float]  # (h_lat, h_lon) in km
    mode: str
    lat_ref: float

    def dump(self) -> str:
        return json.dumps(
            {
                "mode": self.mode,
                "bandwidth_km": list(self.bandwidth),
                "n_samples": int(len(self.points_km)),
            },
            sort_keys=True,
        )


def silverman_bandwidth(values: np.ndarray) -> float:
    """1.06 * sigma * n^(-1/5), floored to survive degenerate samples."""
    n = len(values)
    sigma = float(np.std(values))
    return max(1.06 * sigma * n ** (-0.2), BANDWIDTH_FLOOR_KM)


def fit_kde(coords: list[tuple[float, float]], mode: str = PER_USER) -> KdeModel:
    """Fit a product-Gaussian KDE over (lat, lon) degree coordinates."""
    if not coords:
        raise ValueError("cannot fit KDE on empty sample")
    arr = np.asarray(coords, dtype=float)
    lat_ref = float(arr[:, 0].mean())
    pts = project_km(arr[:, 0], arr[:, 1], lat_ref)
    h = (silverman_bandwidth(pts[:, 0]), silverman_bandwidth(pts[:, 1]))
    return KdeModel(points_km=pts, bandwidth=h, mode=mode, lat_ref=lat_ref)


def fit_user_kdes(train: dict[str, list[CheckIn]]) -> dict[str, KdeModel]:
    return {
        u: fit_kde([(c.latitude, c.longitude) for c in seq], PER_USER)
        for u, seq in train.items()
        if seq
    }


def fit_global_kde(train: dict[str, list[CheckIn]]) -> KdeModel:
    coords = [
        (c.latitude, c.longitude) for u in sorted(train) for c in train[u]
    ]
    return fit_kde(coords, GLOBAL)


def geo_score_km(model: KdeModel, query_km: np.ndarray) -> np.ndarray:
    """Density at projected-km query points, shape (m, 2) -> (m,)."""
    q = np.atleast_2d(np.asarray(query_km, dtype=float))
    h1, h2 = model.bandwidth
    dx = (q[:, None, 0] - model.points_km[None, :, 0]) / h1
    dy = (q[:, None, 1] - model.points_km[None, :, 1]) / h2
    norm = 1.0 / (2.0 * math.pi * h1 * h2)
    return norm * np.exp(-0.5 * (dx * dx + dy * dy)).mean(axis=1)


def geo_score(model: KdeModel, latitude: float, longitude: float) -> float:
    q = project_km([latitude], [longitude], model.lat_ref)
    return float(geo_score_km(model, q)[0])


def geo_scores(model: KdeModel, lats, lons) -> np.ndarray:
    q = project_km(lats, lons, model.lat_ref)
    return geo_score_km(model, q)
