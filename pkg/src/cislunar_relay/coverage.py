"""Lunar observation points and satellite coverage geometry.

Observation points live on a Fibonacci sphere lattice over the moon (radius
R_m, LCE frame).  A point is covered by a satellite when the satellite sits
more than a threshold elevation above the point's local horizon; coverage of
a region is the fraction of its points covered by at least one satellite,
aggregated over time either as a mean or as an everywhere-visible fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import R_MOON_KM
from .errors import ValidationError

# golden-ratio conjugate driving the lattice spiral
_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# slack when testing segment-sphere intersection, so that endpoints sitting
# exactly on an occluder's surface do not register as blocked
_LOS_TOL_KM = 1e-9


@dataclass(frozen=True)
class ObservationPoint:
    """A surface point s_m, with latitude/longitude for region filtering."""

    index: int
    position_lce: np.ndarray
    lat_deg: float
    lon_deg: float


def _lattice_xyz(m_points: int, r_km: float) -> np.ndarray:
    m = np.arange(1, m_points + 1)
    z = r_km * ((2.0 * m - 1.0) / m_points - 1.0)
    rho = r_km * np.sqrt(np.maximum(0.0, 1.0 - (z / r_km) ** 2))
    ang = 2.0 * np.pi * m * _PHI
    return np.stack([rho * np.cos(ang), rho * np.sin(ang), z], axis=1)


def _as_points(xyz: np.ndarray, r_km: float) -> list[ObservationPoint]:
    lat = np.degrees(np.arcsin(np.clip(xyz[:, 2] / r_km, -1.0, 1.0)))
    # longitude 0 on the Earth-facing meridian (-x in LCE)
    lon = (np.degrees(np.arctan2(xyz[:, 1], xyz[:, 0])) + 180.0) % 360.0 - 180.0
    return [
        ObservationPoint(i + 1, xyz[i].copy(), float(lat[i]), float(lon[i]))
        for i in range(xyz.shape[0])
    ]


def fibonacci_points(m_points: int, r_km: float = R_MOON_KM) -> list[ObservationPoint]:
    """Lay out ``m_points`` quasi-uniform points on a sphere of radius ``r_km``."""
    if m_points < 1:
        raise ValidationError("need at least one observation point")
    return _as_points(_lattice_xyz(m_points, r_km), r_km)


def region_points(
    m_points: int,
    lat_min_deg: float,
    lat_max_deg: float,
    r_km: float = R_MOON_KM,
) -> list[ObservationPoint]:
    """Exactly ``m_points`` lattice points with latitude in the given band.

    Grows the underlying full-sphere lattice one point at a time until the
    band holds exactly the requested count, so the band is sampled with the
    same quasi-uniform density as a plain lattice.
    """
    if m_points < 1:
        raise ValidationError("need at least one observation point")
    if not lat_min_deg < lat_max_deg:
        raise ValidationError("empty latitude band")
    z_lo = r_km * math.sin(math.radians(max(lat_min_deg, -90.0)))
    z_hi = r_km * math.sin(math.radians(min(lat_max_deg, 90.0)))
    band_fraction = max((z_hi - z_lo) / (2.0 * r_km), 1e-6)
    limit = max(int(20.0 * m_points / band_fraction), m_points + 1000)
    base = m_points
    while base <= limit:
        xyz = _lattice_xyz(base, r_km)
        keep = (xyz[:, 2] >= z_lo) & (xyz[:, 2] <= z_hi)
        if int(keep.sum()) == m_points:
            selected = _as_points(xyz[keep], r_km)
            return [
                ObservationPoint(i + 1, p.position_lce, p.lat_deg, p.lon_deg)
                for i, p in enumerate(selected)
            ]
        base += 1
    raise ValidationError(
        f"no lattice size up to {limit} puts exactly {m_points} points in "
        f"[{lat_min_deg}, {lat_max_deg}] deg"
    )


def positions_of(points) -> np.ndarray:
    """(M, 3) array of point positions; passes ndarray input through."""
    if isinstance(points, np.ndarray):
        return points
    return np.stack([p.position_lce for p in points])


def elevation_angle(r_u, r_us) -> float:
    """Elevation of a target above the local horizon at surface vector r_u.

    ``r_u`` points from the body center to the surface point, ``r_us`` from
    the surface point to the target.  90 deg is zenith, negative is below
    the horizon.
    """
    r_u = np.asarray(r_u, dtype=float)
    r_us = np.asarray(r_us, dtype=float)
    nu = np.linalg.norm(r_u)
    ns = np.linalg.norm(r_us)
    if nu == 0.0 or ns == 0.0:
        raise ValidationError("elevation undefined for zero-length vector")
    cos_zenith = float(np.dot(r_u, r_us)) / (nu * ns)
    return 90.0 - math.degrees(math.acos(min(1.0, max(-1.0, cos_zenith))))


def covers(point: ObservationPoint, sat_lce, theta_c_deg: float = 5.0) -> bool:
    """Whether a satellite sits strictly above the elevation threshold."""
    sat_lce = np.asarray(sat_lce, dtype=float)
    return elevation_angle(point.position_lce, sat_lce - point.position_lce) > theta_c_deg


def visible_mask(points_xyz: np.ndarray, sats_xyz: np.ndarray,
                 theta_c_deg: float = 5.0) -> np.ndarray:
    """(M, K) boolean table: point m sees satellite k above theta_c.

    Equivalent to `covers` pairwise; elevation > theta_c is tested as
    cos(zenith angle) > sin(theta_c).
    """
    points_xyz = np.asarray(points_xyz, dtype=float)
    sats_xyz = np.asarray(sats_xyz, dtype=float)
    if sats_xyz.size == 0:
        return np.zeros((points_xyz.shape[0], 0), dtype=bool)
    rel = sats_xyz[None, :, :] - points_xyz[:, None, :]
    dots = np.einsum("mj,mkj->mk", points_xyz, rel)
    norms = np.linalg.norm(points_xyz, axis=1)[:, None] * np.linalg.norm(rel, axis=2)
    return dots > math.sin(math.radians(theta_c_deg)) * norms


def instantaneous_cov(points, sats_lce, theta_c_deg: float = 5.0) -> float:
    """Fraction of points covered by at least one satellite."""
    pos = positions_of(points)
    sats = np.asarray(sats_lce, dtype=float).reshape(-1, 3)
    if sats.shape[0] == 0:
        return 0.0
    return float(visible_mask(pos, sats, theta_c_deg).any(axis=1).mean())


@dataclass(frozen=True)
class CoverageReport:
    indicators: np.ndarray  # (samples, points) booleans z^m
    instantaneous: np.ndarray  # (samples,) covered fractions
    aggregate: float
    mode: str


def coverage_report(sats_per_sample, points, theta_c_deg: float = 5.0,
                    mode: str = "time_averaged") -> CoverageReport:
    if mode not in ("time_averaged", "continuous"):
        raise ValidationError(f"unknown aggregation mode {mode!r}")
    if len(sats_per_sample) == 0:
        raise ValidationError("need at least one snapshot")
    pos = positions_of(points)
    rows = []
    for sats in sats_per_sample:
        sats = np.asarray(sats, dtype=float).reshape(-1, 3)
        if sats.shape[0] == 0:
            rows.append(np.zeros(pos.shape[0], dtype=bool))
        else:
            rows.append(visible_mask(pos, sats, theta_c_deg).any(axis=1))
    indicators = np.stack(rows)
    instantaneous = indicators.mean(axis=1)
    if mode == "time_averaged":
        aggregate = float(instantaneous.mean())
    else:
        aggregate = float(indicators.all(axis=0).mean())
    return CoverageReport(indicators, instantaneous, aggregate, mode)


def aggregate_cov(sats_per_sample, points, theta_c_deg: float = 5.0,
                  mode: str = "time_averaged") -> float:
    """Coverage over a sample sequence: mean fraction, or always-covered fraction."""
    return coverage_report(sats_per_sample, points, theta_c_deg, mode).aggregate


def _segment_min_dist(p1: np.ndarray, p2: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Distance from ``center`` to closed segment p1-p2, broadcast over rows."""
    seg = p2 - p1
    rel = center - p1
    denom = np.einsum("...j,...j->...", seg, seg)
    t = np.einsum("...j,...j->...", rel, seg) / np.where(denom == 0.0, 1.0, denom)
    t = np.clip(t, 0.0, 1.0)
    closest = p1 + t[..., None] * seg
    return np.linalg.norm(center - closest, axis=-1)


def los_clear(p1, p2, occluders) -> bool:
    """True when the segment p1-p2 misses every occluding sphere.

    Endpoints resting on a sphere's surface do not count as blocked.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    for center, radius in occluders:
        center = np.asarray(center, dtype=float)
        if _segment_min_dist(p1, p2, center) < radius - _LOS_TOL_KM:
            return False
    return True


def segments_clear(p1: np.ndarray, p2: np.ndarray, center, radius: float) -> np.ndarray:
    """Vectorized single-occluder `los_clear` over stacked segments."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    center = np.asarray(center, dtype=float)
    return _segment_min_dist(p1, p2, center) >= radius - _LOS_TOL_KM
