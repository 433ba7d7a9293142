"""Constellation scenarios: genomes, time grids, and the two mission objectives.

A constellation is described by a structure {N_GEO, N_L1, N_ord, N_L2} plus a
genome of free parameters:

    [a_index | i_1, raan_1, nu_1 | ... | i_Nord, raan_Nord, nu_Nord | xi_1]

where a_index selects the shared ordinary semi-major axis from a catalog of
admissible values, each ordinary satellite contributes (inclination, RAAN,
true anomaly at epoch), and xi_1 is the first GEO longitude (a second GEO, if
present, sits at xi_1 + 60).  Halo satellites carry no genes: one per point
means the southern family, two means southern plus northern.

`evaluate` scores a genome on a fixed time grid against two minimized
objectives: the average per-device age of information over surface sources,
and the negated coverage of a target latitude band.  The heavy lifting is
vectorized over the whole grid; `snapshot_at` exposes the equivalent
single-epoch network for inspection and cross-checks.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .aoi import (GROUP_EGS, GROUP_EML1, GROUP_EML2, GROUP_GEO, GROUP_ORDINARY,
                  GROUP_SOURCE, LinkModel, NetworkSnapshot, RelayNode,
                  link_failure_prob, suffix_paths)
from .constants import (AOI_UNREACHABLE, GEO_ALTITUDE_KM, HALO_AMPLITUDE_KM,
                        HALO_PERIOD_MIN, R_EARTH_KM, R_MOON_KM)
from .coverage import (ObservationPoint, fibonacci_points, positions_of,
                       region_points, segments_clear)
from .errors import ValidationError
from .frames import (DEFAULT_LUNAR_ELEMENTS, Epoch, GeodeticSite, LunarElements,
                     ecef_from_geodetic, eci_from_ecef, eci_from_lce, gmst_hours,
                     lce_frame, rot_z)
from .nsga2 import GenomeSpec, Problem
from .orbits import (DEFAULT_AXIS_CATALOG_KM, GeoSpec, HaloSpec, KeplerElements,
                     geo_position_eci, halo_position_lce, kepler_position_lce)

# Ground stations receiving the relayed packets (name, lat, lon east).
DEFAULT_EGS_SITES = (
    GeodeticSite("xinjiang", 38.43, 76.71),
    GeodeticSite("beijing", 40.56, 117.0),
    GeodeticSite("kunming", 25.03, 102.8),
    GeodeticSite("heilongjiang", 46.50, 130.78),
)

_GEO_PAIR_SPACING_DEG = 60.0
_AGGREGATION_MODES = ("time_averaged", "continuous")
_AOI_SOURCE_MODES = ("full_surface", "region")


@dataclass(frozen=True)
class ConstellationConfig:
    """Counts per satellite class: {N_GEO, N_L1, N_ord, N_L2}."""

    n_geo: int
    n_l1: int
    n_ord: int
    n_l2: int

    def __post_init__(self):
        for name, value, allowed in (("n_geo", self.n_geo, (1, 2)),
                                     ("n_l1", self.n_l1, (1, 2)),
                                     ("n_l2", self.n_l2, (1, 2))):
            if value not in allowed:
                raise ValidationError(f"{name} must be in {allowed}, got {value}")
        if not isinstance(self.n_ord, int) or self.n_ord < 1:
            raise ValidationError(f"n_ord must be a positive integer, got {self.n_ord}")

    @property
    def n_total(self) -> int:
        return self.n_geo + self.n_l1 + self.n_ord + self.n_l2

    @property
    def n_lunar(self) -> int:
        return self.n_l1 + self.n_ord + self.n_l2

    @property
    def genome_length(self) -> int:
        return 2 + 3 * self.n_ord


@dataclass(frozen=True)
class ScenarioParams:
    """Everything about an evaluation that is not decided by the genome.

    The default duration is two halo periods rounded up to a whole number of
    sampling intervals, so the grid always lands on duration's end.
    """

    start_epoch: Epoch = Epoch.from_calendar(2024, 5, 1)
    duration_min: float | None = None
    sample_interval_min: float = 60.0
    m_points: int = 100
    theta_c_deg: float = 5.0
    region_lat_min_deg: float = -90.0
    region_lat_max_deg: float = -40.0
    egs_sites: tuple[GeodeticSite, ...] = DEFAULT_EGS_SITES
    link_model: LinkModel = LinkModel()
    z_amplitude_km: float = HALO_AMPLITUDE_KM
    halo_period_min: float = HALO_PERIOD_MIN
    aggregation: str = "time_averaged"
    aoi_sources: str = "full_surface"
    axis_catalog_km: tuple[float, ...] = DEFAULT_AXIS_CATALOG_KM
    lunar_elements: LunarElements = DEFAULT_LUNAR_ELEMENTS

    def __post_init__(self):
        object.__setattr__(self, "egs_sites", tuple(self.egs_sites))
        object.__setattr__(self, "axis_catalog_km",
                           tuple(float(a) for a in self.axis_catalog_km))
        if self.sample_interval_min <= 0.0:
            raise ValidationError("sample_interval_min must be positive")
        if self.duration_min is not None and self.duration_min <= 0.0:
            raise ValidationError("duration_min must be positive when given")
        if self.m_points < 1:
            raise ValidationError("m_points must be at least 1")
        if not 0.0 <= self.theta_c_deg < 90.0:
            raise ValidationError("theta_c_deg must lie in [0, 90)")
        if self.aggregation not in _AGGREGATION_MODES:
            raise ValidationError(f"aggregation must be one of {_AGGREGATION_MODES}")
        if self.aoi_sources not in _AOI_SOURCE_MODES:
            raise ValidationError(f"aoi_sources must be one of {_AOI_SOURCE_MODES}")
        if self.halo_period_min <= 0.0 or self.z_amplitude_km <= 0.0:
            raise ValidationError("halo period and z amplitude must be positive")
        if not self.egs_sites:
            raise ValidationError("at least one ground station is required")
        if not self.axis_catalog_km or any(a <= 0.0 for a in self.axis_catalog_km):
            raise ValidationError("axis catalog must list positive semi-major axes")

    @property
    def resolved_duration_min(self) -> float:
        if self.duration_min is not None:
            return self.duration_min
        ticks = math.ceil(2.0 * self.halo_period_min / self.sample_interval_min)
        return ticks * self.sample_interval_min

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.resolved_duration_min / self.sample_interval_min)) + 1

    def sample_times_min(self) -> np.ndarray:
        """Minutes since start_epoch of every snapshot, including t = 0."""
        return np.arange(self.n_samples, dtype=float) * self.sample_interval_min


@dataclass(frozen=True)
class Constellation:
    """Concrete satellites, ordered EML2 halos, ordinary, EML1 halos, GEO."""

    eml2: tuple[HaloSpec, ...] = ()
    ordinary: tuple[KeplerElements, ...] = ()
    eml1: tuple[HaloSpec, ...] = ()
    geo: tuple[GeoSpec, ...] = ()

    @property
    def n_lunar(self) -> int:
        return len(self.eml2) + len(self.ordinary) + len(self.eml1)

    def relay_groups(self) -> list[int]:
        """Group label of every satellite, in node order."""
        return ([GROUP_EML2] * len(self.eml2)
                + [GROUP_ORDINARY] * len(self.ordinary)
                + [GROUP_EML1] * len(self.eml1)
                + [GROUP_GEO] * len(self.geo))


def _halo_families(count: int) -> tuple[str, ...]:
    return ("south",) if count == 1 else ("south", "north")


def _check_angle(name: str, value: float, upper: float) -> float:
    if not 0.0 <= value <= upper:
        raise ValidationError(f"{name} must lie in [0, {upper:g}], got {value}")
    return float(value)


def decode(config: ConstellationConfig, genome,
           params: ScenarioParams | None = None) -> Constellation:
    """Build the constellation a genome describes; validates every gene."""
    params = params or ScenarioParams()
    genome = np.asarray(genome, dtype=float)
    if genome.shape != (config.genome_length,):
        raise ValidationError(
            f"genome must have length {config.genome_length}, got shape {genome.shape}")
    idx = genome[0]
    if not np.isfinite(idx) or idx != int(idx):
        raise ValidationError(f"a_index must be an integer, got {idx}")
    idx = int(idx)
    if not 0 <= idx < len(params.axis_catalog_km):
        raise ValidationError(
            f"a_index {idx} outside catalog of {len(params.axis_catalog_km)} axes")
    a_km = params.axis_catalog_km[idx]

    def halos(point: int, count: int) -> tuple[HaloSpec, ...]:
        return tuple(HaloSpec(point, family, params.z_amplitude_km,
                              params.halo_period_min)
                     for family in _halo_families(count))

    ordinary = []
    for k in range(config.n_ord):
        i_deg, raan_deg, nu_deg = genome[1 + 3 * k: 4 + 3 * k]
        ordinary.append(KeplerElements(
            a_km=a_km,
            i_deg=_check_angle(f"inclination of ordinary {k}", i_deg, 180.0),
            raan_deg=_check_angle(f"RAAN of ordinary {k}", raan_deg, 360.0),
            nu0_deg=_check_angle(f"true anomaly of ordinary {k}", nu_deg, 360.0),
        ))
    xi_1 = _check_angle("GEO longitude", genome[-1], 180.0)
    geo = [GeoSpec(xi_1)]
    if config.n_geo == 2:
        geo.append(GeoSpec((xi_1 + _GEO_PAIR_SPACING_DEG) % 360.0))
    return Constellation(eml2=halos(2, config.n_l2), ordinary=tuple(ordinary),
                         eml1=halos(1, config.n_l1), geo=tuple(geo))


def encode(config: ConstellationConfig, constellation: Constellation,
           params: ScenarioParams | None = None) -> np.ndarray:
    """Inverse of `decode` for constellations that fit the genome layout."""
    params = params or ScenarioParams()
    if (len(constellation.geo) != config.n_geo
            or len(constellation.eml1) != config.n_l1
            or len(constellation.ordinary) != config.n_ord
            or len(constellation.eml2) != config.n_l2):
        raise ValidationError("constellation does not match the config's structure")
    axes = {el.a_km for el in constellation.ordinary}
    if len(axes) != 1:
        raise ValidationError("ordinary satellites must share one semi-major axis")
    a_km = axes.pop()
    try:
        idx = params.axis_catalog_km.index(a_km)
    except ValueError:
        raise ValidationError(f"semi-major axis {a_km} km is not in the catalog")
    genome = [float(idx)]
    for el in constellation.ordinary:
        if el.e != 0.0 or el.argp_deg != 0.0:
            raise ValidationError("ordinary satellites must be circular with argp 0")
        genome.extend((el.i_deg, el.raan_deg, el.nu0_deg))
    genome.append(constellation.geo[0].longitude_deg)
    return np.asarray(genome, dtype=float)


def genome_bounds(config: ConstellationConfig,
                  params: ScenarioParams | None = None) -> GenomeSpec:
    """Box bounds for the real genes plus the categorical axis gene."""
    params = params or ScenarioParams()
    lower = [0.0, 0.0, 0.0] * config.n_ord + [0.0]
    upper = [180.0, 360.0, 360.0] * config.n_ord + [180.0]
    return GenomeSpec(lower, upper, categorical_sizes=(len(params.axis_catalog_km),))


def split_genome(genome) -> tuple[np.ndarray, np.ndarray]:
    """Split a flat genome into the (reals, cats) pair the optimizer uses."""
    genome = np.asarray(genome, dtype=float)
    return genome[1:].copy(), np.array([int(genome[0])])


def join_genome(reals, cats) -> np.ndarray:
    """Inverse of `split_genome`."""
    return np.concatenate(([float(np.asarray(cats).reshape(-1)[0])],
                           np.asarray(reals, dtype=float)))


def walker_constellation(n: int, family: str, a_km: float,
                         inclination_deg: float | None = None,
                         with_geo: bool = False) -> Constellation:
    """Evenly spaced single-axis comparison constellation.

    Star walkers put every plane through the poles (i = 90); delta walkers
    share a common inclination (60 unless overridden).  With `with_geo` one
    slot is spent on a GEO relay at 90 E instead of a lunar satellite.
    """
    if family not in ("star", "delta"):
        raise ValidationError(f"family must be star or delta, got {family!r}")
    if n < 1:
        raise ValidationError("n must be at least 1")
    if a_km <= R_MOON_KM:
        raise ValidationError("semi-major axis must clear the lunar surface")
    if family == "star":
        i_deg = 90.0 if inclination_deg is None else float(inclination_deg)
    else:
        i_deg = 60.0 if inclination_deg is None else float(inclination_deg)
    n_lunar = n - 1 if with_geo else n
    step = 360.0 / n_lunar if n_lunar else 0.0
    ordinary = tuple(KeplerElements(a_km=a_km, i_deg=i_deg, raan_deg=(j * step) % 360.0,
                                    nu0_deg=(j * step) % 360.0)
                     for j in range(n_lunar))
    geo = (GeoSpec(90.0),) if with_geo else ()
    return Constellation(ordinary=ordinary, geo=geo)


# --------------------------------------------------------------------------
# Time-grid context: everything reusable across evaluations of one params set.

@dataclass(frozen=True)
class ScenarioContext:
    """Precomputed frames, ground tracks, and source points for one grid."""

    params: ScenarioParams
    times_min: np.ndarray              # (T,)
    lce_rot: np.ndarray                # (T, 3, 3) LCE -> ECI rotation
    lce_origin: np.ndarray             # (T, 3) moon center, ECI km
    ecef_rot: np.ndarray               # (T, 3, 3) ECEF -> ECI rotation
    egs_eci: np.ndarray                # (T, G, 3)
    aoi_points: tuple[ObservationPoint, ...]
    region: tuple[ObservationPoint, ...]
    halo_lce: dict                     # (point, family) -> (T, 3) km


@functools.lru_cache(maxsize=8)
def _context(params: ScenarioParams) -> ScenarioContext:
    times = params.sample_times_min()
    days = params.start_epoch.days_since_j2000 + times / 1440.0
    rot, origin = lce_frame(days, params.lunar_elements)
    hours = np.array([gmst_hours(Epoch(d)) for d in days])
    ecef_rot = rot_z(-15.0 * hours)
    egs_ecef = np.array([ecef_from_geodetic(site) for site in params.egs_sites])
    egs_eci = np.einsum("tij,gj->tgi", ecef_rot, egs_ecef)
    region = tuple(region_points(params.m_points, params.region_lat_min_deg,
                                 params.region_lat_max_deg))
    if params.aoi_sources == "region":
        aoi_points = region
    else:
        aoi_points = tuple(fibonacci_points(params.m_points))
    halo_lce = {}
    for point in (1, 2):
        for fam in ("south", "north"):
            spec = HaloSpec(point, fam, params.z_amplitude_km, params.halo_period_min)
            halo_lce[(point, fam)] = halo_position_lce(spec, times)
    return ScenarioContext(params=params, times_min=times, lce_rot=rot,
                           lce_origin=origin, ecef_rot=ecef_rot, egs_eci=egs_eci,
                           aoi_points=aoi_points, region=region, halo_lce=halo_lce)


def _halo_track(ctx: ScenarioContext, spec: HaloSpec) -> np.ndarray:
    p = ctx.params
    if (spec.z_amplitude_km == p.z_amplitude_km
            and spec.period_min == p.halo_period_min and spec.phase0_deg == 0.0):
        return ctx.halo_lce[(spec.libration_point, spec.family)]
    return halo_position_lce(spec, ctx.times_min)


def _satellite_tracks(constellation: Constellation, ctx: ScenarioContext):
    """LCE tracks of lunar satellites and ECI tracks of everything.

    Returns (lunar_lce (T,J,3), relay_eci (T,K,3)) where the K relay columns
    are ordered EML2, ordinary, EML1, GEO and J counts the lunar ones.
    """
    n_t = len(ctx.times_min)
    lunar = [_halo_track(ctx, spec) for spec in constellation.eml2]
    lunar += [kepler_position_lce(el, ctx.times_min) for el in constellation.ordinary]
    lunar += [_halo_track(ctx, spec) for spec in constellation.eml1]
    if lunar:
        lunar_lce = np.stack(lunar, axis=1)
        lunar_eci = (np.einsum("tij,tkj->tki", ctx.lce_rot, lunar_lce)
                     + ctx.lce_origin[:, None, :])
    else:
        lunar_lce = np.zeros((n_t, 0, 3))
        lunar_eci = np.zeros((n_t, 0, 3))
    if constellation.geo:
        geo_ecef = np.array([
            ecef_from_geodetic(GeodeticSite("geo", 0.0, spec.longitude_deg,
                                            GEO_ALTITUDE_KM))
            for spec in constellation.geo])
        geo_eci = np.einsum("tij,gj->tgi", ctx.ecef_rot, geo_ecef)
    else:
        geo_eci = np.zeros((n_t, 0, 3))
    relay_eci = np.concatenate([lunar_eci, geo_eci], axis=1)
    return lunar_lce, relay_eci


def _visibility(points_xyz: np.ndarray, sats_xyz: np.ndarray, theta_c_deg: float):
    """Elevation visibility of (T,J,3) satellites from (M,3) surface points.

    Returns (visible (T,M,J) bool, distance (T,M,J) km); both empty-safe.
    """
    sin_t = math.sin(math.radians(theta_c_deg))
    p_norm2 = np.einsum("mi,mi->m", points_xyz, points_xyz)
    s_norm2 = np.einsum("tji,tji->tj", sats_xyz, sats_xyz)
    ps = np.einsum("mi,tji->tmj", points_xyz, sats_xyz)
    dist2 = np.clip(s_norm2[:, None, :] - 2.0 * ps + p_norm2[None, :, None], 0.0, None)
    dist = np.sqrt(dist2)
    dots = ps - p_norm2[None, :, None]
    visible = dots > sin_t * np.sqrt(p_norm2)[None, :, None] * dist
    return visible, dist


def _coverage(region_xyz: np.ndarray, lunar_lce: np.ndarray,
              params: ScenarioParams) -> float:
    if lunar_lce.shape[1] == 0:
        return 0.0
    visible, _ = _visibility(region_xyz, lunar_lce, params.theta_c_deg)
    any_sat = visible.any(axis=2)
    if params.aggregation == "continuous":
        return float(any_sat.all(axis=0).mean())
    return float(any_sat.mean())


def _suffix_costs(groups: list[int], relay_eci: np.ndarray,
                  ctx: ScenarioContext) -> np.ndarray:
    """Best downstream cost per (snapshot, lunar head): C (T, J) with inf gaps.

    C already includes the packet-loss term for the whole source-to-ground
    path and the transmission delay of every hop; only the source-to-head
    propagation distance is missing.
    """
    model = ctx.params.link_model
    n_t, n_relay, _ = relay_eci.shape
    n_egs = ctx.egs_eci.shape[1]
    all_groups = groups + [GROUP_EGS] * n_egs
    nodes_eci = np.concatenate([relay_eci, ctx.egs_eci], axis=1)
    n_lunar = sum(1 for g in groups if g != GROUP_GEO)
    paths = suffix_paths(all_groups, model.require_geo_relay)
    c_head = np.full((n_t, n_lunar), np.inf)
    if not paths:
        return c_head

    sin_t = math.sin(math.radians(ctx.params.theta_c_deg))
    earth = np.zeros(3)
    edge_ok: dict = {}
    edge_d: dict = {}

    def edge(u: int, v: int):
        if (u, v) not in edge_ok:
            pu, pv = nodes_eci[:, u], nodes_eci[:, v]
            ok = (segments_clear(pu, pv, earth, R_EARTH_KM)
                  & segments_clear(pu, pv, ctx.lce_origin, R_MOON_KM))
            if all_groups[v] == GROUP_EGS:
                rel = pu - pv
                dots = np.einsum("ti,ti->t", pv, rel)
                norms = np.linalg.norm(pv, axis=1) * np.linalg.norm(rel, axis=1)
                ok &= dots > sin_t * norms
            edge_ok[(u, v)] = ok
            edge_d[(u, v)] = np.linalg.norm(pu - pv, axis=1)
        return edge_ok[(u, v)], edge_d[(u, v)]

    t_tran = model.t_tran()
    for path in paths:
        head = path[0]
        p_success = 1.0 - link_failure_prob(GROUP_SOURCE, all_groups[head], model)
        ok = np.ones(n_t, dtype=bool)
        d_total = np.zeros(n_t)
        for u, v in zip(path, path[1:]):
            p_success *= 1.0 - link_failure_prob(all_groups[u], all_groups[v], model)
            e_ok, e_d = edge(u, v)
            ok &= e_ok
            d_total += e_d
        cost = (model.sigma / (2.0 * p_success) + len(path) * t_tran
                + d_total / model.d_unit_km)
        cost[~ok] = np.inf
        np.minimum(c_head[:, head], cost, out=c_head[:, head])
    return c_head


def _average_aoi(constellation: Constellation, lunar_lce: np.ndarray,
                 relay_eci: np.ndarray, ctx: ScenarioContext) -> float:
    params = ctx.params
    if lunar_lce.shape[1] == 0:
        return AOI_UNREACHABLE
    c_head = _suffix_costs(constellation.relay_groups(), relay_eci, ctx)
    points_xyz = positions_of(ctx.aoi_points)
    visible, dist = _visibility(points_xyz, lunar_lce, params.theta_c_deg)
    candidate = c_head[:, None, :] + dist / params.link_model.d_unit_km
    candidate = np.where(visible, candidate, np.inf)
    best = candidate.min(axis=2)
    return float(np.where(np.isinf(best), AOI_UNREACHABLE, best).mean())


def evaluate_constellation(constellation: Constellation,
                           params: ScenarioParams | None = None
                           ) -> tuple[float, float]:
    """Score any constellation: (average AoI, coverage fraction)."""
    params = params or ScenarioParams()
    ctx = _context(params)
    lunar_lce, relay_eci = _satellite_tracks(constellation, ctx)
    cov = _coverage(positions_of(ctx.region), lunar_lce, params)
    abar = _average_aoi(constellation, lunar_lce, relay_eci, ctx)
    return abar, cov


def evaluate(config: ConstellationConfig, genome,
             params: ScenarioParams | None = None) -> np.ndarray:
    """Objective vector (average AoI, -coverage) of a genome; both minimized."""
    params = params or ScenarioParams()
    constellation = decode(config, genome, params)
    abar, cov = evaluate_constellation(constellation, params)
    return np.array([abar, -cov])


def snapshot_at(constellation: Constellation, sources, egs_sites,
                epoch: Epoch, params: ScenarioParams | None = None
                ) -> NetworkSnapshot:
    """Single-epoch network with sources, relays, and ground stations.

    Sources are `ObservationPoint`s in moon-fixed coordinates; the node ids
    are src-<index>, l2-<k>, ord-<k>, l1-<k>, geo-<k>, and the site names.
    """
    params = params or ScenarioParams()
    elements = params.lunar_elements
    t_min = (epoch.days_since_j2000
             - params.start_epoch.days_since_j2000) * 1440.0
    rot, origin = lce_frame(epoch.days_since_j2000, elements)
    nodes = [RelayNode(f"src-{p.index}", GROUP_SOURCE,
                       eci_from_lce(p.position_lce, epoch, elements))
             for p in sources]
    for k, spec in enumerate(constellation.eml2, start=1):
        nodes.append(RelayNode(f"l2-{k}", GROUP_EML2,
                               rot @ halo_position_lce(spec, t_min) + origin))
    for k, el in enumerate(constellation.ordinary, start=1):
        nodes.append(RelayNode(f"ord-{k}", GROUP_ORDINARY,
                               rot @ kepler_position_lce(el, t_min) + origin))
    for k, spec in enumerate(constellation.eml1, start=1):
        nodes.append(RelayNode(f"l1-{k}", GROUP_EML1,
                               rot @ halo_position_lce(spec, t_min) + origin))
    for k, spec in enumerate(constellation.geo, start=1):
        nodes.append(RelayNode(f"geo-{k}", GROUP_GEO, geo_position_eci(spec, epoch)))
    for site in egs_sites:
        nodes.append(RelayNode(site.name, GROUP_EGS,
                               eci_from_ecef(ecef_from_geodetic(site), epoch)))
    return NetworkSnapshot(epoch=epoch, nodes=tuple(nodes), moon_center_eci=origin)


def default_population_size(config: ConstellationConfig) -> int:
    """Population sizing rule: 50 genomes, or 100 once n_ord reaches 3."""
    return 100 if config.n_ord >= 3 else 50


class ScenarioProblem(Problem):
    """Adapter presenting a (config, params) pair to the optimizer."""

    def __init__(self, config: ConstellationConfig,
                 params: ScenarioParams | None = None):
        self.config = config
        self.params = params or ScenarioParams()
        self.genome_spec = genome_bounds(config, self.params)

    def evaluate(self, reals: np.ndarray, cats: np.ndarray) -> np.ndarray:
        return evaluate(self.config, join_genome(reals, cats), self.params)


def make_problem(config: ConstellationConfig,
                 params: ScenarioParams | None = None) -> ScenarioProblem:
    return ScenarioProblem(config, params)
