"""Design and evaluation of hybrid Earth-Moon relay constellations.

The package models a relay network made of GEO satellites, circular lunar
orbiters, and EML1/EML2 halo orbiters; scores constellations on average
age of information at Earth ground stations and on coverage of a lunar
target region; and searches the design space with NSGA-II.
"""

from .aoi import (AOI_UNREACHABLE, LinkModel, NetworkSnapshot, PathMetrics,
                  RelayGraph, RelayNode, average_per_device_aoi, best_path_aoi,
                  build_relay_graph, link_failure_prob, path_metrics,
                  simulate_aoi_discrete)
from .constants import (C_KM_S, EARTH_MOON_DIST_KM, GEO_ALTITUDE_KM,
                        HALO_AMPLITUDE_KM, HALO_PERIOD_MIN, R_EARTH_KM,
                        R_MOON_KM)
from .coverage import (ObservationPoint, aggregate_cov, coverage_report, covers,
                       elevation_angle, fibonacci_points, instantaneous_cov,
                       los_clear, region_points, visible_mask)
from .errors import ConvergenceError, ValidationError
from .frames import (DEFAULT_LUNAR_ELEMENTS, Epoch, GeodeticSite, LunarElements,
                     ecef_from_eci, ecef_from_geodetic, eci_from_ecef,
                     eci_from_lce, gmst_hours, lce_frame, moon_center_eci,
                     rot_x, rot_z)
from .nsga2 import (EvolveParams, EvolveResult, GenerationStats, GenomeSpec,
                    Individual, Problem, crowding_distance, dominates, evolve,
                    fast_nondominated_sort, polynomial_mutation, sbx_crossover)
from .orbits import (DEFAULT_AXIS_CATALOG_KM, AdmissibleAxis, GeoSpec, HaloSpec,
                     KeplerElements, admissible_semi_major_axes,
                     geo_position_eci, halo_position_lce, kepler_position_lce,
                     ordinary_period, semi_major_axis_for_period)
from .scenario import (DEFAULT_EGS_SITES, Constellation, ConstellationConfig,
                       ScenarioParams, ScenarioProblem, decode,
                       default_population_size, encode, evaluate,
                       evaluate_constellation, genome_bounds, join_genome,
                       make_problem, snapshot_at, split_genome,
                       walker_constellation)

__version__ = "0.1.0"

__all__ = [
    "AOI_UNREACHABLE", "AdmissibleAxis", "C_KM_S", "Constellation",
    "ConstellationConfig", "ConvergenceError", "DEFAULT_AXIS_CATALOG_KM",
    "DEFAULT_EGS_SITES", "DEFAULT_LUNAR_ELEMENTS", "EARTH_MOON_DIST_KM",
    "Epoch", "EvolveParams", "EvolveResult", "GEO_ALTITUDE_KM",
    "GenerationStats", "GenomeSpec", "GeoSpec", "GeodeticSite",
    "HALO_AMPLITUDE_KM", "HALO_PERIOD_MIN", "HaloSpec", "Individual",
    "KeplerElements", "LinkModel", "LunarElements", "NetworkSnapshot",
    "ObservationPoint", "PathMetrics", "Problem", "R_EARTH_KM", "R_MOON_KM",
    "RelayGraph", "RelayNode", "ScenarioParams", "ScenarioProblem",
    "ValidationError", "admissible_semi_major_axes", "aggregate_cov",
    "average_per_device_aoi", "best_path_aoi", "build_relay_graph",
    "coverage_report", "covers", "crowding_distance", "decode",
    "default_population_size", "dominates", "ecef_from_eci",
    "ecef_from_geodetic", "eci_from_ecef", "eci_from_lce", "elevation_angle",
    "encode", "evaluate", "evaluate_constellation", "evolve",
    "fast_nondominated_sort", "fibonacci_points", "genome_bounds",
    "geo_position_eci", "gmst_hours", "halo_position_lce",
    "instantaneous_cov", "join_genome", "kepler_position_lce", "lce_frame",
    "link_failure_prob", "los_clear", "make_problem", "moon_center_eci",
    "ordinary_period", "path_metrics", "polynomial_mutation", "region_points",
    "rot_x", "rot_z", "sbx_crossover", "semi_major_axis_for_period",
    "simulate_aoi_discrete", "snapshot_at", "split_genome", "visible_mask",
    "walker_constellation",
]
