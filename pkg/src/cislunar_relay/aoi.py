"""Relay-network graph construction and Age of Information evaluation.

Nodes fall into six ordered groups — 0 lunar surface sources, 1 EML2 halo,
2 ordinary lunar orbiters, 3 EML1 halo, 4 GEO, 5 Earth ground stations —
and packets may hop only from a group to a strictly higher-numbered one,
so every relay graph is a DAG with at most five hops.  The per-device AoI
of a path combines a success-probability penalty with propagation and
per-hop transmission delay; a device's AoI at an instant is the best value
over all currently-available paths, or a large sentinel when it is cut off.

Times are expressed in AoI units of D_unit/c seconds (0.01 s at defaults),
so a hop of exactly D_unit km costs one unit of propagation delay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import AOI_UNREACHABLE, C_KM_S, R_EARTH_KM, R_MOON_KM
from .coverage import elevation_angle, los_clear
from .errors import ValidationError
from .frames import Epoch

GROUP_SOURCE = 0
GROUP_EML2 = 1
GROUP_ORDINARY = 2
GROUP_EML1 = 3
GROUP_GEO = 4
GROUP_EGS = 5

_LUNAR_GROUPS = (GROUP_EML2, GROUP_ORDINARY, GROUP_EML1)


@dataclass(frozen=True)
class LinkModel:
    """Channel and packet parameters shared by every link in the network."""

    ber_lunar_to_earth_segment: float = 1e-5
    ber_other: float = 1e-6
    packet_bits: int = 8192
    t_rate_bps: float = 2e6
    d_unit_km: float = 3000.0
    sigma: float = 1.0
    require_geo_relay: bool = False

    def __post_init__(self):
        for ber in (self.ber_lunar_to_earth_segment, self.ber_other):
            if not 0.0 <= ber < 1.0:
                raise ValidationError(f"bit error rate {ber} outside [0, 1)")
        if self.packet_bits <= 0:
            raise ValidationError("packet_bits must be positive")
        if self.t_rate_bps <= 0 or self.d_unit_km <= 0:
            raise ValidationError("rates and distance unit must be positive")
        if self.sigma <= 0:
            raise ValidationError("sigma must be positive")

    def t_tran(self) -> float:
        """Per-hop transmission delay in AoI units (D_unit/c seconds each)."""
        return (self.packet_bits / self.t_rate_bps) / (self.d_unit_km / C_KM_S)


@dataclass(frozen=True)
class RelayNode:
    id: str
    group: int
    position_eci: np.ndarray


@dataclass(frozen=True)
class NetworkSnapshot:
    epoch: Epoch
    nodes: tuple[RelayNode, ...]
    moon_center_eci: np.ndarray

    def __post_init__(self):
        for node in self.nodes:
            if node.group not in range(6):
                raise ValidationError(f"node {node.id!r} has group {node.group}")
            if not np.all(np.isfinite(node.position_eci)):
                raise ValidationError(f"node {node.id!r} has non-finite position")


def is_lunar_side(group: int) -> bool:
    return group <= GROUP_EML1


def link_failure_prob(group_u: int, group_v: int, model: LinkModel) -> float:
    """Packet loss probability p_j for a hop between the two groups.

    Links crossing from the lunar side (groups 0-3) to the earth side
    (groups 4-5) use the long-haul bit error rate; every other link uses
    the short-range one.  p_j = 1 - (1 - BER)^bits.
    """
    if is_lunar_side(group_u) != is_lunar_side(group_v):
        ber = model.ber_lunar_to_earth_segment
    else:
        ber = model.ber_other
    return 1.0 - (1.0 - ber) ** model.packet_bits


@dataclass(frozen=True)
class RelayGraph:
    snapshot: NetworkSnapshot
    adjacency: dict[int, tuple[int, ...]]  # node index -> successor indices


def _edge_allowed(u: RelayNode, v: RelayNode, require_geo_relay: bool) -> bool:
    if u.group >= v.group:
        return False
    # surface devices inject packets into the lunar relay domain only
    if u.group == GROUP_SOURCE and v.group not in _LUNAR_GROUPS:
        return False
    if require_geo_relay and u.group in _LUNAR_GROUPS and v.group == GROUP_EGS:
        return False
    return True


def build_relay_graph(
    snapshot: NetworkSnapshot,
    theta_c_deg: float = 5.0,
    occluders=None,
    require_geo_relay: bool = False,
) -> RelayGraph:
    """Directed relay graph for one instant.

    An edge u->v requires a strictly higher destination group, a line of
    sight clear of both Earth and Moon, and — at surface endpoints — the
    counterpart more than ``theta_c_deg`` above the local horizon.
    """
    if occluders is None:
        occluders = [
            (np.zeros(3), R_EARTH_KM),
            (snapshot.moon_center_eci, R_MOON_KM),
        ]
    nodes = snapshot.nodes
    adjacency: dict[int, tuple[int, ...]] = {}
    for iu, u in enumerate(nodes):
        succ = []
        for iv, v in enumerate(nodes):
            if not _edge_allowed(u, v, require_geo_relay):
                continue
            if u.group == GROUP_SOURCE:
                r_u = u.position_eci - snapshot.moon_center_eci
                if elevation_angle(r_u, v.position_eci - u.position_eci) <= theta_c_deg:
                    continue
            if v.group == GROUP_EGS:
                r_v = v.position_eci
                if elevation_angle(r_v, u.position_eci - v.position_eci) <= theta_c_deg:
                    continue
            if not los_clear(u.position_eci, v.position_eci, occluders):
                continue
            succ.append(iv)
        if succ:
            adjacency[iu] = tuple(succ)
    return RelayGraph(snapshot, adjacency)


@dataclass(frozen=True)
class PathMetrics:
    n_hops: int
    d_total_km: float
    p_success: float
    delay: float  # T(P) = T_pro + n*T_tran, AoI units
    avg_aoi: float  # sigma/(2 p^s) + T(P) at the model's sigma


def path_metrics(nodes, model: LinkModel) -> PathMetrics:
    """Distance, reliability, and delay along a node sequence."""
    nodes = list(nodes)
    if len(nodes) < 2:
        raise ValidationError("a path needs at least two nodes")
    d_total = 0.0
    p_success = 1.0
    for u, v in zip(nodes, nodes[1:]):
        d_total += float(np.linalg.norm(v.position_eci - u.position_eci))
        p_success *= 1.0 - link_failure_prob(u.group, v.group, model)
    n = len(nodes) - 1
    delay = d_total / model.d_unit_km + n * model.t_tran()
    return PathMetrics(n, d_total, p_success, delay,
                       path_average_aoi_from(p_success, delay, model.sigma))


def path_average_aoi_from(p_success: float, delay: float, sigma: float) -> float:
    if p_success <= 0.0:
        raise ValidationError("path never succeeds; AoI undefined")
    return sigma / (2.0 * p_success) + delay


def path_average_aoi(metrics: PathMetrics, sigma: float) -> float:
    """Steady-state average AoI of a single path at generation interval sigma."""
    return path_average_aoi_from(metrics.p_success, metrics.delay, sigma)


def _paths_from(graph: RelayGraph, start: int) -> list[list[int]]:
    nodes = graph.snapshot.nodes
    found = []
    stack = [(start, [start])]
    while stack:
        u, trail = stack.pop()
        if nodes[u].group == GROUP_EGS:
            found.append(trail)
            continue
        for v in graph.adjacency.get(u, ()):
            stack.append((v, trail + [v]))
    return found


def best_path_aoi(graph: RelayGraph, source_id: str, model: LinkModel,
                  sigma: float | None = None) -> float:
    """Minimum average AoI over every path from the source to any EGS.

    Paths are enumerated exhaustively (the group ladder caps them at five
    hops).  Returns the unreachable sentinel when no path exists.
    """
    if sigma is None:
        sigma = model.sigma
    nodes = graph.snapshot.nodes
    try:
        start = next(i for i, n in enumerate(nodes) if n.id == source_id)
    except StopIteration:
        raise ValidationError(f"no node with id {source_id!r}") from None
    best = AOI_UNREACHABLE
    for trail in _paths_from(graph, start):
        metrics = path_metrics([nodes[i] for i in trail], model)
        best = min(best, path_average_aoi(metrics, sigma))
    return best


def average_per_device_aoi(snapshots, source_ids, model: LinkModel,
                           sigma: float | None = None,
                           theta_c_deg: float = 5.0) -> float:
    """Mean of per-source best-path AoI over snapshots and sources."""
    snapshots = list(snapshots)
    source_ids = list(source_ids)
    if not snapshots or not source_ids:
        raise ValidationError("need at least one snapshot and one source")
    total = 0.0
    for snap in snapshots:
        graph = build_relay_graph(snap, theta_c_deg,
                                  require_geo_relay=model.require_geo_relay)
        for sid in source_ids:
            total += best_path_aoi(graph, sid, model, sigma)
    return total / (len(snapshots) * len(source_ids))


def simulate_aoi_discrete(metrics: PathMetrics, sigma: int, n_slots: int,
                          rng_seed: int) -> float:
    """Empirical slot-level AoI average for a single fixed path.

    A packet is generated every ``sigma`` slots and survives end to end
    with the path's success probability; a surviving packet arriving at
    slot t resets the age to its own (slot-rounded) delay, and the age
    grows by one each slot otherwise.  The simulation starts from the
    stationary regime by extending packet generation into the past.
    """
    if n_slots < 1:
        raise ValidationError("need at least one slot")
    if sigma < 1 or int(sigma) != sigma:
        raise ValidationError("sigma must be a positive whole number of slots")
    p = metrics.p_success
    if p <= 0.0:
        raise ValidationError("path never succeeds; age diverges")
    sigma = int(sigma)
    delay_slots = int(round(metrics.delay))
    rng = np.random.default_rng(rng_seed)

    k_pre = math.ceil(delay_slots / sigma) + int(60.0 / p) + 1
    k_post = (n_slots - 1) // sigma + 1
    gen = sigma * np.arange(-k_pre, k_post, dtype=np.int64)
    success = rng.random(gen.size) < p
    success[0] = True  # anchor so an age is defined from slot 0 on
    gen_ok = gen[success]
    arrival_ok = gen_ok + delay_slots

    slots = np.arange(n_slots, dtype=np.int64)
    last = np.searchsorted(arrival_ok, slots, side="right") - 1
    ages = slots - gen_ok[last]
    return float(ages.mean())


def suffix_paths(groups, require_geo_relay: bool = False) -> list[tuple[int, ...]]:
    """Group-increasing index paths from each lunar-side node to each EGS.

    ``groups[i]`` is the group of relay node i (1-5; sources excluded).
    Together with a first hop source->head these enumerate every possible
    source-to-EGS route, which stays small under the five-group ladder.
    """
    groups = list(groups)
    heads = [i for i, g in enumerate(groups) if g in _LUNAR_GROUPS]
    out: list[tuple[int, ...]] = []
    for head in heads:
        stack = [(head, (head,))]
        while stack:
            u, trail = stack.pop()
            for v, gv in enumerate(groups):
                if gv <= groups[u]:
                    continue
                if require_geo_relay and groups[u] in _LUNAR_GROUPS and gv == GROUP_EGS:
                    continue
                if gv == GROUP_EGS:
                    out.append(trail + (v,))
                else:
                    stack.append((v, trail + (v,)))
    return out
