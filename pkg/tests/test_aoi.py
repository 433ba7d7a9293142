"""Tests for relay-graph construction and AoI evaluation."""

import math

import numpy as np
import pytest

from oracles import enumerate_paths

from cislunar_relay.aoi import (
    AOI_UNREACHABLE,
    GROUP_EGS,
    GROUP_EML1,
    GROUP_EML2,
    GROUP_GEO,
    GROUP_ORDINARY,
    GROUP_SOURCE,
    LinkModel,
    NetworkSnapshot,
    PathMetrics,
    RelayNode,
    average_per_device_aoi,
    best_path_aoi,
    build_relay_graph,
    link_failure_prob,
    path_average_aoi,
    path_metrics,
    simulate_aoi_discrete,
    suffix_paths,
)
from cislunar_relay.errors import ValidationError
from cislunar_relay.frames import Epoch

MOON = np.array([384400.0, 0.0, 0.0])
EGS_NEAR = np.array([6371.0, 0.0, 0.0])
EGS_FAR = np.array([-6371.0, 0.0, 0.0])


def node(nid, group, pos):
    return RelayNode(nid, group, np.asarray(pos, dtype=float))


def snap(*nodes, moon=MOON):
    return NetworkSnapshot(Epoch(0.0), tuple(nodes), moon)


def metrics_for(p_success, delay):
    return PathMetrics(1, 0.0, p_success, delay, 0.0)


class TestLinkModel:
    def test_t_tran_default(self):
        assert LinkModel().t_tran() == pytest.approx(0.4096, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValidationError):
            LinkModel(ber_other=1.0)
        with pytest.raises(ValidationError):
            LinkModel(packet_bits=0)
        with pytest.raises(ValidationError):
            LinkModel(sigma=0.0)


class TestLinkFailureProb:
    def test_perfect_channel(self):
        model = LinkModel(ber_lunar_to_earth_segment=0.0, ber_other=0.0)
        assert link_failure_prob(GROUP_EML1, GROUP_GEO, model) == 0.0

    def test_long_haul_value(self):
        # independent arithmetic: 1-(1-1e-5)^8192 via expm1/log1p
        expect = -math.expm1(8192 * math.log1p(-1e-5))
        got = link_failure_prob(GROUP_EML1, GROUP_GEO, LinkModel())
        assert got == pytest.approx(expect, rel=1e-9)
        assert got == pytest.approx(0.07865, abs=5e-6)

    def test_short_haul_value(self):
        expect = -math.expm1(8192 * math.log1p(-1e-6))
        got = link_failure_prob(GROUP_SOURCE, GROUP_EML2, LinkModel())
        assert got == pytest.approx(expect, rel=1e-9)
        assert got == pytest.approx(0.008159, abs=5e-7)

    def test_class_assignment(self):
        model = LinkModel()
        long_haul = link_failure_prob(GROUP_EML1, GROUP_GEO, model)
        for gu in (GROUP_SOURCE, GROUP_EML2, GROUP_ORDINARY, GROUP_EML1):
            for gv in (GROUP_GEO, GROUP_EGS):
                assert link_failure_prob(gu, gv, model) == long_haul
        short_haul = link_failure_prob(GROUP_SOURCE, GROUP_EML2, model)
        assert link_failure_prob(GROUP_ORDINARY, GROUP_EML1, model) == short_haul
        assert link_failure_prob(GROUP_GEO, GROUP_EGS, model) == short_haul


class TestPathMetrics:
    def test_single_unit_hop(self):
        model = LinkModel(ber_lunar_to_earth_segment=0.0, ber_other=0.0)
        path = [node("a", GROUP_EML2, [0, 0, 0]), node("b", GROUP_ORDINARY, [3000.0, 0, 0])]
        m = path_metrics(path, model)
        assert m.n_hops == 1
        assert m.d_total_km == 3000.0
        assert m.p_success == 1.0
        assert m.delay == pytest.approx(1.4096, rel=1e-12)

    def test_moon_earth_hop_delay(self):
        path = [node("a", GROUP_EML1, MOON), node("b", GROUP_EGS, [0.0, 0, 0])]
        m = path_metrics(path, LinkModel())
        assert m.d_total_km == 384400.0
        assert m.delay - m.n_hops * LinkModel().t_tran() == pytest.approx(
            128.13333333333333, rel=1e-12)

    def test_moon_earth_hop_average_aoi(self):
        path = [node("a", GROUP_EML1, MOON), node("b", GROUP_EGS, [0.0, 0, 0])]
        m = path_metrics(path, LinkModel())
        assert m.avg_aoi == pytest.approx(129.0856180440373, rel=1e-9)

    def test_success_prob_multiplies(self):
        model = LinkModel()
        path = [
            node("a", GROUP_SOURCE, [0.0, 0, 0]),
            node("b", GROUP_ORDINARY, [100.0, 0, 0]),
            node("c", GROUP_GEO, [200.0, 0, 0]),
        ]
        q_short = 1.0 - link_failure_prob(GROUP_SOURCE, GROUP_ORDINARY, model)
        q_long = 1.0 - link_failure_prob(GROUP_ORDINARY, GROUP_GEO, model)
        assert path_metrics(path, model).p_success == pytest.approx(
            q_short * q_long, rel=1e-14)

    def test_too_short_path(self):
        with pytest.raises(ValidationError):
            path_metrics([node("a", GROUP_EML2, [0.0, 0, 0])], LinkModel())


class TestPathAverageAoi:
    def test_perfect_channel(self):
        assert path_average_aoi(metrics_for(1.0, 10.0), 2.0) == 11.0

    def test_half_success(self):
        assert path_average_aoi(metrics_for(0.5, 0.0), 1.0) == 1.0

    def test_never_succeeds(self):
        with pytest.raises(ValidationError):
            path_average_aoi(metrics_for(0.0, 5.0), 1.0)

    def test_monotone_in_reliability_and_distance(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            p = float(rng.uniform(0.1, 1.0))
            t = float(rng.uniform(0.0, 300.0))
            assert path_average_aoi(metrics_for(p, t), 1.0) >= path_average_aoi(
                metrics_for(min(1.0, p + 0.05), t), 1.0)
            assert path_average_aoi(metrics_for(p, t + 1.0), 1.0) > path_average_aoi(
                metrics_for(p, t), 1.0)


class TestBuildRelayGraph:
    def test_same_group_never_linked(self):
        s = snap(node("a", GROUP_ORDINARY, MOON + [0, 3000, 0]),
                 node("b", GROUP_ORDINARY, MOON + [0, -3000, 0]))
        assert build_relay_graph(s).adjacency == {}

    def test_group_skip_allowed(self):
        s = snap(node("a", GROUP_ORDINARY, MOON + [0, 8000, 0]),
                 node("geo", GROUP_GEO, [42164.0, 0, 0]))
        assert build_relay_graph(s).adjacency == {0: (1,)}

    def test_source_restricted_to_lunar_relays(self):
        s = snap(node("src", GROUP_SOURCE, MOON - [1737.0, 0, 0]),
                 node("sat", GROUP_EML1, MOON - [3000.0, 0, 0]),
                 node("geo", GROUP_GEO, [42164.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_NEAR))
        adj = build_relay_graph(s).adjacency
        assert adj[0] == (1,)  # not the GEO or EGS despite clear sight lines

    def test_source_elevation_gate(self):
        src = node("src", GROUP_SOURCE, MOON - [1737.0, 0, 0])
        above = node("sat", GROUP_EML1, MOON - [3000.0, 0, 0])
        behind = node("sat", GROUP_EML1, MOON + [3000.0, 0, 0])
        assert build_relay_graph(snap(src, above)).adjacency == {0: (1,)}
        assert build_relay_graph(snap(src, behind)).adjacency == {}

    def test_egs_elevation_gate(self):
        sat = node("sat", GROUP_EML1, MOON - [3000.0, 0, 0])
        assert build_relay_graph(snap(sat, node("egs", GROUP_EGS, EGS_NEAR))
                                 ).adjacency == {0: (1,)}
        assert build_relay_graph(snap(sat, node("egs", GROUP_EGS, EGS_FAR))
                                 ).adjacency == {}

    def test_moon_blocks_relay_link(self):
        # satellite hidden behind the moon as seen from GEO
        s = snap(node("sat", GROUP_EML2, MOON + [3000.0, 0, 0]),
                 node("geo", GROUP_GEO, [42164.0, 0, 0]))
        assert build_relay_graph(s).adjacency == {}

    def test_require_geo_relay_drops_direct_downlink(self):
        s = snap(node("sat", GROUP_EML1, MOON - [3000.0, 0, 0]),
                 node("geo", GROUP_GEO, [42164.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_NEAR))
        free = build_relay_graph(s).adjacency
        forced = build_relay_graph(s, require_geo_relay=True).adjacency
        assert free[0] == (1, 2)
        assert forced[0] == (1,)
        assert forced[1] == (2,)

    def test_dag_by_groups(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            nodes = _random_nodes(rng)
            graph = build_relay_graph(snap(*nodes))
            for u, succ in graph.adjacency.items():
                for v in succ:
                    assert nodes[u].group < nodes[v].group


def _random_nodes(rng, n_relays=None):
    """A source plus a random mix of relays and ground stations."""
    nodes = [node("src", GROUP_SOURCE,
                  MOON + 1737.0 * _unit(rng))]
    n_relays = int(rng.integers(2, 10)) if n_relays is None else n_relays
    for i in range(n_relays):
        group = int(rng.integers(1, 6))
        if group in (GROUP_EML2, GROUP_ORDINARY, GROUP_EML1):
            pos = MOON + rng.uniform(2500.0, 60000.0) * _unit(rng)
        elif group == GROUP_GEO:
            pos = 42164.0 * _unit(rng)
        else:
            pos = 6371.0 * _unit(rng)
        nodes.append(node(f"n{i}", group, pos))
    return nodes


def _unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


class TestBestPathAoi:
    def test_no_path_sentinel(self):
        s = snap(node("src", GROUP_SOURCE, MOON + [1737.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_FAR))
        graph = build_relay_graph(s)
        assert best_path_aoi(graph, "src", LinkModel()) == AOI_UNREACHABLE

    def test_single_path_value(self):
        model = LinkModel()
        nodes = [node("src", GROUP_SOURCE, MOON - [1737.0, 0, 0]),
                 node("sat", GROUP_EML1, MOON - [3000.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_NEAR)]
        s = snap(*nodes)
        graph = build_relay_graph(s)
        assert graph.adjacency == {0: (1,), 1: (2,)}
        expect = path_average_aoi(path_metrics(nodes, model), model.sigma)
        assert best_path_aoi(graph, "src", model) == expect

    def test_matches_brute_force_enumeration(self):
        model = LinkModel()
        t_tran = model.t_tran()
        rng = np.random.default_rng(41)
        checked_paths = 0
        for _ in range(1000):
            nodes = _random_nodes(rng)
            graph = build_relay_graph(snap(*nodes))
            adjacency = {u: list(vs) for u, vs in graph.adjacency.items()}
            targets = {i for i, n in enumerate(nodes) if n.group == GROUP_EGS}
            best = AOI_UNREACHABLE
            for trail in enumerate_paths(adjacency, 0, targets):
                d = sum(float(np.linalg.norm(nodes[a].position_eci
                                             - nodes[b].position_eci))
                        for a, b in zip(trail, trail[1:]))
                p = 1.0
                for a, b in zip(trail, trail[1:]):
                    lunar_a = nodes[a].group <= GROUP_EML1
                    lunar_b = nodes[b].group <= GROUP_EML1
                    ber = 1e-5 if lunar_a != lunar_b else 1e-6
                    p *= (1.0 - ber) ** 8192
                aoi = 1.0 / (2.0 * p) + d / 3000.0 + (len(trail) - 1) * t_tran
                best = min(best, aoi)
                checked_paths += 1
            assert best_path_aoi(graph, "src", model) == pytest.approx(best, rel=1e-12)
        assert checked_paths > 2000

    def test_extra_relay_never_hurts(self):
        model = LinkModel()
        rng = np.random.default_rng(43)
        for _ in range(200):
            nodes = _random_nodes(rng)
            before = best_path_aoi(build_relay_graph(snap(*nodes)), "src", model)
            extra = node("extra", int(rng.integers(1, 4)),
                         MOON + rng.uniform(2500.0, 40000.0) * _unit(rng))
            after = best_path_aoi(build_relay_graph(snap(*nodes, extra)), "src", model)
            assert after <= before + 1e-12

    def test_straight_line_lower_bound(self):
        model = LinkModel()
        rng = np.random.default_rng(47)
        for _ in range(200):
            nodes = _random_nodes(rng)
            best = best_path_aoi(build_relay_graph(snap(*nodes)), "src", model)
            if best >= AOI_UNREACHABLE:
                continue
            floor = min(
                float(np.linalg.norm(nodes[0].position_eci - n.position_eci)) / 3000.0
                for n in nodes if n.group == GROUP_EGS)
            assert best >= floor

    def test_unknown_source(self):
        graph = build_relay_graph(snap(node("a", GROUP_EML2, MOON + [0, 3000, 0])))
        with pytest.raises(ValidationError):
            best_path_aoi(graph, "nope", LinkModel())


class TestAveragePerDevice:
    def test_degenerate_mean(self):
        model = LinkModel()
        nodes = [node("src", GROUP_SOURCE, MOON - [1737.0, 0, 0]),
                 node("sat", GROUP_EML1, MOON - [3000.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_NEAR)]
        s = snap(*nodes)
        single = best_path_aoi(build_relay_graph(s), "src", model)
        assert average_per_device_aoi([s], ["src"], model) == single

    def test_all_unreachable(self):
        s = snap(node("src", GROUP_SOURCE, MOON + [1737.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_NEAR))
        assert average_per_device_aoi([s, s, s], ["src"], LinkModel()) == 2000.0

    def test_mean_over_sources_and_snapshots(self):
        model = LinkModel()
        reach = [node("src", GROUP_SOURCE, MOON - [1737.0, 0, 0]),
                 node("cut", GROUP_SOURCE, MOON + [1737.0, 0, 0]),
                 node("sat", GROUP_EML1, MOON - [3000.0, 0, 0]),
                 node("egs", GROUP_EGS, EGS_NEAR)]
        s = snap(*reach)
        good = best_path_aoi(build_relay_graph(s), "src", model)
        expect = (good + 2000.0) / 2.0
        assert average_per_device_aoi([s, s], ["src", "cut"], model) == pytest.approx(
            expect, rel=1e-14)

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValidationError):
            average_per_device_aoi([], ["src"], LinkModel())


class TestSuffixPaths:
    def test_full_ladder_counts(self):
        groups = [1, 2, 3, 4, 5, 5]
        paths = suffix_paths(groups)
        assert len(paths) == 28
        assert len(suffix_paths(groups, require_geo_relay=True)) == 14
        for p in suffix_paths(groups, require_geo_relay=True):
            assert 3 in p  # every forced path passes through the GEO node

    def test_matches_oracle_enumeration(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            groups = [int(rng.integers(1, 6)) for _ in range(int(rng.integers(1, 8)))]
            adjacency = {
                u: [v for v, gv in enumerate(groups) if gv > groups[u]]
                for u in range(len(groups))
            }
            targets = {i for i, g in enumerate(groups) if g == 5}
            expect = set()
            for head, g in enumerate(groups):
                if g in (1, 2, 3):
                    expect.update(tuple(p) for p in
                                  enumerate_paths(adjacency, head, targets))
            assert set(suffix_paths(groups)) == expect

    def test_paths_end_at_ground(self):
        for p in suffix_paths([2, 4, 5]):
            assert p[-1] == 2


class TestDiscreteSimulator:
    def test_perfect_channel_no_delay(self):
        assert simulate_aoi_discrete(metrics_for(1.0, 0.0), 1, 10_000, 0) == 0.0

    def test_perfect_channel_sawtooth(self):
        got = simulate_aoi_discrete(metrics_for(1.0, 10.0), 4, 200_000, 1)
        assert got == 11.5

    def test_perfect_channel_other_shape(self):
        got = simulate_aoi_discrete(metrics_for(1.0, 7.0), 5, 100_000, 2)
        assert got == 9.0

    def test_lossy_channel_stationary_mean(self):
        # sampled at slot boundaries the stationary mean is
        # T + sigma*(2-p)/(2p) - 1/2
        for p, sigma, t, seed in ((0.5, 1, 50.0, 3), (0.7, 3, 60.0, 4)):
            got = simulate_aoi_discrete(metrics_for(p, t), sigma, 1_000_000, seed)
            expect = t + sigma * (2.0 - p) / (2.0 * p) - 0.5
            assert got == pytest.approx(expect, rel=5e-3)

    def test_close_to_renewal_reward_form(self):
        for p, sigma, t, seed in ((0.5, 1, 50.0, 5), (0.9, 2, 128.0, 6)):
            got = simulate_aoi_discrete(metrics_for(p, t), sigma, 1_000_000, seed)
            renewal = sigma * (2.0 - p) / (2.0 * p) + t
            assert abs(got - renewal) / renewal < 0.02

    def test_seed_reproducibility(self):
        a = simulate_aoi_discrete(metrics_for(0.5, 3.0), 2, 50_000, 123)
        b = simulate_aoi_discrete(metrics_for(0.5, 3.0), 2, 50_000, 123)
        assert a == b

    def test_validation(self):
        with pytest.raises(ValidationError):
            simulate_aoi_discrete(metrics_for(1.0, 0.0), 0, 100, 0)
        with pytest.raises(ValidationError):
            simulate_aoi_discrete(metrics_for(1.0, 0.0), 1, 0, 0)
        with pytest.raises(ValidationError):
            simulate_aoi_discrete(metrics_for(0.0, 0.0), 1, 100, 0)


class TestSnapshotValidation:
    def test_bad_group(self):
        with pytest.raises(ValidationError):
            snap(node("x", 7, MOON))

    def test_non_finite_position(self):
        with pytest.raises(ValidationError):
            snap(node("x", GROUP_GEO, [np.nan, 0, 0]))
