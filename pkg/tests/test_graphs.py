"""Tests for the graph core: construction, neighborhoods, WL, unfolding signatures and JSON."""

import json

import numpy as np
import pytest

from dropgnn.errors import EnumerationLimitError, GraphError
from dropgnn.graphs.core import (
    Graph,
    d_hop_neighborhood,
    disjoint_union,
    induced_neighborhood,
    relabel,
)
from dropgnn.graphs.families import (
    complete_graph,
    cycle_graph,
    cycles_union,
    path_graph,
    prism_graph,
    star_graph,
)
from dropgnn.graphs.io import graph_from_json, graph_to_json, load_graph, save_graph
from dropgnn.graphs.unfolding import unfolding_signature
from dropgnn.graphs.wl import isomorphic_small, wl_distinguishable, wl_refine


class TestGraphConstruction:
    def test_default_features_are_ones(self):
        g = path_graph(3)
        assert g.features.shape == (3, 1)
        assert np.all(g.features == 1.0)

    def test_features_are_read_only(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            g.features[0, 0] = 5.0

    def test_rejects_self_loop(self):
        with pytest.raises(GraphError, match="self-loop"):
            Graph.from_edges(2, [(0, 0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(GraphError, match="duplicate"):
            Graph.from_edges(2, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphError):
            Graph.from_edges(2, [(0, 2)])

    def test_rejects_bad_feature_shape(self):
        with pytest.raises(GraphError, match="features"):
            Graph.from_edges(3, [(0, 1)], features=np.ones((2, 1)))

    def test_ports_must_be_permutations(self):
        ports = {(0, 1): 0, (1, 0): 0, (1, 2): 0, (2, 1): 0}
        with pytest.raises(GraphError, match="permutation"):
            path_graph(3).with_ports(ports)

    def test_ports_must_cover_every_direction(self):
        with pytest.raises(GraphError):
            path_graph(2).with_ports({(0, 1): 0})

    def test_port_lookup(self):
        g = path_graph(3).with_ports({(0, 1): 0, (1, 0): 1, (1, 2): 0, (2, 1): 0})
        assert g.port(1, 0) == 1
        with pytest.raises(GraphError, match="not an edge"):
            g.port(0, 2)

    def test_edges_and_degrees(self):
        g = star_graph(3)
        assert g.edges() == [(0, 1), (0, 2), (0, 3)]
        assert g.degrees().tolist() == [3, 1, 1, 1]
        assert g.num_edges == 3

    def test_check_node(self):
        with pytest.raises(GraphError, match="out of range"):
            cycle_graph(4).neighbors(4)


class TestRelabelAndUnion:
    def test_relabel_moves_features(self):
        g = path_graph(3).with_features(np.array([[1.0], [2.0], [3.0]]))
        h = relabel(g, [2, 1, 0])
        assert h.features[:, 0].tolist() == [3.0, 2.0, 1.0]
        assert h.edges() == [(0, 1), (1, 2)]

    def test_relabel_rejects_non_permutation(self):
        with pytest.raises(GraphError):
            relabel(path_graph(3), [0, 0, 1])

    def test_disjoint_union_shifts_ids(self):
        g = disjoint_union([cycle_graph(3), path_graph(2)])
        assert g.node_count == 5
        assert (3, 4) in g.edges()
        assert g.num_edges == 4


class TestNeighborhood:
    def test_cycle_depth_two(self):
        hood = d_hop_neighborhood(cycle_graph(8), 0, 2)
        assert hood.nodes == (0, 1, 7, 2, 6)
        assert hood.gamma == 4
        assert set(hood.edges) == {(0, 1), (0, 7), (1, 2), (6, 7)}

    def test_excludes_edges_between_outer_nodes(self):
        hood = d_hop_neighborhood(complete_graph(3), 0, 1)
        assert set(hood.edges) == {(0, 1), (0, 2)}

    def test_depth_zero_is_center_only(self):
        hood = d_hop_neighborhood(cycle_graph(5), 2, 0)
        assert hood.nodes == (2,)
        assert hood.gamma == 0
        assert hood.others == ()

    def test_negative_depth(self):
        with pytest.raises(ValueError):
            d_hop_neighborhood(cycle_graph(4), 0, -1)

    def test_induced_neighborhood_puts_center_first(self):
        sub, nodes = induced_neighborhood(cycle_graph(8), 3, 1)
        assert nodes[0] == 3
        assert sub.node_count == 3
        assert sorted(sub.edges()) == [(0, 1), (0, 2)]


class TestWeisfeilerLehman:
    def test_regular_graph_single_color(self):
        assert wl_refine(cycle_graph(6), 3).num_colors == 1

    def test_path_refines(self):
        assert wl_refine(path_graph(5), 2).num_colors == 3

    def test_two_cycles_vs_one(self):
        assert not wl_distinguishable(cycles_union([8, 8]), cycle_graph(16))

    def test_cubes_vs_prism(self):
        cubes = disjoint_union([prism_graph(4), prism_graph(4)])
        assert not wl_distinguishable(cubes, prism_graph(8))

    def test_triangle_vs_path(self):
        assert wl_distinguishable(complete_graph(3), path_graph(3))

    def test_features_matter(self):
        g = cycle_graph(4)
        h = g.with_features(np.array([[1.0], [1.0], [1.0], [2.0]]))
        assert wl_distinguishable(g, h)

    def test_isomorphic_small(self):
        g = cycle_graph(6)
        assert isomorphic_small(g, relabel(g, [3, 4, 5, 0, 1, 2]))
        cubes = disjoint_union([prism_graph(4), prism_graph(4)])
        assert not isomorphic_small(cubes, prism_graph(8))

    def test_isomorphism_guard(self):
        with pytest.raises(EnumerationLimitError):
            isomorphic_small(cycle_graph(17), cycle_graph(17))


class TestUnfoldingSignature:
    def test_cycles_agree_below_girth(self):
        assert unfolding_signature(cycle_graph(4), 0, 3) == unfolding_signature(
            cycle_graph(8), 0, 3
        )

    def test_symmetric_removals_agree(self):
        g = cycle_graph(8)
        assert unfolding_signature(g, 0, 2, removed={1}) == unfolding_signature(
            g, 0, 2, removed={7}
        )

    def test_removal_distance_matters(self):
        g = cycle_graph(8)
        assert unfolding_signature(g, 0, 2, removed={1}) != unfolding_signature(
            g, 0, 2, removed={2}
        )

    def test_center_cannot_be_removed(self):
        with pytest.raises(GraphError):
            unfolding_signature(cycle_graph(4), 0, 1, removed={0})

    def test_ports_enter_signature(self):
        g = path_graph(2)
        with_ports = g.with_ports({(0, 1): 0, (1, 0): 0})
        assert unfolding_signature(g, 0, 1) != unfolding_signature(with_ports, 0, 1)


class TestGraphJson:
    def test_save_and_load(self, tmp_path):
        g = cycle_graph(4).with_ports(
            {(0, 1): 0, (0, 3): 1, (1, 0): 1, (1, 2): 0, (2, 1): 1, (2, 3): 0, (3, 2): 0, (3, 0): 1}
        )
        path = save_graph(g, tmp_path / "g.json")
        loaded = load_graph(path)
        assert loaded.edges() == g.edges()
        assert dict(loaded.ports) == dict(g.ports)

    def test_document_is_versioned(self):
        doc = graph_to_json(path_graph(2))
        assert doc["format"] == "dropgnn.graph"
        assert doc["version"] == 1

    def test_accepts_bare_document(self):
        g = graph_from_json({"n": 3, "edges": [[0, 1], [1, 2]]})
        assert g.num_edges == 2
        assert g.feature_dim == 1

    def test_rejects_other_format(self):
        with pytest.raises(GraphError, match="format"):
            graph_from_json({"format": "dropgnn.checkpoint", "n": 1, "edges": []})

    def test_malformed_document(self):
        with pytest.raises(GraphError, match="malformed"):
            graph_from_json({"edges": []})

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_graph(tmp_path / "missing.json")

    def test_written_json_is_sorted(self, tmp_path):
        path = save_graph(path_graph(2), tmp_path / "g.json")
        keys = list(json.loads(open(path).read()))
        assert keys == sorted(keys)
