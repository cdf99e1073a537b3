"""Deterministic benchmark-space generators."""

import math

import numpy as np
import pytest

from oracles import k5_metric_distance_oracle

from widthlab import (
    GeneratorSpec,
    MAX_POINTS,
    WidthlabError,
    diameter,
    generate,
    k5_point_distance,
)


class TestSpecPlumbing:
    def test_json_round_trip(self):
        spec = GeneratorSpec("grid", {"nx": 3, "ny": 4, "spacing": 0.5})
        data = spec.to_json_dict()
        assert data == {"kind": "grid", "nx": 3, "ny": 4, "spacing": 0.5}
        assert GeneratorSpec.from_json_dict(data) == spec

    def test_plain_dict_accepted(self):
        a = generate({"kind": "grid", "nx": 3, "ny": 3, "spacing": 1.0})
        b = generate(GeneratorSpec("grid", {"nx": 3, "ny": 3, "spacing": 1.0}))
        assert a.digest() == b.digest()

    def test_unknown_kind(self):
        with pytest.raises(WidthlabError, match="unknown generator kind"):
            generate({"kind": "moebius"})

    def test_missing_parameter_is_named(self):
        with pytest.raises(WidthlabError, match="missing parameter 'spacing'"):
            generate({"kind": "grid", "nx": 3, "ny": 3})

    def test_budget_cap(self):
        with pytest.raises(WidthlabError, match=f"over the {MAX_POINTS} cap"):
            generate({"kind": "grid", "nx": 100, "ny": 100, "spacing": 1.0})

    def test_empty_space_rejected(self):
        with pytest.raises(WidthlabError, match="empty space"):
            generate({"kind": "grid", "nx": 0, "ny": 5, "spacing": 1.0})

    @pytest.mark.parametrize("spec", [
        {"kind": "grid", "nx": 7, "ny": 5, "spacing": 0.25},
        {"kind": "strip", "length": 40, "width": 3, "spacing": 1.0},
        {"kind": "torus_net", "nx": 12, "ny": 5, "spacing": 2.0},
        {"kind": "sphere_net", "count": 150, "radius": 10.0},
        {"kind": "k5", "edge_length": 10.0, "mesh_h": 1.0},
        {"kind": "tripod_product", "leg": 5.0, "mesh_h": 1.0,
         "levels": 3, "step": 1.0},
        {"kind": "tree_cross_interval", "depth": 2, "branching": 2,
         "edge_length": 1.0, "mesh_h": 0.5, "levels": 4, "step": 0.5},
        {"kind": "clusters", "count": 3, "size": 5, "diam": 1.0,
         "separation": 10.0},
    ])
    def test_regeneration_is_identical(self, spec):
        assert generate(spec).digest() == generate(spec).digest()


class TestGridAndStrip:
    def test_grid_counts_and_metric(self):
        space = generate({"kind": "grid", "nx": 4, "ny": 3, "spacing": 2.0})
        assert space.size == 12
        assert space.mesh_h == 2.0
        # ids are x-major: (i, j) -> i * ny + j
        assert space.dist[0, 1] == 2.0          # (0,0) to (0,1)
        assert space.dist[0, 3] == 2.0          # (0,0) to (1,0)
        assert space.dist[0, 4] == pytest.approx(2.0 * math.sqrt(2))
        assert diameter(space) == pytest.approx(2.0 * math.hypot(3, 2))

    def test_strip_is_a_thin_grid(self):
        strip = generate({"kind": "strip", "length": 40, "width": 3,
                          "spacing": 1.0})
        grid = generate({"kind": "grid", "nx": 40, "ny": 3, "spacing": 1.0})
        assert strip.digest() == grid.digest()
        assert strip.size == 120


class TestTorusNet:
    def test_wraparound(self):
        space = generate({"kind": "torus_net", "nx": 10, "ny": 4,
                          "spacing": 1.0})
        assert space.size == 40
        # (0,0) to (9,0): one step around, not nine across
        assert space.dist[0, 9 * 4] == 1.0
        assert space.dist[0, 5 * 4] == 5.0      # true antipode in x
        assert space.dist[0, 2] == 2.0          # (0,0)-(0,2) wraps to 2
        assert diameter(space) == pytest.approx(math.hypot(5, 2))

    def test_symmetry_of_construction(self):
        space = generate({"kind": "torus_net", "nx": 6, "ny": 6,
                          "spacing": 0.5})
        assert np.array_equal(space.dist, space.dist.T)


class TestSphereNet:
    def test_counts_and_scale(self):
        space = generate({"kind": "sphere_net", "count": 300, "radius": 10.0})
        assert space.size == 300
        # geodesic distances live on [0, pi * radius]
        assert space.dist.max() <= math.pi * 10.0 + 1e-9
        assert diameter(space) > 0.9 * math.pi * 10.0
        # a 300-point net on a sphere of circumference ~63 is fine-grained
        assert space.mesh_h < 3.0

    def test_radius_scales_linearly(self):
        base = generate({"kind": "sphere_net", "count": 64, "radius": 1.0})
        scaled = generate({"kind": "sphere_net", "count": 64, "radius": 5.0})
        assert np.allclose(scaled.dist, 5.0 * base.dist)


class TestK5Net:
    def test_point_count(self):
        # 5 vertices + 10 edges with 9 interior points each
        space = generate({"kind": "k5", "edge_length": 10.0, "mesh_h": 1.0})
        assert space.size == 95

    def test_matches_route_formula(self):
        space = generate({"kind": "k5", "edge_length": 10.0, "mesh_h": 1.0})
        for u in range(5):
            for v in range(u + 1, 5):
                assert space.dist[u, v] == pytest.approx(10.0)
        got = k5_point_distance(10.0, (0, 1), 0.3, (2, 3), 0.6)
        want = k5_metric_distance_oracle(10.0, (0, 1), 0.3, (2, 3), 0.6)
        assert got == pytest.approx(want)


class TestProducts:
    def test_tripod_product_shape(self):
        space = generate({"kind": "tripod_product", "leg": 5.0, "mesh_h": 1.0,
                          "levels": 3, "step": 1.0})
        base_size = 16  # center + 3 legs x 5 points
        assert space.size == base_size * 3
        # level-major ids: the same base point one level up is step away
        assert space.dist[0, base_size] == 1.0
        assert space.dist[0, 2 * base_size] == 2.0

    def test_sup_metric(self):
        space = generate({"kind": "tree_cross_interval", "depth": 1,
                          "branching": 2, "edge_length": 4.0, "mesh_h": 1.0,
                          "levels": 3, "step": 1.5})
        base_size = 9  # root + 2 children, each edge subdivided in 4
        assert space.size == 27
        d_base = space.dist[0, 1]
        assert space.dist[0, 1 + base_size] == max(d_base, 1.5)
        assert space.dist[0, 1 + 2 * base_size] == max(d_base, 3.0)
        assert space.mesh_h == 1.5

    def test_tree_depth_grows_leaves(self):
        shallow = generate({"kind": "tree_cross_interval", "depth": 1,
                            "branching": 3, "edge_length": 1.0, "mesh_h": 0.5,
                            "levels": 1, "step": 1.0})
        deep = generate({"kind": "tree_cross_interval", "depth": 2,
                         "branching": 3, "edge_length": 1.0, "mesh_h": 0.5,
                         "levels": 1, "step": 1.0})
        assert deep.size > shallow.size


class TestClusters:
    def test_layout(self):
        space = generate({"kind": "clusters", "count": 2, "size": 8,
                          "diam": 1.0, "separation": 400.0})
        assert space.size == 16
        assert space.mesh_h == pytest.approx(1.0 / 7.0)
        assert diameter(space, range(8)) == pytest.approx(1.0)
        assert space.dist[7, 8] == pytest.approx(399.0)

    def test_size_validation(self):
        with pytest.raises(WidthlabError, match="size >= 2"):
            generate({"kind": "clusters", "count": 2, "size": 1,
                      "diam": 1.0, "separation": 10.0})

    def test_separation_validation(self):
        with pytest.raises(WidthlabError, match="must exceed"):
            generate({"kind": "clusters", "count": 2, "size": 4,
                      "diam": 5.0, "separation": 5.0})
