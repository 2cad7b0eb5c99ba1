"""Tangencies, slices, graph evidence and the trichotomy classifier."""

import math

import numpy as np
import pytest

from hxr.fixtures import ConvexGraph, GeodesicSphere, HalfPlaneGraph, VerticalPlanePatch, standard_fixtures
from hxr.hyperbolic import HPoint, geodesic_from, half_space
from hxr.parabolic import ParabolicExample, ProfileParams, critical_time
from hxr.product import VerticalFoliation
from hxr.reporting import dumps
from hxr.sweep import (
    PreconditionError,
    SweepConfig,
    choose_p0,
    component_slice_forms,
    find_tangencies,
    frontier_depth,
    level_points,
    slice,
    sweep_classify,
    verify_vertical_graph,
)

PARAMS = ProfileParams(-1.0, -1.0, 0.0, math.exp(-1.0))


@pytest.fixture(scope="module")
def samples():
    return {name: surf.sample() for name, surf in standard_fixtures(2).items()}


def test_sphere_tangency_is_the_equator(samples):
    S = samples["sphere"]
    loci = find_tangencies(S)
    assert len(loci) == 1
    locus = loci[0]
    assert np.max(locus.measure) < 1e-6
    # the equator of a sphere centred at height 0
    assert np.max(np.abs(locus.points[:, -1])) < 1e-6


def test_example_tangency_is_the_critical_line(samples):
    S = samples["example"]
    loci = find_tangencies(S)
    assert len(loci) == 1
    assert np.allclose(loci[0].params[:, -1], critical_time(PARAMS), atol=1e-8)
    p0, _ = choose_p0(S, loci)
    # deepest tangency: near the middle of the translation range
    assert abs(p0[0]) < 5.0


def test_graph_has_no_tangency(samples):
    assert find_tangencies(samples["graph"]) == []


def test_frontier_depth(samples):
    S = samples["example"]
    depth = frontier_depth(S)
    assert np.all(depth[S.frontier] == 0)
    assert np.all(depth[~S.frontier] >= 1)
    assert np.all(np.isinf(frontier_depth(samples["sphere"])))


def test_sphere_slices_are_closed_loops(samples):
    S = samples["sphere"]
    gamma = geodesic_from(HPoint(half_space(2), [0.0, 1.0]), [1.0, 0.0])
    fol = VerticalFoliation(gamma)
    for t in (-0.2, 0.0, 0.25):
        sc = slice(S, fol, t)
        assert len(sc.components) == 1
        assert sc.components[0].closed_loop and not sc.components[0].touches_frontier
    assert slice(S, fol, 3.0).empty


def test_level_points_lie_on_the_leaf(samples):
    S = samples["example"]
    gamma = geodesic_from(HPoint(half_space(2), [0.0, 1.0]), [1.0, 0.0])
    fol = VerticalFoliation(gamma)
    f = fol.leaf_coordinate(S.points)
    params = level_points(S, f, 0.1, np.arange(S.size), fol)
    assert len(params) > 0
    assert np.max(np.abs(fol.leaf_coordinate(S.source.point(params)) - 0.1)) < 1e-12


def test_slice_forms_positive_on_convex_fixtures(samples):
    gamma = geodesic_from(HPoint(half_space(2), [0.0, 1.0]), [1.0, 0.0])
    fol = VerticalFoliation(gamma)
    for name in ("sphere", "graph", "example"):
        S = samples[name]
        sc = slice(S, fol, 0.05)
        for comp in sc.components:
            sf = component_slice_forms(S, fol, 0.05, comp.vertices)
            assert sf.errors == []
            assert sf.eigenvalues and min(sf.eigenvalues) > 1e-10


def test_graph_evidence(samples):
    ev = verify_vertical_graph(samples["graph"])
    assert ev.injective_pi and ev.convex_projection
    assert not verify_vertical_graph(samples["sphere"]).injective_pi
    assert not verify_vertical_graph(samples["example"]).injective_pi


@pytest.mark.parametrize("name,verdict,case", [
    ("sphere", "Sphere", "Case1"),
    ("graph", "VerticalGraph", "GraphNoTangency"),
    ("example", "SimpleEnd", "Case4"),
])
def test_trichotomy(samples, name, verdict, case):
    report = sweep_classify(samples[name])
    assert report.verdict == verdict, report.diagnostics
    assert report.case_label == case
    assert report.events[-1]["event"] == "verdict"
    text = dumps(report)
    assert f'"verdict": "{verdict}"' in text


def test_sphere_report_details(samples):
    report = sweep_classify(samples["sphere"])
    assert report.p1["transversality"] < 1e-3
    # p0 and p1 are antipodal tangencies on the equator
    assert abs(report.p0["point"][-1]) < 1e-6 and abs(report.p1["point"][-1]) < 1e-4


def test_example_report_details(samples):
    report = sweep_classify(samples["example"])
    assert np.allclose(report.theta.direction, [0.0, 1.0], atol=1e-3)
    assert report.ends["diameter_doubled"] < report.ends["diameter"]
    assert report.ends["hyperplanes"]["passed"]


def test_three_dimensional_fixtures():
    expected = {"sphere": "Sphere", "graph": "VerticalGraph", "example": "SimpleEnd"}
    for name, surf in standard_fixtures(3).items():
        assert sweep_classify(surf.sample()).verdict == expected[name]


def test_flat_patch_fails_precondition():
    S = VerticalPlanePatch(2).sample()
    with pytest.raises(PreconditionError) as info:
        sweep_classify(S)
    assert info.value.witness is not None
    assert info.value.min_eigenvalue <= 1e-10


def test_half_plane_control_is_rejected():
    # the half-plane control is a piece of a horizontal slice: totally geodesic, not convex
    with pytest.raises(PreconditionError):
        sweep_classify(HalfPlaneGraph().sample())


def test_config_from_dict_ignores_unknown_keys():
    cfg = SweepConfig.from_dict({"seed": 4, "jitter": 0.3, "d_max": 20})
    assert cfg.seed == 4 and cfg.d_max == 20
    assert SweepConfig.from_dict(None) == SweepConfig()


def test_sphere_off_axis_and_small():
    surf = GeodesicSphere(2, center=[1.5, 0.4], height=2.0, radius=0.3, seed=3)
    assert sweep_classify(surf.sample()).verdict == "Sphere"


def test_graph_with_jitter_and_translation():
    surf = ConvexGraph(2, jitter=0.1, seed=2).translated([3.0])
    assert sweep_classify(surf.sample()).verdict == "VerticalGraph"


def test_example_other_parameters():
    ex = ParabolicExample(ProfileParams(-0.5, -2.0, 0.1, 0.4), 2)
    assert sweep_classify(ex.sample()).verdict == "SimpleEnd"
