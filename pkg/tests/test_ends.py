"""Accumulation at infinity and the simple-end check."""

import math

import numpy as np
import pytest

from hxr.ends import (
    accumulation_set,
    angular_diameter,
    diameter_scan,
    enlarged_accumulation,
    hyperplane_trace,
    random_hyperplanes,
    thread_count,
    verify_simple_end,
)
from hxr.fixtures import GeodesicSphere, HalfPlaneGraph
from hxr.hyperbolic import BoundaryPoint, HPoint, ball, half_space, hyperplane_through
from hxr.parabolic import ParabolicExample


@pytest.fixture(scope="module")
def example_state():
    from hxr.parabolic import ProfileParams

    ex = ParabolicExample(ProfileParams(-1.0, -1.0, 0.0, math.exp(-1.0)), 2)
    return ex, enlarged_accumulation(ex)


def test_angular_diameter_of_known_directions():
    ang = np.array([0.0, 0.04, 0.1])
    dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    assert abs(angular_diameter(dirs) - 0.1) < 1e-12
    assert angular_diameter(dirs[:1]) == 0.0


def test_example_accumulates_at_infinity(example_state):
    ex, state = example_state
    res = state.result
    assert not res.compact
    assert len(res.clusters) == 1
    theta = res.clusters[0].theta
    # the translation directions run off to the point at infinity = north pole of the ball
    assert np.allclose(theta.direction, [0.0, 1.0], atol=1e-3)
    assert res.d_max - 0.5 >= 2 * math.atanh(0.999)
    assert res.clusters[0].angular_diameter < 0.05
    assert state.surface.truncation > ex.truncation


def test_example_cluster_shrinks(example_state):
    _, state = example_state
    rows = diameter_scan(state.surface, doublings=3)
    diam = [r["diameter"] for r in rows]
    assert [r["clusters"] for r in rows] == [1, 1, 1, 1]
    assert all(b < a for a, b in zip(diam, diam[1:]))


def test_example_hyperplanes_are_bounded(example_state):
    _, state = example_state
    theta = state.result.clusters[0].theta
    planes = random_hyperplanes(state.sample, 20, np.random.default_rng(4), theta)
    assert len(planes) == 20
    assert all(Q.angular_distance_to_ideal(theta) >= 0.1 for Q in planes)
    report = verify_simple_end(state.surface, theta, planes)
    assert report.passed
    assert all(v.status == "bounded" for v in report.verdicts)


def test_hyperplane_through_theta_accumulates(example_state):
    _, state = example_state
    theta = state.result.clusters[0].theta
    # vertical planes of the half-space contain infinity in their ideal boundary
    Q = hyperplane_through(HPoint(half_space(2), [3.0, 1.0]), [1.0, 0.0])
    report = verify_simple_end(state.surface, theta, [Q])
    assert report.verdicts[0].status == "accumulates-at-theta"


def test_sphere_projection_is_compact():
    state = enlarged_accumulation(GeodesicSphere(2))
    assert state.result.compact and state.result.clusters == []


def test_half_plane_is_not_a_simple_end():
    surf = HalfPlaneGraph()
    state = enlarged_accumulation(surf)
    res = state.result
    assert len(res.clusters) == 1
    assert res.clusters[0].angular_diameter > 1.0
    theta = res.clusters[0].theta
    planes = random_hyperplanes(state.sample, 10, np.random.default_rng(0), theta)
    report = verify_simple_end(state.surface, theta, planes)
    assert not report.passed


def test_trace_points_lie_on_the_hyperplane(example_state):
    _, state = example_state
    S = state.sample
    Q = hyperplane_through(HPoint(half_space(2), S.points[len(S.points) // 2, :-1]), [0.6, 0.8])
    pts = hyperplane_trace(S, Q)
    assert len(pts) > 0
    # linear interpolation along short edges: small residual distance
    assert np.max(np.abs(Q.signed_distance(pts))) < 0.05


def test_accumulation_without_candidates():
    sphere = GeodesicSphere(2, radius=0.2)
    res = accumulation_set(sphere.sample(with_forms=False))
    assert res.candidates == 0 and res.clusters == []


def test_thread_count(monkeypatch, example_state):
    monkeypatch.setenv("HXR_THREADS", "3")
    assert thread_count() == 3
    _, state = example_state
    theta = state.result.clusters[0].theta
    planes = random_hyperplanes(state.sample, 6, np.random.default_rng(1), theta)
    threaded = verify_simple_end(state.surface, theta, planes)
    monkeypatch.setenv("HXR_THREADS", "bogus")
    assert thread_count() == 1
    serial = verify_simple_end(state.surface, theta, planes)
    assert [v.status for v in threaded.verdicts] == [v.status for v in serial.verdicts]
    assert [v.radius_high for v in threaded.verdicts] == [v.radius_high for v in serial.verdicts]


def test_boundary_point_json():
    theta = BoundaryPoint(ball(2), [0.0, 1.0])
    assert theta.to_json() == {"chart": "ball", "direction": [0.0, 1.0]}
    assert theta.to_half_space().is_infinity
