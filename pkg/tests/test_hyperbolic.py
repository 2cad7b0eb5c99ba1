"""Models of hyperbolic space: metrics, chart changes, distances, geodesics, hyperplanes."""

import math

import numpy as np
import pytest
from conftest import random_ball, random_half_space
from scipy import integrate, optimize

from hxr.forms import Box, ImmersedHypersurface, fundamental_forms
from hxr.hyperbolic import (
    BoundaryPoint,
    ChartMismatchError,
    DegenerateGeodesicError,
    DomainError,
    HPoint,
    HyperbolicSpace,
    Model,
    ball,
    ball_to_half_space,
    boundary_ball_to_half_space,
    boundary_half_space_to_ball,
    christoffel_array,
    convert_model,
    distance,
    geodesic_from,
    geodesic_residual,
    geodesic_through,
    geodesic_to_boundary,
    half_space,
    half_space_distance,
    half_space_to_ball,
    hyperplane_through,
    metric_tensor,
)


def hyperboloid_distance_from_ball(y1, y2):
    """Independent oracle: lift to the hyperboloid and use the Lorentz product."""
    def lift(y):
        s = np.sum(y * y, axis=-1)
        return np.concatenate([((1 + s) / (1 - s))[..., None], 2 * y / (1 - s)[..., None]], axis=-1)
    X, Y = lift(y1), lift(y2)
    lor = X[..., 0] * Y[..., 0] - np.sum(X[..., 1:] * Y[..., 1:], axis=-1)
    return np.arccosh(np.maximum(lor, 1.0))


# -- metric -----------------------------------------------------------------


def test_metric_examples():
    assert np.allclose(metric_tensor(HPoint(ball(2), [0, 0])), 4 * np.eye(2))
    assert np.allclose(metric_tensor(HPoint(half_space(2), [0, 2])), 0.25 * np.eye(2))
    assert np.allclose(metric_tensor(HPoint(half_space(3), [3, 1, 1])), np.eye(3))


@pytest.mark.parametrize("chart,coords", [
    (ball(2), [1.0, 0.0]),
    (ball(3), [0.8, 0.8, 0.0]),
    (half_space(2), [0.0, 0.0]),
    (half_space(2), [1.0, -1.0]),
    (half_space(2), [np.nan, 1.0]),
])
def test_domain_errors(chart, coords):
    with pytest.raises(DomainError):
        HPoint(chart, coords)


def test_christoffel_array_matches_metric_derivatives(rng):
    # Koszul formula with finite differences of the metric as the oracle
    for model, sample in ((Model.BALL, random_ball), (Model.HALF_SPACE, random_half_space)):
        for _ in range(10):
            x = sample(rng, 3)
            h = 1e-6
            G = metric_tensor(HPoint(chart_for(model, 3), x))
            dG = np.zeros((3, 3, 3))
            for k in range(3):
                e = np.zeros(3)
                e[k] = h
                gp = metric_tensor(HPoint(chart_for(model, 3), x + e))
                gm = metric_tensor(HPoint(chart_for(model, 3), x - e))
                dG[k] = (gp - gm) / (2 * h)
            first = 0.5 * (np.einsum("ilj->lij", dG) + np.einsum("jli->lij", dG) - dG)
            oracle = np.einsum("kl,lij->kij", np.linalg.inv(G), first)
            assert np.allclose(christoffel_array(x, model), oracle, atol=1e-6)


def chart_for(model, n):
    return ball(n) if model is Model.BALL else half_space(n)


# -- chart changes and distance ----------------------------------------------


def test_half_space_base_point_maps_to_origin():
    for n in (2, 3, 4):
        e = np.zeros(n)
        e[-1] = 1.0
        y = convert_model(HPoint(half_space(n), e), Model.BALL)
        assert np.allclose(y.coords, 0.0, atol=1e-15)
        assert distance(y, HPoint(ball(n), np.zeros(n))) == 0.0


def test_round_trip(rng):
    for n in (2, 3, 5):
        x = random_half_space(rng, n, 200)
        assert np.allclose(ball_to_half_space(half_space_to_ball(x)), x, rtol=1e-10, atol=1e-10)
        y = random_ball(rng, n, 200)
        assert np.allclose(half_space_to_ball(ball_to_half_space(y)), y, atol=1e-10)


def test_distance_preserved_by_chart_change(rng):
    for n in (2, 3):
        x1 = random_half_space(rng, n, 100)
        x2 = random_half_space(rng, n, 100)
        d_half = half_space_distance(x1, x2)
        oracle = hyperboloid_distance_from_ball(half_space_to_ball(x1), half_space_to_ball(x2))
        assert np.allclose(d_half, oracle, rtol=1e-8, atol=1e-8)


def test_vertical_distance_by_quadrature():
    p = HPoint(half_space(2), [0.0, 1.0])
    q = HPoint(half_space(2), [0.0, math.e])
    length, _ = integrate.quad(lambda s: 1.0 / s, 1.0, math.e)
    assert abs(length - 1.0) < 1e-12
    assert abs(distance(p, q) - length) < 1e-12
    assert distance(p, p) == 0.0


def test_distance_properties(rng):
    x = random_half_space(rng, 3, 300)
    y = random_half_space(rng, 3, 300)
    z = random_half_space(rng, 3, 300)
    dxy, dyx = half_space_distance(x, y), half_space_distance(y, x)
    assert np.allclose(dxy, dyx, rtol=1e-14)
    assert np.all(half_space_distance(x, z) <= dxy + half_space_distance(y, z) + 1e-9)
    assert np.all(dxy > 0)


def test_distance_tiny_separation_is_accurate():
    p = np.array([0.0, 1.0])
    q = np.array([1e-12, 1.0])
    assert abs(half_space_distance(p, q) - 1e-12) < 1e-20


def test_chart_mismatch():
    with pytest.raises(ChartMismatchError):
        distance(HPoint(ball(2), [0, 0]), HPoint(half_space(2), [0, 1]))


def test_boundary_maps_are_inverse(rng):
    xi = rng.normal(size=(50, 2)) * 3
    y = boundary_half_space_to_ball(xi)
    assert np.allclose(np.linalg.norm(y, axis=1), 1.0)
    back = np.array([boundary_ball_to_half_space(v) for v in y])
    assert np.allclose(back, xi, atol=1e-9)
    north = np.array([0.0, 0.0, 1.0])
    assert boundary_ball_to_half_space(north) is None
    inf = BoundaryPoint(half_space(3), None)
    assert np.allclose(inf.to_ball().direction, north)


# -- geodesics -----------------------------------------------------------------


def test_vertical_geodesic_example():
    p = HPoint(half_space(2), [0.0, 1.0])
    q = HPoint(half_space(2), [0.0, 2.0])
    geo = geodesic_through(p, q)
    t = np.linspace(-2, 2, 9)
    assert np.allclose(geo(t), np.column_stack([np.zeros_like(t), np.exp(t)]), atol=1e-14)
    assert np.max(np.abs(geodesic_residual(geo, t))) < 1e-5


def test_geodesic_through_hits_endpoints(rng):
    for chart in (half_space(2), half_space(3), ball(3)):
        sample = random_ball if chart.kind is Model.BALL else random_half_space
        for _ in range(20):
            p = HPoint(chart, sample(rng, chart.dim))
            q = HPoint(chart, sample(rng, chart.dim))
            geo = geodesic_through(p, q)
            d = distance(p, q)
            assert np.allclose(geo(0.0), p.coords, atol=1e-8)
            assert np.allclose(geo(d), q.coords, atol=1e-8)
            a, b = rng.uniform(-2, 2, size=2)
            gap = distance(geo.point(a), geo.point(b))
            assert abs(gap - abs(a - b)) < 1e-8
            res = geodesic_residual(geo, np.linspace(-1, 1, 5))
            assert np.max(np.abs(res)) < 1e-4


def test_degenerate_geodesic():
    p = HPoint(half_space(2), [0.3, 1.0])
    with pytest.raises(DegenerateGeodesicError):
        geodesic_through(p, p)


def test_radial_geodesic_in_ball():
    p = HPoint(ball(2), [0.0, 0.0])
    theta = BoundaryPoint(ball(2), [1.0, 0.0])
    geo = geodesic_to_boundary(p, theta)
    t = np.array([0.5, 1.0, 3.0, 8.0])
    y = geo(t)
    assert np.allclose(y[:, 1], 0.0, atol=1e-9)
    assert np.allclose(y[:, 0], np.tanh(t / 2), atol=1e-9)
    assert np.linalg.norm(geo(30.0) - theta.direction) < 1e-9


def test_geodesic_to_finite_ideal_point(rng):
    for _ in range(10):
        p = HPoint(half_space(3), random_half_space(rng, 3))
        xi = rng.normal(size=2)
        geo = geodesic_to_boundary(p, BoundaryPoint(half_space(3), xi))
        assert np.allclose(geo(0.0), p.coords, atol=1e-10)
        far = geo(40.0)
        assert np.allclose(far[:-1], xi, atol=1e-8) and far[-1] < 1e-8


def _integrate_geodesic(x0, v0, model, t_end):
    """Exponential map by direct integration of the geodesic equation."""
    n = len(x0)

    def rhs(_, state):
        x, v = state[:n], state[n:]
        gam = christoffel_array(x, model)
        return np.concatenate([v, -np.einsum("kij,i,j->k", gam, v, v)])

    sol = integrate.solve_ivp(rhs, (0.0, t_end), np.concatenate([x0, v0]), method="DOP853",
                              rtol=1e-12, atol=1e-13)
    return sol.y[:n, -1]


def test_geodesic_from_matches_integrated_exponential_map(rng):
    for chart in (half_space(2), half_space(3), ball(2)):
        sample = random_ball if chart.kind is Model.BALL else random_half_space
        for _ in range(5):
            x = sample(rng, chart.dim) * (0.7 if chart.kind is Model.BALL else 1.0)
            p = HPoint(chart, x)
            v = rng.normal(size=chart.dim)
            geo = geodesic_from(p, v)
            # unit speed initial velocity in chart components
            c = math.sqrt(metric_tensor(p)[0, 0])
            v0 = v / (np.linalg.norm(v) * c)
            for t in (0.5, 1.5):
                assert np.allclose(geo(t), _integrate_geodesic(x, v0, chart.kind, t), atol=1e-8)


# -- totally geodesic hyperplanes ----------------------------------------------------


def test_hyperplane_examples():
    Q = hyperplane_through(HPoint(half_space(2), [0.0, 1.0]), [1.0, 0.0])
    assert Q.kind == "plane"
    pts = np.column_stack([np.zeros(5), np.linspace(0.1, 5, 5)])
    assert np.allclose(Q.signed_distance(pts), 0.0)
    Q3 = hyperplane_through(HPoint(ball(3), [0.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    disk = np.array([[0.0, 0.3, 0.2], [0.0, -0.5, 0.6], [0.0, 0.0, -0.9]])
    assert np.allclose(Q3.signed_distance(disk, Model.BALL), 0.0, atol=1e-12)
    off = np.array([[0.2, 0.1, 0.0]])
    assert Q3.signed_distance(off, Model.BALL)[0] > 0


def test_hyperplane_zero_normal():
    with pytest.raises(ValueError):
        hyperplane_through(HPoint(half_space(2), [0.0, 1.0]), [0.0, 0.0])


def test_hyperplane_contains_point_and_is_orthogonal(rng):
    for chart in (half_space(2), half_space(3), ball(3)):
        sample = random_ball if chart.kind is Model.BALL else random_half_space
        for _ in range(20):
            p = HPoint(chart, sample(rng, chart.dim))
            v = rng.normal(size=chart.dim)
            Q = hyperplane_through(p, v)
            assert Q.contains(p)
            # the unit normal field at p is the pushed normal direction
            x = ball_to_half_space(p.coords) if chart.kind is Model.BALL else p.coords
            h = 1e-7
            w = (ball_to_half_space(p.coords + h * v) - ball_to_half_space(p.coords - h * v)) / (2 * h) \
                if chart.kind is Model.BALL else v
            nu = Q.unit_normal(x)
            cos = np.dot(nu, w) / (np.linalg.norm(nu) * np.linalg.norm(w))
            assert cos > 1 - 1e-8


def test_signed_distance_against_minimization(rng):
    # oracle: distance to the nearest point of a hemisphere, found numerically
    Q = hyperplane_through(HPoint(half_space(3), [0.4, -0.2, 1.0]), [0.6, 0.3, 0.5])
    assert Q.kind == "sphere"
    for _ in range(5):
        x = random_half_space(rng, 3)

        def dist(angles):
            a, b = angles
            pt = np.array([Q.center[0] + Q.radius * math.cos(a) * math.cos(b),
                           Q.center[1] + Q.radius * math.sin(a) * math.cos(b),
                           Q.radius * abs(math.sin(b))])
            return half_space_distance(x, pt)
        best = min((optimize.minimize(dist, [a0, b0], method="Nelder-Mead",
                                      options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
                    for a0 in np.linspace(0, 2 * math.pi, 6, endpoint=False)
                    for b0 in (0.3, 1.0, 1.4)), key=lambda r: r.fun)
        assert abs(abs(Q.signed_distance(x)) - best.fun) < 1e-6


def test_hyperplane_second_form_vanishes(rng):
    # hemisphere |x - c| = R in H^3, as a graph over its equatorial disk
    c = np.array([0.3, -0.5])
    R = 2.0

    def phi(u):
        r2 = np.sum((u - c) ** 2, axis=-1)
        return np.concatenate([u, np.sqrt(R * R - r2)[..., None]], axis=-1)

    surf = ImmersedHypersurface(HyperbolicSpace(3), Box(c - 1.2, c + 1.2), phi, orientation=1.0,
                                fd_step=1e-4)
    u = c + rng.uniform(-1.2, 1.2, size=(20, 2))
    ff = fundamental_forms(surf, u)
    assert np.max(np.abs(ff.b)) < 1e-6
    Q = hyperplane_through(HPoint(half_space(3), phi(u[0])), ff.normal[0])
    assert np.allclose(Q.signed_distance(phi(u)), 0.0, atol=1e-7)


def test_angular_distance_to_ideal():
    Q = hyperplane_through(HPoint(half_space(2), [0.0, 1.0]), [1.0, 0.0])
    east = BoundaryPoint(ball(2), [1.0, 0.0])
    north = BoundaryPoint(ball(2), [0.0, 1.0])
    assert abs(Q.angular_distance_to_ideal(east) - math.pi / 2) < 1e-9
    assert Q.angular_distance_to_ideal(north) < 1e-9
