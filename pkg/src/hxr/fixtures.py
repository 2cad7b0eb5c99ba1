"""Deterministic test surfaces and the JSON surface description format.

Every fixture exposes the sampler protocol used by `sweep` and `ends`:
`sample(with_forms)`, `forms_at(params)`, `point(params)`, `interpolate`,
`local_patch`, `translated(a)`, `rescaled(factor)`, `with_sampling(jitter, seed)`,
`describe()` and the attribute `truncation`.
"""

from __future__ import annotations

import copy
import json
import math

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.spatial.transform import Rotation

from .forms import (
    Box,
    FundamentalForms,
    ImmersedHypersurface,
    fd_derivatives,
    forms_from_derivatives,
)
from .hyperbolic import ball_to_half_space
from .parabolic import ProfileParams, build_example
from .product import ProductSpace
from .sampling import (
    SampledHypersurface,
    chebyshev_grid_edges,
    jitter_axis,
    sample_grid,
)

SCHEMA_VERSION = 1


class SurfaceSpecError(ValueError):
    pass


def _orient_by_trace(g, b, normal, curv):
    """Flip the normal wherever the shape operator has negative trace."""
    sign = np.where(np.sum(curv, axis=-1) < 0, -1.0, 1.0)
    b = b * sign[..., None, None]
    normal = normal * sign[..., None]
    curv = np.where(sign[..., None] < 0, -curv[..., ::-1], curv)
    return b, normal, curv


def klein_to_ball(k):
    k = np.asarray(k, dtype=float)
    sq = np.sum(k * k, axis=-1)
    return k / (1.0 + np.sqrt(np.maximum(1.0 - sq, 0.0)))[..., None]


class _Translatable:
    """Parabolic translation acting on the first n-1 ambient coordinates."""

    offset: np.ndarray

    def translated(self, a):
        out = copy.copy(self)
        off = self.offset.copy()
        off[: len(a)] += np.asarray(a, dtype=float)
        out.offset = off
        return out


# ---------------------------------------------------------------------------
# geodesic sphere


class GeodesicSphere(_Translatable):
    """Sphere of radius r about ((a', h), c) in H^n x R.

    A unit vector d = (w, s) of R^{n+1} is sent to exp_center(r d): the base moves a
    hyperbolic distance r|w| in direction w (ball model centred at the base point,
    carried to the half-space by a dilation and a horizontal shift), the height
    moves by r s.  The sample lattice is the surface of the cube {-k..k}^{n+1}.
    """

    compact = True

    def __init__(self, n=2, center=None, height=0.0, radius=0.5, resolution=None,
                 jitter=0.0, seed=None):
        if n < 2:
            raise SurfaceSpecError("geodesic sphere needs n >= 2")
        self.n = n
        self.ambient = ProductSpace(n)
        base = np.zeros(n)
        base[-1] = 1.0
        self.center = base if center is None else np.asarray(center, dtype=float)
        if self.center.shape != (n,) or self.center[-1] <= 0:
            raise SurfaceSpecError("sphere centre must be a half-space point")
        self.height = float(height)
        self.radius = float(radius)
        self.resolution = int(resolution if resolution is not None else (12 if n == 2 else 6))
        self.jitter = float(jitter)
        self.seed = seed
        self.offset = np.zeros(n + 1)
        self.truncation = math.inf
        self.name = "geodesic-sphere"

    def _rotation(self):
        if self.seed is None:
            return np.eye(self.n + 1)
        if self.n + 1 == 3:
            return Rotation.random(random_state=int(self.seed)).as_matrix()
        rng = np.random.default_rng(int(self.seed))
        q, r = np.linalg.qr(rng.normal(size=(self.n + 1, self.n + 1)))
        return q * np.sign(np.diag(r))

    def point(self, d):
        return self._untranslated(d) + self.offset

    def _untranslated(self, d):
        d = np.asarray(d, dtype=float)
        d = d / np.linalg.norm(d, axis=-1, keepdims=True)
        w, s = d[..., :-1], d[..., -1]
        # exp at the ball origin, then ball -> half-space sends the origin to e_n
        wn = np.linalg.norm(w, axis=-1, keepdims=True)
        scale = np.tanh(0.5 * self.radius * wn) / np.where(wn > 0, wn, 1.0)
        y = np.where(wn > 0, scale, 0.5 * self.radius) * w
        x = ball_to_half_space(y)
        h = self.center[-1]
        base = x * h
        base[..., :-1] += self.center[:-1]
        return np.concatenate([base, (self.height + self.radius * s)[..., None]], axis=-1)

    def _frames(self, d):
        """Orthonormal complements of each unit vector d (Householder)."""
        m = self.n + 1
        sgn = np.where(d[..., 0] >= 0, 1.0, -1.0)
        v = d.copy()
        v[..., 0] += sgn
        H = np.eye(m) - 2.0 * v[..., :, None] * v[..., None, :] / np.sum(v * v, axis=-1)[..., None, None]
        return H[..., :, 1:]

    def forms_at(self, d):
        d = np.asarray(d, dtype=float)
        d = d / np.linalg.norm(d, axis=-1, keepdims=True)
        E = self._frames(d)

        def evaluate(off):
            return self._untranslated(d[..., None, :] + np.einsum("...ij,...kj->...ki", E, off))

        x, jac, hess = fd_derivatives(evaluate, d.shape[:-1], self.n, 1e-4)
        x = x + self.offset
        g, b, normal, curv = forms_from_derivatives(self.ambient, x, jac, hess)
        b, normal, curv = _orient_by_trace(g, b, normal, curv)
        return FundamentalForms(d, x, jac, g, b, normal, curv)

    def interpolate(self, pa, pb, s):
        s = np.asarray(s, dtype=float)[..., None]
        p = (1.0 - s) * pa + s * pb
        return p / np.linalg.norm(p, axis=-1, keepdims=True)

    def local_patch(self, d):
        """Single-chart hypersurface around direction d, parameter 0 at d."""
        d = np.asarray(d, dtype=float)
        d = d / np.linalg.norm(d)
        E = self._frames(d)

        def phi(u):
            return self._untranslated(d + u @ E.T)

        box = Box(-0.5 * np.ones(self.n), 0.5 * np.ones(self.n))
        patch = ImmersedHypersurface(self.ambient, box, phi, fd_step=1e-4, name="sphere-patch")
        patch.offset = self.offset.copy()
        return patch, np.zeros(self.n)

    def lattice(self):
        k = self.resolution
        m = self.n + 1
        grid = np.indices((2 * k + 1,) * m).reshape(m, -1).T - k
        on_surface = np.max(np.abs(grid), axis=1) == k
        pts = grid[on_surface].astype(float)
        if self.jitter > 0 and self.seed is not None:
            rng = np.random.default_rng([int(self.seed) & 0x7FFFFFFF, 7])
            pts = pts + self.jitter * rng.uniform(-0.5, 0.5, pts.shape) * (np.abs(pts) < k)
        return grid[on_surface], pts

    def sample(self, with_forms=True):
        ints, pts = self.lattice()
        k = self.resolution
        d = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        d = d @ self._rotation().T
        # Chebyshev neighbours on the cube surface
        shape = (2 * k + 1,) * (self.n + 1)
        full_edges = chebyshev_grid_edges(shape)
        lookup = -np.ones(int(np.prod(shape)), dtype=int)
        flat = np.ravel_multi_index(tuple((ints + k).T), shape)
        lookup[flat] = np.arange(len(flat))
        e = lookup[full_edges]
        edges = e[np.all(e >= 0, axis=1)]
        frontier = np.zeros(len(d), dtype=bool)
        if with_forms:
            ff = self.forms_at(d)
            return SampledHypersurface(self, d, ff.point, edges, frontier, self.truncation,
                                       ff.normal, ff.principal_curvatures)
        return SampledHypersurface(self, d, self.point(d), edges, frontier, self.truncation)

    def rescaled(self, factor):
        return self

    def with_sampling(self, jitter, seed):
        out = copy.copy(self)
        out.jitter, out.seed = float(jitter), seed
        return out

    def describe(self):
        return {"kind": "geodesic-sphere", "n": self.n, "center": self.center.tolist(),
                "height": self.height, "radius": self.radius, "resolution": self.resolution,
                "translation": self.offset[: self.n - 1].tolist()}


# ---------------------------------------------------------------------------
# grid-parametrized fixtures


class GridSurface(_Translatable, ImmersedHypersurface):
    """ImmersedHypersurface with a tensor grid sampler and jittered axes."""

    truncation = 1.0

    def base_axes(self):
        raise NotImplementedError

    def sample(self, with_forms=True):
        axes = [jitter_axis(a, self.jitter, self.seed, i) for i, a in enumerate(self.base_axes())]
        return sample_grid(self, axes, self.truncation, with_forms)

    def with_sampling(self, jitter, seed):
        out = copy.copy(self)
        out.jitter, out.seed = float(jitter), seed
        return out

    def forms_at(self, params):
        ff = super().forms_at(params)
        ff.b, ff.normal, ff.principal_curvatures = _orient_by_trace(
            ff.g, ff.b, ff.normal, ff.principal_curvatures)
        return ff


class ConvexGraph(GridSurface):
    """Graph of (1/2) d_H(., o)^2 over a Klein-model cube |k_i| <= tanh(R) / sqrt(n).

    The Klein cube is geodesically convex, and the squared distance is strictly
    convex on H^n, so the graph is a strictly convex vertical graph.
    """

    def __init__(self, n=2, half_width=0.9, resolution=None, jitter=0.0, seed=None):
        if not half_width > 0:
            raise SurfaceSpecError("half_width must be positive")
        self.half_width = float(half_width)
        K = math.tanh(self.half_width) / math.sqrt(n)
        self.resolution = int(resolution if resolution is not None else (25 if n == 2 else 11))
        self.jitter = float(jitter)
        self.seed = seed
        box = Box(-K * np.ones(n), K * np.ones(n))
        super().__init__(ProductSpace(n), box, self._phi, fd_step=1e-4, reference=np.zeros(n),
                         name="convex-graph")

    @property
    def truncation(self):
        return self.half_width

    def _phi(self, k):
        y = klein_to_ball(k)
        r = np.linalg.norm(y, axis=-1)
        d = 2.0 * np.arctanh(r)
        return np.concatenate([ball_to_half_space(y), (0.5 * d * d)[..., None]], axis=-1)

    def base_axes(self):
        K = math.tanh(self.half_width) / math.sqrt(self.n)
        return [np.linspace(-K, K, self.resolution) for _ in range(self.n)]

    def rescaled(self, factor):
        out = ConvexGraph(self.n, self.half_width * factor, self.resolution, self.jitter, self.seed)
        out.offset = self.offset.copy()
        return out

    def describe(self):
        return {"kind": "graph", "n": self.n, "function": "half-distance-squared",
                "half_width": self.half_width, "resolution": self.resolution,
                "translation": self.offset[: self.n - 1].tolist()}


class HalfPlaneGraph(GridSurface):
    """Negative control: the half-disc {rho e^{i psi}: |psi| < pi/2} of H^2 at height 0.

    Polar parameters (hyperbolic radius, angle) in the ball.  Its projection
    accumulates on a whole arc of the circle at infinity.
    """

    def __init__(self, radius=8.5, angle_margin=0.02, radial_count=40, angle_count=80,
                 jitter=0.0, seed=None):
        self.radius = float(radius)
        self.angle_margin = float(angle_margin)
        self.radial_count = int(radial_count)
        self.angle_count = int(angle_count)
        self.jitter = float(jitter)
        self.seed = seed
        lim = 0.5 * math.pi - self.angle_margin
        box = Box([0.1, -lim], [self.radius, lim])
        super().__init__(ProductSpace(2), box, self._phi, fd_step=1e-4,
                         reference=np.array([1.0, 0.0]), name="half-plane-graph")

    @property
    def truncation(self):
        return self.radius

    def _phi(self, u):
        rho, psi = u[..., 0], u[..., 1]
        r = np.tanh(0.5 * rho)
        y = np.stack([r * np.cos(psi), r * np.sin(psi)], axis=-1)
        return np.concatenate([ball_to_half_space(y), np.zeros(u.shape[:-1] + (1,))], axis=-1)

    def base_axes(self):
        lim = 0.5 * math.pi - self.angle_margin
        return [np.linspace(0.1, self.radius, self.radial_count),
                np.linspace(-lim, lim, self.angle_count)]

    def rescaled(self, factor):
        out = HalfPlaneGraph(self.radius * factor, self.angle_margin,
                             int(round(self.radial_count * factor)), self.angle_count,
                             self.jitter, self.seed)
        out.offset = self.offset.copy()
        return out

    def describe(self):
        return {"kind": "half-plane-graph", "n": 2, "radius": self.radius,
                "translation": self.offset[:1].tolist()}


class VerticalPlanePatch(GridSurface):
    """Totally geodesic patch {x_1 = 0} x R: parameters (x_2..x_{n-1}, log x_n, t)."""

    def __init__(self, n=2, extent=1.0, resolution=15, jitter=0.0, seed=None):
        self.extent = float(extent)
        self.resolution = int(resolution)
        self.jitter = float(jitter)
        self.seed = seed
        box = Box(-self.extent * np.ones(n), self.extent * np.ones(n))
        super().__init__(ProductSpace(n), box, self._phi, fd_step=1e-4, orientation=1.0,
                         name="vertical-plane")

    @property
    def truncation(self):
        return self.extent

    def _phi(self, u):
        n = self.n
        out = np.zeros(u.shape[:-1] + (n + 1,))
        out[..., 1:n - 1] = u[..., : n - 2]
        out[..., n - 1] = np.exp(u[..., n - 2])
        out[..., n] = u[..., n - 1]
        return out

    def base_axes(self):
        return [np.linspace(-self.extent, self.extent, self.resolution) for _ in range(self.n)]

    def rescaled(self, factor):
        out = VerticalPlanePatch(self.n, self.extent * factor, self.resolution, self.jitter, self.seed)
        out.offset = self.offset.copy()
        return out

    def describe(self):
        return {"kind": "vertical-plane", "n": self.n, "extent": self.extent}


class MeshSurface(GridSurface):
    """Surface given by ambient points on a parameter grid, interpolated by cubic splines."""

    def __init__(self, axes, points, jitter=0.0, seed=None):
        self.axes = [np.asarray(a, dtype=float) for a in axes]
        n = len(self.axes)
        shape = tuple(len(a) for a in self.axes)
        pts = np.asarray(points, dtype=float).reshape(shape + (n + 1,))
        method = "cubic" if min(shape) >= 4 else "linear"
        self._interp = RegularGridInterpolator(self.axes, pts, method=method)
        self.jitter = float(jitter)
        self.seed = seed
        self._points = pts
        box = Box([a[0] for a in self.axes], [a[-1] for a in self.axes])
        steps = [1e-3 * (a[-1] - a[0]) for a in self.axes]
        super().__init__(ProductSpace(n), box, self._phi, fd_step=steps, name="mesh")

    def _phi(self, u):
        u = np.clip(u, self.domain.lo, self.domain.hi)
        return self._interp(u)

    def base_axes(self):
        return self.axes

    def sample(self, with_forms=True):
        # sample at the supplied nodes, pulled slightly inside for the stencil
        axes = []
        for a in self.axes:
            a = a.copy()
            pad = 2e-3 * (a[-1] - a[0])
            a[0] += pad
            a[-1] -= pad
            axes.append(a)
        return sample_grid(self, axes, self.truncation, with_forms)

    def rescaled(self, factor):
        return self

    def describe(self):
        return {"kind": "mesh", "n": self.n, "shape": [len(a) for a in self.axes]}


# ---------------------------------------------------------------------------
# JSON surface descriptions


def _get(spec, key, default=None, required=False):
    if key in spec:
        return spec[key]
    if required:
        raise SurfaceSpecError(f"surface description is missing '{key}'")
    return default


def surface_from_spec(spec):
    """Build a fixture from a parsed surface-description dictionary."""
    if not isinstance(spec, dict):
        raise SurfaceSpecError("surface description must be a JSON object")
    version = spec.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SurfaceSpecError(f"unsupported schema_version {version}")
    kind = _get(spec, "kind", required=True)
    n = int(_get(spec, "n", 2))
    if kind == "analytic-example":
        p = _get(spec, "params", spec)
        try:
            params = ProfileParams(float(p["c1"]), float(p["c2"]), float(p["t1"]), float(p["t2"]))
        except KeyError as exc:
            raise SurfaceSpecError(f"profile parameter {exc} missing") from exc
        opts = {k: spec[k] for k in ("x_max", "delta", "x_scale", "x_step", "t_count") if k in spec}
        surf = build_example(params, n, **opts)
    elif kind == "geodesic-sphere":
        surf = GeodesicSphere(n, _get(spec, "center"), float(_get(spec, "height", 0.0)),
                              float(_get(spec, "radius", 0.5)), _get(spec, "resolution"))
    elif kind == "graph":
        func = _get(spec, "function", "half-distance-squared")
        if func != "half-distance-squared":
            raise SurfaceSpecError(f"unknown graph function '{func}'")
        surf = ConvexGraph(n, float(_get(spec, "half_width", 0.9)), _get(spec, "resolution"))
    elif kind == "half-plane-graph":
        surf = HalfPlaneGraph(float(_get(spec, "radius", 8.5)))
    elif kind == "vertical-plane":
        surf = VerticalPlanePatch(n, float(_get(spec, "extent", 1.0)))
    elif kind == "mesh":
        surf = MeshSurface(_get(spec, "axes", required=True), _get(spec, "points", required=True))
    else:
        raise SurfaceSpecError(f"unknown surface kind '{kind}'")
    if "translate" in spec:
        a = np.asarray(spec["translate"], dtype=float)
        if a.shape != (surf.n - 1,):
            raise SurfaceSpecError(f"translate needs {surf.n - 1} components")
        surf = surf.translated(a)
    return surf


def load_surface(path):
    with open(path) as fh:
        return surface_from_spec(json.load(fh))


def standard_fixtures(n=2):
    """The three strictly convex fixtures used throughout the tests."""
    params = ProfileParams(-1.0, -1.0, 0.0, math.exp(-1.0))
    return {
        "sphere": GeodesicSphere(n),
        "graph": ConvexGraph(n),
        "example": build_example(params, n),
    }
