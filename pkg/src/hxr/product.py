"""The product H^n x R: metric, connection, projections, vertical hyperplanes,
foliations and the parabolic isometries of the half-space chart.

Ambient coordinates are stored as arrays (x_1, ..., x_n, t) with the base in the
upper half-space chart unless a `ProdPoint` says otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hyperbolic import (
    Geodesic,
    HPoint,
    Model,
    TotallyGeodesicHyperplane,
    check_domain,
    convert_model,
    half_space,
    half_space_distance,
    metric_array,
)


class UnsupportedChartError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ProdPoint:
    base: HPoint
    height: float

    def __post_init__(self):
        object.__setattr__(self, "height", float(self.height))

    @property
    def dim(self):
        return self.base.dim

    def coords(self):
        return np.append(self.base.coords, self.height)

    @classmethod
    def from_coords(cls, x, chart=None):
        x = np.asarray(x, dtype=float)
        chart = chart or half_space(x.shape[0] - 1)
        return cls(HPoint(chart, x[:-1]), x[-1])

    def to_json(self):
        return {"base": self.base.to_json(), "height": self.height}


@dataclass(frozen=True, eq=False)
class ProdTangent:
    at: ProdPoint
    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        if not np.all(np.isfinite(c)):
            raise FloatingPointError("non-finite tangent components")
        object.__setattr__(self, "components", c)

    def norm(self):
        g = product_metric(self.at)
        return float(np.sqrt(self.components @ g @ self.components))


class ProductSpace:
    """H^n x R with the base in half-space coordinates; array interface for `forms`."""

    has_height = True

    def __init__(self, n):
        if n < 1:
            raise ValueError("base dimension must be >= 1")
        self.base_dim = n
        self.dim = n + 1

    def metric(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (self.dim, self.dim))
        out[..., :-1, :-1] = metric_array(x[..., :-1], Model.HALF_SPACE)
        out[..., -1, -1] = 1.0
        return out

    def christoffel(self, x):
        return christoffel_table(x)

    def check(self, x):
        check_domain(np.asarray(x)[..., :-1], Model.HALF_SPACE)

    def distance(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        return np.hypot(half_space_distance(p[..., :-1], q[..., :-1]), p[..., -1] - q[..., -1])

    def __repr__(self):
        return f"ProductSpace({self.base_dim})"


def christoffel_table(x):
    """G[..., k, i, j] with nabla_{d_i} d_j = G^k_ij d_k, frame (d_1, ..., d_n, d_t).

    nabla_{d_i} d_j = delta_ij lam d_n          (i, j < n)
    nabla_{d_i} d_n = nabla_{d_n} d_i = -lam d_i (i < n)
    nabla_{d_n} d_n = -lam d_n
    anything involving d_t vanishes;  lam = 1 / x_n.
    """
    x = np.asarray(x, dtype=float)
    dim = x.shape[-1]
    n = dim - 1
    lam = 1.0 / x[..., n - 1]
    gam = np.zeros(x.shape[:-1] + (dim, dim, dim))
    for i in range(n - 1):
        gam[..., n - 1, i, i] = lam
        gam[..., i, i, n - 1] = -lam
        gam[..., i, n - 1, i] = -lam
    gam[..., n - 1, n - 1, n - 1] = -lam
    return gam


def product_metric(p):
    g = np.zeros((p.dim + 1, p.dim + 1))
    g[:-1, :-1] = metric_array(p.base.coords, p.base.chart.kind)
    g[-1, -1] = 1.0
    return g


def christoffel(p):
    if p.base.chart.kind is not Model.HALF_SPACE:
        raise UnsupportedChartError("connection table is given in the half-space chart; convert first")
    return christoffel_table(p.coords())


def covariant_derivative(direction, field, p, h=None):
    """nabla_X Y at p, X the coordinate direction with index `direction` (n means d_t).

    `field` maps ambient coordinates (x, t) to the components of Y.
    """
    if p.base.chart.kind is not Model.HALF_SPACE:
        raise UnsupportedChartError("convert the point to the half-space chart first")
    x = p.coords()
    if h is None:
        h = 1e-5 * max(1.0, abs(x[direction]))
    step = np.zeros_like(x)
    step[direction] = h
    y0 = np.asarray(field(x), dtype=float)
    dy = (np.asarray(field(x + step)) - np.asarray(field(x - step))) / (2.0 * h)
    gam = christoffel_table(x)
    out = dy + gam[:, direction, :] @ y0
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite covariant derivative")
    return ProdTangent(p, out)


def parabolic_translate(x, a):
    """F_a on arrays of ambient half-space coordinates."""
    x = np.array(x, dtype=float)
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != x.shape[-1] - 2:
        raise ValueError(f"translation needs {x.shape[-1] - 2} components")
    x[..., : a.shape[-1]] += a
    return x


def parabolic_isometry(a, p):
    if p.base.chart.kind is not Model.HALF_SPACE:
        raise UnsupportedChartError("parabolic translations act in the half-space chart")
    return ProdPoint.from_coords(parabolic_translate(p.coords(), a), p.base.chart)


def project_base(p):
    return p.base


def project_height(p):
    return p.height


@dataclass(frozen=True, eq=False)
class VerticalHyperplane:
    base_hyperplane: TotallyGeodesicHyperplane

    def signed_distance(self, x):
        """Signed distance of ambient half-space coordinates (x, t); the height plays no role."""
        x = np.asarray(x, dtype=float)
        return self.base_hyperplane.signed_distance(x[..., :-1])

    def contains(self, p, tol=1e-8):
        base = convert_model(p.base, Model.HALF_SPACE)
        return abs(float(self.base_hyperplane.signed_distance(base.coords))) < tol

    def chart_map(self):
        """Coordinates on P = Q x R: the half-space chart of Q = H^{n-1} plus the height."""
        transform = self.base_hyperplane.normalizing_isometry()

        def to_plane(x):
            x = np.asarray(x, dtype=float)
            y = transform(x[..., :-1])
            return np.concatenate([y[..., 1:], x[..., -1:]], axis=-1)

        return to_plane

    def to_json(self):
        return {"base_hyperplane": self.base_hyperplane.to_json()}


@dataclass(frozen=True, eq=False)
class VerticalFoliation:
    """Leaves P_gamma(t): vertical hyperplanes orthogonal to the horizontal geodesic gamma."""
    gamma: Geodesic

    def leaf(self, t):
        from .hyperbolic import hyperplane_through

        g = self.gamma
        base = HPoint(half_space(g.dim), g.half_space_coords(float(t)))
        return VerticalHyperplane(hyperplane_through(base, g.half_space_velocity(float(t))))

    def leaf_coordinate(self, x):
        """Leaf parameter of ambient half-space coordinates (arrays) or a ProdPoint."""
        if isinstance(x, ProdPoint):
            base = convert_model(x.base, Model.HALF_SPACE)
            return float(self.gamma.leaf_coordinate(base.coords))
        x = np.asarray(x, dtype=float)
        return self.gamma.leaf_coordinate(x[..., :-1])

    def leaf_normal(self, x):
        """Unit normal of the leaf through each ambient point, as ambient components (zero t-slot)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        out[..., :-1] = self.gamma.leaf_normal(x[..., :-1])
        return out

    def to_json(self):
        return {"gamma": self.gamma.to_json()}
