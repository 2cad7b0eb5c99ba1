"""Hyperbolic n-space in the Poincare ball and upper half-space charts.

All heavy lifting is done on plain ndarrays of coordinates (last axis is the
coordinate axis) so that whole samples can be processed at once.  The small
value types (`HPoint`, `BoundaryPoint`, `Geodesic`, `TotallyGeodesicHyperplane`)
wrap those array routines for single objects.

Internally the half-space chart is canonical: geodesics and hyperplanes keep a
half-space description and convert on output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

EPS_DOMAIN = 1e-9


class DomainError(ValueError):
    """Coordinates outside (or too close to the edge of) a model chart."""


class ChartMismatchError(ValueError):
    pass


class DegenerateGeodesicError(ValueError):
    pass


class Model(Enum):
    BALL = "ball"
    HALF_SPACE = "half-space"


@dataclass(frozen=True)
class ModelChart:
    kind: Model
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("chart dimension must be >= 1")


def ball(n):
    return ModelChart(Model.BALL, n)


def half_space(n):
    return ModelChart(Model.HALF_SPACE, n)


def check_domain(x, model, eps=EPS_DOMAIN):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite coordinates")
    if model is Model.BALL:
        bad = np.sum(x * x, axis=-1) >= (1.0 - eps) ** 2
    else:
        bad = x[..., -1] <= eps
    if np.any(bad):
        raise DomainError(f"point outside the {model.value} chart (margin {eps:g})")
    return x


# ---------------------------------------------------------------------------
# array-level routines


def conformal_factor(x, model):
    """Scalar c with ds^2 = c |dx|^2."""
    x = np.asarray(x, dtype=float)
    if model is Model.BALL:
        return 4.0 / (1.0 - np.sum(x * x, axis=-1)) ** 2
    return 1.0 / x[..., -1] ** 2


def metric_array(x, model):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return conformal_factor(x, model)[..., None, None] * np.eye(n)


def log_factor_gradient(x, model):
    """Gradient of sigma where the metric is exp(2 sigma) * Euclidean."""
    x = np.asarray(x, dtype=float)
    if model is Model.BALL:
        return 2.0 * x / (1.0 - np.sum(x * x, axis=-1))[..., None]
    grad = np.zeros_like(x)
    grad[..., -1] = -1.0 / x[..., -1]
    return grad


def christoffel_array(x, model):
    """Levi-Civita symbols G[..., k, i, j] of a conformally flat chart.

    G^k_ij = d_ik s_j + d_jk s_i - d_ij s_k with s the gradient of the
    log conformal factor.
    """
    s = log_factor_gradient(x, model)
    n = s.shape[-1]
    eye = np.eye(n)
    return (
        eye[:, :, None] * s[..., None, None, :]
        + eye[:, None, :] * s[..., None, :, None]
        - eye[None, :, :] * s[..., :, None, None]
    )


def half_space_to_ball(x):
    """Cayley-type map; sends (0, ..., 0, 1) to the origin and infinity to e_n."""
    x = np.asarray(x, dtype=float)
    xp, xn = x[..., :-1], x[..., -1]
    sq = np.sum(x * x, axis=-1)
    den = np.sum(xp * xp, axis=-1) + (xn + 1.0) ** 2
    out = np.empty_like(x)
    out[..., :-1] = 2.0 * xp / den[..., None]
    out[..., -1] = (sq - 1.0) / den
    return out


def ball_to_half_space(y):
    y = np.asarray(y, dtype=float)
    yp, yn = y[..., :-1], y[..., -1]
    sq = np.sum(y * y, axis=-1)
    den = np.sum(yp * yp, axis=-1) + (1.0 - yn) ** 2
    out = np.empty_like(y)
    out[..., :-1] = 2.0 * yp / den[..., None]
    out[..., -1] = (1.0 - sq) / den
    return out


def to_half_space(x, model):
    return np.asarray(x, dtype=float) if model is Model.HALF_SPACE else ball_to_half_space(x)


def from_half_space(x, model):
    return np.asarray(x, dtype=float) if model is Model.HALF_SPACE else half_space_to_ball(x)


def half_space_distance(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    diff = np.sum((p - q) ** 2, axis=-1)
    # arccosh(1 + z) written to stay accurate for tiny z
    z = diff / (2.0 * p[..., -1] * q[..., -1])
    return 2.0 * np.arcsinh(np.sqrt(z / 2.0))


def ball_distance(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    diff = np.sum((p - q) ** 2, axis=-1)
    den = (1.0 - np.sum(p * p, axis=-1)) * (1.0 - np.sum(q * q, axis=-1))
    z = 2.0 * diff / den
    return 2.0 * np.arcsinh(np.sqrt(z / 2.0))


def distance_array(p, q, model):
    if model is Model.BALL:
        return ball_distance(p, q)
    return half_space_distance(p, q)


def boundary_half_space_to_ball(xi):
    """Finite ideal points (x_n = 0) of the half-space, given by R^{n-1} coords."""
    xi = np.asarray(xi, dtype=float)
    sq = np.sum(xi * xi, axis=-1)
    out = np.empty(xi.shape[:-1] + (xi.shape[-1] + 1,))
    out[..., :-1] = 2.0 * xi / (sq + 1.0)[..., None]
    out[..., -1] = (sq - 1.0) / (sq + 1.0)
    return out


def boundary_ball_to_half_space(y):
    """Inverse of the above; the north pole e_n maps to None (infinity)."""
    y = np.asarray(y, dtype=float)
    if y[-1] > 1.0 - 1e-14:
        return None
    return y[:-1] / (1.0 - y[-1])


def angle_between(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    # atan2 form keeps small angles accurate
    cross = np.sqrt(np.maximum(
        np.sum(u * u, axis=-1) * np.sum(v * v, axis=-1) - np.sum(u * v, axis=-1) ** 2, 0.0))
    return np.arctan2(cross, np.sum(u * v, axis=-1))


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True, eq=False)
class HPoint:
    chart: ModelChart
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.shape[0] != self.chart.dim:
            raise ValueError(f"expected {self.chart.dim} coordinates, got {c.shape[0]}")
        check_domain(c, self.chart.kind)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return self.chart.dim

    def to_json(self):
        return {"chart": self.chart.kind.value, "coords": [float(v) for v in self.coords]}

    @classmethod
    def from_json(cls, data):
        coords = np.asarray(data["coords"], dtype=float)
        return cls(ModelChart(Model(data["chart"]), coords.shape[0]), coords)

    def __repr__(self):
        return f"HPoint({self.chart.kind.value}, {self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """Ideal point.  Ball chart: unit vector.  Half-space: R^{n-1} point or None for infinity."""
    chart: ModelChart
    direction: np.ndarray | None

    def __post_init__(self):
        if self.chart.kind is Model.BALL:
            d = np.array(self.direction, dtype=float).reshape(-1)
            if d.shape[0] != self.chart.dim or abs(np.linalg.norm(d) - 1.0) > 1e-12:
                raise DomainError("ball-model ideal points are unit vectors")
            object.__setattr__(self, "direction", d)
        elif self.direction is not None:
            d = np.array(self.direction, dtype=float).reshape(-1)
            if d.shape[0] != self.chart.dim - 1:
                raise ValueError("half-space ideal points live in R^{n-1}")
            object.__setattr__(self, "direction", d)

    @property
    def is_infinity(self):
        return self.chart.kind is Model.HALF_SPACE and self.direction is None

    def to_ball(self):
        if self.chart.kind is Model.BALL:
            return self
        n = self.chart.dim
        if self.direction is None:
            d = np.zeros(n)
            d[-1] = 1.0
        else:
            d = boundary_half_space_to_ball(self.direction)
            d /= np.linalg.norm(d)
        return BoundaryPoint(ball(n), d)

    def to_half_space(self):
        if self.chart.kind is Model.HALF_SPACE:
            return self
        return BoundaryPoint(half_space(self.chart.dim), boundary_ball_to_half_space(self.direction))

    def to_json(self):
        if self.direction is None:
            return {"chart": self.chart.kind.value, "direction": None}
        return {"chart": self.chart.kind.value, "direction": [float(v) for v in self.direction]}


def metric_tensor(p):
    """Metric matrix of the chart at p: diag(c, ..., c)."""
    return metric_array(p.coords, p.chart.kind)


def convert_model(p, target):
    if isinstance(target, Model):
        target = ModelChart(target, p.dim)
    if target.dim != p.dim:
        raise ValueError("dimension mismatch")
    if target.kind is p.chart.kind:
        return p
    x = to_half_space(p.coords, p.chart.kind)
    return HPoint(target, from_half_space(x, target.kind))


def distance(p, q):
    if p.chart != q.chart:
        raise ChartMismatchError(f"{p.chart} vs {q.chart}")
    return float(distance_array(p.coords, q.coords, p.chart.kind))


def _pushforward_to_half_space(x, v, model, h=1e-6):
    """Push a chart vector v at x to half-space components (central difference)."""
    if model is Model.HALF_SPACE:
        return np.asarray(v, dtype=float)
    v = np.asarray(v, dtype=float)
    scale = h / max(np.linalg.norm(v), 1e-300)
    fwd = ball_to_half_space(x + scale * v)
    bwd = ball_to_half_space(x - scale * v)
    return (fwd - bwd) / (2.0 * scale)


# ---------------------------------------------------------------------------
# geodesics


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Complete unit-speed geodesic, stored by its half-space description.

    kind "vertical": t -> (foot, height * exp(sign * t))
    kind "arc":      t -> (center + radius * tanh(t + tau0) * axis, radius / cosh(t + tau0))
    """
    chart: ModelChart
    kind: str
    foot: np.ndarray | None = None
    height: float = 1.0
    sign: float = 1.0
    center: np.ndarray | None = None
    radius: float = 1.0
    axis: np.ndarray | None = None
    tau0: float = 0.0

    @property
    def dim(self):
        return self.chart.dim

    def half_space_coords(self, t):
        t = np.asarray(t, dtype=float)
        n = self.dim
        out = np.empty(t.shape + (n,))
        if self.kind == "vertical":
            out[..., :-1] = self.foot
            out[..., -1] = self.height * np.exp(self.sign * t)
        else:
            s = t + self.tau0
            out[..., :-1] = self.center + self.radius * np.tanh(s)[..., None] * self.axis
            out[..., -1] = self.radius / np.cosh(s)
        return out

    def half_space_velocity(self, t):
        t = np.asarray(t, dtype=float)
        n = self.dim
        out = np.zeros(t.shape + (n,))
        if self.kind == "vertical":
            out[..., -1] = self.sign * self.height * np.exp(self.sign * t)
        else:
            s = t + self.tau0
            sech = 1.0 / np.cosh(s)
            out[..., :-1] = self.radius * (sech ** 2)[..., None] * self.axis
            out[..., -1] = -self.radius * sech * np.tanh(s)
        return out

    def __call__(self, t):
        return from_half_space(self.half_space_coords(t), self.chart.kind)

    def point(self, t):
        return HPoint(self.chart, self(float(t)))

    def ideal_endpoints_half_space(self):
        """(backward, forward) ideal points as R^{n-1} arrays, None meaning infinity."""
        if self.kind == "vertical":
            return (self.foot, None) if self.sign > 0 else (None, self.foot)
        return self.center - self.radius * self.axis, self.center + self.radius * self.axis

    def endpoints(self):
        back, fwd = self.ideal_endpoints_half_space()
        hs = half_space(self.dim)
        pts = (BoundaryPoint(hs, back), BoundaryPoint(hs, fwd))
        if self.chart.kind is Model.BALL:
            return tuple(p.to_ball() for p in pts)
        return pts

    def leaf_coordinate(self, x):
        """Foot-of-perpendicular parameter of half-space points x on this geodesic.

        log(|x - back| / |x - fwd|) is constant on the hyperplanes orthogonal to
        the geodesic and grows with unit rate along it.
        """
        x = np.asarray(x, dtype=float)
        back, fwd = self.ideal_endpoints_half_space()

        def potential(y):
            val = 0.0
            if back is not None:
                val = val + 0.5 * np.log(_sq_to_ideal(y, back))
            if fwd is not None:
                val = val - 0.5 * np.log(_sq_to_ideal(y, fwd))
            return val

        return potential(x) - potential(self.half_space_coords(0.0))

    def leaf_normal(self, x):
        """Unit hyperbolic normal (half-space components) of the leaf through x."""
        x = np.asarray(x, dtype=float)
        back, fwd = self.ideal_endpoints_half_space()
        grad = np.zeros_like(x)
        if back is not None:
            d = x - _ideal_as_point(back, x.shape[-1])
            grad = grad + d / np.sum(d * d, axis=-1)[..., None]
        if fwd is not None:
            d = x - _ideal_as_point(fwd, x.shape[-1])
            grad = grad - d / np.sum(d * d, axis=-1)[..., None]
        hyp = grad * (x[..., -1] ** 2)[..., None]
        norm = np.sqrt(np.sum(hyp * hyp, axis=-1)) / x[..., -1]
        return hyp / norm[..., None]

    def to_json(self):
        back, fwd = self.endpoints()
        return {
            "chart": self.chart.kind.value,
            "start": self.point(0.0).to_json(),
            "backward_end": back.to_json(),
            "forward_end": fwd.to_json(),
        }


def _ideal_as_point(xi, n):
    p = np.zeros(n)
    p[:-1] = xi
    return p


def _sq_to_ideal(x, xi):
    d = x - _ideal_as_point(xi, x.shape[-1])
    return np.sum(d * d, axis=-1)


def geodesic_from(p, direction):
    """Geodesic with gamma(0) = p and gamma'(0) parallel to `direction` (chart components)."""
    x = to_half_space(p.coords, p.chart.kind)
    v = _pushforward_to_half_space(p.coords, direction, p.chart.kind)
    if not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0.0:
        raise DegenerateGeodesicError("zero direction")
    v = v / np.linalg.norm(v)
    vp = v[:-1]
    horiz = np.linalg.norm(vp)
    if horiz <= 1e-14:
        return Geodesic(p.chart, "vertical", foot=x[:-1].copy(), height=float(x[-1]),
                        sign=1.0 if v[-1] > 0 else -1.0)
    e = vp / horiz
    # the radius x - center is orthogonal to v
    shift = -x[-1] * v[-1] / horiz
    center = x[:-1] - shift * e
    radius = float(np.hypot(shift, x[-1]))
    tau0 = float(np.arctanh(np.clip(shift / radius, -1.0, 1.0)))
    return Geodesic(p.chart, "arc", center=center, radius=radius, axis=e, tau0=tau0)


def geodesic_through(p, q):
    """Unit-speed geodesic with gamma(0) = p and gamma(d(p, q)) = q."""
    if p.chart != q.chart:
        raise ChartMismatchError(f"{p.chart} vs {q.chart}")
    x = to_half_space(p.coords, p.chart.kind)
    y = to_half_space(q.coords, q.chart.kind)
    if half_space_distance(x, y) < 1e-12:
        raise DegenerateGeodesicError("p and q coincide")
    dp = y[:-1] - x[:-1]
    gap = np.linalg.norm(dp)
    if gap <= 1e-14 * max(1.0, np.linalg.norm(x)):
        return Geodesic(p.chart, "vertical", foot=x[:-1].copy(), height=float(x[-1]),
                        sign=1.0 if y[-1] > x[-1] else -1.0)
    e = dp / gap
    s = (gap ** 2 + y[-1] ** 2 - x[-1] ** 2) / (2.0 * gap)
    center = x[:-1] + s * e
    radius = float(np.hypot(s, x[-1]))
    tau0 = float(np.arctanh(np.clip(-s / radius, -1.0, 1.0)))
    return Geodesic(p.chart, "arc", center=center, radius=radius, axis=e, tau0=tau0)


def geodesic_to_boundary(p, theta):
    """Geodesic from p converging to the ideal point theta as t -> +inf."""
    x = to_half_space(p.coords, p.chart.kind)
    xi = theta.to_half_space().direction
    if xi is None:
        return Geodesic(p.chart, "vertical", foot=x[:-1].copy(), height=float(x[-1]), sign=1.0)
    dp = xi - x[:-1]
    gap = np.linalg.norm(dp)
    if gap <= 1e-14 * max(1.0, np.linalg.norm(x)):
        return Geodesic(p.chart, "vertical", foot=x[:-1].copy(), height=float(x[-1]), sign=-1.0)
    e = dp / gap
    s = (gap ** 2 - x[-1] ** 2) / (2.0 * gap)
    center = x[:-1] + s * e
    radius = float(np.hypot(s, x[-1]))
    tau0 = float(np.arctanh(np.clip(-s / radius, -1.0, 1.0)))
    return Geodesic(p.chart, "arc", center=center, radius=radius, axis=e, tau0=tau0)


def geodesic_residual(geo, t, h=1e-4):
    """Geodesic-equation residual  x'' + G(x)(x', x')  by central differences, in the output chart."""
    t = np.asarray(t, dtype=float)
    x0 = geo(t)
    xp = geo(t + h)
    xm = geo(t - h)
    vel = (xp - xm) / (2.0 * h)
    acc = (xp - 2.0 * x0 + xm) / h ** 2
    gam = christoffel_array(x0, geo.chart.kind)
    return acc + np.einsum("...kij,...i,...j->...k", gam, vel, vel)


# ---------------------------------------------------------------------------
# totally geodesic hyperplanes


@dataclass(frozen=True, eq=False)
class TotallyGeodesicHyperplane:
    """Half-space description:

    kind "plane":  {<normal, x'> = offset}     (vertical Euclidean hyperplane)
    kind "sphere": {|x - (center, 0)| = radius} (hemisphere on the boundary)

    `orientation` fixes the sign of `signed_distance`.
    """
    chart: ModelChart
    kind: str
    normal: np.ndarray | None = None
    offset: float = 0.0
    center: np.ndarray | None = None
    radius: float = 1.0
    orientation: float = 1.0
    _cap: tuple = field(default=None, repr=False)

    @property
    def dim(self):
        return self.chart.dim

    def _level(self, x):
        if self.kind == "plane":
            return (x[..., :-1] @ self.normal - self.offset) / x[..., -1]
        d = x.copy()
        d[..., :-1] -= self.center
        return (np.sum(d * d, axis=-1) - self.radius ** 2) / (2.0 * self.radius * x[..., -1])

    def signed_distance(self, x, model=Model.HALF_SPACE):
        """Signed hyperbolic distance of chart points x (arrays allowed)."""
        x = to_half_space(x, model)
        return self.orientation * np.arcsinh(self._level(x))

    def unit_normal(self, x):
        """Hyperbolic unit normal field (half-space components) of the parallel hypersurfaces."""
        x = np.asarray(x, dtype=float)
        f = self._level(x)
        xn = x[..., -1]
        if self.kind == "plane":
            grad = np.zeros_like(x)
            grad[..., :-1] = self.normal / xn[..., None]
            grad[..., -1] = -f / xn
        else:
            d = x.copy()
            d[..., :-1] -= self.center
            grad = d / (self.radius * xn)[..., None]
            grad[..., -1] -= f / xn
        grad = grad / np.sqrt(1.0 + f * f)[..., None]
        return self.orientation * grad * (xn ** 2)[..., None]

    def contains(self, p, tol=1e-8):
        return abs(float(self.signed_distance(p.coords, p.chart.kind))) < tol

    def normalizing_isometry(self):
        """Isometry T of the half-space with T(Q) = {x_1 = 0} and the positive side mapped to x_1 > 0."""
        n = self.dim
        if n < 2:
            raise ValueError("hyperplanes of H^1 are points; no normal form")
        if self.kind == "plane":
            a = self.normal
            off = self.offset
            sgn = self.orientation

            def inv(x):
                return x
        else:
            b = np.zeros(n)
            b[:-1] = self.center
            b[0] += self.radius
            # inversion centred on an ideal point of Q sends Q to a vertical plane
            a = np.zeros(n - 1)
            a[0] = 1.0
            off = b[0] - 1.0 / (2.0 * self.radius)
            sgn = self.orientation

            def inv(x):
                d = x - b
                return b + d / np.sum(d * d, axis=-1)[..., None]
        house = _householder_to_e1(a)

        def transform(x):
            y = inv(np.asarray(x, dtype=float))
            out = y.copy()
            out[..., :-1] = (y[..., :-1] - off * a) @ house.T
            out[..., 0] *= sgn
            return out

        return transform

    def ideal_cap(self):
        """(axis, angular radius) of the ideal boundary as a circle on the ball's unit sphere."""
        if self._cap is not None:
            return self._cap
        pts = self._ideal_samples_ball()
        mat = np.hstack([pts, -np.ones((pts.shape[0], 1))])
        _, _, vt = np.linalg.svd(mat)
        w, kappa = vt[-1, :-1], vt[-1, -1]
        if kappa < 0:
            w, kappa = -w, -kappa
        norm = np.linalg.norm(w)
        axis = w / norm
        beta = float(np.arccos(np.clip(kappa / norm, -1.0, 1.0)))
        object.__setattr__(self, "_cap", (axis, beta))
        return axis, beta

    def _ideal_samples_ball(self):
        n = self.dim
        rng = np.random.default_rng(12345)
        if n == 1:
            raise ValueError("no ideal circle in dimension 1")
        if self.kind == "plane":
            pts = []
            base = self.offset * self.normal
            basis = _orth_complement(self.normal)
            for _ in range(n - 1):
                pts.append(boundary_half_space_to_ball(base + basis @ rng.normal(size=basis.shape[1])))
            north = np.zeros(n)
            north[-1] = 1.0
            pts.append(north)
            return np.array(pts)
        dirs = rng.normal(size=(n, n - 1))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        return boundary_half_space_to_ball(self.center + self.radius * dirs)

    def angular_distance_to_ideal(self, theta):
        """Angle on the unit sphere between the ball ideal point theta and the ideal boundary of Q."""
        axis, beta = self.ideal_cap()
        d = theta.to_ball().direction
        return float(abs(angle_between(d, axis) - beta))

    def to_json(self):
        data = {"chart": self.chart.kind.value, "kind": self.kind, "orientation": self.orientation}
        if self.kind == "plane":
            data.update(normal=self.normal.tolist(), offset=float(self.offset))
        else:
            data.update(center=self.center.tolist(), radius=float(self.radius))
        return data


def _householder_to_e1(a):
    a = np.asarray(a, dtype=float)
    m = a.shape[0]
    e1 = np.zeros(m)
    e1[0] = 1.0
    v = a - e1
    if np.linalg.norm(v) < 1e-14:
        return np.eye(m)
    return np.eye(m) - 2.0 * np.outer(v, v) / (v @ v)


def _orth_complement(a):
    a = np.asarray(a, dtype=float).reshape(-1, 1)
    q, _ = np.linalg.qr(np.hstack([a, np.eye(a.shape[0])]))
    return q[:, 1:a.shape[0]]


def hyperplane_through(p, unit_normal):
    """Totally geodesic hyperplane through p orthogonal to `unit_normal` (chart components)."""
    v = np.asarray(unit_normal, dtype=float)
    if v.shape != (p.dim,) or not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0.0:
        raise ValueError("hyperplane normal must be a nonzero vector of the chart dimension")
    x = to_half_space(p.coords, p.chart.kind)
    w = _pushforward_to_half_space(p.coords, v, p.chart.kind)
    w = w / np.linalg.norm(w)
    if abs(w[-1]) <= 1e-13:
        a = w[:-1] / np.linalg.norm(w[:-1])
        return TotallyGeodesicHyperplane(p.chart, "plane", normal=a, offset=float(a @ x[:-1]))
    s = x[-1] / w[-1]
    center = x[:-1] - s * w[:-1]
    return TotallyGeodesicHyperplane(p.chart, "sphere", center=center, radius=float(abs(s)),
                                     orientation=float(np.sign(s)))


# ---------------------------------------------------------------------------
# the hyperbolic space as an ambient manifold for the hypersurface machinery


class HyperbolicSpace:
    """H^n in half-space coordinates, exposing the array interface used by `forms`."""

    has_height = False

    def __init__(self, n):
        self.base_dim = n
        self.dim = n

    def metric(self, x):
        return metric_array(x, Model.HALF_SPACE)

    def christoffel(self, x):
        return christoffel_array(x, Model.HALF_SPACE)

    def check(self, x):
        check_domain(x, Model.HALF_SPACE)

    def __repr__(self):
        return f"HyperbolicSpace({self.base_dim})"
