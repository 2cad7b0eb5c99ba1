"""Parabolic-invariant hypersurfaces with a simple end.

The profile u(t) = c1 log(t - t1) + c2 log(t2 - t) on (t1, t2) is spun around by
the horizontal translations of the half-space, giving

    phi(x_1, ..., x_{n-1}, t) = (x_1, ..., x_{n-1}, u(t), t).

With c1, c2 < 0 and t2 - t1 <= 1/e the result is strictly convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .forms import Box, ImmersedHypersurface
from .hyperbolic import DomainError
from .product import ProductSpace
from .sampling import jitter_axis, sample_grid

INV_E = math.exp(-1.0)


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class ProfileParams:
    c1: float
    c2: float
    t1: float
    t2: float

    def __post_init__(self):
        for name in ("c1", "c2", "t1", "t2"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if not self.c1 < 0:
            raise ParameterError("c1 must be negative")
        if not self.c2 < 0:
            raise ParameterError("c2 must be negative")
        if not self.t1 < self.t2:
            raise ParameterError("t1 must be smaller than t2")

    @property
    def width(self):
        return self.t2 - self.t1

    @property
    def satisfies_condition2(self):
        return self.width <= INV_E

    def to_json(self):
        return {"c1": self.c1, "c2": self.c2, "t1": self.t1, "t2": self.t2,
                "satisfies_condition2": self.satisfies_condition2}


def _check_t(params, t, margin=1e-12):
    t = np.asarray(t, dtype=float)
    if np.any(t - params.t1 < margin) or np.any(params.t2 - t < margin):
        raise DomainError(f"t must lie inside ({params.t1}, {params.t2})")
    return t


def profile(params, t):
    """u, u_t, u_tt at t (arrays allowed)."""
    t = _check_t(params, t)
    a = t - params.t1
    b = params.t2 - t
    c1, c2 = params.c1, params.c2
    return {
        "u": c1 * np.log(a) + c2 * np.log(b),
        "u_t": c1 / a - c2 / b,
        "u_tt": -c1 / a ** 2 - c2 / b ** 2,
    }


def critical_time(params):
    """Where u_t = 0:  c1 (t2 - t) = c2 (t - t1)."""
    return (params.c1 * params.t2 + params.c2 * params.t1) / (params.c1 + params.c2)


def margin(params, t):
    """-u_t^2 + u u_tt, evaluated from the profile directly."""
    p = profile(params, t)
    return -p["u_t"] ** 2 + p["u"] * p["u_tt"]


def margin_expansion(params, t):
    """Same quantity, expanded term by term in a = t - t1, b = t2 - t.

    -c1^2/a^2 (1 + ln a) - c2^2/b^2 (1 + ln b)
        + c1 c2/(a b) [2 - (a/b) ln a - (b/a) ln b]
    Each term is positive when a, b < 1/e and c1, c2 < 0.
    """
    t = _check_t(params, t)
    a = t - params.t1
    b = params.t2 - t
    c1, c2 = params.c1, params.c2
    la, lb = np.log(a), np.log(b)
    return (-c1 ** 2 / a ** 2 * (1.0 + la) - c2 ** 2 / b ** 2 * (1.0 + lb)
            + c1 * c2 / (a * b) * (2.0 - (a / b) * la - (b / a) * lb))


@dataclass
class ClosedFormGeometry:
    t: np.ndarray
    lam: np.ndarray
    m: np.ndarray
    g: np.ndarray
    b: np.ndarray
    normal: np.ndarray
    mu: np.ndarray
    principal_curvatures: np.ndarray


def closed_form_geometry(params, n, t):
    """Forms of the example at height parameter t (any x), in the frame (d_1..d_n, d_t).

    `mu` is the diagonal of the coefficient matrix (b_ij); the shape-operator
    eigenvalues are mu_i / g_ii.
    """
    if n < 2:
        raise ParameterError("n must be at least 2")
    t = np.asarray(t, dtype=float)
    p = profile(params, t)
    u, ut, utt = p["u"], p["u_t"], p["u_tt"]
    if np.any(u <= 0):
        raise DomainError("profile is not positive here; the half-space needs u > 0")
    lam = 1.0 / u
    m = np.sqrt(1.0 + lam ** 2 * ut ** 2)
    shape = t.shape
    g = np.zeros(shape + (n, n))
    b = np.zeros(shape + (n, n))
    for i in range(n - 1):
        g[..., i, i] = lam ** 2
        b[..., i, i] = lam ** 2 / m
    g[..., n - 1, n - 1] = lam ** 2 * ut ** 2 + 1.0
    b[..., n - 1, n - 1] = lam * (-lam * ut ** 2 + utt) / m
    normal = np.zeros(shape + (n + 1,))
    normal[..., n - 1] = 1.0 / (lam * m)
    normal[..., n] = -lam * ut / m
    mu = np.diagonal(b, axis1=-2, axis2=-1).copy()
    curv = np.sort(mu / np.diagonal(g, axis1=-2, axis2=-1), axis=-1)
    return ClosedFormGeometry(t, lam, m, g, b, normal, mu, curv)


@dataclass
class MarginReport:
    min_margin: float
    argmin_t: float
    all_positive: bool
    satisfies_condition2: bool
    profile_invalid: list

    def to_json(self):
        return {"min_margin": self.min_margin, "argmin_t": self.argmin_t,
                "all_positive": self.all_positive,
                "satisfies_condition2": self.satisfies_condition2,
                "profile_invalid": self.profile_invalid}


def lemma51_margin(params, grid_size=400):
    """Minimum of -u_t^2 + u u_tt over a uniform interior grid, refined by a bounded scalar minimization."""
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    w = params.width
    t = params.t1 + w * (np.arange(grid_size) + 0.5) / grid_size
    vals = margin(params, t)
    k = int(np.argmin(vals))
    best_t, best = float(t[k]), float(vals[k])
    if 0 < k < grid_size - 1:
        res = optimize.minimize_scalar(lambda s: float(margin(params, s)),
                                       bounds=(t[k - 1], t[k + 1]), method="bounded",
                                       options={"xatol": 1e-14 * w})
        if res.fun < best and params.t1 < res.x < params.t2:
            best_t, best = float(res.x), float(res.fun)
    u = profile(params, t)["u"]
    invalid = _runs(t, u <= 0.0)
    report = MarginReport(best, best_t, bool(best > 0.0), params.satisfies_condition2, invalid)
    if params.satisfies_condition2 and not report.all_positive:
        raise AssertionError(f"margin not positive under the width condition: {best}")
    return report


def _runs(t, mask):
    out = []
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return out
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    ends = np.concatenate([idx[breaks], [idx[-1]]])
    return [[float(t[s]), float(t[e])] for s, e in zip(starts, ends)]


class ParabolicExample(ImmersedHypersurface):
    """The example hypersurface, sampled on a grid covering |x_i| <= x_max.

    Parameters
    ----------
    params : ProfileParams
    n : int
        Dimension of the hypersurface (ambient H^n x R).
    x_max : float
        Truncation of the translation directions.
    delta : float
        Relative truncation of the height interval (t1 + delta w, t2 - delta w).
    x_scale, x_step : float
        Horizontal grid nodes a sinh(beta k), k integer.  Grids for larger x_max
        contain the smaller ones.
    t_count : int
        Nodes in the height direction (logistic spacing, dense near t1 and t2).
    """

    def __init__(self, params, n, x_max=50.0, delta=1e-6, x_scale=1.0, x_step=None,
                 t_count=None, jitter=0.0, seed=None):
        if n < 2:
            raise ParameterError("n must be at least 2")
        self.params = params
        self.x_max = float(x_max)
        self.delta = float(delta)
        self.x_scale = float(x_scale)
        self.x_step = float(x_step if x_step is not None else (0.1 if n == 2 else 0.3))
        self.t_count = int(t_count if t_count is not None else (61 if n == 2 else 31))
        self.jitter = float(jitter)
        self.seed = seed
        w = params.width
        lo_t, hi_t = params.t1 + delta * w, params.t2 - delta * w
        u_check = profile(params, np.linspace(lo_t, hi_t, 2001))["u"]
        if np.any(u_check <= 0):
            raise DomainError("profile u(t) is not positive on the interval; no half-space surface")
        lo = np.concatenate([-np.full(n - 1, x_max), [lo_t]])
        hi = np.concatenate([np.full(n - 1, x_max), [hi_t]])
        ref = np.concatenate([np.zeros(n - 1), [critical_time(params)]])
        super().__init__(ProductSpace(n), Box(lo, hi), self._phi_closed, self._jac_closed,
                         self._hess_closed, reference=ref, orientation=1.0, name="parabolic-example")
        # orientation: <N, d_n> > 0 at the reference parameter
        from .forms import fundamental_forms

        if fundamental_forms(self, ref).normal[n - 1] < 0:
            self.orientation = -1.0

    def _phi_closed(self, u):
        n = self.n
        out = np.empty(u.shape[:-1] + (n + 1,))
        out[..., : n - 1] = u[..., : n - 1]
        out[..., n - 1] = profile(self.params, u[..., n - 1])["u"]
        out[..., n] = u[..., n - 1]
        return out

    def _jac_closed(self, u):
        n = self.n
        p = profile(self.params, u[..., n - 1])
        jac = np.zeros(u.shape[:-1] + (n + 1, n))
        for i in range(n - 1):
            jac[..., i, i] = 1.0
        jac[..., n - 1, n - 1] = p["u_t"]
        jac[..., n, n - 1] = 1.0
        return jac

    def _hess_closed(self, u):
        n = self.n
        p = profile(self.params, u[..., n - 1])
        hess = np.zeros(u.shape[:-1] + (n + 1, n, n))
        hess[..., n - 1, n - 1, n - 1] = p["u_tt"]
        return hess

    # -- sampling --------------------------------------------------------------
    @property
    def truncation(self):
        return self.x_max

    def axes(self):
        a, beta = self.x_scale, self.x_step
        K = int(math.ceil(math.asinh(self.x_max / a) / beta - 1e-9))
        x = a * np.sinh(beta * np.arange(-K, K + 1))
        w = self.params.width
        lim = math.log((1.0 - self.delta) / self.delta)
        xi = np.linspace(-lim, lim, self.t_count)
        s = self.params.t1 + w / (1.0 + np.exp(-xi))
        s[0], s[-1] = self.domain.lo[-1], self.domain.hi[-1]
        axes = [jitter_axis(x, self.jitter, self.seed, i) for i in range(self.n - 1)]
        axes.append(jitter_axis(s, self.jitter, self.seed, self.n - 1))
        return axes

    def sample(self, with_forms=True):
        return sample_grid(self, self.axes(), self.truncation, with_forms)

    def rescaled(self, factor):
        out = ParabolicExample(self.params, self.n, self.x_max * factor, self.delta, self.x_scale,
                               self.x_step, self.t_count, self.jitter, self.seed)
        out.offset = self.offset.copy()
        return out

    def with_sampling(self, jitter, seed):
        out = self.rescaled(1.0)
        out.jitter, out.seed = float(jitter), seed
        return out

    def describe(self):
        return {"kind": "analytic-example", "n": self.n, "params": self.params.to_json(),
                "x_max": self.x_max, "delta": self.delta, "translation": self.offset[: self.n - 1].tolist()}


def build_example(params, n, **sampling):
    if n < 2:
        raise ParameterError("n must be at least 2")
    return ParabolicExample(params, n, **sampling)
