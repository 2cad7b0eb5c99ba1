"""Fundamental forms of immersed hypersurfaces in H^n x R (or H^n).

A hypersurface is a parametrization phi: U -> ambient coordinates with first and
second partials supplied in closed form or estimated by central differences.
Everything is vectorized over a leading batch of parameter points.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from .product import ProductSpace

TOL_TANGENCY = 1e-6
TOL_TRANSVERSAL = 1e-4


class ImmersionError(ValueError):
    pass


class TransversalityError(ValueError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


@dataclass(frozen=True)
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))

    @property
    def center(self):
        return 0.5 * (self.lo + self.hi)

    def contains(self, u):
        u = np.asarray(u, dtype=float)
        return np.all((u >= self.lo) & (u <= self.hi), axis=-1)


def fd_derivatives(evaluate, base_shape, n, steps):
    """First and second partials from a 3-point / 4-point central stencil.

    evaluate(offsets) takes offsets of shape base_shape + (K, n) and returns
    ambient points of shape base_shape + (K, D).
    """
    steps = np.broadcast_to(np.asarray(steps, dtype=float), base_shape + (n,))
    stencil = [np.zeros(n)]
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        stencil += [e, -e]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                e = np.zeros(n)
                e[i], e[j] = si, sj
                stencil.append(e)
    stencil = np.array(stencil)
    offsets = stencil * steps[..., None, :]
    vals = evaluate(offsets)
    f0 = vals[..., 0, :]
    D = vals.shape[-1]
    jac = np.empty(base_shape + (D, n))
    hess = np.empty(base_shape + (D, n, n))
    for i in range(n):
        h = steps[..., i][..., None]
        fp, fm = vals[..., 1 + 2 * i, :], vals[..., 2 + 2 * i, :]
        jac[..., :, i] = (fp - fm) / (2.0 * h)
        hess[..., :, i, i] = (fp - 2.0 * f0 + fm) / h ** 2
    k = 1 + 2 * n
    for i, j in pairs:
        hij = (steps[..., i] * steps[..., j])[..., None]
        pp, pm, mp, mm = (vals[..., k + m, :] for m in range(4))
        hess[..., :, i, j] = hess[..., :, j, i] = (pp - pm - mp + mm) / (4.0 * hij)
        k += 4
    return f0, jac, hess


class ImmersedHypersurface:
    """phi: U subset R^n -> ambient coordinates, with optional closed-form derivatives.

    Parameters
    ----------
    ambient : ProductSpace or HyperbolicSpace
    domain : Box
        Sampling box for the parameters.
    phi : callable
        Vectorized map (..., n) -> (..., D).
    jacobian, hessian : callable, optional
        (..., n) -> (..., D, n) and (..., D, n, n).  Missing ones are estimated
        with central differences of step `fd_step` (per coordinate).
    orientation : float, optional
        Sign applied to the cross-product normal.  By default the sign is chosen
        at the reference parameter so that the shape operator has positive trace.
    """

    def __init__(self, ambient, domain, phi, jacobian=None, hessian=None,
                 reference=None, orientation=None, fd_step=None, name="surface"):
        self.ambient = ambient
        self.domain = domain
        self.n = domain.lo.shape[0]
        if self.n != ambient.dim - 1:
            raise ValueError(f"a hypersurface of {ambient!r} needs {ambient.dim - 1} parameters")
        self._phi = phi
        self._jac = jacobian
        self._hess = hessian
        self.fd_step = fd_step
        self.reference = domain.center if reference is None else np.asarray(reference, dtype=float)
        self.offset = np.zeros(ambient.dim)
        self.name = name
        self.orientation = 1.0
        if orientation is None:
            ff = fundamental_forms(self, self.reference)
            if np.trace(np.linalg.solve(ff.g, ff.b)) < 0:
                self.orientation = -1.0
        else:
            self.orientation = float(orientation)

    # -- evaluation --------------------------------------------------------
    def _steps(self, u):
        if self.fd_step is not None:
            return np.broadcast_to(np.asarray(self.fd_step, dtype=float), u.shape)
        return 1e-4 * np.maximum(1.0, np.abs(u))

    def point(self, u):
        return self._phi(np.asarray(u, dtype=float)) + self.offset

    def derivatives(self, u):
        """(points, jacobian, hessian) at parameter points u of shape (..., n)."""
        u = np.asarray(u, dtype=float)
        if self._jac is not None and self._hess is not None:
            return self.point(u), self._jac(u), self._hess(u)
        # difference the untranslated map: the offset is constant and would only cost digits
        x, jac, hess = fd_derivatives(lambda off: self._phi(u[..., None, :] + off),
                                      u.shape[:-1], self.n, self._steps(u))
        x = x + self.offset
        if self._jac is not None:
            jac = self._jac(u)
        return x, jac, hess

    def translated(self, a):
        """Image under the parabolic isometry F_a."""
        out = copy.copy(self)
        off = self.offset.copy()
        off[: len(a)] += np.asarray(a, dtype=float)
        out.offset = off
        return out

    # -- source protocol used by the sampler ---------------------------------
    def forms_at(self, params):
        return fundamental_forms(self, params)

    def interpolate(self, pa, pb, s):
        s = np.asarray(s, dtype=float)[..., None]
        return (1.0 - s) * pa + s * pb

    def local_patch(self, param):
        return self, np.asarray(param, dtype=float)

    def __repr__(self):
        return f"ImmersedHypersurface({self.name}, n={self.n})"


@dataclass
class FundamentalForms:
    """Batched forms: arrays carry the same leading shape as `at`."""
    at: np.ndarray
    point: np.ndarray
    tangents: np.ndarray
    g: np.ndarray
    b: np.ndarray
    normal: np.ndarray
    principal_curvatures: np.ndarray

    @property
    def normal_height(self):
        """<N, d_t>; zero exactly where the tangent hyperplane is vertical."""
        return self.normal[..., -1]

    @property
    def b_eigenvalues(self):
        """Eigenvalues of the coefficient matrix (b_ij) itself, ascending."""
        return np.linalg.eigvalsh(self.b)


def _cofactor_normal(jac):
    """Covector annihilating the columns of jac (..., D, D-1): generalized cross product."""
    D = jac.shape[-2]
    out = np.empty(jac.shape[:-2] + (D,))
    for k in range(D):
        minor = np.delete(jac, k, axis=-2)
        out[..., k] = (-1) ** k * np.linalg.det(minor)
    return out


def forms_from_derivatives(ambient, x, jac, hess, orientation=1.0):
    G = ambient.metric(x)
    g = np.einsum("...ai,...ab,...bj->...ij", jac, G, jac, optimize=True)
    cov = _cofactor_normal(jac)
    ginv = np.linalg.inv(G)
    vec = np.einsum("...ab,...b->...a", ginv, cov)
    norm = np.sqrt(np.einsum("...a,...a->...", vec, cov))
    if np.any(~np.isfinite(norm)) or np.any(norm == 0.0):
        raise ImmersionError("degenerate tangent frame")
    normal = orientation * vec / norm[..., None]
    gam = ambient.christoffel(x)
    accel = hess + np.einsum("...kab,...ai,...bj->...kij", gam, jac, jac, optimize=True)
    b = np.einsum("...kij,...kl,...l->...ij", accel, G, normal, optimize=True)
    b = 0.5 * (b + np.swapaxes(b, -1, -2))
    curv = shape_eigenvalues(g, b)
    return g, b, normal, curv


def shape_eigenvalues(g, b):
    """Eigenvalues of g^{-1} b via L = C^{-1} b C^{-T}, g = C C^T."""
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise ImmersionError("first fundamental form is not positive definite") from exc
    cinv = np.linalg.inv(chol)
    lmat = cinv @ b @ np.swapaxes(cinv, -1, -2)
    lmat = 0.5 * (lmat + np.swapaxes(lmat, -1, -2))
    return np.linalg.eigvalsh(lmat)


def fundamental_forms(S, u):
    u = np.asarray(u, dtype=float)
    x, jac, hess = S.derivatives(u)
    S.ambient.check(x)
    g, b, normal, curv = forms_from_derivatives(S.ambient, x, jac, hess, S.orientation)
    smin = np.sqrt(np.maximum(np.linalg.eigvalsh(g)[..., 0], 0.0))
    if np.any(smin <= 1e-8):
        raise ImmersionError("phi is not an immersion at some parameter (singular Jacobian)")
    return FundamentalForms(u, x, jac, g, b, normal, curv)


def first_form(S, u):
    return fundamental_forms(S, u).g


def unit_normal(S, u):
    return fundamental_forms(S, u).normal


def second_form(S, u):
    return fundamental_forms(S, u).b


def principal_curvatures(S, u):
    return fundamental_forms(S, u).principal_curvatures


@dataclass
class ConvexityReport:
    min_eigenvalue: float
    verdict: bool
    witness: np.ndarray

    def to_json(self):
        return {"min_eigenvalue": self.min_eigenvalue, "verdict": self.verdict,
                "witness": np.asarray(self.witness).tolist()}


def is_strictly_convex(S, samples, tol=1e-10):
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    kmin = fundamental_forms(S, samples).principal_curvatures[..., 0]
    i = int(np.argmin(kmin))
    return ConvexityReport(float(kmin[i]), bool(kmin[i] > tol), samples[i])


def vertical_tangency(S, u, tol=TOL_TANGENCY):
    """(flag, |<N, d_t>|): the tangent hyperplane is vertical iff N is horizontal."""
    measure = np.abs(fundamental_forms(S, u).normal_height)
    return measure < tol, measure


# ---------------------------------------------------------------------------
# transversal slices by vertical hyperplanes


@dataclass
class SliceForms:
    """Second fundamental form of the slice inside P = Q x R, at one slice point."""
    param: np.ndarray
    point: np.ndarray
    transversality: float
    g: np.ndarray
    b: np.ndarray
    principal_curvatures: np.ndarray


def transversality(normal, plane_normal, G):
    """Sine of the angle between the tangent hyperplanes (|N projected on T P|)."""
    c = np.einsum("...a,...ab,...b->...", normal, G, plane_normal)
    return np.sqrt(np.maximum(1.0 - c * c, 0.0))


def _plane_ambient_normal(P, x):
    nb = P.base_hyperplane.unit_normal(x[..., :-1])
    return np.concatenate([nb, np.zeros(x.shape[:-1] + (1,))], axis=-1)


def restrict_to_slice(S, P, u0, tol_transversal=TOL_TRANSVERSAL, step=1e-4, newton_tol=1e-14):
    """Induced forms of Sigma cap P, computed inside P through its own half-space chart.

    u0 must lie on the slice (signed distance zero up to round-off).  The slice
    is parametrized implicitly around u0 and pushed into the chart of
    P = Q x R = H^{n-1} x R; the generic pipeline is then run there.
    """
    if S.n < 2:
        raise ValueError("slicing needs a hypersurface of dimension >= 2")
    u0 = np.asarray(u0, dtype=float)
    ff = fundamental_forms(S, u0)
    G = S.ambient.metric(ff.point)
    nu = _plane_ambient_normal(P, ff.point)
    trans = float(transversality(ff.normal, nu, G))
    if trans < tol_transversal:
        raise TransversalityError(f"slice not transversal (sine {trans:.3g})", point=u0)

    def level(u):
        return P.signed_distance(S.point(u))

    grad = np.einsum("a,ab,bi->i", nu, G, ff.tangents)
    gdir = grad / np.linalg.norm(grad)
    q, _ = np.linalg.qr(np.column_stack([gdir, np.eye(S.n)]))
    basis = q[:, 1:S.n]
    # unit ambient length per slice parameter
    lengths = np.sqrt(np.einsum("ai,ab,bi->i", ff.tangents @ basis, G, ff.tangents @ basis))
    basis = basis / lengths
    slope = grad @ gdir

    def slice_param(v):
        u = u0 + v @ basis.T
        sig = np.zeros(v.shape[:-1])
        for _ in range(60):
            val = level(u + sig[..., None] * gdir)
            if np.all(np.abs(val) < newton_tol):
                break
            sig = sig - val / slope
        return u + sig[..., None] * gdir

    if not S.ambient.has_height:
        raise ValueError("vertical slices need a product ambient")
    to_plane = P.chart_map()
    dim = S.n - 1
    plane_ambient = ProductSpace(dim)
    x, jac, hess = fd_derivatives(lambda off: to_plane(S.point(slice_param(off))), (), dim, step)
    g, b, normal, curv = forms_from_derivatives(plane_ambient, x, jac, hess)
    # orient like the projection of N onto T P, pushed into the chart of P
    h = 1e-6
    pushed = (to_plane(ff.point + h * ff.normal) - to_plane(ff.point - h * ff.normal)) / (2 * h)
    if normal @ plane_ambient.metric(x) @ pushed < 0:
        b, curv = -b, -curv[::-1]
    return SliceForms(u0, ff.point, trans, g, b, curv)
