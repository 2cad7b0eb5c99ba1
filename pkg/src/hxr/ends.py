"""Behaviour of pi(Sigma) at infinity: boundary clusters and the simple-end check.

All boundary analysis happens in the Poincare ball.  A vertex is a candidate for
accumulation when its projection is far from the ball origin: beyond the radius
rho (as a hyperbolic distance) and within `shell` of the farthest projection.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from .hyperbolic import (
    BoundaryPoint,
    HPoint,
    angle_between,
    ball,
    half_space,
    half_space_distance,
    half_space_to_ball,
    hyperplane_through,
)


def thread_count():
    try:
        return max(1, int(os.environ.get("HXR_THREADS", "1")))
    except ValueError:
        return 1


def base_origin(n):
    o = np.zeros(n)
    o[-1] = 1.0
    return o


@dataclass
class BoundaryCluster:
    theta: BoundaryPoint
    angular_diameter: float
    size: int

    def to_json(self):
        return {"theta": self.theta.to_json(), "angular_diameter": self.angular_diameter,
                "size": self.size}


@dataclass
class AccumulationResult:
    clusters: list
    d_max: float
    d_floor: float
    candidates: int
    truncation: float
    compact: bool = False
    history: list = field(default_factory=list)

    def to_json(self):
        return {"clusters": [c.to_json() for c in self.clusters], "d_max": self.d_max,
                "d_floor": self.d_floor, "candidates": self.candidates,
                "truncation": self.truncation, "compact": self.compact, "history": self.history}


def angular_diameter(dirs, cap=2000):
    """Largest pairwise angle; for big sets, among the `cap` directions farthest from the mean."""
    if len(dirs) < 2:
        return 0.0
    mean = dirs.mean(axis=0)
    mean /= np.linalg.norm(mean)
    if len(dirs) > cap:
        far = np.argsort(-angle_between(dirs, mean), kind="stable")[:cap]
        dirs = dirs[far]
    dots = np.clip(dirs @ dirs.T, -1.0, 1.0)
    i, j = np.unravel_index(np.argmin(dots), dots.shape)
    return float(angle_between(dirs[i], dirs[j]))


def accumulation_set(S, rho=0.999, shell=0.5, link=0.1):
    """Cluster the far projected vertices of a sample by angular proximity."""
    n = S.n
    base = S.points[:, :-1]
    d = half_space_distance(base, base_origin(n))
    d_floor = 2.0 * math.atanh(rho)
    d_max = float(np.max(d))
    cut = max(d_floor, d_max - shell)
    cand = np.flatnonzero(d >= cut)
    if cand.size == 0:
        return AccumulationResult([], d_max, d_floor, 0, S.truncation)
    y = half_space_to_ball(base[cand])
    dirs = y / np.linalg.norm(y, axis=1, keepdims=True)
    # single linkage at angle `link` = components of the chord-radius graph
    chord = 2.0 * math.sin(0.5 * link)
    pairs = cKDTree(dirs).query_pairs(chord, output_type="ndarray")
    m = len(dirs)
    graph = sparse.coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(m, m)) \
        if len(pairs) else sparse.coo_matrix((m, m))
    ncomp, labels = sparse.csgraph.connected_components(graph, directed=False)
    clusters = []
    for c in range(ncomp):
        members = dirs[labels == c]
        mean = members.mean(axis=0)
        theta = BoundaryPoint(ball(n), mean / np.linalg.norm(mean))
        clusters.append(BoundaryCluster(theta, angular_diameter(members), int(len(members))))
    clusters.sort(key=lambda c: -c.size)
    return AccumulationResult(clusters, d_max, d_floor, int(cand.size), S.truncation)


@dataclass
class EndsState:
    surface: object
    sample: object
    result: AccumulationResult


def enlarged_accumulation(surface, rho=0.999, shell=0.5, link=0.1, max_doublings=8, growth=0.1):
    """Double the truncation until the shell clears the radius rho.

    Stops early, reporting a compact projection, when the farthest projection
    no longer moves under doubling.
    """
    current = surface
    sample = current.sample(with_forms=False)
    res = accumulation_set(sample, rho, shell, link)
    history = [{"truncation": current.truncation, "d_max": res.d_max}]
    compact = False
    for _ in range(max_doublings):
        if res.d_max - shell >= res.d_floor:
            break
        nxt = current.rescaled(2.0)
        s2 = nxt.sample(with_forms=False)
        r2 = accumulation_set(s2, rho, shell, link)
        history.append({"truncation": nxt.truncation, "d_max": r2.d_max})
        if r2.d_max < res.d_max + growth:
            compact = True
            break
        current, sample, res = nxt, s2, r2
    if compact or res.d_max - shell < res.d_floor:
        res.clusters = []
        compact = compact or res.candidates == 0
    res.compact = compact
    res.history = history
    return EndsState(current, sample, res)


def diameter_scan(surface, doublings=3, rho=0.999, shell=0.5, link=0.1):
    """Cluster count and largest-cluster diameter at truncations X, 2X, 4X, ..."""
    rows = []
    current = surface
    for k in range(doublings + 1):
        res = accumulation_set(current.sample(with_forms=False), rho, shell, link)
        rows.append({"truncation": current.truncation, "clusters": len(res.clusters),
                     "diameter": res.clusters[0].angular_diameter if res.clusters else None,
                     "theta": res.clusters[0].theta.to_json() if res.clusters else None})
        if k < doublings:
            current = current.rescaled(2.0)
    return rows


# ---------------------------------------------------------------------------
# hyperplane traces


def hyperplane_trace(S, Q):
    """Points of pi(S) on Q: projected edges whose endpoints lie on opposite sides."""
    base = S.points[:, :-1]
    sd = Q.signed_distance(base)
    a, b = S.edges[:, 0], S.edges[:, 1]
    cross = (sd[a] * sd[b] < 0)
    s = sd[a[cross]] / (sd[a[cross]] - sd[b[cross]])
    pts = (1.0 - s)[:, None] * base[a[cross]] + s[:, None] * base[b[cross]]
    on = base[sd == 0.0]
    return np.concatenate([pts, on], axis=0)


@dataclass
class HyperplaneVerdict:
    hyperplane: object
    status: str
    angular_distance: float
    radius_low: float | None = None
    radius_high: float | None = None

    def to_json(self):
        return {"hyperplane": self.hyperplane.to_json(), "status": self.status,
                "angular_distance_to_theta": self.angular_distance,
                "trace_radius": self.radius_low, "trace_radius_doubled": self.radius_high}


@dataclass
class SimpleEndReport:
    verdicts: list
    passed: bool

    def to_json(self):
        return {"passed": self.passed, "hyperplanes": [v.to_json() for v in self.verdicts]}


def _trace_radius(S, Q):
    pts = hyperplane_trace(S, Q)
    if len(pts) == 0:
        return 0.0
    return float(np.max(half_space_distance(pts, base_origin(S.n))))


def verify_simple_end(surface, theta, hyperplanes, angular_tol=0.1, r_max=25.0, growth_tol=0.25,
                      samples=None):
    """Each hyperplane either accumulates at theta or meets pi(Sigma) boundedly.

    Bounded means: all trace points within r_max of the base origin, and the
    farthest trace point moves by less than growth_tol when the truncation doubles.
    """
    if samples is None:
        samples = (surface.sample(with_forms=False), surface.rescaled(2.0).sample(with_forms=False))
    lo, hi = samples

    def judge(Q):
        ang = Q.angular_distance_to_ideal(theta)
        if ang < angular_tol:
            return HyperplaneVerdict(Q, "accumulates-at-theta", ang)
        r_lo, r_hi = _trace_radius(lo, Q), _trace_radius(hi, Q)
        ok = r_hi <= r_max and r_hi - r_lo < growth_tol
        return HyperplaneVerdict(Q, "bounded" if ok else "unbounded", ang, r_lo, r_hi)

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(judge, hyperplanes))
    else:
        verdicts = [judge(Q) for Q in hyperplanes]
    passed = all(v.status != "unbounded" for v in verdicts)
    return SimpleEndReport(verdicts, passed)


def random_hyperplanes(S, count, rng, theta=None, angular_tol=0.1, max_tries=1000):
    """Hyperplanes through random projected vertices with random normals.

    With theta given, hyperplanes whose ideal boundary passes within angular_tol
    of theta are redrawn.
    """
    n = S.n
    chart = half_space(n)
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        v = int(rng.integers(S.size))
        normal = rng.normal(size=n)
        Q = hyperplane_through(HPoint(chart, S.points[v, :-1]), normal / np.linalg.norm(normal))
        if theta is not None and Q.angular_distance_to_ideal(theta) < angular_tol:
            continue
        out.append(Q)
    return out
