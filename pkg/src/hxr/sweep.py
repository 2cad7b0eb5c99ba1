"""Sweeping a sampled convex hypersurface by a foliation of vertical hyperplanes.

The classifier follows the sphere / vertical graph / simple end alternative:

* no vertical tangency: the surface should be a vertical graph over a convex set;
* a vertical tangency p0: sweep the leaves orthogonal to the horizontal geodesic
  leaving pi(p0) along N(p0) and watch the slices.  Slices that close up at a
  second tangency give a sphere; slices that reach the truncation (escape to
  infinity) or stay compact up to a receding horizon point to a simple end,
  which is then confirmed by the boundary analysis of `ends`.

Anything that does not fit these patterns is reported as Inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize, sparse
from scipy.spatial import cKDTree

from .ends import (
    accumulation_set,
    enlarged_accumulation,
    random_hyperplanes,
    verify_simple_end,
)
from .forms import TOL_TANGENCY, TOL_TRANSVERSAL, TransversalityError, restrict_to_slice
from .hyperbolic import (
    DegenerateGeodesicError,
    HPoint,
    geodesic_from,
    geodesic_through,
    half_space,
    half_space_distance,
    half_space_to_ball,
)
from .product import ProductSpace, VerticalFoliation

VERDICTS = ("Sphere", "VerticalGraph", "SimpleEnd", "Inconclusive")
CASES = ("Case1", "Case2", "Case3", "Case4", "GraphNoTangency")


class PreconditionError(ValueError):
    def __init__(self, message, witness=None, min_eigenvalue=None):
        super().__init__(message)
        self.witness = witness
        self.min_eigenvalue = min_eigenvalue


@dataclass
class SweepConfig:
    tol_tangency: float = TOL_TANGENCY
    tol_convex: float = 1e-10
    tol_second_tangency: float = 1e-3
    d_max: float = 50.0
    hysteresis: int = 2
    rho: float = 0.999
    shell: float = 0.5
    link: float = 0.1
    diameter_threshold: float = 0.05
    angular_tol: float = 0.1
    r_max: float = 25.0
    growth_tol: float = 0.25
    hyperplane_sample_count: int = 5
    graph_pairs: int = 200
    seed: int = 0

    @classmethod
    def from_dict(cls, data):
        known = {k: v for k, v in (data or {}).items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_json(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# vertical tangencies


@dataclass
class TangencyLocus:
    params: np.ndarray
    points: np.ndarray
    measure: np.ndarray
    vertices: np.ndarray

    def to_json(self):
        return {"size": int(len(self.params)), "vertices": int(len(self.vertices)),
                "max_measure": float(np.max(self.measure)) if len(self.measure) else 0.0}


def find_tangencies(S, tol=TOL_TANGENCY, iterations=30):
    """Vertical tangencies: vertices with |N_t| < tol plus refined sign changes on edges."""
    nt = S.normal_height
    flagged = np.flatnonzero(np.abs(nt) < tol)
    a, b = S.edges[:, 0], S.edges[:, 1]
    cross = (nt[a] * nt[b] < 0) & (np.abs(nt[a]) >= tol) & (np.abs(nt[b]) >= tol)
    ea, eb = a[cross], b[cross]
    params = [S.params[flagged]]
    measure = [np.abs(nt[flagged])]
    carrier = [flagged]
    if ea.size:
        src = S.source
        pa, pb = S.params[ea].copy(), S.params[eb].copy()
        na = nt[ea].copy()
        lo = np.zeros(len(ea))
        hi = np.ones(len(ea))
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            nm = src.forms_at(src.interpolate(pa, pb, mid)).normal_height
            same = np.sign(nm) == np.sign(na)
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        s = 0.5 * (lo + hi)
        refined = src.interpolate(pa, pb, s)
        params.append(refined)
        measure.append(np.abs(src.forms_at(refined).normal_height))
        carrier.append(np.where(np.abs(nt[ea]) <= np.abs(nt[eb]), ea, eb))
    params = np.concatenate(params)
    measure = np.concatenate(measure)
    carrier = np.concatenate(carrier)
    if len(params) == 0:
        return []
    mask = np.zeros(S.size, dtype=bool)
    mask[carrier] = True
    mask[ea] = True
    mask[eb] = True
    loci = []
    for group in S.components(mask):
        sel = np.isin(carrier, group)
        if not np.any(sel):
            continue
        loci.append(TangencyLocus(params[sel], S.source.point(params[sel]), measure[sel], group))
    return loci


def frontier_depth(S):
    """Graph distance of each vertex to the truncation frontier (inf without frontier)."""
    front = np.flatnonzero(S.frontier)
    if front.size == 0:
        return np.full(S.size, np.inf)
    dist = sparse.csgraph.dijkstra(S.adjacency, directed=False, indices=front,
                                   unweighted=True, min_only=True)
    return dist


def choose_p0(S, loci):
    """Tangency point deepest inside the sample; ties by smallest |N_t|, then index."""
    depth = frontier_depth(S)
    best = None
    for li, locus in enumerate(loci):
        pts_v = _nearest_vertices(S, locus)
        for k in range(len(locus.params)):
            v = pts_v[k]
            key = (-depth[v], locus.measure[k], v)
            if best is None or key < best[0]:
                best = (key, li, k)
    _, li, k = best
    return loci[li].params[k], li


def _nearest_vertices(S, locus):
    tree = cKDTree(S.params[locus.vertices])
    _, idx = tree.query(locus.params)
    return locus.vertices[idx]


# ---------------------------------------------------------------------------
# slices


@dataclass
class SliceComponent:
    vertices: np.ndarray
    touches_frontier: bool
    diameter: float
    compact_proxy: bool
    closed_loop: bool

    def to_json(self):
        return {"size": int(len(self.vertices)), "touches_frontier": self.touches_frontier,
                "diameter": self.diameter, "compact_proxy": self.compact_proxy,
                "closed_loop": self.closed_loop}


@dataclass
class SliceComponentSet:
    t: float
    band_width: float
    components: list

    @property
    def empty(self):
        return not self.components

    def to_json(self):
        return {"t": self.t, "band_width": self.band_width,
                "components": [c.to_json() for c in self.components]}


def component_diameter(points, n):
    """Double-sweep estimate of the product diameter (exact for small sets)."""
    space = ProductSpace(n)
    if len(points) <= 400:
        d = space.distance(points[:, None, :], points[None, :, :])
        return float(np.max(d))
    i = int(np.argmax(space.distance(points, points[0])))
    far = space.distance(points, points[i])
    j = int(np.argmax(far))
    return float(max(far[j], np.max(space.distance(points, points[j]))))


def leaf_values(S, fol):
    return fol.leaf_coordinate(S.points)


def band_half_width(S, f):
    gaps = np.abs(f[S.edges[:, 0]] - f[S.edges[:, 1]])
    return 2.0 * float(np.max(gaps))


def slice_components(S, f, t, w, d_max=50.0):
    """Components of the band |f - t| < w."""
    mask = np.abs(f - t) < w
    comps = []
    adj = S.adjacency
    for group in S.components(mask):
        touches = bool(np.any(S.frontier[group]))
        diam = component_diameter(S.points[group], S.n)
        compact = (not touches) and diam < d_max
        nbrs = adj[group].indices
        closed = compact and bool(np.any(f[nbrs] < t - w)) and bool(np.any(f[nbrs] > t + w))
        comps.append(SliceComponent(group, touches, diam, compact, closed))
    return SliceComponentSet(float(t), float(w), comps)


def slice(S, fol, t, band_width=None, d_max=50.0):
    """Slice of the sample by the leaf P_gamma(t), as band components."""
    f = leaf_values(S, fol)
    w = band_half_width(S, f) if band_width is None else float(band_width)
    return slice_components(S, f, t, w, d_max)


def level_points(S, f, t, vertices, fol=None, iterations=50):
    """Parameters on the level {f = t} along sample edges inside `vertices`.

    With a foliation given, each crossing is refined by bisection on the leaf
    coordinate of the interpolated point; otherwise linear interpolation of f.
    """
    inside = np.zeros(S.size, dtype=bool)
    inside[vertices] = True
    a, b = S.edges[:, 0], S.edges[:, 1]
    sel = inside[a] & inside[b] & ((f[a] - t) * (f[b] - t) < 0)
    a, b = a[sel], b[sel]
    pa, pb = S.params[a], S.params[b]
    if fol is None or len(a) == 0:
        return S.source.interpolate(pa, pb, (t - f[a]) / (f[b] - f[a]))
    lo = np.zeros(len(a))
    hi = np.ones(len(a))
    fa = fol.leaf_coordinate(S.source.point(pa)) - t
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fm = fol.leaf_coordinate(S.source.point(S.source.interpolate(pa, pb, mid))) - t
        same = np.sign(fm) == np.sign(fa)
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return S.source.interpolate(pa, pb, 0.5 * (lo + hi))


@dataclass
class ComponentSliceForms:
    params: np.ndarray
    points: np.ndarray
    eigenvalues: list
    errors: list


def component_slice_forms(S, fol, t, vertices, P=None, max_points=5, tol_transversal=TOL_TRANSVERSAL):
    """Smallest induced principal curvature of the slice at up to `max_points` level points.

    Points where the slice is not transversal are reported in `errors` as
    (parameter, message) pairs instead of eigenvalues.
    """
    f = leaf_values(S, fol)
    params = level_points(S, f, t, vertices, fol)
    if len(params) == 0:
        return ComponentSliceForms(params, np.zeros((0, S.n + 1)), [], [])
    P = fol.leaf(t) if P is None else P
    eig, errors = [], []
    pick = np.unique(np.linspace(0, len(params) - 1, min(len(params), max_points)).astype(int))
    for k in pick:
        patch, u0 = S.source.local_patch(params[k])
        try:
            sf = restrict_to_slice(patch, P, u0, tol_transversal)
            eig.append(float(sf.principal_curvatures[0]))
        except TransversalityError as exc:
            errors.append((np.asarray(params[k]).tolist(), str(exc)))
    return ComponentSliceForms(params, S.source.point(params), eig, errors)


# ---------------------------------------------------------------------------
# vertical graph evidence


@dataclass
class GraphEvidence:
    injective_pi: bool
    convex_projection: bool
    witness: dict

    def to_json(self):
        return {"injective_pi": self.injective_pi, "convex_projection": self.convex_projection,
                "witness": self.witness}


def verify_vertical_graph(S, pairs=200, seed=0):
    n = S.n
    base = S.points[:, :-1]
    height = S.points[:, -1]
    y = half_space_to_ball(base)
    a, b = S.edges[:, 0], S.edges[:, 1]
    eps_proj = 0.5 * float(np.max(np.linalg.norm(y[a] - y[b], axis=1)))
    eps_height = 2.0 * float(np.max(np.abs(height[a] - height[b])))
    tree = cKDTree(y)
    close = tree.query_pairs(eps_proj, output_type="ndarray")
    witness = {"eps_proj": eps_proj, "eps_height": eps_height}
    injective = True
    if len(close):
        gap = np.abs(height[close[:, 0]] - height[close[:, 1]])
        k = int(np.argmax(gap))
        if gap[k] > eps_height:
            injective = False
            witness["collision"] = {"vertices": [int(close[k, 0]), int(close[k, 1])],
                                    "height_gap": float(gap[k])}
    # convexity of the projection: geodesic midpoints stay within the covering radius
    cover = float(np.max(half_space_distance(base[a], base[b])))
    rng = np.random.default_rng(seed)
    chart = half_space(n)
    worst = 0.0
    convex = True
    for _ in range(pairs):
        i, j = rng.integers(S.size, size=2)
        p, q = HPoint(chart, base[i]), HPoint(chart, base[j])
        try:
            geo = geodesic_through(p, q)
        except DegenerateGeodesicError:
            continue
        mid = geo.half_space_coords(0.5 * float(half_space_distance(base[i], base[j])))
        _, near = tree.query(half_space_to_ball(mid), k=min(8, S.size))
        dist = float(np.min(half_space_distance(base[np.atleast_1d(near)], mid)))
        if dist > worst:
            worst = dist
        if dist > cover:
            convex = False
            witness["midpoint_gap"] = {"vertices": [int(i), int(j)], "distance": dist}
    witness["covering_radius"] = cover
    witness["worst_midpoint_distance"] = worst
    return GraphEvidence(injective, convex, witness)


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    verdict: str
    case_label: str | None
    p0: dict | None = None
    p1: dict | None = None
    theta: object = None
    tangency_loci: list = field(default_factory=list)
    graph_evidence: GraphEvidence | None = None
    ends: dict | None = None
    sweep: dict | None = None
    events: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    convexity: dict | None = None

    def to_json(self):
        return {
            "verdict": self.verdict,
            "case_label": self.case_label,
            "p0": self.p0,
            "p1": self.p1,
            "theta": self.theta.to_json() if self.theta is not None else None,
            "tangency_loci": [l.to_json() for l in self.tangency_loci],
            "graph_evidence": self.graph_evidence.to_json() if self.graph_evidence else None,
            "ends": self.ends,
            "sweep": self.sweep,
            "events": self.events,
            "diagnostics": self.diagnostics,
            "convexity": self.convexity,
        }


class _Log:
    def __init__(self):
        self.rows = []

    def __call__(self, t, event, **data):
        self.rows.append({"t": float(t), "event": event, "data": data})


def check_convexity(S, tol):
    kmin = S.curvatures[:, 0]
    i = int(np.argmin(kmin))
    report = {"min_eigenvalue": float(kmin[i]), "witness": S.params[i].tolist(),
              "verdict": bool(kmin[i] > tol)}
    if not report["verdict"]:
        raise PreconditionError(f"surface is not strictly convex on samples (min principal "
                                f"curvature {kmin[i]:.3g})", S.params[i], float(kmin[i]))
    return report


def _persistent(flags, k, h):
    return all(flags[j] for j in range(k, min(k + h, len(flags))))


def _scan(S, f, w, step, d_max, t_end):
    steps = int(math.ceil(t_end / step)) + 3
    return [slice_components(S, f, k * step, w, d_max) for k in range(steps)]


def _first_persistent(flags, h, start=0):
    for k in range(start, len(flags)):
        if flags[k] and _persistent(flags, k, h):
            return k
    return None


def _extremum_clusters(S, f, kind, radius):
    nbr_min = np.full(S.size, np.inf)
    nbr_max = np.full(S.size, -np.inf)
    a, b = S.edges[:, 0], S.edges[:, 1]
    np.minimum.at(nbr_min, a, f[b])
    np.minimum.at(nbr_min, b, f[a])
    np.maximum.at(nbr_max, a, f[b])
    np.maximum.at(nbr_max, b, f[a])
    inner = ~S.frontier
    if kind == "min":
        ext = np.flatnonzero(inner & (f <= nbr_min))
    else:
        ext = np.flatnonzero(inner & (f >= nbr_max))
    if ext.size == 0:
        return []
    pts = S.points[ext]
    pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    m = len(ext)
    graph = sparse.coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(m, m)) \
        if len(pairs) else sparse.coo_matrix((m, m))
    ncomp, labels = sparse.csgraph.connected_components(graph, directed=False)
    return [ext[labels == c] for c in range(ncomp)]


def _refine_extremum(S, fol, vertex, sign):
    """Locally optimise the leaf coordinate on a chart around a vertex."""
    patch, u0 = S.source.local_patch(S.params[vertex])
    step = 0.5 * float(np.min(patch.domain.hi - patch.domain.lo)) * 0.1

    def objective(u):
        return -sign * float(fol.leaf_coordinate(patch.point(u)))

    res = optimize.minimize(objective, u0, method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000,
                                     "initial_simplex": np.vstack([u0, u0 + step * np.eye(len(u0))])})
    u = np.clip(res.x, patch.domain.lo, patch.domain.hi)
    ff = patch.forms_at(u)
    nu = fol.leaf_normal(ff.point)
    G = patch.ambient.metric(ff.point)
    c = float(ff.normal @ G @ nu)
    return patch, u, ff, float(np.sqrt(max(1.0 - c * c, 0.0)))


def _point_json(S, param):
    x = S.source.point(np.asarray(param, dtype=float))
    return {"param": np.asarray(param, dtype=float).tolist(), "point": np.asarray(x).tolist()}


def sweep_classify(S, config=None):
    """Classify a sampled strictly convex hypersurface as Sphere, VerticalGraph or SimpleEnd."""
    cfg = config or SweepConfig()
    log = _Log()
    convexity = check_convexity(S, cfg.tol_convex)
    loci = find_tangencies(S, cfg.tol_tangency)
    log(0.0, "tangency-scan", loci=len(loci))
    if not loci:
        return _graph_path(S, cfg, log, convexity)
    return _tangency_path(S, cfg, log, convexity, loci)


def _graph_path(S, cfg, log, convexity):
    report = ClassificationReport("Inconclusive", "GraphNoTangency", convexity=convexity)
    ev = verify_vertical_graph(S, cfg.graph_pairs, cfg.seed)
    report.graph_evidence = ev
    log(0.0, "graph-evidence", injective_pi=ev.injective_pi, convex_projection=ev.convex_projection)
    # auxiliary sweep: every nonempty slice must be connected
    depth = frontier_depth(S)
    v = int(np.argmax(np.where(np.isfinite(depth), depth, 0)))
    direction = np.zeros(S.n)
    direction[0] = 1.0
    fol = VerticalFoliation(geodesic_from(HPoint(half_space(S.n), S.points[v, :-1]), direction))
    f = leaf_values(S, fol)
    w = band_half_width(S, f)
    step = 0.5 * w
    lo = float(np.min(f))
    slices = [slice_components(S, f, lo + k * step, w, cfg.d_max)
              for k in range(int(math.ceil((np.max(f) - lo) / step)) + 1)]
    counts = [len(s.components) for s in slices]
    connected = all(c <= 1 for c in counts)
    log(lo, "auxiliary-sweep", steps=len(slices), max_components=max(counts))
    report.sweep = {"band_half_width": w, "step": step, "component_counts": counts,
                    "geodesic": fol.gamma.to_json()}
    if ev.injective_pi and ev.convex_projection and connected:
        report.verdict = "VerticalGraph"
        log(0.0, "verdict", verdict="VerticalGraph")
    else:
        if not connected:
            report.diagnostics.append("a slice of the graph sweep is disconnected")
        if not ev.injective_pi:
            report.diagnostics.append("projection is not injective on samples")
        if not ev.convex_projection:
            report.diagnostics.append("projection failed the geodesic midpoint test")
        log(0.0, "verdict", verdict="Inconclusive")
    report.events = log.rows
    return report


def _tangency_path(S, cfg, log, convexity, loci):
    n = S.n
    report = ClassificationReport("Inconclusive", None, tangency_loci=loci, convexity=convexity)
    p0_param, _ = choose_p0(S, loci)
    ff0 = S.source.forms_at(p0_param)
    x0 = ff0.point
    horiz = ff0.normal[:-1]
    gamma = geodesic_from(HPoint(half_space(n), x0[:-1]), horiz)
    fol = VerticalFoliation(gamma)
    G = ProductSpace(n).metric(x0)
    side = float(np.sign(ff0.normal @ G @ fol.leaf_normal(x0)))
    report.p0 = _point_json(S, p0_param)
    report.p0["normal_height"] = float(ff0.normal_height)
    log(0.0, "tangency", point=report.p0["point"], side=side)

    f = leaf_values(S, fol)
    w = band_half_width(S, f)
    step = 0.5 * w
    f_max = float(np.max(f))
    if np.min(f) < -2.0 * w:
        report.diagnostics.append("the first leaf does not support the sample (f < 0)")
    slices = _scan(S, f, w, step, cfg.d_max, f_max)
    counts = [len(s.components) for s in slices]
    empty = [s.empty for s in slices]
    front = [any(c.touches_frontier for c in s.components) for s in slices]
    report.sweep = {"geodesic": gamma.to_json(), "band_half_width": w, "step": step,
                    "side": side, "component_counts": counts, "frontier": front}
    prev = None
    for s, c, fr in zip(slices, counts, front):
        state = (c, fr)
        if state != prev:
            log(s.t, "slice-state", components=c, frontier=fr,
                closed_loop=[comp.closed_loop for comp in s.components])
            prev = state
    h = cfg.hysteresis
    k_empty = _first_persistent(empty, h, start=1)
    k_front = _first_persistent(front, h)
    if k_empty is not None and not all(empty[k_empty:]):
        report.diagnostics.append("nonempty slices after the sweep emptied (non-monotone sweep)")
        return _finish(report, log)

    if k_front is None:
        return _case_one(S, cfg, log, report, fol, f, slices, k_empty, w)

    log(slices[k_front].t, "frontier-contact")
    before = [c for c in counts[:k_front] if c > 0]
    if any(c > 1 for c in before):
        report.diagnostics.append("slice split before reaching the truncation")
        return _finish(report, log)
    if k_empty is not None and k_empty - k_front <= h:
        case = "Case3"
        log(slices[k_empty].t, "emptied-after-frontier")
    else:
        case = _horizon_case(S, fol, w, step, cfg, slices[k_front].t, log)
    report.case_label = case
    return _ends_path(S, cfg, log, report)


def _horizon_case(S, fol, w, step, cfg, t_front, log):
    """Case 2 when the first truncation contact recedes as the truncation doubles, else Case 4."""
    bigger = S.source.rescaled(2.0).sample(with_forms=False)
    f2 = fol.leaf_coordinate(bigger.points)
    k = 0
    flags = []
    t_front2 = None
    while k * step <= float(np.max(f2)) + step:
        band = np.abs(f2 - k * step) < w
        flags.append(bool(np.any(bigger.frontier & band)))
        if len(flags) >= cfg.hysteresis and all(flags[-cfg.hysteresis:]):
            t_front2 = (k - cfg.hysteresis + 1) * step
            break
        k += 1
    if t_front2 is None or t_front2 > t_front + 2.0 * step:
        log(t_front, "horizon-recedes", doubled=t_front2)
        return "Case2"
    log(t_front, "noncompact-slice", doubled=t_front2)
    return "Case4"


def _case_one(S, cfg, log, report, fol, f, slices, k_empty, w):
    if k_empty is None:
        report.diagnostics.append("sweep ended without emptying or touching the truncation")
        return _finish(report, log)
    log(slices[k_empty].t, "emptied")
    f_max = float(np.max(f))
    for s in slices[:k_empty]:
        if len(s.components) > 1:
            report.diagnostics.append(f"slice at t={s.t:.6g} has {len(s.components)} components")
            return _finish(report, log)
        # away from the two caps the band must separate the surface
        if 2.0 * w <= s.t <= f_max - 2.0 * w and not s.components[0].closed_loop:
            report.diagnostics.append(f"intermediate slice at t={s.t:.6g} is not a closed loop")
            return _finish(report, log)
    edge_len = float(np.max(ProductSpace(S.n).distance(S.points[S.edges[:, 0]], S.points[S.edges[:, 1]])))
    mins = _extremum_clusters(S, f, "min", 3.0 * edge_len)
    maxs = _extremum_clusters(S, f, "max", 3.0 * edge_len)
    if len(mins) != 1 or len(maxs) != 1:
        report.diagnostics.append(f"leaf coordinate has {len(mins)} minimum and {len(maxs)} "
                                  "maximum clusters; expected one each")
        return _finish(report, log)
    top = maxs[0][int(np.argmax(f[maxs[0]]))]
    patch, u1, ff1, sine = _refine_extremum(S, fol, top, +1.0)
    report.p1 = {"param": S.params[top].tolist(), "point": ff1.point.tolist(),
                 "transversality": sine, "normal_height": float(ff1.normal_height),
                 "t": float(fol.leaf_coordinate(ff1.point))}
    log(report.p1["t"], "second-tangency", point=report.p1["point"], transversality=sine)
    if sine > cfg.tol_second_tangency:
        report.diagnostics.append(f"last leaf is transversal at the maximum (sine {sine:.3g})")
        return _finish(report, log)
    report.verdict = "Sphere"
    report.case_label = "Case1"
    log(report.p1["t"], "verdict", verdict="Sphere", case="Case1")
    return _finish(report, log)


def _ends_path(S, cfg, log, report):
    state = enlarged_accumulation(S.source, cfg.rho, cfg.shell, cfg.link)
    res = state.result
    ends = {"accumulation": res.to_json()}
    report.ends = ends
    if res.compact or len(res.clusters) != 1:
        report.diagnostics.append(f"accumulation set has {len(res.clusters)} clusters"
                                  + (" (projection looks compact)" if res.compact else ""))
        return _finish(report, log)
    cluster = res.clusters[0]
    bigger = state.surface.rescaled(2.0)
    big_sample = bigger.sample(with_forms=False)
    res2 = accumulation_set(big_sample, cfg.rho, cfg.shell, cfg.link)
    d2 = res2.clusters[0].angular_diameter if len(res2.clusters) == 1 else None
    ends["diameter"] = cluster.angular_diameter
    ends["diameter_doubled"] = d2
    log(0.0, "accumulation", clusters=1, diameter=cluster.angular_diameter, doubled=d2)
    if cluster.angular_diameter >= cfg.diameter_threshold or d2 is None \
            or not d2 < cluster.angular_diameter:
        report.diagnostics.append("boundary cluster is not shrinking to a point")
        return _finish(report, log)
    if cfg.hyperplane_sample_count > 0:
        rng = np.random.default_rng(cfg.seed)
        planes = random_hyperplanes(state.sample, cfg.hyperplane_sample_count, rng,
                                    cluster.theta, cfg.angular_tol)
        check = verify_simple_end(state.surface, cluster.theta, planes, cfg.angular_tol,
                                  cfg.r_max, cfg.growth_tol, samples=(state.sample, big_sample))
        ends["hyperplanes"] = check.to_json()
        log(0.0, "hyperplane-check", passed=check.passed, count=len(planes))
        if not check.passed:
            report.diagnostics.append("a hyperplane avoiding theta meets pi(Sigma) unboundedly")
            return _finish(report, log)
    report.theta = cluster.theta
    report.verdict = "SimpleEnd"
    log(0.0, "verdict", verdict="SimpleEnd", case=report.case_label,
        theta=cluster.theta.direction.tolist())
    return _finish(report, log)


def _finish(report, log):
    if report.verdict == "Inconclusive":
        log(0.0, "verdict", verdict="Inconclusive")
    report.events = log.rows
    return report
