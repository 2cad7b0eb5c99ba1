"""Command-line front end.

    hxr example  --input params.json   [--config cfg.json] --out DIR [--seed N]
    hxr classify --input surface.json  [--config cfg.json] --out DIR [--seed N]
    hxr slice    --input surface.json  [--config cfg.json] --out DIR [--seed N]
    hxr ends     --input surface.json  [--config cfg.json] --out DIR [--seed N]

Exit codes: 0 success, 2 usage or invalid input, 3 inconclusive classification,
4 failed precondition (surface not strictly convex).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ends import diameter_scan, enlarged_accumulation, random_hyperplanes, verify_simple_end
from .fixtures import SurfaceSpecError, surface_from_spec
from .forms import TOL_TRANSVERSAL, fundamental_forms
from .hyperbolic import DomainError, HPoint, geodesic_from, half_space
from .parabolic import (
    ParameterError,
    ProfileParams,
    build_example,
    closed_form_geometry,
    lemma51_margin,
    margin,
    profile,
)
from .product import VerticalFoliation
from .reporting import SCHEMA_VERSION, write_csv, write_event_log, write_json
from .sweep import (
    PreconditionError,
    SweepConfig,
    component_slice_forms,
    slice_components,
    sweep_classify,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_PRECONDITION = 4

EXAMPLE_DEFAULTS = {
    "profile_points": 201,
    "grid_x": 20,
    "grid_t": 20,
    "x_extent": 5.0,
    "margin_grid": 400,
    "mesh_x_points": 21,
    "mesh_t_points": 41,
    "mesh_x_max": 50.0,
    "mesh_delta": 1e-6,
}

SAMPLING_DEFAULTS = {"jitter": 0.1}

SLICE_DEFAULTS = {"t": [0.0], "geodesic": None, "max_points_per_component": 5}

ENDS_DEFAULTS = {"hyperplane_sample_count": 20, "doublings": 1}


class UsageError(Exception):
    pass


def _read_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"{what} file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file is not valid JSON: {exc}") from exc


def _resolve(defaults, args, extra=None):
    cfg = dict(defaults)
    if extra:
        cfg.update(extra)
    if args.config:
        data = _read_json(args.config, "config")
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        cfg.update(data)
    if args.seed is not None:
        cfg["seed"] = args.seed
    cfg.setdefault("seed", 0)
    return cfg


def _envelope(command, config, body):
    out = {"schema_version": SCHEMA_VERSION, "command": command, "version": __version__,
           "config": config}
    out.update(body)
    return out


# ---------------------------------------------------------------------------
# example


def _profile_params(data):
    if not isinstance(data, dict):
        raise UsageError("parameter file must be a JSON object")
    try:
        params = ProfileParams(float(data["c1"]), float(data["c2"]), float(data["t1"]), float(data["t2"]))
    except KeyError as exc:
        raise UsageError(f"missing parameter {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    n = int(data.get("n", 2))
    if n < 2:
        raise UsageError("n must be at least 2")
    return params, n


def cmd_example(args):
    data = _read_json(args.input, "parameter")
    params, n = _profile_params(data)
    cfg = _resolve(EXAMPLE_DEFAULTS, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    w = params.width
    ts = params.t1 + w * (np.arange(cfg["profile_points"]) + 0.5) / cfg["profile_points"]
    prof = profile(params, ts)
    marg = margin(params, ts)
    write_csv(out / "profile.csv", ["t", "u", "u_t", "u_tt", "margin"],
              zip(ts, prof["u"], prof["u_t"], prof["u_tt"], marg))
    margin_report = lemma51_margin(params, cfg["margin_grid"])

    positive = prof["u"] > 0
    body = {"params": params.to_json(), "n": n, "margin": margin_report.to_json(),
            "min_margin": margin_report.min_margin}
    if not np.all(positive):
        body.update(all_positive=False, min_principal_curvature=None,
                    status="profile-invalid", note="u(t) <= 0 on part of the interval")
        write_csv(out / "surface_mesh.csv", _mesh_header(n), [])
        write_json(out / "geometry_report.json", _envelope("example", cfg, body))
        return EXIT_OK

    # closed forms against the generic pipeline on an (x_1, t) grid
    surf = build_example(params, n)
    gx = np.linspace(-cfg["x_extent"], cfg["x_extent"], cfg["grid_x"])
    gt = params.t1 + w * (np.arange(cfg["grid_t"]) + 0.5) / cfg["grid_t"]
    X, T = np.meshgrid(gx, gt, indexing="ij")
    U = np.zeros(X.shape + (n,))
    U[..., 0] = X
    U[..., -1] = T
    ff = fundamental_forms(surf, U.reshape(-1, n))
    cf = closed_form_geometry(params, n, U.reshape(-1, n)[:, -1])
    rel = lambda a, b: float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))  # noqa: E731
    kmin = float(np.min(cf.principal_curvatures[:, 0]))
    body.update(
        all_positive=bool(margin_report.all_positive and kmin > 0),
        min_principal_curvature=kmin,
        max_principal_curvature=float(np.max(cf.principal_curvatures[:, -1])),
        pipeline_agreement={"g": rel(ff.g, cf.g), "b": rel(ff.b, cf.b),
                            "principal_curvatures": rel(ff.principal_curvatures, cf.principal_curvatures)},
        status="ok",
    )
    # mesh export
    mx = np.linspace(-cfg["mesh_x_max"], cfg["mesh_x_max"], cfg["mesh_x_points"])
    d = float(cfg["mesh_delta"]) * w
    mt = np.linspace(params.t1 + d, params.t2 - d, cfg["mesh_t_points"])
    MX, MT = np.meshgrid(mx, mt, indexing="ij")
    M = np.zeros(MX.shape + (n,))
    M[..., 0] = MX
    M[..., -1] = MT
    M = M.reshape(-1, n)
    mf = fundamental_forms(surf, M)
    rows = [list(M[i]) + list(mf.point[i]) + [mf.normal_height[i], mf.principal_curvatures[i, 0]]
            for i in range(len(M))]
    write_csv(out / "surface_mesh.csv", _mesh_header(n), rows)
    write_json(out / "geometry_report.json", _envelope("example", cfg, body))
    return EXIT_OK


def _mesh_header(n):
    return ([f"u{i + 1}" for i in range(n)] + [f"x{i + 1}" for i in range(n)]
            + ["t", "normal_t", "min_curvature"])


# ---------------------------------------------------------------------------
# surfaces


def _load_surface(args, cfg):
    spec = _read_json(args.input, "surface")
    try:
        surf = surface_from_spec(spec)
    except (SurfaceSpecError, ParameterError, DomainError) as exc:
        raise UsageError(str(exc)) from exc
    jitter = float(cfg.get("jitter", 0.0))
    if jitter > 0:
        surf = surf.with_sampling(jitter, int(cfg["seed"]))
    return spec, surf


def cmd_classify(args):
    cfg = _resolve({**SweepConfig().to_json(), **SAMPLING_DEFAULTS}, args)
    spec, surf = _load_surface(args, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sweep_cfg = SweepConfig.from_dict(cfg)
    S = surf.sample()
    try:
        report = sweep_classify(S, sweep_cfg)
    except PreconditionError as exc:
        body = {"surface": spec, "verdict": None, "status": "precondition-failed",
                "error": str(exc), "witness": exc.witness, "min_eigenvalue": exc.min_eigenvalue}
        write_json(out / "classification_report.json", _envelope("classify", cfg, body))
        print(f"error: {exc}; witness parameter {np.asarray(exc.witness).tolist()}", file=sys.stderr)
        return EXIT_PRECONDITION
    body = {"surface": spec, "samples": int(S.size), "status": "ok"}
    body.update(report.to_json())
    write_json(out / "classification_report.json", _envelope("classify", cfg, body))
    write_event_log(out / "event_log.csv", report.events)
    print(f"{report.verdict} ({report.case_label})")
    return EXIT_INCONCLUSIVE if report.verdict == "Inconclusive" else EXIT_OK


def _slice_geodesic(cfg, S):
    n = S.n
    geo = cfg.get("geodesic")
    if geo is None:
        # horizontal geodesic through e_n along e_1; its leaf at t = 0 is {x_1 = 0} x R
        base = np.zeros(n)
        base[-1] = 1.0
        direction = np.zeros(n)
        direction[0] = 1.0
        return geodesic_from(HPoint(half_space(n), base), direction)
    return geodesic_from(HPoint(half_space(n), np.asarray(geo["point"], dtype=float)),
                         np.asarray(geo["direction"], dtype=float))


def cmd_slice(args):
    cfg = _resolve({**SLICE_DEFAULTS, **SAMPLING_DEFAULTS, "tol_transversal": TOL_TRANSVERSAL,
                    "band_width": None}, args)
    spec, surf = _load_surface(args, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    S = surf.sample()
    try:
        gamma = _slice_geodesic(cfg, S)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad geodesic specification: {exc}") from exc
    fol = VerticalFoliation(gamma)
    f = fol.leaf_coordinate(S.points)
    gaps = np.abs(f[S.edges[:, 0]] - f[S.edges[:, 1]])
    w = float(cfg["band_width"]) if cfg["band_width"] else 2.0 * float(np.max(gaps))
    results = []
    header = ["component"] + [f"u{i + 1}" for i in range(S.n)] + [f"x{i + 1}" for i in range(S.n)] + ["t"]
    for idx, t in enumerate(cfg["t"]):
        t = float(t)
        sc = slice_components(S, f, t, w)
        entry = {"t": t, "file": f"slice_{idx:03d}.csv", "components": [], "errors": []}
        rows = []
        P = fol.leaf(t)
        for ci, comp in enumerate(sc.components):
            cinfo = comp.to_json()
            sf = component_slice_forms(S, fol, t, comp.vertices, P, cfg["max_points_per_component"],
                                       cfg["tol_transversal"])
            cinfo["level_points"] = int(len(sf.params))
            for p, x in zip(sf.params, sf.points):
                rows.append([ci] + list(p) + list(x))
            if len(sf.params):
                cinfo["min_induced_eigenvalue"] = min(sf.eigenvalues) if sf.eigenvalues else None
                cinfo["evaluated_points"] = len(sf.eigenvalues)
            for param, msg in sf.errors:
                entry["errors"].append({"component": ci, "error": msg, "param": param})
            entry["components"].append(cinfo)
        if not rows:
            # the band may hold vertices while the level itself misses the surface
            entry["status"] = "empty"
        elif entry["errors"]:
            entry["status"] = "non-transversal"
        else:
            entry["status"] = "ok"
        write_csv(out / entry["file"], header, rows)
        results.append(entry)
    body = {"surface": spec, "geodesic": gamma.to_json(), "band_half_width": w, "slices": results}
    write_json(out / "slice_report.json", _envelope("slice", cfg, body))
    return EXIT_OK


def cmd_ends(args):
    cfg = _resolve({**ENDS_DEFAULTS, **SAMPLING_DEFAULTS,
                    **{k: v for k, v in SweepConfig().to_json().items()
                       if k in ("rho", "shell", "link", "diameter_threshold", "angular_tol",
                                "r_max", "growth_tol")}}, args)
    spec, surf = _load_surface(args, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    state = enlarged_accumulation(surf, cfg["rho"], cfg["shell"], cfg["link"])
    res = state.result
    body = {"surface": spec, "accumulation": res.to_json()}
    if res.compact or not res.clusters:
        body.update(status="compact", clusters=0, simple_end=False,
                    note="projection stays bounded; no accumulation at infinity")
        write_json(out / "ends_report.json", _envelope("ends", cfg, body))
        return EXIT_OK
    scan = diameter_scan(state.surface, max(1, int(cfg["doublings"])), cfg["rho"], cfg["shell"], cfg["link"])
    cluster = res.clusters[0]
    rng = np.random.default_rng(int(cfg["seed"]))
    single = len(res.clusters) == 1
    planes = random_hyperplanes(state.sample, int(cfg["hyperplane_sample_count"]), rng,
                                cluster.theta, cfg["angular_tol"])
    check = verify_simple_end(state.surface, cluster.theta, planes, cfg["angular_tol"],
                              cfg["r_max"], cfg["growth_tol"])
    diam = [row["diameter"] for row in scan]
    shrinking = all(d is not None for d in diam) and all(b < a for a, b in zip(diam, diam[1:]))
    simple = bool(single and diam[0] < cfg["diameter_threshold"] and shrinking and check.passed)
    body.update(status="ok", clusters=len(res.clusters), diameter_scan=scan,
                theta=cluster.theta.to_json() if single else None,
                hyperplanes=check.to_json(), simple_end=simple)
    write_json(out / "ends_report.json", _envelope("ends", cfg, body))
    return EXIT_OK


COMMANDS = {"example": cmd_example, "classify": cmd_classify, "slice": cmd_slice, "ends": cmd_ends}


def build_parser():
    parser = argparse.ArgumentParser(prog="hxr", description="Convex hypersurfaces in H^n x R")
    parser.add_argument("--version", action="version", version=f"hxr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "example": "closed-form geometry and margin of the parabolic example",
        "classify": "sphere / vertical graph / simple end classification",
        "slice": "slices by leaves of a vertical foliation",
        "ends": "accumulation at infinity and the simple-end check",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--input", required=True, help="parameter or surface description (JSON)")
        p.add_argument("--config", help="run configuration (JSON)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, help="random seed (overrides the config)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
