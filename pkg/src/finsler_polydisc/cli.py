"""``finsler-polydisc``: seeded verification campaigns with JSON/CSV output.

Exit status: 0 when every checked invariant holds, 2 when one is violated
(the report then carries a replayable worst case), 1 on a configuration
error.  Options come from flags, optionally layered over a JSON ``--config``
file; flags win.  Two-word spellings such as ``verify schwarz`` are
accepted for every command.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import _kernels
from .core import (
    DEFAULT_RADIUS_CAP,
    MetricParams,
    Rng,
    Tolerance,
    check_radius_cap,
    complex_normal,
    decode_complex,
    encode_complex,
)
from .distortion import (
    ConvexMapping,
    distortion_ratio,
    radial_terms,
    sample_convex_mapping,
    upper_witness,
    lower_witness,
    verify_distortion,
    verify_distortion_radial,
)
from .geometry import (
    convexity_batch,
    einstein_check,
    fd_derivative_errors,
    kahler_berwald_residuals,
    sample_fibre_points,
)
from .maps import (
    Extremal,
    HomogeneousPower,
    Linear,
    evaluate,
    map_from_dict,
    pullback_F2,
    pushforward,
    sample_linear_matrices,
)
from .metrics import eval_bergman_F2, eval_F2, eval_phi2
from .schwarz import CAMPAIGN_FAMILIES, schwarz_grid, sharp_constant, verify_norm_schwarz

COMMANDS = (
    "eval",
    "verify-schwarz",
    "verify-norm-schwarz",
    "verify-distortion",
    "check-levi",
    "check-kahler-berwald",
    "check-einstein",
    "emit-indicatrix",
)
T_GRID = [0.0, 0.5, 1.0, 3.0]
K_GRID = [2, 3, 5]
DIM_GRID = [1, 2, 3, 5]

DEFAULTS = {
    "t": T_GRID,
    "k": K_GRID,
    "tt": T_GRID,
    "kk": K_GRID,
    "m": None,
    "n": None,
    "trials": None,
    "seed": 0,
    "radius_cap": DEFAULT_RADIUS_CAP,
    "out": None,
    "abs_eq": 1e-10,
    "rel_eq": 1e-9,
    "fd_rel": 1e-5,
    "psd_min_eig": 1e-12,
    "jobs": 1,
    "families": list(CAMPAIGN_FAMILIES),
    "force_witness": False,
    "histogram_out": None,
    "map": None,
    "degree": 1,
    "sampled_maps": 8,
    "z": None,
    "v": None,
    "resolution": 64,
    "fibre_samples": 20,
    "residual_tol": 1e-8,
    "einstein_rtol": 1e-8,
}

COMMAND_DEFAULTS = {
    "eval": {"t": [1.0], "k": [2], "m": [2]},
    "verify-schwarz": {"m": DIM_GRID, "n": DIM_GRID, "trials": 100_000},
    "verify-norm-schwarz": {"m": [2], "n": [3], "trials": 10_000},
    "verify-distortion": {"m": [3], "trials": 10_000},
    "check-levi": {"m": [3], "trials": 1_000},
    "check-kahler-berwald": {"m": [3], "trials": 100},
    "check-einstein": {"m": [3], "trials": 1_000},
    "emit-indicatrix": {"t": [1.0], "k": [2], "m": [2]},
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _list(kind):
    def parse(text):
        try:
            return [kind(x) for x in str(text).split(",") if x.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    return parse


def _complex_list(text):
    """``"0.5,0.1+0.2j"`` or a JSON list of numbers / ``[re, im]`` pairs."""
    text = text.strip()
    if text.startswith("["):
        return decode_complex(json.loads(text))
    return np.array([complex(x.replace(" ", "")) for x in text.split(",")], dtype=np.complex128)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finsler-polydisc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON file of option defaults (flags win)")
        p.add_argument("--t", type=_list(float), help="source t values, comma separated")
        p.add_argument("--k", type=_list(int), help="source k values")
        p.add_argument("--tt", type=_list(float), help="target t values")
        p.add_argument("--kk", type=_list(int), help="target k values")
        p.add_argument("--m", type=_list(int), help="source dimensions")
        p.add_argument("--n", type=_list(int), help="target dimensions")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--radius-cap", dest="radius_cap", type=float)
        p.add_argument("--out", help="report path (JSON, or CSV for emit-indicatrix); stdout if omitted")
        p.add_argument("--abs-eq", dest="abs_eq", type=float)
        p.add_argument("--rel-eq", dest="rel_eq", type=float)
        p.add_argument("--fd-rel", dest="fd_rel", type=float)
        p.add_argument("--psd-min-eig", dest="psd_min_eig", type=float)
        p.add_argument("--jobs", type=int)
        if name == "verify-schwarz":
            p.add_argument("--families", type=_list(str))
            p.add_argument("--force-witness", dest="force_witness", action="store_true")
            p.add_argument("--histogram-out", dest="histogram_out", help="CSV of ratio/constant histograms")
        if name in ("eval", "verify-norm-schwarz", "verify-distortion"):
            p.add_argument("--map", help="map spec JSON file (a convex mapping for verify-distortion)")
        if name == "verify-norm-schwarz":
            p.add_argument("--degree", type=int, help="degree of the homogeneous witness")
            p.add_argument("--sampled-maps", dest="sampled_maps", type=int)
        if name == "eval":
            p.add_argument("--z", type=_complex_list)
            p.add_argument("--v", type=_complex_list)
        if name == "emit-indicatrix":
            p.add_argument("--resolution", type=int)
        if name == "check-kahler-berwald":
            p.add_argument("--fibre-samples", dest="fibre_samples", type=int)
            p.add_argument("--residual-tol", dest="residual_tol", type=float)
        if name == "check-einstein":
            p.add_argument("--einstein-rtol", dest="einstein_rtol", type=float)
    return parser


def _normalize_argv(argv):
    argv = list(argv)
    if len(argv) >= 2 and argv[0] in ("verify", "check", "emit") and not argv[1].startswith("-"):
        argv = [f"{argv[0]}-{argv[1]}"] + argv[2:]
    return argv


def load_config(argv) -> dict:
    ns = build_parser().parse_args(_normalize_argv(argv))
    if ns.command is None:
        raise ConfigError(f"a command is required: {', '.join(COMMANDS)}")
    flags = vars(ns)
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[ns.command])
    if "config" in flags:
        try:
            with open(flags["config"], encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        unknown = set(file_cfg) - set(DEFAULTS) - {"command"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, value in file_cfg.items():
            if key in ("t", "k", "tt", "kk", "m", "n", "families") and not isinstance(value, list):
                value = [value]
            cfg[key] = value
    cfg.update({k: v for k, v in flags.items() if k != "config"})
    _validate(cfg)
    return cfg


def _validate(cfg):
    for key in ("t", "k", "tt", "kk", "m"):
        if not cfg[key]:
            raise ConfigError(f"grid list --{key} is empty")
    if cfg["trials"] is not None and int(cfg["trials"]) < 1:
        raise ConfigError("trials must be >= 1")
    if int(cfg["jobs"]) < 1:
        raise ConfigError("jobs must be >= 1")
    if not 0 <= int(cfg["seed"]) < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    try:
        check_radius_cap(cfg["radius_cap"])
        cfg["tol"] = Tolerance(cfg["abs_eq"], cfg["rel_eq"], cfg["fd_rel"], cfg["psd_min_eig"])
        cfg["sources"] = [MetricParams(t, k) for t, k in itertools.product(cfg["t"], cfg["k"])]
        cfg["targets"] = [MetricParams(t, k) for t, k in itertools.product(cfg["tt"], cfg["kk"])]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if any(int(d) < 1 for d in cfg["m"] + (cfg["n"] or [])):
        raise ConfigError("dimensions must be >= 1")


# ----------------------------------------------------------------------------
# reports


def _report(command, cfg, **fields):
    base = {
        "command": command,
        "grid_cell": None,
        "trials": cfg.get("trials"),
        "max_ratio": None,
        "sharp_constant": None,
        "worst_case": None,
        "residuals": {},
        "seed": int(cfg["seed"]),
        "elapsed_ms": 0.0,
        "violated": False,
        "backend": _kernels.BACKEND,
    }
    base.update(fields)
    return base


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, path, stdout):
    if path:
        write_atomic(path, text)
    else:
        stdout.write(text)
        if not text.endswith("\n"):
            stdout.write("\n")


def _params_dict(p: MetricParams):
    return {"t": p.t, "k": p.k}


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


# ----------------------------------------------------------------------------
# commands


def cmd_eval(cfg):
    p = MetricParams(cfg["t"][0], cfg["k"][0])
    m = cfg["m"][0]
    z = cfg["z"] if cfg["z"] is not None else np.zeros(m)
    v = cfg["v"] if cfg["v"] is not None else np.eye(1, len(z))[0]
    try:
        value = eval_F2(p, z, v)
        out = {
            "params": _params_dict(p),
            "z": encode_complex(z),
            "v": encode_complex(v),
            "F": value.F,
            "F2": value.F2,
            "phi2": eval_phi2(p, v),
            "bergman_F2": eval_bergman_F2(z, v),
        }
        if cfg["map"]:
            f = map_from_dict(_load_json(cfg["map"]))
            tgt = MetricParams(cfg["tt"][0], cfg["kk"][0])
            out["map_spec"] = f.to_dict()
            out["image"] = encode_complex(evaluate(f, z))
            out["pushforward"] = encode_complex(pushforward(f, z, v))
            out["target_params"] = _params_dict(tgt)
            out["pullback_F2"] = pullback_F2(tgt, f, z, v)
            out["ratio"] = out["pullback_F2"] / value.F2 if value.F2 > 0 else None
            out["sharp_constant"] = sharp_constant(f.n, tgt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return _report("eval", cfg, trials=1, grid_cell=out["params"], residuals={}, **{"value": out})


def cmd_verify_schwarz(cfg):
    start = time.perf_counter()
    for fam in cfg["families"]:
        if fam not in CAMPAIGN_FAMILIES:
            raise ConfigError(f"unknown family {fam!r}; choose from {CAMPAIGN_FAMILIES}")
    reports = schwarz_grid(
        cfg["m"], cfg["n"], cfg["targets"], cfg["sources"], int(cfg["trials"]), int(cfg["seed"]),
        families=cfg["families"], radius_cap=cfg["radius_cap"], force_witness=cfg["force_witness"],
        jobs=int(cfg["jobs"]), tol=cfg["tol"],
    )
    cells = [r.as_dict() for r in reports]
    worst = max(reports, key=lambda r: r.max_ratio / r.sharp_constant)
    if cfg["histogram_out"]:
        buf = io.StringIO()
        w = csv.writer(buf)
        bins = len(reports[0].ratio_histogram)
        w.writerow(["m", "n", "tt", "kk"] + [f"bin_{i}" for i in range(bins)])
        for r in reports:
            w.writerow([r.cell["m"], r.cell["n"], r.cell["tt"], r.cell["kk"]] + r.ratio_histogram)
        write_atomic(cfg["histogram_out"], buf.getvalue())
    return _report(
        "verify-schwarz", cfg,
        grid_cell=worst.cell,
        max_ratio=worst.max_ratio,
        sharp_constant=worst.sharp_constant,
        worst_case=worst.worst_case,
        residuals={"max_ratio_over_constant": worst.max_ratio / worst.sharp_constant},
        violated=any(r.violated for r in reports),
        cells=cells,
        replay={"seed": int(cfg["seed"]), "path": worst.cell["path"]},
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def _norm_schwarz_maps(cfg, m, n, rng):
    if cfg["map"]:
        return [map_from_dict(_load_json(cfg["map"]))]
    maps = [HomogeneousPower(Extremal(m, n), int(cfg["degree"]))]
    gen = rng.generator()
    for i in range(int(cfg["sampled_maps"])):
        A = Linear(sample_linear_matrices(gen, 1, m, n)[0])
        maps.append(A if i % 2 == 0 else HomogeneousPower(A, int(gen.integers(1, 5)), gen.uniform(-np.pi, np.pi, n)))
    return maps


def cmd_verify_norm_schwarz(cfg):
    start = time.perf_counter()
    root = Rng(int(cfg["seed"]))
    cells, violated = [], False
    c = 0
    for m, n in itertools.product(cfg["m"], cfg["n"] or cfg["m"]):
        maps = _norm_schwarz_maps(cfg, m, n, root.split(c, 0))
        for src, tgt in itertools.product(cfg["sources"], cfg["targets"]):
            for j, f in enumerate(maps):
                try:
                    r = verify_norm_schwarz(src, tgt, f, int(cfg["trials"]), root.split(c, 1, j),
                                            radius_cap=cfg["radius_cap"], tol=cfg["tol"], witness_axis_points=16)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from exc
                d = r.as_dict()
                d["grid_cell"]["path"] = [c, 1, j]
                cells.append(d)
                violated |= r.violated
            c += 1
    worst = max(cells, key=lambda d: d["max_ratio"] / d["sharp_constant"])
    return _report(
        "verify-norm-schwarz", cfg,
        grid_cell=worst["grid_cell"], max_ratio=worst["max_ratio"], sharp_constant=worst["sharp_constant"],
        worst_case=worst["worst_case"],
        residuals={"max_ratio_over_constant": worst["max_ratio"] / worst["sharp_constant"]},
        violated=violated, cells=cells, elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


WITNESS_RADII = (0.1, 0.5, 0.9)


def distortion_witness_gaps(p: MetricParams, m: int, thetas, v) -> dict:
    """Relative gaps of the three equality witnesses for the half-plane family."""
    f = ConvexMapping.half_plane(thetas)
    up, lo, rad = [], [], []
    for b in WITNESS_RADII:
        zu = upper_witness(thetas, b)
        l_, mid, u_ = distortion_ratio(p, f, zu, v)
        up.append(abs(mid - u_) / u_)
        zl = lower_witness(thetas, b)
        l_, mid, u_ = distortion_ratio(p, f, zl, v)
        lo.append(abs(mid - l_) / l_)
        (rl, rm, ru), _ = radial_terms(p, f, zu[None, :])
        rad.append(float(abs(rm[0] - ru[0]) / ru[0]))
    return {"upper": max(up), "lower": max(lo), "radial_upper": max(rad)}


def cmd_verify_distortion(cfg):
    start = time.perf_counter()
    root = Rng(int(cfg["seed"]))
    cells, violated = [], False
    rel = cfg["tol"].rel_eq
    for c, (m, p) in enumerate(itertools.product(cfg["m"], cfg["sources"])):
        rng = root.split(c)
        if cfg["map"]:
            f = ConvexMapping.from_dict(_load_json(cfg["map"]))
            if f.dim != m:
                raise ConfigError(f"convex mapping has dimension {f.dim}, expected {m}")
        else:
            f = sample_convex_mapping(rng.split(0), m)
        r1 = verify_distortion(p, f, int(cfg["trials"]), rng.split(1), cfg["radius_cap"], cfg["tol"])
        r2 = verify_distortion_radial(p, f, int(cfg["trials"]), rng.split(2), cfg["radius_cap"], cfg["tol"])
        gen = rng.split(3).generator()
        gaps = distortion_witness_gaps(p, m, gen.uniform(-np.pi, np.pi, m), complex_normal(gen, m))
        bad = r1.violated or r2.violated or any(g > 10 * rel for g in gaps.values())
        violated |= bad
        cells.append({
            "grid_cell": {"m": m, "t": p.t, "k": p.k, "path": [c]},
            "distortion": r1.as_dict(),
            "radial": r2.as_dict(),
            "witness_gaps": gaps,
            "violated": bad,
        })
    worst = max(cells, key=lambda d: max(d["distortion"]["max_upper_ratio"], d["distortion"]["max_lower_ratio"]))
    return _report(
        "verify-distortion", cfg,
        grid_cell=worst["grid_cell"],
        max_ratio=max(worst["distortion"]["max_upper_ratio"], worst["distortion"]["max_lower_ratio"]),
        sharp_constant=1.0,
        worst_case=worst["distortion"]["worst_case"],
        residuals={"max_witness_gap": max(max(d["witness_gaps"].values()) for d in cells)},
        violated=violated, cells=cells, elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def _geometry_cells(cfg):
    root = Rng(int(cfg["seed"]))
    for c, (m, p) in enumerate(itertools.product(cfg["m"], cfg["sources"])):
        yield c, m, p, root.split(c)


def cmd_check_levi(cfg):
    start = time.perf_counter()
    cells, violated = [], False
    N = int(cfg["trials"])
    tol = cfg["tol"]
    for c, m, p, rng in _geometry_cells(cfg):
        z, v = sample_fibre_points(rng, N, m, cfg["radius_cap"])
        t, k = np.full(N, p.t), np.full(N, p.k)
        lmin, hmin = convexity_batch(z, v, t, k)
        errs = {name: float(np.max(e)) for name, e in fd_derivative_errors(z, v, t, k).items()}
        bad = bool(lmin.min() <= tol.psd_min_eig or hmin.min() <= tol.psd_min_eig or max(errs.values()) > tol.fd_rel)
        violated |= bad
        i = int(np.argmin(lmin))
        cells.append({
            "grid_cell": {"m": m, "t": p.t, "k": p.k, "path": [c]},
            "levi_min_eigenvalue": float(lmin.min()),
            "hessian_min_eigenvalue": float(hmin.min()),
            "fd_relative_errors": errs,
            "worst_case": {"z": encode_complex(z[i]), "v": encode_complex(v[i])},
            "violated": bad,
        })
    return _report(
        "check-levi", cfg,
        residuals={
            "levi_min_eigenvalue": min(d["levi_min_eigenvalue"] for d in cells),
            "hessian_min_eigenvalue": min(d["hessian_min_eigenvalue"] for d in cells),
            "max_fd_relative_error": max(max(d["fd_relative_errors"].values()) for d in cells),
        },
        violated=violated, cells=cells, elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def cmd_check_kahler_berwald(cfg):
    start = time.perf_counter()
    cells, violated = [], False
    N, S = int(cfg["trials"]), int(cfg["fibre_samples"])
    for c, m, p, rng in _geometry_cells(cfg):
        z, _ = sample_fibre_points(rng.split(0), N, m, cfg["radius_cap"])
        _, vs = sample_fibre_points(rng.split(1), N * S, m, cfg["radius_cap"])
        kr, br = kahler_berwald_residuals(z, np.full(N, p.t), np.full(N, p.k), vs.reshape(N, S, m))
        bad = bool(kr.max() >= cfg["residual_tol"] or br.max() >= cfg["residual_tol"])
        violated |= bad
        i = int(np.argmax(np.maximum(kr, br)))
        cells.append({
            "grid_cell": {"m": m, "t": p.t, "k": p.k, "path": [c]},
            "kahler_residual": float(kr.max()),
            "berwald_v_residual": float(br.max()),
            "worst_case": {"z": encode_complex(z[i])},
            "violated": bad,
        })
    return _report(
        "check-kahler-berwald", cfg,
        residuals={
            "kahler_residual": max(d["kahler_residual"] for d in cells),
            "berwald_v_residual": max(d["berwald_v_residual"] for d in cells),
        },
        violated=violated, cells=cells, elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def cmd_check_einstein(cfg):
    start = time.perf_counter()
    cells, violated = [], False
    for c, m, p, rng in _geometry_cells(cfg):
        r = einstein_check(p, int(cfg["trials"]), rng, m=m, radius_cap=cfg["radius_cap"], rtol=cfg["einstein_rtol"])
        bad = r.einstein_factor is None
        violated |= bad
        d = r.as_dict()
        d["grid_cell"] = {"m": m, "t": p.t, "k": p.k, "path": [c]}
        d["violated"] = bad
        cells.append(d)
    return _report(
        "check-einstein", cfg,
        residuals={
            "max_deviation": max(d["max_deviation"] for d in cells),
            "fd_residual": max(d["fd_residual"] for d in cells),
        },
        violated=violated, cells=cells, elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def emit_indicatrix(p: MetricParams, m: int, resolution: int, rng: Rng):
    """Unit directions and radii ``r = 1/phi(d)`` so that ``r d`` lies on the indicatrix boundary.

    Rows: the coordinate axes, the diagonal, then seeded random directions,
    ``max(resolution, m + 1)`` rows in total.
    """
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    fixed = np.vstack([np.eye(m), np.ones((1, m)) / np.sqrt(m)]).astype(np.complex128)
    extra = complex_normal(rng.generator(), (max(resolution - fixed.shape[0], 0), m))
    dirs = np.vstack([fixed, extra / np.linalg.norm(extra, axis=1, keepdims=True)])
    radius = 1.0 / np.sqrt(_kernels.f2(np.zeros_like(dirs), dirs, p.t, p.k))
    return dirs, radius


def indicatrix_csv(dirs, radius) -> str:
    m = dirs.shape[1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([c for l in range(1, m + 1) for c in (f"dir_re_{l}", f"dir_im_{l}")] + ["radius"])
    for d, r in zip(dirs, radius):
        w.writerow([repr(float(x)) for c in d for x in (c.real, c.imag)] + [repr(float(r))])
    return buf.getvalue()


def cmd_emit_indicatrix(cfg):
    p = MetricParams(cfg["t"][0], cfg["k"][0])
    m = int(cfg["m"][0])
    try:
        dirs, radius = emit_indicatrix(p, m, int(cfg["resolution"]), Rng(int(cfg["seed"])))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    pts = dirs * radius[:, None]
    eucl = np.linalg.norm(pts, axis=1)
    sup = np.max(np.abs(pts), axis=1)
    violated = bool(np.any(eucl < 1 - cfg["tol"].abs_eq) or np.any(sup > 1 + cfg["tol"].abs_eq))
    return _report(
        "emit-indicatrix", cfg, trials=int(len(radius)),
        grid_cell={"m": m, "t": p.t, "k": p.k},
        residuals={"min_euclidean_norm": float(eucl.min()), "max_sup_norm": float(sup.max())},
        violated=violated,
    ), indicatrix_csv(dirs, radius)


HANDLERS = {
    "eval": cmd_eval,
    "verify-schwarz": cmd_verify_schwarz,
    "verify-norm-schwarz": cmd_verify_norm_schwarz,
    "verify-distortion": cmd_verify_distortion,
    "check-levi": cmd_check_levi,
    "check-kahler-berwald": cmd_check_kahler_berwald,
    "check-einstein": cmd_check_einstein,
    "emit-indicatrix": cmd_emit_indicatrix,
}


def run(cfg: dict, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    cmd = cfg["command"]
    if cmd == "emit-indicatrix":
        report, text = HANDLERS[cmd](cfg)
        _emit(text, cfg["out"], stdout)
    else:
        report = HANDLERS[cmd](cfg)
        _emit(json.dumps(report, indent=2), cfg["out"], stdout)
    if report["violated"]:
        stderr.write(f"{cmd}: invariant violated; worst case recorded in the report\n")
        if cmd == "emit-indicatrix":
            stderr.write(json.dumps(report) + "\n")
        return 2
    return 0


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        cfg = load_config(sys.argv[1:] if argv is None else argv)
        return run(cfg, stdout, stderr)
    except ConfigError as exc:
        stderr.write(f"finsler-polydisc: configuration error: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
