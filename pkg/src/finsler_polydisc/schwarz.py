"""Randomized verification of the sharp Schwarz inequality and its relatives.

For ``f: P_m -> P_n`` and target parameters ``(tt, kk)``::

    F~^2(f(z); f_*(v)) <= C F^2(z; v),    C = (n + tt n^{1/kk}) / (1 + tt)

with equality for ``f_0(z) = (z^1, ..., z^1)`` at ``(0, e_1)``.  Campaigns
are batched; every block of trials draws from its own named stream, so a
report is reproducible from ``(seed, cell)`` alone.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .core import (
    DEFAULT_RADIUS_CAP,
    DEFAULT_TOL,
    MetricParams,
    Rng,
    Tolerance,
    check_radius_cap,
    complex_normal,
    encode_complex,
    point_coords,
    uniform_disc,
)
from .maps import (
    CoordMoebius,
    Extremal,
    HolomorphicMap,
    HomogeneousPower,
    Linear,
    extremal_batch,
    linear_batch,
    moebius_batch,
    sample_linear_matrices,
    sample_moebius_params,
)
from .metrics import norm_constant

CAMPAIGN_FAMILIES = ("linear", "coord_moebius", "extremal")
BLOCK_SIZE = 25_000
HISTOGRAM_BINS = 50


def sharp_constant(n: int, p_target: MetricParams) -> float:
    return norm_constant(n, p_target)


@dataclass
class SchwarzReport:
    trials: int
    max_ratio: float
    sharp_constant: float
    worst_case: dict
    violated: bool
    seed: int
    cell: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    ratio_histogram: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "max_ratio": self.max_ratio,
            "sharp_constant": self.sharp_constant,
            "worst_case": self.worst_case,
            "violated": self.violated,
            "seed": self.seed,
            "grid_cell": self.cell,
            "elapsed_ms": self.elapsed_ms,
            "ratio_histogram": self.ratio_histogram,
        }


def _as_param_list(p) -> list[MetricParams]:
    if isinstance(p, MetricParams):
        return [p]
    out = list(p)
    if not out:
        raise ValueError("source parameter list is empty")
    return out


def _witness_block(m: int, n: int):
    z = np.zeros((1, m), dtype=np.complex128)
    v = np.zeros((1, m), dtype=np.complex128)
    v[0, 0] = 1.0
    return z, v


def _family_images(family: str, gen, z, v, n, radius_cap):
    """Images and pushforwards for one family, plus a builder for row ``i``'s map."""
    size, m = z.shape
    if family == "linear":
        A = sample_linear_matrices(gen, size, m, n)
        w, fv = linear_batch(A, z, v)
        return w, fv, lambda i: Linear(A[i])
    if family == "coord_moebius":
        s, a, th = sample_moebius_params(gen, size, m, n, radius_cap)
        w, fv = moebius_batch(s, a, th, z, v)
        return w, fv, lambda i: CoordMoebius(m=m, sources=s[i], params=a[i], phases=th[i])
    if family == "extremal":
        w, fv = extremal_batch(n, z, v)
        return w, fv, lambda i: Extremal(m=m, n=n)
    raise ValueError(f"campaign family must be one of {CAMPAIGN_FAMILIES}, got {family!r}")


def verify_schwarz(
    p_src,
    p_tgt: MetricParams,
    families: Sequence[str],
    trials: int,
    rng: Rng,
    m: int = 2,
    n: int = 2,
    radius_cap: float = DEFAULT_RADIUS_CAP,
    force_witness: bool = False,
    tol: Tolerance = DEFAULT_TOL,
    block_size: int = BLOCK_SIZE,
) -> SchwarzReport:
    """Sample ``(f, z, v)`` and record the largest ``f^* F~^2 / F^2``.

    ``p_src`` may be a single MetricParams or a sequence; trial ``i`` uses
    entry ``i mod len``.  Family membership is assigned the same way.  With
    ``force_witness`` trial 0 is replaced by the extremal map at ``(0, e_1)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    families = list(families)
    if not families:
        raise ValueError("families must be nonempty")
    for fam in families:
        if fam not in CAMPAIGN_FAMILIES:
            raise ValueError(f"campaign family must be one of {CAMPAIGN_FAMILIES}, got {fam!r}")
    radius_cap = check_radius_cap(radius_cap)
    srcs = _as_param_list(p_src)
    src_t = np.array([p.t for p in srcs])
    src_k = np.array([p.k for p in srcs])
    C = sharp_constant(n, p_tgt)
    start = time.perf_counter()

    best = (-np.inf, None)
    hist = np.zeros(HISTOGRAM_BINS, dtype=np.int64)
    for block, lo in enumerate(range(0, trials, block_size)):
        size = min(block_size, trials - lo)
        gen = rng.split(block).generator()
        gidx = np.arange(lo, lo + size)
        z = uniform_disc(gen, (size, m), radius_cap)
        v = complex_normal(gen, (size, m))
        fam_of = gidx % len(families)
        if force_witness and lo == 0:
            z[:1], v[:1] = _witness_block(m, n)
            fam_of[0] = -1
        t_row, k_row = src_t[gidx % len(srcs)], src_k[gidx % len(srcs)]
        v /= np.sqrt(_kernels.f2(z, v, t_row, k_row))[:, None]

        for f_id, fam in itertools.chain([(-1, "extremal")], enumerate(families)):
            rows = np.flatnonzero(fam_of == f_id)
            if rows.size == 0:
                continue
            w, fv, build = _family_images(fam, gen, z[rows], v[rows], n, radius_cap)
            ratio = _kernels.f2(w, fv, p_tgt.t, p_tgt.k)
            hist += np.histogram(np.clip(ratio / C, 0.0, 1.0), bins=HISTOGRAM_BINS, range=(0.0, 1.0))[0]
            j = int(np.argmax(ratio))
            if ratio[j] > best[0]:
                i = rows[j]
                best = (
                    float(ratio[j]),
                    {
                        "map_spec": build(j).to_dict(),
                        "z": encode_complex(z[i]),
                        "v": encode_complex(v[i]),
                        "trial": int(lo + i),
                        "source_params": {"t": float(t_row[i]), "k": int(k_row[i])},
                    },
                )

    max_ratio, worst = best
    return SchwarzReport(
        trials=trials,
        max_ratio=max_ratio,
        sharp_constant=C,
        worst_case=_jsonable(worst),
        violated=bool(max_ratio > C * (1.0 + tol.rel_eq)),
        seed=rng.seed,
        cell={"m": m, "n": n, "tt": p_tgt.t, "kk": p_tgt.k, "source": [[p.t, p.k] for p in srcs], "path": list(rng.path)},
        elapsed_ms=(time.perf_counter() - start) * 1e3,
        ratio_histogram=hist.tolist(),
    )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def witness_ratio(n: int, p_src: MetricParams, p_tgt: MetricParams, m: int = 1) -> float:
    """``f_0^* F~^2 / F^2`` at ``(0, e_1)``; equals the sharp constant."""
    z, v = _witness_block(m, n)
    w, fv = extremal_batch(n, z, v)
    return float(_kernels.f2(w, fv, p_tgt.t, p_tgt.k)[0] / _kernels.f2(z, v, p_src.t, p_src.k)[0])


def schwarz_grid(
    ms: Sequence[int],
    ns: Sequence[int],
    targets: Sequence[MetricParams],
    sources: Sequence[MetricParams],
    trials: int,
    seed: int,
    families: Sequence[str] = CAMPAIGN_FAMILIES,
    radius_cap: float = DEFAULT_RADIUS_CAP,
    force_witness: bool = False,
    jobs: int = 1,
    tol: Tolerance = DEFAULT_TOL,
) -> list[SchwarzReport]:
    """One report per ``(m, n, target)`` cell; all source parameters share each cell.

    Cell ``c`` (enumeration order) draws from ``Rng(seed).split(c)``, so
    results do not depend on ``jobs``.
    """
    cells = list(itertools.product(ms, ns, targets))
    root = Rng(seed)

    def run(c):
        m, n, tgt = cells[c]
        return verify_schwarz(
            sources, tgt, families, trials, root.split(c), m=m, n=n,
            radius_cap=radius_cap, force_witness=force_witness, tol=tol,
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, range(len(cells))))
    return [run(c) for c in range(len(cells))]


def _fixes_origin(f: HolomorphicMap, atol: float = 1e-12):
    f0 = f.apply_array(np.zeros(f.m, dtype=np.complex128))
    if np.max(np.abs(f0)) > atol:
        raise ValueError(f"map must fix the origin, f(0) = {f0}")


def map_degree(f: HolomorphicMap) -> int:
    return f.degree if isinstance(f, HomogeneousPower) else 1


def verify_norm_schwarz(
    p_src: MetricParams,
    p_tgt: MetricParams,
    f: HolomorphicMap,
    trials: int,
    rng: Rng,
    radius_cap: float = DEFAULT_RADIUS_CAP,
    tol: Tolerance = DEFAULT_TOL,
    witness_axis_points: int = 0,
) -> SchwarzReport:
    """Check ``phi~^2(f(z)) <= C phi^{2N}(z)`` with ``N`` the homogeneity degree (1 unless declared).

    ``max_ratio`` is ``max phi~^2(f(z)) / phi^{2N}(z)``.  With
    ``witness_axis_points > 0`` that many first-axis points are prepended.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _fixes_origin(f)
    radius_cap = check_radius_cap(radius_cap)
    start = time.perf_counter()
    N = map_degree(f)
    gen = rng.generator()
    z = uniform_disc(gen, (trials, f.m), radius_cap)
    if witness_axis_points:
        ax = np.zeros((witness_axis_points, f.m), dtype=np.complex128)
        ax[:, 0] = uniform_disc(gen, witness_axis_points, radius_cap)
        z = np.vstack([ax, z])
    z = z[np.any(z != 0, axis=1)]
    lhs = _kernels.f2(np.zeros((z.shape[0], f.n), dtype=np.complex128), f.apply_array(z), p_tgt.t, p_tgt.k)
    rhs = _kernels.f2(np.zeros_like(z), z, p_src.t, p_src.k) ** N
    ratio = lhs / rhs
    j = int(np.argmax(ratio))
    C = sharp_constant(f.n, p_tgt)
    return SchwarzReport(
        trials=int(z.shape[0]),
        max_ratio=float(ratio[j]),
        sharp_constant=C,
        worst_case={"map_spec": f.to_dict(), "z": encode_complex(z[j]), "v": None},
        violated=bool(ratio[j] > C * (1.0 + tol.rel_eq)),
        seed=rng.seed,
        cell={"m": f.m, "n": f.n, "t": p_src.t, "k": p_src.k, "tt": p_tgt.t, "kk": p_tgt.k, "degree": N},
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def norm_schwarz_gap(p_src: MetricParams, p_tgt: MetricParams, f: HolomorphicMap, z) -> float:
    """``C phi^{2N}(z) - phi~^2(f(z))`` at one point (zero on equality)."""
    zc = np.asarray(z, dtype=np.complex128)[None, :]
    lhs = _kernels.f2(np.zeros((1, f.n), dtype=np.complex128), f.apply_array(zc), p_tgt.t, p_tgt.k)[0]
    rhs = _kernels.f2(np.zeros_like(zc), zc, p_src.t, p_src.k)[0] ** map_degree(f)
    return float(sharp_constant(f.n, p_tgt) * rhs - lhs)


AXIS_SAMPLES = 100


def axis_fit(f: HolomorphicMap, axis: int, N: int, samples: int = AXIS_SAMPLES):
    """Least-squares fit ``f_j(zeta e_axis) ~ c_j zeta^N`` over deterministic axis samples.

    Returns ``(c, residual)`` with ``residual`` the max absolute misfit.
    """
    if not 0 <= axis < f.m:
        raise ValueError(f"axis must lie in 0..{f.m - 1}")
    k = np.arange(samples)
    zeta = 0.9 * np.sqrt((k + 0.5) / samples) * np.exp(2j * np.pi * k * 0.6180339887498949)
    pts = np.zeros((samples, f.m), dtype=np.complex128)
    pts[:, axis] = zeta
    vals = f.apply_array(pts)
    basis = zeta**N
    c = (basis.conj() @ vals) / np.vdot(basis, basis).real
    residual = float(np.max(np.abs(vals - basis[:, None] * c[None, :])))
    return c, residual


def check_equality_axis(
    p_src: MetricParams,
    p_tgt: MetricParams,
    f: HolomorphicMap,
    axis: int,
    N: int = 1,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """True iff every ``f_j`` restricted to the coordinate axis ``axis`` (0-based) is ``e^{i theta_j} zeta^N``.

    The metric parameters play no role in the test itself: the restriction
    criterion is the same for every member of the family.
    """
    _fixes_origin(f)
    c, residual = axis_fit(f, axis, N)
    return bool(residual <= tol.abs_eq * 10 and np.all(np.abs(np.abs(c) - 1.0) <= tol.abs_eq * 10))


def origin_axis_ratio(p_src: MetricParams, p_tgt: MetricParams, f: HolomorphicMap, axis: int) -> float:
    """``f^* F~^2(0; e_axis) / F^2(0; e_axis)``; equals C exactly on axis equality."""
    _fixes_origin(f)
    J = f.jacobian_array(np.zeros(f.m, dtype=np.complex128))
    return float(_kernels.f2(np.zeros((1, f.n), dtype=np.complex128), J[:, axis][None, :], p_tgt.t, p_tgt.k)[0])


@dataclass
class RigidityDiagnostic:
    eigenvalue_moduli: list
    abs_det: float
    hypothesis_held: bool
    min_probe_ratio: float
    det_at_least_one: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def cartan_rigidity_diagnostic(
    p: MetricParams,
    f: HolomorphicMap,
    z0,
    probe_vectors: int,
    rng: Rng,
    tol: Tolerance = DEFAULT_TOL,
) -> RigidityDiagnostic:
    """Necessary-condition evidence for ``f`` being an automorphism.

    Builds ``h = h_{f(z0)} o f o h_{z0}^{-1}``, which fixes the origin, and
    reports the moduli of the eigenvalues of ``h'(0)`` and ``|det h'(0)|``.
    The hypothesis ``f^* F^2 >= F^2`` is only sampled on ``probe_vectors``
    random directions at ``z0``, so it is evidence, not a certificate.
    """
    if f.m != f.n:
        raise ValueError("rigidity diagnostic needs a self-map of P_m")
    zc = point_coords(z0, f.m)
    b = f.apply_array(zc)
    Jf = f.jacobian_array(zc)
    Jh = (1.0 / (1.0 - np.abs(b) ** 2))[:, None] * Jf * (1.0 - np.abs(zc) ** 2)[None, :]
    eig = np.linalg.eigvals(Jh)

    gen = rng.generator()
    vs = complex_normal(gen, (max(probe_vectors, 1), f.m))
    zs = np.broadcast_to(zc, vs.shape)
    pulled = _kernels.f2(np.broadcast_to(b, vs.shape), vs @ Jf.T, p.t, p.k)
    ratio = pulled / _kernels.f2(zs, vs, p.t, p.k)
    min_ratio = float(np.min(ratio))
    abs_det = float(abs(np.linalg.det(Jh)))
    return RigidityDiagnostic(
        eigenvalue_moduli=np.abs(eig).tolist(),
        abs_det=abs_det,
        hypothesis_held=bool(min_ratio >= 1.0 - tol.rel_eq),
        min_probe_ratio=min_ratio,
        det_at_least_one=bool(abs_det >= 1.0 - tol.rel_eq),
    )


__all__ = [
    "CAMPAIGN_FAMILIES",
    "RigidityDiagnostic",
    "SchwarzReport",
    "axis_fit",
    "cartan_rigidity_diagnostic",
    "check_equality_axis",
    "map_degree",
    "norm_schwarz_gap",
    "origin_axis_ratio",
    "schwarz_grid",
    "sharp_constant",
    "verify_norm_schwarz",
    "verify_schwarz",
    "witness_ratio",
]
