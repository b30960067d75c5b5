"""Levi form, real Hessian, connection and curvature of ``G = F^2_{t,k}``.

First and second fibre derivatives of ``G`` come from closed forms (see
``_kernels``).  Anything beyond is obtained by one level of central
differences of a closed-form quantity, never by differencing a
finite-difference result:

* ``Gamma^i_{;l} = G^{s i} d^2G / d(conj v^s) dz^l`` is closed form.
* ``Gamma^i_{j;l} = d Gamma^i_{;l} / dv^j`` differences it in ``v``.
* ``R^s_{l i r} = -d Gamma^s_{l;i} / d(conj z^r)`` differences
  ``Gamma^s_{;i}(z; e_l)`` in ``conj z``.  This uses that
  ``Gamma^s_{;i}`` is linear in ``v``, which the connection report
  certifies separately (Berwald residual plus Euler's identity).

Wirtinger derivatives are assembled from real partials:
``d/dv = (d/dx - i d/dy) / 2`` and ``d/d(conj v) = (d/dx + i d/dy) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    DEFAULT_RADIUS_CAP,
    DEFAULT_TOL,
    MetricParams,
    Rng,
    Tolerance,
    ZeroVectorError,
    check_radius_cap,
    complex_normal,
    point_coords,
    uniform_disc,
    vector_coords,
)

HESSIAN_STEP = 1e-5
V_STEP = 1e-3
Z_STEP = 1e-3
BERWALD_SAMPLES = 20

# 5-point first-derivative stencil
_STENCIL = ((-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0))


def _wirtinger(fun, x, h, conj=False):
    """Batched Wirtinger derivative of ``fun`` at the rows of ``x``.

    ``fun(points, rows)`` maps a ``(B, m)`` array to a ``(B, ...)`` array,
    where ``rows[b]`` is the index into ``x`` that point ``b`` perturbs.
    ``h`` is a per-row step.  Returns ``(N, ..., m)`` with the derivative
    direction last.
    """
    N, m = x.shape
    eye = np.eye(m)
    offsets = np.array([o for o, _ in _STENCIL])
    weights = np.array([w for _, w in _STENCIL])
    unit = np.stack([eye, 1j * eye])  # (2, m_dir, m)
    pts = x[:, None, None, None, :] + (h[:, None, None, None, None] * offsets[None, None, None, :, None]) * unit[None, :, :, None, :]
    rows = np.repeat(np.arange(N), 2 * m * len(offsets))
    vals = fun(pts.reshape(-1, m), rows)
    vals = vals.reshape((N, 2, m, len(offsets)) + vals.shape[1:])
    d = np.tensordot(vals, weights, axes=([3], [0])) / h.reshape((N, 1, 1) + (1,) * (vals.ndim - 4))
    dx, dy = d[:, 0], d[:, 1]
    out = 0.5 * (dx + 1j * dy) if conj else 0.5 * (dx - 1j * dy)
    return np.moveaxis(out, 1, -1)


def _rows(p, n):
    return np.full(n, p.t), np.full(n, p.k)


def _check_v(v):
    if not np.all(np.any(v != 0, axis=-1)):
        raise ZeroVectorError("fibre derivatives are undefined on the zero section")


def _pair(p, z, v):
    zc = point_coords(z)
    vc = vector_coords(v, zc.size)
    _check_v(vc)
    return zc[None, :], vc[None, :]


# ----------------------------------------------------------------------------
# Levi matrix and real Hessian


@dataclass
class LeviReport:
    G: float
    levi: np.ndarray
    levi_inverse: np.ndarray
    min_eigenvalue: float
    hessian_real: np.ndarray
    hessian_min_eigenvalue: float

    def strongly_pseudoconvex(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.min_eigenvalue > tol.psd_min_eig

    def strongly_convex(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.hessian_min_eigenvalue > tol.psd_min_eig

    def as_dict(self) -> dict:
        return {
            "G": self.G,
            "min_eigenvalue": self.min_eigenvalue,
            "hessian_min_eigenvalue": self.hessian_min_eigenvalue,
            "levi_hermitian_residual": float(np.max(np.abs(self.levi - self.levi.conj().T))),
        }


def real_gradient(z, v, t, k):
    """``dG/du`` in the real fibre coordinates ``u = (Re v, Im v)``; batched."""
    g = _kernels.grad_vbar(z, v, t, k)
    return 2.0 * np.concatenate([g.real, g.imag], axis=-1)


def real_hessian_exact_batch(z, v, t, k):
    """Real ``2m x 2m`` Hessian assembled from the Levi matrix and ``d^2G/d(conj v)^2``."""
    L = _kernels.levi(z, v, t, k)
    H = _kernels.hess_vbar(z, v, t, k)
    top = np.concatenate([2 * (L + H).real, 2 * (L + H).imag], axis=-1)
    bottom = np.concatenate([-2 * (L - H).imag, 2 * (L - H).real], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def real_hessian_fd_batch(z, v, t, k, step=HESSIAN_STEP):
    """Central differences of the closed-form real gradient, then symmetrized."""
    N, m = v.shape
    h = step * np.max(np.abs(v), axis=1)
    eye = np.concatenate([np.eye(m), 1j * np.eye(m)])  # (2m, m) real directions
    vp = v[:, None, :] + h[:, None, None] * eye[None]
    vm = v[:, None, :] - h[:, None, None] * eye[None]
    zz = np.repeat(z, 2 * m, axis=0)
    tt, kk = np.repeat(t, 2 * m), np.repeat(k, 2 * m)
    gp = real_gradient(zz, vp.reshape(-1, m), tt, kk).reshape(N, 2 * m, 2 * m)
    gm = real_gradient(zz, vm.reshape(-1, m), tt, kk).reshape(N, 2 * m, 2 * m)
    Hs = (gp - gm) / (2.0 * h[:, None, None])
    return 0.5 * (Hs + np.swapaxes(Hs, 1, 2))


def real_hessian(p: MetricParams, z, v, method: str = "fd") -> np.ndarray:
    zc, vc = _pair(p, z, v)
    t, k = _rows(p, 1)
    if method == "fd":
        return real_hessian_fd_batch(zc, vc, t, k)[0]
    if method == "exact":
        return real_hessian_exact_batch(zc, vc, t, k)[0]
    raise ValueError("method must be 'fd' or 'exact'")


def levi_matrix(p: MetricParams, z, v) -> LeviReport:
    zc, vc = _pair(p, z, v)
    t, k = _rows(p, 1)
    L = _kernels.levi(zc, vc, t, k)[0]
    hess = real_hessian_fd_batch(zc, vc, t, k)[0]
    return LeviReport(
        G=float(_kernels.f2(zc, vc, t, k)[0]),
        levi=L,
        levi_inverse=np.linalg.inv(L),
        min_eigenvalue=float(np.linalg.eigvalsh(L)[0]),
        hessian_real=hess,
        hessian_min_eigenvalue=float(np.linalg.eigvalsh(hess)[0]),
    )


def convexity_batch(z, v, t, k):
    """Min eigenvalues ``(levi, real Hessian)`` for a batch of samples."""
    L = _kernels.levi(z, v, t, k)
    hess = real_hessian_fd_batch(z, v, t, k)
    return np.linalg.eigvalsh(L)[:, 0], np.linalg.eigvalsh(hess)[:, 0]


def fd_derivative_errors(z, v, t, k, step=HESSIAN_STEP):
    """Relative Frobenius misfit of every closed-form derivative against a difference oracle.

    Returns a dict of ``(N,)`` arrays: ``grad_vbar`` (against differences of
    ``G``), ``levi`` and ``hess_vbar`` (differences of ``dG/d(conj v)`` in
    ``v`` and ``conj v``, both relative to the norm of the whole complex
    Hessian ``|L| + |H|``), ``mixed`` (differences in ``z``) and
    ``real_hessian`` (exact assembly against the difference Hessian).
    """
    N, m = v.shape
    h = step * np.max(np.abs(v), axis=1)
    hz = step * (1.0 - np.max(np.abs(z), axis=1))

    def in_v(name):
        return lambda pts, rows: getattr(_kernels, name)(z[rows], pts, t[rows], k[rows])

    def in_z(pts, rows):
        return _kernels.grad_vbar(pts, v[rows], t[rows], k[rows])

    def norm(a):
        return np.linalg.norm(a.reshape(N, -1), axis=1)

    def rel(a, b, scale=None):
        return norm(a - b) / (norm(b) if scale is None else scale)

    g_fd = _wirtinger(in_v("f2"), v, h, conj=True)
    dg_v = _wirtinger(in_v("grad_vbar"), v, h)  # [n, j, i] = d g_j / dv^i
    dg_vb = _wirtinger(in_v("grad_vbar"), v, h, conj=True)
    dg_z = _wirtinger(in_z, z, hz)  # [n, s, l] = d g_s / dz^l
    L = _kernels.levi(z, v, t, k)
    H = _kernels.hess_vbar(z, v, t, k)
    # H can be tiny next to L; both are blocks of one complex Hessian and share its scale
    scale = norm(L) + norm(H)
    return {
        "grad_vbar": rel(g_fd, _kernels.grad_vbar(z, v, t, k)),
        "levi": rel(np.swapaxes(dg_v, 1, 2), L, scale),
        "hess_vbar": rel(np.swapaxes(dg_vb, 1, 2), H, scale),
        "mixed": rel(dg_z, _kernels.mixed(z, v, t, k)),
        "real_hessian": rel(real_hessian_fd_batch(z, v, t, k, step), real_hessian_exact_batch(z, v, t, k)),
    }


# ----------------------------------------------------------------------------
# connection


def gamma_nl_batch(z, v, t, k):
    """``Gamma[n, i, l] = Gamma^i_{;l}``: solves ``L^T Gamma = M`` row by row."""
    L = _kernels.levi(z, v, t, k)
    M = _kernels.mixed(z, v, t, k)
    return np.linalg.solve(np.swapaxes(L, 1, 2), M)


def gamma_h_batch(z, v, t, k, step=V_STEP):
    """``[n, i, j, l] = Gamma^i_{j;l} = d Gamma^i_{;l} / dv^j``."""
    h = step * np.max(np.abs(v), axis=1)
    d = _wirtinger(lambda pts, rows: gamma_nl_batch(z[rows], pts, t[rows], k[rows]), v, h)
    return np.moveaxis(d, -1, 2)  # (n, i, l, j) -> (n, i, j, l)


def _spray(z, v, t, k):
    # G^i = (1/2) Gamma^i_{;r} v^r
    return 0.5 * np.einsum("nir,nr->ni", gamma_nl_batch(z, v, t, k), v)


def berwald_batch(z, v, t, k, step=V_STEP):
    """``(G^i_l, G^i_{jl})`` with ``G^i_l = dG^i/dv^l`` and ``G^i_{jl} = dG^i_l/dv^j``.

    Both are differences of the closed-form spray ``G^i``; the second one
    uses the tensor product of the first-derivative stencil.
    """
    h = step * np.max(np.abs(v), axis=1)
    first = _wirtinger(lambda pts, rows: _spray(z[rows], pts, t[rows], k[rows]), v, h)  # (n, i, l)

    def first_at(pts, rows):
        return _wirtinger(
            lambda q, r2: _spray(z[rows][r2], q, t[rows][r2], k[rows][r2]), pts, h[rows]
        )

    second = _wirtinger(first_at, v, h)  # (n, i, l, j)
    return first, np.moveaxis(second, -1, 2)


@dataclass
class ConnectionReport:
    gamma_nl: np.ndarray
    gamma_h: np.ndarray
    berwald_nl: np.ndarray
    berwald: np.ndarray
    kahler_residual: float
    berwald_v_residual: float

    def kahler_berwald(self, threshold: float = 1e-8) -> bool:
        return self.kahler_residual < threshold and self.berwald_v_residual < threshold

    def as_dict(self) -> dict:
        return {"kahler_residual": self.kahler_residual, "berwald_v_residual": self.berwald_v_residual}


def _sample_directions(gen, size, m):
    # keep every coordinate away from zero, as the fibre formulas are evaluated defensively
    v = complex_normal(gen, (size, m))
    small = np.abs(v) < 1e-3
    v[small] += 1e-3
    return v / np.max(np.abs(v), axis=-1, keepdims=True)


def kahler_berwald_residuals(z, t, k, vs, step=V_STEP):
    """Residuals at each point of ``z`` (shape ``(N, m)``) over fibre samples ``vs`` (shape ``(N, S, m)``).

    Returns ``(kahler, berwald_v)`` arrays of shape ``(N,)``: the max
    asymmetry ``|Gamma^i_{j;l} - Gamma^i_{l;j}|`` and the max spread of
    ``Gamma^i_{j;l}`` across the samples.
    """
    N, S, m = vs.shape
    zz = np.repeat(z, S, axis=0)
    gh = gamma_h_batch(zz, vs.reshape(-1, m), np.repeat(t, S), np.repeat(k, S), step).reshape(N, S, m, m, m)
    kahler = np.max(np.abs(gh - np.swapaxes(gh, 3, 4)).reshape(N, -1), axis=1)
    spread = np.max(np.abs(gh - gh[:, :1]).reshape(N, -1), axis=1)
    return kahler, spread


def connection(
    p: MetricParams,
    z,
    v,
    rng: Rng | None = None,
    samples: int = BERWALD_SAMPLES,
) -> ConnectionReport:
    """Connection coefficients at ``(z; v)`` and residuals over ``samples`` extra fibre directions."""
    zc, vc = _pair(p, z, v)
    t, k = _rows(p, 1)
    gen = (rng or Rng(0)).generator()
    extra = _sample_directions(gen, max(samples - 1, 0), zc.shape[1])
    vs = np.concatenate([vc, extra])[None]
    kahler, spread = kahler_berwald_residuals(zc, t, k, vs)
    gnl = gamma_nl_batch(zc, vc, t, k)[0]
    gh = gamma_h_batch(zc, vc, t, k)[0]
    bnl, b = berwald_batch(zc, vc, t, k)
    return ConnectionReport(
        gamma_nl=gnl,
        gamma_h=gh,
        berwald_nl=bnl[0],
        berwald=b[0],
        kahler_residual=float(kahler[0]),
        berwald_v_residual=float(spread[0]),
    )


def bergman_gamma(z) -> np.ndarray:
    """``2 conj(z^l) / (1 - |z^l|^2)``: Hermitian connection of ``(1 - |z|^2)^-2``."""
    z = np.asarray(z, dtype=np.complex128)
    return 2.0 * z.conj() / (1.0 - np.abs(z) ** 2)


# ----------------------------------------------------------------------------
# curvature


@dataclass
class CurvatureReport:
    R: np.ndarray
    mean_curvature: np.ndarray
    einstein_factor: complex | None
    fd_residual: float = 0.0
    max_deviation: float = 0.0
    samples: int = 1

    def as_dict(self) -> dict:
        ef = self.einstein_factor
        return {
            "einstein_factor": None if ef is None else [float(np.real(ef)), float(np.imag(ef))],
            "fd_residual": self.fd_residual,
            "max_deviation": self.max_deviation,
            "samples": self.samples,
        }


def curvature_exact(z) -> np.ndarray:
    """``R[s, l, i, r]``: ``-2 / (1 - |z^l|^2)^2`` when ``s = l = i = r``, else 0."""
    z = np.asarray(z, dtype=np.complex128)
    m = z.shape[-1]
    R = np.zeros(z.shape[:-1] + (m,) * 4, dtype=np.complex128)
    idx = np.arange(m)
    R[..., idx, idx, idx, idx] = -2.0 / (1.0 - np.abs(z) ** 2) ** 2
    return R


def curvature_fd_batch(z, t, k, step=Z_STEP):
    """``R[n, s, l, i, r] = -d Gamma^s_{;i}(z; e_l) / d(conj z^r)`` by differences in ``z``."""
    N, m = z.shape
    h = step * (1.0 - np.max(np.abs(z), axis=1))
    out = np.empty((N, m, m, m, m), dtype=np.complex128)
    for l in range(m):
        e = np.zeros(m, dtype=np.complex128)
        e[l] = 1.0

        def gamma_at(pts, rows):
            return gamma_nl_batch(pts, np.broadcast_to(e, pts.shape).copy(), t[rows], k[rows])

        d = _wirtinger(gamma_at, z, h, conj=True)  # (n, s, i, r)
        out[:, :, l] = -d
    return out


def mean_curvature(R: np.ndarray, z) -> np.ndarray:
    """``K^s_l = g^{r i} R^s_{l i r}`` against the Bergman metric ``g = diag(a_l)``."""
    ginv = (1.0 - np.abs(np.asarray(z)) ** 2) ** 2  # diagonal of the inverse
    return np.einsum("...slii,...i->...sl", R, ginv)


def curvature(p: MetricParams, z) -> CurvatureReport:
    """Closed-form curvature blocks with a difference cross-check through the connection."""
    zc = point_coords(z)[None, :]
    t, k = _rows(p, 1)
    R = curvature_exact(zc)[0]
    R_fd = curvature_fd_batch(zc, t, k)[0]
    K = mean_curvature(R, zc[0])
    scale = np.max(np.abs(R))
    return CurvatureReport(
        R=R,
        mean_curvature=K,
        einstein_factor=_einstein_factor(K),
        fd_residual=float(np.max(np.abs(R_fd - R)) / scale),
        max_deviation=float(np.max(np.abs(K + 2.0 * np.eye(K.shape[0])))),
    )


def _einstein_factor(K, rtol=1e-8):
    m = K.shape[-1]
    c = np.trace(K) / m
    if np.max(np.abs(K - c * np.eye(m))) <= rtol * abs(c):
        return complex(c)
    return None


def einstein_check(
    p: MetricParams,
    samples: int,
    rng: Rng,
    m: int = 2,
    radius_cap: float = DEFAULT_RADIUS_CAP,
    rtol: float = 1e-8,
) -> CurvatureReport:
    """Mean curvature from the difference route at ``samples`` random points.

    ``einstein_factor`` is ``-2`` when ``K = -2 I`` to ``rtol`` at every
    sample, else ``None``.  ``R`` and ``mean_curvature`` belong to the
    worst sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    radius_cap = check_radius_cap(radius_cap)
    z = uniform_disc(rng.generator(), (samples, m), radius_cap)
    t, k = _rows(p, samples)
    R = curvature_fd_batch(z, t, k)
    K = mean_curvature(R, z)
    dev = np.max(np.abs(K + 2.0 * np.eye(m)).reshape(samples, -1), axis=1) / 2.0
    worst = int(np.argmax(dev))
    ok = bool(np.all(dev <= rtol))
    R_exact = curvature_exact(z)
    scale = np.max(np.abs(R_exact).reshape(samples, -1), axis=1)
    fd_res = np.max(np.abs(R - R_exact).reshape(samples, -1), axis=1) / scale
    return CurvatureReport(
        R=R[worst],
        mean_curvature=K[worst],
        einstein_factor=-2.0 + 0j if ok else None,
        fd_residual=float(np.max(fd_res)),
        max_deviation=float(dev[worst]),
        samples=samples,
    )


def sample_fibre_points(rng: Rng, size: int, m: int, radius_cap: float = DEFAULT_RADIUS_CAP):
    gen = rng.generator()
    return uniform_disc(gen, (size, m), radius_cap), _sample_directions(gen, size, m)


__all__ = [
    "ConnectionReport",
    "CurvatureReport",
    "LeviReport",
    "bergman_gamma",
    "berwald_batch",
    "connection",
    "convexity_batch",
    "curvature",
    "curvature_exact",
    "curvature_fd_batch",
    "einstein_check",
    "fd_derivative_errors",
    "gamma_h_batch",
    "gamma_nl_batch",
    "kahler_berwald_residuals",
    "levi_matrix",
    "mean_curvature",
    "real_gradient",
    "real_hessian",
    "real_hessian_exact_batch",
    "real_hessian_fd_batch",
    "sample_fibre_points",
]
