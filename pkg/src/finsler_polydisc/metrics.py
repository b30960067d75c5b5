"""Closed-form evaluation of the invariant metrics F_{t,k} on P_m.

For ``a_l = (1 - |z^l|^2)^-2``::

    F^2_{t,k}(z; v) = ( sum_l a_l |v^l|^2 + t (sum_l a_l^k |v^l|^{2k})^{1/k} ) / (1 + t)

``t = 0`` gives the Bergman metric; at ``z = 0`` the metric is the complex
norm ``phi_{t,k}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import DimensionMismatchError, MetricParams, point_coords, vector_coords


@dataclass(frozen=True)
class MetricValue:
    F: float
    F2: float


def f2_batch(z: np.ndarray, v: np.ndarray, t, k) -> np.ndarray:
    """Row-wise F^2 for ``(N, m)`` arrays; ``t``/``k`` scalars or ``(N,)`` arrays.

    No domain validation: callers pass interior points.
    """
    return _kernels.f2(z, v, t, k)


def phi2_batch(v: np.ndarray, t, k) -> np.ndarray:
    v = np.atleast_2d(v)
    return _kernels.f2(np.zeros_like(v, dtype=np.complex128), v, t, k)


def _pair(z, v):
    zc = point_coords(z)
    vc = vector_coords(v)
    if zc.size != vc.size:
        raise DimensionMismatchError(f"point has dimension {zc.size}, vector {vc.size}")
    return zc, vc


def eval_F2(p: MetricParams, z, v) -> MetricValue:
    zc, vc = _pair(z, v)
    g = float(_kernels.f2(zc, vc, p.t, p.k)[0])
    return MetricValue(F=math.sqrt(g), F2=g)


def eval_phi2(p: MetricParams, v) -> float:
    vc = vector_coords(v)
    return float(phi2_batch(vc, p.t, p.k)[0])


def eval_bergman_F2(z, v) -> float:
    zc, vc = _pair(z, v)
    # t = 0 drops the k-root term, so the kernel computes exactly sum a_l |v^l|^2
    return float(_kernels.f2(zc, vc, 0.0, 2)[0])


def minkowski_p(z) -> float:
    """Gauge of P_m, i.e. the sup norm; accepts any vector of C^m."""
    arr = np.asarray(z, dtype=np.complex128)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def indicatrix_contains(p: MetricParams, v) -> bool:
    """Strict set membership ``phi_{t,k}(v) < 1``; no tolerance applied."""
    return eval_phi2(p, v) < 1.0


def norm_constant(n: int, p: MetricParams) -> float:
    """``(n + t n^{1/k}) / (1 + t)``: the value of ``phi^2`` on ``(1, ..., 1)`` in C^n."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return (n + p.t * n ** (1.0 / p.k)) / (1.0 + p.t)
