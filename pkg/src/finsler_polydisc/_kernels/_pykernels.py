"""Pure-numpy kernels for the metric family and its fibre derivatives.

All functions take row-batched inputs: ``z`` and ``v`` are complex
``(N, m)`` arrays, ``t`` is a float ``(N,)`` array and ``k`` an integer
``(N,)`` array.  Notation shared with the Cython twin::

    a_l   = (1 - |z^l|^2)^-2
    x_l   = a_l |v^l|^2
    rho   = (sum_l x_l^k)^(1/k)         (rescaled by max x_l)
    y_l   = x_l / rho
    w_l   = a_l v^l
    G     = (sum_l x_l + t rho) / (1 + t)
"""

import numpy as np


def _weights(z):
    return 1.0 / (1.0 - (z.real**2 + z.imag**2)) ** 2


def _kroot(x, k):
    mx = x.max(axis=1)
    pos = mx > 0.0
    scale = np.where(pos, mx, 1.0)
    s = np.where(pos, ((x / scale[:, None]) ** k[:, None]).sum(axis=1), 1.0)
    return np.where(pos, scale * np.exp(np.log(s) / k), 0.0)


def _common(z, v, k):
    a = _weights(z)
    x = a * (v.real**2 + v.imag**2)
    rho = _kroot(x, k)
    return a, x, rho


def f2(z, v, t, k):
    a, x, rho = _common(z, v, k)
    return (x.sum(axis=1) + t * rho) / (1.0 + t)


def grad_vbar(z, v, t, k):
    """dG/d(conj v^j)."""
    a, x, rho = _common(z, v, k)
    y = x / rho[:, None]
    w = a * v
    return w * (1.0 + t[:, None] * y ** (k[:, None] - 1)) / (1.0 + t[:, None])


def levi(z, v, t, k):
    """L[i, j] = d^2 G / dv^i d(conj v^j)."""
    a, x, rho = _common(z, v, k)
    kk = k[:, None]
    tt = t[:, None]
    y = x / rho[:, None]
    w = a * v
    yk1 = y ** (kk - 1)
    diag = a * (1.0 + tt * kk * yk1)
    p = yk1 * w
    L = -(tt * (kk - 1) / rho[:, None])[:, :, None] * (p.conj()[:, :, None] * p[:, None, :])
    idx = np.arange(z.shape[1])
    L[:, idx, idx] += diag
    return L / (1.0 + t)[:, None, None]


def hess_vbar(z, v, t, k):
    """H[i, j] = d^2 G / d(conj v^i) d(conj v^j)."""
    a, x, rho = _common(z, v, k)
    kk = k[:, None]
    y = x / rho[:, None]
    w = a * v
    p = y ** (kk - 1) * w
    c = (t * (k - 1) / rho / (1.0 + t))[:, None]
    H = -c[:, :, None] * (p[:, :, None] * p[:, None, :])
    idx = np.arange(z.shape[1])
    H[:, idx, idx] += c * y ** (kk - 2) * w**2
    return H


def mixed(z, v, t, k):
    """M[s, l] = d^2 G / d(conj v^s) dz^l."""
    a, x, rho = _common(z, v, k)
    kk = k[:, None]
    tt = t[:, None]
    y = x / rho[:, None]
    w = a * v
    gamma = 2.0 * z.conj() / (1.0 - (z.real**2 + z.imag**2))
    ps = y ** (kk - 1) * w  # indexed by s
    ql = gamma * y**kk  # indexed by l
    M = -(tt * (kk - 1))[:, :, None] * (ps[:, :, None] * ql[:, None, :])
    idx = np.arange(z.shape[1])
    M[:, idx, idx] += gamma * w * (1.0 + tt * kk * y ** (kk - 1))
    return M / (1.0 + t)[:, None, None]
