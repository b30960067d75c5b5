"""Hot kernels with a compiled backend and a numpy fallback.

The compiled extension ``_ckernels`` is used when importable.  Set
``FINSLER_POLYDISC_BACKEND=python`` to force the numpy implementation, or
``=cython`` to make a missing extension an import error.

Every public function accepts array-likes, broadcasts scalar ``t``/``k``
across the batch and dispatches to the active backend.
"""

import os

import numpy as np

from . import _pykernels

_requested = os.environ.get("FINSLER_POLYDISC_BACKEND", "").strip().lower()

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None
    if _requested == "cython":
        raise

if _requested == "python" or _ckernels is None:
    BACKEND = "python"
    _impl = _pykernels
else:
    BACKEND = "cython"
    _impl = _ckernels

KERNEL_NAMES = ("f2", "grad_vbar", "levi", "hess_vbar", "mixed")


def available_backends():
    """Names of the backends that can be loaded in this environment."""
    return ("python", "cython") if _ckernels is not None else ("python",)


def backend_module(name):
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernel extension is not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def prepare(z, v, t, k):
    """Coerce to the contiguous dtypes both backends expect."""
    z = np.ascontiguousarray(np.atleast_2d(z), dtype=np.complex128)
    v = np.ascontiguousarray(np.atleast_2d(v), dtype=np.complex128)
    if z.shape != v.shape:
        raise ValueError(f"shape mismatch: z {z.shape} vs v {v.shape}")
    n = z.shape[0]
    t = np.ascontiguousarray(np.broadcast_to(np.asarray(t, dtype=np.float64), (n,)))
    k = np.ascontiguousarray(np.broadcast_to(np.asarray(k, dtype=np.int_), (n,)))
    return z, v, t, k


def _dispatch(name):
    def call(z, v, t, k, backend=None):
        impl = _impl if backend is None else backend_module(backend)
        return getattr(impl, name)(*prepare(z, v, t, k))

    call.__name__ = name
    call.__doc__ = getattr(_pykernels, name).__doc__
    return call


f2 = _dispatch("f2")
grad_vbar = _dispatch("grad_vbar")
levi = _dispatch("levi")
hess_vbar = _dispatch("hess_vbar")
mixed = _dispatch("mixed")
