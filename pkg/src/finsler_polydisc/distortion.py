"""Normalized convex mappings of the polydisc and the distortion bounds.

A normalized biholomorphic convex mapping of P_m is a product of
one-variable normalized convex functions, one per coordinate.  Three
closed-form factor families are shipped:

* ``HalfPlaneMoebius(c)``: ``z / (1 - c z)`` with ``|c| <= 1``; unimodular
  ``c`` gives the extremal half-plane maps.
* ``LogHalf``: ``(1/2) log((1 + z) / (1 - z))`` (onto a strip).
* ``Identity``.

With ``p(z) = max_l |z^l|`` the distortion bounds read::

    [(1-p)/(1+p)]^2 F^2(z; v) <= F^2(0; f'(z) v) <= [(1+p)/(1-p)]^2 F^2(z; v)
"""

from __future__ import annotations

import time
from dataclasses import dataclass

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
    vector_coords,
)
from .metrics import minkowski_p, norm_constant


@dataclass(frozen=True)
class HalfPlaneMoebius:
    c: complex

    kind = "moebius"

    def __post_init__(self):
        c = complex(self.c)
        if not np.isfinite(c) or abs(c) > 1.0 + 1e-15:
            raise ValueError(f"HalfPlaneMoebius needs |c| <= 1, got {c}")
        object.__setattr__(self, "c", c)

    @classmethod
    def rotation(cls, theta: float) -> "HalfPlaneMoebius":
        return cls(np.exp(1j * theta))

    def value(self, z):
        return z / (1.0 - self.c * z)

    def derivative(self, z):
        return 1.0 / (1.0 - self.c * z) ** 2

    def to_dict(self):
        return {"type": self.kind, "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class LogHalf:
    kind = "log"

    def value(self, z):
        return 0.5 * np.log((1.0 + z) / (1.0 - z))

    def derivative(self, z):
        return 1.0 / (1.0 - z * z)

    def to_dict(self):
        return {"type": self.kind}


@dataclass(frozen=True)
class Identity:
    kind = "id"

    def value(self, z):
        return z + 0.0j

    def derivative(self, z):
        return np.ones_like(z, dtype=np.complex128)

    def to_dict(self):
        return {"type": self.kind}


ConvexFactor = HalfPlaneMoebius | LogHalf | Identity


def factor_from_dict(data: dict):
    kind = data.get("type")
    if kind == "moebius":
        c = data.get("c", [1.0, 0.0])
        return HalfPlaneMoebius(complex(*c) if isinstance(c, (list, tuple)) else complex(c))
    if kind == "log":
        return LogHalf()
    if kind == "id":
        return Identity()
    raise ValueError(f"unknown convex factor type {kind!r}")


@dataclass(frozen=True)
class ConvexMapping:
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a convex mapping needs at least one factor")
        for fac in factors:
            if not isinstance(fac, (HalfPlaneMoebius, LogHalf, Identity)):
                raise TypeError(f"not a convex factor: {fac!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def dim(self) -> int:
        return len(self.factors)

    @classmethod
    def identity(cls, m: int) -> "ConvexMapping":
        return cls((Identity(),) * m)

    @classmethod
    def half_plane(cls, thetas) -> "ConvexMapping":
        """``f_l(z) = z / (1 - e^{i theta_l} z)``: the equality family."""
        return cls(tuple(HalfPlaneMoebius.rotation(th) for th in np.atleast_1d(thetas)))

    def values(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        return np.stack([fac.value(z[..., l]) for l, fac in enumerate(self.factors)], axis=-1)

    def derivatives(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        return np.stack([fac.derivative(z[..., l]) for l, fac in enumerate(self.factors)], axis=-1)

    def to_dict(self) -> dict:
        return {"factors": [fac.to_dict() for fac in self.factors]}

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexMapping":
        return cls(tuple(factor_from_dict(d) for d in data["factors"]))

    def as_map(self):
        from .maps import ConvexProduct

        return ConvexProduct(self)


def eval_convex(f: ConvexMapping, z) -> np.ndarray:
    return f.values(point_coords(z, f.dim))


def derivative_diag(f: ConvexMapping, z) -> np.ndarray:
    return f.derivatives(point_coords(z, f.dim))


def loewner_bounds(factor, z: complex) -> tuple[float, float, float]:
    """``(1/(1+|z|)^2, |f'(z)|, 1/(1-|z|)^2)``; raises if the sandwich fails."""
    z = complex(z)
    r = abs(z)
    if not r < 1.0:
        raise ValueError(f"|z| must be < 1, got {r}")
    lower, upper = 1.0 / (1.0 + r) ** 2, 1.0 / (1.0 - r) ** 2
    value = float(abs(factor.derivative(z)))
    slack = DEFAULT_TOL.rel_eq * upper
    if not lower - slack <= value <= upper + slack:
        raise ArithmeticError(f"Loewner bounds fail at z={z}: {lower} <= {value} <= {upper}")
    return lower, value, upper


def sample_convex_mapping(rng: Rng, m: int) -> ConvexMapping:
    gen = rng.generator()
    factors = []
    for kind in gen.integers(0, 4, m):
        if kind == 0:
            factors.append(HalfPlaneMoebius.rotation(gen.uniform(-np.pi, np.pi)))
        elif kind == 1:
            factors.append(HalfPlaneMoebius(uniform_disc(gen, (), 1.0)))
        elif kind == 2:
            factors.append(LogHalf())
        else:
            factors.append(Identity())
    return ConvexMapping(tuple(factors))


@dataclass
class DistortionReport:
    trials: int
    min_lower_margin: float
    min_upper_margin: float
    max_lower_ratio: float
    max_upper_ratio: float
    violated: bool
    worst_case: dict
    seed: int
    elapsed_ms: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _sample_zv(gen, size, m, radius_cap):
    z = uniform_disc(gen, (size, m), radius_cap)
    v = complex_normal(gen, (size, m))
    return z, v


def distortion_terms(p: MetricParams, f: ConvexMapping, z: np.ndarray, v: np.ndarray):
    """Batched ``(lower, middle, upper)`` of the distortion inequality."""
    pz = np.max(np.abs(z), axis=1)
    base = _kernels.f2(z, v, p.t, p.k)
    middle = _kernels.f2(np.zeros_like(z), f.derivatives(z) * v, p.t, p.k)
    q = ((1.0 - pz) / (1.0 + pz)) ** 2
    return q * base, middle, base / q


def verify_distortion(
    p: MetricParams,
    f: ConvexMapping,
    trials: int,
    rng: Rng,
    radius_cap: float = DEFAULT_RADIUS_CAP,
    tol: Tolerance = DEFAULT_TOL,
) -> DistortionReport:
    """Sample ``(z, v)`` and check both sides of the distortion inequality.

    Ratios are reported as ``lower / middle`` and ``middle / upper``; both
    are at most 1 on a conforming implementation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    radius_cap = check_radius_cap(radius_cap)
    start = time.perf_counter()
    z, v = _sample_zv(rng.generator(), trials, f.dim, radius_cap)
    lower, middle, upper = distortion_terms(p, f, z, v)
    lo_ratio, up_ratio = lower / middle, middle / upper
    worst = int(np.argmax(np.maximum(lo_ratio, up_ratio)))
    violated = bool(np.any(lo_ratio > 1.0 + tol.rel_eq) or np.any(up_ratio > 1.0 + tol.rel_eq))
    return DistortionReport(
        trials=trials,
        min_lower_margin=float(np.min(middle - lower)),
        min_upper_margin=float(np.min(upper - middle)),
        max_lower_ratio=float(np.max(lo_ratio)),
        max_upper_ratio=float(np.max(up_ratio)),
        violated=violated,
        worst_case={"map_spec": f.to_dict(), "z": encode_complex(z[worst]), "v": encode_complex(v[worst])},
        seed=rng.seed,
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def radial_terms(p: MetricParams, f: ConvexMapping, z: np.ndarray):
    """Batched radial chains: ``(lower, middle, upper)`` of the corollary and of the ``F^2(z; z)`` sandwich."""
    m = z.shape[1]
    pz = np.max(np.abs(z), axis=1)
    C = norm_constant(m, p)
    middle = _kernels.f2(np.zeros_like(z), f.derivatives(z) * z, p.t, p.k)
    radial = (pz**2 / (1.0 + pz) ** 4, middle, C * pz**2 / (1.0 - pz) ** 4)
    s = pz**2 / (1.0 - pz**2) ** 2
    sandwich = (s, _kernels.f2(z, z, p.t, p.k), C * s)
    return radial, sandwich


def verify_distortion_radial(
    p: MetricParams,
    f: ConvexMapping,
    trials: int,
    rng: Rng,
    radius_cap: float = DEFAULT_RADIUS_CAP,
    tol: Tolerance = DEFAULT_TOL,
) -> DistortionReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    radius_cap = check_radius_cap(radius_cap)
    start = time.perf_counter()
    z = uniform_disc(rng.generator(), (trials, f.dim), radius_cap)
    (lo, mid, up), (slo, smid, sup) = radial_terms(p, f, z)
    lo_ratio = np.maximum(lo / mid, slo / smid)
    up_ratio = np.maximum(mid / up, smid / sup)
    worst = int(np.argmax(np.maximum(lo_ratio, up_ratio)))
    violated = bool(np.any(lo_ratio > 1.0 + tol.rel_eq) or np.any(up_ratio > 1.0 + tol.rel_eq))
    return DistortionReport(
        trials=trials,
        min_lower_margin=float(min(np.min(mid - lo), np.min(smid - slo))),
        min_upper_margin=float(min(np.min(up - mid), np.min(sup - smid))),
        max_lower_ratio=float(np.max(lo_ratio)),
        max_upper_ratio=float(np.max(up_ratio)),
        violated=violated,
        worst_case={"map_spec": f.to_dict(), "z": encode_complex(z[worst]), "v": encode_complex(z[worst])},
        seed=rng.seed,
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def upper_witness(thetas, b: float) -> np.ndarray:
    """``z_0^l = b e^{-i theta_l}``: upper equality point for the half-plane family."""
    return b * np.exp(-1j * np.asarray(thetas, dtype=np.float64))


def lower_witness(thetas, a: float) -> np.ndarray:
    return -a * np.exp(-1j * np.asarray(thetas, dtype=np.float64))


def inner_inequalities(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coordinatewise slacks of the two scalar steps behind the distortion bounds.

    Returns ``(upper_slack, lower_slack)``, both ``>= 0`` entrywise:
    ``(1/(1-|z^l|^2)^2) [(1+p)/(1-p)]^2 - 1/(1-|z^l|)^4`` and
    ``1/(1+|z^l|)^4 - (1/(1-|z^l|^2)^2) [(1-p)/(1+p)]^2``.
    """
    z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
    r = np.abs(z)
    pz = np.max(r, axis=-1, keepdims=True)
    a = 1.0 / (1.0 - r**2) ** 2
    upper = a * ((1.0 + pz) / (1.0 - pz)) ** 2 - 1.0 / (1.0 - r) ** 4
    lower = 1.0 / (1.0 + r) ** 4 - a * ((1.0 - pz) / (1.0 + pz)) ** 2
    return upper, lower


def distortion_ratio(p: MetricParams, f: ConvexMapping, z, v) -> tuple[float, float, float]:
    """Single-point ``(lower, middle, upper)`` of the distortion inequality."""
    zc = point_coords(z, f.dim)
    vc = vector_coords(v, f.dim)
    lo, mid, up = distortion_terms(p, f, zc[None, :], vc[None, :])
    return float(lo[0]), float(mid[0]), float(up[0])


__all__ = [
    "ConvexFactor",
    "ConvexMapping",
    "DistortionReport",
    "HalfPlaneMoebius",
    "Identity",
    "LogHalf",
    "derivative_diag",
    "distortion_ratio",
    "distortion_terms",
    "eval_convex",
    "factor_from_dict",
    "inner_inequalities",
    "loewner_bounds",
    "lower_witness",
    "minkowski_p",
    "radial_terms",
    "sample_convex_mapping",
    "upper_witness",
    "verify_distortion",
    "verify_distortion_radial",
]
