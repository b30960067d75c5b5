"""Holomorphic map families ``P_m -> P_n`` with exact Jacobians.

Jacobians use the row-per-target layout ``J[j, i] = df_j / dz^i`` (shape
``n x m``), so ``f_*(v) = J @ v``.  A linear map is stored the same way:
``w = A @ z`` with one row per target coordinate.

Map specs round-trip through plain dicts / JSON with a ``"type"`` tag; see
``schemas/map_spec.schema.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from . import _kernels
from .automorphisms import disc_moebius, disc_moebius_deriv
from .core import (
    DEFAULT_RADIUS_CAP,
    DimensionMismatchError,
    DomainError,
    MetricParams,
    Rng,
    check_radius_cap,
    decode_complex,
    encode_complex,
    point_coords,
    uniform_disc,
    vector_coords,
)

ADMISSIBLE_SLACK = 1e-12


class InadmissibleMapError(ValueError):
    """A linear map does not carry P_m into P_n."""


def row_sum_admissible(A, slack: float = ADMISSIBLE_SLACK) -> bool:
    """True iff every target row satisfies ``sum_i |a_{ji}| <= 1``.

    This is necessary and sufficient for ``z -> A z`` to map P_m into P_n.
    ``slack`` absorbs rounding in entries of modulus one (e.g. ``e^{i theta}``).
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    return bool(np.all(np.abs(A).sum(axis=1) <= 1.0 + slack))


class HolomorphicMap:
    """Base class of the map families; ``m`` is the source and ``n`` the target dimension.

    ``apply_array`` is unvalidated and accepts ``(..., m)`` batches;
    ``jacobian_array`` takes a single point.
    """

    kind: ClassVar[str] = ""
    m: int
    n: int

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def jacobian_array(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def maps_into_polydisc(self) -> bool:
        return True

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __call__(self, z):
        return evaluate(self, z)


@dataclass(frozen=True, eq=False)
class Linear(HolomorphicMap):
    matrix: np.ndarray
    kind: ClassVar[str] = "linear"

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.matrix, dtype=np.complex128)).copy()
        if A.ndim != 2 or not np.all(np.isfinite(A)):
            raise ValueError("matrix must be a finite 2-d complex array")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def m(self):
        return self.matrix.shape[1]

    @property
    def n(self):
        return self.matrix.shape[0]

    def apply_array(self, z):
        return z @ self.matrix.T

    def jacobian_array(self, z):
        return self.matrix.copy()

    def maps_into_polydisc(self):
        return row_sum_admissible(self.matrix)

    def to_dict(self):
        return {"type": self.kind, "matrix": [encode_complex(row) for row in self.matrix]}


@dataclass(frozen=True, eq=False)
class CoordMoebius(HolomorphicMap):
    """``w^j = e^{i theta_j} (z^{s_j} - a_j) / (1 - conj(a_j) z^{s_j})``."""

    m: int
    sources: np.ndarray
    params: np.ndarray
    phases: np.ndarray
    kind: ClassVar[str] = "coord_moebius"

    def __post_init__(self):
        sources = np.asarray(self.sources, dtype=np.int64).reshape(-1)
        n = sources.size
        params = point_coords(self.params, n)
        phases = np.asarray(self.phases, dtype=np.float64).reshape(-1)
        if phases.size != n:
            raise DimensionMismatchError("one phase per target coordinate is required")
        if np.any((sources < 0) | (sources >= self.m)):
            raise ValueError(f"source indices must lie in 0..{self.m - 1}")
        for name, arr in (("sources", sources), ("params", params.copy()), ("phases", phases)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.sources.size

    def apply_array(self, z):
        return disc_moebius(z[..., self.sources], self.params, self.phases)

    def jacobian_array(self, z):
        J = np.zeros((self.n, self.m), dtype=np.complex128)
        J[np.arange(self.n), self.sources] = disc_moebius_deriv(z[self.sources], self.params, self.phases)
        return J

    def to_dict(self):
        return {
            "type": self.kind,
            "m": int(self.m),
            "sources": [int(s) for s in self.sources],
            "params": encode_complex(self.params),
            "phases": [float(p) for p in self.phases],
        }


@dataclass(frozen=True, eq=False)
class Extremal(HolomorphicMap):
    """``f_0(z) = (z^1, ..., z^1)``: the witness of the sharp Schwarz constant."""

    m: int
    n: int
    kind: ClassVar[str] = "extremal"

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("dimensions must be >= 1")

    def apply_array(self, z):
        return np.repeat(np.asarray(z, dtype=np.complex128)[..., :1], self.n, axis=-1)

    def jacobian_array(self, z):
        J = np.zeros((self.n, self.m), dtype=np.complex128)
        J[:, 0] = 1.0
        return J

    def to_dict(self):
        return {"type": self.kind, "m": int(self.m), "n": int(self.n)}


@dataclass(frozen=True, eq=False)
class HomogeneousPower(HolomorphicMap):
    """``f_j(z) = e^{i theta_j} inner_j(z)^N`` for a linear ``inner``.

    Satisfies ``f(lambda z) = lambda^N f(z)`` and maps into P_n whenever
    ``inner`` does.
    """

    inner: HolomorphicMap
    degree: int
    phases: np.ndarray | None = None
    kind: ClassVar[str] = "homogeneous"

    def __post_init__(self):
        if not isinstance(self.inner, (Linear, Extremal)):
            raise ValueError("inner map must be homogeneous of degree one (linear or extremal)")
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValueError("degree must be an integer >= 1")
        phases = np.zeros(self.inner.n) if self.phases is None else np.asarray(self.phases, dtype=np.float64)
        if phases.shape != (self.inner.n,):
            raise DimensionMismatchError("one phase per target coordinate is required")
        phases = phases.copy()
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "degree", int(self.degree))

    @property
    def m(self):
        return self.inner.m

    @property
    def n(self):
        return self.inner.n

    def maps_into_polydisc(self):
        return self.inner.maps_into_polydisc()

    def apply_array(self, z):
        return np.exp(1j * self.phases) * self.inner.apply_array(z) ** self.degree

    def jacobian_array(self, z):
        u = self.inner.apply_array(z)
        scale = np.exp(1j * self.phases) * self.degree * u ** (self.degree - 1)
        return scale[:, None] * self.inner.jacobian_array(z)

    def to_dict(self):
        return {
            "type": self.kind,
            "inner": self.inner.to_dict(),
            "degree": self.degree,
            "phases": [float(p) for p in self.phases],
        }


@dataclass(frozen=True, eq=False)
class ConvexProduct(HolomorphicMap):
    """``f(z) = (f_1(z^1), ..., f_m(z^m))``; values lie in C^m, not in P_m."""

    mapping: "object"  # distortion.ConvexMapping
    kind: ClassVar[str] = "convex_product"

    @property
    def m(self):
        return len(self.mapping.factors)

    @property
    def n(self):
        return self.m

    def maps_into_polydisc(self):
        return False

    def apply_array(self, z):
        return self.mapping.values(z)

    def jacobian_array(self, z):
        return np.diag(self.mapping.derivatives(z))

    def to_dict(self):
        return {"type": self.kind, **self.mapping.to_dict()}


@dataclass(frozen=True, eq=False)
class Composed(HolomorphicMap):
    """``maps[-1] o ... o maps[0]``: the first map is applied first."""

    maps: tuple = field(default=())
    kind: ClassVar[str] = "composed"

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("composition needs at least one map")
        for first, second in zip(maps, maps[1:]):
            if first.n != second.m:
                raise DimensionMismatchError(f"cannot compose a map into C^{first.n} with a map from C^{second.m}")
            if isinstance(first, ConvexProduct):
                raise ValueError("a convex product leaves the polydisc and can only come last")
        object.__setattr__(self, "maps", maps)

    @property
    def m(self):
        return self.maps[0].m

    @property
    def n(self):
        return self.maps[-1].n

    def maps_into_polydisc(self):
        return all(f.maps_into_polydisc() for f in self.maps)

    def apply_array(self, z):
        for f in self.maps:
            z = f.apply_array(z)
        return z

    def jacobian_array(self, z):
        J = np.eye(self.m, dtype=np.complex128)
        for f in self.maps:
            J = f.jacobian_array(z) @ J
            z = f.apply_array(z)
        return J

    def to_dict(self):
        return {"type": self.kind, "maps": [f.to_dict() for f in self.maps]}


def _inadmissible_parts(f: HolomorphicMap):
    if isinstance(f, Linear):
        return [] if row_sum_admissible(f.matrix) else [f]
    if isinstance(f, HomogeneousPower):
        return _inadmissible_parts(f.inner)
    if isinstance(f, Composed):
        return [g for part in f.maps for g in _inadmissible_parts(part)]
    return []


def evaluate(f: HolomorphicMap, z) -> np.ndarray:
    """``f(z)`` for an interior ``z``; polydisc-valued results are checked interior."""
    zc = point_coords(z, f.m)
    if _inadmissible_parts(f):
        raise InadmissibleMapError("linear map violates the row-sum condition and leaves the target polydisc")
    w = f.apply_array(zc)
    if f.maps_into_polydisc() and np.any(np.abs(w) >= 1.0):
        raise DomainError(f"image {w} left the target polydisc")
    return w


def jacobian(f: HolomorphicMap, z) -> np.ndarray:
    return f.jacobian_array(point_coords(z, f.m))


def pushforward(f: HolomorphicMap, z, v) -> np.ndarray:
    zc = point_coords(z, f.m)
    vc = vector_coords(v, f.m)
    return f.jacobian_array(zc) @ vc


def pullback_F2(p_target: MetricParams, f: HolomorphicMap, z, v) -> float:
    """``F~^2(f(z); f_*(v))`` for the target metric."""
    w = evaluate(f, z)
    fv = pushforward(f, z, v)
    return float(_kernels.f2(w, fv, p_target.t, p_target.k)[0])


def linear_part(f: HolomorphicMap, atol: float = 1e-12) -> Linear:
    origin = np.zeros(f.m, dtype=np.complex128)
    f0 = f.apply_array(origin)
    if np.max(np.abs(f0)) > atol:
        raise ValueError(f"map does not fix the origin: f(0) = {f0}")
    return Linear(f.jacobian_array(origin))


# serialization ---------------------------------------------------------------

def map_from_dict(data: dict) -> HolomorphicMap:
    kind = data.get("type")
    if kind == "linear":
        return Linear(np.array([decode_complex(row) for row in data["matrix"]]))
    if kind == "coord_moebius":
        n = len(data["sources"])
        return CoordMoebius(
            m=int(data["m"]),
            sources=data["sources"],
            params=decode_complex(data.get("params", [[0.0, 0.0]] * n)),
            phases=data.get("phases", [0.0] * n),
        )
    if kind == "extremal":
        return Extremal(m=int(data["m"]), n=int(data["n"]))
    if kind == "homogeneous":
        return HomogeneousPower(map_from_dict(data["inner"]), int(data["degree"]), data.get("phases"))
    if kind == "convex_product":
        from .distortion import ConvexMapping

        return ConvexProduct(ConvexMapping.from_dict(data))
    if kind == "composed":
        return Composed(tuple(map_from_dict(d) for d in data["maps"]))
    raise ValueError(f"unknown map type {kind!r}")


def map_from_json(text: str) -> HolomorphicMap:
    return map_from_dict(json.loads(text))


# sampling --------------------------------------------------------------------

MAP_FAMILIES = ("linear", "coord_moebius", "extremal", "homogeneous", "composed")


def sample_linear_matrices(gen: np.random.Generator, size: int, m: int, n: int) -> np.ndarray:
    """``(size, n, m)`` admissible matrices.

    Each row gets Dirichlet weights times a scale in (0, 1] (exactly 1 for a
    quarter of the rows, so the boundary of the admissible set is exercised)
    and independent random phases.
    """
    weights = gen.dirichlet(np.ones(m), size=(size, n))
    scale = np.where(gen.random((size, n)) < 0.25, 1.0, gen.random((size, n)))
    phases = gen.uniform(-np.pi, np.pi, (size, n, m))
    return (weights * scale[..., None]) * np.exp(1j * phases)


def sample_moebius_params(gen: np.random.Generator, size: int, m: int, n: int, radius_cap: float):
    sources = gen.integers(0, m, (size, n))
    params = uniform_disc(gen, (size, n), radius_cap)
    phases = gen.uniform(-np.pi, np.pi, (size, n))
    return sources, params, phases


def sample_map(rng: Rng, family: str, m: int, n: int, radius_cap: float = DEFAULT_RADIUS_CAP) -> HolomorphicMap:
    radius_cap = check_radius_cap(radius_cap)
    gen = rng.generator()
    if family == "linear":
        return Linear(sample_linear_matrices(gen, 1, m, n)[0])
    if family == "coord_moebius":
        s, a, th = sample_moebius_params(gen, 1, m, n, radius_cap)
        return CoordMoebius(m=m, sources=s[0], params=a[0], phases=th[0])
    if family == "extremal":
        return Extremal(m=m, n=n)
    if family == "homogeneous":
        degree = int(gen.integers(1, 5))
        return HomogeneousPower(Linear(sample_linear_matrices(gen, 1, m, n)[0]), degree, gen.uniform(-np.pi, np.pi, n))
    if family == "composed":
        mid = int(gen.integers(1, 4))
        s, a, th = sample_moebius_params(gen, 1, mid, n, radius_cap)
        return Composed((Linear(sample_linear_matrices(gen, 1, m, mid)[0]), CoordMoebius(mid, s[0], a[0], th[0])))
    raise ValueError(f"unsupported map family {family!r}; expected one of {MAP_FAMILIES}")


# batched evaluation used by the campaigns ------------------------------------

def linear_batch(A: np.ndarray, z: np.ndarray, v: np.ndarray):
    return np.einsum("bnm,bm->bn", A, z), np.einsum("bnm,bm->bn", A, v)


def moebius_batch(sources, params, phases, z, v):
    rows = np.arange(z.shape[0])[:, None]
    zs = z[rows, sources]
    return disc_moebius(zs, params, phases), disc_moebius_deriv(zs, params, phases) * v[rows, sources]


def extremal_batch(n: int, z: np.ndarray, v: np.ndarray):
    return np.repeat(z[:, :1], n, axis=1), np.repeat(v[:, :1], n, axis=1)


def orthant_witness(A, row: int) -> np.ndarray:
    """The torus point ``z^i = e^{-i arg a_{row,i}}`` where ``|(A z)_row| = sum_i |a_{row,i}|``."""
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    return np.exp(-1j * np.angle(A[row]))


__all__ = [
    "ADMISSIBLE_SLACK",
    "Composed",
    "ConvexProduct",
    "CoordMoebius",
    "Extremal",
    "HolomorphicMap",
    "HomogeneousPower",
    "InadmissibleMapError",
    "Linear",
    "MAP_FAMILIES",
    "evaluate",
    "extremal_batch",
    "jacobian",
    "linear_batch",
    "linear_part",
    "map_from_dict",
    "map_from_json",
    "moebius_batch",
    "orthant_witness",
    "pullback_F2",
    "pushforward",
    "row_sum_admissible",
    "sample_linear_matrices",
    "sample_map",
    "sample_moebius_params",
]
