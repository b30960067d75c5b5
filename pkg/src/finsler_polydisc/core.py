"""Validated domain types, tolerance policy and seeded random streams."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_RADIUS_CAP = 0.95


class DomainError(ValueError):
    """A point is not strictly inside the unit polydisc."""


class DimensionMismatchError(ValueError):
    pass


class ZeroVectorError(ValueError):
    """Raised where a quantity is undefined on the zero section."""


def as_complex_vector(values, name="vector") -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence of complex numbers")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PolydiscPoint:
    """A point of the open unit polydisc P_m."""

    coords: np.ndarray

    def __post_init__(self):
        arr = as_complex_vector(self.coords, "point")
        if np.any(np.abs(arr) >= 1.0):
            raise DomainError(f"point {arr} is not in the open unit polydisc")
        object.__setattr__(self, "coords", _frozen(arr))

    @property
    def dim(self) -> int:
        return self.coords.size

    @classmethod
    def origin(cls, m: int) -> "PolydiscPoint":
        return cls(np.zeros(m, dtype=np.complex128))

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, PolydiscPoint) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A holomorphic tangent vector, optionally tied to a base point."""

    coords: np.ndarray
    base: PolydiscPoint | None = None

    def __post_init__(self):
        arr = as_complex_vector(self.coords, "tangent vector")
        if self.base is not None and self.base.dim != arr.size:
            raise DimensionMismatchError(
                f"vector of dimension {arr.size} at a base point of dimension {self.base.dim}"
            )
        object.__setattr__(self, "coords", _frozen(arr))

    @property
    def dim(self) -> int:
        return self.coords.size

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, TangentVector) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())


@dataclass(frozen=True)
class MetricParams:
    """Selects F_{t,k}: ``t >= 0`` real, ``k >= 2`` integer.  ``t = 0`` is Bergman."""

    t: float = 0.0
    k: int = 2

    def __post_init__(self):
        t = float(self.t)
        if not np.isfinite(t) or t < 0:
            raise ValueError(f"t must be a finite number >= 0, got {self.t!r}")
        if isinstance(self.k, bool) or int(self.k) != self.k or int(self.k) < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "k", int(self.k))


@dataclass(frozen=True)
class Tolerance:
    abs_eq: float = 1e-10
    rel_eq: float = 1e-9
    fd_rel: float = 1e-5
    psd_min_eig: float = 1e-12

    def __post_init__(self):
        for name in ("abs_eq", "rel_eq", "fd_rel", "psd_min_eig"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"tolerance {name} must be strictly positive, got {value!r}")


DEFAULT_TOL = Tolerance()


def approx_eq(a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``|a - b| <= abs_eq + rel_eq * max(|a|, |b|)``."""
    return abs(a - b) <= tol.abs_eq + tol.rel_eq * max(abs(a), abs(b))


@dataclass(frozen=True)
class Rng:
    """An immutable, splittable handle on a counter-based random stream.

    ``Rng(seed).split(i)`` names an independent child stream; the draws of
    a stream depend only on ``(seed, path)``, never on the order in which
    streams are consumed.  ``generator()`` always restarts the stream, so
    calling a sampler twice with the same handle repeats its draws.
    """

    seed: int
    path: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "path", tuple(int(i) for i in self.path))

    def split(self, *indices: int) -> "Rng":
        return Rng(self.seed, self.path + tuple(indices))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(seq))


def uniform_disc(gen: np.random.Generator, shape, radius: float) -> np.ndarray:
    """Area-uniform samples on the closed disc of the given radius."""
    r = radius * np.sqrt(gen.random(shape))
    return r * np.exp(2j * np.pi * gen.random(shape))


def complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    return gen.standard_normal(shape) + 1j * gen.standard_normal(shape)


def check_radius_cap(radius_cap: float) -> float:
    radius_cap = float(radius_cap)
    if not 0.0 < radius_cap < 1.0:
        raise ValueError(f"radius_cap must lie in (0, 1), got {radius_cap}")
    return radius_cap


def sample_polydisc_point(rng: Rng, m: int, radius_cap: float = DEFAULT_RADIUS_CAP) -> PolydiscPoint:
    """Draw a point whose coordinates are uniform on the disc of radius ``radius_cap``."""
    radius_cap = check_radius_cap(radius_cap)
    if m < 1:
        raise ValueError("dimension m must be >= 1")
    return PolydiscPoint(uniform_disc(rng.generator(), m, radius_cap))


def point_coords(z, dim: int | None = None) -> np.ndarray:
    """Validated interior coordinates from a PolydiscPoint or array-like."""
    arr = z.coords if isinstance(z, PolydiscPoint) else PolydiscPoint(z).coords
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"expected a point of dimension {dim}, got {arr.size}")
    return arr


def vector_coords(v, dim: int | None = None) -> np.ndarray:
    arr = v.coords if isinstance(v, TangentVector) else as_complex_vector(v)
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"expected a vector of dimension {dim}, got {arr.size}")
    return arr


def encode_complex(values) -> list:
    """``[[re, im], ...]`` as used by every JSON surface of the package."""
    return [[float(c.real), float(c.imag)] for c in np.asarray(values, dtype=np.complex128).ravel()]


def decode_complex(items) -> np.ndarray:
    out = []
    for item in items:
        if isinstance(item, (int, float)):
            out.append(complex(item))
        else:
            re, im = item
            out.append(complex(re, im))
    return np.asarray(out, dtype=np.complex128)
