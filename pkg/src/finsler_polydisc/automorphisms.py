"""The automorphism group of the polydisc.

Every element acts as ``w^l = e^{i theta_l} (z^{s(l)} - c^l) / (1 - conj(c^l) z^{s(l)})``
for a center ``c`` in P_m, phases ``theta`` and a permutation ``s``
(0-based).  Composition and inversion are kept in this normal form: the
one-variable factors are disc automorphisms, which form a group with
closed-form parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_RADIUS_CAP,
    DimensionMismatchError,
    PolydiscPoint,
    Rng,
    check_radius_cap,
    decode_complex,
    encode_complex,
    point_coords,
    uniform_disc,
    vector_coords,
)


# one-variable disc automorphisms  zeta -> e^{i theta} (zeta - a) / (1 - conj(a) zeta)

def disc_moebius(zeta, a, theta):
    return np.exp(1j * theta) * (zeta - a) / (1.0 - np.conj(a) * zeta)


def disc_moebius_deriv(zeta, a, theta):
    return np.exp(1j * theta) * (1.0 - np.abs(a) ** 2) / (1.0 - np.conj(a) * zeta) ** 2


def disc_moebius_inverse(a, theta):
    """Parameters of the inverse automorphism."""
    return -np.exp(1j * theta) * a, -theta


def disc_moebius_compose(a1, theta1, a2, theta2):
    """Parameters of ``phi1 o phi2``.

    The zero of the composite is ``b = phi2^{-1}(a1)`` and its derivative at
    ``b`` equals ``e^{i alpha} / (1 - |b|^2)``.
    """
    ia2, itheta2 = disc_moebius_inverse(a2, theta2)
    b = disc_moebius(a1, ia2, itheta2)
    d = disc_moebius_deriv(a1, a1, theta1) * disc_moebius_deriv(b, a2, theta2)
    return b, np.angle(d * (1.0 - np.abs(b) ** 2))


def _check_perm(perm, m):
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (m,) or not np.array_equal(np.sort(perm), np.arange(m)):
        raise ValueError(f"perm must be a permutation of 0..{m - 1}, got {perm.tolist()}")
    return perm


@dataclass(frozen=True, eq=False)
class AutElement:
    center: np.ndarray
    phases: np.ndarray
    perm: np.ndarray

    def __post_init__(self):
        center = point_coords(self.center)
        m = center.size
        phases = np.asarray(self.phases, dtype=np.float64).reshape(-1)
        if phases.size != m or not np.all(np.isfinite(phases)):
            raise ValueError("phases must be m finite reals")
        perm = _check_perm(self.perm, m)
        for name, arr in (("center", center.copy()), ("phases", phases.copy()), ("perm", perm.copy())):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.center.size

    @classmethod
    def identity(cls, m: int) -> "AutElement":
        return cls(np.zeros(m, dtype=np.complex128), np.zeros(m), np.arange(m))

    def fixes_origin(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.center) <= atol))

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        """Unvalidated action on an ``(..., m)`` array."""
        return disc_moebius(z[..., self.perm], self.center, self.phases)

    def derivative_array(self, z: np.ndarray) -> np.ndarray:
        """Diagonal factors ``phi_l'(z^{s(l)})``; the pushforward is ``d * v[..., perm]``."""
        return disc_moebius_deriv(z[..., self.perm], self.center, self.phases)

    def jacobian(self, z) -> np.ndarray:
        """``J[l, j] = dw^l / dz^j``."""
        zc = point_coords(z, self.dim)
        J = np.zeros((self.dim, self.dim), dtype=np.complex128)
        J[np.arange(self.dim), self.perm] = self.derivative_array(zc)
        return J

    def to_dict(self) -> dict:
        return {
            "center": encode_complex(self.center),
            "phases": [float(x) for x in self.phases],
            "perm": [int(i) for i in self.perm],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AutElement":
        center = decode_complex(data["center"])
        m = center.size
        return cls(center, data.get("phases", [0.0] * m), data.get("perm", list(range(m))))

    def as_map(self):
        from .maps import CoordMoebius

        return CoordMoebius(m=self.dim, sources=self.perm, params=self.center, phases=self.phases)

    def __eq__(self, other):
        return (
            isinstance(other, AutElement)
            and np.array_equal(self.center, other.center)
            and np.array_equal(self.phases, other.phases)
            and np.array_equal(self.perm, other.perm)
        )

    __hash__ = None


def _same_dim(g: AutElement, dim: int):
    if g.dim != dim:
        raise DimensionMismatchError(f"automorphism of P_{g.dim} applied in dimension {dim}")


def apply(g: AutElement, z) -> PolydiscPoint:
    zc = point_coords(z)
    _same_dim(g, zc.size)
    return PolydiscPoint(g.apply_array(zc))


def differential(g: AutElement, z, v) -> np.ndarray:
    """Exact pushforward ``g_*(v)`` at ``z``, a vector at ``g(z)``."""
    zc = point_coords(z)
    vc = vector_coords(v)
    _same_dim(g, zc.size)
    _same_dim(g, vc.size)
    return g.derivative_array(zc) * vc[g.perm]


def compose(g: AutElement, h: AutElement) -> AutElement:
    """``g o h`` (apply ``h`` first)."""
    _same_dim(g, h.dim)
    hc = h.center[g.perm]
    ht = h.phases[g.perm]
    center, phases = disc_moebius_compose(g.center, g.phases, hc, ht)
    return AutElement(center, phases, h.perm[g.perm])


def invert(g: AutElement) -> AutElement:
    inv_perm = np.argsort(g.perm)
    center, phases = disc_moebius_inverse(g.center[inv_perm], g.phases[inv_perm])
    return AutElement(center, phases, inv_perm)


def moebius_transport(z0) -> AutElement:
    """``h_{z0}``: the coordinatewise Moebius map sending ``z0`` to the origin."""
    c = point_coords(z0)
    return AutElement(c, np.zeros(c.size), np.arange(c.size))


def sample_isotropy(rng: Rng, m: int) -> AutElement:
    """Random element fixing the origin: phases times a coordinate permutation."""
    if m < 1:
        raise ValueError("m must be >= 1")
    gen = rng.generator()
    phases = gen.uniform(-np.pi, np.pi, m)
    return AutElement(np.zeros(m, dtype=np.complex128), phases, gen.permutation(m))


def sample_automorphism(rng: Rng, m: int, radius_cap: float = DEFAULT_RADIUS_CAP) -> AutElement:
    radius_cap = check_radius_cap(radius_cap)
    gen = rng.generator()
    center = uniform_disc(gen, m, radius_cap)
    phases = gen.uniform(-np.pi, np.pi, m)
    return AutElement(center, phases, gen.permutation(m))


def transport_to(z0, w0) -> AutElement:
    """An automorphism sending ``z0`` to ``w0``: ``h_{w0}^{-1} o h_{z0}``."""
    return compose(invert(moebius_transport(w0)), moebius_transport(z0))


__all__ = [
    "AutElement",
    "apply",
    "compose",
    "differential",
    "disc_moebius",
    "disc_moebius_compose",
    "disc_moebius_deriv",
    "disc_moebius_inverse",
    "invert",
    "moebius_transport",
    "sample_automorphism",
    "sample_isotropy",
    "transport_to",
]
