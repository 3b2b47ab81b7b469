"""The two commutative spaces: Euclidean R^d (d <= 4) and the Poincare disk.

The disk carries the invariant measure with density 1/(pi (1-|z|^2)^2)
against planar Lebesgue measure, so a centered geodesic ball of radius R
has mass sinh(R/2)^2.  All radial machinery downstream (transforms,
samplers, Plancherel identities) is tied to this normalization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "Space",
    "Window",
    "euclidean",
    "hyperbolic_disk",
    "distance",
    "ball_volume",
    "radial_volume_density",
    "mobius_apply",
    "su11_boost",
    "su11_rotation",
]

EUCLIDEAN = "euclidean"
HYPERBOLIC_DISK = "hyperbolic_disk"


@dataclass(frozen=True)
class Space:
    """Descriptor of a commutative space.

    kind is "euclidean" (dim in 1..4) or "hyperbolic_disk" (dim fixed at 2,
    Poincare disk model of the hyperbolic plane).
    """

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind == EUCLIDEAN:
            if self.dim not in (1, 2, 3, 4):
                raise ValidationError("euclidean dimension must be 1..4")
        elif self.kind == HYPERBOLIC_DISK:
            if self.dim != 2:
                raise ValidationError("hyperbolic disk is 2-dimensional")
        else:
            raise ValidationError(f"unknown space kind {self.kind!r}")

    @property
    def is_euclidean(self) -> bool:
        return self.kind == EUCLIDEAN

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind == HYPERBOLIC_DISK

    def __repr__(self):
        if self.is_euclidean:
            return f"Euclidean({self.dim})"
        return "HyperbolicDisk"


def euclidean(d: int) -> Space:
    return Space(EUCLIDEAN, int(d))


def hyperbolic_disk() -> Space:
    return Space(HYPERBOLIC_DISK, 2)


@dataclass(frozen=True)
class Window:
    """Centered geodesic observation ball."""

    space: Space
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValidationError("window radius must be positive and finite")

    @property
    def euclidean_radius(self) -> float:
        """Euclidean radius tanh(R/2) of the window when on the disk."""
        if not self.space.is_hyperbolic:
            return self.radius
        return math.tanh(0.5 * self.radius)

    @property
    def volume(self) -> float:
        return ball_volume(self.space, self.radius)


def _check_disk_point(z: complex) -> complex:
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"disk point must satisfy |z| < 1, got |z| = {abs(z)}")
    return z


def distance(space: Space, p, q) -> float:
    """Geodesic distance between two points of the space."""
    if space.is_euclidean:
        pv = np.asarray(p, dtype=float).reshape(-1)
        qv = np.asarray(q, dtype=float).reshape(-1)
        if pv.size != space.dim or qv.size != space.dim:
            raise ValidationError("point dimension does not match the space")
        return float(np.linalg.norm(pv - qv))
    z1 = _check_disk_point(p)
    z2 = _check_disk_point(q)
    num = 2.0 * abs(z1 - z2) ** 2
    den = (1.0 - abs(z1) ** 2) * (1.0 - abs(z2) ** 2)
    return math.acosh(1.0 + num / den)


def ball_volume(space: Space, r: float) -> float:
    """Invariant mass of a centered ball of geodesic radius r."""
    if r < 0:
        raise DomainError("radius must be nonnegative")
    if r == 0:
        return 0.0
    if space.is_euclidean:
        d = space.dim
        return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * r**d
    return math.sinh(0.5 * r) ** 2


def radial_volume_density(space: Space, s):
    """Radial density vol'(s) of the invariant measure:
    Vol(S^{d-1}) s^{d-1} on R^d, sinh(s)/2 on the disk."""
    s = np.asarray(s, dtype=float)
    if space.is_euclidean:
        d = space.dim
        surf = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
        return surf * s ** (d - 1)
    return 0.5 * np.sinh(s)


def _su11_parts(g) -> tuple[complex, complex]:
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise ValidationError("SU(1,1) element must be a 2x2 complex matrix")
    u, v = complex(g[0, 0]), complex(g[0, 1])
    if abs(g[1, 0] - v.conjugate()) > 1e-10 or abs(g[1, 1] - u.conjugate()) > 1e-10:
        raise ValidationError("matrix is not of the SU(1,1) form [[u, v], [conj v, conj u]]")
    if abs(abs(u) ** 2 - abs(v) ** 2 - 1.0) > 1e-10:
        raise ValidationError("SU(1,1) constraint |u|^2 - |v|^2 = 1 violated")
    return u, v


def mobius_apply(g, z: complex) -> complex:
    """Mobius action (u z + v) / (conj(v) z + conj(u)) of SU(1,1) on the disk."""
    u, v = _su11_parts(g)
    z = _check_disk_point(z)
    w = (u * z + v) / (v.conjugate() * z + u.conjugate())
    if abs(w) >= 1.0:
        # can only happen through rounding at the very boundary
        w = w / abs(w) * (1.0 - 1e-15)
    return w


def su11_boost(t: float) -> np.ndarray:
    """Boost moving the origin to tanh(t/2) along the real axis."""
    c, s = math.cosh(0.5 * t), math.sinh(0.5 * t)
    return np.array([[c, s], [s, c]], dtype=complex)


def su11_rotation(theta: float) -> np.ndarray:
    """Rotation of the disk by angle theta around the origin."""
    e = cmath.exp(0.5j * theta)
    return np.array([[e, 0.0], [0.0, e.conjugate()]], dtype=complex)
