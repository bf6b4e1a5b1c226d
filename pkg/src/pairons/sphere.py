"""Points on the Riemann sphere and the chordal metric.

The stereographic coordinate follows zeta = tan(theta/2) * exp(-i phi),
projecting from the south pole (theta = pi), which is represented by the
point at infinity.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpherePoint:
    """One point on the sphere: a finite complex coordinate or infinity."""

    zeta: complex | None  # None encodes the point at infinity

    @property
    def is_infinity(self) -> bool:
        return self.zeta is None

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(None)

    @classmethod
    def from_zeta(cls, zeta: complex) -> "SpherePoint":
        return cls(complex(zeta))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "SpherePoint":
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        if abs(theta - math.pi) < 1e-15:
            return cls.infinity()
        r = math.tan(theta / 2.0)
        return cls(r * cmath.exp(-1j * phi))

    def theta(self) -> float:
        if self.is_infinity:
            return math.pi
        return 2.0 * math.atan(abs(self.zeta))

    def phi(self) -> float:
        """Azimuth in [0, 2 pi); 0 by convention at the poles."""
        if self.is_infinity or self.zeta == 0:
            return 0.0
        return (-cmath.phase(self.zeta)) % TWO_PI

    def antipode_negation(self) -> "SpherePoint":
        """The image under zeta -> -zeta (NOT the antipodal map)."""
        if self.is_infinity:
            return self
        return SpherePoint(-self.zeta)


def chordal_distance(a: SpherePoint | complex | None,
                     b: SpherePoint | complex | None) -> float:
    """Distance between two sphere points through the embedding ball.

    d(z, w) = 2|z - w| / sqrt((1+|z|^2)(1+|w|^2)), with the usual limit
    d(z, inf) = 2 / sqrt(1+|z|^2).  Ranges over [0, 2].
    """
    za = a.zeta if isinstance(a, SpherePoint) else a
    zb = b.zeta if isinstance(b, SpherePoint) else b
    if za is None and zb is None:
        return 0.0
    if za is None:
        return 2.0 / math.hypot(1.0, abs(zb))
    if zb is None:
        return 2.0 / math.hypot(1.0, abs(za))
    za = complex(za)
    zb = complex(zb)
    num = 2.0 * abs(za - zb)
    den = math.sqrt((1.0 + abs(za) ** 2) * (1.0 + abs(zb) ** 2))
    return num / den
