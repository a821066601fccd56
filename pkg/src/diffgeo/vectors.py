"""3-vectors generic over the scalar kind (float, Jet1 or Jet2).

The same cross/dot/norm code therefore serves both plain evaluation and
jet differentiation; ``norm`` routes through the jet-aware ``sqrt``.
"""

import math

from . import jets

__all__ = ["Vec3"]


class Vec3:
    __slots__ = ("x", "y", "z")

    def __init__(self, x, y, z):
        self.x = x
        self.y = y
        self.z = z

    def __repr__(self):
        return f"Vec3({self.x!r}, {self.y!r}, {self.z!r})"

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __add__(self, other):
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, s):
        return Vec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return Vec3(self.x / s, self.y / s, self.z / s)

    def dot(self, other):
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other):
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm_sq(self):
        return self.dot(self)

    def norm(self):
        n2 = self.norm_sq()
        if isinstance(n2, float):
            return math.sqrt(n2)
        return jets.sqrt(n2)

    def normalized(self):
        return self / self.norm()

    def value(self):
        """Drop jets: the Vec3 of value coefficients."""
        return Vec3(_val(self.x), _val(self.y), _val(self.z))

    def derivative(self):
        """Componentwise Jet1.derivative (curve use only)."""
        return Vec3(self.x.derivative(), self.y.derivative(), self.z.derivative())

    def du(self):
        return Vec3(self.x.du(), self.y.du(), self.z.du())

    def dv(self):
        return Vec3(self.x.dv(), self.y.dv(), self.z.dv())


def _val(s):
    return s.value if hasattr(s, "value") else float(s)
