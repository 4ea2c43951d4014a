"""Hamilton quaternions with the three involutions used for Vahlen-type matrices.

Complex numbers are plain Python ``complex``; they embed as ``w + x i``.
"""

from dataclasses import dataclass
import math

from ._config import get_tol
from .exceptions import ZeroQuaternion

INVOLUTIONS = ("conj", "prime", "star")


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_complex(cls, u, v=0j):
        """Build ``u + v j`` from two complex numbers (note ``(p + q i) j = p j + q k``)."""
        u = complex(u)
        v = complex(v)
        return cls(u.real, u.imag, v.real, v.imag)

    @classmethod
    def from_half_space(cls, z, r):
        return cls(z.real, z.imag, float(r), 0.0)

    @property
    def complex_part(self):
        return complex(self.w, self.x)

    @property
    def j_part(self):
        """The complex ``v`` with ``self = u + v j``."""
        return complex(self.y, self.z)

    def coeffs(self):
        return (self.w, self.x, self.y, self.z)

    def __iter__(self):
        return iter(self.coeffs())

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        other = _coerce(other)
        a1, b1, c1, d1 = self.coeffs()
        a2, b2, c2, d2 = other.coeffs()
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return _coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return self * _coerce(other).inv()

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self):
        return math.sqrt(self.norm2())

    def __abs__(self):
        return self.norm()

    def conj(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def prime(self):
        return Quaternion(self.w, -self.x, -self.y, self.z)

    def star(self):
        return Quaternion(self.w, self.x, self.y, -self.z)

    def inv(self, tol=None):
        n2 = self.norm2()
        if n2 <= get_tol(tol) ** 2:
            raise ZeroQuaternion(f"cannot invert {self!r}")
        return self.conj() / n2

    def dot(self, other):
        """Euclidean inner product of the coefficient vectors in R^4."""
        return self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z

    def isclose(self, other, tol=None):
        other = _coerce(other)
        return (self - other).norm() <= get_tol(tol)


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float, complex)):
        value = complex(value)
        return Quaternion(value.real, value.imag, 0.0, 0.0)
    raise TypeError(f"cannot interpret {type(value).__name__} as a quaternion")


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p, q):
    return _coerce(p) * _coerce(q)


def quat_inv(q, tol=None):
    return _coerce(q).inv(tol)


def apply_involution(q, kind):
    """Apply one of ``conj`` (negate i, j, k), ``prime`` (negate i, j) or ``star`` (negate k)."""
    q = _coerce(q)
    if kind == "conj":
        return q.conj()
    if kind == "prime":
        return q.prime()
    if kind == "star":
        return q.star()
    raise ValueError(f"unknown involution {kind!r}; expected one of {INVOLUTIONS}")


def inner(a, c):
    return _coerce(a).dot(_coerce(c))
