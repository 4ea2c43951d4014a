"""Group elements and their actions on the upper half-space and the ball.

The half-space is ``{z + r j : r > 0}`` and the ball is the open unit ball in
``C + R j``, both inside the quaternions.  ``psi`` carries an SL(2, C) matrix
to the Vahlen-type matrix ``[[A, C'], [C, A']]`` that acts on the ball, and
``eta0`` is the Cayley-type isometry between the two models.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from ._config import get_tol
from .exceptions import DeterminantError, DomainError
from .quat import Quaternion, J, ONE

__all__ = [
    "MoebiusMatrix",
    "SBMatrix",
    "HalfSpacePoint",
    "BoundaryPoint",
    "INFINITY",
    "BallPoint",
    "SpherePoint",
    "act_half_space",
    "act_boundary",
    "psi",
    "act_ball",
    "eta0",
    "eta0_inv",
    "is_su2",
    "hyperbolic_distance",
    "ball_distance",
    "ball_distance_from_origin",
]


def _det_tol(entries, tol):
    # det of a product loses digits in proportion to the entry size
    scale = max(1.0, sum(abs(e) ** 2 for e in entries))
    return tol * scale


@dataclass(frozen=True)
class MoebiusMatrix:
    """A 2x2 complex matrix of determinant one.

    The constructor rejects matrices whose determinant is off by more than the
    tolerance.  Signs are kept as given so that ``psi`` stays a homomorphism of
    SL(2, C); use :meth:`canonical` for the projective representative.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1) > _det_tol(self.entries(), get_tol()):
            raise DeterminantError(f"determinant {det:.12g} is not 1")

    @classmethod
    def normalized(cls, a, b, c, d):
        """Scale an invertible matrix by ``1/sqrt(det)`` so that it lands in SL(2, C)."""
        det = complex(a) * complex(d) - complex(b) * complex(c)
        if det == 0:
            raise DeterminantError("singular matrix")
        s = cmath.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=complex)
        if arr.shape != (2, 2):
            raise ValueError(f"expected a 2x2 array, got shape {arr.shape}")
        return cls(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1])

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def norm2(self):
        return abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2 + abs(self.d) ** 2

    def __matmul__(self, other):
        return MoebiusMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return MoebiusMatrix(self.d, -self.b, -self.c, self.a)

    def __neg__(self):
        return MoebiusMatrix(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n):
        n = int(n)
        base = self if n >= 0 else self.inverse()
        result = MoebiusMatrix.identity()
        for _ in range(abs(n)):
            result = result @ base
        return result

    def conj_entries(self):
        return MoebiusMatrix(self.a.conjugate(), self.b.conjugate(), self.c.conjugate(), self.d.conjugate())

    def canonical(self, tol=None):
        """Projective representative: first entry of non-negligible size has positive sign."""
        tol = get_tol(tol)
        for e in self.entries():
            if abs(e) > tol:
                if e.real > tol or (abs(e.real) <= tol and e.imag > 0):
                    return self
                return -self
        return self

    def isclose(self, other, tol=None, projective=False):
        tol = get_tol(tol)
        diff = max(abs(x - y) for x, y in zip(self.entries(), other.entries()))
        if diff <= tol:
            return True
        if projective:
            return max(abs(x + y) for x, y in zip(self.entries(), other.entries())) <= tol
        return False

    def is_identity(self, tol=None):
        return self.isclose(MoebiusMatrix.identity(), tol, projective=True)

    def __repr__(self):
        return f"MoebiusMatrix([[{self.a:.6g}, {self.b:.6g}], [{self.c:.6g}, {self.d:.6g}]])"


@dataclass(frozen=True)
class SBMatrix:
    """Vahlen-type matrix ``[[A, C'], [C, A']]``; only ``A`` and ``C`` are stored."""

    A: Quaternion
    C: Quaternion

    def matrix(self):
        return ((self.A, self.C.prime()), (self.C, self.A.prime()))

    def __matmul__(self, other):
        A = self.A * other.A + self.C.prime() * other.C
        C = self.C * other.A + self.A.prime() * other.C
        return SBMatrix(A, C)

    def inverse(self):
        return SBMatrix(self.A.conj(), -self.C.star())

    def norm2(self):
        return 2 * (self.A.norm2() + self.C.norm2())

    def isclose(self, other, tol=None):
        return self.A.isclose(other.A, tol) and self.C.isclose(other.C, tol)


@dataclass(frozen=True)
class HalfSpacePoint:
    z: complex
    r: float

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "r", float(self.r))
        if not self.r > 0:
            raise DomainError("interior half-space points need r > 0; use BoundaryPoint")

    def to_quaternion(self):
        return Quaternion.from_half_space(self.z, self.r)

    @classmethod
    def from_quaternion(cls, q):
        return cls(complex(q.w, q.x), q.y)

    def as_tuple(self):
        return (self.z.real, self.z.imag, self.r)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of ``C`` or infinity (``z is None``)."""

    z: complex = None

    def __post_init__(self):
        if self.z is not None:
            object.__setattr__(self, "z", complex(self.z))

    @property
    def is_infinity(self):
        return self.z is None

    def isclose(self, other, tol=None):
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return abs(self.z - other.z) <= get_tol(tol)

    def __repr__(self):
        return "BoundaryPoint(inf)" if self.is_infinity else f"BoundaryPoint({self.z:.12g})"


INFINITY = BoundaryPoint(None)


@dataclass(frozen=True)
class BallPoint:
    p: Quaternion

    def __post_init__(self):
        if abs(self.p.z) > 1e-12:
            raise DomainError("ball points live in C + R j (zero k part)")
        if not self.p.norm2() < 1:
            raise DomainError("ball points need norm < 1; use SpherePoint")


@dataclass(frozen=True)
class SpherePoint:
    """A point of the unit sphere bounding the ball."""

    p: Quaternion


def act_half_space(gamma, P):
    """Image of an interior point under the Moebius action."""
    a, b, c, d = gamma.entries()
    z, r = P.z, P.r
    denom = abs(c * z + d) ** 2 + abs(c) ** 2 * r * r
    num = (a * z + b) * (c * z + d).conjugate() + a * c.conjugate() * r * r
    return HalfSpacePoint(num / denom, r / denom)


def act_boundary(gamma, w):
    """Moebius action on the Riemann sphere ``C`` with an infinity variant."""
    a, b, c, d = gamma.entries()
    tol = get_tol()
    if w.is_infinity:
        if abs(c) <= tol:
            return INFINITY
        return BoundaryPoint(a / c)
    den = c * w.z + d
    if abs(den) <= tol * max(1.0, abs(c * w.z)):
        return INFINITY
    return BoundaryPoint((a * w.z + b) / den)


def psi(gamma):
    """The isomorphism onto Vahlen-type matrices, by its entrywise formula."""
    a, b, c, d = gamma.entries()
    A = Quaternion.from_complex((a + d.conjugate()) / 2, (b - c.conjugate()) / 2)
    C = Quaternion.from_complex((c + b.conjugate()) / 2, (d - a.conjugate()) / 2)
    return SBMatrix(A, C)


def act_ball(m, Q):
    """``(A Q + C')(C Q + A')^{-1}`` for an interior ball point."""
    q = Q.p if isinstance(Q, (BallPoint, SpherePoint)) else Q
    num = m.A * q + m.C.prime()
    den = m.C * q + m.A.prime()
    image = num * den.inv()
    # the k component vanishes identically; drop rounding noise
    image = Quaternion(image.w, image.x, image.y, 0.0)
    if isinstance(Q, SpherePoint):
        return SpherePoint(image)
    return BallPoint(image)


def eta0(P):
    """Half-space to ball: ``P -> (P - j)(-j P + 1)^{-1}``; infinity goes to ``j``."""
    if isinstance(P, BoundaryPoint):
        if P.is_infinity:
            return SpherePoint(J)
        q = Quaternion.from_complex(P.z)
        image = (q - J) * (ONE - J * q).inv()
        return SpherePoint(Quaternion(image.w, image.x, image.y, 0.0))
    q = P.to_quaternion() if isinstance(P, HalfSpacePoint) else P
    image = (q - J) * (ONE - J * q).inv()
    return BallPoint(Quaternion(image.w, image.x, image.y, 0.0))


def eta0_inv(Q):
    """Ball to half-space: ``Q -> (Q + j)(j Q + 1)^{-1}``; ``j`` goes to infinity."""
    q = Q.p if isinstance(Q, (BallPoint, SpherePoint)) else Q
    den = J * q + ONE
    if isinstance(Q, SpherePoint):
        if den.norm2() <= get_tol() ** 2:
            return INFINITY
        image = (q + J) * den.inv()
        return BoundaryPoint(complex(image.w, image.x))
    image = (q + J) * den.inv()
    return HalfSpacePoint(complex(image.w, image.x), image.y)


def is_su2(gamma, tol=None):
    """True when the element fixes ``j``, i.e. its norm squared is 2."""
    return gamma.norm2() - 2 < get_tol(tol)


def _acosh1p(x):
    # acosh(1 + x) without cancellation for small x
    return math.log1p(x + math.sqrt(x * (x + 2)))


def hyperbolic_distance(P, Q):
    dz = P.z - Q.z
    dist2 = abs(dz) ** 2 + (P.r - Q.r) ** 2
    return _acosh1p(dist2 / (2 * P.r * Q.r))


def ball_distance_from_origin(u):
    q = u.p if isinstance(u, BallPoint) else u
    n = q.norm()
    return math.log((1 + n) / (1 - n))


def ball_distance(u, v):
    p = u.p if isinstance(u, BallPoint) else u
    q = v.p if isinstance(v, BallPoint) else v
    dist2 = (p - q).norm2()
    return _acosh1p(2 * dist2 / ((1 - p.norm2()) * (1 - q.norm2())))
