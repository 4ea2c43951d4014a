"""Isometric spheres and Poincare bisectors in both models.

Half-space walls are hemispheres centred on ``C`` or vertical planes; ball
walls are spheres orthogonal to the unit sphere.  Every wall exposes a signed
Euclidean ``value`` (zero on the wall) so that domains can test sides in bulk.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.stats import qmc

from ._config import get_tol
from .exceptions import (
    BisectorIsPlane,
    DomainError,
    InSU2,
    NoIntersection,
    NoIsometricSphere,
)
from .models import (
    BallPoint,
    HalfSpacePoint,
    act_ball,
    eta0,
    is_su2,
    psi,
)
from .quat import Quaternion, J

__all__ = [
    "Sphere",
    "VerticalPlane",
    "BallSphere",
    "UnitSphere",
    "EquatorialPlane",
    "wall_from_json",
    "point_bisector",
    "isometric_sphere_half_space",
    "bisector_half_space",
    "bisector_ball",
    "inverse_origin_image",
    "WallGap",
    "wall_gap",
    "rho_gamma",
    "DihedralAngle",
    "dihedral_angle",
    "boundary_position",
    "walls_equal",
]


@dataclass(frozen=True)
class Sphere:
    """Hemisphere ``|z - center|^2 + r^2 = radius^2`` in the half-space."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise DomainError("sphere radius must be positive")

    kind = "sphere"

    def value(self, z, r):
        """Signed distance-like quantity, positive outside the sphere."""
        return np.hypot(np.abs(np.asarray(z) - self.center), np.asarray(r)) - self.radius

    def contains(self, P, tol=None):
        return abs(float(self.value(P.z, P.r))) <= get_tol(tol)

    def embed(self):
        """Euclidean description in R^3 as ``("sphere", center, radius)``."""
        return ("sphere", np.array([self.center.real, self.center.imag, 0.0]), self.radius)

    def to_json(self):
        return {"kind": "sphere", "center": [self.center.real, self.center.imag], "radius": self.radius}


@dataclass(frozen=True)
class VerticalPlane:
    """Vertical plane ``Re(conj(normal) z) + offset = 0`` with a unit normal."""

    normal: complex
    offset: float

    def __post_init__(self):
        n = complex(self.normal)
        size = abs(n)
        if size == 0:
            raise DomainError("plane normal must be nonzero")
        object.__setattr__(self, "normal", n / size)
        object.__setattr__(self, "offset", float(self.offset) / size)

    kind = "plane"

    def value(self, z, r=None):
        return np.real(np.conj(self.normal) * np.asarray(z)) + self.offset

    def contains(self, P, tol=None):
        return abs(float(self.value(P.z))) <= get_tol(tol)

    def embed(self):
        return ("plane", np.array([self.normal.real, self.normal.imag, 0.0]), self.offset)

    def to_json(self):
        return {"kind": "plane", "normal": [self.normal.real, self.normal.imag], "offset": self.offset}


@dataclass(frozen=True)
class BallSphere:
    """Sphere in ``C + R j`` orthogonal to the unit sphere."""

    center: Quaternion
    radius: float

    kind = "ball-sphere"

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("sphere radius must be positive")
        gap = abs(1 + self.radius ** 2 - self.center.norm2())
        if gap > 1e-7 * max(1.0, self.center.norm2()):
            raise DomainError("ball wall is not orthogonal to the unit sphere")

    def vector(self):
        return np.array([self.center.w, self.center.x, self.center.y])

    def value(self, q):
        """Positive outside.  ``q`` is a Quaternion, BallPoint or an (n, 3) array."""
        if isinstance(q, BallPoint):
            q = q.p
        if isinstance(q, Quaternion):
            return (q - self.center).norm() - self.radius
        q = np.asarray(q, dtype=float)
        return np.linalg.norm(q - self.vector(), axis=-1) - self.radius

    def contains(self, Q, tol=None):
        return abs(float(self.value(Q))) <= get_tol(tol)

    def embed(self):
        return ("sphere", self.vector(), self.radius)

    def to_json(self):
        return {"kind": "ball-sphere", "center": [self.center.w, self.center.x, self.center.y], "radius": self.radius}


@dataclass(frozen=True)
class UnitSphere:
    """The sphere at infinity of the ball model."""

    kind = "unit-sphere"

    def embed(self):
        return ("sphere", np.zeros(3), 1.0)

    def to_json(self):
        return {"kind": "unit-sphere"}


@dataclass(frozen=True)
class EquatorialPlane:
    """The plane ``C`` inside ``C + R j`` (the image of the unit hemisphere of the half-space)."""

    kind = "equatorial-plane"

    def embed(self):
        return ("plane", np.array([0.0, 0.0, 1.0]), 0.0)

    def to_json(self):
        return {"kind": "equatorial-plane"}


def wall_from_json(obj):
    kind = obj.get("kind")
    if kind == "sphere":
        return Sphere(complex(*obj["center"]), obj["radius"])
    if kind == "plane":
        return VerticalPlane(complex(*obj["normal"]), obj["offset"])
    if kind == "ball-sphere":
        x, y, z = obj["center"]
        return BallSphere(Quaternion(x, y, z, 0.0), obj["radius"])
    if kind == "unit-sphere":
        return UnitSphere()
    if kind == "equatorial-plane":
        return EquatorialPlane()
    raise ValueError(f"unknown wall kind {kind!r}")


def walls_equal(w1, w2, tol=None):
    tol = get_tol(tol)
    if type(w1) is not type(w2):
        return False
    if isinstance(w1, Sphere):
        return abs(w1.center - w2.center) <= tol and abs(w1.radius - w2.radius) <= tol
    if isinstance(w1, VerticalPlane):
        for sign in (1, -1):
            if abs(w1.normal - sign * w2.normal) <= tol and abs(w1.offset - sign * w2.offset) <= tol:
                return True
        return False
    if isinstance(w1, BallSphere):
        return (w1.center - w2.center).norm() <= tol and abs(w1.radius - w2.radius) <= tol
    return True


def point_bisector(P, Q, tol=None):
    """Hyperbolic perpendicular bisector of two half-space points.

    From ``r_Q |u - P|^2 = r_P |u - Q|^2``; the height-linear terms cancel,
    which is why the bisector is a hemisphere or a vertical plane.
    """
    tol = get_tol(tol)
    z1, r1, z2, r2 = P.z, P.r, Q.z, Q.r
    if abs(r2 - r1) <= tol * max(r1, r2):
        # Re(conj(w) (z1 - z2)) = (|z1|^2 - |z2|^2) / 2
        diff = z1 - z2
        if abs(diff) <= tol:
            raise DomainError("bisector of a point with itself is undefined")
        return VerticalPlane(diff, -(abs(z1) ** 2 - abs(z2) ** 2) / 2)
    center = (r2 * z1 - r1 * z2) / (r2 - r1)
    const = (r2 * abs(z1) ** 2 - r1 * abs(z2) ** 2 + r1 * r2 * (r1 - r2)) / (r2 - r1)
    return Sphere(center, math.sqrt(abs(center) ** 2 - const))


def isometric_sphere_half_space(gamma, tol=None):
    """The hemisphere ``|c z + d|^2 + |c|^2 r^2 = 1``."""
    if abs(gamma.c) <= get_tol(tol):
        raise NoIsometricSphere("element fixes infinity (c = 0)")
    return Sphere(-gamma.d / gamma.c, 1 / abs(gamma.c))


def _check_not_su2(gamma, tol):
    if is_su2(gamma, tol):
        raise InSU2("element fixes the base point; its bisector is undefined")


def bisector_half_space(gamma, tol=None):
    """Poincare bisector of ``j`` and ``gamma^{-1}(j)`` in the half-space."""
    tol = get_tol(tol)
    _check_not_su2(gamma, tol)
    a, b, c, d = gamma.entries()
    s = abs(a) ** 2 + abs(c) ** 2
    v = a.conjugate() * b + c.conjugate() * d
    if abs(s - 1) > tol:
        center = -v / (s - 1)
        return Sphere(center, math.sqrt((1 + abs(center) ** 2) / s))
    return VerticalPlane(v, abs(v) ** 2 / 2)


def _ball_numerator(gamma):
    a, b, c, d = gamma.entries()
    v = a.conjugate() * b + c.conjugate() * d
    h = abs(b) ** 2 + abs(d) ** 2 - abs(a) ** 2 - abs(c) ** 2
    return -2 * v, h


def bisector_ball(gamma, tol=None):
    """The isometric sphere of ``psi(gamma)``: bisector of 0 and ``psi(gamma^{-1})(0)``."""
    tol = get_tol(tol)
    _check_not_su2(gamma, tol)
    n2 = gamma.norm2()
    u, h = _ball_numerator(gamma)
    center = Quaternion.from_complex(u / (n2 - 2), h / (n2 - 2))
    return BallSphere(center, 2 / math.sqrt(n2 - 2))


def inverse_origin_image(gamma):
    """Closed form of ``psi(gamma^{-1})(0)``, the inverse point of the ball wall centre."""
    n2 = gamma.norm2()
    u, h = _ball_numerator(gamma)
    return Quaternion.from_complex(u / (n2 + 2), h / (n2 + 2))


@dataclass(frozen=True)
class WallGap:
    distance: float
    equal: bool


def wall_gap(gamma, tol=None):
    """Distance between the centres of the isometric sphere and the bisector.

    Raises :class:`NoIsometricSphere` for ``c = 0`` and
    :class:`BisectorIsPlane` when ``|a|^2 + |c|^2 = 1``.
    """
    tol = get_tol(tol)
    _check_not_su2(gamma, tol)
    a, b, c, d = gamma.entries()
    if abs(c) <= tol:
        raise NoIsometricSphere("c = 0: no isometric sphere to compare")
    s = abs(a) ** 2 + abs(c) ** 2
    if abs(s - 1) <= tol:
        raise BisectorIsPlane("|a|^2 + |c|^2 = 1: the bisector is a vertical plane")
    distance = abs(d - a.conjugate()) / (abs(c) * abs(s - 1))
    return WallGap(distance, abs(d - a.conjugate()) <= tol)


def rho_gamma(normsq):
    """Euclidean gap between the ball wall and the unit sphere, along the ray through its centre."""
    if not normsq > 2:
        raise DomainError("rho_gamma needs norm^2 > 2")
    return 1 - math.sqrt((normsq + 2) / (normsq - 2)) + 2 / math.sqrt(normsq - 2)


def boundary_position(gamma, point, tol=None):
    """Where ``0``, ``j`` or ``-j`` of the ball sits relative to the ball wall of ``gamma``.

    Returns ``"on"``, ``"interior"`` or ``"exterior"``.  ``point`` is one of
    ``"0"``, ``"j"``, ``"-j"`` or a Quaternion.
    """
    tol = get_tol(tol)
    wall = bisector_ball(gamma, tol)
    named = {"0": Quaternion(), "j": J, "-j": -J}
    q = named[point] if isinstance(point, str) else point
    val = (q - wall.center).norm2() - wall.radius ** 2
    if abs(val) <= tol * max(1.0, wall.radius ** 2):
        return "on"
    return "interior" if val < 0 else "exterior"


@dataclass(frozen=True)
class DihedralAngle:
    cos_oracle: float
    cos_printed: float = None
    cos_standard: float = None
    point: tuple = None


def _intersection_point(e1, e2, tol):
    k1, c1, p1 = e1
    k2, c2, p2 = e2
    if k1 == "plane" and k2 == "sphere":
        return _intersection_point(e2, e1, tol)
    if k1 == "sphere" and k2 == "sphere":
        axis = c2 - c1
        dist = np.linalg.norm(axis)
        if dist <= tol:
            raise NoIntersection("concentric spheres")
        if dist > p1 + p2 + tol or dist < abs(p1 - p2) - tol:
            raise NoIntersection("spheres do not meet")
        u = axis / dist
        t = (dist ** 2 + p1 ** 2 - p2 ** 2) / (2 * dist)
        h = math.sqrt(max(p1 ** 2 - t ** 2, 0.0))
        return c1 + t * u + h * _orthogonal(u)
    if k1 == "sphere" and k2 == "plane":
        n, off = c2, p2
        signed = float(np.dot(n, c1)) + off
        if abs(signed) > p1 + tol:
            raise NoIntersection("plane misses sphere")
        foot = c1 - signed * n
        h = math.sqrt(max(p1 ** 2 - signed ** 2, 0.0))
        return foot + h * _orthogonal(n)
    n1, n2 = c1, c2
    line = np.cross(n1, n2)
    if np.linalg.norm(line) <= tol:
        raise NoIntersection("parallel planes")
    # least-norm point on both planes
    A = np.vstack([n1, n2])
    return np.linalg.lstsq(A, -np.array([p1, p2]), rcond=None)[0]


def _orthogonal(u):
    trial = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    w = trial - np.dot(trial, u) * u
    return w / np.linalg.norm(w)


def _normal_at(e, x):
    kind, c, p = e
    if kind == "sphere":
        return (x - c) / p
    return c


def dihedral_angle(w1, w2, gamma1=None, gamma2=None, tol=None):
    """Cosine of the angle between two intersecting walls.

    ``cos_oracle`` comes from the unit normals at a point of the intersection.
    ``cos_printed`` evaluates the closed forms as commonly stated: the
    two-ball-wall expression ``2|1 - <P, P1>| / (2 R1^2 R^2)`` and, for a ball
    wall against the equatorial plane, ``| |b|^2+|d|^2-|a|^2-|c|^2 | / (2 sqrt(|g|^2 - 2))``.
    ``cos_standard`` is the textbook ``|1 - <P, P1>| / (R R1)`` for two ball walls.
    Agreement between the printed and oracle values is reported, not enforced.
    """
    tol = get_tol(tol)
    e1, e2 = w1.embed(), w2.embed()
    x = _intersection_point(e1, e2, max(tol, 1e-12))
    cos_oracle = float(np.dot(_normal_at(e1, x), _normal_at(e2, x)))
    cos_printed = cos_standard = None
    if isinstance(w1, BallSphere) and isinstance(w2, BallSphere):
        ip = w1.center.dot(w2.center)
        cos_printed = 2 * abs(1 - ip) / (2 * w1.radius ** 2 * w2.radius ** 2)
        cos_standard = abs(1 - ip) / (w1.radius * w2.radius)
    elif isinstance(w1, BallSphere) and isinstance(w2, EquatorialPlane) and gamma1 is not None:
        a, b, c, d = gamma1.entries()
        h = abs(b) ** 2 + abs(d) ** 2 - abs(a) ** 2 - abs(c) ** 2
        cos_printed = abs(h) / (2 * math.sqrt(gamma1.norm2() - 2))
    elif isinstance(w2, BallSphere) and isinstance(w1, EquatorialPlane) and gamma2 is not None:
        return dihedral_angle(w2, w1, gamma1=gamma2, tol=tol)
    return DihedralAngle(cos_oracle, cos_printed, cos_standard, tuple(float(t) for t in x))


def _halton(n, dim, seed):
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    return sampler.random(n)


def sample_half_space_wall(wall, n, seed=0, window=3.0, height=3.0, max_polar=0.97):
    """Low-discrepancy points on a half-space wall as arrays ``(z, r)``.

    Spheres are sampled by polar angle up to ``max_polar * pi/2`` so that no
    point sits on the boundary plane; planes over ``|t| <= window``,
    ``0 < r <= height``.
    """
    u = _halton(n, 2, seed)
    if isinstance(wall, Sphere):
        theta = 2 * math.pi * u[:, 0]
        phi = max_polar * (math.pi / 2) * np.sqrt(u[:, 1])
        z = wall.center + wall.radius * np.sin(phi) * np.exp(1j * theta)
        r = wall.radius * np.cos(phi)
        return z, r
    foot = -wall.offset * wall.normal
    t = window * (2 * u[:, 0] - 1)
    z = foot + t * (1j * wall.normal)
    r = height * (0.02 + 0.98 * u[:, 1])
    return z, r


def sample_ball_wall(wall, n, seed=0, fraction=0.9):
    """Points of a ball wall strictly inside the ball, as an ``(n, 3)`` array.

    The part inside the ball is the cap of directions within
    ``arccos(R/|P|)`` of ``-P``; ``fraction`` keeps samples off the unit sphere.
    """
    u = _halton(n, 2, seed)
    c = wall.vector()
    axis = -c / np.linalg.norm(c)
    cap = math.acos(wall.radius / np.linalg.norm(c)) * fraction
    e1 = _orthogonal(axis)
    e2 = np.cross(axis, e1)
    alpha = cap * np.sqrt(u[:, 0])
    theta = 2 * math.pi * u[:, 1]
    dirs = (np.cos(alpha)[:, None] * axis
            + (np.sin(alpha) * np.cos(theta))[:, None] * e1
            + (np.sin(alpha) * np.sin(theta))[:, None] * e2)
    return c + wall.radius * dirs


def half_space_points(z, r):
    return [HalfSpacePoint(zz, rr) for zz, rr in zip(np.atleast_1d(z), np.atleast_1d(r))]


def ball_points(arr):
    return [BallPoint(Quaternion(x, y, h, 0.0)) for x, y, h in np.atleast_2d(arr)]


def ball_wall_to_half_space(wall):
    """Image of a ball wall under the inverse model map (checked against the bisector formulas)."""
    from .models import eta0_inv  # local import keeps the module graph flat

    pts = sample_ball_wall(wall, 3, seed=1, fraction=0.5)
    images = [eta0_inv(p) for p in ball_points(pts)]
    # three points determine a hemisphere centred on C, or a vertical plane
    (z1, r1), (z2, r2), (z3, r3) = [(p.z, p.r) for p in images]
    A = np.array([[2 * (z2.real - z1.real), 2 * (z2.imag - z1.imag)],
                  [2 * (z3.real - z1.real), 2 * (z3.imag - z1.imag)]])
    rhs = np.array([abs(z2) ** 2 + r2 ** 2 - abs(z1) ** 2 - r1 ** 2,
                    abs(z3) ** 2 + r3 ** 2 - abs(z1) ** 2 - r1 ** 2])
    cx, cy = np.linalg.solve(A, rhs)
    center = complex(cx, cy)
    return Sphere(center, math.sqrt(abs(z1 - center) ** 2 + r1 ** 2))


def origin_side_image(gamma):
    """``psi(gamma^{-1})(0)`` by direct evaluation of the ball action."""
    return act_ball(psi(gamma.inverse()), BallPoint(Quaternion())).p


def cusp_point_in_ball(gamma):
    """``eta0`` of the isometric-sphere centre ``-d/c`` (a point of the unit sphere)."""
    from .models import BoundaryPoint

    return eta0(BoundaryPoint(-gamma.d / gamma.c)).p
