"""Isometry types from the trace and, independently, from the ball-model walls."""

from dataclasses import dataclass, field
import cmath
import enum
import math

from ._config import get_tol
from .exceptions import IdentityHasAllPoints, Inconclusive, InSU2
from .models import (
    INFINITY,
    BoundaryPoint,
    SpherePoint,
    eta0,
    eta0_inv,
    is_su2,
)
from .walls import bisector_ball


class IsometryClass(str, enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class TraceClassification:
    cls: IsometryClass
    trace: complex
    marginal: bool = False


def classify_trace(gamma, tol=None):
    """Classify by ``tr(gamma)``; values inside the tolerance band around ``|tr| = 2`` are flagged marginal."""
    tol = get_tol(tol)
    tr = gamma.trace()
    if gamma.is_identity(tol):
        return TraceClassification(IsometryClass.IDENTITY, tr)
    if abs(tr.imag) > tol:
        return TraceClassification(IsometryClass.LOXODROMIC, tr)
    gap = abs(tr.real) - 2
    if abs(gap) <= tol:
        return TraceClassification(IsometryClass.PARABOLIC, tr, marginal=gap != 0 or tr.imag != 0)
    if gap < 0:
        return TraceClassification(IsometryClass.ELLIPTIC, tr)
    return TraceClassification(IsometryClass.HYPERBOLIC, tr)


def fixed_points(gamma, tol=None):
    """Boundary fixed points: the roots of ``c z^2 + (d - a) z - b``, plus infinity when ``c = 0``."""
    tol = get_tol(tol)
    if gamma.is_identity(tol):
        raise IdentityHasAllPoints("the identity fixes every point")
    a, b, c, d = gamma.entries()
    if abs(c) <= tol:
        if abs(d - a) <= tol:
            return [INFINITY]
        return [INFINITY, BoundaryPoint(b / (d - a))]
    disc = (a + d) ** 2 - 4
    if abs(disc) <= tol:
        return [BoundaryPoint((a - d) / (2 * c))]
    root = cmath.sqrt(disc)
    return sorted(
        (BoundaryPoint((a - d + s * root) / (2 * c)) for s in (1, -1)),
        key=lambda p: (p.z.real, p.z.imag),
    )


@dataclass(frozen=True)
class WallRelation:
    """Relative position of the ball walls of ``gamma`` and ``gamma^{-1}``.

    ``kind`` is ``tangent``, ``disjoint`` or ``circle``.  ``at`` is the
    tangency point (half-space boundary) and ``at_ball`` the same point on the
    unit sphere.  ``gap`` is ``|P1 - P2| - 2R``.
    """

    kind: str
    gap: float
    at: BoundaryPoint = None
    at_ball: object = None


def wall_relation(gamma, tol=None):
    tol = get_tol(tol)
    if is_su2(gamma, tol):
        raise InSU2("walls are undefined for elements fixing the base point")
    w1 = bisector_ball(gamma, tol)
    w2 = bisector_ball(gamma.inverse(), tol)
    diff = w2.center - w1.center
    dist = diff.norm()
    gap = dist - 2 * w1.radius
    scale = max(1.0, w1.radius)
    if abs(gap) <= tol * scale:
        point = w1.center + diff * (w1.radius / dist)
        on_sphere = SpherePoint(point)
        return WallRelation("tangent", gap, eta0_inv(on_sphere), on_sphere)
    if gap > 0:
        return WallRelation("disjoint", gap)
    return WallRelation("circle", gap)


@dataclass(frozen=True)
class GeometricClassification:
    cls: IsometryClass
    n_used: int
    relations: list = field(default_factory=list)


def classify_geometric(gamma, max_power=64, tol=None):
    """Classify by the walls of the powers of ``gamma``.

    A disjoint pair at the first power means hyperbolic when the trace is real
    and loxodromic otherwise; a disjoint pair that first appears at a higher
    power means loxodromic.  Tangency at every power means parabolic.  A
    circle at every power means elliptic provided the fixed points lie on the
    circle; otherwise the search is inconclusive.
    """
    tol = get_tol(tol)
    if gamma.is_identity(tol):
        return GeometricClassification(IsometryClass.IDENTITY, 0)
    if is_su2(gamma, tol):
        raise InSU2("walls are undefined for elements fixing the base point")
    kinds = []
    power = gamma
    for n in range(1, max_power + 1):
        if n > 1:
            power = power @ gamma
        if is_su2(power, tol) or power.norm2() - 2 <= max(1e3 * tol, 1e-6):
            # a power at or next to the stabiliser has no usable walls
            continue
        rel = wall_relation(power, tol)
        kinds.append(rel.kind)
        if rel.kind == "disjoint":
            if n == 1 and abs(gamma.trace().imag) <= tol:
                return GeometricClassification(IsometryClass.HYPERBOLIC, n, kinds)
            return GeometricClassification(IsometryClass.LOXODROMIC, n, kinds)
    if kinds and all(k == "tangent" for k in kinds):
        return GeometricClassification(IsometryClass.PARABOLIC, 1, kinds)
    if kinds and all(k == "circle" for k in kinds):
        # a loxodromic with a short power budget also shows circles; its
        # fixed points sit inside the walls rather than on the circle
        if fixed_point_on_wall_circle(gamma, tol) <= max(1e3 * tol, 1e-6):
            return GeometricClassification(IsometryClass.ELLIPTIC, 1, kinds)
    raise Inconclusive(f"no disjoint wall pair among the first {max_power} powers")


def rotation_cosine(gamma):
    """The readout ``Re(a^2)/|a|^2`` for elliptic elements fixing infinity, labelled as a cosine.

    For ``[[a, b], [0, 1/a]]`` with ``|a| = 1`` the rotation angle is ``2 arg a``,
    whose cosine is exactly this quantity.
    """
    a = gamma.a
    return (a * a).real / abs(a) ** 2


def fixed_points_ball(gamma, tol=None):
    return [eta0(p) for p in fixed_points(gamma, tol)]


def fixed_point_on_wall_circle(gamma, tol=None):
    """Largest deviation of the fixed points from the intersection circle of the two ball walls.

    A boundary point lies on the circle iff it lies on both spheres.
    """
    w1 = bisector_ball(gamma, tol)
    w2 = bisector_ball(gamma.inverse(), tol)
    worst = 0.0
    for sp in fixed_points_ball(gamma, tol):
        worst = max(worst, abs(w1.value(sp.p)), abs(w2.value(sp.p)))
    return worst


def chordal_distance(p, q):
    """Distance between two boundary points after mapping both to the unit sphere."""
    return (eta0(p).p - eta0(q).p).norm()


def trace_angle(gamma):
    """Rotation angle in ``[0, pi]`` of an elliptic element, from ``tr = 2 cos(theta/2)``."""
    t = max(-2.0, min(2.0, gamma.trace().real))
    return 2 * math.acos(abs(t) / 2)
