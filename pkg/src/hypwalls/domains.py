"""Dirichlet domains centred at ``j`` built from a finite list of walls.

A domain is stored implicitly: an optional polygon ``f_infty`` (the cusp
prism), a list of bisector walls each tagged with the group elements that
produce it, and stabiliser walls cutting out a fundamental region for the
finite stabiliser of ``j``.  Membership, reduction and face detection are
predicates over that list.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.stats import qmc
import shapely

from ._config import get_tol
from .exceptions import DomainError, StepLimit
from .models import HalfSpacePoint, MoebiusMatrix, act_half_space, is_su2
from .walls import (
    Sphere,
    VerticalPlane,
    bisector_half_space,
    point_bisector,
    rho_gamma,
    walls_equal,
)

__all__ = [
    "GroupSpec",
    "DomainWall",
    "DomainSpec",
    "enumerate_group",
    "build_domain",
    "bianchi_group_spec",
    "bianchi_domain",
    "membership",
    "membership_array",
    "boundary_membership",
    "reduce_point",
    "faces",
    "face_keys",
    "face_stability",
    "df_check",
    "reflection_angle_check",
    "apply_symmetry",
    "volume_bounds",
    "ball_radius_bound",
]

STABILIZER_BASE = HalfSpacePoint(0j, 2.0)
INSIDE, BOUNDARY, OUTSIDE = "inside", "boundary", "outside"


@dataclass
class GroupSpec:
    """Generators plus an optional generating set for the stabiliser of ``j``.

    ``fuchsian`` is inferred from the entries when left as ``None``.
    """

    generators: list
    stabilizer: list = field(default_factory=list)
    fuchsian: bool = None
    names: list = None

    def __post_init__(self):
        self.generators = [g if isinstance(g, MoebiusMatrix) else MoebiusMatrix.from_array(g) for g in self.generators]
        if not self.generators:
            raise DomainError("a group needs at least one generator")
        real = all(abs(e.imag) <= 1e-12 for g in self.generators for e in g.entries())
        if self.fuchsian is None:
            self.fuchsian = real
        elif self.fuchsian and not real:
            raise DomainError("fuchsian groups need real entries")
        if self.names is None:
            self.names = [chr(ord("a") + i) for i in range(len(self.generators))]

    def letters(self):
        out = []
        for name, g in zip(self.names, self.generators):
            out.append((name, g))
            out.append((name.upper(), g.inverse()))
        return out

    def evaluate(self, word):
        table = dict(self.letters())
        result = MoebiusMatrix.identity()
        for ch in word:
            result = result @ table[ch]
        return result


def _proj_key(g, digits=8):
    g = g.canonical(1e-7)
    return tuple((round(e.real, digits) + 0.0, round(e.imag, digits) + 0.0) for e in g.entries())


def _is_inverse_letter(x, y):
    return x != y and x.lower() == y.lower()


def enumerate_group(spec, max_word_len, norm_bound=math.inf):
    """Distinct elements given by reduced words up to ``max_word_len``.

    Returns ``(matrix, word)`` pairs sorted by norm^2 then word; each element
    appears once up to sign, with its first word in shortlex order.
    """
    if max_word_len < 1:
        raise DomainError("max_word_len must be at least 1")
    letters = spec.letters()
    ident = MoebiusMatrix.identity()
    seen = {_proj_key(ident): (ident, "")}
    frontier = [(ident, "")]
    for _ in range(max_word_len):
        nxt = []
        for g, word in frontier:
            for ch, m in letters:
                if word and _is_inverse_letter(word[-1], ch):
                    continue
                h = g @ m
                key = _proj_key(h)
                if key in seen:
                    continue
                seen[key] = (h, word + ch)
                nxt.append((h, word + ch))
        frontier = nxt
    out = [(g, w) for g, w in seen.values() if g.norm2() <= norm_bound + 1e-9]
    out.sort(key=lambda p: (round(p[0].norm2(), 9), p[1]))
    return out


@dataclass
class DomainWall:
    """A wall with the side kept (``sign * value >= 0``) and the elements that produce it."""

    wall: object
    gammas: list
    kind: str = "bisector"
    sign: float = 1.0

    @property
    def gamma(self):
        return self.gammas[0][0]

    @property
    def word(self):
        return self.gammas[0][1]

    def keep_value(self, z, r):
        return self.sign * self.wall.value(z, r)

    def to_json(self):
        out = dict(self.wall.to_json())
        out["kind_of_wall"] = self.kind
        out["elements"] = [
            {"word": w, "matrix": [[e.real, e.imag] for e in g.entries()]} for g, w in self.gammas
        ]
        return out


def _sign_at_j(wall):
    v = float(wall.value(0j, 1.0))
    return 1.0 if v >= 0 else -1.0


class _WallTable:
    """Column-wise arrays for evaluating every wall at many points at once."""

    def __init__(self, walls):
        self.n = len(walls)
        self.is_sphere = np.array([isinstance(w.wall, Sphere) for w in walls], dtype=bool)
        self.center = np.array([w.wall.center if isinstance(w.wall, Sphere) else 0j for w in walls], dtype=complex)
        self.radius = np.array([w.wall.radius if isinstance(w.wall, Sphere) else 0.0 for w in walls])
        self.normal = np.array([w.wall.normal if isinstance(w.wall, VerticalPlane) else 0j for w in walls], dtype=complex)
        self.offset = np.array([w.wall.offset if isinstance(w.wall, VerticalPlane) else 0.0 for w in walls])
        self.sign = np.array([w.sign for w in walls])

    def values(self, z, r):
        """``(n_points, n_walls)`` matrix of kept-side values (negative means violated)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))[:, None]
        r = np.atleast_1d(np.asarray(r, dtype=float))[:, None]
        sph = np.hypot(np.abs(z - self.center[None, :]), r) - self.radius[None, :]
        pla = np.real(np.conj(self.normal[None, :]) * z) + self.offset[None, :]
        return np.where(self.is_sphere[None, :], sph, pla) * self.sign[None, :]


@dataclass
class DomainSpec:
    f_infty: object
    walls: list
    stabilizer: list
    tol: float = None
    fuchsian: bool = False
    top: float = 3.0

    def __post_init__(self):
        self.tol = get_tol(self.tol)
        self._table = _WallTable(self.walls)
        self._bisector_idx = np.array([i for i, w in enumerate(self.walls) if w.kind == "bisector"], dtype=int)

    @property
    def table(self):
        return self._table

    def to_json(self):
        return {
            "f_infty": None if self.f_infty is None else self.f_infty.to_json(),
            "walls": [w.to_json() for w in self.walls],
        }


def _finite_closure(elements, limit=120):
    group = {}
    for g in [MoebiusMatrix.identity()] + list(elements):
        group.setdefault(_proj_key(g), g)
    changed = True
    while changed:
        changed = False
        for g in list(group.values()):
            for h in list(group.values()):
                k = _proj_key(g @ h)
                if k not in group:
                    group[k] = g @ h
                    changed = True
        if len(group) > limit:
            raise DomainError("stabiliser generators do not generate a finite group")
    ident = _proj_key(MoebiusMatrix.identity())
    rest = sorted((k for k in group if k != ident))
    return [group[ident]] + [group[k] for k in rest]


def _companion_key(item):
    g, w = item
    w = w or ""
    return (round(g.norm2(), 9), len(w), w, _proj_key(g))


def _merge_walls(items, tol):
    merged = []
    index = {}
    for wall, g, w, kind in items:
        key = _wall_key(wall)
        slot = index.get(key)
        if slot is None:
            for i, dw in enumerate(merged):
                if dw.kind == kind and walls_equal(dw.wall, wall, 1e-7):
                    slot = i
                    break
        if slot is None:
            merged.append(DomainWall(wall, [(g, w)], kind, _sign_at_j(wall)))
            index[key] = len(merged) - 1
        else:
            merged[slot].gammas.append((g, w))
    for dw in merged:
        dw.gammas.sort(key=_companion_key)
    return merged


def _wall_key(wall):
    if isinstance(wall, Sphere):
        return ("s", round(wall.center.real, 7) + 0.0, round(wall.center.imag, 7) + 0.0, round(wall.radius, 7))
    n = wall.normal
    if n.real < -1e-12 or (abs(n.real) <= 1e-12 and n.imag < 0):
        n, off = -n, -wall.offset
    else:
        off = wall.offset
    return ("p", round(n.real, 7) + 0.0, round(n.imag, 7) + 0.0, round(off, 7) + 0.0)


def _stabilizer_walls(stab):
    items = []
    for g in stab[1:]:
        image = act_half_space(g, STABILIZER_BASE)
        if abs(image.z) <= 1e-12 and abs(image.r - STABILIZER_BASE.r) <= 1e-12:
            continue
        items.append((point_bisector(STABILIZER_BASE, image), g, None, "stabilizer"))
    return items


def build_domain(elements, stabilizer=(), f_infty=None, wall_filter=None, tol=None, fuchsian=False):
    """Domain from ``(matrix, word)`` pairs; elements fixing ``j`` go to the stabiliser."""
    tol = get_tol(tol)
    stab_gens = list(stabilizer)
    items = []
    for g, w in elements:
        if g.is_identity(1e-9):
            continue
        if is_su2(g, 1e-9):
            stab_gens.append(g)
            continue
        wall = bisector_half_space(g, 1e-9)
        if wall_filter is not None and not wall_filter(wall):
            continue
        items.append((wall, g, w, "bisector"))
    stab = _finite_closure(stab_gens)
    items.extend(_stabilizer_walls(stab))
    walls = _merge_walls(items, tol)
    top = 1.0 + max([dw.wall.radius for dw in walls if isinstance(dw.wall, Sphere)] or [1.0])
    return DomainSpec(f_infty, walls, stab, tol, fuchsian, top)


def bianchi_group_spec(d):
    from .bianchi import bianchi_generators, ring_ctx

    ctx = ring_ctx(d)
    return GroupSpec([m.to_moebius() for m in bianchi_generators(ctx)], fuchsian=False)


def _polygon_shape(poly):
    return shapely.Polygon([(v.real, v.imag) for v in poly.vertices])


def _meets_prism(wall, shape):
    if isinstance(wall, Sphere):
        disk = shapely.Point(wall.center.real, wall.center.imag)
        return shape.distance(disk) < wall.radius - 1e-12
    return _plane_segment(wall, shape) is not None


def bianchi_domain(d, norm_bound=20, tol=None):
    """Domain of the Bianchi group for ``d`` from all elements with ``||g||^2 <= norm_bound``.

    Walls are kept when they meet the prism over ``f_infty`` and do not lie
    inside the unit hemisphere.
    """
    from .bianchi import enumerate_bianchi, f_infty, ring_ctx

    ctx = ring_ctx(d)
    poly = f_infty(ctx)
    shape = _polygon_shape(poly)

    def keep(wall):
        if isinstance(wall, Sphere) and abs(wall.center) + wall.radius <= 1 + 1e-9:
            return False
        return _meets_prism(wall, shape)

    elements = [(m.to_moebius(), None) for m in enumerate_bianchi(ctx, norm_bound)]
    return build_domain(elements, f_infty=poly, wall_filter=keep, tol=tol)


# --- membership and reduction ---


def membership_array(z, r, dom, tol=None):
    """Vectorised membership: 1 inside, 0 boundary, -1 outside."""
    tol = dom.tol if tol is None else tol
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = np.atleast_1d(np.asarray(r, dtype=float))
    label = np.ones(z.shape, dtype=int)
    if dom.f_infty is not None:
        inside = dom.f_infty.contains(z, tol)
        label[~inside] = -1
        label[inside & dom.f_infty.on_boundary(z, tol)] = 0
    if dom.walls:
        vals = dom.table.values(z, r)
        worst = vals.min(axis=1)
        label[(worst < -tol)] = -1
        label[(np.abs(worst) <= tol) & (label == 1)] = 0
    return label


def membership(P, dom, tol=None):
    lab = int(membership_array(P.z, P.r, dom, tol)[0])
    return {1: INSIDE, 0: BOUNDARY, -1: OUTSIDE}[lab]


def boundary_membership(z, dom, tol=None):
    """Membership of a point of the boundary plane in the closure of the domain."""
    tol = dom.tol if tol is None else tol
    lab = int(membership_array(z, 0.0, dom, tol)[0])
    return {1: INSIDE, 0: BOUNDARY, -1: OUTSIDE}[lab]


def _polygon_violation(dom, z):
    if dom.f_infty is None:
        return 0.0
    worst = 0.0
    for normal, h in dom.f_infty.constraints:
        worst = max(worst, float(np.real(np.conj(normal) * z)) - h)
    return worst


def reduce_point(P, dom, spec=None, max_steps=1000, tol=None):
    """Move ``P`` into the domain by group elements.

    First every violated bisector wall is crossed by applying its element
    (each step strictly lowers the distance to ``j``); then the stabiliser of
    ``j`` is used to land in the prism and on the kept side of its walls.
    Returns the new point and the accumulated element.
    """
    tol = dom.tol if tol is None else tol
    acc = MoebiusMatrix.identity()
    Q = P
    idx = dom._bisector_idx
    stab_idx = np.array([i for i, w in enumerate(dom.walls) if w.kind != "bisector"], dtype=int)

    def rank(R):
        # stabiliser walls first; the prism sides left over are fixed by translations later
        worst = float(dom.table.values(R.z, R.r)[0][stab_idx].min()) if stab_idx.size else 0.0
        ok = worst >= -tol
        return (ok, 0.0 if ok else worst, -max(_polygon_violation(dom, R.z), 0.0))

    for _ in range(max_steps):
        vals = dom.table.values(Q.z, Q.r)[0] if dom.walls else np.zeros(0)
        if idx.size:
            k = idx[int(np.argmin(vals[idx]))]
            if vals[k] < -tol:
                g = dom.walls[k].gamma
                Q = act_half_space(g, Q)
                acc = g @ acc
                continue
        if (not vals.size or vals.min() >= -tol) and _polygon_violation(dom, Q.z) <= tol:
            return Q, acc
        best = None
        for g in dom.stabilizer:
            R = act_half_space(g, Q)
            key = rank(R)
            if best is None or key > best[0]:
                best = (key, g, R)
        _, g, R = best
        if g.is_identity(tol):
            raise StepLimit("no stabiliser element brings the point into the prism")
        Q, acc = R, g @ acc
    raise StepLimit(f"no reduction within {max_steps} steps; the wall list may be too short")


# --- faces ---


def _halton(n, dim, seed):
    return qmc.Halton(d=dim, scramble=True, seed=seed).random(n)


def _plane_segment(wall, shape, window=None):
    """Part of the plane's trace inside ``shape`` as two complex endpoints, or ``None``."""
    foot = -wall.offset * wall.normal
    direction = 1j * wall.normal
    span = 1e3 if window is None else window
    line = shapely.LineString([
        ((foot - span * direction).real, (foot - span * direction).imag),
        ((foot + span * direction).real, (foot + span * direction).imag),
    ])
    if shape is None:
        return (foot - span * direction, foot + span * direction)
    piece = line.intersection(shape.buffer(1e-9))
    if piece.is_empty or piece.length <= 1e-12:
        return None
    (x0, y0), (x1, y1) = piece.coords[0], piece.coords[-1]
    return complex(x0, y0), complex(x1, y1)


def _sample_wall(dom, dw, n, seed, shape, window):
    wall = dw.wall
    u = _halton(n, 2, seed)
    if dom.fuchsian:
        if isinstance(wall, Sphere):
            theta = math.pi * (0.005 + 0.99 * u[:, 0])
            return wall.center.real + wall.radius * np.cos(theta) + 0j, wall.radius * np.sin(theta)
        if abs(wall.normal.imag) > 1e-9:
            return np.array([], dtype=complex), np.array([])
        x = -wall.offset * wall.normal.real
        return np.full(n, x + 0j), dom.top * (0.005 + 0.995 * u[:, 0])
    if isinstance(wall, Sphere):
        if shape is not None:
            clip = shapely.Point(wall.center.real, wall.center.imag).buffer(wall.radius, 256).intersection(shape)
            if clip.is_empty:
                return np.array([], dtype=complex), np.array([])
            x0, y0, x1, y1 = clip.bounds
        else:
            x0, y0 = wall.center.real - wall.radius, wall.center.imag - wall.radius
            x1, y1 = wall.center.real + wall.radius, wall.center.imag + wall.radius
        z = (x0 + (x1 - x0) * u[:, 0]) + 1j * (y0 + (y1 - y0) * u[:, 1])
        rho2 = wall.radius ** 2 - np.abs(z - wall.center) ** 2
        keep = rho2 > 0
        return z[keep], np.sqrt(rho2[keep])
    seg = _plane_segment(wall, shape, window)
    if seg is None:
        return np.array([], dtype=complex), np.array([])
    a, b = seg
    z = a + (b - a) * u[:, 0]
    r = dom.top * (0.005 + 0.995 * u[:, 1])
    return z, r


def _wall_contributes(dom, i, n, seed, shape, window):
    z, r = _sample_wall(dom, dom.walls[i], n, seed + i, shape, window)
    if z.size == 0:
        return False
    tol = dom.tol
    ok = np.ones(z.shape, dtype=bool)
    if dom.f_infty is not None:
        ok &= dom.f_infty.contains(z, tol)
    vals = dom.table.values(z, r)
    vals[:, i] = 0.0
    ok &= vals.min(axis=1) >= -tol
    return bool(ok.any())


def faces(dom, samples_per_wall=200, seed=0, threads=1, window=3.0):
    """Walls with at least one sampled point in the closed domain, in wall order."""
    shape = None if dom.f_infty is None else _polygon_shape(dom.f_infty)
    idx = range(len(dom.walls))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(lambda i: _wall_contributes(dom, i, samples_per_wall, seed, shape, window), idx))
    else:
        flags = [_wall_contributes(dom, i, samples_per_wall, seed, shape, window) for i in idx]
    return [dw for dw, f in zip(dom.walls, flags) if f]


def face_keys(face_walls):
    return {_wall_key(dw.wall) for dw in face_walls}


def face_stability(build, bound, factor=1.5, samples_per_wall=200, seed=0):
    """Compare the faces found at ``bound`` and ``factor * bound``.

    ``build`` maps a bound to a domain.  Returns ``(stable, faces_small, faces_large)``.
    """
    small = faces(build(bound), samples_per_wall, seed)
    large = faces(build(bound * factor), samples_per_wall, seed)
    return face_keys(small) == face_keys(large), small, large


@dataclass
class DFReport:
    is_df: bool
    witnesses: list
    pairings: list

    def to_json(self):
        return {
            "is_df": self.is_df,
            "witnesses": [
                {"word": w, "matrix": [[e.real, e.imag] for e in g.entries()]} for g, w in self.witnesses
            ],
            "pairings": len(self.pairings),
        }


def df_check(spec, dom, face_walls=None, tol=None, samples_per_wall=200, seed=0):
    """A face passes when one of its elements has ``d = conj(a)``; the verdict needs every face to pass.

    Prism sides are paired by elements of the stabiliser of infinity, which
    always satisfy the criterion, so only listed walls are examined.
    """
    tol = get_tol(tol) * 1e3
    if face_walls is None:
        face_walls = faces(dom, samples_per_wall, seed)
    witnesses = []
    pairings = []
    for dw in face_walls:
        good = [(g, w) for g, w in dw.gammas if abs(g.d - g.a.conjugate()) <= tol]
        pairings.append(good[0] if good else dw.gammas[0])
        if not good:
            witnesses.append(dw.gammas[0])
    return DFReport(not witnesses, witnesses, pairings)


# --- angles in the slice of a Fuchsian domain ---


def _slice_curve(dw):
    w = dw.wall
    if isinstance(w, Sphere):
        return ("circle", w.center.real, w.radius)
    if abs(w.normal.imag) > 1e-9:
        return None
    return ("line", -w.offset * w.normal.real, None)


def _slice_intersections(c1, c2, tol):
    """Points ``(x, r)`` with ``r >= 0`` where the slices of two walls meet."""
    k1, a1, r1 = c1
    k2, a2, r2 = c2
    if k1 == "line" and k2 == "line":
        return []
    if k1 == "line":
        c1, c2 = c2, c1
        k1, a1, r1, k2, a2, r2 = k2, a2, r2, k1, a1, r1
    if k2 == "line":
        h2 = r1 ** 2 - (a2 - a1) ** 2
        if h2 < -tol:
            return []
        return [(a2, math.sqrt(max(h2, 0.0)))]
    dist = abs(a2 - a1)
    if dist <= tol:
        return []
    x = (dist ** 2 + r1 ** 2 - r2 ** 2) / (2 * dist)
    h2 = r1 ** 2 - x ** 2
    if h2 < -tol:
        return []
    return [(a1 + x * (1 if a2 > a1 else -1), math.sqrt(max(h2, 0.0)))]


def _inward_normal(dw, x, r):
    w = dw.wall
    if isinstance(w, Sphere):
        n = np.array([x - w.center.real, r]) / w.radius
    else:
        n = np.array([w.normal.real, 0.0])
    return dw.sign * n


@dataclass
class AngleReport:
    ok: bool
    angles: list


def reflection_angle_check(dom, face_walls=None, tol=1e-7):
    """Interior angles where pairs of face walls meet inside the closed domain.

    Each angle must be 0 (an ideal vertex) or ``pi/n`` for an integer ``n``.
    """
    if face_walls is None:
        face_walls = faces(dom)
    curves = [(dw, _slice_curve(dw)) for dw in face_walls]
    curves = [(dw, c) for dw, c in curves if c is not None]
    angles = []
    ok = True
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            (d1, c1), (d2, c2) = curves[i], curves[j]
            for x, r in _slice_intersections(c1, c2, 1e-12):
                if membership_array(complex(x, 0), max(r, 1e-300), dom, tol)[0] < 0:
                    continue
                if r <= 1e-9:
                    alpha = 0.0
                else:
                    n1, n2 = _inward_normal(d1, x, r), _inward_normal(d2, x, r)
                    cosv = float(np.clip(np.dot(n1, n2), -1.0, 1.0))
                    alpha = math.pi - math.acos(cosv)
                if alpha <= tol:
                    good = True
                else:
                    ratio = math.pi / alpha
                    good = abs(ratio - round(ratio)) <= 1e-6
                ok &= good
                angles.append({"walls": (d1.word, d2.word), "point": (x, r), "angle": alpha, "submultiple": good})
    return AngleReport(ok, angles)


# --- symmetries and volume bounds ---


def apply_symmetry(kind, gamma):
    a, b, c, d = gamma.entries()
    if kind == "tau":
        return gamma.conj_entries()
    if kind == "sigma":
        return MoebiusMatrix(a, 1j * b, -1j * c, d)
    if kind == "sigma2":
        return MoebiusMatrix(a, -b, -c, d)
    if kind == "delta":
        return MoebiusMatrix(d, -c, -b, a)
    if kind == "phi":
        return MoebiusMatrix(d.conjugate(), c.conjugate(), b.conjugate(), a.conjugate())
    raise ValueError(f"unknown symmetry {kind!r}")


def ball_radius_bound(min_normsq):
    """Radius of the Euclidean ball about the origin that no wall enters."""
    return 1 - rho_gamma(min_normsq)


def volume_bounds(min_normsq_nontrivial, stabilizer_fraction=1.0, mode="volume"):
    """Lower bound from the embedded hyperbolic ball of radius ``rho(0, r)``."""
    r = ball_radius_bound(min_normsq_nontrivial)
    rho0 = math.log((1 + r) / (1 - r))
    if mode == "volume":
        return math.pi * (math.sinh(2 * rho0) - 2 * rho0) * stabilizer_fraction
    if mode == "area":
        return 4 * math.pi * math.sinh(rho0 / 2) ** 2 * stabilizer_fraction
    raise ValueError("mode must be 'volume' or 'area'")
